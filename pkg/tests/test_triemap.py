from conftest import close, mk_rng, rand_expr

from exprtrie.exprmap import empty_expr_list_map, empty_expr_map
from exprtrie.triemap import EmptySEM, MultiSEM, SingleSEM


def k(rng=None, text=None):
    from exprtrie.expr import parse_expr
    return close(parse_expr(text))


K1 = lambda: k(text="(var k1)")
K2 = lambda: k(text="(app (var f) (var k2))")


def test_insert_delete_roundtrip():
    m = empty_expr_map()
    key = K1()
    m1 = m.insert(key, 7)
    assert m1.lookup(key) == 7
    assert m1.delete(key).lookup(key) is None
    assert m1.insert(key, 9).lookup(key) == 9


def test_semap_lookup_shapes():
    empty = empty_expr_map()
    assert empty.lookup(K1()) is None
    single = empty.insert(K1(), 7)
    assert isinstance(single, SingleSEM)
    assert single.lookup(K1()) == 7
    assert single.lookup(K2()) is None


def test_semap_alter_transitions():
    empty = empty_expr_map()
    # empty stays empty when the transformer declines
    assert isinstance(empty.alter(K1(), lambda v: None), EmptySEM)
    single = empty.alter(K1(), lambda v: 7)
    assert isinstance(single, SingleSEM)
    # same key: modify or drop
    assert isinstance(single.alter(K1(), lambda v: None), EmptySEM)
    assert single.alter(K1(), lambda v: v + 1).lookup(K1()) == 8
    # different key: no-op or promote to multi
    assert single.alter(K2(), lambda v: None) is single
    multi = single.alter(K2(), lambda v: 9)
    assert isinstance(multi, MultiSEM)
    assert multi.lookup(K1()) == 7
    assert multi.lookup(K2()) == 9
    # multi delegates and never shrinks
    drained = multi.delete(K1()).delete(K2())
    assert isinstance(drained, MultiSEM)
    assert drained.lookup(K1()) is None
    assert drained.size() == 0


def test_semap_fold_union_map_filter():
    m = empty_expr_map().insert(K1(), 1).insert(K2(), 2)
    assert sorted(m.foldr(lambda v, acc: [v, *acc], [])) == [1, 2]
    a = empty_expr_map().insert(K1(), 1)
    b = empty_expr_map().insert(K2(), 2)
    u = a.union_with(lambda x, y: x + y, b)
    assert u.size() == 2
    collide = a.union_with(lambda x, y: x + y, empty_expr_map().insert(K1(), 2))
    assert collide.lookup(K1()) == 3
    assert m.map_values(lambda v: v * 10).lookup(K2()) == 20
    filtered = m.filter_values(lambda v: v == 1)
    assert filtered.lookup(K1()) == 1
    assert filtered.lookup(K2()) is None
    # dropping a singleton's value renormalizes to the empty shape
    assert isinstance(a.filter_values(lambda v: False), EmptySEM)


def test_union_identity_and_argument_order():
    m = empty_expr_map().insert(K1(), 5)
    assert empty_expr_map().union_with(lambda x, y: x, m) is m
    assert m.union_with(lambda x, y: x, empty_expr_map()) is m
    left = empty_expr_map().insert(K1(), "L")
    right = empty_expr_map().insert(K1(), "R")
    assert left.union_with(lambda x, y: (x, y), right).lookup(K1()) == ("L", "R")
    # same collision convention once both sides are multi
    left2 = left.insert(K2(), 1)
    right2 = right.insert(K2(), 2)
    u = left2.union_with(lambda x, y: (x, y), right2)
    assert u.lookup(K1()) == ("L", "R")
    assert u.lookup(K2()) == (1, 2)


def test_list_map_basics():
    lm = empty_expr_list_map()
    nil_key = ()
    lm1 = lm.insert(nil_key, "v")
    assert lm1.lookup(()) == "v"
    pair = (K1(), K2())
    lm2 = lm1.insert(pair, 3)
    assert lm2.lookup(pair) == 3
    # a prefix of a key is a different key
    assert lm2.lookup((K1(),)) is None
    assert lm2.lookup(()) == "v"
    assert lm2.size() == 2


def test_list_map_against_assoc_oracle():
    rng = mk_rng(210)
    keys = []
    for _ in range(12):
        keys.append(tuple(close(rand_expr(rng, 5)) for _ in range(rng.below(3))))
    lm = empty_expr_list_map()
    oracle: list = []
    for step in range(500):
        key = keys[rng.below(len(keys))]
        op = rng.below(3)
        if op == 0:
            v = rng.below(50)
            lm = lm.insert(key, v)
            oracle = [(k2, v2) for k2, v2 in oracle if k2 != key] + [(key, v)]
        elif op == 1:
            lm = lm.delete(key)
            oracle = [(k2, v2) for k2, v2 in oracle if k2 != key]
        probe = keys[rng.below(len(keys))]
        want = next((v2 for k2, v2 in oracle if k2 == probe), None)
        assert lm.lookup(probe) == want
    assert lm.size() == len(oracle)


def _random_tf(rng):
    choice = rng.below(3)
    if choice == 0:
        v = rng.below(100)
        return lambda _: v
    if choice == 1:
        return lambda _: None
    return lambda old: None if old is None else old + 1


def test_laws_on_expr_and_list_maps():
    rng = mk_rng(211)
    for trial in range(1000):
        use_list = trial % 3 == 2
        if use_list:
            pool = [tuple(close(rand_expr(rng, 5)) for _ in range(rng.below(3)))
                    for _ in range(6)]
            m = empty_expr_list_map()
        else:
            pool = [close(rand_expr(rng, 8)) for _ in range(6)]
            m = empty_expr_map()
        for _ in range(rng.below(6)):
            m = m.insert(pool[rng.below(len(pool))], rng.below(100))
        k1 = pool[rng.below(len(pool))]
        k2 = pool[rng.below(len(pool))]
        tf = _random_tf(rng)
        # law 1: nothing in the empty map
        empty = empty_expr_list_map() if use_list else empty_expr_map()
        assert empty.lookup(k1) is None
        # law 2: alter is visible at its key
        assert m.alter(k1, tf).lookup(k1) == tf(m.lookup(k1))
        # law 3: alter is invisible elsewhere
        if k1 != k2:
            assert m.alter(k2, tf).lookup(k1) == m.lookup(k1)


def test_list_map_fold_union_map_filter():
    k_short = (K1(),)
    k_long = (K1(), K2())
    a = empty_expr_list_map().insert((), 1).insert(k_short, 2)
    b = empty_expr_list_map().insert(k_short, 10).insert(k_long, 3)
    u = a.union_with(lambda x, y: x + y, b)
    assert u.lookup(()) == 1
    assert u.lookup(k_short) == 12
    assert u.lookup(k_long) == 3
    assert u.foldr(lambda v, acc: v + acc, 0) == 16
    assert u.map_values(lambda v: -v).lookup(k_short) == -12
    f = u.filter_values(lambda v: v > 2)
    assert f.lookup(()) is None and f.lookup(k_short) == 12 and f.lookup(k_long) == 3
