"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with -s to see them as they happen)."""

import time
from contextlib import contextmanager

from conftest import (
    close,
    mk_rng,
    rand_expr,
    rand_pattern,
    rand_target,
    rename_binders,
)

from exprtrie import oracle
from exprtrie.bench import (
    IMPLS,
    SUITES,
    BenchParams,
    make_corpus,
    node_census,
    oracle_union_sum,
    run_suite,
)
from exprtrie.expr import Var, expr_size, parse_expr
from exprtrie.exprmap import empty_expr_list_map, empty_expr_map, insert_closed
from exprtrie.matching import PatExpr, canon_pat_keys
from exprtrie.oracle import AssocMap
from exprtrie.patmap import EmptyMSEM, MultiMSEM, PatMap, SingleMSEM, empty_mexpr_map
from exprtrie.triemap import EmptySEM, MultiSEM, SingleSEM


@contextmanager
def criterion(n, desc):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"criterion {n:2d}: FAIL  {desc}", flush=True)
        raise
    elapsed = time.monotonic() - started
    print(f"criterion {n:2d}: PASS  {desc} ({elapsed:.1f}s)", flush=True)


def P(text):
    return parse_expr(text)


def test_criterion_1_finite_map_laws():
    with criterion(1, "finite-map laws, 10000 randomized trials"):
        started = time.monotonic()
        rng = mk_rng(9001)
        for trial in range(10000):
            use_list = trial % 3 == 2
            if use_list:
                pool = [tuple(close(rand_expr(rng, 7)) for _ in range(rng.below(3)))
                        for _ in range(5)]
                empty = empty_expr_list_map()
            else:
                pool = [close(rand_expr(rng, 15)) for _ in range(5)]
                empty = empty_expr_map()
            m = empty
            for _ in range(rng.below(6)):
                m = m.insert(pool[rng.below(len(pool))], rng.below(100))
            k1 = pool[rng.below(len(pool))]
            k2 = pool[rng.below(len(pool))]
            pick = rng.below(3)
            if pick == 0:
                v = rng.below(100)
                tf = lambda _: v
            elif pick == 1:
                tf = lambda _: None
            else:
                tf = lambda old: None if old is None else old + 1
            assert empty.lookup(k1) is None
            assert m.alter(k1, tf).lookup(k1) == tf(m.lookup(k1))
            if k1 != k2:
                assert m.alter(k2, tf).lookup(k1) == m.lookup(k1)
        assert time.monotonic() - started < 30


def test_criterion_2_exact_map_oracle_equivalence():
    with criterion(2, "1000 random 100-op sequences agree with the assoc-list oracle"):
        started = time.monotonic()
        rng = mk_rng(9002)
        for _ in range(1000):
            pool = [rand_expr(rng, 15) for _ in range(10)]
            m = empty_expr_map()
            om = AssocMap()
            for _ in range(100):
                key = close(pool[rng.below(len(pool))])
                op = rng.below(3)
                if op == 0:
                    v = rng.below(1000)
                    m, om = m.insert(key, v), om.insert(key, v)
                elif op == 1:
                    m, om = m.delete(key), om.delete(key)
                probe = close(pool[rng.below(len(pool))])
                assert m.lookup(probe) == om.lookup(probe)
            assert m.size() == om.size()
        assert time.monotonic() - started < 60


def test_criterion_3_alpha_invariance():
    with criterion(3, "1000 binder renamings leave lookup results unchanged"):
        rng = mk_rng(9003)
        exprs = [rand_expr(rng, 14) for _ in range(1500)]
        m = empty_expr_map()
        for i, e in enumerate(exprs[:500]):
            m = insert_closed(e, i, m)
        for _ in range(1000):
            e = exprs[rng.below(len(exprs))]
            renamed = rename_binders(e, prefix=f"q{rng.below(100)}_")
            assert m.lookup(close(e)) == m.lookup(close(renamed))


def test_criterion_4_matching_oracle_equivalence():
    with criterion(4, "matching store agrees with one-at-a-time matching, 500x500"):
        started = time.monotonic()
        rng = mk_rng(9004)
        store = []
        canon_seen = []
        pm = PatMap.empty()
        while len(store) < 500:
            pvars, body = rand_pattern(rng, max_size=12, max_vars=3)
            canon = PatExpr.make(pvars, body)
            if any(canon == c for c in canon_seen):
                continue
            canon_seen.append(canon)
            value = len(store)
            store.append(((pvars, body), value))
            pm = pm.insert(pvars, body, value)
        assert pm.size() == 500
        for _ in range(500):
            target = rand_target(rng, [entry for entry, _ in store], max_size=12)
            got = sorted(pm.lookup(target), key=oracle.canonical_result_key)
            want = oracle.match_all(store, target)
            assert got == want
        assert time.monotonic() - started < 120


def test_criterion_5_worked_examples():
    with criterion(5, "worked examples reproduce exactly"):
        # canonical numbering table
        assert canon_pat_keys(
            ["a", "b"], P("(app (app (app (var f) (var a)) (var b)) (var a))")) \
            == {"a": 1, "b": 2}
        assert canon_pat_keys(
            ["x", "g"], P("(app (var f) (app (var g) (var x)))")) \
            == {"g": 1, "x": 2}

        # repeated pattern variable: equal subtrees match, unequal do not
        pm = PatMap.empty().insert(
            ["x"], P("(app (app (var f) (var x)) (var x))"), "rep")
        gv = P("(app (var g) (var v))")
        hit = pm.lookup(P("(app (app (var f) (app (var g) (var v))) (app (var g) (var v)))"))
        assert hit == [([("x", gv)], "rep")]
        assert pm.lookup(P("(app (app (var f) (app (var g) (var v))) (var v))")) == []

        # map/map fusion shape binds all three variables
        fusion = PatMap.empty().insert(
            ["f", "g", "xs"],
            P("(app (app (var map) (var f)) (app (app (var map) (var g)) (var xs)))"),
            "fuse")
        [(subst, label)] = fusion.lookup(
            P("(app (app (var map) (var double)) "
              "(app (app (var map) (var square)) (var nums)))"))
        assert label == "fuse"
        assert subst == [("f", Var("double")), ("g", Var("square")), ("xs", Var("nums"))]

        # a binder may not escape: reject, but accept a free body
        esc = PatMap.empty().insert(["p"], P("(lam x (var p))"), "rule")
        assert esc.lookup(P("(lam y (var y))")) == []
        assert esc.lookup(P("(lam y (var c))")) == [([("p", Var("c"))], "rule")]

        # two stored patterns, one matching, client-side names recovered
        pm2 = (PatMap.empty()
               .insert(["p"], P("(app (app (var f) (var p)) (var T))"), "v1")
               .insert(["q"], P("(app (app (var f) (var q)) (var F))"), "v2"))
        assert pm2.lookup(P("(app (app (var f) (var e)) (var T))")) \
            == [([("p", Var("e"))], "v1")]

        # a quantified variable that never occurs stays unbound
        pm3 = PatMap.empty().insert(["p", "q"], P("(app (var f) (var p))"), "v")
        assert pm3.lookup(P("(app (var f) (var a))")) == [([("p", Var("a"))], "v")]


def test_criterion_6_wrapper_transition_tables():
    with criterion(6, "singleton wrapper transitions, exact and matching, all cells"):
        k1 = close(P("(var k1)"))
        k1_alias = close(P("(var k1)"))
        k2 = close(P("(app (var f) (var k2))"))
        k3 = close(P("(lam x (var x))"))
        empty = empty_expr_map()
        to_none = lambda _: None
        to_seven = lambda _: 7

        # empty shape
        assert isinstance(empty.alter(k1, to_none), EmptySEM)
        single = empty.alter(k1, to_seven)
        assert isinstance(single, SingleSEM)
        assert single.lookup(k1_alias) == 7

        # singleton shape, same key
        assert isinstance(single.alter(k1_alias, to_none), EmptySEM)
        upd = single.alter(k1_alias, lambda v: v + 1)
        assert isinstance(upd, SingleSEM) and upd.lookup(k1) == 8

        # singleton shape, distinct key
        assert single.alter(k2, to_none) is single
        multi = single.alter(k2, lambda _: 9)
        assert isinstance(multi, MultiSEM)
        assert multi.lookup(k1) == 7 and multi.lookup(k2) == 9

        # multi shape delegates for every transformer/key combination
        assert multi.alter(k3, to_none).size() == 2
        three = multi.alter(k3, lambda _: 11)
        assert isinstance(three, MultiSEM) and three.lookup(k3) == 11
        gone = multi.alter(k1, to_none)
        assert isinstance(gone, MultiSEM)
        assert gone.lookup(k1) is None and gone.lookup(k2) == 9
        bumped = multi.alter(k1, lambda v: v + 10)
        assert bumped.lookup(k1) == 17
        # fully drained: still the multi shape, no live entries
        drained = multi.alter(k1, to_none).alter(k2, to_none)
        assert isinstance(drained, MultiSEM) and drained.size() == 0

        # matching wrapper mirrors every cell, with pattern equality deciding
        p1 = PatExpr.make(["x"], P("(app (var f) (var x))"))
        p1_alias = PatExpr.make(["y"], P("(app (var f) (var y))"))
        p2 = PatExpr.make([], P("(var c)"))
        p3 = PatExpr.make(["x", "y"], P("(app (var x) (var y))"))
        membery = empty_mexpr_map()
        assert isinstance(membery.alter_pat(p1, to_none), EmptyMSEM)
        msingle = membery.alter_pat(p1, to_seven)
        assert isinstance(msingle, SingleMSEM)
        assert isinstance(msingle.alter_pat(p1_alias, to_none), EmptyMSEM)
        mupd = msingle.alter_pat(p1_alias, lambda v: v + 1)
        assert isinstance(mupd, SingleMSEM) and mupd.value == 8
        assert msingle.alter_pat(p2, to_none) is msingle
        mmulti = msingle.alter_pat(p2, lambda _: 9)
        assert isinstance(mmulti, MultiMSEM)
        assert isinstance(mmulti.alter_pat(p3, to_none), MultiMSEM)
        assert mmulti.alter_pat(p3, to_none).foldr(lambda _, n: n + 1, 0) == 2
        m3 = mmulti.alter_pat(p3, lambda _: 11)
        assert m3.foldr(lambda _, n: n + 1, 0) == 3
        mdrained = mmulti.alter_pat(p1_alias, to_none).alter_pat(p2, to_none)
        assert isinstance(mdrained, MultiMSEM)
        assert mdrained.foldr(lambda _, n: n + 1, 0) == 0


def test_criterion_7_prefix_lookup_beats_ordered_map():
    with criterion(7, "shared-prefix lookup: trie at most half the ordered map's time"):
        params = BenchParams(map_size=10000, expr_size=100, seed=42,
                             reps=5, prefix_len=100)
        corpus = make_corpus(params.map_size, params.expr_size, params.seed,
                             "lam", params.prefix_len)
        tm_row, tm_fp = run_suite("lookup_lam", "tm", params, corpus)
        om_row, om_fp = run_suite("lookup_lam", "om", params, corpus)
        assert tm_fp == om_fp
        print(f"  lookup_lam total: tm={tm_row.total_ns/1e9:.3f}s "
              f"om={om_row.total_ns/1e9:.3f}s "
              f"ratio={tm_row.total_ns/om_row.total_ns:.2f}", flush=True)
        assert tm_row.total_ns <= 0.5 * om_row.total_ns


def test_criterion_8_lookup_scales_with_map_size():
    with criterion(8, "per-lookup cost near-constant from M=1000 to M=10000"):
        small = BenchParams(map_size=1000, expr_size=100, seed=42, reps=5)
        large = BenchParams(map_size=10000, expr_size=100, seed=42, reps=5)
        row_small, _ = run_suite("lookup", "tm", small)
        row_large, _ = run_suite("lookup", "tm", large)
        print(f"  per-op: M=1000 {row_small.per_op_ns}ns, "
              f"M=10000 {row_large.per_op_ns}ns", flush=True)
        assert row_large.per_op_ns <= 2.0 * row_small.per_op_ns


def test_criterion_9_shared_prefix_stored_once():
    with criterion(9, "node census of a shared-prefix corpus below 20% of key sizes"):
        corpus = make_corpus(1000, 20, 42, "app1", 100)
        m = empty_expr_map()
        total_constructors = 0
        for i, e in enumerate(corpus.exprs):
            m = insert_closed(e, i, m)
            total_constructors += expr_size(e)
        census = node_census(m)
        print(f"  census={census} keys-total={total_constructors} "
              f"ratio={census/total_constructors:.3f}", flush=True)
        assert census <= 0.20 * total_constructors
        # the census is deterministic
        assert census == node_census(m)


def test_criterion_10_fold_sums_match_oracle_everywhere():
    with criterion(10, "fold sums equal the oracle on every suite and impl"):
        params = BenchParams(map_size=200, expr_size=12, seed=5, reps=3,
                             prefix_len=20)
        expected_sum = params.map_size * (params.map_size + 1) // 2
        # every prefix shape, every implementation: the built map folds to
        # the oracle's total
        for kind in ("none", "lam", "app1", "app2"):
            corpus = make_corpus(params.map_size, params.expr_size, params.seed,
                                 kind, params.prefix_len)
            pairs = [(e, i + 1) for i, e in enumerate(corpus.exprs)]
            for make in IMPLS.values():
                impl = make()
                impl.build(pairs)
                assert impl.fold_sum() == expected_sum
        # the union suite combines overlapping halves; its fold must equal
        # the association-list merge
        union_corpus = make_corpus(params.map_size, params.expr_size, params.seed,
                                   "none", params.prefix_len)
        want_union = oracle_union_sum(union_corpus)
        for impl in IMPLS:
            _, fp = run_suite("union", impl, params, union_corpus)
            assert fp[1] == want_union
        # and every suite agrees across implementations
        for suite in SUITES:
            fps = []
            for impl in IMPLS:
                _, fp = run_suite(suite, impl, params)
                fps.append(fp)
            assert fps[0] == fps[1] == fps[2]
