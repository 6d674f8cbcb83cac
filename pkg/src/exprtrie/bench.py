"""Benchmark harness: deterministic corpora, baseline maps, suites, census.

Three map implementations are driven through the same workloads:

  tm  the expression trie from this package
  om  a balanced ordered map (AVL) using the alpha-aware total order
  hm  a hash map using the alpha-aware hash with equality on collision

Corpora are generated from a fixed seed via splitmix64, so identical
parameters give identical expressions on every platform.  Timing suites
report the minimum total time across repetitions; space suites report a
node census instead of bytes, counting trie nodes, leaf-map entries and
stored key constructors.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .expr import (
    AlphaExpr,
    App,
    Expr,
    Lam,
    Var,
    alpha_compare,
    expr_size,
)
from .exprmap import ExprMapInner, empty_expr_map, insert_closed, lookup_closed
from .oracle import AssocMap
from .patmap import EmptyMSEM, MExprMapInner, MultiMSEM, PatMap, SingleMSEM
from .triemap import EmptySEM, ListMapInner, SingleSEM

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: 64-bit state, identical stream for identical seeds."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def choice(self, xs):
        return xs[self.below(len(xs))]


DEFAULT_FREE_POOL = ("f", "g", "h", "k", "s", "t", "u", "w", "y", "z")


def gen_expr(rng: SplitMix64, target_size: int, free_pool=DEFAULT_FREE_POOL,
             bound_stack: tuple = ()) -> Expr:
    """A deterministic expression of exactly `target_size` constructors.

    Leaves draw a bound variable half the time when any is in scope,
    otherwise a free one.  Internal nodes are applications two thirds of the
    time (splitting the remaining size uniformly) and lambdas otherwise,
    each lambda binding a fresh name for its depth.
    """
    if target_size <= 1:
        if bound_stack and rng.below(2) == 0:
            return Var(rng.choice(bound_stack))
        return Var(rng.choice(free_pool))
    if target_size == 2 or rng.below(3) == 2:
        binder = f"b{len(bound_stack) + 1}"
        return Lam(binder, gen_expr(rng, target_size - 1, free_pool, bound_stack + (binder,)))
    left = 1 + rng.below(target_size - 2)
    right = target_size - 1 - left
    fun = gen_expr(rng, left, free_pool, bound_stack)
    arg = gen_expr(rng, right, free_pool, bound_stack)
    return App(fun, arg)


PREFIX_KINDS = ("none", "lam", "app1", "app2")


def wrap_prefix(e: Expr, kind: str, layers: int) -> Expr:
    """Wrap shared structure around an expression; "$" is reserved for it."""
    if kind == "none":
        return e
    for _ in range(layers):
        if kind == "lam":
            e = Lam("$", e)
        elif kind == "app1":
            e = App(Var("$"), e)
        elif kind == "app2":
            e = App(e, Var("$"))
        else:
            raise ValueError(f"unknown prefix kind {kind!r}")
    return e


@dataclass(frozen=True)
class Corpus:
    exprs: list
    map_size: int
    expr_size: int
    seed: int
    prefix_kind: str
    prefix_len: int


def make_corpus(map_size: int, size: int, seed: int, prefix_kind: str = "none",
                prefix_len: int = 100) -> Corpus:
    """`map_size` expressions of `size` constructors each, distinct as keys.

    Deduplication happens before any prefix is added, so the count is of
    distinct key classes; duplicates are regenerated.
    """
    if prefix_kind not in PREFIX_KINDS:
        raise ValueError(f"unknown prefix kind {prefix_kind!r}")
    rng = SplitMix64(seed)
    seen: set = set()
    exprs: list = []
    while len(exprs) < map_size:
        e = gen_expr(rng, size)
        key = AlphaExpr.closed(e)
        if key in seen:
            continue
        seen.add(key)
        exprs.append(wrap_prefix(e, prefix_kind, prefix_len))
    return Corpus(exprs, map_size, size, seed, prefix_kind, prefix_len)


def fresh_expr(corpus: Corpus, size: int, seed: int) -> Expr:
    """An expression outside the corpus, same prefix treatment applied."""
    rng = SplitMix64(seed ^ 0x5EED5EED)
    seen = {AlphaExpr.closed(_strip_prefix(e, corpus)) for e in corpus.exprs}
    while True:
        e = gen_expr(rng, size)
        if AlphaExpr.closed(e) not in seen:
            return wrap_prefix(e, corpus.prefix_kind, corpus.prefix_len)


def _strip_prefix(e: Expr, corpus: Corpus) -> Expr:
    for _ in range(0 if corpus.prefix_kind == "none" else corpus.prefix_len):
        if isinstance(e, Lam):
            e = e.body
        elif isinstance(e, App):
            e = e.arg if isinstance(e.fun, Var) and e.fun.name == "$" else e.fun
    return e


# ---------------------------------------------------------------------------
# Baseline maps
# ---------------------------------------------------------------------------


class _AvlNode:
    __slots__ = ("key", "value", "left", "right", "height")

    def __init__(self, key, value, left=None, right=None):
        self.key = key
        self.value = value
        self.left = left
        self.right = right
        self.height = 1 + max(_height(left), _height(right))


def _height(n) -> int:
    return 0 if n is None else n.height


def _rebuild(n: _AvlNode) -> _AvlNode:
    n.height = 1 + max(_height(n.left), _height(n.right))
    balance = _height(n.left) - _height(n.right)
    if balance > 1:
        if _height(n.left.left) < _height(n.left.right):
            n.left = _rotate_left(n.left)
        return _rotate_right(n)
    if balance < -1:
        if _height(n.right.right) < _height(n.right.left):
            n.right = _rotate_right(n.right)
        return _rotate_left(n)
    return n


def _rotate_right(n: _AvlNode) -> _AvlNode:
    pivot = n.left
    n.left = pivot.right
    n.height = 1 + max(_height(n.left), _height(n.right))
    pivot.right = n
    pivot.height = 1 + max(_height(pivot.left), _height(pivot.right))
    return pivot


def _rotate_left(n: _AvlNode) -> _AvlNode:
    pivot = n.right
    n.right = pivot.left
    n.height = 1 + max(_height(n.left), _height(n.right))
    pivot.left = n
    pivot.height = 1 + max(_height(pivot.left), _height(pivot.right))
    return pivot


class AvlMap:
    """Balanced ordered map over AlphaExpr keys, compared alpha-aware."""

    __slots__ = ("root", "count")

    def __init__(self):
        self.root = None
        self.count = 0

    def insert(self, key: AlphaExpr, value, combine=None) -> None:
        def go(node):
            if node is None:
                self.count += 1
                return _AvlNode(key, value)
            c = alpha_compare(key, node.key)
            if c == 0:
                node.value = value if combine is None else combine(node.value, value)
                return node
            if c < 0:
                node.left = go(node.left)
            else:
                node.right = go(node.right)
            return _rebuild(node)

        self.root = go(self.root)

    def lookup(self, key: AlphaExpr):
        node = self.root
        while node is not None:
            c = alpha_compare(key, node.key)
            if c == 0:
                return node.value
            node = node.left if c < 0 else node.right
        return None

    def items(self) -> list:
        out = []

        def go(node):
            if node is None:
                return
            go(node.left)
            out.append((node.key, node.value))
            go(node.right)

        go(self.root)
        return out


class TrieImpl:
    """The trie under benchmark."""

    name = "tm"

    def __init__(self):
        self.map = empty_expr_map()

    def build(self, pairs) -> None:
        m = self.map
        for e, v in pairs:
            m = insert_closed(e, v, m)
        self.map = m

    def insert(self, e: Expr, v) -> None:
        self.map = insert_closed(e, v, self.map)

    def lookup(self, e: Expr):
        return lookup_closed(e, self.map)

    def union_from(self, a: "TrieImpl", b: "TrieImpl", combine) -> None:
        self.map = a.map.union_with(combine, b.map)

    def fold_sum(self) -> int:
        return self.map.foldr(lambda v, acc: v + acc, 0)

    def size(self) -> int:
        return self.map.size()

    def census(self) -> int:
        return node_census(self.map)


class OrderedImpl:
    """Balanced-tree baseline; every comparison walks the keys."""

    name = "om"

    def __init__(self):
        self.map = AvlMap()

    def build(self, pairs) -> None:
        for e, v in pairs:
            self.map.insert(AlphaExpr.closed(e), v)

    def insert(self, e: Expr, v) -> None:
        self.map.insert(AlphaExpr.closed(e), v)

    def lookup(self, e: Expr):
        return self.map.lookup(AlphaExpr.closed(e))

    def union_from(self, a: "OrderedImpl", b: "OrderedImpl", combine) -> None:
        m = AvlMap()
        for k, v in a.map.items():
            m.insert(k, v)
        for k, v in b.map.items():
            m.insert(k, v, combine=combine)
        self.map = m

    def fold_sum(self) -> int:
        total = 0
        for _, v in self.map.items():
            total += v
        return total

    def size(self) -> int:
        return self.map.count

    def census(self) -> int:
        return sum(1 + expr_size(k.expr) for k, _ in self.map.items())


class HashImpl:
    """Hash-map baseline: hash the whole key, equate alpha-aware on hits."""

    name = "hm"

    def __init__(self):
        self.map: dict = {}

    def build(self, pairs) -> None:
        m = self.map
        for e, v in pairs:
            m[AlphaExpr.closed(e)] = v

    def insert(self, e: Expr, v) -> None:
        self.map[AlphaExpr.closed(e)] = v

    def lookup(self, e: Expr):
        return self.map.get(AlphaExpr.closed(e))

    def union_from(self, a: "HashImpl", b: "HashImpl", combine) -> None:
        m = dict(a.map)
        for k, v in b.map.items():
            m[k] = combine(m[k], v) if k in m else v
        self.map = m

    def fold_sum(self) -> int:
        return sum(self.map.values())

    def size(self) -> int:
        return len(self.map)

    def census(self) -> int:
        return sum(1 + expr_size(k.expr) for k in self.map)


IMPLS = {"tm": TrieImpl, "om": OrderedImpl, "hm": HashImpl}


# ---------------------------------------------------------------------------
# Node census
# ---------------------------------------------------------------------------


def node_census(m) -> int:
    """Nodes, leaf-map entries and stored key constructors reachable in a trie.

    Accepts the exact map, the matching map, or a PatMap.  User values are
    opaque except where they are themselves nested tries.
    """
    if isinstance(m, PatMap):
        return _census_msem(m.root, lambda v: 0)
    if isinstance(m, (EmptyMSEM, SingleMSEM, MultiMSEM)):
        return _census_msem(m, lambda v: 0)
    return _census_sem(m, lambda v: 0)


def _census_sem(m, value_census) -> int:
    if isinstance(m, EmptySEM):
        return 1
    if isinstance(m, SingleSEM):
        return 1 + expr_size(m.key.expr) + value_census(m.value)
    inner = m.inner
    if isinstance(inner, ExprMapInner):
        return 1 + _census_em(inner, value_census)
    return 1 + _census_lm(inner, value_census)


def _census_em(em: ExprMapInner, vc) -> int:
    n = 1 + len(em.fvar) + len(em.bvar)
    for v in em.fvar.values():
        n += vc(v)
    for v in em.bvar.values():
        n += vc(v)
    n += _census_sem(em.app, lambda inner_map: _census_sem(inner_map, vc))
    n += _census_sem(em.lam, vc)
    return n


def _census_lm(lm: ListMapInner, vc) -> int:
    n = 1 + (0 if lm.nil is None else vc(lm.nil))
    n += _census_sem(lm.cons, lambda tail_map: _census_sem(tail_map, vc))
    return n


def _census_msem(m, value_census) -> int:
    if isinstance(m, EmptyMSEM):
        return 1
    if isinstance(m, SingleMSEM):
        return 1 + expr_size(m.pat.body.expr) + value_census(m.value)
    return 1 + _census_mm(m.inner, value_census)


def _census_mm(mm: MExprMapInner, vc) -> int:
    n = 1 + len(mm.fvar) + len(mm.bvar) + len(mm.pvar)
    for d in (mm.fvar, mm.bvar, mm.pvar):
        for v in d.values():
            n += vc(v)
    n += _census_msem(mm.app, lambda arg_map: _census_msem(arg_map, vc))
    n += _census_msem(mm.lam, vc)
    return n


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

TIMING_SUITES = (
    "lookup", "lookup_lam", "lookup_app1", "lookup_app2", "lookup_one",
    "insert_lookup_one", "fromList", "fromList_app1", "union", "fold",
)
SPACE_SUITES = ("space", "space_lam", "space_app1", "space_app2")
SUITES = TIMING_SUITES + SPACE_SUITES

SUITE_PREFIX = {
    "lookup": "none", "lookup_lam": "lam", "lookup_app1": "app1",
    "lookup_app2": "app2", "lookup_one": "none", "insert_lookup_one": "none",
    "fromList": "none", "fromList_app1": "app1", "union": "none",
    "fold": "none", "space": "none", "space_lam": "lam",
    "space_app1": "app1", "space_app2": "app2",
}


@dataclass(frozen=True)
class BenchResult:
    suite: str
    impl: str
    map_size: int
    expr_size: int
    seed: int
    reps: int
    total_ns: int
    per_op_ns: int
    node_count: Optional[int] = None

    def csv_row(self) -> str:
        node = "" if self.node_count is None else str(self.node_count)
        return (f"{self.suite},{self.impl},{self.map_size},{self.expr_size},"
                f"{self.seed},{self.reps},{self.total_ns},{self.per_op_ns},{node}")


CSV_HEADER = "suite,impl,M,E,seed,reps,total_ns,per_op_ns,node_count"


@dataclass(frozen=True)
class BenchParams:
    map_size: int = 10000
    expr_size: int = 100
    seed: int = 42
    reps: int = 5
    prefix_len: int = 100


def _ensure_recursion_headroom(params: BenchParams) -> None:
    # Trie paths are as long as the serialized key; leave generous margin.
    needed = 10 * (params.expr_size + params.prefix_len) + 10000
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)


def _time_reps(reps: int, run: Callable[[], Any]) -> tuple[int, Any]:
    """Minimum wall time across reps, after one warmup run."""
    result = run()
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        result = run()
        elapsed = time.perf_counter_ns() - t0
        if best is None or elapsed < best:
            best = elapsed
    return best, result


def run_suite(suite: str, impl: str, params: BenchParams,
              corpus: Optional[Corpus] = None) -> tuple[BenchResult, Any]:
    """Run one (suite, impl) cell.

    Answers the measurement plus a functional fingerprint that must agree
    across implementations for the same suite and parameters.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if impl not in IMPLS:
        raise ValueError(f"unknown impl {impl!r}")
    if params.reps < 3:
        raise ValueError("reps must be at least 3")
    _ensure_recursion_headroom(params)
    if corpus is None:
        corpus = make_corpus(params.map_size, params.expr_size, params.seed,
                             SUITE_PREFIX[suite], params.prefix_len)
    pairs = [(e, i + 1) for i, e in enumerate(corpus.exprs)]
    make = IMPLS[impl]
    node_count = None

    if suite in SPACE_SUITES:
        def run():
            fresh = make()
            fresh.build(pairs)
            return fresh

        total_ns, m = _time_reps(params.reps, run)
        node_count = m.census()
        op_count = params.map_size
        fingerprint = (m.size(), m.fold_sum())
    elif suite.startswith("lookup") or suite == "insert_lookup_one":
        m = make()
        m.build(pairs)
        if suite == "lookup_one":
            target = corpus.exprs[params.map_size // 2]

            def run():
                return m.lookup(target)

            op_count = 1
        elif suite == "insert_lookup_one":
            fresh = fresh_expr(corpus, params.expr_size, params.seed)
            value = params.map_size + 1

            def run():
                m.insert(fresh, value)
                return m.lookup(fresh)

            op_count = 1
        else:
            exprs = corpus.exprs

            def run():
                results = []
                for e in exprs:
                    results.append(m.lookup(e))
                return results

            op_count = params.map_size
        total_ns, result = _time_reps(params.reps, run)
        fingerprint = result
    elif suite.startswith("fromList"):
        def run():
            fresh = make()
            fresh.build(pairs)
            return fresh

        total_ns, m = _time_reps(params.reps, run)
        op_count = params.map_size
        fingerprint = (m.size(), m.fold_sum(), [m.lookup(e) for e in corpus.exprs])
    elif suite == "union":
        cut_left = (3 * params.map_size) // 5
        cut_right = (2 * params.map_size) // 5
        left, right = make(), make()
        left.build(pairs[:cut_left])
        right.build(pairs[cut_right:])

        def run():
            merged = make()
            merged.union_from(left, right, lambda a, b: a + b)
            return merged

        total_ns, m = _time_reps(params.reps, run)
        op_count = params.map_size
        fingerprint = (m.size(), m.fold_sum(), [m.lookup(e) for e in corpus.exprs])
    else:  # fold
        m = make()
        m.build(pairs)

        def run():
            return m.fold_sum()

        total_ns, result = _time_reps(params.reps, run)
        op_count = params.map_size
        fingerprint = result

    result_row = BenchResult(
        suite=suite, impl=impl, map_size=params.map_size,
        expr_size=params.expr_size, seed=params.seed, reps=params.reps,
        total_ns=total_ns, per_op_ns=total_ns // op_count,
        node_count=node_count,
    )
    return result_row, fingerprint


def oracle_union_sum(corpus: Corpus) -> int:
    """Expected fold sum of the union suite, per the association-list oracle."""
    pairs = [(e, i + 1) for i, e in enumerate(corpus.exprs)]
    cut_left = (3 * len(pairs)) // 5
    cut_right = (2 * len(pairs)) // 5
    left = AssocMap()
    for e, v in pairs[:cut_left]:
        left = left.insert(AlphaExpr.closed(e), v)
    right = AssocMap()
    for e, v in pairs[cut_right:]:
        right = right.insert(AlphaExpr.closed(e), v)
    merged = left.union_with(lambda a, b: a + b, right)
    return sum(merged.values())
