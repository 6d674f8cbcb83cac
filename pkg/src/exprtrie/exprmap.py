"""The trie keyed by AlphaExpr: one field per expression constructor.

Variable occurrences split between a name-keyed map for free variables and
a level-keyed map for lambda-bound ones, so keys that differ only in binder
names land in the same slot.  Applications nest one trie inside another
(the inner trie's values are themselves tries), and lambdas descend with
the environment extended.  Lookup walks the trie guided by the key and
never compares whole expressions outside the singleton guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .expr import AlphaExpr, App, Expr, Var
from .triemap import EmptySEM, SEMap, TrieMap, empty_list_map


@dataclass(frozen=True, slots=True)
class ExprMapInner(TrieMap):
    fvar: dict            # free variable name -> value
    bvar: dict            # binder level -> value
    app: SEMap            # function subtree -> trie over argument subtrees
    lam: SEMap            # body (under extended env) -> value

    @staticmethod
    def empty() -> "ExprMapInner":
        return ExprMapInner({}, {}, _EMPTY, _EMPTY)

    def lookup(self, key: AlphaExpr):
        env, e = key.env, key.expr
        if isinstance(e, Var):
            lvl = env.lookup(e.name)
            if lvl is None:
                return self.fvar.get(e.name)
            return self.bvar.get(lvl)
        if isinstance(e, App):
            arg_map = self.app.lookup(AlphaExpr(env, e.fun))
            if arg_map is None:
                return None
            return arg_map.lookup(AlphaExpr(env, e.arg))
        return self.lam.lookup(AlphaExpr(env.extend(e.binder), e.body))

    def alter(self, key: AlphaExpr, tf):
        env, e = key.env, key.expr
        if isinstance(e, Var):
            lvl = env.lookup(e.name)
            if lvl is None:
                return ExprMapInner(_alter_dict(self.fvar, e.name, tf), self.bvar, self.app, self.lam)
            return ExprMapInner(self.fvar, _alter_dict(self.bvar, lvl, tf), self.app, self.lam)
        if isinstance(e, App):
            arg_key = AlphaExpr(env, e.arg)

            def lifted(arg_map):
                return (_EMPTY if arg_map is None else arg_map).alter(arg_key, tf)

            return ExprMapInner(self.fvar, self.bvar, self.app.alter(AlphaExpr(env, e.fun), lifted), self.lam)
        body_key = AlphaExpr(env.extend(e.binder), e.body)
        return ExprMapInner(self.fvar, self.bvar, self.app, self.lam.alter(body_key, tf))

    def foldr(self, f, z):
        acc = self.lam.foldr(f, z)
        acc = self.app.foldr(lambda arg_map, r: arg_map.foldr(f, r), acc)
        for lvl in sorted(self.bvar, reverse=True):
            acc = f(self.bvar[lvl], acc)
        for name in sorted(self.fvar, reverse=True):
            acc = f(self.fvar[name], acc)
        return acc

    def union_with(self, f, other: "ExprMapInner"):
        return ExprMapInner(
            _union_dict(self.fvar, other.fvar, f),
            _union_dict(self.bvar, other.bvar, f),
            self.app.union_with(lambda a, b: a.union_with(f, b), other.app),
            self.lam.union_with(f, other.lam),
        )

    def map_values(self, f):
        return ExprMapInner(
            {k: f(v) for k, v in self.fvar.items()},
            {k: f(v) for k, v in self.bvar.items()},
            self.app.map_values(lambda arg_map: arg_map.map_values(f)),
            self.lam.map_values(f),
        )

    def filter_values(self, pred):
        return ExprMapInner(
            {k: v for k, v in self.fvar.items() if pred(v)},
            {k: v for k, v in self.bvar.items() if pred(v)},
            self.app.map_values(lambda arg_map: arg_map.filter_values(pred)),
            self.lam.filter_values(pred),
        )


def _alter_dict(d: dict, k, tf) -> dict:
    v = tf(d.get(k))
    d2 = dict(d)
    if v is None:
        d2.pop(k, None)
    else:
        d2[k] = v
    return d2


def _union_dict(a: dict, b: dict, f) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = f(out[k], v) if k in out else v
    return out


_EMPTY: SEMap = EmptySEM(ExprMapInner.empty)


def empty_expr_map() -> SEMap:
    """An empty trie keyed by AlphaExpr."""
    return _EMPTY


def empty_expr_list_map() -> SEMap:
    """An empty trie keyed by tuples of AlphaExpr."""
    return empty_list_map(empty_expr_map)


def lookup_closed(e: Expr, m: SEMap) -> Optional[Any]:
    return m.lookup(AlphaExpr.closed(e))


def insert_closed(e: Expr, v, m: SEMap) -> SEMap:
    return m.insert(AlphaExpr.closed(e), v)


def delete_closed(e: Expr, m: SEMap) -> SEMap:
    return m.delete(AlphaExpr.closed(e))
