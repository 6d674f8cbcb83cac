"""Tries that store patterns and are looked up with plain expressions.

Lookup returns every stored pattern that matches the target, together with
the substitution that witnesses the match.  The trie mirrors the exact
expression trie, with one extra field per node for entries whose pattern at
that position is a quantified variable; lookup first descends the concrete
structure (rigid) and then tries those stored variables (flexi).

`PatMap` is the external face: it canonicalises client patterns on the way
in, stores each value alongside its variable numbering, and uses that
numbering on the way out to report substitutions in terms of the client's
own variable names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .expr import AlphaExpr, App, Expr, Var
from .matching import (
    FAIL,
    Match,
    PatExpr,
    alternatives,
    lift_optional,
    match_expr,
    match_pat_var,
    pure,
    run_match,
)

PatSubst = list  # [(variable name, matched Expr)], sorted by name


class MSEMap:
    """Singleton-or-empty wrapper for matching tries.

    Like the exact-map wrapper, but the singleton holds a whole pattern and
    its lookup runs the matcher instead of an equality test.  Multi nodes
    are never shrunk back.
    """

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class EmptyMSEM(MSEMap):
    inner_empty: Callable[[], "MExprMapInner"]

    def lookup_match(self, key: AlphaExpr) -> Match:
        return FAIL

    def alter_pat(self, pat: PatExpr, tf) -> MSEMap:
        v = tf(None)
        if v is None:
            return self
        return SingleMSEM(self.inner_empty, pat, v)

    def foldr(self, f, z):
        return z


@dataclass(frozen=True, slots=True)
class SingleMSEM(MSEMap):
    inner_empty: Callable[[], "MExprMapInner"]
    pat: PatExpr
    value: Any

    def lookup_match(self, key: AlphaExpr) -> Match:
        return match_expr(self.pat, key).then(pure(self.value))

    def alter_pat(self, pat: PatExpr, tf) -> MSEMap:
        if pat == self.pat:
            v = tf(self.value)
            if v is None:
                return EmptyMSEM(self.inner_empty)
            return SingleMSEM(self.inner_empty, self.pat, v)
        v1 = tf(None)
        if v1 is None:
            return self
        old_value = self.value
        inner = self.inner_empty().alter_pat(self.pat, lambda _: old_value)
        inner = inner.alter_pat(pat, lambda _: v1)
        return MultiMSEM(inner)

    def foldr(self, f, z):
        return f(self.value, z)


@dataclass(frozen=True, slots=True)
class MultiMSEM(MSEMap):
    inner: "MExprMapInner"

    def lookup_match(self, key: AlphaExpr) -> Match:
        return self.inner.lookup_match(key)

    def alter_pat(self, pat: PatExpr, tf) -> MSEMap:
        return MultiMSEM(self.inner.alter_pat(pat, tf))

    def foldr(self, f, z):
        return self.inner.foldr(f, z)


@dataclass(frozen=True, slots=True)
class MExprMapInner:
    fvar: dict     # free variable name -> value
    bvar: dict     # binder level -> value
    pvar: dict     # canonical pattern-variable key -> value
    app: MSEMap    # function position -> trie over argument position
    lam: MSEMap

    @staticmethod
    def empty() -> "MExprMapInner":
        return MExprMapInner({}, {}, {}, _EMPTY_M, _EMPTY_M)

    def lookup_match(self, key: AlphaExpr) -> Match:
        env, e = key.env, key.expr
        if isinstance(e, Var):
            lvl = env.lookup(e.name)
            if lvl is None:
                rigid = lift_optional(self.fvar.get(e.name))
            else:
                rigid = lift_optional(self.bvar.get(lvl))
        elif isinstance(e, App):
            arg_key = AlphaExpr(env, e.arg)
            rigid = self.app.lookup_match(AlphaExpr(env, e.fun)).bind(
                lambda arg_map: arg_map.lookup_match(arg_key))
        else:
            rigid = self.lam.lookup_match(AlphaExpr(env.extend(e.binder), e.body))
        if not self.pvar:
            return rigid
        flexi = [match_pat_var(pk, key).then(pure(v))
                 for pk, v in sorted(self.pvar.items())]
        return alternatives(rigid, *flexi)

    def alter_pat(self, pat: PatExpr, tf) -> "MExprMapInner":
        penv, p = pat.body.env, pat.body.expr
        if isinstance(p, Var):
            lvl = penv.lookup(p.name)
            if lvl is not None:
                return self._with(bvar=_alter_dict(self.bvar, lvl, tf))
            pk = pat.keys.get(p.name)
            if pk is not None:
                return self._with(pvar=_alter_dict(self.pvar, pk, tf))
            return self._with(fvar=_alter_dict(self.fvar, p.name, tf))
        if isinstance(p, App):
            arg_pat = PatExpr(pat.keys, AlphaExpr(penv, p.arg))

            def lifted(arg_map):
                return (_EMPTY_M if arg_map is None else arg_map).alter_pat(arg_pat, tf)

            fun_pat = PatExpr(pat.keys, AlphaExpr(penv, p.fun))
            return self._with(app=self.app.alter_pat(fun_pat, lifted))
        body_pat = PatExpr(pat.keys, AlphaExpr(penv.extend(p.binder), p.body))
        return self._with(lam=self.lam.alter_pat(body_pat, tf))

    def _with(self, fvar=None, bvar=None, pvar=None, app=None, lam=None):
        return MExprMapInner(
            self.fvar if fvar is None else fvar,
            self.bvar if bvar is None else bvar,
            self.pvar if pvar is None else pvar,
            self.app if app is None else app,
            self.lam if lam is None else lam,
        )

    def foldr(self, f, z):
        acc = self.lam.foldr(f, z)
        acc = self.app.foldr(lambda arg_map, r: arg_map.foldr(f, r), acc)
        for pk in sorted(self.pvar, reverse=True):
            acc = f(self.pvar[pk], acc)
        for lvl in sorted(self.bvar, reverse=True):
            acc = f(self.bvar[lvl], acc)
        for name in sorted(self.fvar, reverse=True):
            acc = f(self.fvar[name], acc)
        return acc


def _alter_dict(d: dict, k, tf) -> dict:
    v = tf(d.get(k))
    d2 = dict(d)
    if v is None:
        d2.pop(k, None)
    else:
        d2[k] = v
    return d2


_EMPTY_M: MSEMap = EmptyMSEM(MExprMapInner.empty)


def empty_mexpr_map() -> MSEMap:
    return _EMPTY_M


class PatMap:
    """A store of (pattern, value) entries queried by matching a target.

    A pattern is a list of quantified variable names plus a body expression.
    Stored values travel with the numbering of their pattern's variables, so
    query results can name the client's variables.
    """

    __slots__ = ("root",)

    def __init__(self, root: Optional[MSEMap] = None):
        self.root = _EMPTY_M if root is None else root

    @staticmethod
    def empty() -> "PatMap":
        return PatMap()

    def alter(self, pvars: list[str], e: Expr, tf) -> "PatMap":
        pat = PatExpr.make(pvars, e)
        pks = pat.keys

        def paired(entry):
            v = tf(None if entry is None else entry[1])
            return None if v is None else (pks, v)

        return PatMap(self.root.alter_pat(pat, paired))

    def insert(self, pvars: list[str], e: Expr, value) -> "PatMap":
        return self.alter(pvars, e, lambda _: value)

    def delete(self, pvars: list[str], e: Expr) -> "PatMap":
        return self.alter(pvars, e, lambda _: None)

    def lookup(self, target: Expr) -> list:
        """All matching entries as (substitution, value) pairs.

        The substitution lists (name, expression) pairs sorted by name;
        quantified variables that received no binding are omitted.
        """
        out = []
        for subst, (pks, v) in run_match(self.root.lookup_match(AlphaExpr.closed(target))):
            ps: PatSubst = sorted(
                ((name, subst[pk]) for name, pk in pks.items() if pk in subst),
                key=lambda kv: kv[0])
            out.append((ps, v))
        return out

    def size(self) -> int:
        return self.root.foldr(lambda _, n: n + 1, 0)
