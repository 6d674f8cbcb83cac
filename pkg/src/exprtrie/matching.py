"""Patterns with quantified variables, and the computation that matches them.

A pattern is an expression plus a set of quantified variables; matching a
target means finding the substitution for those variables that makes the
pattern equal to the target.  Quantified variables are renumbered 1, 2, ...
in first-occurrence order before storage, so the stored form is insensitive
to their names and to the order of quantification.

`Match` is a nondeterministic stateful computation: a function from the
current substitution to a list of (value, substitution) successes.  Failure
is the empty list and alternation concatenates, left first.
"""

from __future__ import annotations

from typing import Any, Callable, Optional

from .expr import AlphaExpr, App, DBEnv, Expr, Lam, Var, eq_expr, no_captured

PatKeys = dict  # quantified variable name -> canonical key (1-based)
Subst = dict    # canonical key -> matched Expr


def canon_pat_keys(pvars: list[str], e: Expr) -> PatKeys:
    """Number the quantified variables by first occurrence in a pre-order scan.

    An occurrence under a lambda that binds the same name belongs to the
    lambda, not to the quantifier, and does not count.  Variables with no
    occurrence get no key.
    """
    quantified = set(pvars)
    keys: PatKeys = {}
    shadow: dict[str, int] = {}

    def go(x: Expr) -> None:
        if isinstance(x, Var):
            n = x.name
            if n in quantified and shadow.get(n, 0) == 0 and n not in keys:
                keys[n] = len(keys) + 1
        elif isinstance(x, App):
            go(x.fun)
            go(x.arg)
        else:
            shadow[x.binder] = shadow.get(x.binder, 0) + 1
            go(x.body)
            shadow[x.binder] -= 1

    go(e)
    return keys


class PatExpr:
    """A canonicalised pattern: the key numbering plus the pattern body."""

    __slots__ = ("keys", "body")

    def __init__(self, keys: PatKeys, body: AlphaExpr):
        self.keys = keys
        self.body = body

    @staticmethod
    def make(pvars: list[str], e: Expr) -> "PatExpr":
        return PatExpr(canon_pat_keys(pvars, e), AlphaExpr.closed(e))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PatExpr):
            return NotImplemented
        return _pat_eq(self, other)

    def __hash__(self) -> int:
        raise TypeError("patterns are compared, not hashed")

    def __repr__(self) -> str:
        return f"PatExpr({self.keys!r}, {self.body!r})"


def _pat_eq(p1: PatExpr, p2: PatExpr) -> bool:
    """Patterns are equal when their bodies agree with quantified-variable
    occurrences compared by canonical key, bound occurrences by level, and
    everything else structurally."""
    env1 = dict(p1.body.env.bindings)
    env2 = dict(p2.body.env.bindings)

    def go(e1: Expr, n1: int, e2: Expr, n2: int) -> bool:
        if isinstance(e1, Var) and isinstance(e2, Var):
            l1, l2 = env1.get(e1.name), env2.get(e2.name)
            if l1 is not None or l2 is not None:
                return l1 == l2
            k1, k2 = p1.keys.get(e1.name), p2.keys.get(e2.name)
            if k1 is not None or k2 is not None:
                return k1 == k2
            return e1.name == e2.name
        if isinstance(e1, App) and isinstance(e2, App):
            return go(e1.fun, n1, e2.fun, n2) and go(e1.arg, n1, e2.arg, n2)
        if isinstance(e1, Lam) and isinstance(e2, Lam):
            v1, v2 = e1.binder, e2.binder
            old1, old2 = env1.get(v1), env2.get(v2)
            env1[v1] = n1
            env2[v2] = n2
            r = go(e1.body, n1 + 1, e2.body, n2 + 1)
            if old1 is None:
                del env1[v1]
            else:
                env1[v1] = old1
            if old2 is None:
                del env2[v2]
            else:
                env2[v2] = old2
            return r
        return False

    return go(p1.body.expr, p1.body.env.next_level, p2.body.expr, p2.body.env.next_level)


class Match:
    """A match computation over a shared substitution.

    Running it on a substitution yields the list of (value, substitution)
    successes, in a deterministic order.
    """

    __slots__ = ("run",)

    def __init__(self, run: Callable[[Subst], list]):
        self.run = run

    def bind(self, f: Callable[[Any], "Match"]) -> "Match":
        def step(s: Subst) -> list:
            out = []
            for v, s1 in self.run(s):
                out.extend(f(v).run(s1))
            return out

        return Match(step)

    def then(self, m: "Match") -> "Match":
        return self.bind(lambda _: m)

    def map(self, f: Callable[[Any], Any]) -> "Match":
        return Match(lambda s: [(f(v), s1) for v, s1 in self.run(s)])


def pure(v) -> Match:
    return Match(lambda s: [(v, s)])


FAIL = Match(lambda s: [])
UNIT = pure(None)


def alternatives(*ms: Match) -> Match:
    """Try each computation on the same substitution; results left to right."""
    def step(s: Subst) -> list:
        out = []
        for m in ms:
            out.extend(m.run(s))
        return out

    return Match(step)


def lift_optional(opt) -> Match:
    return FAIL if opt is None else pure(opt)


def refine(f: Callable[[Subst], Optional[Subst]]) -> Match:
    """Replace the substitution by f's answer, failing when it is None."""
    def step(s: Subst) -> list:
        s2 = f(s)
        return [] if s2 is None else [(None, s2)]

    return Match(step)


def run_match(m: Match) -> list:
    """Run on the empty substitution; answers (substitution, value) pairs."""
    return [(s, v) for v, s in m.run({})]


def match_pat_var(pk: int, target: AlphaExpr) -> Match:
    """Bind quantified-variable key pk to the target, or check a prior binding.

    Either way the target may not mention variables bound by lambdas above
    it inside the looked-up expression; such a binding would let them escape
    their scope.
    """
    env, e = target.env, target.expr

    def step(s: Subst) -> Optional[Subst]:
        sol = s.get(pk)
        if sol is None:
            if no_captured(env, e):
                s2 = dict(s)
                s2[pk] = e
                return s2
            return None
        if no_captured(env, e) and eq_expr(e, sol):
            return s
        return None

    return refine(step)


def match_expr(pat: PatExpr, target: AlphaExpr) -> Match:
    """Match a whole pattern against a target by simultaneous descent."""
    return _match(pat.keys, pat.body.env, pat.body.expr, target.env, target.expr)


def _match(keys: PatKeys, penv: DBEnv, p: Expr, tenv: DBEnv, t: Expr) -> Match:
    if isinstance(p, Var):
        lvl = penv.lookup(p.name)
        if lvl is not None:
            # Lambda-bound in the pattern: the target must be the variable of
            # the corresponding lambda.
            if isinstance(t, Var) and tenv.lookup(t.name) == lvl:
                return UNIT
            return FAIL
        pk = keys.get(p.name)
        if pk is not None:
            return match_pat_var(pk, AlphaExpr(tenv, t))
        if isinstance(t, Var) and tenv.lookup(t.name) is None and t.name == p.name:
            return UNIT
        return FAIL
    if isinstance(p, App):
        if not isinstance(t, App):
            return FAIL
        return _match(keys, penv, p.fun, tenv, t.fun).then(
            _match(keys, penv, p.arg, tenv, t.arg))
    if not isinstance(t, Lam):
        return FAIL
    return _match(keys, penv.extend(p.binder), p.body, tenv.extend(t.binder), t.body)
