"""Shared helpers for the test suite: deterministic generators and oracles."""

from __future__ import annotations

import itertools

from exprtrie.bench import SplitMix64, gen_expr
from exprtrie.expr import AlphaExpr, App, Expr, Lam, Var


def mk_rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)


def rand_expr(rng: SplitMix64, max_size: int) -> Expr:
    return gen_expr(rng, 1 + rng.below(max_size))


def close(e: Expr) -> AlphaExpr:
    return AlphaExpr.closed(e)


def rename_binders(e: Expr, prefix: str = "ren") -> Expr:
    """Injectively rename every lambda binder; free names stay put."""
    counter = itertools.count()

    def go(x: Expr, env: dict) -> Expr:
        if isinstance(x, Var):
            return Var(env.get(x.name, x.name))
        if isinstance(x, App):
            return App(go(x.fun, env), go(x.arg, env))
        fresh = f"{prefix}{next(counter)}"
        return Lam(fresh, go(x.body, {**env, x.binder: fresh}))

    return go(e, {})


def apply_subst(keys: dict, body: Expr, subst: dict) -> Expr:
    """Instantiate a pattern body, capture-avoiding.

    `keys` maps quantified names to their canonical numbers and `subst` maps
    those numbers to replacement expressions.  Every pattern binder is
    freshened so replacements can never be captured.
    """
    counter = itertools.count()

    def go(x: Expr, env: dict) -> Expr:
        if isinstance(x, Var):
            if x.name in env:
                return Var(env[x.name])
            pk = keys.get(x.name)
            if pk is not None and pk in subst:
                return subst[pk]
            return x
        if isinstance(x, App):
            return App(go(x.fun, env), go(x.arg, env))
        fresh = f"_s{next(counter)}"
        return Lam(fresh, go(x.body, {**env, x.binder: fresh}))

    return go(body, {})


def leaf_names(e: Expr) -> set:
    out: set = set()
    todo = [e]
    while todo:
        x = todo.pop()
        if isinstance(x, Var):
            out.add(x.name)
        elif isinstance(x, App):
            todo.extend((x.fun, x.arg))
        else:
            todo.append(x.body)
    return out


def rand_pattern(rng: SplitMix64, max_size: int = 12, max_vars: int = 3) -> tuple:
    """A (pvars, body) pair; some quantified variables may not occur."""
    body = rand_expr(rng, max_size)
    names = sorted(leaf_names(body))
    pvars = [n for n in names if rng.below(3) == 0][:max_vars]
    if rng.below(4) == 0 and len(pvars) < max_vars:
        pvars.append("q'")
    return pvars, body


def instantiate(rng: SplitMix64, pvars: list, body: Expr, max_fill: int = 4) -> Expr:
    """A target that the pattern matches, by filling its variables."""
    fills = {v: rand_expr(rng, max_fill) for v in pvars}

    def go(x: Expr, hidden: frozenset) -> Expr:
        if isinstance(x, Var):
            if x.name in fills and x.name not in hidden:
                return fills[x.name]
            return x
        if isinstance(x, App):
            return App(go(x.fun, hidden), go(x.arg, hidden))
        return Lam(x.binder, go(x.body, hidden | {x.binder}))

    return go(body, frozenset())


def rand_target(rng: SplitMix64, patterns: list, max_size: int = 12) -> Expr:
    """Random target, biased towards instances of the given patterns."""
    if patterns and rng.below(3) == 0:
        pvars, body = patterns[rng.below(len(patterns))]
        return instantiate(rng, pvars, body)
    return rand_expr(rng, max_size)
