"""Deliberately naive reference implementations used as ground truth in tests.

`AssocMap` is a finite map as a literal list of (key, value) pairs scanned
with alpha-equality.  `match_one`/`match_all` form a one-pattern-at-a-time
matcher written as its own recursive descent, sharing no code with the trie
matcher so that differential tests compare genuinely independent paths.
Everything here favours obviousness over speed.
"""

from __future__ import annotations

from typing import Optional

from .expr import AlphaExpr, App, Expr, Lam, Var, alpha_eq, print_expr


class AssocMap:
    """Most-recent-first association list with at most one entry per key class."""

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        self.entries: list = list(entries)

    def lookup(self, key: AlphaExpr):
        for k, v in self.entries:
            if alpha_eq(k, key):
                return v
        return None

    def alter(self, key: AlphaExpr, tf) -> "AssocMap":
        old = self.lookup(key)
        new = tf(old)
        kept = [(k, v) for k, v in self.entries if not alpha_eq(k, key)]
        if new is not None:
            kept.insert(0, (key, new))
        return AssocMap(kept)

    def insert(self, key: AlphaExpr, value) -> "AssocMap":
        return self.alter(key, lambda _: value)

    def delete(self, key: AlphaExpr) -> "AssocMap":
        return self.alter(key, lambda _: None)

    def size(self) -> int:
        return len(self.entries)

    def values(self) -> list:
        return [v for _, v in self.entries]

    def union_with(self, f, other: "AssocMap") -> "AssocMap":
        out = self
        for k, v in reversed(other.entries):
            out = out.alter(k, lambda old, v=v: v if old is None else f(old, v))
        return out


def _stack_index(stack: list, name: str) -> Optional[int]:
    """Position of the innermost binding of name, counted from the top."""
    for i in range(len(stack) - 1, -1, -1):
        if stack[i] == name:
            return len(stack) - 1 - i
    return None


def _free_names(e: Expr) -> set:
    names: set = set()

    def go(x: Expr, hidden: tuple) -> None:
        if isinstance(x, Var):
            if x.name not in hidden:
                names.add(x.name)
        elif isinstance(x, App):
            go(x.fun, hidden)
            go(x.arg, hidden)
        else:
            go(x.body, hidden + (x.binder,))

    go(e, ())
    return names


def _same_term(a: Expr, b: Expr, astack: tuple, bstack: tuple) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        ia = _stack_index(list(astack), a.name)
        ib = _stack_index(list(bstack), b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if isinstance(a, App) and isinstance(b, App):
        return (_same_term(a.fun, b.fun, astack, bstack)
                and _same_term(a.arg, b.arg, astack, bstack))
    if isinstance(a, Lam) and isinstance(b, Lam):
        return _same_term(a.body, b.body, astack + (a.binder,), bstack + (b.binder,))
    return False


def match_one(pvars, pat: Expr, target: Expr) -> Optional[dict]:
    """Substitution making the pattern equal the target, or None.

    The result binds only quantified variables that occur in the pattern.
    """
    quantified = set(pvars)
    binding: dict[str, Expr] = {}

    def go(p: Expr, t: Expr, pstack: tuple, tstack: tuple) -> bool:
        if isinstance(p, Var):
            pos = _stack_index(list(pstack), p.name)
            if pos is not None:
                if not isinstance(t, Var):
                    return False
                return _stack_index(list(tstack), t.name) == pos
            if p.name in quantified:
                if _free_names(t) & set(tstack):
                    return False
                if p.name in binding:
                    return _same_term(binding[p.name], t, (), ())
                binding[p.name] = t
                return True
            return (isinstance(t, Var) and t.name == p.name
                    and _stack_index(list(tstack), t.name) is None)
        if isinstance(p, App):
            return (isinstance(t, App)
                    and go(p.fun, t.fun, pstack, tstack)
                    and go(p.arg, t.arg, pstack, tstack))
        return (isinstance(t, Lam)
                and go(p.body, t.body, pstack + (p.binder,), tstack + (t.binder,)))

    return binding if go(pat, target, (), ()) else None


def match_all(store, target: Expr) -> list:
    """Match the target against every stored entry one at a time.

    `store` holds ((pvars, pattern_expr), value) pairs.  The answer is the
    canonically sorted list of (substitution, value) pairs, substitutions as
    name-sorted lists.
    """
    out = []
    for (pvars, pat), value in store:
        sub = match_one(pvars, pat, target)
        if sub is not None:
            out.append((sorted(sub.items(), key=lambda kv: kv[0]), value))
    return sorted(out, key=canonical_result_key)


def canonical_result_key(result) -> tuple:
    """Sort key for (substitution, value) pairs, stable across runs."""
    sub, value = result
    return (tuple((name, print_expr(e)) for name, e in sub), repr(value))
