"""Expression trees with binders, and equality modulo renaming of bound variables.

The AST has three node kinds: variable occurrences, applications, and
lambdas.  Keys built from it are paired with a De Bruijn environment
(`DBEnv`) that numbers the lambdas seen between the root and the current
position; two keys are equal when they agree once every bound variable is
replaced by its lambda's number.  A plain text format (s-expressions) is
provided for round-tripping expressions through files and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

VarName = str


@dataclass(frozen=True, slots=True)
class Var:
    name: VarName


@dataclass(frozen=True, slots=True)
class App:
    fun: "Expr"
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Lam:
    binder: VarName
    body: "Expr"


Expr = Union[Var, App, Lam]


def expr_size(e: Expr) -> int:
    """Number of constructors in the tree (always >= 1)."""
    n = 0
    todo = [e]
    while todo:
        x = todo.pop()
        n += 1
        if isinstance(x, App):
            todo.append(x.fun)
            todo.append(x.arg)
        elif isinstance(x, Lam):
            todo.append(x.body)
    return n


class DBEnv:
    """Numbers lambda binders from the root outwards, starting at level 1.

    `extend` assigns the next level to a name (rebinding a name hides its
    old level); `lookup` answers the level for a name, or None for names
    that are not lambda-bound here.  Instances are never mutated.
    """

    __slots__ = ("next_level", "bindings")

    def __init__(self, next_level: int = 1, bindings: Optional[dict] = None):
        self.next_level = next_level
        self.bindings: dict[VarName, int] = {} if bindings is None else bindings

    @staticmethod
    def empty() -> "DBEnv":
        return _EMPTY_DBENV

    def extend(self, v: VarName) -> "DBEnv":
        b = dict(self.bindings)
        b[v] = self.next_level
        return DBEnv(self.next_level + 1, b)

    def lookup(self, v: VarName) -> Optional[int]:
        return self.bindings.get(v)

    def __repr__(self) -> str:
        return f"DBEnv(next={self.next_level}, {self.bindings!r})"


_EMPTY_DBENV = DBEnv()

# Counter for full-key equality checks; lets tests assert that trie lookup
# never falls back to comparing whole keys outside the singleton guard.
_eq_calls = 0


def alpha_eq_count() -> int:
    return _eq_calls


def reset_alpha_eq_count() -> None:
    global _eq_calls
    _eq_calls = 0


class AlphaExpr:
    """An expression plus the environment for the lambdas enclosing it.

    This is the key type of the tries: `==` is equality modulo bound-variable
    names and `hash` agrees with it, so AlphaExpr works directly as a dict or
    set member.
    """

    __slots__ = ("env", "expr")

    def __init__(self, env: DBEnv, expr: Expr):
        self.env = env
        self.expr = expr

    @staticmethod
    def closed(e: Expr) -> "AlphaExpr":
        return AlphaExpr(_EMPTY_DBENV, e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlphaExpr):
            return NotImplemented
        global _eq_calls
        _eq_calls += 1
        return alpha_eq(self, other)

    def __hash__(self) -> int:
        return alpha_hash(self)

    def __repr__(self) -> str:
        return f"AlphaExpr({self.env!r}, {print_expr(self.expr)})"


def alpha_eq(a: AlphaExpr, b: AlphaExpr) -> bool:
    """True iff the two keys are equal up to renaming of lambda-bound variables.

    Variables found in the respective environment compare by level; all
    others compare by name.
    """
    return _walk2(a, b, _eq_var, _eq_fail) is True


def alpha_compare(a: AlphaExpr, b: AlphaExpr) -> int:
    """Total order consistent with alpha_eq: negative, zero or positive.

    Node tags order bound-var < free-var < App < Lam; bound variables
    compare by level, free ones by name, children left to right.
    """
    r = _walk2(a, b, _cmp_var, _cmp_tags)
    return 0 if r is True else r


# Tag codes shared by the comparator and the hash: bound 0, free 1, App 2, Lam 3.
_TAG_BOUND = 0
_TAG_FREE = 1
_TAG_APP = 2
_TAG_LAM = 3


def _tag_of(e: Expr, env: dict) -> int:
    if isinstance(e, App):
        return _TAG_APP
    if isinstance(e, Lam):
        return _TAG_LAM
    return _TAG_BOUND if e.name in env else _TAG_FREE


def _eq_var(x, lx, y, ly):
    if lx is None and ly is None:
        return True if x == y else False
    if lx is None or ly is None:
        return False
    return True if lx == ly else False


def _eq_fail(t1, t2):
    return False


def _cmp_var(x, lx, y, ly):
    if lx is not None and ly is not None:
        return True if lx == ly else (-1 if lx < ly else 1)
    if lx is None and ly is None:
        return True if x == y else (-1 if x < y else 1)
    return -1 if lx is not None else 1  # bound sorts before free


def _cmp_tags(t1, t2):
    return -1 if t1 < t2 else 1


def _walk2(a: AlphaExpr, b: AlphaExpr, on_var, on_tag_mismatch):
    """Simultaneous descent over two keys.

    Environments are copied once and then updated in place with undo, so the
    walk is linear in the tree size.  Returns True for equality, or whatever
    the callbacks produce on the first difference.
    """
    env1 = dict(a.env.bindings)
    env2 = dict(b.env.bindings)

    def go(e1: Expr, n1: int, e2: Expr, n2: int):
        t1 = _tag_of(e1, env1)
        t2 = _tag_of(e2, env2)
        if t1 != t2:
            return on_tag_mismatch(t1, t2)
        if t1 == _TAG_APP:
            r = go(e1.fun, n1, e2.fun, n2)
            if r is not True:
                return r
            return go(e1.arg, n1, e2.arg, n2)
        if t1 == _TAG_LAM:
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
        return on_var(e1.name, env1.get(e1.name), e2.name, env2.get(e2.name))

    return go(a.expr, a.env.next_level, b.expr, b.env.next_level)


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def alpha_hash(a: AlphaExpr) -> int:
    """FNV-1a-64 over the pre-order serialization of the key.

    Each node contributes its tag byte; bound variables add their level as 8
    little-endian bytes, free variables add the name's bytes, and lambdas add
    nothing beyond the tag (the binder name must not influence the hash).
    """
    h = _FNV_OFFSET
    env = dict(a.env.bindings)
    # Stack entries are exprs to visit or (name, old-level) undo records.
    next_level = a.env.next_level
    todo: list = [a.expr]
    levels: list[int] = [next_level]
    while todo:
        item = todo.pop()
        if type(item) is tuple:
            name, old = item
            if old is None:
                del env[name]
            else:
                env[name] = old
            continue
        n = levels.pop()
        if isinstance(item, App):
            h ^= _TAG_APP
            h = (h * _FNV_PRIME) & _MASK64
            todo.append(item.arg)
            levels.append(n)
            todo.append(item.fun)
            levels.append(n)
        elif isinstance(item, Lam):
            h ^= _TAG_LAM
            h = (h * _FNV_PRIME) & _MASK64
            todo.append((item.binder, env.get(item.binder)))
            env[item.binder] = n
            todo.append(item.body)
            levels.append(n + 1)
        else:
            lvl = env.get(item.name)
            if lvl is None:
                h ^= _TAG_FREE
                h = (h * _FNV_PRIME) & _MASK64
                for byte in item.name.encode("utf-8"):
                    h ^= byte
                    h = (h * _FNV_PRIME) & _MASK64
            else:
                h ^= _TAG_BOUND
                h = (h * _FNV_PRIME) & _MASK64
                for byte in lvl.to_bytes(8, "little"):
                    h ^= byte
                    h = (h * _FNV_PRIME) & _MASK64
    return h


def no_captured(env: DBEnv, e: Expr) -> bool:
    """True iff no variable occurring free in `e` is bound in `env`.

    Occurrences under a lambda inside `e` that binds the same name are not
    free, so they never count as captured.
    """
    bound = env.bindings
    shadow: dict[VarName, int] = {}

    def go(x: Expr) -> bool:
        if isinstance(x, Var):
            return shadow.get(x.name, 0) > 0 or x.name not in bound
        if isinstance(x, App):
            return go(x.fun) and go(x.arg)
        shadow[x.binder] = shadow.get(x.binder, 0) + 1
        ok = go(x.body)
        shadow[x.binder] -= 1
        return ok

    return go(e)


def eq_expr(e1: Expr, e2: Expr) -> bool:
    """Equality modulo bound-variable renaming, with no enclosing binders."""
    return alpha_eq(AlphaExpr.closed(e1), AlphaExpr.closed(e2))


# ---------------------------------------------------------------------------
# Text format
#
#   expr := '(' 'var' NAME ')' | '(' 'app' expr expr ')' | '(' 'lam' NAME expr ')'
#   NAME := [A-Za-z_$] [A-Za-z0-9_$']*
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


_NAME_START = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_$")
_NAME_REST = _NAME_START | set("0123456789'")


def _tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    out = []
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c.isspace():
            col += 1
            i += 1
        elif c in "()":
            out.append((c, line, col))
            col += 1
            i += 1
        elif c in _NAME_START:
            start = i
            startcol = col
            while i < n and text[i] in _NAME_REST:
                i += 1
                col += 1
            out.append((text[start:i], line, startcol))
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    return out


def parse_expr(text: str) -> Expr:
    """Parse the s-expression format; raises ParseError with position info."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        if pos >= len(tokens):
            nline = tokens[-1][1] if tokens else 1
            ncol = tokens[-1][2] + len(tokens[-1][0]) if tokens else 1
            raise ParseError("unexpected end of input", nline, ncol)
        return tokens[pos]

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expect(sym: str):
        tok, line, col = take()
        if tok != sym:
            raise ParseError(f"expected {sym!r}, found {tok!r}", line, col)

    def name():
        tok, line, col = take()
        if tok in "()" or tok[0] not in _NAME_START:
            raise ParseError(f"expected a name, found {tok!r}", line, col)
        return tok

    def expr() -> Expr:
        expect("(")
        head, line, col = take()
        if head == "var":
            v = name()
            expect(")")
            return Var(v)
        if head == "app":
            f = expr()
            a = expr()
            expect(")")
            return App(f, a)
        if head == "lam":
            v = name()
            b = expr()
            expect(")")
            return Lam(v, b)
        raise ParseError(f"expected 'var', 'app' or 'lam', found {head!r}", line, col)

    result = expr()
    if pos != len(tokens):
        tok, line, col = tokens[pos]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return result


def print_expr(e: Expr) -> str:
    parts: list[str] = []

    def go(x: Expr) -> None:
        if isinstance(x, Var):
            parts.append(f"(var {x.name})")
        elif isinstance(x, App):
            parts.append("(app ")
            go(x.fun)
            parts.append(" ")
            go(x.arg)
            parts.append(")")
        else:
            parts.append(f"(lam {x.binder} ")
            go(x.body)
            parts.append(")")

    go(e)
    return "".join(parts)
