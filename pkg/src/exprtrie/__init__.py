"""Finite maps keyed by expression trees, insensitive to bound-variable names,
with matching lookup over stored patterns."""

from .expr import (
    AlphaExpr,
    App,
    DBEnv,
    Expr,
    Lam,
    ParseError,
    Var,
    alpha_compare,
    alpha_eq,
    alpha_hash,
    eq_expr,
    expr_size,
    no_captured,
    parse_expr,
    print_expr,
)
from .exprmap import (
    delete_closed,
    empty_expr_list_map,
    empty_expr_map,
    insert_closed,
    lookup_closed,
)
from .matching import PatExpr, canon_pat_keys, match_expr, match_pat_var, run_match
from .patmap import PatMap
from .triemap import TF, TrieMap

__all__ = [
    "AlphaExpr", "App", "DBEnv", "Expr", "Lam", "ParseError", "Var",
    "alpha_compare", "alpha_eq", "alpha_hash", "eq_expr", "expr_size",
    "no_captured", "parse_expr", "print_expr",
    "delete_closed", "empty_expr_list_map", "empty_expr_map",
    "insert_closed", "lookup_closed",
    "PatExpr", "canon_pat_keys", "match_expr", "match_pat_var", "run_match",
    "PatMap", "TF", "TrieMap",
]
