"""Command-line entry point: benchmarking, self-testing, batch matching.

Exit codes: 0 success, 1 logic or self-test failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import bench as bench_mod
from . import oracle
from .expr import AlphaExpr, App, Lam, ParseError, Var, parse_expr, print_expr
from .exprmap import empty_expr_map
from .matching import PatExpr
from .oracle import AssocMap
from .patmap import PatMap


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(prog="exprtrie")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="run benchmark suites, emit CSV")
    p_bench.add_argument("--suite", default="all",
                         choices=("all",) + bench_mod.SUITES)
    p_bench.add_argument("--impl", default="all", choices=("all", "tm", "om", "hm"))
    p_bench.add_argument("--map-size", type=int, default=10000)
    p_bench.add_argument("--expr-size", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--prefix-len", type=int, default=100)
    p_bench.add_argument("--out", default=None, help="also write the CSV here")

    p_self = sub.add_parser("selftest", help="differential checks against the naive oracle")
    p_self.add_argument("--trials", type=int, default=500)
    p_self.add_argument("--seed", type=int, default=42)

    p_match = sub.add_parser("match", help="match targets against a pattern file")
    p_match.add_argument("patterns", help="file of 'VARS ; EXPR => LABEL' lines")
    p_match.add_argument("targets", nargs="*",
                         help="target expressions; standard input if omitted")

    args = parser.parse_args(argv)
    if args.command == "bench":
        return cmd_bench(args)
    if args.command == "selftest":
        return cmd_selftest(args)
    return cmd_match(args)


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench(args) -> int:
    if args.map_size < 1 or args.expr_size < 1 or args.prefix_len < 0:
        print("map size and expr size must be positive", file=sys.stderr)
        return 2
    if args.reps < 3:
        print("reps must be at least 3", file=sys.stderr)
        return 2
    suites = bench_mod.SUITES if args.suite == "all" else (args.suite,)
    impls = ("tm", "om", "hm") if args.impl == "all" else (args.impl,)
    params = bench_mod.BenchParams(
        map_size=args.map_size, expr_size=args.expr_size, seed=args.seed,
        reps=args.reps, prefix_len=args.prefix_len)

    lines = [bench_mod.CSV_HEADER]
    for suite in suites:
        corpus = bench_mod.make_corpus(
            params.map_size, params.expr_size, params.seed,
            bench_mod.SUITE_PREFIX[suite], params.prefix_len)
        fingerprints = {}
        for impl in impls:
            result, fp = bench_mod.run_suite(suite, impl, params, corpus)
            lines.append(result.csv_row())
            fingerprints[impl] = fp
        first = next(iter(fingerprints.values()))
        for impl, fp in fingerprints.items():
            if fp != first:
                print(f"implementations disagree on suite {suite}: "
                      f"{impl} vs {next(iter(fingerprints))}", file=sys.stderr)
                return 1

    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def _counterexample(lines) -> None:
    print("selftest: FAIL", file=sys.stderr)
    for line in lines:
        print("  " + line, file=sys.stderr)


def cmd_selftest(args) -> int:
    if args.trials < 0:
        print("trials must be nonnegative", file=sys.stderr)
        return 2
    rng = bench_mod.SplitMix64(args.seed)

    # Directed cases: the repeated-variable pair must match one way and not
    # the other, and a binder may never escape its lambda.
    f_x_x = parse_expr("(app (app (var f) (var x)) (var x))")
    hit = parse_expr("(app (app (var f) (app (var g) (var w))) (app (var g) (var w)))")
    miss = parse_expr("(app (app (var f) (app (var g) (var w))) (var w))")
    pm = PatMap.empty().insert(["x"], f_x_x, "rule")
    if len(pm.lookup(hit)) != 1:
        _counterexample(["pattern x ; " + print_expr(f_x_x),
                         "target " + print_expr(hit),
                         "expected one match, got none"])
        return 1
    if pm.lookup(miss):
        _counterexample(["pattern x ; " + print_expr(f_x_x),
                         "target " + print_expr(miss),
                         "expected no match"])
        return 1
    capture_pat = parse_expr("(lam x (var p))")
    pm2 = PatMap.empty().insert(["p"], capture_pat, "rule")
    if pm2.lookup(parse_expr("(lam y (var y))")):
        _counterexample(["pattern p ; " + print_expr(capture_pat),
                         "target (lam y (var y))",
                         "expected no match: the binder would escape"])
        return 1
    if len(pm2.lookup(parse_expr("(lam y (var c))"))) != 1:
        _counterexample(["pattern p ; " + print_expr(capture_pat),
                         "target (lam y (var c))",
                         "expected one match"])
        return 1

    # Randomized: exact map against the association list.
    trials = args.trials
    for trial in range(trials):
        pool = [bench_mod.gen_expr(rng, 1 + rng.below(12)) for _ in range(8)]
        m = empty_expr_map()
        om = AssocMap()
        for step in range(30):
            e = pool[rng.below(len(pool))]
            key = AlphaExpr.closed(e)
            op = rng.below(3)
            if op == 0:
                v = rng.below(100)
                m = m.insert(key, v)
                om = om.insert(key, v)
            elif op == 1:
                m = m.delete(key)
                om = om.delete(key)
            got, want = m.lookup(key), om.lookup(key)
            if got != want:
                _counterexample([f"trial {trial}, step {step}",
                                 "key " + print_expr(e),
                                 f"trie answered {got!r}, oracle {want!r}"])
                return 1

    # Randomized: matching store against the one-at-a-time matcher.  Inserting
    # the same canonical pattern twice would overwrite in the map but stack up
    # in the naive list, so keep one entry per pattern.
    store = []
    canon_seen: list = []
    pm = PatMap.empty()
    n_patterns = 0 if trials == 0 else min(60, max(1, trials))
    for i in range(n_patterns):
        pvars, body = _random_pattern(rng)
        canon = PatExpr.make(pvars, body)
        if any(canon == c for c in canon_seen):
            continue
        canon_seen.append(canon)
        store.append(((pvars, body), i))
        pm = pm.insert(pvars, body, i)
    for trial in range(trials):
        target = _random_target(rng, store)
        got = sorted(pm.lookup(target), key=oracle.canonical_result_key)
        want = oracle.match_all(store, target)
        if got != want:
            _counterexample(["target " + print_expr(target),
                             f"trie found {len(got)} matches, oracle {len(want)}"])
            return 1

    print(f"selftest: OK ({trials} trials)")
    return 0


def _random_pattern(rng) -> tuple:
    body = bench_mod.gen_expr(rng, 1 + rng.below(12))
    names = sorted(_leaf_names(body))
    pvars = [n for n in names if rng.below(3) == 0][:3]
    if rng.below(4) == 0:
        pvars.append("q'")  # quantified but not occurring
    return pvars, body


def _random_target(rng, store):
    if store and rng.below(3) == 0:
        (pvars, body), _ = store[rng.below(len(store))]
        return _instantiate(rng, pvars, body)
    return bench_mod.gen_expr(rng, 1 + rng.below(12))


def _instantiate(rng, pvars, body):
    fills = {v: bench_mod.gen_expr(rng, 1 + rng.below(4)) for v in pvars}

    def go(e, hidden):
        if isinstance(e, Var):
            if e.name in fills and e.name not in hidden:
                return fills[e.name]
            return e
        if isinstance(e, App):
            return App(go(e.fun, hidden), go(e.arg, hidden))
        return Lam(e.binder, go(e.body, hidden | {e.binder}))

    return go(body, set())


def _leaf_names(e) -> set:
    out = set()
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


# ---------------------------------------------------------------------------
# match
# ---------------------------------------------------------------------------


def _parse_pattern_file(path: str) -> list:
    entries = []
    labels = set()
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}", 0, 0) from exc
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if ";" not in stripped or "=>" not in stripped:
            raise ParseError(f"{path}: expected 'VARS ; EXPR => LABEL'", lineno, 1)
        vars_part, rest = stripped.split(";", 1)
        expr_part, label = rest.rsplit("=>", 1)
        label = label.strip()
        pvars = vars_part.split()
        if not label:
            raise ParseError(f"{path}: empty label", lineno, 1)
        if label in labels:
            raise ParseError(f"{path}: duplicate label {label!r}", lineno, 1)
        if len(set(pvars)) != len(pvars):
            raise ParseError(f"{path}: duplicate pattern variable", lineno, 1)
        try:
            body = parse_expr(expr_part)
        except ParseError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}", lineno, 1) from exc
        labels.add(label)
        entries.append((pvars, body, label))
    return entries


def cmd_match(args) -> int:
    try:
        entries = _parse_pattern_file(args.patterns)
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return 2

    pm = PatMap.empty()
    for pvars, body, label in entries:
        pm = pm.insert(pvars, body, label)

    targets = args.targets if args.targets else [
        line for line in sys.stdin.read().splitlines() if line.strip()]
    for i, text in enumerate(targets):
        try:
            target = parse_expr(text)
        except ParseError as exc:
            origin = f"argument {i + 1}" if args.targets else f"stdin line {i + 1}"
            print(f"{origin}: {exc}", file=sys.stderr)
            return 2
        results = pm.lookup(target)
        if not results:
            print("no match")
            continue
        for subst, label in results:
            inside = ", ".join(f"{name}={print_expr(e)}" for name, e in subst)
            print(f"{label} {{ {inside} }}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
