"""Command-line frontend: tree generation, single computations, and
verification sweeps with machine-readable reports.

Exit codes: 0 when everything succeeded or verified; 1 when a verification
found a counterexample (the report carries a certificate that replays with
a single-instance subcommand); 2 on usage or input errors.

All randomness flows from --seed; sweep workers derive per-tree sub-seeds
deterministically, so reports are identical across runs and across --jobs
settings (rows are reduced in canonical order).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations

from .cyclekernel import ENUMERATION_CAP, det_via_cycles, det_via_tight_cycles
from .matroid import (
    ValuatedFn,
    check_delta_matroid,
    check_valuated_matroid,
    k_dissimilarity,
    odd_dissimilarity,
    represent_odd,
    rooted_k_dissimilarity,
    verify_rooted_representation,
)
from .metric import (
    MINUS_INF,
    check_4pc,
    check_dissimilarity,
    format_matrix_csv,
    hpp_eigen_check,
    parse_matrix_csv,
    power_matrix,
    realize_tree,
    spectral_signature,
    split_potentials,
)
from .minors import minor_formula, minor_leading, minor_oracle, signature
from .pfaffian import NotNicelyOrderedError, pf_formula, pf_oracle
from .poly import ExactPoly
from .tree import Tree, TreeFormatError, format_tree, random_tree, read_tree_file

_SEED_STRIDE = 1_000_003  # tree index -> sub-seed, documented and fixed


class CliError(Exception):
    """Usage-level problem: reported on stderr, exit code 2."""


# ---------------------------------------------------------------------------
# report plumbing


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if x == MINUS_INF:
        return "-inf"
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def _text_lines(x, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}:")
                lines.extend(
                    f"{pad}  {ln}" for ln in v.rstrip("\n").split("\n")
                )
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, dict):
                body = _text_lines(v, indent + 1)
                if body:
                    lines.append(f"{pad}- {body[0].strip()}")
                    lines.extend(body[1:])
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(f"{pad}{_scalar_text(x)}")
    return lines


def _scalar_text(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(u) for u in v) + "]"
    if v is None:
        return "-"
    return str(v)


def emit(report: dict, fmt: str) -> None:
    report = _jsonable(report)
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        rows = report.get("rows")
        if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
            header = sorted({k for r in rows for k in r})
            writer.writerow(header)
            for r in rows:
                writer.writerow([_scalar_text(r.get(k)) for k in header])
        else:
            for k in sorted(report):
                if k == "raw":
                    continue
                writer.writerow([k, _scalar_text(report[k])])
        sys.stdout.write(out.getvalue())
        return
    # text; a "raw" payload (e.g. a tree file) replaces the field dump so it
    # can be piped straight into a file
    raw = report.pop("raw", None)
    if raw is not None:
        sys.stdout.write(raw)
        return
    print("\n".join(_text_lines(report)))


# ---------------------------------------------------------------------------
# shared argument handling


def _parse_labels(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    except ValueError:
        raise CliError(f"expected comma-separated integer labels, got {text!r}")


def _parse_fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    except ValueError:
        raise CliError(f"expected comma-separated rationals, got {text!r}")


def _load_tree(args) -> tuple[Tree, str]:
    """Exactly one tree source: --tree FILE or --n SIZE (with --seed and
    --weights).  Returns the tree and its file-format text."""
    has_file = getattr(args, "tree", None) is not None
    has_n = getattr(args, "n", None) is not None
    if has_file == has_n:
        raise CliError("pass exactly one tree source: --tree FILE or --n SIZE")
    if has_file:
        T = read_tree_file(args.tree)
    else:
        T = random_tree(args.n, seed=args.seed, weights=args.weights)
    return T, format_tree(T)


def _read_matrix(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix_csv(fh.read())


def _leading_dict(poly) -> dict:
    e, c = poly.leading_term()
    return {"exp": e, "coeff": c}


def _violation_dict(v) -> dict:
    return {"quadruple": list(v.quadruple), "sums": list(v.sums), "text": str(v)}


def _exchange_dict(v) -> dict:
    return {
        "axiom": v.axiom,
        "X": list(v.X),
        "Y": list(v.Y),
        "pivot": v.pivot,
        "lhs": v.lhs,
        "best": v.best,
        "text": str(v),
    }


def _run_tasks(worker, tasks, jobs: int) -> list[dict]:
    if jobs <= 1 or len(tasks) <= 1:
        rows = [worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(worker, tasks))
    return sorted(rows, key=lambda r: r["tree_index"])


def _weight_mode(mode: str, index: int) -> str:
    if mode == "both":
        return "unit" if index % 2 == 0 else "rational"
    return mode


# ---------------------------------------------------------------------------
# subcommand handlers (each returns (exit_code, report))


def cmd_tree_gen(args):
    T = random_tree(args.n, seed=args.seed, weights=args.weights)
    text = format_tree(T)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return 0, {"written": args.out, "n": T.n}
    return 0, {
        "n": T.n,
        "edges": [[u, v, w] for u, v, w in T.edges()],
        "raw": text,
    }


def cmd_minor(args):
    T, text = _load_tree(args)
    X = _parse_labels(args.X)
    formula = minor_formula(T, X)
    oracle = minor_oracle(T, X)
    equal = formula == oracle
    report = {
        "tree": text,
        "X": X,
        "formula": str(formula),
        "oracle": str(oracle),
        "equal": equal,
        "leading": _leading_dict(formula),
    }
    return (0 if equal else 1), report


def _minor_verify_one(task: tuple) -> dict:
    index, subseed, max_n, mode, max_x = task
    rng = random.Random(subseed)
    size = rng.randint(2, max_n)
    T = random_tree(size, seed=subseed, weights=mode)
    checked = 0
    for r in range(1, min(size, max_x) + 1):
        for X in combinations(T.vertices, r):
            formula = minor_formula(T, X)
            oracle = minor_oracle(T, X)
            lead = minor_leading(T, X)
            if formula != oracle or lead != oracle.leading_term():
                return {
                    "tree_index": index,
                    "seed": subseed,
                    "n": size,
                    "weights": mode,
                    "checked": checked,
                    "ok": False,
                    "certificate": {
                        "tree": format_tree(T),
                        "X": list(X),
                        "formula": str(formula),
                        "oracle": str(oracle),
                    },
                }
            checked += 1
    return {
        "tree_index": index,
        "seed": subseed,
        "n": size,
        "weights": mode,
        "checked": checked,
        "ok": True,
    }


def cmd_minor_verify(args):
    tasks = [
        (
            i,
            args.seed * _SEED_STRIDE + i,
            args.n,
            _weight_mode(args.weights, i),
            args.max_x if args.max_x else args.n,
        )
        for i in range(args.trees)
    ]
    rows = _run_tasks(_minor_verify_one, tasks, args.jobs)
    bad = [r for r in rows if not r["ok"]]
    report = {
        "subcommand": "minor-verify",
        "trees": args.trees,
        "checked": sum(r["checked"] for r in rows),
        "failures": len(bad),
        "rows": rows,
    }
    return (1 if bad else 0), report


def cmd_pfaffian(args):
    T, text = _load_tree(args)
    X = _parse_labels(args.X)
    try:
        formula = pf_formula(T, X)
    except NotNicelyOrderedError as exc:
        nice = T.nice_order(X)
        raise CliError(
            f"{exc}; a nice order of these vertices is {','.join(map(str, nice))}"
        )
    oracle = pf_oracle(T, X)
    equal = formula == oracle
    report = {
        "tree": text,
        "X": X,
        "pfaffian": str(formula),
        "oracle": str(oracle),
        "equal": equal,
        "leading": _leading_dict(formula),
    }
    return (0 if equal else 1), report


def _pf_verify_one(task: tuple) -> dict:
    index, subseed, max_n, mode, negatives = task
    rng = random.Random(subseed)
    size = rng.randint(2, max_n)
    T = random_tree(size, seed=subseed, weights=mode)
    checked = 0
    # positives: every even-size subset, in its nice order
    for r in range(2, size + 1, 2):
        for sub in combinations(T.vertices, r):
            X = T.nice_order(sub)
            formula = pf_formula(T, X)
            oracle = pf_oracle(T, X)
            if formula != oracle:
                return {
                    "tree_index": index,
                    "seed": subseed,
                    "n": size,
                    "weights": mode,
                    "checked": checked,
                    "negatives": 0,
                    "ok": False,
                    "certificate": {
                        "tree": format_tree(T),
                        "X": list(X),
                        "pfaffian": str(formula),
                        "oracle": str(oracle),
                    },
                }
            checked += 1
    # negatives: hunt for orders that are not nice and whose Pfaffian is not
    # the plain odd-weight monomial (a non-nice order may still coincide by
    # luck; those draws are skipped, not failures)
    hit = 0
    tried = 0
    while hit < negatives and tried < 50 * max(negatives, 1):
        tried += 1
        if size < 2:
            break
        r = rng.randrange(2, size + 1, 2)
        sub = rng.sample(T.vertices, r)
        ok, _counts = T.is_nicely_ordered(sub)
        if ok:
            continue
        oracle = pf_oracle(T, sub)
        odd_weight = sum((T.weight(e) for e in T.odd_edges(sub)), Fraction(0))
        if oracle != ExactPoly.t_power(odd_weight):
            hit += 1
    return {
        "tree_index": index,
        "seed": subseed,
        "n": size,
        "weights": mode,
        "checked": checked,
        "negatives": hit,
        "ok": True,
    }


def cmd_pf_verify(args):
    tasks = [
        (
            i,
            args.seed * _SEED_STRIDE + i,
            args.n,
            _weight_mode(args.weights, i),
            args.negatives,
        )
        for i in range(args.trees)
    ]
    rows = _run_tasks(_pf_verify_one, tasks, args.jobs)
    bad = [r for r in rows if not r["ok"]]
    report = {
        "subcommand": "pf-verify",
        "trees": args.trees,
        "checked": sum(r["checked"] for r in rows),
        "negative_checks": sum(r["negatives"] for r in rows),
        "failures": len(bad),
        "rows": rows,
    }
    return (1 if bad else 0), report


def _cycles_verify_one(task: tuple) -> dict:
    index, subseed, max_n, mode, max_x = task
    rng = random.Random(subseed)
    size = rng.randint(2, max_n)
    T = random_tree(size, seed=subseed, weights=mode)
    checked = 0
    for r in range(1, min(size, max_x) + 1):
        for X in combinations(T.vertices, r):
            full = det_via_cycles(T, X)
            tight = det_via_tight_cycles(T, X)
            formula = minor_formula(T, X)
            if full != tight or tight != formula:
                return {
                    "tree_index": index,
                    "seed": subseed,
                    "n": size,
                    "weights": mode,
                    "checked": checked,
                    "ok": False,
                    "certificate": {
                        "tree": format_tree(T),
                        "X": list(X),
                        "all_cycles": str(full),
                        "tight_cycles": str(tight),
                        "formula": str(formula),
                    },
                }
            checked += 1
    return {
        "tree_index": index,
        "seed": subseed,
        "n": size,
        "weights": mode,
        "checked": checked,
        "ok": True,
    }


def cmd_cycles_verify(args):
    if args.max_x > ENUMERATION_CAP:
        raise CliError(
            f"--max-x {args.max_x} exceeds the enumeration cap {ENUMERATION_CAP}"
        )
    tasks = [
        (
            i,
            args.seed * _SEED_STRIDE + i,
            args.n,
            _weight_mode(args.weights, i),
            args.max_x,
        )
        for i in range(args.trees)
    ]
    rows = _run_tasks(_cycles_verify_one, tasks, args.jobs)
    bad = [r for r in rows if not r["ok"]]
    report = {
        "subcommand": "cycles-verify",
        "trees": args.trees,
        "checked": sum(r["checked"] for r in rows),
        "failures": len(bad),
        "rows": rows,
    }
    return (1 if bad else 0), report


def cmd_check_4pc(args):
    m = _read_matrix(args.matrix)
    try:
        bad = check_4pc(m)
    except ValueError as exc:
        raise CliError(str(exc))
    if bad is None:
        return 0, {"ok": True, "n": len(m)}
    return 1, {"ok": False, "n": len(m), "violation": _violation_dict(bad)}


def cmd_realize(args):
    m = _read_matrix(args.matrix)
    try:
        d = check_dissimilarity(m)
    except ValueError as exc:
        raise CliError(str(exc))
    bad = check_4pc(d)
    if bad is not None:
        return 1, {"ok": False, "violation": _violation_dict(bad)}
    T, placement = realize_tree(d)
    return 0, {
        "ok": True,
        "tree": format_tree(T),
        "placement": list(placement),
    }


def cmd_decompose(args):
    m = _read_matrix(args.matrix)
    d, p = split_potentials(m)
    try:
        d = check_dissimilarity(d)
    except ValueError as exc:
        return 1, {
            "ok": False,
            "reason": f"potential-reduced part is not a dissimilarity matrix: {exc}",
            "potentials": p,
        }
    bad = check_4pc(d)
    if bad is not None:
        return 1, {
            "ok": False,
            "violation": _violation_dict(bad),
            "potentials": p,
        }
    T, placement = realize_tree(d)
    return 0, {
        "ok": True,
        "potentials": p,
        "metric_csv": format_matrix_csv(d),
        "tree": format_tree(T),
        "placement": list(placement),
    }


def cmd_signature(args):
    has_matrix = args.matrix is not None
    has_tree = args.tree is not None or args.n is not None
    if has_matrix == has_tree:
        raise CliError("pass exactly one of --matrix FILE or a tree source")
    if has_matrix:
        m = _read_matrix(args.matrix)
        xs = _parse_labels(args.X) if args.X else None
        p, q, z = spectral_signature(m, Fraction(args.tau), xs)
        return 0, {"mode": "matrix", "tau": args.tau, "inertia": [p, q, z]}
    T, text = _load_tree(args)
    X = _parse_labels(args.X) if args.X else list(T.vertices)
    try:
        rep = signature(T, X)
    except ArithmeticError as exc:
        return 1, {"mode": "tree", "ok": False, "reason": str(exc), "tree": text}
    return 0, {
        "mode": "tree",
        "tree": text,
        "X": X,
        "positives": rep.positives,
        "negatives": rep.negatives,
        "rows": [
            {"prefix": m_, "leading_exp": e, "leading_coeff": c}
            for m_, e, c in rep.evidence
        ],
    }


def cmd_dissimilarity(args):
    T, text = _load_tree(args)
    ground = _parse_labels(args.ground) if args.ground else None
    if args.map == "k":
        fn = k_dissimilarity(T, args.k, ground=ground)
    elif args.map == "rooted":
        if args.root is None:
            raise CliError("--map rooted needs --root")
        fn = rooted_k_dissimilarity(T, args.root, args.k, ground=ground)
    else:  # odd
        fn = odd_dissimilarity(T, ground=ground)
    rows = [
        {"set": ",".join(str(x) for x in sorted(s)), "value": v}
        for s, v in fn.items()
    ]
    return 0, {"map": fn.to_json(), "rows": rows, "tree": text}


def cmd_check_matroid(args):
    with open(args.map, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "values" not in data and "map" in data:
        data = data["map"]  # tolerate a full `dissimilarity` report
    try:
        fn = ValuatedFn.from_json(data)
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad map file: {exc}")
    axiom = args.axiom
    if axiom == "auto":
        axiom = "matroid" if fn.k is not None else "delta"
    try:
        bad = (
            check_valuated_matroid(fn)
            if axiom == "matroid"
            else check_delta_matroid(fn)
        )
    except ValueError as exc:
        raise CliError(str(exc))
    if bad is None:
        return 0, {"ok": True, "axiom": axiom, "support": len(fn.support())}
    return 1, {"ok": False, "axiom": axiom, "violation": _exchange_dict(bad)}


def cmd_represent_rooted(args):
    T, text = _load_tree(args)
    ground = _parse_labels(args.ground) if args.ground else None
    window = Fraction(args.window) if args.window else None
    rep, reseeds = verify_rooted_representation(
        T,
        args.root,
        args.k,
        ground=ground,
        window=window,
        seed=args.seed,
        max_reseeds=args.max_reseeds,
    )
    expected = rooted_k_dissimilarity(T, args.root, args.k, ground=rep.ground)
    rows = []
    for Y in combinations(rep.ground, rep.k):
        rows.append(
            {
                "Y": ",".join(str(y) for y in Y),
                "valuation": rep.series_valuation(Y),
                "subtree_weight": expected.value(Y),
                "exact_minor_valuation": rep.exact_minor_valuation(Y),
            }
        )
    return 0, {
        "tree": text,
        "root": args.root,
        "k": args.k,
        "ground": list(rep.ground),
        "window": rep.window,
        "reseeds": reseeds,
        "rows": rows,
    }


def cmd_represent_odd(args):
    T, text = _load_tree(args)
    ground = _parse_labels(args.ground) if args.ground else None
    rep = represent_odd(T, ground=ground)
    if len(rep.order) > 12:
        raise CliError(
            "exhaustive check over subsets needs at most 12 represented "
            "vertices; pass a smaller --ground"
        )
    fn = odd_dissimilarity(T, ground=rep.order)
    mismatches = []
    checked = 0
    for r in range(0, len(rep.order) + 1, 2):
        for X in combinations(rep.order, r):
            want = fn.value(X)
            got = rep.value(X)
            dual = rep.dual_value(X)
            if got != want or dual != (-want if want != MINUS_INF else want):
                mismatches.append(
                    {
                        "X": list(X),
                        "value": got,
                        "dual": dual,
                        "expected": want,
                    }
                )
            checked += 1
    report = {
        "tree": text,
        "order": list(rep.order),
        "checked": checked,
        "mismatches": mismatches,
    }
    return (1 if mismatches else 0), report


def cmd_hpp_check(args):
    m = _read_matrix(args.matrix)
    taus = _parse_fractions(args.taus) if args.taus else (Fraction(10), Fraction(100))
    try:
        out = hpp_eigen_check(m, taus)
    except ValueError as exc:
        raise CliError(str(exc))
    if out is None:
        return 0, {"ok": True, "taus": list(taus)}
    if isinstance(out, Fraction):
        return 1, {"ok": False, "failing_tau": out}
    return 1, {"ok": False, "violation": _violation_dict(out)}


# ---------------------------------------------------------------------------
# parser


def _add_format(p):
    p.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default="text",
        help="report format (default text)",
    )


def _add_seed(p):
    p.add_argument("--seed", type=int, default=0, help="master random seed")


def _add_jobs(p):
    p.add_argument(
        "--jobs", type=int, default=1, help="parallel workers for sweeps"
    )


def _add_tree_source(p):
    p.add_argument("--tree", help="tree description file")
    p.add_argument("--n", type=int, help="generate a random tree on n vertices")
    p.add_argument(
        "--weights",
        choices=("unit", "rational"),
        default="unit",
        help="weights for a generated tree",
    )


def _add_sweep_args(p, trees_default, n_default):
    p.add_argument("--trees", type=int, default=trees_default)
    p.add_argument("--n", type=int, default=n_default, help="largest tree size")
    p.add_argument(
        "--weights",
        choices=("unit", "rational", "both"),
        default="both",
        help="weight mode; 'both' alternates by tree index",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeminor",
        description="exact minor/Pfaffian formulas for tree-distance matrices, "
        "tree-metric checks, and dissimilarity-map representations",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("tree-gen", help="generate a random weighted tree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--weights", choices=("unit", "rational"), default="unit"
    )
    p.add_argument("--out", help="write the tree file here instead of stdout")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_tree_gen)

    p = sub.add_parser("minor", help="minor formula and oracle for one X")
    _add_tree_source(p)
    p.add_argument("--X", required=True, help="comma-separated vertex labels")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_minor)

    p = sub.add_parser("minor-verify", help="sweep: formula vs oracle vs leading term")
    _add_sweep_args(p, trees_default=50, n_default=6)
    p.add_argument("--max-x", type=int, default=0, help="cap |X| (0: no cap)")
    _add_seed(p)
    _add_jobs(p)
    _add_format(p)
    p.set_defaults(handler=cmd_minor_verify)

    p = sub.add_parser("pfaffian", help="Pfaffian monomial and oracle for one X")
    _add_tree_source(p)
    p.add_argument("--X", required=True, help="nicely ordered, even size")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_pfaffian)

    p = sub.add_parser("pf-verify", help="sweep: Pfaffian formula + negative orders")
    _add_sweep_args(p, trees_default=30, n_default=8)
    p.add_argument(
        "--negatives", type=int, default=3, help="non-nice orders to test per tree"
    )
    _add_seed(p)
    _add_jobs(p)
    _add_format(p)
    p.set_defaults(handler=cmd_pf_verify)

    p = sub.add_parser(
        "cycles-verify", help="sweep: cycle-partition expansions vs the formula"
    )
    _add_sweep_args(p, trees_default=10, n_default=6)
    p.add_argument("--max-x", type=int, default=6, help="cap |X| (enumeration!)")
    _add_seed(p)
    _add_jobs(p)
    _add_format(p)
    p.set_defaults(handler=cmd_cycles_verify)

    p = sub.add_parser("check-4pc", help="four-point condition on a CSV matrix")
    p.add_argument("--matrix", required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_check_4pc)

    p = sub.add_parser("realize", help="build a tree realizing a tree metric")
    p.add_argument("--matrix", required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_realize)

    p = sub.add_parser(
        "decompose", help="split off potentials, then realize the metric part"
    )
    p.add_argument("--matrix", required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser(
        "signature",
        help="inertia of a powered matrix, or the exact minor sign report",
    )
    p.add_argument("--matrix", help="exponent matrix CSV (with --tau)")
    p.add_argument("--tau", default="10", help="base for --matrix mode")
    _add_tree_source(p)
    p.add_argument("--X", help="vertex subset (tree mode) or index subset")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_signature)

    p = sub.add_parser("dissimilarity", help="tabulate a dissimilarity map")
    _add_tree_source(p)
    p.add_argument("--map", choices=("k", "rooted", "odd"), required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--root", type=int)
    p.add_argument("--ground", help="comma-separated ground labels")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_dissimilarity)

    p = sub.add_parser(
        "check-matroid", help="exchange axioms on a JSON map file"
    )
    p.add_argument("--map", required=True, help="ValuatedFn JSON file")
    p.add_argument(
        "--axiom", choices=("auto", "matroid", "delta"), default="auto"
    )
    _add_format(p)
    p.set_defaults(handler=cmd_check_matroid)

    p = sub.add_parser(
        "represent-rooted",
        help="series representation of the rooted subtree-weight map, verified",
    )
    _add_tree_source(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ground", help="comma-separated ground labels")
    p.add_argument(
        "--window",
        help="truncation window (default: 4x the matrix exponent spread); "
        "raise it if you see 'insufficient precision'",
    )
    p.add_argument("--max-reseeds", type=int, default=5)
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_represent_rooted)

    p = sub.add_parser(
        "represent-odd",
        help="skew representation of the odd-edge map, verified exhaustively",
    )
    _add_tree_source(p)
    p.add_argument("--ground", help="comma-separated ground labels")
    _add_seed(p)
    _add_format(p)
    p.set_defaults(handler=cmd_represent_odd)

    p = sub.add_parser(
        "hpp-check", help="eigenvalue-count and four-point test for a pair matrix"
    )
    p.add_argument("--matrix", required=True)
    p.add_argument("--taus", help="comma-separated bases (default 10,100)")
    _add_format(p)
    p.set_defaults(handler=cmd_hpp_check)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own message
        return 2 if exc.code not in (0, None) else 0
    try:
        code, report = args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreeFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        # verification-level failure (sign break, insufficient precision, ...)
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    emit(report, args.format)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
