"""Command-line front end: bounds tables, beta pipeline, and the code lab.

Exit statuses: 0 success, 1 usage error, 2 numeric failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, lab, pipeline
from .optimize import OptimizerConfig
from .selections import conjectured_selection, enumerate_selections

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_BUDGET = 3


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _emit(args, payload: dict, text_lines: list, csv_rows: list | None = None):
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        out = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        if csv_rows is None:
            raise SystemExit("csv format not supported for this command")
        out = "\n".join(",".join(_fmt(c) for c in row) for row in csv_rows) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    dest = getattr(args, "out", None)
    if dest:
        with open(dest, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        num_starts=getattr(args, "starts", 200),
        seed=getattr(args, "seed", 0),
        tolerance=getattr(args, "tolerance", 1e-10),
    )


def cmd_bounds(args) -> int:
    k = args.k
    b = args.b if args.b is not None else k
    rows = [("quantity", "value", "exact")]
    lines = [f"Reference bounds for ({b},{k})-hashing" if b != k
             else f"Reference bounds for k = {k}"]
    entries = []
    entries.append(("trivial_upper", bounds.trivial_upper(k), ""))
    entries.append(("prob_lower", bounds.prob_lower(k), ""))
    if k >= 4:
        alpha = bounds.fk_alpha(k, exact=True)
        entries.append(("fk_alpha", float(alpha), str(alpha)))
        km, km_j = bounds.km_bound(b, k)
        entries.append((f"korner_marton (j={km_j})", km, ""))
        entries.append(("arikan", bounds.arikan_bound(b, k), ""))
    else:
        lines.append("  (alpha / Korner-Marton / Arikan need k >= 4)")
    payload = {"k": k, "b": b, "bounds": {}}
    for name, val, exact in entries:
        lines.append(f"  {name:24s} {_fmt(val):>16s}" + (f"  (= {exact})" if exact else ""))
        rows.append((name, val, exact))
        payload["bounds"][name] = pipeline._sig(val)
    _emit(args, payload, lines, rows)
    return EXIT_OK


def cmd_beta(args) -> int:
    config = _config(args)
    try:
        report = pipeline.compute_beta(args.k, mode=args.mode, config=config)
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    d = report.to_dict()
    lines = [f"Improved upper bound for k = {report.k} ({args.mode} mode)"]
    lines.append(f"  alpha                    {_fmt(report.alpha)}")
    lines.append(f"  beta                     {_fmt(report.beta)}")
    lines.append(f"  gamma*                   {_fmt(report.gamma_star)}")
    lines.append(f"  theta (closed form)      {_fmt(report.theta_closed_at_gamma_star)}")
    lines.append(f"  theta (constrained)      {_fmt(report.theta_constrained_at_gamma_star)}")
    if report.conjecture is not None:
        c = report.conjecture
        lines.append(f"  conjecture holds         {c.holds} (margin {_fmt(c.margin)})")
        for sid, val in c.per_selection_max:
            lines.append(f"    selection {sid:20s} {_fmt(val)}")
    for name, val in report.references.items():
        lines.append(f"  ref {name:20s} {_fmt(val)}")
    _emit(args, d, lines)
    if args.figure:
        from . import plots
        plots.plot_balance(report.k, report.gamma_star, args.figure)
    ok = report.beta < report.alpha
    if args.mode == "verified" and report.conjecture is not None:
        ok = ok and report.conjecture.holds
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_theta(args) -> int:
    config = _config(args)
    k = args.k
    pole = 1.0 / (k * k - 2 * k)
    lo = args.gamma_min if args.gamma_min is not None else pole + 0.5 * (1.0 / k - pole)
    hi = args.gamma_max if args.gamma_max is not None else 1.0 / k
    if not (pole < lo <= hi <= 1.0 / k + 1e-12):
        print(f"gamma range must lie in ({_fmt(pole)}, 1/k]", file=sys.stderr)
        return EXIT_USAGE
    pts = args.points
    gammas = [lo + (hi - lo) * i / (pts - 1) for i in range(pts)] if pts > 1 else [lo]
    rows = pipeline.continuity_probe(k, gammas, config)
    csv_rows = [("gamma", "theta_hat", "theta_closed")]
    lines = [f"theta sweep, k = {k}", f"  {'gamma':>14s} {'theta_hat':>14s} {'closed':>14s}"]
    payload = {"k": k, "rows": []}
    for g, th in rows:
        closed = bounds.theta_closed(k, g)
        csv_rows.append((g, th, closed))
        lines.append(f"  {_fmt(g):>14s} {_fmt(th):>14s} {_fmt(closed):>14s}")
        payload["rows"].append({"gamma": pipeline._sig(g), "theta_hat": pipeline._sig(th),
                                "theta_closed": pipeline._sig(closed)})
    _emit(args, payload, lines, csv_rows)
    if args.figure:
        from . import plots
        plots.plot_theta_sweep(k, rows, args.figure)
    return EXIT_OK


def cmd_selections(args) -> int:
    sels = enumerate_selections(args.k)
    conj = conjectured_selection(args.k)
    lines = [f"q_{args.k} = {len(sels)} candidate top-(k-1) selections"]
    payload = {"k": args.k, "count": len(sels), "selections": []}
    csv_rows = [("selection", "conjectured")]
    for sel in sels:
        is_conj = sel.indices == conj.indices
        mark = "  *conjectured*" if is_conj else ""
        lines.append(f"  {sel.canonical()}{mark}")
        payload["selections"].append({"pairs": sel.canonical(), "conjectured": is_conj})
        csv_rows.append((sel.canonical(), is_conj))
    _emit(args, payload, lines, csv_rows)
    return EXIT_OK


def cmd_verify_conjecture(args) -> int:
    config = _config(args)
    if args.gamma is not None:
        gamma = args.gamma
    else:
        gamma = pipeline.solve_threshold(args.k).gamma_star
    verdict = pipeline.verify_conjecture(args.k, gamma, config)
    lines = [f"Conjecture check, k = {args.k}, gamma = {_fmt(gamma)}"]
    for sid, val in verdict.per_selection_max:
        lines.append(f"  selection {sid:20s} {_fmt(val)}")
    lines.append(f"  conjectured value        {_fmt(verdict.conjectured_value)}")
    lines.append(f"  margin                   {_fmt(verdict.margin)}")
    lines.append(f"  holds                    {verdict.holds}")
    if not verdict.all_converged:
        lines.append("  warning: some optimizer starts did not converge")
    payload = {
        "k": args.k,
        "gamma": pipeline._sig(gamma),
        "per_selection_max": [[s, pipeline._sig(v)] for s, v in verdict.per_selection_max],
        "conjectured_value": pipeline._sig(verdict.conjectured_value),
        "margin": pipeline._sig(verdict.margin),
        "holds": verdict.holds,
        "all_converged": verdict.all_converged,
    }
    _emit(args, payload, lines)
    return EXIT_OK if verdict.holds else EXIT_NUMERIC


def cmd_check(args) -> int:
    try:
        with open(args.file) as fh:
            code = lab.Code.from_text(fh.read())
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"parse error in {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sep_k = args.sep_k if args.sep_k is not None else code.k
    try:
        ok, witness = lab.is_k_separated(code, k=sep_k, budget=args.budget)
    except lab.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    lines = [f"Code: alphabet {code.k}, length {code.n}, {code.size} words, "
             f"rate {_fmt(code.rate)}"]
    payload = {"alphabet": code.k, "n": code.n, "size": code.size,
               "rate": pipeline._sig(code.rate), "separation_order": sep_k,
               "separated": ok}
    lines.append(f"  {sep_k}-separated: {ok}")
    if not ok:
        wit = [" ".join(str(s + 1) for s in w) for w in witness]
        payload["witness"] = wit
        lines.append("  violating subset:")
        for w in wit:
            lines.append(f"    {w}")
    if args.gamma is not None:
        profile = lab.frequency_profile(code)
        lines.append(f"  frequency profile (gamma = {_fmt(args.gamma)}):")
        payload["frequencies"] = [[pipeline._sig(float(x)) for x in f] for f in profile]
        for i, f in enumerate(profile):
            lines.append(f"    coord {i + 1}: " + " ".join(_fmt(float(x)) for x in f))
        if code.k >= 4:
            cls = lab.classify(code, args.gamma)
            near = [i + 1 for i in cls.near_uniform]
            payload["near_uniform"] = near
            payload["ell"] = cls.ell
            lines.append(f"  near-uniform coordinates: {near}")
            lines.append(f"  ell = {cls.ell}")
    if args.hansel is not None and ok:
        j = args.hansel
        fixed = code.words[:j]
        try:
            if j == sep_k - 2:
                res = lab.hansel_check(code, fixed, k=sep_k,
                                       skip_separation_check=True)
            else:
                res = lab.hypergraph_hansel_check(code, sep_k, j, fixed,
                                                  skip_separation_check=True)
        except ValueError as exc:
            print(f"hansel check error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        payload["hansel"] = {"j": j, "lhs": pipeline._sig(res["lhs"]),
                             "rhs": pipeline._sig(res["rhs"]),
                             "satisfied": res["satisfied"]}
        lines.append(f"  hansel (j={j}): lhs {_fmt(res['lhs'])} <= rhs "
                     f"{_fmt(res['rhs'])}: {res['satisfied']}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        code = lab.random_code_search(args.k, args.n, trials=args.trials,
                                      seed=args.seed, budget=args.budget)
    except lab.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    lines = [f"found {args.k}-separated code: {code.size} words, length {code.n}, "
             f"rate {_fmt(code.rate)}",
             f"  probabilistic lower bound reference: {_fmt(bounds.prob_lower(args.k))}"]
    lines.extend("  " + " ".join(str(s + 1) for s in w) for w in code.words)
    payload = {"k": args.k, "n": args.n, "size": code.size,
               "rate": pipeline._sig(code.rate),
               "words": [[s + 1 for s in w] for w in code.words]}
    _emit(args, payload, lines)
    if args.out_code:
        with open(args.out_code, "w") as fh:
            fh.write(code.to_text())
    return EXIT_OK


def _add_common(p, starts_default=200):
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=starts_default)
    p.add_argument("--tolerance", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khash",
        description="Upper bounds on the rate of k-hash codes, and a code lab.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="reference bound table for k (or b,k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("beta", help="solve gamma* and compute the improved bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["closed", "verified"], default="closed")
    p.add_argument("--figure", help="write the balancing figure to this file")
    _add_common(p)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("theta", help="gamma sweep of the optimized theta")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--figure", help="write the sweep figure to this file")
    _add_common(p, starts_default=60)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("selections", help="enumerate the q_k candidate selections")
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_selections)

    p = sub.add_parser("verify-conjecture",
                       help="optimize all functionals and compare to the conjectured one")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--gamma", type=float, default=None,
                   help="threshold (default: solve for gamma*)")
    _add_common(p)
    p.set_defaults(func=cmd_verify_conjecture)

    p = sub.add_parser("check", help="verify separation and properties of a code file")
    p.add_argument("file")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--hansel", type=int, default=None, metavar="J",
                   help="run the Hansel check with the first J words fixed")
    p.add_argument("--sep-k", type=int, default=None,
                   help="separation order (default: the code alphabet size)")
    p.add_argument("--budget", type=int, default=10**8)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="random greedy search for a separated code")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--out-code", help="also write the found code in file format")
    _add_common(p)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except lab.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
