"""Command line front end.

Exit codes: 0 on success (or a passing check), 1 when a mathematical check
fails (hypotheses violated, divergent potential, bound exceeded), 2 on input
or usage errors.  Output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional

from . import models
from .errors import (
    CertificationError,
    EvaluationRefused,
    GibbsFactorError,
)
from .gibbs import bgi_sweep, invariance_suite
from .potential import (
    PointSpec,
    UniformConstants,
    evaluate,
    finite_range_obstruction,
    holder_variation,
    periodic_potential,
    uniform_constants,
)
from .projection import (
    FactorSystem,
    check_h1,
    check_h2,
    check_topological_markov,
)
from .tmc import check_primitivity, enumerate_periodic


def _fmt(x: float) -> str:
    if x != x:
        return "n/a"
    if math.isinf(x):
        return "inf"
    return f"{x:.12g}"


def _split_labels(text: str) -> list[str]:
    if "," in text:
        return [t for t in text.split(",") if t]
    return list(text)


def _parse_point(fs: FactorSystem, text: str) -> PointSpec:
    if "/" in text:
        pre_text, per_text = text.split("/", 1)
    else:
        pre_text, per_text = "", text
    return PointSpec.from_labels(
        fs, _split_labels(pre_text), _split_labels(per_text)
    )


def _point_str(fs: FactorSystem, point: PointSpec) -> str:
    labels = fs.projection.target.labels
    pre = "".join(labels[s] for s in point.preperiod)
    per = "".join(labels[s] for s in point.period)
    return f"{pre}({per})*" if pre else f"({per})*"


def _try_constants(fs: FactorSystem) -> tuple[Optional[UniformConstants], Optional[str]]:
    try:
        return uniform_constants(fs), None
    except CertificationError as exc:
        return None, str(exc)


def cmd_check(args) -> int:
    fs = models.load_model(args.model)
    src = check_primitivity(fs.model.tmc)
    fac = check_primitivity(fs.factor_tmc)
    print(
        f"source: {fs.model.tmc.alphabet.size} symbols, "
        f"{'primitive (exponent ' + str(src.exponent) + ')' if src.primitive else 'not primitive'}"
    )
    print(
        f"factor: {fs.target_size} symbols, "
        f"{'primitive (exponent ' + str(fac.exponent) + ')' if fac.primitive else 'not primitive'}"
    )
    h1 = check_h1(fs)
    if h1.passed:
        print("fiber rows (H1): pass")
    else:
        print("fiber rows (H1): FAIL")
        for b, b2, row in h1.failures:
            print(f"  block {b}->{b2}: source row {row} is all zero")
    h2 = check_h2(fs)
    if h2.passed:
        scope = "pointwise" if h2.pointwise else "orbit level only"
        print(f"cycle positivity (H2): pass ({scope})")
    else:
        print("cycle positivity (H2): FAIL")
        for orbit in h2.orbit_failures:
            print(f"  cycle {orbit}: no rotation has a positive product")
    for w in h2.warnings:
        print(f"  note: {w}")
    tm = check_topological_markov(fs, depth=args.depth)
    if tm.status == "markov_certified":
        print("image subshift: Markov (certified by fiber rows)")
    elif tm.status == "markov_refuted":
        print(f"image subshift: not Markov at depth {tm.depth} (witness {tm.witness.labels})")
    else:
        print(f"image subshift: no missing word up to depth {tm.depth} (undecided)")
    constants, reason = _try_constants(fs)
    if constants is not None:
        print(
            "certification: window "
            f"{constants.window}, tau {_fmt(constants.tau)}, "
            f"theta {_fmt(constants.theta)}, d {_fmt(constants.d_const)}, "
            f"c_total {_fmt(constants.c_total)}, k_gibbs {_fmt(constants.k_gibbs)}"
        )
    else:
        print(f"certification: unavailable ({reason})")
    return 0 if (h1.passed and h2.passed) else 1


def cmd_potential(args) -> int:
    fs = models.load_model(args.model)
    point = _parse_point(fs, args.point)
    constants = None
    note = None
    if not args.adaptive:
        constants, note = _try_constants(fs)
    try:
        ev = evaluate(fs, point, target_error=args.tol, constants=constants)
    except EvaluationRefused as exc:
        print(f"refused: {exc}")
        if exc.window is not None:
            print(f"  offending step: positions {exc.window[0]}..{exc.window[1]}")
        return 1
    print(f"point: {_point_str(fs, point)}")
    if note:
        print(f"constants unavailable: {note}")
    if ev.mode == "diverged":
        print(f"diverged after {ev.terms_used} terms")
        print("subsequence clusters: " + ", ".join(_fmt(c) for c in ev.clusters))
        for n in ev.notes:
            print(f"note: {n}")
        return 1
    print(f"value: {_fmt(ev.value)}")
    print(f"error radius: {_fmt(ev.error_radius)}")
    print(f"terms: {ev.terms_used}")
    print(f"mode: {ev.mode}{' (certified)' if ev.certified else ' (uncertified)'}")
    for n in ev.notes:
        print(f"note: {n}")
    return 0


def cmd_periodic(args) -> int:
    fs = models.load_model(args.model)
    points = enumerate_periodic(fs.factor_tmc, args.max_period)
    if not points:
        print(f"no periodic points with period <= {args.max_period}")
        return 0
    any_diverged = False
    for pp in points:
        point = PointSpec(fs, (), pp.symbols)
        try:
            ev, pd = periodic_potential(fs, point, target_error=args.tol)
        except EvaluationRefused as exc:
            print(f"{_point_str(fs, point)}: refused ({exc})")
            any_diverged = True
            continue
        name = _point_str(fs, point)
        if ev.mode == "diverged":
            any_diverged = True
            print(
                f"{name}: diverged; clusters "
                + ", ".join(_fmt(c) for c in ev.clusters)
            )
            continue
        route = "eigendata" if pd is not None else "iterative"
        extra = f", spectral gap |l2|/rho {_fmt(pd.second_modulus / pd.rho)}" if pd else ""
        print(
            f"{name}: value {_fmt(ev.value)}, radius {_fmt(ev.error_radius)}, "
            f"{route}{' certified' if ev.certified else ' uncertified'}{extra}"
        )
    return 1 if any_diverged else 0


def cmd_holder(args) -> int:
    fs = models.load_model(args.model)
    constants, reason = _try_constants(fs)
    if constants is None:
        print(f"holder report needs certification constants: {reason}")
        return 1
    report = holder_variation(fs, constants, args.n_max)
    print(
        f"constants: tau {_fmt(constants.tau)}, theta {_fmt(constants.theta)}, "
        f"c_total {_fmt(constants.c_total)}, window {constants.window}"
    )
    print(
        f"metric exponent: {_fmt(report.exponent)} "
        f"(decay rate {_fmt(report.theta)} per symbol)"
    )
    print("n,var_n,bound_n")
    for n, (v, b) in enumerate(zip(report.var, report.bound)):
        print(f"{n},{_fmt(v)},{_fmt(b)}")
    if report.fitted_rate is not None:
        print(f"fitted decay rate: {_fmt(report.fitted_rate)}")
    print(f"bound satisfied: {'yes' if report.bound_ok else 'NO'}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("n,var_n,bound_n\n")
            for n, (v, b) in enumerate(zip(report.var, report.bound)):
                fh.write(f"{n},{v:.12g},{b:.12g}\n")
        print(f"wrote {args.csv}")
    return 0 if report.bound_ok else 1


def cmd_gibbs(args) -> int:
    fs = models.load_model(args.model)
    constants, reason = _try_constants(fs)
    if constants is None:
        print(f"constants unavailable ({reason}); sweep is uncertified")
    report = bgi_sweep(fs, args.n_max, constants=constants, target_error=args.tol)
    print("n,cylinder_count,K_emp,K_cert,slack,verdict")
    for r in report.rows:
        print(
            f"{r.n},{r.cylinder_count},{_fmt(r.k_emp)},{_fmt(r.k_cert)},"
            f"{_fmt(r.slack)},{r.verdict}"
        )
    for n in report.notes:
        print(f"note: {n}")
    if args.invariance:
        inv = invariance_suite(fs, min(args.n_max, 10))
        print(f"invariance residuals (max over n <= {min(args.n_max, 10)}): "
              f"{_fmt(inv.max_residual)}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
        print(f"wrote {args.csv}")
    return 1 if any(r.verdict == "fail" for r in report.rows) else 0


def cmd_obstruction(args) -> int:
    fs = models.load_model(args.model)
    report = finite_range_obstruction(fs)
    print(f"shared positive eigenvector of diagonal blocks: {report.shared_eigenvector}")
    print(f"some fiber block of rank one: {report.rank_one_block}")
    print(f"all-ones left eigenvector of every block: {report.ones_left_eigenvector}")
    if report.excluded:
        print("verdict: finite range excluded for the induced potential")
    else:
        print("verdict: finite range not excluded by this test")
    return 0


def cmd_example(args) -> int:
    doc = models.expand_example(args.id, gamma=args.gamma)
    text = models.dump_document(doc, args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gibbsfactor",
        description="Projections of Markov measures under one-block maps: "
        "hypothesis checks, induced potential, Gibbs-ratio sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify hypotheses and report certification constants")
    p.add_argument("model", help="path to a model JSON file")
    p.add_argument("--depth", type=int, default=12, help="search depth for the image subshift")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("potential", help="evaluate the induced potential at a point")
    p.add_argument("model")
    p.add_argument(
        "--point",
        required=True,
        help="eventually periodic point PRE/PERIOD over target labels, e.g. b/ac or /ab",
    )
    p.add_argument("--tol", type=float, default=1e-10, help="target error radius")
    p.add_argument(
        "--adaptive",
        action="store_true",
        help="skip uniform constants and use the point's own tail",
    )
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("periodic", help="potential at all periodic points up to a period")
    p.add_argument("model")
    p.add_argument("--max-period", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("holder", help="sampled variation of the potential with certified bound")
    p.add_argument("model")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--csv", help="write the variation table to a CSV file")
    p.set_defaults(func=cmd_holder)

    p = sub.add_parser("gibbs", help="empirical Gibbs-ratio sweep over cylinders")
    p.add_argument("model")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--csv", help="write the sweep to a CSV file")
    p.add_argument(
        "--invariance",
        action="store_true",
        help="also print the exact invariance residuals of the image measure",
    )
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("obstruction", help="finite-range obstruction for 2+2 full-shift factors")
    p.add_argument("model")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("example", help="write a built-in example model file")
    p.add_argument("id", choices=list(models.EXAMPLES))
    p.add_argument("--gamma", type=float, default=None, help="parameter for nongibbs6")
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EvaluationRefused, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GibbsFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
