"""Command-line front end: ``orderlab {verify,folner,entropy,pairs}``.

Exit codes: 0 everything passed, 1 a check found a mathematical violation,
2 bad usage or configuration.  Reports are JSON with sorted keys, so equal
arguments (including ``--seed``) give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .entropy import FinitePartitionSpec, ShiftMeasure, measure_entropy, pinsker_check
from .errors import OrderlabError
from .folner import defect_trend
from .groups import GroupElement, Heisenberg, IntegerLattice, Unipotent, identity
from .order import standard_context, verify_admissibility, verify_past_axioms
from .pairs import (
    ASYMPTOTIC,
    LI_YORKE,
    SparseSet,
    base_configuration,
    chaotic_sample,
    is_asymptotic_truncated,
    li_yorke_witness,
    make_finite_difference_pair,
    reverify_li_yorke,
    semigroup_members,
)
from .shift import ShiftSystem, top_entropy_estimate

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


def thread_cap() -> int:
    """Worker cap from ``ORDERLAB_THREADS`` (all current workloads run on one thread)."""
    raw = os.environ.get("ORDERLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"ORDERLAB_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError("ORDERLAB_THREADS must be >= 1")
    return n


def _group(args):
    kind = args.group
    try:
        if kind == "zd":
            return IntegerLattice(args.d)
        if kind == "heisenberg":
            return Heisenberg()
        if kind == "unipotent":
            return Unipotent(args.d)
    except OrderlabError as exc:
        raise UsageError(str(exc))
    raise UsageError(f"unknown group {kind!r}")


def _positive(name, value):
    if value is None or value < 1:
        raise UsageError(f"--{name} must be a positive integer")
    return value


def _parse_element(group, text: str) -> GroupElement:
    text = text.strip()
    if text in ("e", "id", "identity"):
        return identity(group)
    if isinstance(group, Heisenberg) and text.upper() in ("T1", "T2", "T3"):
        return group.element({"T1": (0, 0, 1), "T2": (0, 1, 0), "T3": (1, 0, 0)}[text.upper()])
    try:
        return group.element(tuple(int(v) for v in text.split(",")))
    except (ValueError, OrderlabError):
        raise UsageError(f"cannot read {text!r} as an element of {group}")


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--range expects lo:hi, got {text!r}")
    if not 1 <= lo < hi:
        raise UsageError("--range needs 1 <= lo < hi")
    return lo, hi


def _add_group_args(p, default="zd"):
    p.add_argument("--group", choices=["zd", "heisenberg", "unipotent"], default=default)
    p.add_argument("--d", type=int, default=None, help="dimension for zd (default 1) or unipotent (default 2)")


def _resolve_d(args):
    args.d_explicit = args.d is not None
    if args.command == "pairs" and args.d is None:
        cells = [c for c in args.diff.split(";") if c.strip() and c.strip().lower() != "none"]
        if cells:
            args.d = len(cells[0].split(","))
        elif args.mode == "asymptotic":
            args.d = 2
    if args.d is None:
        args.d = 2 if args.group == "unipotent" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orderlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="algebraic-past axioms and semigroup admissibility")
    _add_group_args(p)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("folner", help="exact Følner defects over a range of boxes")
    _add_group_args(p)
    p.add_argument("--g", required=True, help="translator: comma coords, e, or T1/T2/T3 for heisenberg")
    p.add_argument("--range", required=True)
    p.add_argument("--threshold", default="1/5")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("entropy", help="pattern-count entropy, measure entropy, Pinsker checks")
    _add_group_args(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--sft", help="SFT description file")
    src.add_argument("--full", action="store_true", help="full shift")
    src.add_argument("--measure", help="measure JSON file")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--pinsker", action="store_true")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--alpha", default=None, help="coordinates for alpha, ';' separated (default identity)")
    p.add_argument("--beta", default=None, help="coordinates for beta, ';' separated (default identity)")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("pairs", help="asymptotic and Li-Yorke pair witnesses")
    p.add_argument("mode", choices=["asymptotic", "liyorke"])
    _add_group_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--diff", default="none", help="difference cells, ';' separated, or none")
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--eps", type=float, default=0.125)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--k0", type=int, default=3)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--sample", type=int, default=0, help="also build a pairwise Li-Yorke sample of this size")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    return parser


def cmd_verify(args) -> tuple[int, dict]:
    group = _group(args)
    _positive("radius", args.radius)
    _positive("nmax", args.nmax)
    ctx = standard_context(group)
    axioms = verify_past_axioms(ctx, args.radius)
    adm = verify_admissibility(ctx, args.nmax, args.radius)
    ok = axioms.passed and adm.passed
    return (0 if ok else 1), {"axioms": axioms.to_json(), "admissibility": adm.to_json(), "passed": ok}


def cmd_folner(args) -> tuple[int, dict]:
    group = _group(args)
    g = _parse_element(group, args.g)
    lo, hi = _parse_range(args.range)
    try:
        threshold = Fraction(args.threshold)
    except ValueError:
        raise UsageError("--threshold must be a number or fraction")
    series = defect_trend(group, g, lo, hi, threshold)
    report = series.to_json()
    report["csv"] = series.to_csv()
    return (0 if series.passed else 1), report


def _parse_cells(group, text):
    if text is None or text.strip().lower() in ("", "none"):
        return []
    return [_parse_element(group, part).coords for part in text.split(";") if part.strip()]


def cmd_entropy(args) -> tuple[int, dict]:
    group = _group(args)
    if args.sft:
        try:
            text = Path(args.sft).read_text()
        except OSError as exc:
            raise UsageError(str(exc))
        sys_ = ShiftSystem.from_text(text, group if args.d_explicit or args.group != "zd" else None)
        est = top_entropy_estimate(sys_, _positive("n", args.n))
        return 0, {"mode": "sft", "group": sys_.group.name, **est.to_json()}
    if args.full:
        sys_ = ShiftSystem(group, args.alphabet)
        est = top_entropy_estimate(sys_, _positive("n", args.n))
        return 0, {"mode": "full", "group": group.name, **est.to_json()}
    try:
        data = json.loads(Path(args.measure).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read measure file: {exc}")
    mu = ShiftMeasure.from_json(data, group if args.d_explicit or args.group != "zd" else None)
    report = {"mode": "measure", "group": mu.group.name, "measure": mu.to_json(), "entropy": measure_entropy(mu)}
    code = 0
    if args.pinsker:
        g = mu.group
        e = [g.identity_coords]
        alpha = FinitePartitionSpec.at(g, *(_parse_cells(g, args.alpha) or e))
        beta = FinitePartitionSpec.at(g, *(_parse_cells(g, args.beta) or e))
        rep = pinsker_check(mu, alpha, beta, _positive("radius", args.radius))
        report["pinsker"] = rep.to_json()
        tol = 1e-12 if mu.kind == "bernoulli" else 1e-10
        report["pinsker"]["tolerance"] = tol
        report["pinsker"]["passed"] = abs(rep.gap) < tol
        code = 0 if abs(rep.gap) < tol else 1
    return code, report


def cmd_pairs(args) -> tuple[int, dict]:
    group = _group(args)
    if args.mode == "liyorke":
        if not isinstance(group, IntegerLattice):
            raise UsageError("Li-Yorke witnesses are only constructed on Z^d")
        if not 0 < args.delta < 1:
            raise UsageError("--delta must lie in (0, 1)")
        D = SparseSet.powers_of_two(group, _positive("k0", args.k0), args.depth)
        base = base_configuration(group, D.window_radius, args.alphabet, args.seed)
        y, verdict = li_yorke_witness(base, D, args.delta)
        rechecked = reverify_li_yorke(base, y, verdict, args.delta) if verdict.kind == LI_YORKE else False
        report = {
            "mode": "liyorke",
            "group": group.name,
            "seed": args.seed,
            "difference_scalars": list(D.scalars),
            "verdict": verdict.to_json(),
            "reverified": rechecked,
        }
        ok = verdict.kind == LI_YORKE and rechecked
        if args.sample:
            sample = chaotic_sample(group, args.sample, args.delta, seed=args.seed)
            report["sample"] = sample.to_json()
            ok = ok and sample.passed
        return (0 if ok else 1), report

    horizon = _positive("horizon", args.horizon)
    ctx = standard_context(group)
    if not isinstance(group, IntegerLattice):
        raise UsageError("pairs asymptotic builds its base configuration on Z^d")
    base = base_configuration(group, 2 * horizon, args.alphabet, args.seed)
    D = _parse_cells(group, args.diff)
    y = make_finite_difference_pair(base, D)
    verdict = is_asymptotic_truncated(base, y, semigroup_members(ctx, horizon), args.eps, horizon)
    report = {
        "mode": "asymptotic",
        "group": group.name,
        "seed": args.seed,
        "eps": args.eps,
        "difference_set": [list(c) for c in D],
        "verdict": verdict.to_json(),
    }
    return (0 if verdict.kind == ASYMPTOTIC else 1), report


COMMANDS = {"verify": cmd_verify, "folner": cmd_folner, "entropy": cmd_entropy, "pairs": cmd_pairs}


def _text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict) and "passed" in value:
            lines.append(f"{key}: {'PASS' if value['passed'] else 'FAIL'}")
        elif not isinstance(value, (dict, list)) or key == "passed":
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    if hasattr(args, "group"):
        _resolve_d(args)
    try:
        thread_cap()
        code, report = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"orderlab: error: {exc}", file=sys.stderr)
        return 2
    except OrderlabError as exc:
        print(f"orderlab: error: {exc}", file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **report}
    if args.format == "csv" and "csv" in report:
        out = report["csv"]
    elif args.format == "text":
        out = _text(report)
    else:
        out = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
