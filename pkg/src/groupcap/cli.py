"""Command-line entry point: ``groupcap bounds|simulate|mi|verify``.

Reports go to stdout and diagnostics to stderr.  Exit status is 0 on
success, 1 when a verification suite fails and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import full_report
from .channel import coset_capacity, mutual_information, shannon_capacity, uniform_on
from .ensemble.code import GENERATOR_MODES, EnsembleConfig
from .ensemble.montecarlo import monte_carlo_error
from .group import coset_of, make_group
from .specfile import SpecError, digest, parse_channel_text
from .verify import default_suites, group_suites

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _emit(report: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in text_lines(report):
            print(line)


def _load(path: str):
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SpecError(f"{path}: not UTF-8 text") from exc
    return parse_channel_text(text, path), digest(raw)


def _header(command: str, path: str | None, input_digest: str | None, params: dict) -> dict:
    out = {"tool": "groupcap", "version": __version__, "command": command, "params": params}
    if path is not None:
        out["input"] = path
        out["input_digest"] = input_digest
    return out


def parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def parse_weights(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse weights {text!r}") from exc


def parse_group_arg(text: str):
    """``"2^2"``, ``"2^1,3^1"`` or ``"2,3"`` (exponent 1 by default)."""
    rings = []
    for part in text.split(","):
        p, _, r = part.strip().partition("^")
        try:
            rings.append((int(p), int(r) if r else 1))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"cannot parse group {text!r}") from exc
    try:
        return make_group(rings)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_coset_arg(text: str):
    """``"theta:rep"`` with comma-separated components, e.g. ``"1,0:1,2"``."""
    th, sep, rep = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("coset must look like THETA:REP, e.g. 1:0")
    try:
        return tuple(int(t) for t in th.split(",")), tuple(int(t) for t in rep.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse coset {text!r}") from exc


def _num(x: float):
    # JSON has no infinity; keep non-finite values readable
    return x if math.isfinite(x) else str(x)


# -- bounds ------------------------------------------------------------------


def cmd_bounds(args):
    channel, dig = _load(args.spec)
    rep = full_report(channel, tol=args.tol)
    data = rep.to_dict()
    data["lower"], data["upper"] = _num(rep.lower), _num(rep.upper)
    report = _header("bounds", args.spec, dig, {"tol": args.tol})
    report["bounds"] = data
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    return report, _bounds_text, EXIT_OK


def _fmt_theta(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def _bounds_text(report: dict):
    b = report["bounds"]
    yield f"input   {report['input']}  {report['input_digest']}"
    yield f"lower   {b['lower']:.10f}" if isinstance(b["lower"], float) else f"lower   {b['lower']}"
    yield f"upper   {b['upper']:.10f}" if isinstance(b["upper"], float) else f"upper   {b['upper']}"
    yield f"shannon {b['shannon']:.10f}"
    yield "lower weights " + " ".join(f"{w:.6f}" for w in b["lower_weights"])
    yield "upper weights " + " ".join(f"{w:.6f}" for w in b["upper_weights"])
    yield "binding lower " + " ".join(_fmt_theta(t) for t in b["binding_lower"])
    yield "binding upper " + " ".join(_fmt_theta(t) for t in b["binding_upper"])
    yield f"symmetric {b['symmetric']}"
    yield ""
    yield f"{'theta':<12}{'w_H coeffs':<24}{'averaged':>12}{'best':>12}  maximal  optimal coset"
    for s in b["subgroups"]:
        coeffs = ",".join(f"{c:.3g}" for c in s["coeffs"])
        yield (
            f"{_fmt_theta(s['theta']):<12}{coeffs:<24}{s['averaged']:>12.6f}{s['best']:>12.6f}"
            f"  {str(s['maximal']):<8} {_fmt_theta(s['optimal_coset'])}"
        )


# -- simulate ----------------------------------------------------------------


def k_for_rate(group, weights, n: int, rate: float) -> int:
    """Smallest-error k with w_i k integral and (k/n) sum_i w_i r_i log2 p_i closest to ``rate``."""
    unit = math.lcm(*(Fraction(w).denominator for w in weights))
    bits = sum(float(w) * r * math.log2(p) for w, (p, r) in zip(weights, group.rings))
    if bits <= 0:
        raise ValueError("weights carry no rate")
    return max(unit, round(rate * n / bits / unit) * unit)


def cmd_simulate(args):
    channel, dig = _load(args.spec)
    group = channel.group
    weights = args.weights or tuple(Fraction(1, group.I) for _ in range(group.I))
    if (args.k is None) == (args.rate is None):
        raise ValueError("give exactly one of --k and --rate")
    if args.decoder == "typicality" and args.eps is None:
        raise ValueError("--decoder typicality needs --eps")
    bounds = full_report(channel)
    rows = []
    for n in args.n:
        k = args.k if args.k is not None else k_for_rate(group, weights, n, args.rate)
        cfg = EnsembleConfig(group, weights, k, n, args.decoder, args.eps, args.generator_mode)
        stats = monte_carlo_error(channel, cfg, args.trials, args.seed, args.workers, args.fixed_code)
        rows.append({"n": n, "k": k, "M": cfg.M, "rate": cfg.rate, **stats.to_dict()})
    params = {
        "k": args.k,
        "rate": args.rate,
        "n": args.n,
        "weights": [str(w) for w in weights],
        "trials": args.trials,
        "seed": args.seed,
        "decoder": args.decoder,
        "eps": args.eps,
        "fixed_code": args.fixed_code,
        "generator_mode": args.generator_mode,
    }
    report = _header("simulate", args.spec, dig, params)
    report["lower_bound"] = _num(bounds.lower)
    report["shannon"] = bounds.shannon
    report["results"] = rows
    return report, _simulate_text, EXIT_OK


def _simulate_text(report: dict):
    yield f"input {report['input']}  {report['input_digest']}"
    yield f"lower bound {report['lower_bound']}  shannon {report['shannon']:.6f}"
    yield f"{'n':>5}{'k':>5}{'rate':>9}{'errors':>9}{'trials':>9}{'error_rate':>12}{'ci_low':>10}{'ci_high':>10}"
    for r in report["results"]:
        yield (
            f"{r['n']:>5}{r['k']:>5}{r['rate']:>9.4f}{r['errors']:>9}{r['trials']:>9}"
            f"{r['error_rate']:>12.5f}{r['ci_low']:>10.5f}{r['ci_high']:>10.5f}"
        )


# -- mi ------------------------------------------------------------------------


def cmd_mi(args):
    channel, dig = _load(args.spec)
    group = channel.group
    report = _header("mi", args.spec, dig, {"coset": None})
    if args.coset is None:
        report["uniform_mi"] = mutual_information(channel, uniform_on(channel, group.elements))
        report["shannon"] = shannon_capacity(channel)
    else:
        theta, rep = args.coset
        c = coset_of(group, theta, rep)
        report["params"]["coset"] = {"theta": list(theta), "representative": list(rep)}
        report["coset"] = {
            "theta": list(c.theta),
            "representative": list(c.representative),
            "members": [list(m) for m in c.members],
            "value": coset_capacity(channel, c).value,
        }
    return report, _mi_text, EXIT_OK


def _mi_text(report: dict):
    if "coset" in report:
        c = report["coset"]
        yield f"coset theta={_fmt_theta(c['theta'])} rep={_fmt_theta(c['representative'])} size={len(c['members'])}"
        yield f"C^U = {c['value']:.10f}"
    else:
        yield f"uniform-input MI = {report['uniform_mi']:.10f}"
        yield f"shannon capacity = {report['shannon']:.10f}"


# -- verify ----------------------------------------------------------------------


def cmd_verify(args):
    if args.group is None:
        if args.k is not None or args.n is not None:
            raise ValueError("--k/--n require --group")
        suites = default_suites(fault=args.inject_fault)
        params = {"suite": "default"}
    else:
        k = 1 if args.k is None else args.k
        n = 1 if args.n is None else args.n
        suites = group_suites(args.group, k, n, args.generator_mode, fault=args.inject_fault)
        params = {"group": [list(r) for r in args.group.rings], "k": k, "n": n, "generator_mode": args.generator_mode}
    params["inject_fault"] = args.inject_fault
    report = _header("verify", None, None, params)
    report["suites"] = [s.to_dict() for s in suites]
    report["passed"] = all(s.passed for s in suites)
    for s in suites:
        for cx in s.counterexamples:
            print(f"counterexample [{s.name}]: {json.dumps(cx, sort_keys=True)}", file=sys.stderr)
    return report, _verify_text, EXIT_OK if report["passed"] else EXIT_FAIL


def _verify_text(report: dict):
    for s in report["suites"]:
        status = "PASS" if s["passed"] else "FAIL"
        yield f"{status}  {s['name']:<24} cases={s['cases']} failures={s['failures']}"


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="groupcap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"groupcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--timing", action="store_true", help="include wall-clock duration in the report")

    b = sub.add_parser("bounds", help="lower/upper bounds and per-subgroup diagnostics")
    b.add_argument("spec")
    b.add_argument("--tol", type=float, default=1e-9, help="tolerance for maximality and symmetry tests")
    common(b)

    s = sub.add_parser("simulate", help="Monte Carlo ensemble error rates")
    s.add_argument("spec")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--rate", type=float, default=None, help="choose k per n to match this rate (bits/use)")
    s.add_argument("--n", type=parse_int_list, required=True, help="block length(s), comma-separated")
    s.add_argument("--weights", type=parse_weights, default=None, help="w_1,...,w_I (decimals or a/b)")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--decoder", choices=["ml", "typicality"], default="ml")
    s.add_argument("--eps", type=float, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--fixed-code", action="store_true", help="one encoder for all trials")
    s.add_argument("--generator-mode", choices=GENERATOR_MODES, default="ring")
    common(s)

    m = sub.add_parser("mi", help="uniform-input mutual information / coset capacity")
    m.add_argument("spec")
    m.add_argument("--coset", type=parse_coset_arg, default=None, help="THETA:REP, e.g. 1:0 or 1,0:0,2")
    common(m)

    v = sub.add_parser("verify", help="exhaustive oracle checks of the ensemble formulas")
    v.add_argument("--group", type=parse_group_arg, default=None, help='e.g. "2^2" or "2,3"')
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--generator-mode", choices=GENERATOR_MODES, default="ring")
    v.add_argument("--inject-fault", action="store_true", help="perturb the formulas to exercise failure reporting")
    common(v)
    return parser


COMMANDS = {"bounds": cmd_bounds, "simulate": cmd_simulate, "mi": cmd_mi, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, text_lines, code = COMMANDS[args.command](args)
    except (SpecError, ValueError) as exc:
        print(f"groupcap: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    elapsed = time.perf_counter() - start
    # the duration stays out of the report unless asked for, so reruns are byte-identical
    if args.timing:
        report["duration_s"] = round(elapsed, 6)
    _emit(report, args.format, text_lines)
    print(f"groupcap: {args.command} finished in {elapsed:.2f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
