"""Command-line interface: ``bounds``, ``simulate`` and ``check``.

Exit codes: 0 success, 1 check failure, 2 input error, 3 internal invariant
violation, 4 simulation assertion.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks, kernels, mimo, polymatroid, sim
from .core import ScalarDiamond, cutset_proxy, gap_constants_scalar, nnc_rate, pdf_rate
from .errors import InstanceParseError, SimulationAssertionError
from .instances import load_instance
from .strategies import AfMode, af_rate, best_relay_rate

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_INVARIANT, EXIT_SIM = 0, 1, 2, 3, 4
GAP_TOL = 1e-9
CROSS_TOL = 1e-12


def _rate_point(f, g):
    if f.n > polymatroid.MAX_LP_N:
        return None
    return polymatroid.find_max_rate_point(f, g).rates.tolist()


def scalar_bounds(net: ScalarDiamond) -> dict:
    upper = cutset_proxy(net)
    rates = {
        "nnc": nnc_rate(net),
        "pdf": pdf_rate(net),
        "af_opt": af_rate(net, AfMode.OPTIMIZED).rate,
        "af_naive": af_rate(net, AfMode.NAIVE).rate,
        "best_relay": best_relay_rate(net),
    }
    rates["best_of"] = max(rates["pdf"], rates["af_opt"], rates["af_naive"], rates["best_relay"])
    consts = gap_constants_scalar(net.n)
    point = None
    if net.n <= polymatroid.MAX_LP_N:
        point = _rate_point(
            polymatroid.mac_set_function(net.mac_gains, net.snr),
            polymatroid.bc_lower_set_function(net.bc_gains, net.snr),
        )
    return _report("scalar", net.n, net.snr, upper, rates, point, consts)


def mimo_bounds(net: mimo.MimoDiamond) -> dict:
    upper = mimo.mimo_cutset_proxy(net)
    rates = {"nnc": mimo.mimo_nnc_rate(net), "pdf": mimo.mimo_pdf_rate(net)}
    consts = mimo.mimo_gap_constants(net.n_s, net.n_d, net.antennas)
    point = _rate_point(mimo.mimo_mac_set_function(net), mimo.mimo_bc_lower_set_function(net))
    out = _report("mimo", net.n, net.snr, upper, rates, point, consts)
    out["antennas"] = {"n_s": net.n_s, "n_d": net.n_d, "relays": list(net.antennas)}
    return out


def _report(kind, n, snr, upper, rates, point, consts) -> dict:
    gaps = {k: upper - r for k, r in rates.items()}
    ok = (
        gaps["nnc"] <= consts.g1 + GAP_TOL
        and gaps["pdf"] <= consts.g2 + GAP_TOL
        and all(g >= -GAP_TOL for g in gaps.values())
    )
    return {
        "kind": kind,
        "n": n,
        "snr": snr,
        "cutset_proxy": upper,
        **rates,
        "pdf_rate_point": point,
        "gaps": gaps,
        "theorem_bounds": {"g1": consts.g1, "g2": consts.g2},
        "theorems_satisfied": bool(ok),
    }


def _cross_check(net) -> dict:
    if isinstance(net, ScalarDiamond):
        scalar, multi = net, mimo.MimoDiamond.from_scalar(net)
    else:
        try:
            scalar, multi = net.to_scalar(), net
        except ValueError:
            return {"applicable": False}
    d_nnc = abs(mimo.mimo_nnc_rate(multi) - nnc_rate(scalar))
    d_pdf = abs(mimo.mimo_pdf_rate(multi) - pdf_rate(scalar))
    return {
        "applicable": True,
        "nnc_diff": d_nnc,
        "pdf_diff": d_pdf,
        "agree": bool(d_nnc <= CROSS_TOL and d_pdf <= CROSS_TOL),
    }


def cmd_bounds(args) -> int:
    try:
        net = load_instance(args.instance)
    except InstanceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = scalar_bounds(net) if isinstance(net, ScalarDiamond) else mimo_bounds(net)
    status = EXIT_OK if out["theorems_satisfied"] else EXIT_INVARIANT
    if args.cross_check:
        out["cross_check"] = _cross_check(net)
        if out["cross_check"]["applicable"] and not out["cross_check"]["agree"]:
            status = EXIT_INVARIANT
    print(json.dumps(out, indent=2))
    if status != EXIT_OK:
        print("error: internal invariant violated", file=sys.stderr)
    return status


def _out_path(base: Path, snr: float, multiple: bool) -> Path:
    if not multiple:
        return base
    return base.with_name(f"{base.stem}.snr{snr:g}{base.suffix}")


def cmd_simulate(args) -> int:
    schemes = tuple(s for s in args.schemes.split(",") if s) if args.schemes is not None else sim.DEFAULT_SCHEMES
    try:
        configs = [
            sim.SimConfig(
                n=args.relays,
                snr=snr,
                dist=args.dist,
                shadow_std_db=args.shadow_std,
                trials=args.trials,
                seed=args.seed,
                schemes=schemes,
                workers=args.threads or sim.default_workers(),
            )
            for snr in args.snr
        ]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    for cfg in configs:
        try:
            gs = sim.run_monte_carlo(cfg)
        except SimulationAssertionError as exc:
            print(f"assertion failed: {exc}", file=sys.stderr)
            print(json.dumps(exc.instance), file=sys.stderr)
            return EXIT_SIM
        path = _out_path(Path(args.out), cfg.snr, len(configs) > 1)
        sim.export(gs, path, bin_width=args.bin_width)
        print(f"# N={cfg.n} snr={cfg.snr:g} dist={cfg.dist} trials={cfg.trials} seed={cfg.seed} -> {path}")
        print(f"{'scheme':<11} {'min':>8} {'median':>8} {'mean':>8} {'max':>8}")
        for scheme in gs.gaps:
            s = gs.summary(scheme)
            print(f"{scheme:<11} {s['min']:8.4f} {s['median']:8.4f} {s['mean']:8.4f} {s['max']:8.4f}")
    return EXIT_OK


def cmd_check(args) -> int:
    names = [args.suite] if args.suite else list(checks.SUITES)
    status = EXIT_OK
    for name in names:
        res = checks.run_suite(name, seed=args.seed, trials=args.trials, n=args.n)
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag} {res.name:<12} checked={res.checked:<6} {res.detail}")
        if not res.passed:
            status = EXIT_CHECK
            if res.counterexample is not None:
                print(json.dumps(res.counterexample), file=sys.stderr)
    return status


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diamond-relay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s (kernels: {kernels.BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="bounds and rates for one instance file")
    p.add_argument("instance", help="JSON instance file (scalar or MIMO)")
    p.add_argument("--cross-check", action="store_true",
                   help="compare scalar and MIMO evaluations of a single-antenna network")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="Monte Carlo gap histograms")
    p.add_argument("--relays", type=_positive_int, default=10, help="number of relays N (default 10)")
    p.add_argument("--snr", type=_positive_float, nargs="+", default=[1.0, 1000.0],
                   help="one or more linear SNR values (default 1 1000)")
    p.add_argument("--dist", choices=sim.DISTRIBUTIONS, default="rayleigh")
    p.add_argument("--shadow-std", type=float, default=7.0, help="shadowing std in dB")
    p.add_argument("--trials", type=_positive_int, default=10_000, help="channel draws per SNR")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV path; a .summary.json is written beside it")
    p.add_argument("--bin-width", type=_positive_float, default=0.25, help="histogram bin width in bits")
    p.add_argument("--threads", type=_positive_int, default=None, help="worker processes")
    p.add_argument("--schemes", default=None,
                   help=f"comma-separated subset of {','.join(sim.SCHEMES)}")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="run randomised property suites")
    p.add_argument("--suite", choices=sorted(checks.SUITES), help="run one suite (default: all)")
    p.add_argument("--trials", type=_positive_int, default=None, help="override the per-suite trial count")
    p.add_argument("--n", type=_positive_int, default=None, help="fix the relay count where a suite uses one")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
