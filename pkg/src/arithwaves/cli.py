"""Unified command-line entry point.

Every command prints a short human-readable summary to stdout; --json writes
the full structured report and --csv writes delimited per-item data.  Exit
codes: 0 success, 2 argument/schema error (argparse default), 3 work-limit
exceeded, 4 numerical diagnostic failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

from . import correlations, lattice, moments, nodal, sectors
from .correlations import WorkLimitExceeded
from .field import AliasingError, SingularDisplacementError, kernel_at
from .report import RunConfig, finalize, to_json

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_WORK_LIMIT = 3
EXIT_NUMERIC = 4


def _default_seed() -> int:
    return int(os.environ.get("ARITHWAVES_SEED", "0"))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write the full report as JSON")
    p.add_argument("--csv", metavar="PATH", help="write per-item data as CSV")
    p.add_argument("--fig", metavar="PATH", help="render a figure alongside the report")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: env or 0)")
    p.add_argument("--work-limit", type=int, default=correlations.DEFAULT_WORK_LIMIT)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arithwaves")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="circle lattice points and angular data")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=4, help="Fourier index of the angle measure")
    _add_common(p)

    p = sub.add_parser("correlate", help="spectral and quasi-correlation counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--K", type=float, default=None, help="quasi-correlation threshold")
    _add_common(p)

    p = sub.add_parser("scan", help="separatedness scan over a dyadic range")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--range", required=True, help="N:2N start, e.g. 256:512")
    p.add_argument("--rule", default="n^(1/2-delta)")
    _add_common(p)

    p = sub.add_parser("nus", help="sector construction targeting the four-arc measure")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--R", type=float, default=1e5)
    _add_common(p)

    p = sub.add_parser("kernel", help="covariance kernel at a displacement")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="displacement, e.g. 0.1,0.05")
    _add_common(p)

    p = sub.add_parser("moments", help="trace-moment suite and singular partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--c0", type=float, default=0.1)
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo nodal-length statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--gpw", type=int, default=16)
    _add_common(p)

    p = sub.add_parser("kacrice", help="variance bracket from the two-point function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--h0", type=float, default=None)
    p.add_argument("--mc-samples", type=int, default=4000)
    _add_common(p)

    p = sub.add_parser("compare", help="limit-law shape comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--gpw", type=int, default=16)
    p.add_argument("--eta", type=float, default=None)
    _add_common(p)
    return ap


def _run_lattice(args, config):
    space = lattice.eigenspace(args.n)
    return {
        "n": args.n,
        "multiplicity": space.multiplicity,
        "r2_check": lattice.r2(args.n),
        "tau_hat": lattice.tau_hat(args.n, args.k),
        "points": [(p.a, p.b) for p in space.points],
    }, [(p.a, p.b) for p in space.points]


def _run_correlate(args, config):
    rep = correlations.spectral_correlations(args.n, args.l, config.work_limit)
    results = {"n": args.n, "l": args.l, "count_S": rep.count_S}
    if args.l % 2 == 0 and args.l <= 4:
        results["count_D"] = correlations.diagonal_correlations(
            args.n, args.l, config.work_limit
        ).count_D
    if args.K is not None:
        results["quasi"] = [
            (args.K, correlations.quasi_count(args.n, args.l, args.K, config.work_limit))
        ]
    return results, [(k, v) for k, v in results.items() if not isinstance(v, list)]


def _run_scan(args, config):
    lo, hi = args.range.split(":")
    N = int(lo)
    if int(hi) != 2 * N:
        raise ValueError("range must be N:2N")
    rep = correlations.scan_exceptional(
        N, args.l, args.delta, config.work_limit, rule=args.rule
    )
    return {
        "range": rep.range,
        "l": rep.l,
        "delta": rep.delta,
        "exceptional": rep.exceptional,
        "fraction": rep.fraction,
        "threshold_rule": rep.threshold_rule,
        "scanned_count": len(rep.scanned),
        "skipped": rep.skipped,
    }, [(n,) for n in rep.exceptional]


def _run_nus(args, config):
    built = sectors.construct_nu_target(args.s, args.k, args.R)
    angles = lattice.eigenspace(built.n).angles()
    w1 = sectors.wasserstein_to_nu(angles, args.s)
    closed, quad = sectors.nu_s_fourier(args.s, 4)
    return {
        "s": args.s,
        "k": args.k,
        "n": built.n,
        "primes": built.primes,
        "intervals": built.intervals,
        "w1_to_nu": w1,
        "nu_hat4_closed": closed,
        "nu_hat4_quadrature": quad,
    }, [(a, b) for a, b in built.primes]


def _run_kernel(args, config):
    x = tuple(float(v) for v in args.x.split(","))
    if len(x) != 2:
        raise ValueError("--x needs two comma-separated reals")
    k = kernel_at(args.n, x)
    return {
        "n": args.n,
        "x": list(x),
        "r": k.r,
        "D": k.D,
        "H": k.H,
        "X": k.X,
        "Y": k.Y,
        "Omega": k.Omega,
        "singular": k.X is None,
    }, [("r", k.r)]


def _run_moments(args, config):
    rep = moments.moment_suite(args.n, args.s)
    part = moments.singular_partition(args.n, args.s, c0=args.c0, seed=config.seed)
    results = {
        "n": args.n,
        "s": args.s,
        "entries": rep.entries,
        "excluded_weight": rep.excluded_weight,
        "singular_partition": {
            "F": part.F,
            "c0": part.c0,
            "singular_cubes": part.singular_cubes,
            "covered_measure": part.covered_measure,
            "mc_estimate": part.mc_estimate,
        },
    }
    rows = [
        (e["name"], e["numeric"], e["predicted_leading"], e["rel_dev"])
        for e in rep.entries
    ]
    return results, rows


def _run_simulate(args, config):
    stats = nodal.monte_carlo(
        args.n, args.s, args.trials, seed=config.seed, grid_per_wavelength=args.gpw
    )
    results = {
        "n": stats.n,
        "s": stats.s,
        "trials": stats.trials,
        "grid_per_wavelength": stats.grid_per_wavelength,
        "seed": stats.seed,
        "mean_full": stats.mean_full,
        "mean_restricted": stats.mean_restricted,
        "var_full": stats.var_full,
        "var_restricted": stats.var_restricted,
        "cov": stats.cov,
        "corr": stats.corr,
        "bootstrap": stats.bootstrap,
    }
    rows = [
        (t, stats.samples_full[t], stats.samples_restricted[t])
        for t in range(stats.trials)
    ]
    return results, rows, stats


def _run_kacrice(args, config):
    bracket = nodal.kac_rice_variance(
        args.n, args.s, h0=args.h0, mc_samples=args.mc_samples, seed=config.seed
    )
    return bracket | {"n": args.n, "s": args.s}, [
        ("lower", bracket["lower"]),
        ("upper", bracket["upper"]),
    ]


def _run_compare(args, config):
    eta = args.eta if args.eta is not None else abs(lattice.tau_hat(args.n, 4))
    stats = nodal.monte_carlo(
        args.n, args.s, args.trials, seed=config.seed, grid_per_wavelength=args.gpw
    )
    cmp = nodal.distribution_compare(stats.samples_restricted, eta, seed=config.seed)
    return {
        "n": args.n,
        "s": args.s,
        "eta": eta,
        "trials": args.trials,
        **cmp,
    }, [("w1", cmp["w1"]), ("null95", cmp["null95"])]


def _write_csv(path: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row)


def _render_fig(command: str, path: str, results: dict, extra) -> None:
    from . import plots

    if command == "simulate" and extra is not None:
        plots.save_length_histogram(extra.samples_full, extra.samples_restricted, path)
    elif command == "nus":
        angles = lattice.eigenspace(results["n"]).angles()
        plots.save_angle_scatter(angles, path, s=results["s"])
    elif command == "moments":
        plots.save_moment_deviations(results["entries"], path)
    elif command in ("kernel", "kacrice"):
        plots.save_kernel_profile(results["n"], path)
    elif command == "lattice":
        space = lattice.eigenspace(results["n"])
        plots.save_angle_scatter(space.angles(), path)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    seed = args.seed if args.seed is not None else _default_seed()
    config = RunConfig(
        command=args.command,
        params={k: v for k, v in vars(args).items() if k != "command"},
        seed=seed,
        work_limit=args.work_limit,
        json_path=args.json,
        csv_path=args.csv,
        fig_path=args.fig,
    )
    started = time.perf_counter()
    handlers = {
        "lattice": _run_lattice,
        "correlate": _run_correlate,
        "scan": _run_scan,
        "nus": _run_nus,
        "kernel": _run_kernel,
        "moments": _run_moments,
        "simulate": _run_simulate,
        "kacrice": _run_kacrice,
        "compare": _run_compare,
    }
    try:
        out = handlers[args.command](args, config)
    except WorkLimitExceeded as exc:
        print(f"work limit exceeded: {exc}", file=sys.stderr)
        return EXIT_WORK_LIMIT
    except (
        AssertionError,
        SingularDisplacementError,
        AliasingError,
        sectors.SectorEmptyError,
        lattice.NotSumOfTwoSquaresError,
    ) as exc:
        print(f"numerical diagnostic failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    results, rows = out[0], out[1]
    extra = out[2] if len(out) > 2 else None
    report = finalize(config, results, started)

    for key in ("mean_full", "var_full", "count_S", "w1", "lower", "covered_measure", "n"):
        if key in results:
            print(f"{key}: {results[key]}")
    print(f"elapsed: {report.timing:.3f} s")
    if report.warnings:
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)

    if config.json_path:
        with open(config.json_path, "w") as fh:
            fh.write(to_json(report))
    if config.csv_path:
        _write_csv(config.csv_path, rows)
    if config.fig_path:
        _render_fig(args.command, config.fig_path, results, extra)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
