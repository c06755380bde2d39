"""Command-line entry point.

Exit codes: 0 success, 2 parameter error, 3 blow-up or boundary
contamination, 4 failed consistency check in ``analyze``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import BlowUpError, ParameterError
from .estimates import (
    batch_document,
    bilinear_trial,
    ensemble_report,
    interpolation_trial,
    lemma25_trial,
    strichartz_trial,
    trilinear_trials,
)
from .estimates.fields import XsbParams
from .estimates.report import dumps

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_BLOWUP = 3
EXIT_ACCEPTANCE = 4

DEFAULT_N = {
    "strichartz": [4, 8, 16, 32],
    "lemma25": [4, 8, 16],
    "interpolation": [4, 8, 16],
    "bilinear": [4, 8, 16],
    "trilinear": [4, 8, 16],
}

log = logging.getLogger("waveguide_nls")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="waveguide-nls", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one experiment from a TOML config")
    sim.add_argument("--config", required=True, type=Path)
    sim.add_argument("--output", type=Path, help="override the config's output_dir")

    ver = sub.add_parser("verify", help="randomized ensemble check of one estimate")
    ver.add_argument("--estimate", required=True,
                     choices=["strichartz", "bilinear", "lemma25", "trilinear", "interpolation"])
    ver.add_argument("--trials", type=_positive_int, default=10, help="seeds per band N")
    ver.add_argument("--seed", type=int, default=0, help="first seed; trials use seed, seed+1, ...")
    ver.add_argument("--N", type=float, nargs="+", help="band sizes (N1 for bilinear)")
    ver.add_argument("--N2", type=float, nargs="+", help="bilinear: second band sizes (default N)")
    ver.add_argument("--b1", type=float, default=0.55, help="bilinear modulation exponent (> 1/2)")
    ver.add_argument("--b2", type=float, default=0.3, help="lemma25 modulation exponent (> 1/4)")
    ver.add_argument("--s0", type=float, default=0.2, help="interpolation loss exponent")
    ver.add_argument("--b3", type=float, default=0.35, help="interpolation modulation exponent")
    ver.add_argument("--s", type=float, default=0.5, help="trilinear spatial order")
    ver.add_argument("--b", type=float, default=0.55, help="trilinear modulation order")
    ver.add_argument("--bprime", type=float, default=0.55, help="trilinear output order b'")
    ver.add_argument("--window", type=float, help="time window of space-time trials")
    ver.add_argument("--output", type=Path, help="write the JSON batch here instead of stdout")

    sw = sub.add_parser("sweep", help="run every *.toml config in a directory")
    sw.add_argument("--config-dir", required=True, type=Path)
    sw.add_argument("--output", type=Path, help="sweep root (default <config-dir>/sweep)")
    sw.add_argument("--workers", type=_positive_int, default=1)

    an = sub.add_parser("analyze", help="recompute fits and checks for a finished run")
    an.add_argument("--run", required=True, type=Path)
    return p


def _trials_for(args, N, N2, seed):
    kw = {} if args.window is None else {"window": args.window}
    if args.estimate == "strichartz":
        return [strichartz_trial(N, seed)]
    if args.estimate == "lemma25":
        return [lemma25_trial(N, args.b2, seed, **kw)]
    if args.estimate == "interpolation":
        return [interpolation_trial(N, args.s0, args.b3, seed, **kw)]
    if args.estimate == "bilinear":
        return [bilinear_trial(N, N2, args.b1, seed, **kw)]
    return trilinear_trials([(XsbParams(args.s, args.b), args.bprime)], N, seed, **kw)


def cmd_verify(args):
    Ns = args.N or DEFAULT_N[args.estimate]
    N2s = args.N2 or Ns
    if len(N2s) == 1:
        N2s = N2s * len(Ns)
    if len(N2s) != len(Ns):
        raise ParameterError("--N2 needs one value or as many values as --N")
    trials = []
    for N, N2 in zip(Ns, N2s):
        for seed in range(args.seed, args.seed + args.trials):
            trials.extend(_trials_for(args, N, N2, seed))
        log.info("%s N=%g: %d trials done", args.estimate, N, args.trials)
    params = {"N": Ns, "trials": args.trials, "seed": args.seed}
    if args.estimate == "bilinear":
        params.update(N2=N2s, b1=args.b1)
    elif args.estimate == "lemma25":
        params.update(b2=args.b2)
    elif args.estimate == "interpolation":
        params.update(s0=args.s0, b3=args.b3)
    elif args.estimate == "trilinear":
        params.update(s=args.s, b=args.b, bprime=args.bprime)
    if args.window is not None:
        params["window"] = args.window
    report = ensemble_report(trials)
    text = dumps(batch_document(args.estimate, params, trials, report)) + "\n"
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text)
        slope = "n/a" if report.slope_max is None else f"{report.slope_max:.4f}"
        print(f"{args.estimate}: {report.count} trials, max ratio {report.max:.6g}, "
              f"slope of max {slope} -> {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args):
    from .growth import load_config, run_experiment

    cfg = load_config(args.config)
    if args.output is not None:
        cfg = cfg.with_output_dir(args.output)
    if cfg.output_dir is None:
        raise ParameterError("config has no output_dir; pass --output")
    record = run_experiment(cfg)
    summary = json.loads((Path(cfg.output_dir) / "summary.json").read_text())
    fits = ", ".join(f"beta(s={s})={f['beta']:.4g}" for s, f in summary["fits"].items()) or "no fits"
    print(f"{cfg.name}: t={record.times[-1]:g}, {record.times.size} rows, mass drift "
          f"{summary['mass_drift']:.2e}, {fits} -> {cfg.output_dir}")
    return EXIT_OK


def cmd_sweep(args):
    from .growth import load_config_dir, sweep

    configs = load_config_dir(args.config_dir)
    root = args.output or args.config_dir / "sweep"
    result = sweep(configs, root, workers=args.workers)
    for row in result.rows:
        beta = row["beta"] if row["beta"] == "" else f"{row['beta']:.4g}"
        print(f"{row['name']:<24} {row['status']:<10} s={row['s']!s:<4} bound={row['bound']!s:<5} beta={beta}")
    print(f"table -> {Path(root) / 'sweep_table.csv'}")
    if result.failed:
        errors = [r["error"] for r in result.rows if r["status"] == "failed"]
        return EXIT_BLOWUP if any(e.startswith("blowup") for e in errors) else EXIT_PARAMETER
    return EXIT_OK


def cmd_analyze(args):
    from .growth import analyze_run

    doc = analyze_run(args.run)
    for name, c in sorted(doc["checks"].items()):
        print(f"{'PASS' if c['ok'] else 'FAIL'} {name}: {c['value']:.6g} (limit {c['limit']:.6g})")
    return EXIT_OK if doc["passed"] else EXIT_ACCEPTANCE


COMMANDS = {"simulate": cmd_simulate, "verify": cmd_verify, "sweep": cmd_sweep, "analyze": cmd_analyze}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, matching the parameter-error code
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BlowUpError as exc:
        print(f"error: blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER


if __name__ == "__main__":
    sys.exit(main())
