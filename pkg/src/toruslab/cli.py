"""Command line front end: every experiment behind one binary.

Subcommands mirror the experiment registry; ``--config file.json``
overrides flags; results go to stdout or ``--out`` as CSV plus a JSON
summary embedding the resolved config and its hash.

Exit codes: 0 success, 2 assertion failure (a claimed bound violated),
3 budget refusal, 4 unknown experiment id, 5 config/schema violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass

from . import accel
from ._kernels import BudgetError

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_BUDGET = 3
EXIT_UNKNOWN = 4
EXIT_SCHEMA = 5


def _ns(text) -> list:
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x]


@dataclass(frozen=True)
class Experiment:
    id: str
    summary: str
    schema: dict                # name -> (converter, default, help)
    runner: object              # params dict -> (csv_header, rows, summary)


def _run_strichartz(p):
    from .experiments import strichartz_ball_sweep, RATIO_CSV_HEADER
    fit, recs = strichartz_ball_sweep(p["d"], p["Ns"], p=p["p"])
    return RATIO_CSV_HEADER, [r.csv_row() for r in recs], {"fit": fit.to_dict()}


def _run_shell_contrast(p):
    from .experiments import ball_vs_shell_contrast, RATIO_CSV_HEADER
    bf, sf, recs = ball_vs_shell_contrast(p["Ns"], d=p["d"], p=p["p"])
    return RATIO_CSV_HEADER, [r.csv_row() for r in recs], \
        {"ball_fit": bf.to_dict(), "shell_fit": sf.to_dict()}


def _run_wave_mixed(p):
    from .experiments import wave_mixed_norm_check, RATIO_CSV_HEADER
    fit, recs = wave_mixed_norm_check(p["d"], p["Ns"], p["q"], p["p"])
    return RATIO_CSV_HEADER, [r.csv_row() for r in recs], {"fit": fit.to_dict()}


def _run_decouple(p):
    from .experiments import decoupling_sweep
    rows, ok = decoupling_sweep(p["d"], p["Ns"], p=p["p"], seed=p["seed"])
    csv = [f"{n},{side},{ratio!r}" for n, side, ratio in rows]
    return "N,block_side,ratio", csv, {"within_growth_cap": ok}


def _run_trilinear_alpha(p):
    from .trilinear import trilinear_alpha_sweep
    fit, rows = trilinear_alpha_sweep(p["d"], p["Ns"], generator=p["generator"],
                                      trials=p["trials"], seed=p["seed"])
    csv = [f"{d},{n},{tr},{ratio!r},{gen},{seed}"
           for d, n, tr, ratio, gen, seed in rows]
    return "d,N,trial,ratio,generator,seed", csv, {"fit": fit.to_dict()}


def _run_slab(p):
    from .experiments import sharpness_slab_sweep, RATIO_CSV_HEADER
    fit, recs = sharpness_slab_sweep(p["d"], p["Ns"])
    return RATIO_CSV_HEADER, [r.csv_row() for r in recs], {"fit": fit.to_dict()}


def _run_mixed_probe(p):
    from .experiments import mixed_strichartz_probe, RATIO_CSV_HEADER
    fits, recs, flag = mixed_strichartz_probe(p["d"], p["Ns"], p["q"], p["p"],
                                              seed=p["seed"])
    return RATIO_CSV_HEADER, [r.csv_row() for r in recs], \
        {"flag": flag, "fits": {k: v.to_dict() for k, v in fits.items()}}


def _run_dio_sweep(p):
    from .diophantine import dio_exponent_sweep, CSV_HEADER
    fit, counts = dio_exponent_sweep(p["Ns"], delta=p["delta"])
    return CSV_HEADER, [c.csv_row() for c in counts], {"fit": fit.to_dict()}


def _run_picard_inflation(p):
    from .picard import inflation_sweep, INFLATION_CSV_HEADER
    fit, rows = inflation_sweep(p["d"], p["s"], p["Ns"])
    csv = [f"{d},{s},{n},{t!r},{h!r}" for d, s, n, t, h in rows]
    return INFLATION_CSV_HEADER, csv, \
        {"fit": fit.to_dict(), "expected_slope": -p["s"] + (p["d"] - 3) / 2}


def _run_zakharov(p):
    from .zakharov import run, ZAKHAROV_CSV_HEADER
    _, rows = run(p["d"], p["grid"], p["dt"], p["steps"],
                  report_every=p["report_every"], kind=p["kind"],
                  seed=p["seed"], amplitude=p["amplitude"])
    csv = [f"{j},{t!r},{ms!r},{en!r},{md!r},{ed!r}"
           for j, t, ms, en, md, ed in rows]
    last = rows[-1]
    return ZAKHAROV_CSV_HEADER, csv, \
        {"mass_drift": last[4], "energy_drift": last[5]}


EXPERIMENTS = {
    "strichartz": Experiment(
        "strichartz",
        "pure L^p Strichartz ratio sweep on all-ones ball data",
        {"d": (int, 2, "dimension"),
         "Ns": (_ns, [8, 16, 32, 64], "comma-separated frequency scales"),
         "p": (float, 4.0, "space-time Lebesgue exponent")},
        _run_strichartz),
    "shell-contrast": Experiment(
        "shell-contrast",
        "ball vs unit-width shell L^4 ratio contrast",
        {"d": (int, 3, "dimension"),
         "Ns": (_ns, [8, 16, 24, 32, 48], "frequency scales"),
         "p": (float, 4.0, "exponent")},
        _run_shell_contrast),
    "wave-mixed": Experiment(
        "wave-mixed",
        "half-wave mixed-norm sweep on the admissibility line",
        {"d": (int, 3, "dimension"),
         "Ns": (_ns, [8, 16, 32], "frequency scales"),
         "q": (float, 10.0, "time exponent"),
         "p": (float, 2.5, "space exponent")},
        _run_wave_mixed),
    "decouple": Experiment(
        "decouple",
        "block decoupling ratio with random signs on unit shells",
        {"d": (int, 2, "dimension"),
         "Ns": (_ns, [8, 16, 32], "frequency scales"),
         "p": (float, 4.0, "exponent"),
         "seed": (int, 0, "rng seed")},
        _run_decouple),
    "trilinear-alpha": Experiment(
        "trilinear-alpha",
        "normalized trilinear form magnitude across frequency scales",
        {"d": (int, 3, "dimension"),
         "Ns": (_ns, [4, 8, 16], "frequency scales"),
         "generator": (str, "plane_triple", "input family"),
         "trials": (int, 8, "random trials per N"),
         "seed": (int, 0, "rng seed")},
        _run_trilinear_alpha),
    "slab-sharpness": Experiment(
        "slab-sharpness",
        "slab example ratio at the critical exponent (log growth)",
        {"d": (int, 3, "dimension (2 or 3)"),
         "Ns": (_ns, [16, 36, 64, 100], "frequency scales")},
        _run_slab),
    "mixed-probe": Experiment(
        "mixed-probe",
        "exploratory mixed-norm sweep on the scaling line (q <= p)",
        {"d": (int, 4, "dimension"),
         "Ns": (_ns, [2, 4, 8], "frequency scales"),
         "q": (float, 2.0, "time exponent"),
         "p": (float, 4.0, "space exponent"),
         "seed": (int, 0, "rng seed")},
        _run_mixed_probe),
    "dio-sweep": Experiment(
        "dio-sweep",
        "quadruple system solution counts on thin shells",
        {"Ns": (_ns, [8, 12, 16, 24], "shell radii"),
         "delta": (int, 2, "shell width")},
        _run_dio_sweep),
    "picard-inflation": Experiment(
        "picard-inflation",
        "H^s growth of the first Picard iterate at t = 1/(100 N^2)",
        {"d": (int, 3, "dimension"),
         "s": (float, 0.0, "Sobolev index"),
         "Ns": (_ns, [8, 16, 32], "frequency scales")},
        _run_picard_inflation),
    "zakharov-run": Experiment(
        "zakharov-run",
        "split-step solver run with conservation diagnostics",
        {"d": (int, 2, "dimension"),
         "grid": (int, 64, "modes per axis"),
         "dt": (float, 1e-3, "time step"),
         "steps": (int, 200, "number of steps"),
         "report_every": (int, 10, "reporting stride"),
         "kind": (str, "random", "data kind: random or single_mode"),
         "seed": (int, 0, "rng seed"),
         "amplitude": (float, 1.0, "data amplitude")},
        _run_zakharov),
}


def _config_hash(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def resolve_params(exp: Experiment, args: argparse.Namespace,
                   config: dict | None) -> dict:
    params = {}
    for name, (conv, default, _help) in exp.schema.items():
        val = getattr(args, name.replace("-", "_"), None)
        params[name] = conv(val) if val is not None else default
    if config:
        unknown = set(config) - set(exp.schema)
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}")
        for name, val in config.items():
            params[name] = exp.schema[name][0](val)
    return params


class SchemaError(ValueError):
    pass


def run_experiment(exp_id: str, params: dict, out_path=None):
    """Dispatch; returns (exit_code, record dict)."""
    exp = EXPERIMENTS[exp_id]
    start = time.time()
    header, rows, summary = exp.runner(params)
    record = {
        "experiment": exp_id,
        "config": params,
        "config_hash": _config_hash(params),
        "started": start,
        "elapsed": time.time() - start,
        "summary": summary,
        "rows": len(rows),
    }
    text = "\n".join([header] + list(rows)) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return record


def _cmd_list(_args) -> int:
    for exp in EXPERIMENTS.values():
        print(f"{exp.id}: {exp.summary}")
        for name, (_conv, default, help_) in exp.schema.items():
            print(f"    --{name} (default {default}): {help_}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from .acceptance import run_all
    only = _ns(args.only) if args.only else None
    results = run_all(only=only)
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] criterion {res.number}: {res.name} -- {res.detail}")
        failed = failed or not res.passed
    return EXIT_ASSERTION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruslab",
        description="numerical laboratory for periodic dispersive estimates")
    sub = parser.add_subparsers(dest="command")
    for exp in EXPERIMENTS.values():
        sp = sub.add_parser(exp.id, help=exp.summary)
        for name, (_conv, default, help_) in exp.schema.items():
            sp.add_argument(f"--{name}", default=None,
                            help=f"{help_} (default {default})")
        sp.add_argument("--config", default=None,
                        help="JSON file overriding flags")
        sp.add_argument("--out", default=None, help="CSV output path")
        sp.add_argument("--summary", default=None,
                        help="JSON run-record output path")
    sub.add_parser("list", help="enumerate experiments and parameters")
    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--only", default=None,
                    help="comma-separated criterion numbers")
    return parser


def main(argv=None) -> int:
    accel.configure_threads()
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    known = set(EXPERIMENTS) | {"list", "selftest"}
    if argv and not argv[0].startswith("-") and argv[0] not in known:
        print(f"unknown experiment id: {argv[0]}", file=sys.stderr)
        return EXIT_UNKNOWN
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_SCHEMA
    if args.command == "list":
        return _cmd_list(args)
    if args.command == "selftest":
        return _cmd_selftest(args)
    if args.command not in EXPERIMENTS:
        print(f"unknown experiment id: {args.command}", file=sys.stderr)
        return EXIT_UNKNOWN
    config = None
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
    try:
        params = resolve_params(EXPERIMENTS[args.command], args, config)
    except (SchemaError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        record = run_experiment(args.command, params, out_path=args.out)
    except BudgetError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    blob = json.dumps(record, indent=2, default=str)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(blob + "\n")
    else:
        print(blob, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
