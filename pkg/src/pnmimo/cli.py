"""Command-line interface: sweeps, scenario presets, lemma checks, validation.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (e.g. the
zero-forcing rejection cap was exceeded).
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .config import ConfigError, load_config
from .lemmas import (check_free_probability_traces, check_matrix_inversion_identity,
                     check_quadratic_form_identities, check_rank1_perturbation,
                     check_resolvent_identity, check_trace_lemma,
                     convergence_to_csv)
from .linksim import RejectionRateError
from .precoding import SingularChannelError
from .sweep import emit_results, list_presets, run_preset, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--realizations", type=int, help="Monte-Carlo realization count")
    parser.add_argument("--parallelism", type=int, help="worker process count")
    parser.add_argument("--out", default="-", help="output path ('-' for stdout)")
    parser.add_argument("--format", default="csv", choices=("csv", "json-lines"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnmimo",
        description="Massive-MIMO downlink SINR analytics and simulation "
                    "under oscillator phase noise")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run the sweep described by a config file")
    p_sweep.add_argument("config", help="INI config file with [system] and [sweep]")
    _add_common(p_sweep)

    p_preset = sub.add_parser("preset", help="run a named scenario preset")
    p_preset.add_argument("name", nargs="?", help="preset name (omit with --list)")
    p_preset.add_argument("--list", action="store_true", help="list presets and exit")
    _add_common(p_preset)

    p_lem = sub.add_parser("lemmas", help="run the random-matrix identity checks")
    p_lem.add_argument("--seed", type=int, default=0)
    p_lem.add_argument("--out", default="-")
    p_lem.add_argument("--sizes", default="64,128,256,512",
                       help="comma-separated matrix sizes")
    p_lem.add_argument("--trials", type=int, default=100)

    p_val = sub.add_parser("validate-config", help="check a config file and exit")
    p_val.add_argument("config")
    return parser


def _overrides(args) -> dict:
    out = {}
    if args.seed is not None:
        out["master_seed"] = args.seed
    if args.realizations is not None:
        out["n_realizations"] = args.realizations
    if args.parallelism is not None:
        out["parallelism"] = args.parallelism
    return out


def _emit(rows, args, started: float) -> None:
    if args.out == "-":
        from .sweep import rows_to_csv, rows_to_jsonl
        text = rows_to_csv(rows) if args.format == "csv" else rows_to_jsonl(rows)
        sys.stdout.write(text)
    else:
        emit_results(rows, args.format, args.out)
    print(f"{len(rows)} rows in {time.perf_counter() - started:.1f}s", file=sys.stderr)


def _cmd_sweep(args) -> int:
    config, axis, values = load_config(args.config)
    if axis is None:
        raise ConfigError("config: a [sweep] section is required by the sweep command")
    config = config.with_(**_overrides(args))
    started = time.perf_counter()
    rows = run_sweep(config, axis, values)
    _emit(rows, args, started)
    return EXIT_OK


def _cmd_preset(args) -> int:
    if args.list:
        for name, note in list_presets():
            print(f"{name:8s} {note}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("preset: name required (or use --list)")
    started = time.perf_counter()
    rows = run_preset(args.name, **_overrides(args))
    _emit(rows, args, started)
    return EXIT_OK


def _cmd_lemmas(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    exact_mi = check_matrix_inversion_identity(64, rng)
    exact_res = check_resolvent_identity(64, rng)
    records = [
        check_trace_lemma(sizes, rng, n_trials=args.trials),
        check_rank1_perturbation(sizes, rng, n_trials=args.trials),
        check_free_probability_traces(sizes, rng, n_trials=args.trials),
    ]
    devs = check_quadratic_form_identities(max(sizes), 0.9, rng,
                                           n_trials=max(args.trials // 2, 10),
                                           M_osc=max(sizes) // 8 or 1)
    csv = convergence_to_csv(records)
    if args.out == "-":
        sys.stdout.write(csv)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv)
    print(f"exact identities: matrix-inversion {exact_mi:.2e}, "
          f"resolvent {exact_res:.2e}", file=sys.stderr)
    print("quadratic-form deviations at M="
          f"{max(sizes)}: {', '.join(f'{d:.3g}' for d in devs)}", file=sys.stderr)
    if exact_mi > 1e-10 or exact_res > 1e-10:
        print("exact identity tolerance exceeded", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_validate(args) -> int:
    config, axis, values = load_config(args.config)
    print(f"ok: M={config.M} K={config.K} M_osc={config.M_osc} "
          f"q0={config.q0} tau={config.tau}"
          + (f" sweep={axis}[{len(values)}]" if axis else ""))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"sweep": _cmd_sweep, "preset": _cmd_preset,
                "lemmas": _cmd_lemmas, "validate-config": _cmd_validate}
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RejectionRateError, SingularChannelError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
