"""Command-line front end.

Three subcommands:

* ``synth``  - generate a synthetic dataset and export it as tensor
  containers plus a manifest.
* ``run``    - execute an experiment described by a key = value config
  file and write report.csv / summary.json.
* ``report`` - re-render the CSV from a previously written summary.json.

On failure a single machine-readable JSON error line goes to stderr and
the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import harness, synth
from .kernels import KINDS

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _parse_bool(text, key):
    low = text.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"config key {key}: expected a boolean, got {text!r}")


def _parse_int_list(text):
    """Comma list of ints, or an inclusive a:b range."""
    text = text.strip()
    if ":" in text and "," not in text:
        lo, hi = text.split(":", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(v) for v in text.split(",") if v.strip())


def _parse_float_list(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_pow2_grid(text):
    """Inclusive a:b range of exponents, or a comma list of exponents,
    expanded as powers of two."""
    exps = _parse_int_list(text)
    return tuple(2.0 ** e for e in exps)


def read_config(path):
    """Parse a flat `key = value` config file into an ExperimentConfig.

    Every field defaults to the reference protocol values; unknown keys
    are rejected. Lines starting with # are comments.
    """
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            entries[key.strip()] = value.strip()

    synth_keys = {}
    exp_keys = {}
    for key, value in entries.items():
        if key == "scenario":
            synth_keys["scenario"] = value
        elif key == "mode_size":
            synth_keys["mode_size"] = int(value)
        elif key == "r_exact":
            synth_keys["r_exact"] = int(value)
        elif key == "r_approx":
            synth_keys["r_approx"] = int(value)
        elif key == "samples_per_class":
            synth_keys["samples_per_class"] = int(value)
        elif key == "freq_uniform":
            synth_keys["freq_uniform"] = _parse_bool(value, key)
        elif key == "data_dir":
            exp_keys["data_dir"] = value
        elif key == "noise_grid":
            exp_keys["noise_grid"] = _parse_float_list(value)
        elif key == "kernels":
            kernels = tuple(k.strip() for k in value.split(",") if k.strip())
            for k in kernels:
                if k not in KINDS:
                    raise ValueError(f"{path}: unknown kernel kind {k!r}")
            exp_keys["kernels"] = kernels
        elif key == "rank_grid":
            exp_keys["rank_grid"] = _parse_int_list(value)
        elif key == "c_grid":
            exp_keys["c_grid"] = _parse_float_list(value)
        elif key == "g_grid":
            exp_keys["g_grid"] = _parse_float_list(value)
        elif key == "c_grid_log2":
            exp_keys["c_grid"] = _parse_pow2_grid(value)
        elif key == "g_grid_log2":
            exp_keys["g_grid"] = _parse_pow2_grid(value)
        elif key == "repeats":
            exp_keys["repeats"] = int(value)
        elif key == "folds":
            exp_keys["folds"] = int(value)
        elif key == "seed":
            exp_keys["seed"] = int(value)
        elif key == "p":
            exp_keys["p"] = float(value)
        elif key == "threads":
            exp_keys["threads"] = int(value)
        elif key == "measure_time":
            exp_keys["measure_time"] = _parse_bool(value, key)
        elif key == "smo_tol":
            exp_keys["smo_tol"] = float(value)
        elif key == "output":
            exp_keys["output"] = value
        else:
            raise ValueError(f"{path}: unknown config key {key!r}")

    if "data_dir" in exp_keys:
        if synth_keys:
            raise ValueError(f"{path}: data_dir excludes synthetic keys")
        return harness.ExperimentConfig(**exp_keys)
    if "scenario" not in synth_keys:
        raise ValueError(f"{path}: either scenario or data_dir is required")
    synth_keys["seed"] = exp_keys.get("seed", 0)
    return harness.ExperimentConfig(synth=synth.SynthConfig(**synth_keys),
                                    **exp_keys)


def _cmd_synth(args):
    cfg = synth.SynthConfig(
        scenario=args.scenario,
        mode_size=args.mode_size,
        r_exact=args.r_exact,
        r_approx=args.r_approx,
        noise_variance=args.noise_variance,
        samples_per_class=args.samples_per_class,
        seed=args.seed,
        freq_uniform=args.freq_uniform,
    )
    manifest = harness.save_dataset(synth.generate(cfg), args.out)
    print(manifest)
    return 0


def _cmd_run(args):
    cfg = read_config(args.config)
    if args.threads is not None:
        cfg = dataclasses.replace(cfg, threads=args.threads)
    report = harness.run_experiment(cfg)
    out_dir = args.output or cfg.output or "."
    csv_path, json_path = harness.emit_report(report, out_dir)
    print(csv_path)
    print(json_path)
    return 0


def _cmd_report(args):
    report = harness.load_report(args.summary)
    harness.render_csv(report.rows, args.out)
    print(args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stmkernels",
        description="Tensor-kernel SVM benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate and export synthetic data")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--scenario", choices=synth.SCENARIOS, default="leaf")
    p_synth.add_argument("--mode-size", type=int, default=100)
    p_synth.add_argument("--r-exact", type=int, default=3)
    p_synth.add_argument("--r-approx", type=int, default=3)
    p_synth.add_argument("--noise-variance", type=float, default=0.01)
    p_synth.add_argument("--samples-per-class", type=int, default=50)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--freq-uniform", action="store_true")
    p_synth.set_defaults(func=_cmd_synth)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--threads", type=int, default=None)
    p_run.add_argument("--output", default=None)
    p_run.set_defaults(func=_cmd_run)

    p_report = sub.add_parser("report", help="re-render a CSV from summary.json")
    p_report.add_argument("--summary", required=True)
    p_report.add_argument("--out", required=True)
    p_report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single CLI error boundary
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
