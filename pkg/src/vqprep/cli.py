"""Command-line entry point.

Subcommands map one-to-one onto experiment kinds; a `key = value` config
file (INI, section [experiment]) can pre-populate any flag, with explicit
flags winning. Outputs are data files only.
"""

from __future__ import annotations

import argparse
import configparser
import sys

from .harness import EXPERIMENT_KINDS, ExperimentConfig, FIGURE_MAP, emit, run
from .statevector import ValidationError

_SUBCOMMAND_KIND = {
    "train": "train_once",
    "sweep-n": "sweep_N",
    "sweep-l": "sweep_L",
    "bp": "bp_variance",
    "noise": "noise_sweep",
    "depth": "depth_report",
}


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="INI config file with an [experiment] section")
    p.add_argument("--target", help="target state: GHZ, W, AME")
    p.add_argument("--ansatz", help="ansatz family: G2, G2_GN, G2_GN_W")
    p.add_argument("--qubits", type=int, help="number of qubits N")
    p.add_argument("--layers", type=int, help="number of ansatz layers L")
    p.add_argument("--optimizer", choices=["adam", "qng"])
    p.add_argument("--lr", type=float, help="learning rate")
    p.add_argument("--mode", choices=["exact", "shots"])
    p.add_argument("--shots", type=int)
    p.add_argument("--iters", type=int, help="training iterations")
    p.add_argument("--repeats", type=int)
    p.add_argument("--n-values", help="comma-separated N list for sweeps")
    p.add_argument("--l-values", help="comma-separated L list for sweep-l")
    p.add_argument("--eps", help="comma-separated readout error rates")
    p.add_argument("--mitigate", action="store_true", default=None)
    p.add_argument("--bp-samples", type=int, help="random initializations per variance point")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, help="parallel repeats per sweep point")
    p.add_argument("--out", help="output file path")
    p.add_argument("--format", choices=["json", "csv"], dest="fmt")


_FLAG_TO_FIELD = {
    "target": "target", "ansatz": "ansatz", "qubits": "n_qubits", "layers": "layers",
    "optimizer": "optimizer", "lr": "learning_rate", "mode": "mode", "shots": "shots",
    "iters": "iterations", "repeats": "repeats", "mitigate": "mitigate",
    "bp_samples": "bp_samples", "seed": "seed", "jobs": "jobs", "out": "out", "fmt": "fmt",
}
_LIST_FLAGS = {"n_values": ("n_values", int), "l_values": ("l_values", int), "eps": ("epsilons", float)}


def _build_config(kind: str, args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {"kind": kind}
    if args.config:
        parser = configparser.ConfigParser()
        if not parser.read(args.config):
            raise ValidationError(f"cannot read config file {args.config}")
        section = parser["experiment"]
        for flag, fieldname in _FLAG_TO_FIELD.items():
            if flag in section:
                raw = section[flag]
                default = ExperimentConfig.__dataclass_fields__[fieldname].default
                if isinstance(default, bool):
                    values[fieldname] = section.getboolean(flag)
                elif isinstance(default, int):
                    values[fieldname] = int(raw)
                elif isinstance(default, float):
                    values[fieldname] = float(raw)
                else:
                    values[fieldname] = raw
        for flag, (fieldname, cast) in _LIST_FLAGS.items():
            if flag in section:
                values[fieldname] = [cast(x) for x in section[flag].split(",")]
    for flag, fieldname in _FLAG_TO_FIELD.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[fieldname] = v
    for flag, (fieldname, cast) in _LIST_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[fieldname] = [cast(x) for x in v.split(",")]
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vqprep",
                                     description="variational entangled-state preparation experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMAND_KIND:
        _add_common_flags(sub.add_parser(name, help=f"run the {_SUBCOMMAND_KIND[name]} experiment"))
    sub.add_parser("list-experiments", help="print the figure-to-experiment mapping")

    args = parser.parse_args(argv)
    if args.command == "list-experiments":
        for desc, kind in FIGURE_MAP.items():
            print(f"{kind:14s} {desc}")
        return 0

    try:
        config = _build_config(_SUBCOMMAND_KIND[args.command], args)
        result = run(config)
    except (ValidationError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if config.out:
        emit(result, config.fmt, config.out)
        print(f"wrote {config.fmt} result to {config.out}")
    else:
        from .harness import result_to_json
        print(result_to_json(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
