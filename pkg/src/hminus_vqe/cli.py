"""Command-line driver: ``hminus-vqe [options]``.

Exit status: 0 on success, 2 on usage errors, 3 on numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiment import (
    PRESETS,
    REFERENCE_TABLES,
    ExperimentConfig,
    UsageError,
    compare_optimizers,
    comparison_csv,
    comparison_footer,
    run_preset,
    run_vqe,
    write_outputs,
)
from .fermion import FermionError
from .optimizers import METHODS, OptimizerError

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

ENCODING_FLAGS = {"jw": "jordan_wigner", "bk": "bravyi_kitaev", "parity": "parity"}
SIGN_FLAGS = {"physical": "physical", "paper": "paper_literal"}
TWO_BODY_FLAGS = {"eq16": "eq16_plus", "eq18": "eq18_minus"}
UNSUPPORTED_METHODS = {"cobyla", "l-bfgs-b", "lbfgsb"}


def optimizer_name(flag: str) -> str:
    name = flag.strip().lower()
    supported = ", ".join(m.replace("_", "-") for m in METHODS)
    if name in UNSUPPORTED_METHODS:
        raise UsageError(f"optimizer {flag!r} is not implemented; supported: {supported}")
    name = name.replace("-", "_")
    if name not in METHODS:
        raise UsageError(f"unknown optimizer {flag!r}; supported: {supported}")
    return name


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hminus-vqe",
        description="Variational ground-state energy of the two-orbital H- ion.",
    )
    p.add_argument("--encoding", choices=sorted(ENCODING_FLAGS), default="jw")
    p.add_argument("--signs", choices=sorted(SIGN_FLAGS), default="physical",
                   help="one-body integral signs: published (paper) or bound-state (physical)")
    p.add_argument("--two-body-sign", choices=sorted(TWO_BODY_FLAGS), default="eq16",
                   help="sign of the Z0 Z1 two-body term")
    p.add_argument("--optimizer", default="nelder-mead",
                   help="nelder-mead, powell or spsa")
    p.add_argument("--compare", nargs="+", metavar="OPTIMIZER",
                   help="run each optimizer and print a comparison table")
    p.add_argument("--shots", type=int, default=0, help="shots per evaluation; 0 = exact")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="restarts run concurrently")
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--f-tolerance", type=float, default=1e-12)
    p.add_argument("--x-tolerance", type=float, default=1e-8)
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="evaluate fixed published angles instead of optimizing")
    p.add_argument("--dump-hamiltonian", action="store_true",
                   help="print the qubit Hamiltonian, one '<coeff> <letters>' per line")
    p.add_argument("--fermion-file", type=Path,
                   help="fermion operator text ('<coeff> 0^ 1^ 1 0' per line) to use instead of H-")
    p.add_argument("--out", type=Path, help="directory for trace.csv / summary.json")
    p.add_argument("--plot", action="store_true", help="also write convergence.svg to --out")
    p.add_argument("--overlay", choices=REFERENCE_TABLES,
                   help="published convergence table drawn on the plot")
    return p


def config_from_args(args) -> ExperimentConfig:
    fermion_text = None
    if args.fermion_file is not None:
        try:
            fermion_text = args.fermion_file.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.fermion_file}: {exc}") from exc
    return ExperimentConfig(
        encoding=ENCODING_FLAGS[args.encoding],
        sign_convention=SIGN_FLAGS[args.signs],
        two_body_sign=TWO_BODY_FLAGS[args.two_body_sign],
        method=optimizer_name(args.optimizer),
        max_iterations=args.max_iterations,
        f_tolerance=args.f_tolerance,
        x_tolerance=args.x_tolerance,
        shots=args.shots,
        depth=args.depth,
        seed=args.seed,
        restarts=args.restarts,
        jobs=args.jobs,
        fermion_text=fermion_text,
    )


def _run(args, out) -> int:
    cfg = config_from_args(args)

    if args.dump_hamiltonian:
        print(cfg.hamiltonian().to_text(), file=out)
        return EXIT_OK

    if args.preset:
        report = run_preset(PRESETS[args.preset], cfg)
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "preset.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return EXIT_OK

    if args.compare:
        rows = compare_optimizers([optimizer_name(m) for m in args.compare], cfg)
        table = comparison_csv(rows)
        print(table + "\n".join(comparison_footer()), file=out)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "comparison.csv").write_text(table)
        return EXIT_OK

    result = run_vqe(cfg)
    s = result.summary
    print(
        f"final energy {s['final_energy']:.10f} Ha  exact minimum {s['exact_minimum']:.10f} Ha  "
        f"gap {s['gap']:.3e}  ({s['terminal_reason']}, {s['iterations']} iterations)",
        file=out,
    )
    if args.out:
        for path in write_outputs(result, args.out, plot=args.plot, overlay=args.overlay):
            print(f"wrote {path}", file=out)
    elif args.plot:
        raise UsageError("--plot needs --out")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return _run(args, out)
    except (UsageError, FermionError) as exc:
        print(f"hminus-vqe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OptimizerError as exc:
        print(f"hminus-vqe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
