"""Multi-restart VQE runs, fixed-angle presets and optimizer comparisons."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import hminus
from .fermion import FermionOperator, encode
from .optimizers import Objective, OptimizerConfig, OptimizerTrace, minimize
from .pauli import PauliSum, min_eigenvalue
from .statevector import StateVector
from .svg import convergence_svg
from .vqe import (
    DEFAULT_SHOTS,
    AnsatzConfig,
    ansatz_amplitudes,
    canonical_angles,
    energy,
    energy_function,
    prepare_ansatz,
    variance,
)

TRACE_HEADER = ("iteration", "energy_hartree")
REFERENCE_TABLES = ("nelder_mead_simulator", "cobyla_ibmqx2")
PLOT_REFERENCES = {
    "theoretical line": hminus.REFERENCE_ENERGIES["theoretical_line"],
    "hydrogen atom": hminus.REFERENCE_ENERGIES["hydrogen_atom"],
    "no correlation": hminus.REFERENCE_ENERGIES["hartree_fock_no_correlation"],
}


class UsageError(ValueError):
    """Invalid experiment configuration (CLI exit status 2)."""


@dataclass
class ExperimentConfig:
    encoding: str = "jordan_wigner"
    sign_convention: str = "physical"
    two_body_sign: str = "eq16_plus"
    method: str = "nelder_mead"
    max_iterations: int = 5000
    f_tolerance: float = 1e-12
    x_tolerance: float = 1e-8
    shots: int = 0
    depth: int = 1
    seed: int = 0
    restarts: int = 1
    jobs: int = 1
    fermion_text: str | None = None

    def __post_init__(self):
        if self.shots < 0:
            raise UsageError("shots must be >= 0")
        if self.restarts < 1:
            raise UsageError("restarts must be >= 1")
        if self.depth < 1:
            raise UsageError("depth must be >= 1")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.encoding not in hminus.ENCODINGS:
            raise UsageError(f"unknown encoding {self.encoding!r}")
        if self.sign_convention not in hminus.SIGN_CONVENTIONS:
            raise UsageError(f"unknown sign convention {self.sign_convention!r}")
        if self.two_body_sign not in hminus.TWO_BODY_SIGNS:
            raise UsageError(f"unknown two-body sign {self.two_body_sign!r}")

    def hamiltonian(self) -> PauliSum:
        if self.fermion_text is not None:
            return encode(FermionOperator.from_text(self.fermion_text), self.encoding)
        spec = hminus.HamiltonianSpec.make(
            self.encoding, self.sign_convention, self.two_body_sign
        )
        return hminus.build_hamiltonian(spec)

    def optimizer_config(self, seed: int) -> OptimizerConfig:
        try:
            return OptimizerConfig(
                self.method,
                max_iterations=self.max_iterations,
                f_tolerance=self.f_tolerance,
                x_tolerance=self.x_tolerance,
                seed=seed,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("jobs")
        if out["fermion_text"] is None:
            out.pop("fermion_text")
        return out


@dataclass
class RunResult:
    trace: OptimizerTrace
    summary: dict
    restart_traces: list[OptimizerTrace] = field(repr=False, default_factory=list)


def _restart_seeds(seed: int, restart: int) -> tuple[np.random.Generator, int, int]:
    """Initial angles, optimizer seed and sampling seed for one restart."""
    children = np.random.SeedSequence([seed, restart]).spawn(3)
    rng = np.random.Generator(np.random.PCG64(children[0]))
    return (
        rng,
        int(children[1].generate_state(1)[0]),
        int(children[2].generate_state(1)[0]),
    )


def _one_restart(cfg: ExperimentConfig, h: PauliSum, ansatz: AnsatzConfig, restart: int):
    rng, opt_seed, shot_seed = _restart_seeds(cfg.seed, restart)
    x0 = rng.uniform(0.0, 2 * np.pi, ansatz.n_params)
    objective = Objective(energy_function(h, ansatz, cfg.shots, shot_seed))
    return minimize(objective, x0, cfg.optimizer_config(opt_seed))


def run_vqe(cfg: ExperimentConfig) -> RunResult:
    h = cfg.hamiltonian()
    if cfg.shots > 0 and not h.is_diagonal():
        raise UsageError("shots > 0 needs an I/Z-only Hamiltonian; use --shots 0")
    cfg.optimizer_config(cfg.seed)  # validate method before spawning work
    ansatz = AnsatzConfig(h.n_qubits, cfg.depth)
    exact_min = min_eigenvalue(h)

    restarts = range(cfg.restarts)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            traces = list(pool.map(lambda r: _one_restart(cfg, h, ansatz, r), restarts))
    else:
        traces = [_one_restart(cfg, h, ansatz, r) for r in restarts]

    best = min(range(len(traces)), key=lambda r: (traces[r].best_energy, r))
    trace = traces[best]
    params = trace.best_params
    final_exact = energy(h, StateVector(h.n_qubits, ansatz_amplitudes(ansatz, params))).energy
    summary = {
        "final_energy": trace.best_energy,
        "final_exact_energy": final_exact,
        "exact_minimum": exact_min,
        "gap": abs(trace.best_energy - exact_min),
        "exact_gap": abs(final_exact - exact_min),
        "terminal_reason": trace.terminal_reason,
        "iterations": len(trace),
        "evaluations": trace.evaluations,
        "total_evaluations": sum(t.evaluations for t in traces),
        "best_restart": best,
        "restart_energies": [t.best_energy for t in traces],
        "final_angles": canonical_angles(params).tolist(),
        "config": cfg.echo(),
        "annotations": _run_annotations(cfg.method),
    }
    return RunResult(trace, summary, traces)


def _run_annotations(method: str) -> dict:
    key = f"{method}_simulator"
    notes = dict(hminus.REFERENCE_ENERGIES)
    if key in hminus.PUBLISHED_RUNS:
        notes[f"published_{key}"] = hminus.PUBLISHED_RUNS[key]
    return notes


@dataclass(frozen=True)
class PresetRun:
    """Fixed angles for a depth-1, two-qubit ansatz.

    Every angle of each initial block gets ``initial``, every angle of each
    final block gets ``final``.
    """

    name: str
    initial: float
    final: float
    annotations: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def initial_angles(self) -> np.ndarray:
        return np.full(6, self.initial)

    @property
    def final_angles(self) -> np.ndarray:
        return np.full(6, self.final)

    def params(self) -> np.ndarray:
        return np.concatenate([self.initial_angles, self.final_angles])


PRESETS = {
    p.name: p
    for p in (
        PresetRun("all_zero", 0.0, 0.0),
        PresetRun("initial_half_pi_final_zero", np.pi / 2, 0.0, {"ibmqx2": -0.381156}),
        PresetRun("initial_pi_final_pi", np.pi, np.pi, {"ibmqx2": -0.396531}),
        PresetRun(
            "initial_pi_final_zero",
            np.pi,
            0.0,
            {"ibmqx2": -0.507891, "ibmqx2_variance": 0.0870538, "ibmqx4": -0.450297},
        ),
    )
}


def run_preset(preset: PresetRun, cfg: ExperimentConfig) -> dict:
    h = cfg.hamiltonian()
    if h.n_qubits != 2:
        raise UsageError("presets are defined for the two-qubit Hamiltonian")
    ansatz = AnsatzConfig(2, 1)
    state = prepare_ansatz(ansatz, preset.params())
    shots = cfg.shots or DEFAULT_SHOTS
    sampled = energy(h, state, shots=shots, seed=cfg.seed)
    exact = energy(h, state)
    return {
        "preset": preset.name,
        "initial_angle": preset.initial,
        "final_angle": preset.final,
        "exact_energy": exact.energy,
        "shot_energy": sampled.energy,
        "shots": shots,
        "term_expectations_exact": exact.term_expectations,
        "term_expectations_shots": sampled.term_expectations,
        "variance": variance(h, state),
        "exact_minimum": min_eigenvalue(h),
        "published_hardware": dict(preset.annotations),
        "config": cfg.echo(),
    }


def compare_optimizers(methods: list[str], cfg: ExperimentConfig) -> list[dict]:
    if len(methods) < 2:
        raise UsageError("comparison needs at least two optimizer methods")
    rows = []
    for method in methods:
        sub = ExperimentConfig(**{**asdict(cfg), "method": method})
        start = time.perf_counter()
        result = run_vqe(sub)
        rows.append(
            {
                "method": method,
                "best_energy": result.summary["final_energy"],
                "evaluations": result.summary["total_evaluations"],
                "wall_time_s": round(time.perf_counter() - start, 3),
            }
        )
    return rows


def comparison_footer() -> list[str]:
    runs = hminus.PUBLISHED_RUNS
    return [
        f"# published cobyla (simulator): {runs['cobyla_simulator']}",
        f"# published cobyla (ibmqx2): {runs['cobyla_ibmqx2']}",
        f"# published powell (simulator): {runs['powell_simulator']}",
        f"# published nelder_mead (simulator): {runs['nelder_mead_simulator']}",
        "# annotations only; not reproducible from the printed coefficients",
    ]


def comparison_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["method", "best_energy", "evaluations", "wall_time_s"], lineterminator="\n"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "best_energy": repr(row["best_energy"])})
    return buf.getvalue()


def trace_csv(trace: OptimizerTrace) -> str:
    lines = [",".join(TRACE_HEADER)]
    lines += [f"{r.iteration},{r.energy!r}" for r in trace.records]
    return "\n".join(lines) + "\n"


def load_reference_table(name: str) -> list[tuple[int, float, float]]:
    if name not in REFERENCE_TABLES:
        raise UsageError(f"unknown reference table {name!r}; choose from {REFERENCE_TABLES}")
    text = resources.files("hminus_vqe").joinpath("data", f"{name}.csv").read_text()
    reader = csv.reader(io.StringIO(text))
    next(reader)
    return [(int(i), float(t), float(e)) for i, t, e in reader]


def write_outputs(
    result: RunResult,
    out_dir: Path,
    plot: bool = False,
    overlay: str | None = None,
) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    trace_path = out_dir / "trace.csv"
    trace_path.write_text(trace_csv(result.trace))
    written.append(trace_path)
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)
    if plot:
        series = {"this run": [(r.iteration, r.energy) for r in result.trace.records]}
        if overlay:
            series[f"published {overlay}"] = [
                (i, e) for i, _, e in load_reference_table(overlay)
            ]
        refs = dict(PLOT_REFERENCES)
        refs["exact minimum"] = result.summary["exact_minimum"]
        svg_path = out_dir / "convergence.svg"
        svg_path.write_text(convergence_svg(series, refs))
        written.append(svg_path)
    return written

