"""Derivative-free and stochastic-gradient minimizers for the VQE energy.

All three return an :class:`OptimizerTrace` whose recorded energy is the best
value seen so far, so it never increases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .statevector import make_rng

METHODS = ("nelder_mead", "powell", "spsa")
TERMINAL_REASONS = ("converged_f", "converged_x", "max_iterations")

_GOLD = 0.5 * (3.0 - math.sqrt(5.0))
_GROW = (1.0 - _GOLD) / _GOLD  # golden ratio


class OptimizerError(RuntimeError):
    """Raised when the objective returns a non-finite value."""


class Objective:
    """Counting wrapper around ``fn(params) -> float``."""

    def __init__(self, fn: Callable[[np.ndarray], float]):
        self.fn = fn
        self.evaluation_count = 0

    def __call__(self, x) -> float:
        self.evaluation_count += 1
        value = float(self.fn(np.asarray(x, dtype=float)))
        if not math.isfinite(value):
            raise OptimizerError(
                f"objective returned {value} at evaluation {self.evaluation_count}"
            )
        return value


@dataclass
class OptimizerConfig:
    method: str = "nelder_mead"
    max_iterations: int = 5000
    f_tolerance: float = 1e-12
    x_tolerance: float = 1e-8
    seed: int = 0
    # Nelder-Mead
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_step: float = 0.1
    # Powell
    line_tolerance: float = 1e-10
    # SPSA: a_k = a / (k + 1 + A)**alpha, c_k = c / (k + 1)**gamma
    spsa_a: float = 0.2
    spsa_c: float = 0.1
    spsa_A: float = 10.0
    spsa_alpha: float = 0.602
    spsa_gamma: float = 0.101
    # fixed +-pi/2 perturbation with gradient (E+ - E-)/2
    spsa_shift: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(
                f"unsupported optimizer {self.method!r}; choose from {', '.join(METHODS)}"
            )
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.f_tolerance <= 0 or self.x_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    energy: float
    params: np.ndarray = field(repr=False)


@dataclass
class OptimizerTrace:
    records: list[TraceRecord] = field(default_factory=list)
    terminal_reason: str = "max_iterations"
    evaluations: int = 0

    @property
    def best_energy(self) -> float:
        return self.records[-1].energy

    @property
    def best_params(self) -> np.ndarray:
        return self.records[-1].params

    @property
    def energies(self) -> list[float]:
        return [r.energy for r in self.records]

    def __len__(self):
        return len(self.records)


class _Recorder:
    def __init__(self, objective: Objective):
        self.objective = objective
        self.trace = OptimizerTrace()
        self.best_f = math.inf
        self.best_x = None

    def offer(self, x, f):
        f = float(f)
        if f < self.best_f:
            self.best_f = f
            self.best_x = np.array(x, dtype=float)

    def record(self, iteration):
        self.trace.records.append(TraceRecord(iteration, self.best_f, self.best_x.copy()))

    def finish(self, reason):
        self.trace.terminal_reason = reason
        self.trace.evaluations = self.objective.evaluation_count
        return self.trace


def _start(x0) -> np.ndarray:
    x0 = np.array(x0, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    return x0


def nelder_mead(obj: Objective, x0, cfg: OptimizerConfig) -> OptimizerTrace:
    x0 = _start(x0)
    n = x0.size
    rho, chi, gamma, sigma = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    rec = _Recorder(obj)

    simplex = np.vstack([x0] + [x0 + cfg.initial_step * e for e in np.eye(n)])
    fvals = np.array([obj(v) for v in simplex])
    for v, f in zip(simplex, fvals):
        rec.offer(v, f)

    reason = "max_iterations"
    for it in range(1, cfg.max_iterations + 1):
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]

        xr = centroid + rho * (centroid - worst)
        fr = obj(xr)
        rec.offer(xr, fr)
        shrink = False
        if fr < fvals[0]:
            xe = centroid + rho * chi * (centroid - worst)
            fe = obj(xe)
            rec.offer(xe, fe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-1]:
            xc = centroid + gamma * (xr - centroid)
            fc = obj(xc)
            rec.offer(xc, fc)
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
            else:
                shrink = True
        else:
            xcc = centroid - gamma * (centroid - worst)
            fcc = obj(xcc)
            rec.offer(xcc, fcc)
            if fcc < fvals[-1]:
                simplex[-1], fvals[-1] = xcc, fcc
            else:
                shrink = True
        if shrink:
            for j in range(1, n + 1):
                simplex[j] = simplex[0] + sigma * (simplex[j] - simplex[0])
                fvals[j] = obj(simplex[j])
                rec.offer(simplex[j], fvals[j])

        rec.record(it)
        best = int(np.argmin(fvals))
        if np.max(np.abs(fvals - fvals[best])) < cfg.f_tolerance:
            reason = "converged_f"
            break
        if np.max(np.abs(simplex - simplex[best])) < cfg.x_tolerance:
            reason = "converged_x"
            break
    return rec.finish(reason)


def _bracket(f1d, fa: float, step: float, max_steps: int = 60):
    """Expand from (0, step) until a < b < c with f(b) below both ends."""
    a, b = 0.0, step
    fb = f1d(b)
    if fb > fa:
        a, b, fa, fb = b, a, fb, fa
    c = b + _GROW * (b - a)
    fc = f1d(c)
    for _ in range(max_steps):
        if fc > fb:
            break
        # parabolic extrapolation, clamped to a golden step beyond c
        r = (b - a) * (fb - fc)
        q = (b - c) * (fb - fa)
        denom = 2.0 * math.copysign(max(abs(q - r), 1e-20), q - r)
        u = b - ((b - c) * q - (b - a) * r) / denom
        ulim = b + 100.0 * (c - b)
        if (b - u) * (u - c) > 0.0:
            fu = f1d(u)
            if fu < fc:
                return (b, u, c), (fb, fu, fc)
            if fu > fb:
                return (a, b, u), (fa, fb, fu)
            u = c + _GROW * (c - b)
            fu = f1d(u)
        elif (c - u) * (u - ulim) > 0.0:
            fu = f1d(u)
            if fu < fc:
                b, c, u = c, u, u + _GROW * (u - c)
                fb, fc, fu = fc, fu, f1d(u)
        else:
            u = c + _GROW * (c - b)
            fu = f1d(u)
        a, b, c = b, c, u
        fa, fb, fc = fb, fc, fu
    return (a, b, c), (fa, fb, fc)


def _brent(f1d, bracket, fvals, tol: float, max_iter: int = 200):
    """Brent's parabolic/golden-section minimization inside a bracket."""
    a, b = min(bracket[0], bracket[2]), max(bracket[0], bracket[2])
    x = w = v = bracket[1]
    fx = fw = fv = fvals[1]
    d = e = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        tol1 = tol * abs(x) + 1e-12
        tol2 = 2.0 * tol1
        if abs(x - mid) <= tol2 - 0.5 * (b - a):
            break
        use_golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            if abs(p) < abs(0.5 * q * e) and a * q < p + x * q < b * q:
                e, d = d, p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = math.copysign(tol1, mid - x)
                use_golden = False
        if use_golden:
            e = (a - x) if x >= mid else (b - x)
            d = _GOLD * e
        u = x + (d if abs(d) >= tol1 else math.copysign(tol1, d))
        fu = f1d(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, w, fv, fw = w, u, fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return x, fx


def _line_minimize(obj: Objective, rec: _Recorder, x, fx, direction, tol):
    def f1d(t):
        point = x + t * direction
        value = obj(point)
        rec.offer(point, value)
        return value

    bracket, fvals = _bracket(f1d, fx, 1.0)
    t, ft = _brent(f1d, bracket, fvals, tol)
    if ft >= fx:
        return x, fx
    return x + t * direction, ft


def powell(obj: Objective, x0, cfg: OptimizerConfig) -> OptimizerTrace:
    """Direction-set minimization with Powell's direction-replacement test."""
    x = _start(x0)
    n = x.size
    rec = _Recorder(obj)
    fx = obj(x)
    rec.offer(x, fx)
    directions = np.eye(n)

    reason = "max_iterations"
    for it in range(1, cfg.max_iterations + 1):
        x_start, f_start = x.copy(), fx
        biggest, big_index = 0.0, 0
        for i in range(n):
            f_before = fx
            x, fx = _line_minimize(obj, rec, x, fx, directions[i], cfg.line_tolerance)
            if f_before - fx > biggest:
                biggest, big_index = f_before - fx, i

        done_f = f_start - fx < cfg.f_tolerance
        done_x = np.max(np.abs(x - x_start)) < cfg.x_tolerance
        if not (done_f or done_x):
            step = x - x_start
            x_ext = x + step
            f_ext = obj(x_ext)
            rec.offer(x_ext, f_ext)
            if f_ext < f_start:
                t = 2.0 * (f_start - 2.0 * fx + f_ext) * (f_start - fx - biggest) ** 2
                t -= biggest * (f_start - f_ext) ** 2
                if t < 0.0:
                    x, fx = _line_minimize(obj, rec, x, fx, step, cfg.line_tolerance)
                    directions[big_index] = directions[-1]
                    directions[-1] = step
        rec.record(it)
        if done_f:
            reason = "converged_f"
            break
        if done_x:
            reason = "converged_x"
            break
    return rec.finish(reason)


def spsa(obj: Objective, x0, cfg: OptimizerConfig) -> OptimizerTrace:
    """Simultaneous-perturbation stochastic approximation.

    Each iteration spends exactly two evaluations at ``x +- c_k * delta``.
    Their mean stands in for the iterate's energy, so the incumbent is always
    an actual iterate (and never moves when the step gains are zero).
    """
    x = _start(x0)
    rec = _Recorder(obj)
    rng = make_rng(cfg.seed)
    rec.offer(x, obj(x))

    for k in range(cfg.max_iterations):
        a_k = cfg.spsa_a / (k + 1 + cfg.spsa_A) ** cfg.spsa_alpha
        c_k = math.pi / 2 if cfg.spsa_shift else cfg.spsa_c / (k + 1) ** cfg.spsa_gamma
        delta = rng.choice((-1.0, 1.0), size=x.size)
        y_plus = obj(x + c_k * delta)
        y_minus = obj(x - c_k * delta)
        rec.offer(x, 0.5 * (y_plus + y_minus))
        if cfg.spsa_shift:
            grad = 0.5 * (y_plus - y_minus) * delta
        else:
            grad = (y_plus - y_minus) / (2.0 * c_k) * delta
        x = x - a_k * grad
        rec.record(k + 1)
    return rec.finish("max_iterations")


_DISPATCH = {"nelder_mead": nelder_mead, "powell": powell, "spsa": spsa}


def minimize(obj: Objective, x0, cfg: OptimizerConfig) -> OptimizerTrace:
    return _DISPATCH[cfg.method](obj, x0, cfg)
