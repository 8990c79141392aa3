"""Maximise the QFI over (beta, theta) at fixed input energy and fixed l.

Search: a 129 x 256 grid in (beta, theta), best cell by deterministic
tie-break (smallest beta, then smallest theta), then alternating golden-section
refinement in beta and theta inside that cell.  Every grid point is first
mapped to its component energy n0 by inverting the input photon number.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import states
from .entanglement import entropy_arr
from .errors import NoRoot, OutOfRange, QbellError
from .qfi_disturbed import n_out_arr, qfi_disturbed_phi0_arr
from .qfi_ideal import qfi_ideal_arr

OBJECTIVES = ("ideal", "disturbed_phi0")
BETA_POINTS = 129
THETA_POINTS = 256
FIG1_THETA_POINTS = 721
TIE_TOL = 1e-12
MOVE_TOL = 1e-10
MAX_ROUNDS = 60
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizationProblem:
    n_in_target: float
    l: float
    eta: float = 0.0
    objective: str = "disturbed_phi0"

    def __post_init__(self):
        if not self.n_in_target > 0.0:
            raise OutOfRange(f"n_in_target must be > 0, got {self.n_in_target}")
        if not (-1.0 <= self.l <= 1.0):
            raise OutOfRange(f"l must lie in [-1, 1], got {self.l}")
        if not self.eta >= 0.0:
            raise OutOfRange(f"eta must be >= 0, got {self.eta}")
        if self.objective not in OBJECTIVES:
            raise OutOfRange(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")


@dataclass(frozen=True)
class OptimizationResult:
    problem: OptimizationProblem
    beta_opt: float = math.nan
    theta_opt: float = math.nan
    n0: float = math.nan
    H_max: float = math.nan
    E: float = math.nan
    n_in_A: float = math.nan
    diagnostics: dict = field(default_factory=dict, compare=False)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def objective_arr(objective: str, alpha, r, theta, l, eta):
    if objective == "ideal":
        return qfi_ideal_arr(alpha, r, theta, l)
    return qfi_disturbed_phi0_arr(alpha, r, theta, l, eta)


def evaluate_grid(problem: OptimizationProblem, beta, theta):
    """H and n0 over broadcast (beta, theta) arrays; nan where infeasible."""
    n0, multiple = states.invert_energy_grid(problem.n_in_target, beta, theta, problem.l)
    alpha, r = states.alpha_r_from_energy(np.nan_to_num(n0), beta)
    with np.errstate(all="ignore"):
        H = objective_arr(problem.objective, alpha, r, theta, problem.l, problem.eta)
    H = np.where(np.isnan(n0), np.nan, H)
    return H, n0, multiple


def evaluate_point(problem: OptimizationProblem, beta: float, theta: float):
    """Scalar (H, n0); H = -inf where the probe is infeasible."""
    n0, _ = states.solve_energy(problem.n_in_target, beta, theta, problem.l)
    if math.isnan(n0):
        return -math.inf, n0
    alpha, r = states.alpha_r_from_energy(n0, beta)
    with np.errstate(all="ignore"):
        H = float(objective_arr(problem.objective, alpha, r, theta, problem.l, problem.eta))
    if math.isnan(H):
        return -math.inf, n0
    return H, n0


def golden_max(f, lo: float, hi: float, tol: float = MOVE_TOL):
    """Maximise a unimodal ``f`` on [lo, hi]; endpoints are also compared.

    Returns (x, f(x)).  Ties keep the smaller x.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best = max([(fc, -c), (fd, -d), (f(lo), -lo), (f(hi), -hi)])
    return -best[1], best[0]


def _grid_argmax(H):
    """Flat index of the max with ties (within TIE_TOL) broken by position."""
    finite = np.where(np.isfinite(H), H, -np.inf)
    top = finite.max()
    if not np.isfinite(top):
        return None
    candidates = finite >= top - TIE_TOL * max(1.0, abs(top))
    return int(np.argmax(candidates.ravel()))


def optimize(
    problem: OptimizationProblem,
    beta_points: int = BETA_POINTS,
    theta_points: int = THETA_POINTS,
) -> OptimizationResult:
    betas = np.linspace(0.0, 1.0, beta_points)
    thetas = 2.0 * math.pi * np.arange(theta_points) / theta_points
    H, n0, multiple = evaluate_grid(problem, betas[:, None], thetas[None, :])
    idx = _grid_argmax(H)
    if idx is None:
        raise NoRoot(f"no feasible (beta, theta) grid point for {problem}")
    i, j = divmod(idx, theta_points)
    beta, theta = float(betas[i]), float(thetas[j])
    grid_H = float(H[i, j])

    db = 1.0 / (beta_points - 1)
    dt = 2.0 * math.pi / theta_points
    b_lo, b_hi = max(0.0, beta - db), min(1.0, beta + db)
    t_lo, t_hi = theta - dt, theta + dt
    best = grid_H
    rounds = 0
    trace = [(beta, theta, grid_H)]
    for rounds in range(1, MAX_ROUNDS + 1):
        new_beta, hb = golden_max(lambda b: evaluate_point(problem, b, theta)[0], b_lo, b_hi)
        if hb <= best + TIE_TOL * max(1.0, abs(best)):
            new_beta, hb = beta, best
        new_theta, ht = golden_max(lambda t: evaluate_point(problem, new_beta, t)[0], t_lo, t_hi)
        if ht <= hb + TIE_TOL * max(1.0, abs(hb)):
            new_theta, ht = theta, hb
        moved = max(abs(new_beta - beta), abs(new_theta - theta))
        gain = ht - best
        beta, theta, best = new_beta, new_theta, ht
        trace.append((beta, theta, best))
        if moved < MOVE_TOL or gain <= 4 * np.finfo(float).eps * max(1.0, abs(best)):
            break

    theta_mod = theta % (2.0 * math.pi)
    H_max, n0_opt = evaluate_point(problem, beta, theta_mod)
    alpha, r = states.alpha_r_from_energy(n0_opt, beta)
    E = float(entropy_arr(alpha, r, theta_mod, problem.l))
    n_in_check = float(states.n_in(alpha, r, theta_mod, problem.l))
    diagnostics = {
        "grid_beta": float(betas[i]),
        "grid_theta": float(thetas[j]),
        "grid_H": grid_H,
        "rounds": rounds,
        "infeasible_points": int(np.isnan(n0).sum()),
        "multiple_roots_points": int(multiple.sum()),
        "trace": trace,
    }
    return OptimizationResult(
        problem=problem,
        beta_opt=float(beta),
        theta_opt=float(theta_mod),
        n0=float(n0_opt),
        H_max=float(H_max),
        E=E,
        n_in_A=n_in_check,
        diagnostics=diagnostics,
    )


def _workers() -> int:
    env = os.environ.get("QBELL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_all(fn, items):
    workers = min(_workers(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _safe_optimize(problem: OptimizationProblem) -> OptimizationResult:
    try:
        return optimize(problem)
    except QbellError as exc:
        return OptimizationResult(problem=problem, error=f"{exc.code}: {exc}")


def sweep_l(template: OptimizationProblem, l_values: Sequence[float]) -> list[OptimizationResult]:
    """One independent optimisation per l; failures are kept as error results."""
    problems = [replace(template, l=float(l)) for l in l_values]
    return _run_all(_safe_optimize, problems)


def qfi_vs_entanglement(
    template: OptimizationProblem, l_grid: Sequence[float]
) -> list[tuple[float, float]]:
    """(E, H_max) pairs on the positive-l semi-axis, in the order of l_grid."""
    if any(not (0.0 < l <= 1.0) for l in l_grid):
        raise OutOfRange("qfi_vs_entanglement takes l in (0, 1] only")
    return [(res.E, res.H_max) for res in sweep_l(template, sorted(l_grid)) if res.ok]


def optimal_theta(problem: OptimizationProblem, beta: float, theta_points: int = FIG1_THETA_POINTS):
    """Best theta at fixed beta (721-point grid, then golden refinement).

    Returns (theta, H, n0); raises NoRoot when no theta is feasible.
    """
    thetas = 2.0 * math.pi * np.arange(theta_points) / theta_points
    H, _, _ = evaluate_grid(problem, np.full(theta_points, float(beta)), thetas)
    j = _grid_argmax(H)
    if j is None:
        raise NoRoot(f"no feasible theta at beta = {beta} for {problem}")
    dt = 2.0 * math.pi / theta_points
    theta, h = golden_max(
        lambda t: evaluate_point(problem, beta, t)[0], thetas[j] - dt, thetas[j] + dt
    )
    if h <= H[j] + TIE_TOL * max(1.0, abs(H[j])):
        theta = float(thetas[j])
    theta = theta % (2.0 * math.pi)
    H_best, n0 = evaluate_point(problem, beta, theta)
    return theta, H_best, n0


@dataclass(frozen=True)
class NoutPoint:
    eta: float
    n_out_target: float
    l: float
    n_in_A: float = math.nan
    n_out_A: float = math.nan
    result: Optional[OptimizationResult] = None
    error: Optional[str] = None

    @property
    def H(self) -> float:
        return self.result.H_max if self.result is not None else math.nan


def _n_out_for(l, eta, n_in_target, beta, theta):
    n0, _ = states.solve_energy(n_in_target, beta, theta, l)
    if math.isnan(n0):
        return math.nan
    alpha, r = states.alpha_r_from_energy(n0, beta)
    return float(n_out_arr(alpha, r, theta, l, eta))


def solve_nout_point(eta: float, n_out_target: float, l: float, max_passes: int = 5) -> NoutPoint:
    """Optimal probe whose output energy n_out,A equals the target.

    n_out is monotone in n_in at fixed (beta, theta): optimise, bisect n_in
    with the optimal shape held fixed, and repeat until n_in settles.
    """
    n_in = n_out_target - eta**2
    if not n_in > 0.0:
        return NoutPoint(
            eta, n_out_target, l,
            error=f"NoRoot: n_out = {n_out_target} is below the disturbance energy eta^2 = {eta**2}",
        )
    result = None
    for _ in range(max_passes):
        result = _safe_optimize(OptimizationProblem(n_in, l, eta, "disturbed_phi0"))
        if not result.ok:
            return NoutPoint(eta, n_out_target, l, n_in_A=n_in, error=result.error)

        def g(x, res=result):
            return _n_out_for(l, eta, x, res.beta_opt, res.theta_opt) - n_out_target

        lo, hi = 0.0, n_out_target
        while hi - lo > 1e-13 * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            val = g(mid)
            if math.isnan(val) or val < 0:
                lo = mid
            else:
                hi = mid
        new_n_in = 0.5 * (lo + hi)
        settled = abs(new_n_in - n_in) < 1e-10
        n_in = new_n_in
        if settled:
            break
    result = _safe_optimize(OptimizationProblem(n_in, l, eta, "disturbed_phi0"))
    if not result.ok:
        return NoutPoint(eta, n_out_target, l, n_in_A=n_in, error=result.error)
    n_out = _n_out_for(l, eta, n_in, result.beta_opt, result.theta_opt)
    return NoutPoint(eta, n_out_target, l, n_in_A=n_in, n_out_A=n_out, result=result)


def sweep_nout(
    eta_values: Sequence[float], n_out_grid: Sequence[float], l: float = 1.0
) -> list[NoutPoint]:
    jobs = [(float(eta), float(n)) for eta in eta_values for n in n_out_grid]
    return _run_all(lambda job: solve_nout_point(job[0], job[1], l), jobs)
