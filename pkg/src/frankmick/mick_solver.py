"""Minimum-information checkerboard copula under a fixed Kendall's tau.

Minimizes sum p log p over n x n cell-mass matrices with uniform marginals
and prescribed tau.  The stationarity condition

    log p_ij = const + alpha_i + beta_j + 2 * lambda_d * S_ij(p)

(S the concordance potential) is solved by a damped self-consistent
iteration whose marginal constraints are enforced by Sinkhorn scaling; an
outer secant/bisection search adjusts the multiplier lambda_d until the
achieved tau matches the target.  The continuum analog of the multiplier
maps to a Frank parameter via theta = 4 * lambda_d, which the report
exposes as ``implied_theta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .copula_core import CheckerboardDensity, theta_from_tau, uniform_checkerboard
from .concordance import _potential_from_masses, kendall_tau_checkerboard
from .errors import (
    BracketFailure,
    DivergenceDetected,
    NoConvergence,
    NotConverged,
    TauInfeasible,
)

_SINKHORN_CAP = 50_000
_MARGINAL_TOL = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    n: int
    target_tau: float
    tol_tau: float = 1e-6
    tol_fix: float = 1e-9
    max_outer: int = 60
    max_inner: int = 5000
    damping: float = 0.5
    multiplier_init: float | str = "auto"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not -1.0 < self.target_tau < 1.0:
            raise ValueError("target_tau must lie in (-1, 1)")
        if self.tol_tau <= 0.0 or self.tol_fix <= 0.0:
            raise ValueError("tolerances must be strictly positive")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


@dataclass(frozen=True)
class SolverState:
    density: CheckerboardDensity
    multiplier: float
    row_potentials: np.ndarray
    col_potentials: np.ndarray


@dataclass(frozen=True)
class SolverReport:
    state: SolverState
    achieved_tau: float
    stationarity_residual: float
    outer_iterations: int
    inner_iterations_total: int
    converged: bool
    implied_theta: float

    def to_json(self, cfg: SolverConfig | None = None) -> str:
        obj = {
            "achieved_tau": self.achieved_tau,
            "stationarity_residual": self.stationarity_residual,
            "outer_iterations": self.outer_iterations,
            "inner_iterations_total": self.inner_iterations_total,
            "converged": self.converged,
            "implied_theta": self.implied_theta,
            "multiplier": self.state.multiplier,
            "row_potentials": [float(x) for x in self.state.row_potentials],
            "col_potentials": [float(x) for x in self.state.col_potentials],
            "density": json.loads(
                self.state.density.to_json(
                    tau=self.achieved_tau, theta=self.implied_theta
                )
            ),
        }
        if cfg is not None:
            obj["config"] = {
                "n": cfg.n,
                "target_tau": cfg.target_tau,
                "tol_tau": cfg.tol_tau,
                "tol_fix": cfg.tol_fix,
                "max_outer": cfg.max_outer,
                "max_inner": cfg.max_inner,
                "damping": cfg.damping,
                "multiplier_init": cfg.multiplier_init,
            }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "SolverReport":
        obj = json.loads(text)
        density = CheckerboardDensity.from_json(json.dumps(obj["density"]))
        state = SolverState(
            density=density,
            multiplier=obj["multiplier"],
            row_potentials=np.array(obj["row_potentials"]),
            col_potentials=np.array(obj["col_potentials"]),
        )
        return cls(
            state=state,
            achieved_tau=obj["achieved_tau"],
            stationarity_residual=obj["stationarity_residual"],
            outer_iterations=obj["outer_iterations"],
            inner_iterations_total=obj["inner_iterations_total"],
            converged=obj["converged"],
            implied_theta=obj["implied_theta"],
        )


def sinkhorn_project(kernel) -> CheckerboardDensity:
    """Scale a positive kernel to uniform 1/n marginals.

    Returns D_r . kernel . D_c; cross-ratios of the kernel are preserved
    exactly.  Raises NotConverged for badly scaled kernels.
    """
    K = np.asarray(kernel, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("kernel must be a square matrix")
    if not np.all(np.isfinite(K)) or np.any(K <= 0.0):
        raise ValueError("kernel entries must be finite and > 0")
    n = K.shape[0]
    target = 1.0 / n
    c = np.ones(n)
    for _ in range(_SINKHORN_CAP):
        r = target / (K @ c)
        c = target / (K.T @ r)
        P = r[:, None] * K * c[None, :]
        err = max(
            np.max(np.abs(P.sum(axis=1) - target)),
            np.max(np.abs(P.sum(axis=0) - target)),
        )
        if err <= _MARGINAL_TOL:
            return CheckerboardDensity(n, P)
    raise NotConverged(
        f"Sinkhorn scaling did not reach {_MARGINAL_TOL} in {_SINKHORN_CAP} sweeps"
    )


def _additive_fit(M: np.ndarray):
    """Least-squares additive decomposition M ~ const + a_i + b_j."""
    grand = M.mean()
    a = M.mean(axis=1) - grand
    b = M.mean(axis=0) - grand
    resid = M - grand - a[:, None] - b[None, :]
    return grand, a, b, float(np.max(np.abs(resid)))


def _stationarity(masses: np.ndarray, lambda_d: float):
    M = np.log(masses) - 2.0 * lambda_d * _potential_from_masses(masses)
    return _additive_fit(M)


def _state_from_masses(masses, lambda_d) -> SolverState:
    _, a, b, _ = _stationarity(masses, lambda_d)
    return SolverState(
        density=CheckerboardDensity(masses.shape[0], masses),
        multiplier=lambda_d,
        row_potentials=a,
        col_potentials=b,
    )


def inner_fixed_point(
    state: SolverState, lambda_d: float, cfg: SolverConfig
) -> SolverState:
    """Damped self-consistent iteration p <- Sinkhorn(exp(2 lambda_d S(p))).

    Damping mixes old and new log-kernels; since Sinkhorn is invariant
    under row/column exponential factors, the damped map has the same
    fixed points as the undamped one.  Stops when the sup-norm change and
    the stationarity residual both fall below cfg.tol_fix.
    """
    p = state.density.masses
    if np.any(p <= 0.0):
        raise DivergenceDetected("initial density must be strictly positive")
    d = cfg.damping
    prev_change = math.inf
    growth_streak = 0
    iterations = 0
    for _ in range(cfg.max_inner):
        iterations += 1
        S = _potential_from_masses(p)
        log_kernel = (1.0 - d) * np.log(p) + d * (2.0 * lambda_d * S)
        log_kernel -= log_kernel.max()
        q = sinkhorn_project(np.exp(log_kernel)).masses
        if q.min() <= 0.0:
            raise DivergenceDetected("cell mass underflowed to zero")
        change = float(np.max(np.abs(q - p)))
        if change > prev_change:
            growth_streak += 1
            if growth_streak >= 3 and d > 0.05:
                d = max(0.05, d / 2.0)  # oscillation: damp harder
                growth_streak = 0
        else:
            growth_streak = 0
        prev_change = change
        p = q
        if change <= cfg.tol_fix:
            _, _, _, resid = _stationarity(p, lambda_d)
            if resid <= cfg.tol_fix:
                break
    st = _state_from_masses(p, lambda_d)
    object.__setattr__(st, "_inner_iterations", iterations)
    return st


def _tau_of_multiplier(lambda_d, cfg, warm=None):
    start = warm if warm is not None else uniform_checkerboard(cfg.n)
    state = inner_fixed_point(
        SolverState(start, lambda_d, np.zeros(cfg.n), np.zeros(cfg.n)),
        lambda_d,
        cfg,
    )
    tau = kendall_tau_checkerboard(state.density)
    return tau, state, getattr(state, "_inner_iterations", 0)


def tau_max_for_grid(n: int) -> float:
    """Largest tau attainable on an n-grid: tau of the diagonal checkerboard."""
    return kendall_tau_checkerboard(
        CheckerboardDensity(n, np.diag(np.full(n, 1.0 / n)))
    )


def outer_multiplier_search(cfg: SolverConfig):
    """Find lambda_d whose fixed-point tau hits cfg.target_tau.

    Returns (lambda_d, state).  Relies on the empirically monotone map
    lambda_d -> tau; if no bracket can be found the failure is surfaced
    as BracketFailure with the achieved tau range.
    """
    lam, state, *_ = _search(cfg)
    return lam, state


def _search(cfg: SolverConfig):
    target = cfg.target_tau
    if cfg.multiplier_init == "auto":
        lam0 = theta_from_tau(target, 1e-10).theta / 4.0
    else:
        lam0 = float(cfg.multiplier_init)

    inner_total = 0
    evals = []  # (lambda, tau, state)

    def evaluate(lam, warm):
        nonlocal inner_total
        tau, state, iters = _tau_of_multiplier(lam, cfg, warm)
        inner_total += iters
        evals.append((lam, tau))
        return tau, state

    tau0, state0 = evaluate(lam0, None)
    if abs(tau0 - target) <= cfg.tol_tau:
        return lam0, state0, len(evals), inner_total

    # march in the needed direction until the target is straddled
    lo, tau_lo = (lam0, tau0) if tau0 < target else (None, None)
    hi, tau_hi = (lam0, tau0) if tau0 > target else (None, None)
    lam, tau, state = lam0, tau0, state0
    step = max(0.25, 0.5 * abs(lam0))
    while lo is None or hi is None:
        if len(evals) >= cfg.max_outer or abs(lam) > 200.0:
            taus = [t for _, t in evals]
            raise BracketFailure(
                f"could not bracket tau = {target}",
                tau_range=(min(taus), max(taus)),
            )
        lam = lam + step if tau < target else lam - step
        step *= 2.0
        tau, state = evaluate(lam, state.density)
        if tau < target:
            lo, tau_lo = lam, tau
        else:
            hi, tau_hi = lam, tau

    best = (abs(tau - target), lam, tau, state)
    while len(evals) < cfg.max_outer:
        # secant guess, safeguarded by the bracket midpoint
        if tau_hi != tau_lo:
            lam = lo + (target - tau_lo) * (hi - lo) / (tau_hi - tau_lo)
        else:
            lam = 0.5 * (lo + hi)
        width = hi - lo
        if not (lo + 0.01 * width < lam < hi - 0.01 * width):
            lam = 0.5 * (lo + hi)
        tau, state = evaluate(lam, state.density)
        if abs(tau - target) < best[0]:
            best = (abs(tau - target), lam, tau, state)
        if abs(tau - target) <= cfg.tol_tau:
            return lam, state, len(evals), inner_total
        if tau < target:
            lo, tau_lo = lam, tau
        else:
            hi, tau_hi = lam, tau

    _, lam, tau, state = best
    report = _assemble_report(
        state, lam, tau, cfg, len(evals), inner_total
    )
    raise NoConvergence(
        f"outer search exhausted {cfg.max_outer} evaluations "
        f"(best tau {tau} vs target {target})",
        report=report,
    )


def _assemble_report(state, lam, tau, cfg, outer, inner_total) -> SolverReport:
    _, _, _, resid = _stationarity(state.density.masses, lam)
    converged = abs(tau - cfg.target_tau) <= cfg.tol_tau and resid <= cfg.tol_fix
    return SolverReport(
        state=state,
        achieved_tau=tau,
        stationarity_residual=resid,
        outer_iterations=outer,
        inner_iterations_total=inner_total,
        converged=converged,
        implied_theta=4.0 * lam,
    )


def solve_mick(cfg: SolverConfig) -> SolverReport:
    """Solve the discrete minimum-information problem for cfg.target_tau.

    Deterministic given the config.  Raises TauInfeasible when the target
    exceeds the grid's attainable range and NoConvergence (carrying the
    best iterate) when iteration limits run out.
    """
    if cfg.target_tau == 0.0:
        density = uniform_checkerboard(cfg.n)
        state = SolverState(density, 0.0, np.zeros(cfg.n), np.zeros(cfg.n))
        return _assemble_report(state, 0.0, 0.0, cfg, 0, 0)
    limit = tau_max_for_grid(cfg.n)
    if abs(cfg.target_tau) >= limit:
        raise TauInfeasible(
            f"|tau| = {abs(cfg.target_tau)} is not attainable on an "
            f"n = {cfg.n} grid (max {limit})"
        )
    lam, state, outer, inner_total = _search(cfg)
    tau = kendall_tau_checkerboard(state.density)
    return _assemble_report(state, lam, tau, cfg, outer, inner_total)
