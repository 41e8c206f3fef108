"""Independent reference implementations used only by the tests.

Everything here is deliberately slow and dumb: brute-force sign sums,
tensor-product quadrature, and a generic augmented-Lagrangian projected
gradient optimizer.  None of it shares code paths with the library
routines it checks.
"""

import numpy as np

from frankmick.concordance import _potential_from_masses
from frankmick.mick_solver import sinkhorn_project


def brute_potential(m: np.ndarray) -> np.ndarray:
    """O(n^4) signed quadrant sums, straight from the definition."""
    n = m.shape[0]
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    S[i, j] += np.sign(i - k) * np.sign(j - l) * m[k, l]
    return S


def brute_tau(m: np.ndarray) -> float:
    return float(np.sum(m * brute_potential(m)))


def gauss_legendre_2d(f, order=64) -> float:
    """Tensor-product Gauss-Legendre integral of f over the unit square."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    return float(w @ f(x[:, None], x[None, :]) @ w)


def project_affine(X: np.ndarray, n: int) -> np.ndarray:
    """Orthogonal projection onto {row sums = col sums = 1/n}."""
    r = X.sum(axis=1) - 1.0 / n
    c = X.sum(axis=0) - 1.0 / n
    s = X.sum() - 1.0
    return X - r[:, None] / n - c[None, :] / n + s / (n * n)


def projected_gradient_mick(n, target, mu=50.0, outers=100, inners=5000,
                            tol=1e-13):
    """Augmented-Lagrangian projected gradient for the discrete problem.

    Minimizes sum p log p over positive matrices with uniform 1/n marginals
    and tau(p) = target.  Steps are Barzilai-Borwein with positivity
    backtracking; the tau constraint is handled by a multiplier/penalty
    outer loop.  Returns the optimal mass matrix.
    """
    p = np.full((n, n), 1.0 / (n * n))
    nu = 0.0

    def grad_of(p):
        S = _potential_from_masses(p)
        cv = float(np.sum(p * S)) - target
        return np.log(p) + 1.0 + (mu * cv - nu) * 2.0 * S, cv

    for _ in range(outers):
        g, cv = grad_of(p)
        step = 0.02
        change = np.inf
        for _ in range(inners):
            q = project_affine(p - step * g, n)
            while q.min() <= 0.0:
                step /= 2.0
                q = project_affine(p - step * g, n)
            g_new, cv = grad_of(q)
            dp = (q - p).ravel()
            dg = (g_new - g).ravel()
            denom = dp @ dg
            if denom != 0.0:
                step = min(abs(dp @ dp / denom), 1.0)
            change = np.max(np.abs(q - p))
            p, g = q, g_new
            if change < tol:
                break
        nu -= mu * cv
        if abs(cv) < 1e-13 and change < tol:
            break
    return p


def sample_checkerboard(masses: np.ndarray, count: int, seed: int):
    """Draw (u, v) pairs from a checkerboard density: pick a cell by mass,
    then uniform within the cell."""
    n = masses.shape[0]
    rng = np.random.default_rng(seed)
    idx = rng.choice(n * n, size=count, p=masses.ravel() / masses.sum())
    i, j = np.divmod(idx, n)
    u = (i + rng.random(count)) / n
    v = (j + rng.random(count)) / n
    return u, v


def random_checkerboard(rng, n) -> np.ndarray:
    """Random valid checkerboard masses (positive kernel, Sinkhorn-scaled)."""
    return sinkhorn_project(np.exp(rng.normal(size=(n, n)))).masses


def random_feasible_with_tau(rng, n, target, tol=1e-10):
    """Random density with uniform marginals and tau = target.

    Tilts a random kernel along a concordant direction and bisects the
    tilt until tau matches; returns None (rejection) when the random
    kernel's reachable tau range does not bracket the target.
    """
    from frankmick.errors import NotConverged

    g = (2.0 * np.arange(1, n + 1) - 1.0 - n) / n
    D = np.outer(g, g)
    logR = rng.normal(size=(n, n))

    def density(w):
        return sinkhorn_project(np.exp(logR + w * D)).masses

    def tau_of(m):
        return float(np.sum(m * _potential_from_masses(m)))

    lo, hi = -20.0, 20.0
    try:
        if not tau_of(density(lo)) < target < tau_of(density(hi)):
            return None
    except NotConverged:
        return None
    m = None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        m = density(mid)
        t = tau_of(m)
        if abs(t - target) <= tol:
            return m
        if t < target:
            lo = mid
        else:
            hi = mid
    return m
