"""The three simplex-minimization threshold curves and their crossing points.

For each repulsion exponent beta >= 2 the attraction exponent above which
the unit simplex minimizes the interaction energy is bracketed by three
computable curves, listed in increasing order:

    underline_alpha(n, beta)  explicit lower bound, from matching levels of
                              the unimodal probe gap f(n, .);
    alpha_plus(n, beta)       sharper lower bound, located numerically as
                              the exponent where the simplex stops violating
                              the stationarity (Euler-Lagrange) condition of
                              its own convolved potential;
    alpha_star(n, beta)       upper bound, the largest solution of
                              e^(a/bs)/a = e^(b/bs)/b, dimension-free for
                              n >= 2.

All three curves equal beta once beta passes each curve's crossing with the
diagonal (peak_beta resp. beta_star). At beta = 2 the lower and upper bounds
squeeze to 4 for n >= 2 and to 3 for n = 1.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from ._parallel import parallel_map
from .errors import ConvergenceError, DomainError, InvariantViolation
from .measures import unit_simplex
from .potentials import (Kernel, PowerLaw, eval_radial, eval_radial_derivative,
                         zero_radius)

ROOT_TOL = 1e-9        # default width for scalar root brackets
DEFAULT_ALPHA_TOL = 1e-3
DEFAULT_EL_TOL = 1e-7  # potential-value tolerance for stationarity checks
DEFAULT_STARTS = 64

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def four_star(n: int) -> int:
    """Corner attraction exponent: 3 in one dimension, 4 otherwise."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return 3 if n == 1 else 4


def beta_star(n: int) -> float:
    """Where the upper-bound curve meets the diagonal: (4*-2)/log(4*/2)."""
    if n == 1:
        return 1.0 / math.log(1.5)
    return 2.0 / math.log(2.0)


def probe_gap(n: int, t):
    """Scaled potential gap between a simplex vertex and its mirror probe.

    For the pure power kernel r^t/t the stationarity test point (-x_0 for
    n >= 2, the edge midpoint for n = 1) and a vertex differ in convolved
    potential by -f/(n+1) where

        f(1, t) = (2^-1 - 2^-t)/t
        f(n, t) = (n - (2n/(n+1))^(t/2) - n((n-1)/(n+1))^(t/2))/t,  n >= 2.

    The simplex satisfies stationarity for the (alpha, beta) kernel exactly
    when f(n, alpha) <= f(n, beta).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    tt = np.asarray(t, dtype=float)
    if np.any(tt <= 0):
        raise DomainError("t must be positive")
    if n == 1:
        out = (0.5 - np.power(2.0, -tt)) / tt
    else:
        far = 2.0 * n / (n + 1.0)
        near = (n - 1.0) / (n + 1.0)
        out = (n - np.power(far, tt / 2.0) - n * np.power(near, tt / 2.0)) / tt
    return out if isinstance(t, np.ndarray) else float(out)


def probe_gap_limit(n: int, t):
    """Large-dimension limit of the probe gap: 1 - e^(t/beta_star)/t.

    The additive normalization matches the finite-n curves at their zeros;
    only level sets f(a) = f(b) are ever solved, so it does not affect any
    threshold.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt <= 0):
        raise DomainError("t must be positive")
    out = 1.0 - np.exp(tt / beta_star(n)) / tt
    return out if isinstance(t, np.ndarray) else float(out)


def argmax_unimodal(f: Callable[[float], float], lo: float, hi: float,
                    tol: float) -> float:
    """Golden-section maximizer of a unimodal f on [lo, hi]."""
    if not hi > lo:
        raise DomainError("need hi > lo")
    if not tol > 0:
        raise DomainError("tol must be positive")
    a, b = float(lo), float(hi)
    c, d = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    if f(lo) > fx or f(hi) > fx:
        raise DomainError("bracket error: maximum lies at an endpoint")
    return x


@lru_cache(maxsize=None)
def peak_beta(n: int) -> float:
    """Unique maximizer of the probe gap; the explicit bound crosses the
    diagonal exactly there."""
    return argmax_unimodal(lambda t: probe_gap(n, t), 2.0, float(four_star(n)), 1e-10)


def underline_alpha(n: int, beta: float, tol: float = ROOT_TOL) -> float:
    """Explicit threshold lower bound: largest alpha >= 2 with matching
    probe-gap level f(n, alpha) = f(n, beta); equals beta once beta passes
    peak_beta(n)."""
    _check_beta(beta)
    if not tol > 0:
        raise DomainError("tol must be positive")
    pk = peak_beta(n)
    if beta >= pk:
        return float(beta)
    target = probe_gap(n, beta)
    if abs(target - probe_gap(n, pk)) < 1e-14:
        # root collapses at the fold
        return pk
    hi = float(four_star(n))
    while probe_gap(n, hi) >= target:
        hi *= 2.0
    lo = pk
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if probe_gap(n, mid) >= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alpha_star(n: int, beta: float, tol: float = ROOT_TOL) -> float:
    """Threshold upper bound: largest solution of e^(a/bs)/a = e^(b/bs)/b
    with bs = beta_star(n); equals beta once beta >= beta_star(n)."""
    _check_beta(beta)
    if not tol > 0:
        raise DomainError("tol must be positive")
    bs = beta_star(n)
    if beta >= bs:
        return float(beta)
    target = math.exp(beta / bs) / beta

    def g(a):
        return math.exp(a / bs) / a - target

    hi = float(four_star(n))
    while g(hi) < 0.0:
        hi *= 2.0
    lo = bs
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_beta(beta):
    if not beta >= 2:
        raise DomainError(f"beta must be >= 2, got {beta}")


# ---------------------------------------------------------------------------
# Stationarity (Euler-Lagrange) machinery for the unit simplex.

def _vertices(n: int) -> np.ndarray:
    return unit_simplex(n, 1.0).points


def _convolved(V: np.ndarray, kernel: Kernel, X: np.ndarray):
    """Value and gradient of (W * nu)(x) for nu uniform on vertex rows V."""
    diff = X[:, None, :] - V[None, :, :]
    d = np.sqrt(np.einsum("sij,sij->si", diff, diff))
    val = eval_radial(kernel, d).mean(axis=1)
    live = d > 0
    dsafe = np.where(live, d, 1.0)
    coef = np.where(live, eval_radial_derivative(kernel, dsafe) / dsafe, 0.0)
    grad = np.einsum("si,sij->sj", coef, diff) / V.shape[0]
    return val, grad


def el_potential(n: int, kernel: Kernel, x) -> float:
    """(W * nu)(x) for nu the uniform unit-simplex measure in R^n."""
    X = np.atleast_2d(np.asarray(x, dtype=float))
    if X.shape != (1, n):
        raise DomainError(f"x must be a single {n}-vector")
    val, _ = _convolved(_vertices(n), kernel, X)
    return float(val[0])


def _start_points(n: int, R: float, starts: int, seed: int) -> np.ndarray:
    """Deterministic low-discrepancy points in the centered radius-R ball."""
    u = qmc.Halton(d=n + 1, seed=seed, scramble=True).random(starts)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    dirs = ndtri(u[:, :n])
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0] = 1.0
    radii = R * u[:, n] ** (1.0 / n)
    return dirs / norms[:, None] * radii[:, None]


def el_margin(n: int, alpha: float, beta: float, starts: int = DEFAULT_STARTS,
              seed: int = 0, grad_tol: float = 1e-8,
              max_steps: int = 1500) -> float:
    """min over the search ball of (W*nu)(x) minus the vertex value.

    Always <= 0 up to numerics; values below -tolerance certify that the
    simplex violates the stationarity condition for the (alpha, beta)
    kernel. The search combines `starts` seeded low-discrepancy descent
    starts with fixed probes (origin, reflected vertices, edge midpoints,
    the vertices themselves) inside the centered ball of radius
    max(zero_radius, e^(1/beta)) + 0.5.
    """
    if not (alpha > beta >= 2):
        raise DomainError(f"need alpha > beta >= 2, got ({alpha}, {beta})")
    kernel = PowerLaw(alpha, beta)
    V = _vertices(n)
    R = max(zero_radius(alpha, beta), math.exp(1.0 / beta)) + 0.5
    probes = [np.zeros((1, n)), -V, V]
    if n >= 1 and V.shape[0] >= 2:
        iu, ju = np.triu_indices(V.shape[0], k=1)
        probes.append(0.5 * (V[iu] + V[ju]))
    X0 = np.vstack([_start_points(n, R, starts, seed)] + probes)
    X, fvals, converged = _descend_ball(V, kernel, X0, R, grad_tol, max_steps)
    if not converged.any():
        raise ConvergenceError(
            f"no stationarity search start converged at (alpha={alpha}, "
            f"beta={beta}, n={n}): min |grad| stayed above {grad_tol}")
    vertex_val, _ = _convolved(V, kernel, V[:1])
    return float(fvals.min() - vertex_val[0])


def _descend_ball(V, kernel, X0, R, grad_tol, max_steps):
    """Batched Armijo gradient descent of the convolved potential, with
    iterates clipped into the radius-R ball."""
    X = X0.copy()
    f, g = _convolved(V, kernel, X)
    S = X.shape[0]
    h = np.ones(S)
    stalled = np.zeros(S, dtype=bool)
    for _ in range(max_steps):
        gn2 = np.einsum("ij,ij->i", g, g)
        active = (np.sqrt(gn2) > grad_tol) & ~stalled
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        trial = X[idx] - h[idx, None] * g[idx]
        norms = np.linalg.norm(trial, axis=1)
        clipped = norms > R
        if clipped.any():
            trial[clipped] *= (R / norms[clipped])[:, None]
        ft, gt = _convolved(V, kernel, trial)
        ok = ft <= f[idx] - 1e-4 * h[idx] * gn2[idx]
        ok |= clipped & (ft < f[idx])
        acc = idx[ok]
        X[acc] = trial[ok]
        f[acc] = ft[ok]
        g[acc] = gt[ok]
        h[acc] = np.minimum(h[acc] * 2.0, 1e6)
        rej = idx[~ok]
        h[rej] *= 0.5
        stalled[rej] |= h[rej] < 1e-18
    gn = np.linalg.norm(g, axis=1)
    return X, f, (gn <= grad_tol) | stalled


class AlphaPlus(NamedTuple):
    value: float
    lo: float
    hi: float


def alpha_plus(n: int, beta: float, tol: float = DEFAULT_ALPHA_TOL,
               el_tol: float = DEFAULT_EL_TOL, starts: int = DEFAULT_STARTS,
               seed: int = 0) -> AlphaPlus:
    """Bracket the stationarity-based lower bound by bisecting el_margin.

    The bracket starts at [underline_alpha, alpha_star] (widened by the root
    tolerance so the true value stays inside) and bisects the monotone
    predicate margin(alpha) >= -el_tol down to width tol. A bracket, not a
    point, because el_margin is itself tolerance-limited.
    """
    _check_beta(beta)
    u = underline_alpha(n, beta, ROOT_TOL)
    s = alpha_star(n, beta, ROOT_TOL)
    return _alpha_plus_bracket(n, beta, u, s, tol, el_tol, starts, seed)


def _alpha_plus_bracket(n, beta, u, s, tol, el_tol, starts, seed) -> AlphaPlus:
    lo = max(beta, u - ROOT_TOL)
    hi = max(s + ROOT_TOL, lo)
    if hi - lo <= tol:
        return AlphaPlus(0.5 * (lo + hi), lo, hi)

    def holds(a):
        return el_margin(n, a, beta, starts=starts, seed=seed) >= -el_tol

    lo_probe = max(lo, beta + min(tol, 1e-9))
    if holds(lo_probe):
        return AlphaPlus(lo_probe, lo_probe, min(lo_probe + tol, hi))
    if not holds(hi):
        raise InvariantViolation(
            f"stationarity fails above the upper bound at beta={beta}, n={n}")
    lo = lo_probe
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return AlphaPlus(0.5 * (lo + hi), lo, hi)


@dataclass(frozen=True)
class ThresholdReport:
    n: int
    beta: float
    underline_alpha: float
    alpha_plus_lo: float
    alpha_plus_hi: float
    alpha_star: float

    @property
    def alpha_plus(self) -> float:
        return 0.5 * (self.alpha_plus_lo + self.alpha_plus_hi)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "beta": self.beta,
            "underline_alpha": self.underline_alpha,
            "alpha_plus_lo": self.alpha_plus_lo,
            "alpha_plus_hi": self.alpha_plus_hi,
            "alpha_star": self.alpha_star,
        }


def phase_sweep(n: int, beta_grid, tol: float = ROOT_TOL,
                alpha_tol: float = DEFAULT_ALPHA_TOL,
                el_tol: float = DEFAULT_EL_TOL, starts: int = DEFAULT_STARTS,
                seed: int = 0):
    """One ThresholdReport per beta, with the bound ordering enforced."""
    betas = [float(b) for b in beta_grid]
    for b in betas:
        _check_beta(b)

    def solve(b):
        u = underline_alpha(n, b, tol)
        s = alpha_star(n, b, tol)
        ap = _alpha_plus_bracket(n, b, u, s, alpha_tol, el_tol, starts, seed)
        return ThresholdReport(n, b, u, ap.lo, ap.hi, s)

    reports = parallel_map(solve, betas)
    for rep in reports:
        if not (rep.underline_alpha <= rep.alpha_plus_hi + 1e-12
                and rep.alpha_plus_lo <= rep.alpha_star + 1e-6):
            raise InvariantViolation(
                f"threshold ordering violated at beta={rep.beta}: {rep}")
    return reports
