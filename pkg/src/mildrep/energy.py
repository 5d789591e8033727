"""Interaction energy, its gradient, and the (4,2) corner-case identities.

The energy of a discrete measure under a radial kernel w is

    E(mu) = 1/2 sum_{i,j} w_i w_j w(|x_i - x_j|)

over ordered pairs, the i = j terms vanishing since w(0) = 0. Everything
here is exact O(N^2) pairwise arithmetic; no tree acceleration.
"""

from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from .errors import DomainError
from .measures import DiscreteMeasure, _pairwise_distances, center, second_moment
from .potentials import (Kernel, LogLimit, PowerLaw, PureAttractive, Rescaled,
                         _rpow, eval_radial, eval_radial_derivative)

CENTERED_TOL = 1e-9


@dataclass(frozen=True)
class EnergyBreakdown:
    """total = attractive_part - repulsive_part."""

    total: float
    attractive_part: float
    repulsive_part: float


def energy(mu: DiscreteMeasure, kernel: Kernel) -> float:
    """1/2 sum_{i,j} w_i w_j w(|x_i - x_j|); rigid-motion invariant."""
    d = _pairwise_distances(mu.points)
    vals = eval_radial(kernel, d)
    return float(0.5 * mu.weights @ vals @ mu.weights)


def energy_breakdown(mu: DiscreteMeasure, kernel: Kernel) -> EnergyBreakdown:
    """Split the energy into its attractive and repulsive contributions."""
    d = _pairwise_distances(mu.points)
    w = mu.weights

    def quad(vals):
        return float(0.5 * w @ vals @ w)

    if isinstance(kernel, PowerLaw):
        a, b = kernel.alpha, kernel.beta
        att, rep = quad(_rpow(d, a) / a), quad(_rpow(d, b) / b)
    elif isinstance(kernel, Rescaled):
        a, b = max(kernel.alpha, kernel.beta), min(kernel.alpha, kernel.beta)
        c = a * b / (a - b)
        att, rep = c * quad(_rpow(d, a) / a), c * quad(_rpow(d, b) / b)
    elif isinstance(kernel, LogLimit):
        a = kernel.alpha
        zero = d == 0
        with np.errstate(divide="ignore"):
            logd = np.log(np.where(zero, 1.0, d))
        att = quad(np.where(zero, 0.0, a * _rpow(d, a) * logd))
        rep = quad(_rpow(d, a))
    elif isinstance(kernel, PureAttractive):
        att, rep = quad(_rpow(d, kernel.alpha) / kernel.alpha), 0.0
    else:
        raise DomainError(f"unknown kernel {kernel!r}")
    return EnergyBreakdown(att - rep, att, rep)


def simplex_energy(n: int, d: float, kernel: Kernel) -> float:
    """Energy of the uniform measure on a regular n-simplex of diameter d.

    All n(n+1)/2 unordered pairs sit at distance d with weights 1/(n+1),
    giving (n / (2(n+1))) w(d).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not d > 0:
        raise DomainError("diameter must be positive")
    return n / (2.0 * (n + 1)) * float(eval_radial(kernel, d))


def gradient(mu: DiscreteMeasure, kernel: Kernel) -> np.ndarray:
    """Per-point position gradient of `energy` at fixed weights.

    grad_i = sum_{j != i} w_i w_j w'(|x_i - x_j|) (x_i - x_j)/|x_i - x_j|;
    coincident pairs contribute zero force (w'(0+) = 0 in the covered range).
    """
    pts, w = mu.points, mu.weights
    d = _pairwise_distances(pts)
    live = d > 0
    dsafe = np.where(live, d, 1.0)
    coef = np.where(live, eval_radial_derivative(kernel, dsafe) / dsafe, 0.0)
    coef *= np.outer(w, w)
    return coef.sum(axis=1)[:, None] * pts - coef @ pts


def quartic_quadratic_form(mu0: DiscreteMeasure, mu1: DiscreteMeasure) -> float:
    """The signed double sum of |x-y|^4 against (mu0-mu1) x (mu0-mu1).

    For centered inputs the moments identity gives

        integral |x-y|^4 d(mu0-mu1) d(mu0-mu1) = 4 Tr(D^2) + 2 (Tr D)^2,

    D = I(mu0) - I(mu1): a nonnegative quadratic form vanishing exactly when
    the second moments agree.
    """
    for name, mu in (("mu0", mu0), ("mu1", mu1)):
        drift = np.linalg.norm(mu.barycenter())
        if drift > CENTERED_TOL:
            raise DomainError(f"{name} is not centered (barycenter norm {drift:.3e})")
    if mu0.dim != mu1.dim:
        raise DomainError("dimension mismatch")
    D = second_moment(mu0) - second_moment(mu1)
    return float(4.0 * np.trace(D @ D) + 2.0 * np.trace(D) ** 2)


class CornerCaseConstants(NamedTuple):
    lam: float          # shared second-moment eigenvalue 1/(2n+2)
    radius: float       # support sphere radius sqrt(n/(2n+2))
    min_energy: float   # -n/(8(n+1))


def corner_case_constants(n: int) -> CornerCaseConstants:
    """Minimizer constants of the quartic-attraction/quadratic-repulsion kernel.

    Minimizing 2E = n^2 lam^2 + n lam^2 - n lam over lam gives
    lam = 1/(2n+2), support radius sqrt(n lam) and energy -n/(8(n+1)).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    lam = 1.0 / (2 * n + 2)
    return CornerCaseConstants(lam, float(np.sqrt(n * lam)), -n / (8.0 * (n + 1)))


def verify_min42(mu: DiscreteMeasure, tol: float) -> bool:
    """Check membership in the minimizer class of the (4, 2) kernel.

    After centering, every support radius must lie within tol of
    sqrt(n/(2n+2)) and the second moment within tol (entrywise) of
    Id/(2n+2).
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    n = mu.dim
    cm = center(mu)
    _, radius, _ = corner_case_constants(n)
    radii = np.linalg.norm(cm.points, axis=1)
    if np.any(np.abs(radii - radius) > tol):
        return False
    gap = np.max(np.abs(second_moment(cm) - np.eye(n) / (2 * n + 2)))
    return bool(gap <= tol)
