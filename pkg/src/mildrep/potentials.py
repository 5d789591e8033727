"""Radial pair potentials of attractive-repulsive power-law type.

Four kernel families are supported, all functions of the pair distance r:

    PowerLaw(a, b):        w(r) = r^a/a - r^b/b            (a > b > 0)
    Rescaled(a, b):        w(r) = (b r^a - a r^b)/(a - b)   min value -1 at r=1
    LogLimit(a):           w(r) = r^a (a log r - 1)         limit b -> a of Rescaled
    PureAttractive(a):     w(r) = r^a/a

All evaluators accept scalars or numpy arrays of nonnegative radii and
evaluate r^p as exp(p log r) with an explicit r = 0 branch, so the support
point r = 0 never produces NaN.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError


def _check_exponents(alpha, beta):
    if not (alpha > beta > 0):
        raise DomainError(f"need alpha > beta > 0, got alpha={alpha}, beta={beta}")


@dataclass(frozen=True)
class PowerLaw:
    """w(r) = r^alpha/alpha - r^beta/beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_exponents(self.alpha, self.beta)


@dataclass(frozen=True)
class Rescaled:
    """w(r) = (beta r^alpha - alpha r^beta)/(alpha - beta), normalized to min -1.

    The profile is symmetric in (alpha, beta), so either ordering of the two
    distinct positive exponents is accepted.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == self.beta or min(self.alpha, self.beta) <= 0:
            raise DomainError(
                f"need distinct positive exponents, got ({self.alpha}, {self.beta})")


@dataclass(frozen=True)
class LogLimit:
    """w(r) = r^alpha (alpha log r - 1), the beta -> alpha limit of Rescaled."""

    alpha: float

    def __post_init__(self):
        if self.alpha == 0:
            raise DomainError("LogLimit requires alpha != 0")


@dataclass(frozen=True)
class PureAttractive:
    """w(r) = r^alpha/alpha."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("PureAttractive requires alpha > 0")


Kernel = Union[PowerLaw, Rescaled, LogLimit, PureAttractive]


def _rpow(r, p):
    """r**p for r >= 0 via exp(p log r), with 0**p = 0 for p > 0, 1 for p = 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    if p == 0:
        return np.ones_like(r)
    zero = r == 0
    if p < 0 and np.any(zero):
        raise DomainError(f"r^{p} is singular at r = 0")
    with np.errstate(divide="ignore"):
        out = np.exp(p * np.log(np.where(zero, 1.0, r)))
    return np.where(zero, 0.0, out)


def _as_given(x, arr):
    return arr if isinstance(x, np.ndarray) else float(arr)


def eval_radial(kernel: Kernel, r):
    """Radial profile w(r) of `kernel` at distance(s) r >= 0."""
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise DomainError("radius must be nonnegative")
    if isinstance(kernel, PowerLaw):
        a, b = kernel.alpha, kernel.beta
        out = _rpow(rr, a) / a - _rpow(rr, b) / b
    elif isinstance(kernel, Rescaled):
        a, b = kernel.alpha, kernel.beta
        out = (b * _rpow(rr, a) - a * _rpow(rr, b)) / (a - b)
    elif isinstance(kernel, LogLimit):
        a = kernel.alpha
        if a < 0 and np.any(rr == 0):
            raise DomainError("LogLimit with alpha < 0 diverges at r = 0")
        zero = rr == 0
        with np.errstate(divide="ignore"):
            logr = np.log(np.where(zero, 1.0, rr))
        out = np.where(zero, 0.0, _rpow(rr, a) * (a * logr - 1.0))
    elif isinstance(kernel, PureAttractive):
        out = _rpow(rr, kernel.alpha) / kernel.alpha
    else:
        raise DomainError(f"unknown kernel {kernel!r}")
    return _as_given(r, out)


def eval_radial_derivative(kernel: Kernel, r):
    """Derivative w'(r) of the radial profile.

    PowerLaw:        r^(a-1) - r^(b-1)
    Rescaled:        a b (r^(a-1) - r^(b-1)) / (a - b)
    LogLimit:        a^2 r^(a-1) log r
    PureAttractive:  r^(a-1)

    r = 0 is accepted only where the one-sided limit exists (all covered
    kernels with exponents >= 1; in particular the beta >= 2 CLI range).
    """
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise DomainError("radius must be nonnegative")
    if isinstance(kernel, PowerLaw):
        a, b = kernel.alpha, kernel.beta
        out = _rpow(rr, a - 1) - _rpow(rr, b - 1)
    elif isinstance(kernel, Rescaled):
        a, b = kernel.alpha, kernel.beta
        out = a * b * (_rpow(rr, a - 1) - _rpow(rr, b - 1)) / (a - b)
    elif isinstance(kernel, LogLimit):
        a = kernel.alpha
        if np.any(rr == 0) and a <= 1:
            raise DomainError("LogLimit derivative is singular at r = 0 for alpha <= 1")
        zero = rr == 0
        with np.errstate(divide="ignore"):
            logr = np.log(np.where(zero, 1.0, rr))
        out = np.where(zero, 0.0, a * a * _rpow(rr, a - 1) * logr)
    elif isinstance(kernel, PureAttractive):
        out = _rpow(rr, kernel.alpha - 1)
    else:
        raise DomainError(f"unknown kernel {kernel!r}")
    return _as_given(r, out)


def zero_radius(alpha: float, beta: float) -> float:
    """Positive zero of the two-exponent profile: (alpha/beta)^(1/(alpha-beta)).

    On the diagonal alpha = beta the limit value e^(1/beta) is returned.
    """
    if not (alpha >= beta > 0):
        raise DomainError(f"need alpha >= beta > 0, got ({alpha}, {beta})")
    if alpha == beta:
        return float(np.exp(1.0 / beta))
    return float((alpha / beta) ** (1.0 / (alpha - beta)))


def rescaled_beta_derivative(alpha: float, beta: float, r):
    """Closed form of alpha * d/dbeta of the rescaled profile.

        alpha^2 r^beta / (alpha-beta)^2 * (r^(alpha-beta) - 1 - log r^(alpha-beta))

    Nonnegative for every r > 0, vanishing exactly at r = 1.
    """
    if alpha == beta:
        raise DomainError("diagonal alpha = beta is not in the rescaled family")
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0):
        raise DomainError("radius must be positive")
    d = alpha - beta
    t = _rpow(rr, d)
    out = alpha * alpha * _rpow(rr, beta) / (d * d) * (t - 1.0 - np.log(t))
    return _as_given(r, out)


def default_support_radius(kernel: Kernel) -> float:
    """Radius of a centered ball guaranteed to contain minimizers' supports.

    e^(1/beta) for two-exponent kernels, e^(1/alpha) for the diagonal and
    purely attractive families (where the profile turns at r near 1).
    """
    if isinstance(kernel, (PowerLaw, Rescaled)):
        return float(np.exp(1.0 / min(kernel.alpha, kernel.beta)))
    return float(np.exp(1.0 / abs(kernel.alpha)))
