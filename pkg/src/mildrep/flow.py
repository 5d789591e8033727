"""Particle gradient flow: minimize the interaction energy over equal-weight
particle positions.

Explicit Euler steps with Armijo backtracking (only stationary points
matter, so no ODE integrator), restarted from seeded random initializations
uniform in a centered ball. The best restart is kept and classified.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from ._parallel import parallel_map
from .errors import ConvergenceError, DomainError
from .measures import DiscreteMeasure, Label, _pairwise_distances, center, classify
from .potentials import (Kernel, PowerLaw, default_support_radius, eval_radial,
                         eval_radial_derivative)
from .energy import simplex_energy

STEP_UNDERFLOW = 1e-30
DEFAULT_MAX_STEPS = 5000


@dataclass(frozen=True)
class FlowConfig:
    n: int
    particles: int
    max_steps: int = DEFAULT_MAX_STEPS
    step_init: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    grad_tol: float = 1e-10
    seed: int = 0
    restarts: int = 20
    init_radius: Optional[float] = None  # defaults to the kernel support radius
    class_tol: float = 1e-3

    def __post_init__(self):
        if self.particles < self.n + 1:
            raise DomainError("need at least n+1 particles")
        if not self.grad_tol > 0:
            raise DomainError("grad_tol must be positive")
        if not (0 < self.shrink < 1):
            raise DomainError("shrink factor must lie in (0, 1)")


@dataclass
class FlowResult:
    final: DiscreteMeasure
    energy: float
    energy_trace: List[float] = field(repr=False)
    steps: int = 0
    classification: Label = Label("Other")
    converged: bool = False
    grad_max: float = math.nan
    message: str = ""

    def to_dict(self) -> dict:
        d = self.final.to_dict()
        d.update({
            "energy": self.energy,
            "energy_trace": list(self.energy_trace),
            "steps": self.steps,
            "classification": {
                "kind": self.classification.kind,
                "radius": self.classification.radius,
            },
            "converged": self.converged,
            "grad_max": self.grad_max,
            "message": self.message,
        })
        return d


def _energy_and_gradient(X, w, kernel):
    d = _pairwise_distances(X)
    vals = eval_radial(kernel, d)
    E = float(0.5 * w @ vals @ w)
    live = d > 0
    dsafe = np.where(live, d, 1.0)
    coef = np.where(live, eval_radial_derivative(kernel, dsafe) / dsafe, 0.0)
    coef *= np.outer(w, w)
    g = coef.sum(axis=1)[:, None] * X - coef @ X
    return E, g


def _energy_only(X, w, kernel):
    vals = eval_radial(kernel, _pairwise_distances(X))
    return float(0.5 * w @ vals @ w)


def descend(config: FlowConfig, kernel: Kernel, init: DiscreteMeasure) -> FlowResult:
    """Backtracking gradient descent from `init` until the max particle
    gradient norm drops below grad_tol (or max_steps / step underflow)."""
    if init.dim != config.n:
        raise DomainError(f"init dimension {init.dim} != config n {config.n}")
    X = np.array(init.points, dtype=float)
    w = np.array(init.weights, dtype=float)
    E, g = _energy_and_gradient(X, w, kernel)
    trace = [E]
    h = config.step_init
    steps = 0
    converged = False
    message = ""
    stagnant = 0
    gmax = float(np.linalg.norm(g, axis=1).max())
    for _ in range(config.max_steps):
        if gmax <= config.grad_tol:
            converged = True
            break
        gn2 = float(np.einsum("ij,ij->", g, g))
        while True:
            E_new = _energy_only(X - h * g, w, kernel)
            if E_new <= E - config.armijo * h * gn2:
                break
            h *= config.shrink
            if h < STEP_UNDERFLOW:
                break
        if h < STEP_UNDERFLOW:
            message = (f"line search underflow at step {steps}: "
                       f"grad_max={gmax:.3e} > grad_tol={config.grad_tol:.1e}")
            break
        # accepted decreases at the floating-point floor mean no further
        # progress is representable
        stagnant = stagnant + 1 if E - E_new <= 1e-16 * max(1.0, abs(E)) else 0
        X = X - h * g
        E, g = _energy_and_gradient(X, w, kernel)
        gmax = float(np.linalg.norm(g, axis=1).max())
        trace.append(E)
        steps += 1
        h = min(h * 2.0, 1e12)
        if stagnant >= 25:
            message = (f"energy stagnated at step {steps}: "
                       f"grad_max={gmax:.3e} > grad_tol={config.grad_tol:.1e}")
            break
    else:
        message = f"max_steps={config.max_steps} reached with grad_max={gmax:.3e}"
    if gmax <= config.grad_tol:
        converged = True
    final = center(DiscreteMeasure(X, w))
    return FlowResult(
        final=final,
        energy=E,
        energy_trace=trace,
        steps=steps,
        classification=classify(final, config.class_tol),
        converged=converged,
        grad_max=gmax,
        message=message,
    )


def _ball_uniform(rng, N, n, radius):
    dirs = rng.standard_normal((N, n))
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0] = 1.0
    radii = radius * rng.random(N) ** (1.0 / n)
    return dirs / norms[:, None] * radii[:, None]


def multistart(config: FlowConfig, kernel: Kernel) -> FlowResult:
    """Best of `restarts` seeded descents from uniform-in-ball initializations.

    Deterministic given the config seed: restart RNGs are spawned from one
    seed sequence and ties are broken by restart index.
    """
    radius = config.init_radius
    if radius is None:
        radius = default_support_radius(kernel)
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    w = np.full(config.particles, 1.0 / config.particles)

    def run(k):
        rng = np.random.default_rng(seeds[k])
        init = DiscreteMeasure(_ball_uniform(rng, config.particles, config.n, radius), w)
        try:
            res = descend(config, kernel, init)
        except (FloatingPointError, np.linalg.LinAlgError) as exc:
            return None, f"restart {k}: {exc}"
        if not math.isfinite(res.energy):
            return None, f"restart {k}: non-finite energy"
        return res, ""

    outcomes = parallel_map(run, range(config.restarts))
    best = None
    failures = []
    for k, (res, err) in enumerate(outcomes):
        if res is None:
            failures.append(err)
        elif best is None or res.energy < best[0].energy:
            best = (res, k)
    if best is None:
        raise ConvergenceError("all restarts failed: " + "; ".join(failures))
    return best[0]


class ProbeOutcome(NamedTuple):
    """kind is 'SimplexOptimal' or 'SimplexBeaten'; gap = simplex energy
    minus best flow energy (positive when the simplex was beaten)."""

    kind: str
    gap: float


def simplex_optimality_probe(n: int, alpha: float, beta: float,
                             config: FlowConfig,
                             kernel: Optional[Kernel] = None) -> ProbeOutcome:
    """Empirically test whether the unit simplex is the energy minimizer
    by comparing the best multistart energy with the closed form."""
    if kernel is None:
        if not (alpha > beta >= 2):
            raise DomainError(f"need alpha > beta >= 2, got ({alpha}, {beta})")
        kernel = PowerLaw(alpha, beta)
    if config.n != n:
        raise DomainError("config dimension mismatch")
    ref = simplex_energy(n, 1.0, kernel)
    best = multistart(config, kernel)
    gap = ref - best.energy
    if best.energy < ref - 1e-6 * abs(ref):
        return ProbeOutcome("SimplexBeaten", gap)
    return ProbeOutcome("SimplexOptimal", gap)
