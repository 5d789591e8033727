"""Discrete probability measures on R^n and their geometry.

A `DiscreteMeasure` is a weighted point configuration with weights summing
to one. Constructors cover the configurations the energy landscape cares
about: regular simplices, cross-polytopes and sphere quadratures. The rest
of the module interrogates measures: barycenter, second-moment tensor,
pairwise-distance pushforward and a shape classifier.

JSON schema used by the CLI: {"dim": n, "points": [[...], ...],
"weights": [...]}.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError

WEIGHT_TOL = 1e-12


@dataclass(eq=False)
class DiscreteMeasure:
    points: np.ndarray   # (N, dim)
    weights: np.ndarray  # (N,)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).ravel()
        if pts.size == 0:
            raise DomainError("measure needs at least one point")
        if pts.shape[0] != w.shape[0]:
            raise DomainError(f"{pts.shape[0]} points but {w.shape[0]} weights")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise DomainError(f"weights sum to {w.sum()!r}, not 1")
        pts.flags.writeable = False
        w.flags.writeable = False
        self.points = pts
        self.weights = w

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def barycenter(self) -> np.ndarray:
        return self.weights @ self.points

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteMeasure":
        mu = cls(np.asarray(data["points"], float), np.asarray(data["weights"], float))
        if mu.dim != data["dim"]:
            raise DomainError(f"dim field {data['dim']} != point dimension {mu.dim}")
        return mu


@dataclass(eq=False)
class RadialMeasure:
    """Probability measure on [0, inf): atom radii and masses."""

    radii: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float).ravel()
        m = np.asarray(self.masses, dtype=float).ravel()
        if np.any(r < 0) or np.any(m < 0):
            raise DomainError("radii and masses must be nonnegative")
        if abs(m.sum() - 1.0) > WEIGHT_TOL:
            raise DomainError(f"masses sum to {m.sum()!r}, not 1")
        self.radii, self.masses = r, m


def unit_simplex(n: int, d: float = 1.0) -> DiscreteMeasure:
    """Uniform measure on the n+1 vertices of a centered regular simplex.

    Vertices are the standard basis of R^(n+1) minus the centroid, scaled to
    diameter d and expressed in the orthonormal basis of the hyperplane
    orthogonal to (1, ..., 1) obtained by Gram-Schmidt on e_1-e_2, e_2-e_3,
    ... so the coordinates are reproducible across runs.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not d > 0:
        raise DomainError("diameter must be positive")
    m = n + 1
    diffs = np.zeros((n, m))
    for k in range(n):
        diffs[k, k] = 1.0
        diffs[k, k + 1] = -1.0
    basis = np.zeros((n, m))
    for k in range(n):
        v = diffs[k] - basis[:k] @ diffs[k] @ basis[:k]
        basis[k] = v / np.linalg.norm(v)
    centered = np.eye(m) - np.full((m, m), 1.0 / m)
    coords = centered @ basis.T * (d / np.sqrt(2.0))
    return DiscreteMeasure(coords, np.full(m, 1.0 / m))


def cross_polytope(n: int, r: float) -> DiscreteMeasure:
    """Equal masses 1/(2n) at the 2n points +-r e_i."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not r > 0:
        raise DomainError("radius must be positive")
    pts = np.vstack([r * np.eye(n), -r * np.eye(n)])
    return DiscreteMeasure(pts, np.full(2 * n, 0.5 / n))


def sphere_quadrature(n: int, r: float, K: int) -> DiscreteMeasure:
    """K-point quadrature on the centered radius-r sphere in R^n, n <= 3.

    The second moment matches the uniform sphere value (r^2/n) Id to near
    machine precision: exactly for the n=1 pair {-r, +r} and the n=2
    equal-angle points, and for n=3 by a least-norm weight correction on a
    Fibonacci-spiral point set.
    """
    if n not in (1, 2, 3):
        raise DomainError(f"sphere quadrature supports n in {{1,2,3}}, got {n}")
    if not r > 0:
        raise DomainError("radius must be positive")
    if K < 2 * n + 2:
        raise DomainError(f"need K >= {2*n + 2} for n={n}")
    if n == 1:
        return DiscreteMeasure(np.array([[-r], [r]]), np.array([0.5, 0.5]))
    if n == 2:
        theta = 2.0 * np.pi * np.arange(K) / K
        pts = r * np.column_stack([np.cos(theta), np.sin(theta)])
        return DiscreteMeasure(pts, np.full(K, 1.0 / K))
    # Fibonacci spiral, then adjust weights so mass, center and all second
    # moments are exact instead of O(1/K) accurate.
    k = np.arange(K)
    z = 1.0 - (2.0 * k + 1.0) / K
    phi = np.pi * (1.0 + np.sqrt(5.0)) * k
    s = np.sqrt(1.0 - z * z)
    pts = r * np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    w = _moment_matched_weights(pts, r)
    return DiscreteMeasure(pts, w)


def _moment_matched_weights(pts: np.ndarray, r: float) -> np.ndarray:
    """Least-norm perturbation of uniform weights enforcing exact moments."""
    K, n = pts.shape
    rows = [np.ones(K)]
    target = [1.0]
    for i in range(n):
        rows.append(pts[:, i])
        target.append(0.0)
    for i in range(n):
        for j in range(i, n):
            rows.append(pts[:, i] * pts[:, j])
            target.append(r * r / n if i == j else 0.0)
    A = np.vstack(rows)
    b = np.asarray(target)
    u = np.full(K, 1.0 / K)
    corr, *_ = np.linalg.lstsq(A, b - A @ u, rcond=None)
    w = u + corr
    if np.any(w < 0):
        raise DomainError("K too small for a nonnegative moment-matched quadrature")
    return w / w.sum()


def second_moment(mu: DiscreteMeasure) -> np.ndarray:
    """Second moment tensor sum_i w_i x_i (x_i)^T about the origin."""
    return (mu.weights[:, None] * mu.points).T @ mu.points


def center(mu: DiscreteMeasure) -> DiscreteMeasure:
    """Translate so the barycenter sits at the origin."""
    return DiscreteMeasure(mu.points - mu.barycenter(), mu.weights)


def convex_combination(mu0: DiscreteMeasure, mu1: DiscreteMeasure,
                       t: float) -> DiscreteMeasure:
    """The measure t*mu0 + (1-t)*mu1 on the union of supports."""
    if mu0.dim != mu1.dim:
        raise DomainError("dimension mismatch")
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    pts = np.vstack([mu0.points, mu1.points])
    w = np.concatenate([t * mu0.weights, (1.0 - t) * mu1.weights])
    return DiscreteMeasure(pts, w)


def distance_pushforward(mu: DiscreteMeasure, merge_tol: float = 1e-9) -> RadialMeasure:
    """Pushforward of mu (x) mu under (x, y) -> |x - y|.

    Atom at every pairwise distance (including i = j at r = 0) with mass
    w_i w_j; nearby atoms are merged when consecutive gaps are <= merge_tol.
    """
    d = _pairwise_distances(mu.points).ravel()
    m = np.outer(mu.weights, mu.weights).ravel()
    order = np.argsort(d, kind="stable")
    d, m = d[order], m[order]
    breaks = np.nonzero(np.diff(d) > merge_tol)[0] + 1
    groups = np.split(np.arange(d.size), breaks)
    radii = np.array([np.average(d[g], weights=m[g]) if m[g].sum() > 0 else d[g][0]
                      for g in groups])
    masses = np.array([m[g].sum() for g in groups])
    return RadialMeasure(radii, masses)


def _pairwise_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


class Label(NamedTuple):
    """Configuration class: kind is 'UnitSimplex', 'SphereMoment' or 'Other'."""

    kind: str
    radius: Optional[float] = None

    def __str__(self):
        if self.kind == "SphereMoment":
            return f"SphereMoment({self.radius:.6g})"
        return self.kind


def _single_linkage_clusters(pts: np.ndarray, tol: float):
    """Union-find single linkage: points within tol are chained together."""
    N = pts.shape[0]
    parent = list(range(N))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    d = _pairwise_distances(pts)
    for i in range(N):
        for j in range(i + 1, N):
            if d[i, j] <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(N):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def classify(mu: DiscreteMeasure, tol: float) -> Label:
    """Detect unit-simplex and sphere-with-isotropic-moment configurations.

    UnitSimplex: after single-linkage clustering at threshold tol there are
    n+1 clusters with unit inter-cluster distances (within tol) and masses
    within tol of 1/(n+1). SphereMoment(r): a non-simplex configuration
    (at least n+2 clusters) whose support radii all lie within tol of a
    common r after centering and whose second moment is within tol
    (entrywise) of (r^2/n) Id. UnitSimplex is checked first, Other is the
    fallback; in particular n+1 clusters at non-unit spacing are Other even
    when they sit on a common sphere.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    n = mu.dim
    clusters = _single_linkage_clusters(mu.points, tol)
    if len(clusters) == n + 1:
        centroids = np.array([
            np.average(mu.points[g], axis=0, weights=mu.weights[g])
            if mu.weights[g].sum() > 0 else mu.points[g].mean(axis=0)
            for g in clusters
        ])
        masses = np.array([mu.weights[g].sum() for g in clusters])
        dists = _pairwise_distances(centroids)
        off = dists[~np.eye(n + 1, dtype=bool)]
        if (np.all(np.abs(off - 1.0) <= tol)
                and np.all(np.abs(masses - 1.0 / (n + 1)) <= tol)):
            return Label("UnitSimplex")
    if len(clusters) >= n + 2:
        cm = center(mu)
        radii = np.linalg.norm(cm.points, axis=1)
        r = float(np.average(radii, weights=cm.weights))
        if np.all(np.abs(radii - r) <= tol) and r > tol:
            moment_gap = np.max(np.abs(second_moment(cm) - (r * r / n) * np.eye(n)))
            if moment_gap <= tol:
                return Label("SphereMoment", r)
    return Label("Other")
