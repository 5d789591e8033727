import math

import numpy as np
import pytest

from conftest import random_measure
from mildrep import (DiscreteMeasure, DomainError, LogLimit, PowerLaw,
                     PureAttractive, Rescaled, center, convex_combination,
                     corner_case_constants, cross_polytope, energy,
                     energy_breakdown, eval_radial, gradient,
                     quartic_quadratic_form, second_moment, simplex_energy,
                     unit_simplex, verify_min42, zero_radius)


def brute_energy(mu, kernel):
    """Plain python double sum over ordered pairs with the 1/2 factor."""
    total = 0.0
    for i in range(mu.size):
        for j in range(mu.size):
            r = math.dist(mu.points[i], mu.points[j])
            total += 0.5 * mu.weights[i] * mu.weights[j] * eval_radial(kernel, r)
    return total


def brute_quartic_signed_sum(mu0, mu1):
    """Signed double integral of |x-y|^4 against (mu0-mu1) twice."""
    pts = np.vstack([mu0.points, mu1.points])
    signed = np.concatenate([mu0.weights, -mu1.weights])
    diff = pts[:, None, :] - pts[None, :, :]
    quartic = np.einsum("ijk,ijk->ij", diff, diff) ** 2
    return float(signed @ quartic @ signed)


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def centered_random_measure(rng, n, N):
    return center(random_measure(rng, n, N))


# --- energy -------------------------------------------------------------------

def test_simplex_energy_closed_form(rng):
    for n in (1, 2, 3, 5):
        b = rng.uniform(2.0, 4.0)
        a = b + rng.uniform(0.5, 3.0)
        kernel = PowerLaw(a, b)
        expected = n / (2.0 * (n + 1)) * (1.0 / a - 1.0 / b)
        nu = unit_simplex(n, 1.0)
        assert energy(nu, kernel) == pytest.approx(expected, abs=1e-14)
        assert brute_energy(nu, kernel) == pytest.approx(expected, abs=1e-13)


def test_two_point_corner_energy():
    assert energy(unit_simplex(1, 1.0), PowerLaw(4, 2)) == pytest.approx(
        -1.0 / 16, abs=1e-15)


def test_point_mass_energy_zero():
    mu = DiscreteMeasure(np.array([[0.3, -0.2]]), np.ones(1))
    assert energy(mu, PowerLaw(4, 2)) == 0.0


def test_energy_matches_brute_force(rng):
    for kernel in (PowerLaw(4, 2), Rescaled(3.5, 2.2), LogLimit(3.0),
                   PureAttractive(2.5)):
        mu = random_measure(rng, 2, 14)
        assert energy(mu, kernel) == pytest.approx(brute_energy(mu, kernel),
                                                   rel=1e-12, abs=1e-14)


def test_energy_rigid_motion_invariance(rng):
    kernel = PowerLaw(3.7, 2.3)
    for n in (1, 2, 3):
        mu = random_measure(rng, n, 12)
        Q = random_rotation(rng, n)
        shift = rng.standard_normal(n)
        moved = DiscreteMeasure(mu.points @ Q.T + shift, mu.weights)
        assert energy(moved, kernel) == pytest.approx(energy(mu, kernel),
                                                      abs=1e-12)


def test_energy_breakdown_consistency(rng):
    mu = random_measure(rng, 2, 10)
    for kernel in (PowerLaw(4, 2), Rescaled(3.5, 2.2), LogLimit(3.0),
                   PureAttractive(2.0)):
        bd = energy_breakdown(mu, kernel)
        assert bd.total == pytest.approx(bd.attractive_part - bd.repulsive_part,
                                         abs=1e-12)
        assert bd.total == pytest.approx(energy(mu, kernel), abs=1e-12)


# --- simplex_energy -------------------------------------------------------------

def test_simplex_energy_examples():
    for n in (1, 2, 3, 6):
        assert simplex_energy(n, 1.0, PowerLaw(4, 2)) == pytest.approx(
            -n / (8.0 * (n + 1)), abs=1e-15)
    assert simplex_energy(2, 1.0, Rescaled(3.3, 2.4)) == pytest.approx(
        -1.0 / 3, abs=1e-14)
    a, b = 3.4, 2.2
    z = zero_radius(a, b)
    assert simplex_energy(1, z, PowerLaw(a, b)) == pytest.approx(0.0, abs=1e-14)


def test_simplex_energy_agrees_with_energy(rng):
    for n in (1, 3):
        d = rng.uniform(0.3, 2.0)
        kernel = PowerLaw(4.5, 2.5)
        assert simplex_energy(n, d, kernel) == pytest.approx(
            energy(unit_simplex(n, d), kernel), abs=1e-14)


# --- quartic quadratic form -----------------------------------------------------

def test_quartic_form_zero_on_equal_measures(rng):
    mu = centered_random_measure(rng, 3, 8)
    assert quartic_quadratic_form(mu, mu) == 0.0


def test_quartic_form_zero_for_matched_moments():
    for n in (1, 2, 3, 5):
        nu = unit_simplex(n, 1.0)
        cp = cross_polytope(n, math.sqrt(n / (2.0 * n + 2)))
        assert quartic_quadratic_form(nu, cp) == pytest.approx(0.0, abs=1e-12)


def test_quartic_form_matches_signed_double_sum(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        mu0 = centered_random_measure(rng, n, int(rng.integers(2, 30)))
        mu1 = centered_random_measure(rng, n, int(rng.integers(2, 30)))
        got = quartic_quadratic_form(mu0, mu1)
        want = brute_quartic_signed_sum(mu0, mu1)
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)
        assert got >= -1e-12


def test_quartic_form_requires_centering(rng):
    mu = random_measure(rng, 2, 6)
    shifted = DiscreteMeasure(mu.points + 5.0, mu.weights)
    with pytest.raises(DomainError):
        quartic_quadratic_form(shifted, centered_random_measure(rng, 2, 6))


# --- gradient --------------------------------------------------------------------

def test_gradient_vanishes_on_simplex():
    for n in (1, 2, 4):
        g = gradient(unit_simplex(n, 1.0), PowerLaw(3.5, 2.0))
        assert np.max(np.abs(g)) <= 1e-12


def test_gradient_single_point():
    mu = DiscreteMeasure(np.array([[1.0, 2.0]]), np.ones(1))
    np.testing.assert_array_equal(gradient(mu, PowerLaw(4, 2)), 0.0)


def test_gradient_matches_finite_differences(rng):
    kernel = PowerLaw(3.5, 2.5)
    mu = random_measure(rng, 2, 20)
    g = gradient(mu, kernel)
    h = 1e-6
    for i in (0, 7, 19):
        for a in range(2):
            plus = np.array(mu.points)
            minus = np.array(mu.points)
            plus[i, a] += h
            minus[i, a] -= h
            fd = (energy(DiscreteMeasure(plus, mu.weights), kernel)
                  - energy(DiscreteMeasure(minus, mu.weights), kernel)) / (2 * h)
            assert abs(g[i, a] - fd) <= 1e-5


def test_gradient_total_force_is_zero(rng):
    # antisymmetric pairwise forces conserve the barycenter
    mu = random_measure(rng, 3, 15)
    g = gradient(mu, PowerLaw(4.2, 2.7))
    np.testing.assert_allclose(g.sum(axis=0), 0.0, atol=1e-14)


def test_gradient_coincident_points_zero_force():
    pts = np.array([[0.0, 0.0], [0.0, 0.0]])
    mu = DiscreteMeasure(pts, np.array([0.5, 0.5]))
    np.testing.assert_array_equal(gradient(mu, PowerLaw(4, 2)), 0.0)


# --- corner case ------------------------------------------------------------------

def test_corner_constants_examples():
    lam, radius, emin = corner_case_constants(1)
    assert (lam, radius, emin) == pytest.approx((0.25, 0.5, -1.0 / 16))
    assert corner_case_constants(3).radius == pytest.approx(math.sqrt(3.0 / 8))


def test_corner_energy_agreement():
    for n in range(1, 7):
        emin = corner_case_constants(n).min_energy
        assert energy(unit_simplex(n, 1.0), PowerLaw(4, 2)) == pytest.approx(
            emin, abs=1e-14)


def test_verify_min42():
    for n in (1, 2, 3, 5):
        r = corner_case_constants(n).radius
        assert verify_min42(unit_simplex(n, 1.0), 1e-9)
        assert verify_min42(cross_polytope(n, r), 1e-9)
        assert not verify_min42(unit_simplex(n, 0.9), 1e-3)


def test_corner_convex_combinations_stay_minimal(rng):
    kernel = PowerLaw(4, 2)
    for n in (2, 3):
        emin = corner_case_constants(n).min_energy
        r = corner_case_constants(n).radius
        mu0 = unit_simplex(n, 1.0)
        Q = random_rotation(rng, n)
        mu1 = DiscreteMeasure(cross_polytope(n, r).points @ Q.T,
                              cross_polytope(n, r).weights)
        assert verify_min42(mu0, 1e-9) and verify_min42(mu1, 1e-9)
        for t in (0.25, 0.5, 0.75):
            mix = convex_combination(mu0, mu1, t)
            assert energy(mix, kernel) == pytest.approx(emin, abs=1e-10)


# --- exponent monotonicity ----------------------------------------------------------

def test_energy_increases_with_either_exponent(rng):
    eps = 0.3
    for _ in range(25):
        b = rng.uniform(2.0, 3.0)
        a = b + rng.uniform(0.5, 2.0)
        mu = random_measure(rng, 2, 10, scale=0.4)
        base = energy(mu, Rescaled(a, b))
        assert base <= energy(mu, Rescaled(a + eps, b)) + 1e-12
        assert base <= energy(mu, Rescaled(a, b + eps)) + 1e-12


def test_energy_exponent_invariance_on_simplex_support(rng):
    # distances in {0,1} pin the rescaled energy independently of exponents
    nu = unit_simplex(3, 1.0)
    w = rng.random(4) + 0.1
    mu = DiscreteMeasure(nu.points, w / w.sum())
    vals = [energy(mu, Rescaled(a, b))
            for a, b in ((4.0, 2.0), (4.3, 2.0), (4.0, 2.3), (6.0, 3.5))]
    np.testing.assert_allclose(vals, vals[0], rtol=0, atol=1e-12)
