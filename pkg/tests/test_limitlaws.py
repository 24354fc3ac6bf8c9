"""Reference laws: frozen values, cross-law identities, calculus consistency."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from dixiecup.limitlaws import (
    EULER_GAMMA,
    chisq_log_cdf,
    er_expectation,
    exact_poissonized_marginal_cdf,
    gumbel_type_cdf,
    intensity_mass,
    log_gamma_cdf,
)
from dixiecup.pointprocess import h_inverse_transform


def harmonic(n):
    return sum(1.0 / k for k in range(1, n + 1))


def test_intensity_mass_values():
    assert intensity_mass(1, 0.0, math.inf) == pytest.approx(1.0, rel=1e-14)
    # quadrature oracle at r=3 on [0, ln 2]
    target, _ = quad(lambda x: math.exp(-x) / 2.0, 0.0, math.log(2))
    assert intensity_mass(3, 0.0, math.log(2)) == pytest.approx(target, rel=1e-10)
    assert intensity_mass(3, 0.0, math.log(2)) == pytest.approx(0.25, rel=1e-14)
    with pytest.raises(ValueError):
        intensity_mass(1, 1.0, 0.0)


def test_intensity_matches_pushforward_of_lebesgue():
    # the image of [a, b] under the inverse log map has Lebesgue length equal
    # to the intensity mass, for every r
    for r in (1, 2, 4):
        for a, b in ((-1.0, 0.5), (0.0, 3.0)):
            length = h_inverse_transform(a, r) - h_inverse_transform(b, r)
            assert intensity_mass(r, a, b) == pytest.approx(float(length), rel=1e-12)


def test_gumbel_type_values():
    assert gumbel_type_cdf(1, 0.0) == pytest.approx(0.36787944117144233, rel=1e-14)
    assert gumbel_type_cdf(3, 0.0) == pytest.approx(0.6065306597126334, rel=1e-14)
    assert gumbel_type_cdf(2, 50.0) == pytest.approx(1.0, abs=1e-15)
    assert gumbel_type_cdf(1, -40.0) == pytest.approx(0.0, abs=1e-15)


def test_gumbel_is_exp_of_negative_intensity_tail():
    xs = np.linspace(-3, 5, 50)
    for c in (1, 2, 4):
        expected = np.exp(-np.array([intensity_mass(c, x, math.inf) for x in xs]))
        assert np.allclose(gumbel_type_cdf(c, xs), expected, rtol=1e-12)


def test_log_gamma_values():
    # m=0 reduces exactly to the Gumbel-type law with c = r
    xs = np.linspace(-5, 5, 41)
    for r in (1, 2, 3):
        assert np.allclose(log_gamma_cdf(r, 0, xs), gumbel_type_cdf(r, xs), rtol=1e-12)
    # Erlang tail oracle: P(S_2 >= 1) = 2 e^{-1}
    assert log_gamma_cdf(1, 1, 0.0) == pytest.approx(0.7357588823428847, rel=1e-13)
    assert log_gamma_cdf(1, 1, -50.0) == pytest.approx(0.0, abs=1e-15)


def test_chisq_log_values_and_identity():
    # chi-square with 2 dof is Exp(mean 2): F(2) = 1 - e^{-1}
    assert chisq_log_cdf(0, math.log(2)) == pytest.approx(0.6321205588285577, rel=1e-13)
    assert chisq_log_cdf(1, 60.0) == pytest.approx(1.0, abs=1e-15)
    # ln(2 S_{m+1}) and the log-chi-square law coincide:
    # F_chisq_log(m, y) = 1 - log_gamma_cdf(1, m, ln 2 - y)
    rng = np.random.default_rng(1)
    for _ in range(100):
        m = int(rng.integers(0, 6))
        y = float(rng.uniform(-5, 5))
        lhs = float(chisq_log_cdf(m, y))
        rhs = 1.0 - float(log_gamma_cdf(1, m, math.log(2) - y))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_exact_poissonized_marginal():
    # below the support edge the CDF vanishes
    assert exact_poissonized_marginal_cdf(100, 2, -20.0) == 0.0
    # r=1 closed form: 1 - exp(-x)/n on the support
    for n in (10, 1000):
        for x in (-1.0, 0.0, 3.0):
            if x >= -math.log(n):
                expected = 1.0 - math.exp(-x) / n
                assert exact_poissonized_marginal_cdf(n, 1, x) == pytest.approx(expected, rel=1e-12)


def test_marginal_density_scales_to_intensity():
    # n * density at fixed x converges to exp(-x)/(r-1)!; density via a
    # centered finite difference of the CDF
    eps = 1e-3
    for r in (1, 2, 3):
        for x in (-1.0, 0.0, 2.0):
            limit = math.exp(-x) / math.factorial(r - 1)
            errors = []
            for n in (10**3, 10**6, 10**9):
                hi = exact_poissonized_marginal_cdf(n, r, x + eps)
                lo = exact_poissonized_marginal_cdf(n, r, x - eps)
                scaled = n * (hi - lo) / (2 * eps)
                errors.append(abs(scaled - limit))
                # independent algebra: the scaled density carries the factor
                # (1 + (r-1) ln ln n / ln n + x / ln n)^(r-1)
                log_n = math.log(n)
                factor = (1 + (r - 1) * math.log(log_n) / log_n + x / log_n) ** (r - 1)
                assert scaled == pytest.approx(limit * factor, rel=1e-3)
            # convergence toward the limit is monotone on this grid, up to the
            # rounding floor of the finite difference at the largest n
            assert all(a > b for a, b in zip(errors, errors[1:])) or errors[-1] < 1e-4


def test_er_expectation():
    # c=1 at n=1000 against the exact harmonic-sum oracle
    approx = er_expectation(1000, 1)
    assert approx == pytest.approx(1000 * math.log(1000) + EULER_GAMMA * 1000, rel=1e-14)
    assert abs(approx - 1000 * harmonic(1000)) < 1.0
    # middle term at c=2, n=1e4
    middle = er_expectation(10**4, 2) - er_expectation(10**4, 1)
    assert middle == pytest.approx(10**4 * math.log(math.log(10**4)), rel=1e-12)


def test_cdfs_monotone_with_unit_limits():
    grid = np.linspace(-20, 20, 10_000)
    for cdf in (
        lambda x: gumbel_type_cdf(2, x),
        lambda x: log_gamma_cdf(2, 1, x),
        lambda x: chisq_log_cdf(3, x),
        lambda x: exact_poissonized_marginal_cdf(50, 2, x),
    ):
        values = np.asarray(cdf(grid))
        assert (np.diff(values) >= -1e-12).all()
        assert values[0] < 1e-6 and values[-1] > 1 - 1e-6
        assert ((0.0 <= values) & (values <= 1.0)).all()


def test_density_cdf_consistency():
    # numerical derivative of each CDF against its stated density
    eps = 1e-6
    cases = [
        (lambda x: gumbel_type_cdf(2, x),
         lambda x: math.exp(-x) * math.exp(-math.exp(-x))),
        (lambda x: chisq_log_cdf(0, x),
         lambda x: 0.5 * math.exp(x) * math.exp(-math.exp(x) / 2)),
        (lambda x: log_gamma_cdf(1, 1, x),
         lambda x: math.exp(-2 * x) * math.exp(-math.exp(-x))),
    ]
    for cdf, density in cases:
        for x in np.linspace(-2, 2, 21):
            numeric = (cdf(x + eps) - cdf(x - eps)) / (2 * eps)
            assert abs(numeric - density(float(x))) < 1e-6


def test_parameter_validation():
    with pytest.raises(ValueError):
        gumbel_type_cdf(0, 0.0)
    with pytest.raises(ValueError):
        log_gamma_cdf(1, -1, 0.0)
    with pytest.raises(ValueError):
        chisq_log_cdf(-1, 0.0)
    with pytest.raises(ValueError):
        exact_poissonized_marginal_cdf(1, 1, 0.0)
    with pytest.raises(ValueError):
        er_expectation(2, 1)
