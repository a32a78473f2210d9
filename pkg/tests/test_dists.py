"""Tests for the distribution family.

Oracles: adaptive quadrature of the density (normalization, moments,
moment distribution functions), closed-form special values, and
nesting identities inside the family.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incomedyn import dists
from incomedyn.dists import (
    Kind,
    ParameterVector,
    beta2,
    cdf,
    dagum,
    gb2,
    gen_lorenz,
    logpdf,
    lorenz,
    mean,
    mode,
    moment_cdf,
    moment_existence,
    pdf,
    quantile,
    sample,
    singh_maddala,
)
from incomedyn.errors import DomainError, UsageError
from incomedyn.specfun import integrate


ALL_EXAMPLE_PARAMS = [
    gb2(2.0, 1.5, 1.2, 2.5),
    gb2(3.54, 329.58, 0.61, 1.9),
    dagum(2.0, 1.0, 1.0),
    dagum(3.54, 329.58, 0.61),
    singh_maddala(2.5, 2.0, 1.7),
    beta2(1.0, 2.0, 3.0),
]


class TestParameterVector:
    def test_lengths(self):
        with pytest.raises(DomainError):
            ParameterVector(Kind.GB2, (1.0, 1.0, 1.0))
        with pytest.raises(DomainError):
            ParameterVector(Kind.DAGUM, (1.0, 1.0, 1.0, 1.0))

    def test_positivity(self):
        with pytest.raises(DomainError):
            dagum(2.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            dagum(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            beta2(1.0, np.inf, 1.0)

    def test_gb2_equivalents(self):
        assert dagum(2.0, 3.0, 1.5).gb2_values() == (2.0, 3.0, 1.5, 1.0)
        assert singh_maddala(2.0, 3.0, 1.5).gb2_values() == (2.0, 3.0, 1.0, 1.5)
        assert beta2(3.0, 1.5, 2.5).gb2_values() == (1.0, 3.0, 1.5, 2.5)


class TestPdf:
    def test_dagum_direct_substitution(self):
        # a p y^(ap-1) / (b^(ap) [1+(y/b)^a]^(p+1)) at a=2,b=1,p=1,y=1
        assert pdf(dagum(2.0, 1.0, 1.0), 1.0) == pytest.approx(0.5, abs=1e-14)

    def test_beta2_direct_substitution(self):
        assert pdf(beta2(1.0, 1.0, 1.0), 1.0) == pytest.approx(0.25, abs=1e-14)

    def test_integrates_to_one(self):
        for params in ALL_EXAMPLE_PARAMS:
            total = integrate(lambda y: pdf(params, y), 0.0, np.inf)
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_log_space_consistency(self):
        y = np.array([0.1, 1.0, 10.0, 1e4])
        for params in ALL_EXAMPLE_PARAMS:
            assert np.allclose(pdf(params, y), np.exp(logpdf(params, y)), rtol=1e-13)

    def test_extreme_arguments_stay_finite(self):
        params = dagum(3.54, 329.58, 0.61)
        assert pdf(params, 1e-280) >= 0.0
        assert pdf(params, 1e280) == pytest.approx(0.0, abs=1e-100)
        assert np.isfinite(logpdf(params, 1e280))

    def test_domain(self):
        with pytest.raises(DomainError):
            pdf(dagum(2.0, 1.0, 1.0), 0.0)
        with pytest.raises(DomainError):
            pdf(dagum(2.0, 1.0, 1.0), -1.0)


class TestCdf:
    def test_burr_closed_forms(self):
        assert cdf(dagum(2.0, 1.0, 1.0), 1.0) == pytest.approx(0.5, abs=1e-14)
        assert cdf(singh_maddala(2.0, 1.0, 1.0), 1.0) == pytest.approx(0.5, abs=1e-14)

    def test_matches_quadrature(self):
        for params in ALL_EXAMPLE_PARAMS:
            _, mu = mean(params)
            ys = [0.3 * mu, mu, 2.5 * mu] if mu else [0.5, 1.0, 5.0]
            for y in ys:
                ref = integrate(lambda t: pdf(params, t), 0.0, y)
                assert cdf(params, y) == pytest.approx(ref, abs=1e-8)

    def test_limits(self):
        params = gb2(2.0, 1.5, 1.2, 2.5)
        assert cdf(params, 1e-12) == pytest.approx(0.0, abs=1e-12)
        assert cdf(params, 1e12) == pytest.approx(1.0, abs=1e-12)

    def test_pdf_is_cdf_derivative(self):
        h = 1e-6
        for params in ALL_EXAMPLE_PARAMS:
            for y in [0.7, 1.3, 4.0]:
                deriv = (cdf(params, y + h) - cdf(params, y - h)) / (2.0 * h)
                assert deriv == pytest.approx(pdf(params, y), abs=1e-5, rel=1e-4)


class TestQuantile:
    def test_closed_forms(self):
        assert quantile(dagum(2.0, 1.0, 1.0), 0.5) == pytest.approx(1.0, rel=1e-12)
        assert quantile(singh_maddala(2.0, 1.0, 1.0), 0.5) == pytest.approx(
            1.0, rel=1e-12
        )

    def test_cdf_roundtrip(self):
        u = np.linspace(0.01, 0.99, 25)
        for params in ALL_EXAMPLE_PARAMS:
            y = quantile(params, u)
            assert np.max(np.abs(cdf(params, y) - u)) <= 1e-8

    def test_domain(self):
        params = dagum(2.0, 1.0, 1.0)
        for bad in [0.0, 1.0, -0.5, 1.5, np.nan]:
            with pytest.raises(DomainError):
                quantile(params, bad)


class TestNesting:
    """GB2 with one parameter pinned reproduces each nested kind."""

    Y_GRID = np.geomspace(0.05, 50.0, 100)
    U_GRID = np.linspace(0.005, 0.995, 100)

    def test_dagum(self):
        inner = dagum(2.3, 1.7, 0.8)
        outer = gb2(2.3, 1.7, 0.8, 1.0)
        assert np.max(np.abs(pdf(inner, self.Y_GRID) - pdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(np.abs(cdf(inner, self.Y_GRID) - cdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(
            np.abs(quantile(inner, self.U_GRID) - quantile(outer, self.U_GRID))
        ) <= 1e-10

    def test_singh_maddala(self):
        inner = singh_maddala(2.3, 1.7, 1.9)
        outer = gb2(2.3, 1.7, 1.0, 1.9)
        assert np.max(np.abs(pdf(inner, self.Y_GRID) - pdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(np.abs(cdf(inner, self.Y_GRID) - cdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(
            np.abs(quantile(inner, self.U_GRID) - quantile(outer, self.U_GRID))
        ) <= 1e-10

    def test_beta2(self):
        inner = beta2(1.7, 1.2, 2.4)
        outer = gb2(1.0, 1.7, 1.2, 2.4)
        assert np.max(np.abs(pdf(inner, self.Y_GRID) - pdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(np.abs(cdf(inner, self.Y_GRID) - cdf(outer, self.Y_GRID))) <= 1e-10
        assert np.max(
            np.abs(quantile(inner, self.U_GRID) - quantile(outer, self.U_GRID))
        ) <= 1e-10


class TestMean:
    def test_dagum_gamma_identity(self):
        # b Gamma(p + 1/a) Gamma(1 - 1/a) / Gamma(p) = Gamma(1.5)Gamma(0.5) = pi/2
        existence, mu = mean(dagum(2.0, 1.0, 1.0))
        assert existence.mean_exists
        assert mu == pytest.approx(np.pi / 2.0, rel=1e-12)

    def test_beta2_closed_form(self):
        _, mu = mean(beta2(1.0, 2.0, 3.0))
        assert mu == pytest.approx(1.0, rel=1e-12)

    def test_nonexistence(self):
        existence, mu = mean(dagum(0.9, 1.0, 1.0))
        assert not existence.mean_exists
        assert mu is None
        assert existence.condition_margin == pytest.approx(-0.1)

    def test_margin_consistency(self):
        for params in ALL_EXAMPLE_PARAMS:
            ex = moment_existence(params)
            assert ex.mean_exists == (ex.condition_margin > 0.0)

    def test_matches_quadrature(self):
        for params in ALL_EXAMPLE_PARAMS:
            _, mu = mean(params)
            ref = integrate(lambda y: y * pdf(params, y), 0.0, np.inf)
            assert mu == pytest.approx(ref, rel=1e-7)


class TestMomentCdf:
    def test_order_zero_is_cdf(self):
        params = gb2(2.0, 1.5, 1.2, 2.5)
        y = np.array([0.4, 1.1, 3.0])
        assert np.allclose(moment_cdf(params, 0, y), cdf(params, y), atol=1e-14)

    def test_matches_quadrature_oracle(self):
        # F^(k)(y) = (1/mu_k) int_0^y t^k p(t) dt
        for params in ALL_EXAMPLE_PARAMS:
            _, mu = mean(params)
            mu_1 = integrate(lambda t: t * pdf(params, t), 0.0, np.inf)
            for y in [0.5 * mu, mu, 3.0 * mu]:
                ref = integrate(lambda t: t * pdf(params, t), 0.0, y) / mu_1
                assert moment_cdf(params, 1, y) == pytest.approx(ref, abs=1e-7)

    def test_normalization_at_infinity(self):
        assert moment_cdf(gb2(2.0, 1.0, 1.0, 2.0), 1, 1e14) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_nonexistence_named(self):
        with pytest.raises(DomainError, match="k < a"):
            moment_cdf(dagum(0.9, 1.0, 1.0), 1, 1.0)
        with pytest.raises(DomainError, match="k < q"):
            moment_cdf(beta2(1.0, 2.0, 1.5), 2, 1.0)

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            moment_cdf(dagum(2.0, 1.0, 1.0), -1, 1.0)


class TestLorenz:
    def test_boundaries(self):
        params = dagum(3.54, 329.58, 0.61)
        assert lorenz(params, 0.0) == 0.0
        assert lorenz(params, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_matches_composition(self):
        # Dagum: L(u) = I_{u^(1/p)}(p + 1/a, 1 - 1/a); compare with
        # F^(1)(F^(-1)(u)) computed through income space.
        params = dagum(3.54, 329.58, 0.61)
        u = np.linspace(0.01, 0.99, 50)
        composed = moment_cdf(params, 1, quantile(params, u))
        assert np.max(np.abs(lorenz(params, u) - composed)) <= 1e-10

    def test_below_diagonal_and_convex(self):
        u = np.arange(1, 1000) / 1000.0
        for params in ALL_EXAMPLE_PARAMS:
            values = lorenz(params, u)
            assert np.all(values <= u + 1e-12)
            assert np.all(np.diff(values) >= -1e-12)
            second = np.diff(values, 2)
            assert np.all(second >= -1e-9)

    def test_scale_invariance(self):
        u = np.linspace(0.05, 0.95, 19)
        assert np.allclose(
            lorenz(dagum(2.0, 1.0, 1.5), u),
            lorenz(dagum(2.0, 2.0, 1.5), u),
            atol=1e-14,
        )

    def test_mean_required(self):
        with pytest.raises(DomainError):
            lorenz(dagum(0.9, 1.0, 1.0), 0.5)


class TestGenLorenz:
    def test_endpoints(self):
        params = dagum(2.0, 1.0, 1.0)
        assert gen_lorenz(params, 0.0) == 0.0
        assert gen_lorenz(params, 1.0) == pytest.approx(np.pi / 2.0, rel=1e-10)

    def test_is_mean_times_lorenz(self):
        params = gb2(2.0, 1.5, 1.2, 2.5)
        u = np.linspace(0.1, 0.9, 9)
        _, mu = mean(params)
        assert np.allclose(gen_lorenz(params, u), mu * lorenz(params, u), rtol=1e-13)


class TestMode:
    def test_interior_mode_is_pdf_maximum(self):
        params = gb2(3.0, 2.0, 1.5, 2.0)
        m = mode(params)
        assert m > 0
        eps = 1e-4
        assert pdf(params, m) >= pdf(params, m * (1 + eps))
        assert pdf(params, m) >= pdf(params, m * (1 - eps))

    def test_decreasing_density_has_zero_mode(self):
        assert mode(dagum(1.2, 1.0, 0.5)) == 0.0


class TestSample:
    def test_determinism(self):
        params = dagum(2.0, 1.0, 1.0)
        a = sample(params, 100, np.random.default_rng(7))
        b = sample(params, 100, np.random.default_rng(7))
        assert np.array_equal(a, b)

    def test_positive(self):
        draws = sample(gb2(2.0, 1.5, 1.2, 2.5), 1000, np.random.default_rng(0))
        assert np.all(draws > 0)

    def test_empirical_cdf_binomial_bound(self):
        params = dagum(2.0, 1.0, 1.0)
        n = 100_000
        draws = sample(params, n, np.random.default_rng(123))
        for y in [0.5, 1.0, 2.0]:
            f_hat = np.mean(draws <= y)
            f = cdf(params, y)
            bound = 3.0 * np.sqrt(f * (1.0 - f) / n)
            assert abs(f_hat - f) <= bound

    def test_size_validation(self):
        with pytest.raises(UsageError):
            sample(dagum(2.0, 1.0, 1.0), 0, np.random.default_rng(0))


@given(
    u=st.floats(0.01, 0.99),
    a=st.floats(1.2, 6.0),
    b=st.floats(0.5, 100.0),
    p=st.floats(0.3, 4.0),
)
@settings(max_examples=50, deadline=None)
def test_quantile_cdf_property(u, a, b, p):
    params = dagum(a, b, p)
    assert cdf(params, quantile(params, u)) == pytest.approx(u, abs=1e-9)


@given(
    a=st.floats(1.2, 5.0),
    q=st.floats(0.5, 4.0),
    y1=st.floats(0.1, 5.0),
    y2=st.floats(0.1, 5.0),
)
@settings(max_examples=50, deadline=None)
def test_cdf_monotone_property(a, q, y1, y2):
    params = singh_maddala(a, 2.0, q)
    lo, hi = min(y1, y2), max(y1, y2)
    assert cdf(params, lo) <= cdf(params, hi) + 1e-13
