import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ehrelay.errors import InvalidDomain, NonConvergent
from ehrelay.numerics import (
    DEFAULT_SPEC,
    QuadratureSpec,
    gauss_kronrod21,
    gen_inc_gamma,
    integrate_interval,
    integrate_semi_infinite,
)

from oracles import GAMMA_1_1_1_RIEMANN, quad_gen_inc_gamma


class TestQuadratureSpec:
    def test_defaults(self):
        assert DEFAULT_SPEC == QuadratureSpec(1e-10, 1e-14, 10_000)

    @pytest.mark.parametrize("kwargs", [
        dict(rel_tol=0.0), dict(rel_tol=-1e-3), dict(abs_tol=-1.0),
        dict(max_subdivisions=0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)


class TestGaussKronrod:
    def test_exact_for_polynomials(self):
        # The 21-point Kronrod rule integrates degree <= 31 exactly.
        val, err = gauss_kronrod21(lambda x: x**30 + 3 * x**7, -1.0, 1.0)
        assert val == pytest.approx(2.0 / 31.0, rel=1e-14)

    def test_interval(self):
        assert integrate_interval(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-12)
        assert integrate_interval(np.sin, math.pi, 0.0) == pytest.approx(-2.0, rel=1e-12)
        assert integrate_interval(np.sin, 1.0, 1.0) == 0.0


class TestSemiInfinite:
    def test_exponential(self):
        assert integrate_semi_infinite(lambda t: np.exp(-t), 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_shifted(self):
        val = integrate_semi_infinite(lambda t: np.exp(-t), 2.0)
        assert val == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_gamma2(self):
        val = integrate_semi_infinite(lambda t: t * np.exp(-t), 0.0)
        assert val == pytest.approx(1.0, rel=1e-12)

    def test_sign_changing_integrand(self):
        # int_0^inf e^{-t} cos t dt = 1/2
        val = integrate_semi_infinite(lambda t: np.exp(-t) * np.cos(t), 0.0)
        assert val == pytest.approx(0.5, rel=1e-11)

    def test_negative_lower(self):
        with pytest.raises(InvalidDomain):
            integrate_semi_infinite(lambda t: np.exp(-t), -1.0)

    def test_nonconvergent(self):
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=0.0, max_subdivisions=2)
        with pytest.raises(NonConvergent):
            integrate_semi_infinite(lambda t: np.exp(-t) * np.cos(40 * t), 0.0, spec)

    def test_tolerance_contract(self):
        f = lambda t: np.exp(-t - 3.0 / t)
        truth = quad_gen_inc_gamma(1.0, 0.5, 3.0)
        for rel in (1e-4, 1e-6, 1e-8, 1e-10):
            spec = QuadratureSpec(rel_tol=rel, abs_tol=0.0)
            val = integrate_semi_infinite(f, 0.5, spec)
            assert abs(val - truth) <= rel * abs(val)


class TestGenIncGamma:
    def test_complete(self):
        assert gen_inc_gamma(1, 0, 0) == 1.0
        assert gen_inc_gamma(2.5, 0, 0) == pytest.approx(math.gamma(2.5), rel=1e-15)

    def test_reduces_to_exponential(self):
        assert gen_inc_gamma(1, 2, 0) == pytest.approx(math.exp(-2), rel=1e-12)

    def test_frozen_riemann_value(self):
        assert gen_inc_gamma(1, 1, 1) == pytest.approx(GAMMA_1_1_1_RIEMANN, rel=1e-10)

    def test_x_zero_with_b(self):
        # int_0^inf exp(-t - b/t) dt = 2 sqrt(b) K_1(2 sqrt(b))
        from scipy.special import k1
        b = 0.7
        expected = 2 * math.sqrt(b) * k1(2 * math.sqrt(b))
        assert gen_inc_gamma(1, 0, b) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("shape,x,b", [
        (1.0, 0.05, 0.002), (1.0, 3.0, 40.0), (1.0, 0.5, 1e4), (2.5, 0.1, 3.0),
        (0.5, 0.01, 0.0), (3.0, 7.0, 0.1),
    ])
    def test_against_quadpack(self, shape, x, b):
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=0.0)
        assert gen_inc_gamma(shape, x, b, spec) == pytest.approx(
            quad_gen_inc_gamma(shape, x, b), rel=1e-10)

    def test_scaled_matches_unscaled(self):
        for x, b in [(0.3, 0.2), (5.0, 1.0), (40.0, 3.0)]:
            scaled = gen_inc_gamma(1, x, b, scaled=True)
            assert scaled * math.exp(-x) == pytest.approx(gen_inc_gamma(1, x, b), rel=1e-10)

    def test_scaled_large_argument(self):
        # exp(x) * Gamma(1, x; b) -> exp(-b/x) as x -> inf
        val = gen_inc_gamma(1, 1e4, 2.0, scaled=True)
        assert val == pytest.approx(math.exp(-2.0 / 1e4), rel=1e-6)
        assert 0.0 < val < 1.0

    @pytest.mark.parametrize("args", [(0.0, 1.0, 1.0), (1.0, -1.0, 0.0), (1.0, 1.0, -0.1)])
    def test_domain(self, args):
        with pytest.raises(InvalidDomain):
            gen_inc_gamma(*args)

    @settings(max_examples=60, deadline=None)
    @given(x=st.floats(1e-3, 30.0), b=st.floats(0.0, 50.0))
    def test_sandwich(self, x, b):
        upper = gen_inc_gamma(1, x, 0.0)
        val = gen_inc_gamma(1, x, b)
        slack = 1e-12 * upper
        assert math.exp(-b / x) * upper - slack <= val <= upper + slack

    @settings(max_examples=40, deadline=None)
    @given(x=st.floats(1e-3, 20.0), b=st.floats(0.0, 20.0),
           dx=st.floats(0.0, 5.0), db=st.floats(0.0, 5.0))
    def test_monotone(self, x, b, dx, db):
        base = gen_inc_gamma(1, x, b)
        tol = 1e-12 * base
        assert gen_inc_gamma(1, x + dx, b) <= base + tol
        assert gen_inc_gamma(1, x, b + db) <= base + tol

    def test_halving_tolerance_is_stable(self):
        for x in (0.01, 0.3, 2.0, 9.0):
            for b in (0.0, 0.01, 1.0, 25.0):
                for rel in (1e-6, 1e-8, 1e-10):
                    coarse = gen_inc_gamma(1, x, b, QuadratureSpec(rel, 0.0))
                    fine = gen_inc_gamma(1, x, b, QuadratureSpec(rel / 2, 0.0))
                    assert abs(fine - coarse) <= rel * abs(coarse)
