import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite as npherm

from fdjc.errors import NoConvergence, PoleError
from fdjc.specialfn import SeriesControl, complex_gamma, hermite_h, kummer_1f1

# 40-digit reference values computed with mpmath
GAMMA_1_PLUS_I = complex(0.498015668118356042713691117462198, -0.154949828301810685124955130483887)
KUMMER_REF = complex(0.714453121907650197765946232709398, 0.829904918417737614211377476373193)
HERMITE_REF = complex(-0.690523220334746615229329330733991, -1.264281449023820994933204486633681)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestGamma:
    def test_known_values(self):
        assert complex_gamma(1) == pytest.approx(1.0, rel=1e-15)
        assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
        assert rel(complex_gamma(1 + 1j), GAMMA_1_PLUS_I) < 1e-13

    def test_against_mpmath_grid(self):
        for re in np.linspace(-9.7, 40.3, 11):
            for im in (-5.0, -0.3, 0.0, 2.0, 11.0):
                z = complex(re, im)
                if abs(z) > 50:
                    continue
                assert rel(complex_gamma(z), complex(mp.gamma(z))) < 1e-12

    @pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-13])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            complex_gamma(z)

    def test_overflow_is_reported(self):
        with pytest.raises(NoConvergence):
            complex_gamma(400.0)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(-4.9, 4.9), st.floats(-5, 5))
    def test_reflection(self, x, y):
        z = complex(x, y)
        if abs(z - round(x)) < 1e-3:
            return
        lhs = complex_gamma(z) * complex_gamma(1 - z)
        rhs = math.pi / cmath.sin(math.pi * z)
        assert rel(lhs, rhs) < 1e-10


class TestKummer:
    def test_zero_argument(self):
        assert kummer_1f1(0.3 + 2j, -1.5 + 0.2j, 0) == 1

    def test_elementary(self):
        assert kummer_1f1(1, 2, 1) == pytest.approx(math.e - 1, rel=1e-14)
        z = 0.7 - 0.4j
        assert rel(kummer_1f1(1, 2, z), (cmath.exp(z) - 1) / z) < 1e-14

    def test_reference_value(self):
        assert rel(kummer_1f1(0.5 + 1j, 0.5, 0.3 + 0.2j), KUMMER_REF) < 1e-14

    def test_against_mpmath(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            a = complex(*rng.uniform(-4, 4, 2))
            b = complex(rng.uniform(0.2, 4), rng.uniform(-2, 2))
            z = complex(*rng.uniform(-4, 4, 2))
            assert rel(kummer_1f1(a, b, z), complex(mp.hyp1f1(a, b, z))) < 1e-11

    @pytest.mark.parametrize("b", [0, -2, -5 + 1e-13j])
    def test_pole_b(self, b):
        with pytest.raises(PoleError):
            kummer_1f1(1, b, 0.5)

    def test_polynomial_zero(self):
        assert abs(kummer_1f1(-1, 1, 1)) < 1e-15

    def test_term_budget(self):
        with pytest.raises(NoConvergence):
            kummer_1f1(0.5, 1.5, 30.0, SeriesControl(max_terms=10))

    def test_cancellation_is_not_silent(self):
        with pytest.raises(NoConvergence):
            kummer_1f1(0.5, 1.5, 60j)

    def test_transformation_sample(self):
        rng = np.random.default_rng(2024)
        n = 0
        while n < 100:
            a = complex(*rng.uniform(-5, 5, 2))
            z = complex(*rng.uniform(-5, 5, 2))
            if abs(a) > 5 or abs(z) > 5:
                continue
            b = complex(rng.uniform(0.3, 5), rng.uniform(-3, 3))
            lhs = kummer_1f1(a, b, z)
            rhs = cmath.exp(z) * kummer_1f1(b - a, b, -z)
            assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))
            n += 1

    @settings(max_examples=80, deadline=None)
    @given(
        st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
        st.floats(0.3, 4),
        st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
    )
    def test_contiguous_relation(self, a, b, z):
        f0 = kummer_1f1(a, b, z)
        fm = kummer_1f1(a - 1, b, z)
        fp = kummer_1f1(a + 1, b, z)
        res = (b - a) * fm + (2 * a - b + z) * f0 - a * fp
        scale = abs(b - a) * abs(fm) + abs(2 * a - b + z) * abs(f0) + abs(a) * abs(fp)
        assert abs(res) <= 1e-8 * max(scale, 1.0)


class TestHermite:
    def test_polynomial(self):
        assert hermite_h(2, 1.5) == pytest.approx(7.0, rel=1e-14)

    def test_integer_orders_match_polynomials(self):
        for n in range(11):
            coef = np.zeros(n + 1)
            coef[n] = 1
            for z in np.linspace(-3, 3, 25):
                exact = npherm.hermval(z, coef)
                assert abs(hermite_h(n, z) - exact) <= 1e-9 * (1 + abs(exact))

    def test_origin(self):
        nu = 0.7 - 1.3j
        expected = cmath.exp(nu * math.log(2)) * math.sqrt(math.pi) / complex(mp.gamma((1 - nu) / 2))
        assert rel(hermite_h(nu, 0), expected) < 1e-13

    def test_integral_representation(self):
        assert rel(hermite_h(-1 - 2j, 0.4 + 0.4j), HERMITE_REF) < 1e-12

    def test_integral_representation_quadrature(self):
        mp.mp.dps = 25
        nu, z = mp.mpc(-0.5, 1.5), mp.mpc(-0.3, 0.8)
        ref = mp.quad(lambda t: mp.exp(-t * t - 2 * t * z) * t ** (-nu - 1), [0, 1, mp.inf]) / mp.gamma(-nu)
        assert rel(hermite_h(complex(nu), complex(z)), complex(ref)) < 1e-12

    def test_complex_order_against_mpmath(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            nu = complex(rng.uniform(-3, 3), rng.uniform(-6, 0))
            z = complex(*rng.uniform(-2, 2, 2))
            # the even and odd branches partly cancel; a few digits go there
            assert rel(hermite_h(nu, z), complex(mp.hermite(nu, z))) < 1e-9

    def test_differential_equation(self):
        nu, z, h = 0.3 - 2.0j, 0.6 + 0.5j, 1e-4
        y = lambda x: hermite_h(nu, x)
        d1 = (y(z + h) - y(z - h)) / (2 * h)
        d2 = (y(z + h) - 2 * y(z) + y(z - h)) / h**2
        assert abs(d2 - 2 * z * d1 + 2 * nu * y(z)) < 1e-5 * abs(y(z))

    def test_derivative_lowers_order(self):
        nu, z, h = -0.4 - 1.1j, 0.2 - 0.7j, 1e-5
        d1 = (hermite_h(nu, z + h) - hermite_h(nu, z - h)) / (2 * h)
        assert rel(d1, 2 * nu * hermite_h(nu - 1, z)) < 1e-8
