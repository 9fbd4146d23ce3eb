import cmath
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentkit.errors import InsufficientPrecision, QuadratureError, SlitViolation
from momentkit.measures import DensitySpec, Measure
from momentkit.moments import MomentSequence, is_completely_monotone
from momentkit.polylog import g_alpha
from momentkit.stieltjes import (
    HadamardProduct,
    SlitPoint,
    StieltjesFunction,
    evaluate,
    hadamard,
    hadamard_eval,
    hadamard_eval_many,
    quotient_taylor,
    series_eval,
    series_sum,
    slit_distance,
    taylor,
)

from oracles import stieltjes_hp

UNIFORM = StieltjesFunction(Measure.from_density(DensitySpec.uniform()))


def point(t):
    return StieltjesFunction(Measure.point(t))


FUNCTIONS = {
    "uniform": UNIFORM,
    "g2": g_alpha(2),
    "g0.5": g_alpha(0.5),
    "power-0.5": StieltjesFunction(Measure.from_density(DensitySpec.power(-0.5))),
    "power2": StieltjesFunction(Measure.from_density(DensitySpec.power(2))),
    "tabulated": StieltjesFunction(Measure.from_density(DensitySpec.tabulated([0.2, 0.5, 0.8], [1, 2, 1.5]))),
    "mixed": StieltjesFunction(Measure(((0.3, 0.25), (1.0, 0.25)), DensitySpec.log_power(3))),
    "atoms": StieltjesFunction(Measure(((0.0, 0.5), (0.9, 0.5)))),
}


class TestEvaluate:
    def test_point_mass(self):
        assert evaluate(point(0.3), 1j) == pytest.approx(1 / (1 - 0.3j), abs=1e-15)

    def test_uniform_at_minus_one(self):
        assert abs(evaluate(UNIFORM, -1) - math.log(2)) <= 1e-12

    @pytest.mark.parametrize("name", sorted(FUNCTIONS))
    def test_normalisation(self, name):
        assert evaluate(FUNCTIONS[name], 0) == 1

    @pytest.mark.parametrize("z", [0.5j, -3 + 0.1j, 1 + 0.05j, 4 + 0.5j, 0.9, -20 - 20j])
    def test_uniform_closed_form(self, z):
        assert evaluate(UNIFORM, z) == pytest.approx(-cmath.log(1 - z) / z, abs=1e-12)

    @pytest.mark.parametrize("z", [0.7j, -2 + 0.3j, 1 + 0.2j, 3 + 1j])
    def test_power_and_tabulated_against_mpmath(self, z):
        assert evaluate(FUNCTIONS["power-0.5"], z) == pytest.approx(
            stieltjes_hp(lambda t: 0.5 / mp.sqrt(t), z), abs=1e-12
        )
        # log-linear interpolation of 2 at 0.5 between 1 at 0.2 and 1.5 at 0.8
        dens = FUNCTIONS["tabulated"].measure.density
        ref = complex(
            mp.quad(lambda t: float(dens.pdf(float(t))) / (1 - t * mp.mpc(z)), [0, 0.2, 0.5, 0.8, 1])
        )
        assert evaluate(FUNCTIONS["tabulated"], z) == pytest.approx(ref, abs=1e-11)

    def test_slit_guard(self):
        for z in (1.0, 2.0, 5 + 1e-9j, 1 + 1e-9):
            with pytest.raises(SlitViolation):
                evaluate(UNIFORM, z)
        assert evaluate(UNIFORM, 5 + 1e-3j) == pytest.approx(-cmath.log(1 - (5 + 1e-3j)) / (5 + 1e-3j), abs=1e-12)

    @pytest.mark.parametrize("z", [3 - 1e-6j, 5 + 1e-7j, 1.5 + 1.1e-8j, 100 + 1e-6j, 1.25 - 1e-8j])
    def test_close_to_the_cut(self, z):
        assert evaluate(UNIFORM, z) == pytest.approx(-cmath.log(1 - z) / z, abs=1e-12)
        ref = stieltjes_hp(lambda t: 0.5 / mp.sqrt(t), z, points=[(1 / mp.mpc(z)).real])
        assert evaluate(FUNCTIONS["power-0.5"], z) == pytest.approx(ref, abs=1e-12)

    def test_ill_conditioned_near_branch_point(self):
        with pytest.raises(QuadratureError) as info:
            evaluate(UNIFORM, 1.0001 + 1e-7j)
        assert info.value.estimate > 1e-12

    def test_slit_distance(self):
        assert slit_distance(3 + 4j) == 4
        assert slit_distance(-2 + 0j) == 3
        with pytest.raises(SlitViolation):
            SlitPoint(1.5, 0.0)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(sorted(FUNCTIONS)),
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=1e-3, max_value=10),
)
def test_pick_property_and_conjugate_symmetry(name, x, y):
    f = FUNCTIONS[name]
    val = evaluate(f, complex(x, y))
    assert val.imag > 0
    assert evaluate(f, complex(x, -y)) == pytest.approx(val.conjugate(), abs=1e-12)


def test_pick_property_atom_at_zero_only():
    assert evaluate(point(0), 2 + 3j).imag == 0


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
def test_series_consistency(name):
    f = FUNCTIONS[name]
    seq = taylor(f, 60)
    for z in (0.5, -0.5, 0.3 + 0.4j, -0.2j, 0.1):
        assert abs(evaluate(f, z) - series_eval(seq, z)) <= 1e-10


class TestTaylor:
    def test_examples(self):
        assert taylor(point(1), 5).terms == (1,) * 5
        assert taylor(UNIFORM, 4).terms == tuple(Fraction(1, k + 1) for k in range(4))

    def test_cache_is_idempotent(self):
        f = StieltjesFunction(Measure.from_density(DensitySpec.log_power(1.5)))
        first = taylor(f, 10)
        assert taylor(f, 5).terms == first.terms[:5]
        assert taylor(f, 10) == first


class TestHadamard:
    def test_identity(self):
        g = FUNCTIONS["mixed"]
        for z in (0.4j, -2 + 1j, 1 + 0.5j):
            assert hadamard_eval(g, point(1), z) == pytest.approx(evaluate(g, z), abs=1e-12)
            assert hadamard_eval(point(1), g, z) == pytest.approx(evaluate(g, z), abs=1e-12)

    def test_point_masses(self):
        prod = hadamard(point(Fraction(1, 2)), point(Fraction(1, 3)))
        assert prod.measure.atoms == ((Fraction(1, 6), Fraction(1)),)

    def test_compositional_point_mass(self):
        f = FUNCTIONS["g2"]
        for z in (2j, -1 + 0.5j):
            assert hadamard_eval(f, point(0.4), z) == pytest.approx(evaluate(f, 0.4 * z), abs=1e-12)

    def test_atom_products_match_pushforward(self):
        f, g = FUNCTIONS["atoms"], StieltjesFunction(Measure(((0.2, 0.3), (0.7, 0.7))))
        prod = hadamard(f, g)
        assert prod.atom_only
        zs = np.array([1j, -3 + 2j, 2 + 0.5j, 0.5])
        np.testing.assert_allclose(hadamard_eval_many(f, g, zs), prod.eval_many(zs), atol=1e-12)

    @pytest.mark.parametrize("a, b", [("uniform", "g2"), ("mixed", "power2"), ("tabulated", "atoms")])
    def test_taylor_is_termwise_product(self, a, b):
        f, g = FUNCTIONS[a], FUNCTIONS[b]
        prod = hadamard(f, g)
        fa, ga, pa = taylor(f, 12), taylor(g, 12), taylor(prod, 12)
        for k in range(12):
            assert float(pa[k]) == pytest.approx(float(fa[k]) * float(ga[k]), abs=1e-13)

    def test_product_of_g1_is_g2(self):
        zs = np.array([5j, -4 + 1j, 1 + 0.1j, 0.3])
        np.testing.assert_allclose(hadamard(UNIFORM, UNIFORM).eval_many(zs), g_alpha(2).eval_many(zs), atol=1e-10)

    def test_commutative_and_associative_coefficients(self):
        f, g, h = UNIFORM, FUNCTIONS["g2"], StieltjesFunction(Measure.from_density(DensitySpec.power(Fraction(1, 2))))
        assert taylor(hadamard(f, g), 20) == taylor(hadamard(g, f), 20)
        left = taylor(hadamard(hadamard(f, g), h), 20)
        right = taylor(hadamard(f, hadamard(g, h)), 20)
        assert left.exact and left == right

    def test_nested_compositional_product(self):
        f = HadamardProduct(UNIFORM, UNIFORM)
        g = HadamardProduct(UNIFORM, FUNCTIONS["g2"])
        z = 0.3 + 0.2j
        expected = series_eval(taylor(hadamard(f, g), 80), z)
        assert hadamard_eval(f, g, z) == pytest.approx(expected, abs=1e-10)

    def test_magnitude_ordering_on_imaginary_axis(self):
        ys = np.geomspace(0.05, 20, 15)
        for f, g in [(UNIFORM, FUNCTIONS["g2"]), (FUNCTIONS["mixed"], UNIFORM), (FUNCTIONS["g2"], FUNCTIONS["power2"])]:
            assert np.all(np.abs(f.eval_many(1j * ys)) <= np.abs(hadamard_eval_many(f, g, 1j * ys)) + 1e-12)


class TestSeries:
    def test_geometric(self):
        assert series_eval(MomentSequence([1] * 60), 0.5) == pytest.approx(2.0, abs=1e-12)

    def test_harmonic(self):
        seq = MomentSequence([Fraction(1, k + 1) for k in range(60)])
        assert series_eval(seq, -0.5) == pytest.approx(2 * math.log(1.5), abs=1e-12)

    def test_origin(self):
        assert series_eval(MomentSequence([1, 0.5]), 0) == 1

    def test_budget(self):
        with pytest.raises(InsufficientPrecision):
            series_eval(MomentSequence([1] * 60), 0.5, budget=20)
        value, bound = series_sum(MomentSequence([1] * 60), 0.5, 20)
        assert bound == pytest.approx(0.5**20 / 0.5)

    def test_radius(self):
        with pytest.raises(ValueError):
            series_eval(MomentSequence([1] * 60), 0.6)


class TestQuotient:
    def test_self_quotient(self):
        seq = MomentSequence([Fraction(1, k + 1) for k in range(6)])
        assert quotient_taylor(seq, seq, 6).terms == (1, 0, 0, 0, 0, 0)

    def test_divide_by_one(self):
        ones = MomentSequence([1] * 5)
        assert quotient_taylor(ones, MomentSequence([1, 0, 0, 0, 0]), 5).terms == (1,) * 5

    def test_dilation_quotient_is_cm(self):
        x = Fraction(1, 2)
        num = [Fraction(1, k + 1) for k in range(8)]
        den = [x**k / (k + 1) for k in range(8)]
        q = quotient_taylor(num, den, 8)
        assert q.exact
        assert is_completely_monotone(q, 6).passed

    def test_quotient_times_divisor(self):
        num = [1.0, 0.3, 0.2, 0.1]
        den = [2.0, 0.5, 0.25, 0.125]
        q = quotient_taylor(num, den, 4)
        back = [sum(q[j] * den[n - j] for j in range(n + 1)) for n in range(4)]
        np.testing.assert_allclose(back, num, atol=1e-15)

    def test_zero_leading_coefficient(self):
        with pytest.raises(ZeroDivisionError):
            quotient_taylor([1, 1], [0, 1], 2)
