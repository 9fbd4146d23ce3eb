from fractions import Fraction

import numpy as np
import pytest

from momentkit import verify as V
from momentkit.measures import DensitySpec, Measure
from momentkit.polylog import g_alpha, li_many
from momentkit.reports import GATE_FAILED, PASS, VIOLATION, Axis, GridSpec, VerificationReport, collect
from momentkit.stieltjes import StieltjesFunction

ONE = StieltjesFunction(Measure.point(0))
GEOMETRIC = StieltjesFunction(Measure.point(1))
SHORT = GridSpec.of(y=Axis(0.1, 10.0, 12, "geom"))


class TestGrid:
    def test_parse_and_serialize(self):
        grid = GridSpec.parse(["y=0.05:20:50:geom", "t=0:1:3"])
        assert grid.serialize() == ["y=0.05:20:50:geom", "t=0:1:3"]
        np.testing.assert_allclose(grid.values("t"), [0, 0.5, 1])
        assert grid.values("y")[0] == pytest.approx(0.05)

    @pytest.mark.parametrize("item", ["y=1:0:5", "y=0:1:1", "y=0:1:5:geom", "y0:1:5", "y=0:1", "y=0:1:5:log"])
    def test_invalid(self, item):
        with pytest.raises(ValueError):
            GridSpec.parse([item])

    def test_merge(self):
        merged = V.DEFAULT_Y_GRID.merged(GridSpec.parse(["y=1:2:3"]))
        assert merged["y"] == Axis(1, 2, 3)


class TestReport:
    def test_invariant(self):
        report = collect("demo", np.array([0.5, -1e-12, -0.1]), {"a": np.array([1, 2, 3])}, 1e-9)
        assert not report.passed and report.status == VIOLATION
        assert report.violations == [({"a": 3}, -0.1)]
        assert report.min_margin == pytest.approx(-0.1)
        assert report.exit_code == 1

    def test_csv(self):
        report = collect("demo", np.array([-0.25]), {"a": np.array([0.1])}, 1e-9)
        assert report.csv_text() == "claim_id,a,margin\ndemo,0.10000000000000001,-0.25\n"

    def test_nan_is_an_error(self):
        with pytest.raises(ArithmeticError):
            collect("demo", np.array([np.nan]), {}, 1e-9)

    def test_exit_codes(self):
        r = VerificationReport("x", None, 0.0, [], 1, 0.0)
        assert (r.status, r.exit_code) == (PASS, 0)
        r.status = GATE_FAILED
        assert r.exit_code == 2


class TestHalfPlaneRatio:
    def test_constant_function(self):
        report = V.verify_theorem1(ONE)
        assert report.passed and report.min_margin == 0

    @pytest.mark.parametrize("f", [g_alpha(2), g_alpha(1), GEOMETRIC], ids=["g2", "g1", "geometric"])
    def test_passes(self, f):
        report = V.verify_theorem1(f, (-2, 0, 1), GridSpec.of(y=Axis(0.1, 10, 50, "geom")))
        assert report.passed and report.evaluations == 3 * 50 * 51 // 2

    def test_rejects_gamma_above_one(self):
        with pytest.raises(ValueError):
            V.verify_theorem1(g_alpha(2), (1.5,))

    def test_reproducible(self):
        a = V.verify_theorem1(g_alpha(2), (0.5,), SHORT)
        b = V.verify_theorem1(g_alpha(2), (0.5,), SHORT)
        assert a.summary() == b.summary() and a.csv_text() == b.csv_text()


class TestMagnitudeMonotone:
    def test_constant(self):
        assert V.verify_corollary1(ONE, 0.0).min_margin == 0

    def test_geometric(self):
        report = V.verify_corollary1(GEOMETRIC, 0.0)
        ys = np.geomspace(0.05, 20, 50)
        mags = 1 / np.sqrt(1 + ys**2)
        np.testing.assert_allclose(report.min_margin, np.min(mags[:-1] - mags[1:]), rtol=1e-12)
        assert report.min_margin > 0

    def test_g1_at_one(self):
        assert V.verify_corollary1(g_alpha(1), 1.0).passed

    def test_rejects_gamma_above_one(self):
        with pytest.raises(ValueError):
            V.verify_corollary1(g_alpha(1), 1.01)


class TestHadamardRatio:
    def test_identity_element(self):
        report = V.verify_theorem2(g_alpha(2), GEOMETRIC, SHORT)
        assert report.passed
        assert abs(report.min_margin) <= 1e-12

    def test_point_masses(self):
        half = StieltjesFunction(Measure.point(Fraction(1, 2)))
        report = V.verify_theorem2(half, half, SHORT)
        ys = SHORT.values("y")
        ratio = (1 / (1 - 0.25j * ys)) / (1 / (1 - 0.5j * ys))
        assert report.passed
        assert report.min_margin == pytest.approx(np.min(ratio.real - 1), abs=1e-14)

    def test_g1_with_itself(self):
        report = V.verify_theorem2(g_alpha(1), g_alpha(1))
        assert report.passed and report.secondary["eq2_min_margin"] >= 0
        ys = V.DEFAULT_Y_GRID.values("y")
        li1, _ = li_many(1, 1j * ys)
        li2, _ = li_many(2, 1j * ys)
        assert np.all(np.abs(li1) <= np.abs(li2))


class TestLogLogSlope:
    @pytest.mark.parametrize("dens", [DensitySpec.uniform(), DensitySpec.log_power(2)])
    def test_passes(self, dens):
        report = V.verify_theorem3(dens)
        assert report.passed and report.evaluations == 49

    def test_two_point_grid(self):
        assert V.verify_theorem3(DensitySpec.uniform(), GridSpec.of(y=Axis(1, 2, 2, "geom"))).passed

    def test_gate(self):
        ts = np.linspace(0.05, 0.95, 10)
        report = V.verify_theorem3(DensitySpec.tabulated(ts, 1 + ts**2))
        assert report.status == GATE_FAILED and report.exit_code == 2
        assert report.claim_id == "thm3"

    def test_slopes_of_geometric_function(self):
        ys = np.geomspace(0.1, 10, 7)
        slopes = V.log_slopes(GEOMETRIC, ys)
        np.testing.assert_allclose(slopes, -(ys**2) / (1 + ys**2), atol=1e-9)


class TestDilationQuotient:
    def test_uniform_exact(self):
        report = V.verify_theorem4(DensitySpec.uniform(), Fraction(1, 2), 6)
        assert report.passed and report.tolerance == 0
        assert "exact" in report.notes[0]

    def test_log_power_float(self):
        report = V.verify_theorem4(DensitySpec.log_power(2), 0.5, 10, arithmetic="float")
        assert report.passed and report.tolerance > 0

    def test_x_one(self):
        report = V.verify_theorem4(DensitySpec.uniform(), 1, 6)
        assert report.passed and report.min_margin == 0

    def test_gate(self):
        assert V.verify_theorem4(DensitySpec.log_power(0.5), 0.5, 6).status == GATE_FAILED

    def test_domain(self):
        with pytest.raises(ValueError):
            V.verify_theorem4(DensitySpec.uniform(), 0, 6)


class TestPolylogQuotient:
    def test_equal_orders(self):
        report = V.verify_polylog_quotient(2, 2, 6)
        assert report.passed and report.min_margin == 0

    @pytest.mark.parametrize("alpha, beta", [(0, 1), (1, 2), (0, 3)])
    def test_passes(self, alpha, beta):
        assert V.verify_polylog_quotient(alpha, beta, 8).passed

    def test_float_orders(self):
        assert V.verify_polylog_quotient(0.5, 1.5, 6).passed

    def test_order(self):
        with pytest.raises(ValueError):
            V.verify_polylog_quotient(2, 1)


class TestCounterexample:
    def test_value(self):
        report = V.verify_counterexample(0.5)
        assert report.passed and report.secondary["value"] == pytest.approx(0.8)

    def test_boundary_eps_is_not_a_counterexample(self):
        assert not V.verify_counterexample(1.0).passed
