"""
Claim-level scans.  Each ``verify_*`` returns a VerificationReport whose
margins are signed distances to the claimed inequality.

The slope and dilation claims about densities first run the hypothesis
gate (t sigma'/sigma non-increasing); if that fails the report carries
status ``gate_failed`` and the gate's own violations, never a claim
violation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _config
from .errors import EvaluationError, MomentkitError
from .measures import DensitySpec, Measure
from .moments import MomentSequence, cm_tolerance, is_completely_monotone, moments_of
from .polylog import g_alpha
from .proofcore import counterexample_value, log_slope_decreasing_check
from .reports import GATE_FAILED, Axis, GridSpec, VerificationReport, collect
from .stieltjes import StieltjesFunction, hadamard_eval_many, quotient_taylor

DEFAULT_GAMMAS = (-2.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_Y_GRID = GridSpec.of(y=Axis(0.05, 20.0, 50, "geom"))

THM1_TOL = 1e-9
COR1_TOL = 1e-10
THM3_TOL = 1e-8

# log-space half-steps for the log-log slope, refined twice by Richardson
SLOPE_STEPS = (0.04, 0.02, 0.01)


def _y_values(y_grid: GridSpec | None) -> np.ndarray:
    return DEFAULT_Y_GRID.merged(y_grid).values("y")


def _eval(f: StieltjesFunction, zs: np.ndarray, **context) -> np.ndarray:
    try:
        return f.eval_many(zs)
    except MomentkitError as exc:
        raise EvaluationError(str(exc), context) from exc


def verify_theorem1(
    f: StieltjesFunction,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    y_grid: GridSpec | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """Re f(gamma + i y1) / f(gamma + i y2) >= 1 for all grid pairs y1 <= y2."""
    if any(g > 1 for g in gammas):
        raise ValueError("the half-plane inequality is claimed only for gamma <= 1")
    tol = _config.tolerance(THM1_TOL) if tol is None else tol
    ys = np.sort(_y_values(y_grid))
    i, j = np.triu_indices(ys.size)  # y1 = ys[i] <= y2 = ys[j]
    margins, g_col = [], []
    for gamma in gammas:
        vals = _eval(f, gamma + 1j * ys, gamma=gamma)
        m = (vals[i] / vals[j]).real - 1.0
        m[i == j] = 0.0
        margins.append(m)
        g_col.append(np.full(m.shape, float(gamma)))
    report = collect(
        "thm1",
        np.concatenate(margins),
        {"gamma": np.concatenate(g_col), "y1": np.tile(ys[i], len(gammas)), "y2": np.tile(ys[j], len(gammas))},
        tol,
        y_grid,
    )
    return report


def verify_corollary1(
    f: StieltjesFunction, gamma: float = 1.0, y_grid: GridSpec | None = None, tol: float | None = None
) -> VerificationReport:
    """|f(gamma + i y)| is non-increasing along the grid."""
    if gamma > 1:
        raise ValueError("monotonicity is claimed only for gamma <= 1")
    tol = _config.tolerance(COR1_TOL) if tol is None else tol
    ys = np.sort(_y_values(y_grid))
    mags = np.abs(_eval(f, gamma + 1j * ys, gamma=gamma))
    return collect("cor1", mags[:-1] - mags[1:], {"y": ys[:-1], "y_next": ys[1:]}, tol, y_grid)


def verify_theorem2(
    f: StieltjesFunction, g: StieltjesFunction, y_grid: GridSpec | None = None, tol: float | None = None
) -> VerificationReport:
    """
    Re (f*g)(iy) / f(iy) >= 1 on the grid.

    The magnitude ordering |f(iy)| <= |(f*g)(iy)| is recorded as the
    secondary margin ``eq2_min_margin``; a negative value also counts as a
    violation (parameter ``check='eq2'``).
    """
    tol = _config.tolerance(THM1_TOL) if tol is None else tol
    ys = np.sort(_y_values(y_grid))
    zs = 1j * ys
    fv = _eval(f, zs)
    try:
        hv = hadamard_eval_many(f, g, zs)
    except MomentkitError as exc:
        raise EvaluationError(str(exc), {"claim": "thm2"}) from exc
    ratio_margin = (hv / fv).real - 1.0
    mag_margin = np.abs(hv) - np.abs(fv)
    report = collect(
        "thm2",
        np.concatenate([ratio_margin, mag_margin]),
        {
            "check": np.array(["ratio"] * ys.size + ["eq2"] * ys.size, dtype=object),
            "y": np.concatenate([ys, ys]),
        },
        tol,
        y_grid,
    )
    report.min_margin = float(ratio_margin.min())
    report.secondary["eq2_min_margin"] = float(mag_margin.min())
    return report


def _gate(sigma: DensitySpec, claim_id: str) -> VerificationReport | None:
    gate = log_slope_decreasing_check(sigma)
    if gate.passed:
        return None
    gate.claim_id = claim_id
    gate.status = GATE_FAILED
    gate.notes.append("hypothesis gate failed: t*sigma'(t)/sigma(t) is not non-increasing")
    return gate


def log_slopes(f: StieltjesFunction, ys: np.ndarray, steps: Sequence[float] = SLOPE_STEPS) -> np.ndarray:
    """
    d log|f(iy)| / d log y by centred differences in log y, Richardson-refined.

    The step sequence must halve each time.
    """
    h = np.asarray(steps, dtype=float)
    shifts = np.concatenate([np.exp(h), np.exp(-h)])
    pts = 1j * (ys[:, None] * shifts[None, :])
    logw = np.log(np.abs(f.eval_many(pts.ravel()))).reshape(pts.shape)
    k = h.size
    table = [(logw[:, m] - logw[:, k + m]) / (2.0 * h[m]) for m in range(k)]
    # centred differences have even error expansions: eliminate h^2, h^4, ...
    for level in range(1, k):
        factor = 4.0**level
        table = [(factor * table[m + 1] - table[m]) / (factor - 1.0) for m in range(len(table) - 1)]
    return table[0]


def verify_theorem3(
    sigma: DensitySpec, y_grid: GridSpec | None = None, tol: float | None = None
) -> VerificationReport:
    """y w'(y)/w(y) non-increasing in y for w(y) = |f(iy)|, f built from sigma."""
    gated = _gate(sigma, "thm3")
    if gated is not None:
        return gated
    tol = _config.tolerance(THM3_TOL) if tol is None else tol
    ys = np.sort(_y_values(y_grid))
    f = StieltjesFunction(Measure.from_density(sigma))
    try:
        slopes = log_slopes(f, ys)
    except MomentkitError as exc:
        raise EvaluationError(str(exc), {"claim": "thm3"}) from exc
    report = collect("thm3", slopes[:-1] - slopes[1:], {"y": ys[:-1], "y_next": ys[1:]}, tol, y_grid)
    report.secondary["slope_first"] = float(slopes[0])
    report.secondary["slope_last"] = float(slopes[-1])
    report.notes.append("sigma normalised to unit mass")
    return report


def _cm_report(claim_id: str, seq: MomentSequence, order: int, tol) -> VerificationReport:
    cm = is_completely_monotone(seq, order, tol)
    violations = []
    if cm.first_violation is not None:
        n, k, v = cm.first_violation
        violations.append(({"n": n, "k": k}, float(v)))
    report = VerificationReport(
        claim_id=claim_id,
        grid=None,
        min_margin=float(cm.min_difference),
        violations=violations,
        evaluations=sum(len(seq) - n for n in range(order + 1)),
        tolerance=0.0 if seq.exact else (tol if tol is not None else cm_tolerance(seq, order)),
        param_names=("n", "k"),
    )
    report.notes.append(f"{seq.arithmetic_mode} arithmetic, {len(seq)} quotient terms")
    if not seq.exact and tol is None:
        report.notes.append("float slack 1e-10 * 2**n * max|a_k|; tolerance shows the largest")
    if seq[0] != 1:
        report.status = "violation"
        report.violations.append(({"n": 0, "k": 0}, float(seq[0]) - 1.0))
    return report


def _quotient_length(order: int) -> int:
    return 2 * order + 1


def verify_theorem4(
    sigma: DensitySpec,
    x: float | Fraction,
    order: int = 12,
    arithmetic: str | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """
    Finite-order evidence that f(z)/f(xz) has completely monotone coefficients.

    ``arithmetic`` is "exact", "float" or None (exact whenever the moments
    of sigma are rational).
    """
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    gated = _gate(sigma, "thm4")
    if gated is not None:
        return gated
    count = _quotient_length(order)
    a = moments_of(Measure.from_density(sigma), count)
    exact = a.exact if arithmetic is None else arithmetic == "exact"
    if exact and not a.exact:
        raise ValueError(f"moments of {sigma.describe()} are not rational")
    if exact:
        xr = Fraction(x)
        num = list(a.terms)
        den = [c * xr**k for k, c in enumerate(num)]
    else:
        num = [float(c) for c in a.terms]
        den = [c * float(x) ** k for k, c in enumerate(num)]
    q = quotient_taylor(num, den, count)
    report = _cm_report("thm4", q, order, None if exact else tol)
    report.notes.append(f"x={x}")
    return report


def _polylog_coefficients(alpha, count: int) -> list:
    a = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else alpha
    if isinstance(a, Fraction) and a.denominator == 1:
        return [Fraction(1, (k + 1) ** int(a)) for k in range(count)]
    return [(k + 1) ** -float(alpha) for k in range(count)]


def verify_polylog_quotient(alpha, beta, order: int = 8, tol: float | None = None) -> VerificationReport:
    """Coefficients of g_alpha / g_beta completely monotone up to ``order``."""
    if not 0 <= alpha <= beta:
        raise ValueError("need 0 <= alpha <= beta")
    count = _quotient_length(order)
    q = quotient_taylor(_polylog_coefficients(alpha, count), _polylog_coefficients(beta, count), count)
    report = _cm_report("liquot", q, order, None if q.exact else tol)
    report.notes.append(f"alpha={alpha} beta={beta}")
    return report


def verify_counterexample(eps: float = 0.5, tol: float = 1e-12) -> VerificationReport:
    """
    Reproduce the value 2 eps / (1 + eps^2) of the gamma = 1 + eps example.

    Passes when the computed value matches the formula and lies below 1,
    i.e. when the half-plane inequality indeed fails; margin = 1 - value.
    """
    value = counterexample_value(eps)
    expected = 2 * eps / (1 + eps * eps)
    report = collect("counterexample", np.array([1.0 - value]), {"eps": np.array([eps])}, tol)
    # the margin must be strictly positive for the counterexample to exist
    if not value < 1.0:
        report.status = "violation"
        report.violations.append(({"eps": eps}, 1.0 - value))
    if abs(value - expected) > tol:
        report.status = "violation"
        report.violations.append(({"eps": eps}, -abs(value - expected)))
    report.secondary["value"] = value
    report.secondary["expected"] = expected
    return report

