"""
Closed-form expressions behind the half-plane inequality and its relatives.

The central object is the ratio of two-atom generating functions

    q(kappa, y, tau, t1, t2) =
        (1/(1 - t1 - i tau y t1) + kappa/(1 - t2 - i tau y t2))
        / (1/(1 - t1 - i y t1)   + kappa/(1 - t2 - i y t2)),

which traces a circular arc from v(t1) (kappa = 0) to v(t2) (kappa -> inf),

    v(t) = (1 - t - i y t) / (1 - t - i tau y t).

The real part of its kappa-derivative at 0 factors as
(1 - tau)(t2 - t1) y^2 Z / N with Z, N given below.  Everything here is plain
complex arithmetic, usable with numpy arrays as well as scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _config
from .errors import DegeneratePoint
from .measures import DensitySpec, Measure, Scalar
from .reports import Axis, GridSpec, VerificationReport, collect
from .stieltjes import StieltjesFunction

CLAIM_TOL = 1e-9

DEFAULT_RANGE_GRID = GridSpec.of(
    rho=Axis(0.0, 1.0, 20), t1=Axis(0.0, 1.0, 20), t2=Axis(0.0, 1.0, 20)
)
DEFAULT_T_GRID = GridSpec.of(t=Axis(0.01, 0.99, 20))


@dataclass(frozen=True)
class ProofPoint:
    kappa: float
    y: float
    tau: float
    t1: float
    t2: float

    def __post_init__(self):
        if not self.kappa >= 0:
            raise ValueError("kappa must be >= 0")
        if not self.y > 0:
            raise ValueError("y must be > 0")
        for name in ("tau", "t1", "t2"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.t1 > self.t2:
            t1, t2 = self.t2, self.t1
            object.__setattr__(self, "t1", t1)
            object.__setattr__(self, "t2", t2)


def _recip(d, what: str):
    if np.any(d == 0):
        raise DegeneratePoint(f"vanishing denominator in {what}")
    return 1.0 / d


def _coefficients(p: ProofPoint):
    a = _recip(1 - p.t1 - 1j * p.tau * p.y * p.t1, "q numerator")
    b = _recip(1 - p.t2 - 1j * p.tau * p.y * p.t2, "q numerator")
    c = 1.0 / (1 - p.t1 - 1j * p.y * p.t1)
    d = 1.0 / (1 - p.t2 - 1j * p.y * p.t2)
    return a, b, c, d


def q_value(p: ProofPoint) -> complex:
    a, b, c, d = _coefficients(p)
    return complex((a + p.kappa * b) / (c + p.kappa * d))


def q_at_infinity(p: ProofPoint) -> complex:
    """Limit of q as kappa -> inf: the ratio of the kappa-coefficients."""
    _, b, _, d = _coefficients(p)
    return complex(b / d)


def v_value(t: float, y: float, tau: float) -> complex:
    den = 1 - t - 1j * tau * y * t
    if den == 0:
        raise DegeneratePoint(f"v(t) undefined at t={t}, tau={tau}")
    return complex((1 - t - 1j * y * t) / den)


def z_term(y, tau, t1, t2):
    s1, s2 = 1 - t1, 1 - t2
    return (
        s1 * s2 * (t2 - t1)
        + (t1 * s2 + t2 * s1) * s1 * s2 * tau
        + t1 * t2 * y**2 * tau * (t1 * s2 + t2 * s1 - tau * (t2 - t1))
    )


def n_term(y, tau, t1, t2):
    return (
        ((1 - t1) ** 2 + (t1 * y * tau) ** 2)
        * ((1 - t2) ** 2 + (t2 * y * tau) ** 2)
        * ((1 - t2) ** 2 + (t2 * y) ** 2)
    )


def re_w_prime_zero(p: ProofPoint) -> float:
    """Re dq/dkappa at kappa = 0 via the factored form (1-tau)(t2-t1) y^2 Z/N."""
    n = n_term(p.y, p.tau, p.t1, p.t2)
    if n == 0:
        raise DegeneratePoint("N vanishes")
    z = z_term(p.y, p.tau, p.t1, p.t2)
    return float((1 - p.tau) * (p.t2 - p.t1) * p.y**2 * z / n)


def s_tau(p: ProofPoint) -> float:
    return float(p.t1 * (1 - p.t2) + p.t2 * (1 - p.t1) - p.tau * (p.t2 - p.t1))


def two_atom_function(rho: Scalar, t1: Scalar, t2: Scalar) -> StieltjesFunction:
    """rho/(1 - t1 z) + (1 - rho)/(1 - t2 z) as a measure-backed function."""
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    atoms: dict = {}
    for t, w in ((t1, rho), (t2, 1 - rho)):
        if w:
            atoms[t] = atoms.get(t, 0) + w
    return StieltjesFunction(Measure(tuple(atoms.items())))


def two_atom_values(rho, t1, t2, z):
    return rho / (1 - t1 * z) + (1 - rho) / (1 - t2 * z)


def extreme_range_scan(
    y1: float,
    y2: float,
    gamma: float,
    grid: GridSpec | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """
    Sweep two-atom functions over (rho, t1, t2) and record
    Re f(gamma + i y1) / f(gamma + i y2) - 1.

    Two-atom functions exhaust the range of such ratios over the whole class,
    so a sufficiently fine sweep stands in for all of T.
    """
    if not 0 < y1 <= y2:
        raise ValueError("need 0 < y1 <= y2")
    tol = _config.tolerance(CLAIM_TOL) if tol is None else tol
    grid = DEFAULT_RANGE_GRID.merged(grid)
    rho, t1, t2 = np.meshgrid(grid.values("rho"), grid.values("t1"), grid.values("t2"), indexing="ij")
    num = two_atom_values(rho, t1, t2, complex(gamma, y1))
    den = two_atom_values(rho, t1, t2, complex(gamma, y2))
    margins = (num / den).real - 1.0
    if y1 == y2:
        margins = np.zeros_like(margins)
    report = collect("lemma1-range", margins, {"rho": rho, "t1": t1, "t2": t2}, tol, grid)
    report.notes.append(f"gamma={gamma:g} y1={y1:g} y2={y2:g}")
    return report


def counterexample_value(eps: float) -> float:
    """
    Re f(1+eps+i eps) / f(1+eps+i) for f = 1/(1+2eps) + 2eps/((1+2eps)(1-z)).

    Equals 2 eps / (1 + eps^2), which is below 1 for every eps != 1.
    """
    if not eps > 0:
        raise ValueError("eps must be > 0")
    w0 = 1.0 / (1.0 + 2.0 * eps)

    def f(z):
        return w0 + (1.0 - w0) / (1.0 - z)

    gamma = 1.0 + eps
    return (f(complex(gamma, eps)) / f(complex(gamma, 1.0))).real


def counterexample_function(eps: float) -> StieltjesFunction:
    w0 = 1.0 / (1.0 + 2.0 * eps)
    return two_atom_function(w0, 0.0, 1.0)


Density = DensitySpec | Callable[[np.ndarray], np.ndarray]


def _pdf(sigma: Density) -> Callable:
    return sigma.pdf if isinstance(sigma, DensitySpec) else sigma


def sigma_star(sigma: Density, x: float, t):
    """sigma(t/x)/x on (0, x], zero on (x, 1): the density of f(xz)."""
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    t = np.asarray(t, dtype=float)
    inside = t <= x
    out = np.zeros_like(t)
    out[inside] = _pdf(sigma)(t[inside] / x) / x
    return out if out.ndim else float(out)


def sigma_star_fn(sigma: Density, x: float) -> Callable:
    return lambda t: sigma_star(sigma, x, t)


def lemma2_check(
    phi: Density, psi: Density, grid: GridSpec | None = None, tol: float | None = None
) -> VerificationReport:
    """phi(t) psi(s) - phi(s) psi(t) >= -tol for every grid pair s < t."""
    tol = _config.tolerance(CLAIM_TOL) if tol is None else tol
    grid = DEFAULT_T_GRID.merged(grid)
    ts = grid.values("t")
    ph, ps = np.asarray(_pdf(phi)(ts), float), np.asarray(_pdf(psi)(ts), float)
    i, j = np.triu_indices(ts.size, k=1)  # s = ts[i] < t = ts[j]
    margins = ph[j] * ps[i] - ph[i] * ps[j]
    return collect("lemma2", margins, {"s": ts[i], "t": ts[j]}, tol, grid)


def log_slope_decreasing_check(
    sigma: DensitySpec, grid: GridSpec | None = None, tol: float | None = None
) -> VerificationReport:
    """
    Sample h(t) = t sigma'(t)/sigma(t) and require it to be non-increasing.

    Tabulated densities default to their interior sample nodes.
    """
    tol = _config.tolerance(CLAIM_TOL) if tol is None else tol
    if sigma.family == "tabulated" and grid is None:
        ts_all = np.array([t for t, _ in sigma.table])
        if ts_all.size < 3:
            raise ValueError("log slope of a tabulated density needs at least 3 samples")
        ts = ts_all[1:-1]
        if ts.size < 2:
            ts = np.array([ts_all[0] / 2 + ts_all[1] / 2, ts_all[1] / 2 + ts_all[2] / 2])
    else:
        grid = DEFAULT_T_GRID.merged(grid)
        ts = grid.values("t")
    h = np.asarray(sigma.log_slope(ts), dtype=float)
    margins = h[:-1] - h[1:]
    report = collect("log-slope", margins, {"t": ts[:-1], "t_next": ts[1:]}, tol, grid)
    report.notes.append(f"density {sigma.describe()}")
    return report
