"""
Probability measures on [0, 1] and their densities.

A :class:`Measure` is a finite set of atoms plus an optional density that
carries the remaining mass.  Densities are always normalised to unit mass;
the measure scales them by ``1 - sum(atom weights)``.

The text format read and written here is::

    measure v1
    atom <t> <w>
    density <family> <params...>

with at most one ``density`` line.  ``density tabulated <path>`` points to a
two-column CSV of (t, sigma(t)) samples, resolved relative to the measure file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .quadrature import exp_sinh, gauss_kronrod, tanh_sinh
from .special import GAMMA_MAX_ARG, gamma_fn

Scalar = float | Fraction

FAMILIES = ("uniform", "power", "log_power", "tabulated")

MASS_TOL = 1e-12


def parse_scalar(text: str) -> Scalar:
    """``"p/q"`` and plain integers become Fractions, decimals stay exact too."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {text!r}")
        return value


def _exact(x) -> bool:
    return isinstance(x, Rational)


# A pole of 1/(1 - t z) closer than this fraction of the window half-width
# to the real t-axis is handled by subtracting sigma at the pole.
WINDOW_RATIO = 0.5

# Empirical constant of the eps / |1 - z| conditioning term in kernel errors.
ROUNDOFF_GAIN = 2.0


def _pole_windows(zs: np.ndarray) -> np.ndarray:
    """Mask of points whose pole 1/z lies almost on the interior of (0, 1)."""
    inv = 1.0 / np.where(zs == 0, 1.0, zs)
    tr = inv.real
    half = 0.5 * np.minimum(tr, 1.0 - tr)
    return (np.abs(zs) > 1.0) & (tr > 0.0) & (tr < 1.0) & (np.abs(inv.imag) < WINDOW_RATIO * half)


def _log_kernel(a: float, b: float, z: complex) -> complex:
    # int_a^b dt / (1 - t z); 1 - t z keeps the sign of its imaginary part on
    # the path, so the principal logarithm is continuous there
    return (np.log(1.0 - a * z) - np.log(1.0 - b * z)) / z


def _pole_splits(zs: np.ndarray) -> list[float]:
    # t in (0, 1) where 1 - t z nearly vanishes, i.e. z close to (1, inf)
    zs = np.asarray(zs, dtype=complex).ravel()
    zs = zs[np.abs(zs) > 1.0]
    if zs.size == 0:
        return []
    inv = 1.0 / zs
    near = (inv.real > 0.0) & (inv.real < 1.0) & (np.abs(inv.imag) < 0.3 * inv.real)
    return sorted(set(np.round(inv.real[near], 12).tolist()))


@dataclass(frozen=True)
class DensitySpec:
    """
    A named density family on (0, 1), normalised to unit mass.

    uniform         sigma(t) = 1
    power(p)        sigma(t) = (p + 1) t**p,                p > -1
    log_power(a)    sigma(t) = log(1/t)**(a - 1) / Gamma(a), 0 < a <= 50
    tabulated       log-linear interpolation of positive samples
    """

    family: str
    param: Scalar | None = None
    table: tuple[tuple[float, float], ...] | None = None
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown density family {self.family!r}")
        if self.family == "power" and not self.param > -1:
            raise ValueError("power density needs p > -1")
        if self.family == "log_power" and not 0 < self.param <= GAMMA_MAX_ARG:
            raise ValueError("log_power density needs 0 < alpha <= 50")
        if self.family == "tabulated":
            if not self.table or len(self.table) < 2:
                raise ValueError("tabulated density needs at least two samples")
            ts = [t for t, _ in self.table]
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ValueError("tabulated grid must be strictly increasing")
            if ts[0] < 0 or ts[-1] > 1:
                raise ValueError("tabulated grid must lie in [0, 1]")
            if any(not v > 0 for _, v in self.table):
                raise ValueError("tabulated values must be positive")

    @classmethod
    def uniform(cls) -> DensitySpec:
        return cls("uniform")

    @classmethod
    def power(cls, p: Scalar) -> DensitySpec:
        return cls("power", p)

    @classmethod
    def log_power(cls, alpha: Scalar) -> DensitySpec:
        return cls("log_power", alpha)

    @classmethod
    def tabulated(cls, ts: Iterable[float], values: Iterable[float], source=None) -> DensitySpec:
        table = tuple((float(t), float(v)) for t, v in zip(ts, values))
        return cls("tabulated", table=table, source=source)

    # -- tabulated internals -------------------------------------------------

    @property
    def _grid(self) -> tuple[np.ndarray, np.ndarray]:
        ts = np.array([t for t, _ in self.table])
        return ts, np.log([v for _, v in self.table])

    def _tabulated_mass(self) -> float:
        ts, logs = self._grid
        vals = np.exp(logs)
        dt, dl = np.diff(ts), np.diff(logs)
        seg = np.where(
            np.abs(dl) > 1e-12,
            dt * np.diff(vals) / np.where(dl == 0, 1.0, dl),
            dt * 0.5 * (vals[:-1] + vals[1:]),
        )
        return float(seg.sum() + vals[0] * ts[0] + vals[-1] * (1.0 - ts[-1]))

    # -- pointwise -----------------------------------------------------------

    def pdf(self, t):
        """Normalised density value(s) at ``t`` in (0, 1)."""
        t = np.asarray(t, dtype=float)
        if self.family == "uniform":
            return np.ones_like(t)
        if self.family == "power":
            p = float(self.param)
            return (p + 1.0) * t**p
        if self.family == "log_power":
            a = float(self.param)
            return (-np.log(t)) ** (a - 1.0) / gamma_fn(a)
        ts, logs = self._grid
        return np.exp(np.interp(t, ts, logs)) / self._tabulated_mass()

    def log_slope(self, t):
        """t * sigma'(t) / sigma(t); finite differences for tabulated data."""
        t = np.asarray(t, dtype=float)
        if self.family == "uniform":
            return np.zeros_like(t)
        if self.family == "power":
            return np.full_like(t, float(self.param))
        if self.family == "log_power":
            return (1.0 - float(self.param)) / np.log(1.0 / t)
        ts, logs = self._grid
        if ts.size < 3:
            raise ValueError("log slope of a tabulated density needs at least 3 samples")
        inner = ts[1:-1] * (logs[2:] - logs[:-2]) / (ts[2:] - ts[:-2])
        return np.interp(t, ts[1:-1], inner)

    def moment(self, k: int) -> Scalar | None:
        """Closed-form k-th moment, exact where possible; None if unavailable."""
        if self.family == "uniform":
            return Fraction(1, k + 1)
        if self.family == "power":
            p = self.param
            if _exact(p):
                return Fraction(p + 1) / (p + 1 + k)
            return (p + 1.0) / (p + 1.0 + k)
        if self.family == "log_power":
            a = self.param
            if _exact(a) and Fraction(a).denominator == 1:
                return Fraction(1, (k + 1) ** int(a))
            return float((k + 1) ** -float(a))
        return None

    # -- integration ---------------------------------------------------------

    def integrate(self, func: Callable, *, tol: float = 1e-13, poles: Sequence[float] = ()):
        """
        Integrate ``func(t) * sigma(t)`` over (0, 1) for a batch integrand.

        ``poles`` are points of (0, 1) near which ``func`` is nearly singular;
        they become subdivision points.  Returns ``(value, error)``.
        """
        if self.family == "uniform" or (self.family == "power" and self.param == 0):
            return gauss_kronrod(func, 0.0, 1.0, tol=tol, breakpoints=poles)
        if self.family == "power" and self.param < 0:
            # s = t**(p+1) maps (p+1) t**p dt to ds and removes the singularity
            e = 1.0 / (float(self.param) + 1.0)
            splits = [p ** (1.0 / e) for p in poles]
            return gauss_kronrod(lambda s: func(s**e), 0.0, 1.0, tol=tol, breakpoints=splits)
        if self.family == "power":
            # the substitution would put a root cusp at 0; tanh-sinh absorbs t**p instead
            pw = float(self.param)

            def weighted_power(t):
                vals = np.asarray(func(t))
                w = (pw + 1.0) * t**pw
                return vals * w.reshape((-1,) + (1,) * (vals.ndim - 1))

            knots = [0.0, *sorted(p for p in poles if 0.0 < p < 1.0), 1.0]
            total, err = 0.0, 0.0
            for lo, hi in zip(knots, knots[1:]):
                part, e = tanh_sinh(weighted_power, lo, hi, tol=tol / (len(knots) - 1))
                total, err = total + part, err + e
            return total, err
        if self.family == "log_power":
            return _integrate_log_power(float(self.param), func, tol, poles)
        ts, logs = self._grid
        norm = self._tabulated_mass()

        def weighted(t):
            vals = np.asarray(func(t))
            w = np.exp(np.interp(t, ts, logs)) / norm
            return vals * w.reshape((-1,) + (1,) * (vals.ndim - 1))

        return gauss_kronrod(weighted, 0.0, 1.0, tol=tol, breakpoints=[*ts, *poles])

    def describe(self) -> str:
        if self.family == "uniform":
            return "uniform"
        if self.family == "tabulated":
            return f"tabulated {self.source or '<inline>'}"
        return f"{self.family} {self.param}"


def _integrate_log_power(alpha: float, func: Callable, tol: float, poles: Sequence[float]):
    # With u = log(1/t) the integral is int_0^inf u^(a-1) e^(-u) func(e^(-u)) du / Gamma(a).
    log_gamma = math.log(gamma_fn(alpha))
    knots = {1.0}
    if alpha > 2.0:
        knots.add(alpha - 1.0)
    knots.update(-math.log(p) for p in poles if 0.0 < p < 1.0)
    knots = sorted(k for k in knots if k > 1e-300)

    def shaped(vals, w):
        vals = np.asarray(vals)
        return vals * w.reshape((-1,) + (1,) * (vals.ndim - 1))

    def head(v):
        # v = u**alpha absorbs the endpoint factor u^(alpha-1)
        u = v ** (1.0 / alpha)
        return shaped(func(np.exp(-u)), np.exp(-u - log_gamma) / alpha)

    def body(u):
        with np.errstate(divide="ignore"):
            w = np.exp((alpha - 1.0) * np.log(u) - u - log_gamma)
        return shaped(func(np.exp(-u)), w)

    pieces = len(knots) + 1
    total, err = tanh_sinh(head, 0.0, knots[0] ** alpha, tol=tol / pieces)
    for lo, hi in zip(knots, knots[1:]):
        part, e = tanh_sinh(body, lo, hi, tol=tol / pieces)
        total, err = total + part, err + e
    part, e = exp_sinh(body, knots[-1], tol=tol / pieces)
    return total + part, err + e


def _windowed_kernel(dens: DensitySpec, z: complex, tol: float) -> tuple[complex, float]:
    """
    int sigma(t) / (1 - t z) dt for z whose pole t_r + i d has tiny d.

    On the window W = [t_r - w, t_r + w] the integrand is split as
    (sigma(t) - sigma(t_r)) / (1 - t z) plus sigma(t_r) / (1 - t z); the
    first part is bounded and the second has a closed form.  Outside W the
    kernel is at distance >= w from its pole.
    """
    tr = (1.0 / z).real
    w = 0.5 * min(tr, 1.0 - tr)
    a, b = tr - w, tr + w

    def outer(t):
        inside = (t > a) & (t < b)
        return np.where(inside, 0.0, 1.0) / (1.0 - t * z)

    out, e_out = dens.integrate(outer, tol=0.5 * tol, poles=[a, b])
    c = float(dens.pdf(tr))
    nodes = [t for t, _ in dens.table if a < t < b] if dens.family == "tabulated" else []
    inner, e_in = gauss_kronrod(
        lambda t: (dens.pdf(t) - c) / (1.0 - t * z), a, b, tol=0.5 * tol, breakpoints=[tr, *nodes]
    )
    total = complex(np.ravel(out)[0]) + complex(np.ravel(inner)[0]) + c * _log_kernel(a, b, z)
    return total, e_out + e_in


@dataclass(frozen=True)
class Measure:
    """
    Probability measure on [0, 1]: atoms ``(t, w)`` plus an optional density.

    Without a density the atom weights must sum to one.  With a density, the
    density carries mass ``1 - sum(w)``.
    """

    atoms: tuple[tuple[Scalar, Scalar], ...] = ()
    density: DensitySpec | None = None

    def __post_init__(self):
        atoms = tuple((_coerce(t), _coerce(w)) for t, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for t, w in atoms:
            if not 0 <= t <= 1:
                raise ValueError(f"atom location {t} outside [0, 1]")
            if w < 0:
                raise ValueError(f"negative atom weight {w}")
        mass = self.atom_mass
        if self.density is None:
            ok = mass == 1 if self.exact else abs(float(mass) - 1.0) <= MASS_TOL
            if not ok:
                raise ValueError(f"atom weights sum to {mass}, expected 1")
        elif float(mass) > 1.0 + MASS_TOL:
            raise ValueError(f"atom weights sum to {mass} > 1")

    @classmethod
    def point(cls, t: Scalar) -> Measure:
        return cls(((t, 1),))

    @classmethod
    def from_density(cls, density: DensitySpec) -> Measure:
        return cls((), density)

    @property
    def exact(self) -> bool:
        return all(_exact(t) and _exact(w) for t, w in self.atoms)

    @property
    def atom_mass(self) -> Scalar:
        return sum((w for _, w in self.atoms), Fraction(0) if self.exact else 0.0)

    @property
    def density_mass(self) -> Scalar:
        if self.density is None:
            return 0
        return 1 - self.atom_mass

    def atom_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ts = np.array([float(t) for t, _ in self.atoms], dtype=float)
        ws = np.array([float(w) for _, w in self.atoms], dtype=float)
        return ts, ws

    def integrate(self, func: Callable, *, tol: float = 1e-13, poles: Sequence[float] = ()):
        """
        Integrate a batch integrand ``func(t)`` against the measure.

        Returns ``(values, error)`` with ``values`` flattened to shape ``(m,)``.
        """
        ts, ws = self.atom_arrays()
        total, err = 0.0, 0.0
        if ts.size:
            total = ws @ np.asarray(func(ts)).reshape(ts.size, -1)
        dm = float(self.density_mass)
        if self.density is not None and dm > 0.0:
            part, err = self.density.integrate(func, tol=tol / dm, poles=poles)
            total = total + dm * part
            err *= dm
        return np.atleast_1d(total), err

    def kernel_integral(self, zs, *, tol: float = 1e-13):
        """int dmu(t) / (1 - t z) for an array of points z; returns ``(values, error)``."""
        zs = np.asarray(zs, dtype=complex)
        flat = zs.ravel()
        ts, ws = self.atom_arrays()
        values = np.zeros(flat.shape, dtype=complex)
        if ts.size:
            values += (ws[:, None] / (1.0 - ts[:, None] * flat[None, :])).sum(axis=0)
        err = 0.0
        dm = float(self.density_mass)
        if self.density is not None and dm > 0.0 and flat.size:
            near = _pole_windows(flat)
            far = flat[~near]
            if far.size:
                part, err = self.density.integrate(
                    lambda t: 1.0 / (1.0 - t[:, None] * far[None, :]),
                    tol=tol / dm,
                    poles=_pole_splits(far),
                )
                values[~near] += dm * np.reshape(part, far.shape)
                err *= dm
            for i in np.flatnonzero(near):
                part, e = _windowed_kernel(self.density, complex(flat[i]), tol / dm)
                values[i] += dm * part
                err = max(err, dm * e)
            # rounding of t and 1 - t z near t = 1 is amplified by 1/|1 - z|
            err += dm * ROUNDOFF_GAIN * np.finfo(float).eps / float(np.min(np.abs(1.0 - flat)))
        return values.reshape(zs.shape), err

    # -- serialisation -------------------------------------------------------

    def to_text(self) -> str:
        lines = ["measure v1"]
        lines += [f"atom {_fmt(t)} {_fmt(w)}" for t, w in self.atoms]
        if self.density is not None:
            lines.append(f"density {self.density.describe()}")
        return "\n".join(lines) + "\n"


def _coerce(x) -> Scalar:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return float(x)


def _fmt(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return format(float(x), ".17g")


def read_tabulated(path: str | Path) -> DensitySpec:
    """Read a two-column CSV (t, sigma) into a tabulated density."""
    ts, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                t, v = float(row[0]), float(row[1])
            except ValueError:
                if not ts:  # header line
                    continue
                raise
            ts.append(t)
            vs.append(v)
    return DensitySpec.tabulated(ts, vs, source=str(path))


def parse_measure(text: str, base_dir: str | Path = ".") -> Measure:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != ["measure", "v1"]:
        raise ValueError("measure file must start with 'measure v1'")
    atoms, density = [], None
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "atom" and len(parts) == 3:
            atoms.append((parse_scalar(parts[1]), parse_scalar(parts[2])))
        elif parts[0] == "density" and len(parts) >= 2:
            if density is not None:
                raise ValueError("at most one density line is allowed")
            family, args = parts[1], parts[2:]
            if family == "uniform" and not args:
                density = DensitySpec.uniform()
            elif family in ("power", "log_power") and len(args) == 1:
                density = DensitySpec(family, parse_scalar(args[0]))
            elif family == "tabulated" and len(args) == 1:
                density = read_tabulated(Path(base_dir) / args[0])
            else:
                raise ValueError(f"malformed density line: {ln!r}")
        else:
            raise ValueError(f"unrecognised measure line: {ln!r}")
    return Measure(tuple(atoms), density)


def read_measure(path: str | Path) -> Measure:
    path = Path(path)
    return parse_measure(path.read_text(), base_dir=path.parent)


def write_measure(mu: Measure, path: str | Path) -> None:
    Path(path).write_text(mu.to_text())
