"""
Generating functions F(z) = int_0^1 dmu(t) / (1 - t z) on the slit plane.

Evaluation is vectorised: :meth:`StieltjesFunction.eval_many` prices a whole
array of points with one adaptive quadrature.  Hadamard products of
measure-backed functions are represented compositionally and evaluated
through

    (f * g)(z) = int_0^1 f(t z) dnu(t),     nu the measure behind g,

which stays valid on all of the slit plane, unlike the coefficient series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InsufficientPrecision, QuadratureError, SlitViolation
from .measures import Measure, _pole_splits
from .moments import MomentSequence, moments_of

SLIT_GUARD = 1e-8
EVAL_TOL = 1e-12
HADAMARD_TOL = 1e-10
SERIES_TOL = 1e-12


@dataclass(frozen=True)
class SlitPoint:
    """A point of C minus [1, inf), at least SLIT_GUARD away from the cut."""

    re: float
    im: float

    def __post_init__(self):
        d = slit_distance(complex(self.re, self.im))
        if d < SLIT_GUARD:
            raise SlitViolation(complex(self.re, self.im), d, SLIT_GUARD)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return self.z

    @classmethod
    def of(cls, z) -> SlitPoint:
        if isinstance(z, SlitPoint):
            return z
        z = complex(z)
        return cls(z.real, z.imag)


def slit_distance(z):
    """Euclidean distance from z (scalar or array) to the ray [1, inf)."""
    z = np.asarray(z, dtype=complex)
    d = np.where(z.real >= 1.0, np.abs(z.imag), np.abs(z - 1.0))
    return float(d) if d.ndim == 0 else d


def _guarded(zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    d = slit_distance(zs)
    bad = np.flatnonzero(np.atleast_1d(d) < SLIT_GUARD)
    if bad.size:
        z = zs.ravel()[bad[0]]
        raise SlitViolation(complex(z), float(np.atleast_1d(d)[bad[0]]), SLIT_GUARD)
    return zs


class StieltjesFunction:
    """
    Element of the class T backed by a probability measure on [0, 1].

    Calling the object evaluates it at a single point; ``eval_many`` takes
    arrays.  Taylor coefficients are the moments of the measure.
    """

    def __init__(self, measure: Measure | None):
        self.measure = measure
        self._taylor: MomentSequence | None = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.measure!r})"

    def __call__(self, z) -> complex:
        return evaluate(self, z)

    def eval_many(self, zs, *, tol: float = EVAL_TOL, guard: bool = True, return_error: bool = False):
        zs = _guarded(zs) if guard else np.asarray(zs, dtype=complex)
        values, err = self._eval_unchecked(zs, tol)
        if err > tol:
            raise QuadratureError("evaluation missed its accuracy target", err)
        return (values, err) if return_error else values

    def _eval_unchecked(self, zs: np.ndarray, tol: float):
        try:
            return self.measure.kernel_integral(zs, tol=0.1 * tol)
        except QuadratureError:
            # close to the cut the roundoff floor can sit between tol/10 and tol
            return self.measure.kernel_integral(zs, tol=tol)

    def taylor(self, count: int) -> MomentSequence:
        cached = self._taylor
        if cached is not None and len(cached) >= count:
            return MomentSequence(cached.terms[:count])
        seq = self._compute_taylor(count)
        self._taylor = seq
        return seq

    def _compute_taylor(self, count: int) -> MomentSequence:
        return moments_of(self.measure, count)

    @property
    def atom_only(self) -> bool:
        return self.measure is not None and self.measure.density is None


class HadamardProduct(StieltjesFunction):
    """Compositional f * g, used whenever the product measure is not atomic."""

    def __init__(self, f: StieltjesFunction, g: StieltjesFunction):
        super().__init__(None)
        self.f, self.g = f, g

    def __repr__(self) -> str:
        return f"HadamardProduct({self.f!r}, {self.g!r})"

    def _eval_unchecked(self, zs, tol):
        return _hadamard_unchecked(self.f, self.g, zs, tol)

    def _compute_taylor(self, count):
        a, b = self.f.taylor(count), self.g.taylor(count)
        return MomentSequence([x * y for x, y in zip(a, b)])


def evaluate(f: StieltjesFunction, z) -> complex:
    """F(z) for a single point of the slit plane, absolute error <= 1e-12."""
    z = SlitPoint.of(z).z
    if z == 0:
        return 1.0 + 0.0j
    return complex(f.eval_many(np.array([z]), guard=False)[0])


def taylor(f: StieltjesFunction, count: int) -> MomentSequence:
    return f.taylor(count)


def hadamard(f: StieltjesFunction, g: StieltjesFunction) -> StieltjesFunction:
    """
    Termwise product of Taylor coefficients.

    Two atomic measures give the exact pushforward of the product measure
    under (s, t) -> s t; every other combination is compositional.
    """
    if f.atom_only and g.atom_only:
        weights: dict = {}
        for s, v in f.measure.atoms:
            for t, w in g.measure.atoms:
                weights[s * t] = weights.get(s * t, 0) + v * w
        return StieltjesFunction(Measure(tuple(sorted(weights.items()))))
    return HadamardProduct(f, g)


def _hadamard_unchecked(f, g, zs, tol):
    zs = np.asarray(zs, dtype=complex)
    if g.measure is None:
        if f.measure is not None:
            f, g = g, f
        else:
            # f * (g1 * g2) = (f * g1) * g2
            return _hadamard_unchecked(HadamardProduct(f, g.f), g.g, zs, tol)
    flat = zs.ravel()
    inner_tol = 0.1 * tol

    def integrand(t):
        pts = t[:, None] * flat[None, :]
        vals, err = f._eval_unchecked(pts.ravel(), inner_tol)
        if err > inner_tol:
            raise QuadratureError("inner evaluation of a Hadamard product failed", err)
        return vals.reshape(pts.shape)

    values, err = g.measure.integrate(integrand, tol=0.5 * tol, poles=_pole_splits(flat))
    return values.reshape(zs.shape), err + inner_tol


def hadamard_eval(f: StieltjesFunction, g: StieltjesFunction, z) -> complex:
    """(f * g)(z) = int f(t z) dnu(t) with nu the measure behind g; error <= 1e-10."""
    z = SlitPoint.of(z).z
    values, err = _hadamard_unchecked(f, g, np.array([z]), HADAMARD_TOL)
    if err > HADAMARD_TOL:
        raise QuadratureError("Hadamard evaluation missed its accuracy target", err)
    return complex(values[0])


def hadamard_eval_many(f: StieltjesFunction, g: StieltjesFunction, zs) -> np.ndarray:
    zs = _guarded(zs)
    values, err = _hadamard_unchecked(f, g, zs, HADAMARD_TOL)
    if err > HADAMARD_TOL:
        raise QuadratureError("Hadamard evaluation missed its accuracy target", err)
    return values


def series_sum(seq: MomentSequence | Sequence, z: complex, budget: int) -> tuple[complex, float]:
    """
    Partial sum of sum a_k z^k with a certified tail bound.

    The bound a_(N-1) |z|^N / (1 - |z|) uses that completely monotone
    sequences are non-increasing.  Returns ``(value, bound)``.
    """
    z = complex(z)
    r = abs(z)
    if r > 0.5:
        raise ValueError("series evaluation is restricted to |z| <= 0.5")
    terms = seq.terms if isinstance(seq, MomentSequence) else tuple(seq)
    n = min(budget, len(terms))
    if n < 1:
        raise ValueError("budget must be >= 1")
    coeffs = np.array([float(a) for a in terms[:n]])
    if r == 0.0:
        return complex(coeffs[0]), 0.0
    # Horner, highest power first
    acc = 0j
    for a in coeffs[::-1]:
        acc = acc * z + a
    bound = abs(coeffs[-1]) * r**n / (1.0 - r)
    return acc, bound


def series_eval(seq: MomentSequence | Sequence, z: complex, budget: int = 200) -> complex:
    value, bound = series_sum(seq, z, budget)
    if bound > SERIES_TOL:
        raise InsufficientPrecision(
            f"{min(budget, len(seq))} terms cannot reach {SERIES_TOL:.0e} at |z|={abs(z):.3g}", bound
        )
    return value


def quotient_taylor(num: MomentSequence | Sequence, den: MomentSequence | Sequence, count: int) -> MomentSequence:
    """
    Power-series long division num / den to ``count`` coefficients.

    Exact when both inputs are rational.  The result is not required to be
    normalised or non-negative.
    """
    a = num.terms if isinstance(num, MomentSequence) else tuple(num)
    b = den.terms if isinstance(den, MomentSequence) else tuple(den)
    if len(a) < count or len(b) < count:
        raise ValueError(f"need {count} terms of both series")
    if b[0] == 0:
        raise ZeroDivisionError("leading coefficient of the divisor is zero")
    exact = all(isinstance(x, (int, Fraction)) for x in (*a[:count], *b[:count]))
    if exact:
        a = [Fraction(x) for x in a[:count]]
        b = [Fraction(x) for x in b[:count]]
    else:
        a = [float(x) for x in a[:count]]
        b = [float(x) for x in b[:count]]
    out: list = []
    for n in range(count):
        acc = a[n]
        for j in range(1, n + 1):
            acc -= b[j] * out[n - j]
        out.append(acc / b[0])
    return MomentSequence(out, normalized=False)
