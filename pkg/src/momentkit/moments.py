"""
Moment sequences and Hausdorff's complete-monotonicity criterion.

Sequences made of rationals stay exact (``fractions.Fraction``) so that the
forward-difference table, which amplifies rounding by up to 2**n, can be
checked without any tolerance.  Float sequences use the order-dependent
slack ``1e-10 * 2**n * max|a_k|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import QuadratureError
from .measures import Measure, Scalar

DEFAULT_COUNT = 40
DEFAULT_ORDER = 20
FLOAT_CM_SLACK = 1e-10
MOMENT_TOL = 1e-12


@dataclass(frozen=True)
class MomentSequence:
    """
    Finite prefix of a candidate Hausdorff moment sequence.

    With ``normalized=True`` (the default) construction enforces a_0 = 1 and
    a_k >= 0.  Quotient series and other intermediate sequences pass False.
    """

    terms: tuple
    normalized: bool = True

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a moment sequence needs at least one term")
        if all(isinstance(a, Rational) for a in terms):
            terms = tuple(Fraction(a) for a in terms)
        else:
            terms = tuple(float(a) for a in terms)
        object.__setattr__(self, "terms", terms)
        if self.normalized:
            if self.exact:
                if terms[0] != 1:
                    raise ValueError(f"a_0 must be 1, got {terms[0]}")
            elif abs(terms[0] - 1.0) > MOMENT_TOL:
                raise ValueError(f"a_0 must be 1, got {terms[0]!r}")
            if any(a < 0 for a in terms):
                raise ValueError("moment sequences are non-negative")

    @property
    def exact(self) -> bool:
        return isinstance(self.terms[0], Fraction)

    @property
    def arithmetic_mode(self) -> str:
        return "exact" if self.exact else "float"

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, k):
        return self.terms[k]

    def __iter__(self):
        return iter(self.terms)

    def as_float(self) -> np.ndarray:
        return np.array([float(a) for a in self.terms])


@dataclass(frozen=True)
class CMReport:
    max_order_checked: int
    max_index_checked: int
    min_difference: Scalar
    first_violation: tuple[int, int, Scalar] | None
    passed: bool

    def summary(self) -> str:
        head = "pass" if self.passed else "FAIL"
        line = (
            f"{head}: orders 0..{self.max_order_checked}, indices 0..{self.max_index_checked}, "
            f"min difference {float(self.min_difference):.6g}"
        )
        if self.first_violation is not None:
            n, k, v = self.first_violation
            line += f"; first violation at n={n}, k={k}: {float(v):.6g}"
        return line


def forward_difference(seq: MomentSequence, n: int, k: int) -> Scalar:
    """Delta^n a_k by the recursion Delta^n a_k = Delta^(n-1) a_k - Delta^(n-1) a_(k+1)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k + n >= len(seq):
        raise IndexError(f"Delta^{n} a_{k} needs a_{k + n}, sequence has {len(seq)} terms")
    row = list(seq.terms[k : k + n + 1])
    for _ in range(n):
        row = [row[i] - row[i + 1] for i in range(len(row) - 1)]
    return row[0]


def difference_table(seq: MomentSequence, max_order: int) -> list[list[Scalar]]:
    """Rows 0..max_order of the triangular table; row n holds Delta^n a_k."""
    rows = [list(seq.terms)]
    for _ in range(max_order):
        prev = rows[-1]
        rows.append([prev[i] - prev[i + 1] for i in range(len(prev) - 1)])
    return rows


def cm_tolerance(seq: MomentSequence, n: int) -> float:
    return FLOAT_CM_SLACK * 2.0**n * max(abs(float(a)) for a in seq.terms)


def is_completely_monotone(
    seq: MomentSequence, max_order: int = DEFAULT_ORDER, tolerance: float | None = None
) -> CMReport:
    """
    Check Delta^n a_k >= -tolerance for n <= max_order and k + n < len(seq).

    In exact mode the tolerance must be zero (or None).  In float mode None
    selects the order-dependent slack; an explicit value applies uniformly.
    """
    if not 0 <= max_order < len(seq):
        raise ValueError(f"max_order must lie in [0, {len(seq) - 1}]")
    if seq.exact and tolerance not in (None, 0):
        raise ValueError("exact sequences are checked with zero tolerance")
    min_diff = None
    violation = None
    for n, row in enumerate(difference_table(seq, max_order)):
        if seq.exact:
            tol = 0
        else:
            tol = cm_tolerance(seq, n) if tolerance is None else tolerance
        for k, d in enumerate(row):
            if min_diff is None or d < min_diff:
                min_diff = d
            if violation is None and d < -tol:
                violation = (n, k, d)
    return CMReport(
        max_order_checked=max_order,
        max_index_checked=len(seq) - 1,
        min_difference=min_diff,
        first_violation=violation,
        passed=violation is None,
    )


def moments_of(mu: Measure, count: int = DEFAULT_COUNT, method: str = "auto") -> MomentSequence:
    """
    The first ``count`` moments int t^k dmu(t).

    Atoms are summed directly (exactly for rational atoms).  Density parts use
    closed forms when the family has them; ``method="quadrature"`` forces
    numerical integration of the density part instead.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    ks = range(count)
    exact = mu.exact
    if exact:
        atom_part = [sum((w * t**k for t, w in mu.atoms), Fraction(0)) for k in ks]
    else:
        ts, ws = mu.atom_arrays()
        atom_part = [float(ws @ ts**k) for k in ks]
    dens = mu.density
    if dens is None or mu.density_mass == 0:
        return MomentSequence(atom_part)
    closed = [dens.moment(k) for k in ks] if method == "auto" else [None]
    if all(c is not None for c in closed):
        dens_part = closed
    else:
        dens_part = list(_quadrature_moments(dens, count))
    if exact and all(isinstance(c, Fraction) for c in dens_part):
        dm = mu.density_mass
        return MomentSequence([a + dm * c for a, c in zip(atom_part, dens_part)])
    dm = float(mu.density_mass)
    return MomentSequence([float(a) + dm * float(c) for a, c in zip(atom_part, dens_part)])


def _quadrature_moments(dens, count: int) -> np.ndarray:
    powers = np.arange(count)
    values, err = dens.integrate(lambda t: t[:, None] ** powers[None, :], tol=1e-14)
    if err > MOMENT_TOL:
        raise QuadratureError("moment quadrature missed its target", err)
    return values


# -- plain-text sequence files -------------------------------------------------


def format_sequence(seq: MomentSequence | Iterable[Scalar]) -> str:
    terms = seq.terms if isinstance(seq, MomentSequence) else tuple(seq)
    out = []
    for a in terms:
        out.append(str(a) if isinstance(a, Fraction) else format(float(a), ".17g"))
    return "\n".join(out) + "\n"


def parse_sequence(text: str, normalized: bool = True) -> MomentSequence:
    terms: list = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if any(c in line for c in ".eEn"):
                value = float(line)
                if not math.isfinite(value):
                    raise ValueError
                terms.append(value)
            else:
                terms.append(Fraction(line))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"line {lineno}: cannot parse {line!r} as a scalar") from None
    return MomentSequence(terms, normalized=normalized)


def read_sequence(path: str | Path, normalized: bool = True) -> MomentSequence:
    return parse_sequence(Path(path).read_text(), normalized=normalized)


def write_sequence(seq: MomentSequence | Sequence[Scalar], path: str | Path) -> None:
    Path(path).write_text(format_sequence(seq), newline="\n")
