"""
Polylogarithms Li_a(z) = sum_{k>=1} z^k / k^a of real order a in [0, 50].

Small arguments (|z| <= 0.5) use the defining series with a certified tail;
elsewhere Li_a(z) = z g_a(z), where g_a is the Stieltjes function of the
density log(1/t)**(a-1) / Gamma(a).  Since log(1/t) > 0 on (0, 1) only real
powers are involved.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import QuadratureError
from .measures import DensitySpec, Measure
from .special import GAMMA_MAX_ARG, gamma_fn
from .stieltjes import SlitPoint, StieltjesFunction

__all__ = ["li", "li_with_error", "li_many", "g_alpha", "gamma_fn", "SERIES_RADIUS"]

SERIES_RADIUS = 0.5
LI_TOL = 1e-11


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= GAMMA_MAX_ARG:
        raise ValueError(f"polylog order must lie in [0, 50], got {alpha!r}")
    return alpha


@lru_cache(maxsize=64)
def g_alpha(alpha) -> StieltjesFunction:
    """g_a(z) = Li_a(z) / z, with Taylor coefficients 1 / (k+1)^a."""
    if not 0 < alpha <= GAMMA_MAX_ARG:
        raise ValueError("g_alpha needs 0 < alpha <= 50")
    if alpha == 1:
        dens = DensitySpec.uniform()
    else:
        dens = DensitySpec.log_power(alpha)
    return StieltjesFunction(Measure.from_density(dens))


def _series(alpha: float, zs: np.ndarray) -> tuple[np.ndarray, float]:
    r = float(np.max(np.abs(zs))) if zs.size else 0.0
    if r == 0.0:
        return np.zeros_like(zs), 0.0
    # smallest N with |z|^(N+1) / ((N+1)^a (1 - |z|)) below the target
    n = 1
    while r ** (n + 1) / ((n + 1) ** alpha * (1.0 - r)) > 1e-3 * LI_TOL:
        n += 1
    ks = np.arange(n, 0, -1, dtype=float)
    acc = np.zeros_like(zs)
    for k in ks:
        acc = (acc + k**-alpha) * zs
    tail = r ** (n + 1) / ((n + 1) ** alpha * (1.0 - r))
    return acc, tail


def li_many(alpha: float, zs, method: str = "auto") -> tuple[np.ndarray, float]:
    """
    Vectorised Li_a with an error estimate; ``method`` is auto/series/integral.

    Returns ``(values, error_bound)``; the bound is the worst over the batch.
    """
    alpha = _check_order(alpha)
    zs = np.asarray(zs, dtype=complex)
    for z in zs.ravel():
        SlitPoint.of(z)
    if alpha == 0.0:
        return zs / (1.0 - zs), 0.0
    values = np.zeros_like(zs)
    err = 0.0
    small = np.abs(zs) <= SERIES_RADIUS
    if method == "series":
        if not small.all():
            raise ValueError("the series branch needs |z| <= 0.5")
        use_series = small
    elif method == "integral":
        use_series = np.zeros_like(small)
    elif method == "auto":
        use_series = small
    else:
        raise ValueError(f"unknown method {method!r}")
    if use_series.any():
        values[use_series], err = _series(alpha, zs[use_series])
    rest = ~use_series
    if rest.any():
        pts = zs[rest]
        g, e = g_alpha(alpha).eval_many(pts, tol=0.1 * LI_TOL, return_error=True)
        values[rest] = pts * g
        err = max(err, e * float(np.max(np.abs(pts))))
    if err > LI_TOL:
        raise QuadratureError("polylog evaluation missed its target", err)
    return values, err


def li_with_error(alpha: float, z) -> tuple[complex, float]:
    values, err = li_many(alpha, np.array([SlitPoint.of(z).z]))
    return complex(values[0]), err


def li(alpha: float, z) -> complex:
    """Li_alpha(z) on the slit plane, absolute error about 1e-11."""
    return li_with_error(alpha, z)[0]
