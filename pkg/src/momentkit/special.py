"""Lanczos approximation of the gamma function on (0, 50]."""

import math

# g = 7, n = 9 coefficient set (Godfrey).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

GAMMA_MAX_ARG = 50.0


def _lanczos(x: float) -> float:
    # Gamma(x + 1) for x >= -0.5
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    # split the power to keep t**(x+0.5) in range for x near 50
    root = t ** (0.5 * (x + 0.5))
    return math.sqrt(2.0 * math.pi) * root * (root * math.exp(-t)) * acc


def gamma_fn(alpha: float) -> float:
    """
    Gamma function for real ``alpha`` in (0, 50].

    Uses the Lanczos rational approximation; arguments below 1/2 go through
    the reflection formula Gamma(a) Gamma(1 - a) = pi / sin(pi a).
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= GAMMA_MAX_ARG:
        raise ValueError(f"gamma_fn is defined here only on (0, 50], got {alpha!r}")
    if alpha == round(alpha):
        return float(math.factorial(int(alpha) - 1))
    if alpha < 0.5:
        return math.pi / (math.sin(math.pi * alpha) * _lanczos(-alpha))
    return _lanczos(alpha - 1.0)
