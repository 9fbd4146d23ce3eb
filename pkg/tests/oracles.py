"""
Reference computations that share no code with momentkit.

Everything here is either exact rational arithmetic, mpmath at elevated
precision, or a closed form.
"""

from fractions import Fraction
from math import comb, factorial

import mpmath as mp


def beta_difference(n: int, k: int) -> Fraction:
    """Delta^n of a_k = 1/(k+1): int_0^1 t^k (1-t)^n dt = n! k! / (n+k+1)!."""
    return Fraction(factorial(n) * factorial(k), factorial(n + k + 1))


def binomial_difference(terms, n: int, k: int):
    return sum((-1) ** j * comb(n, j) * terms[k + j] for j in range(n + 1))


def q_hp(kappa, y, tau, t1, t2):
    i = mp.mpc(0, 1)
    num = 1 / (1 - t1 - i * tau * y * t1) + kappa / (1 - t2 - i * tau * y * t2)
    den = 1 / (1 - t1 - i * y * t1) + kappa / (1 - t2 - i * y * t2)
    return num / den


def re_w_prime_fd(y, tau, t1, t2, steps=("1e-4", "5e-5", "2.5e-5"), dps=40):
    """
    One-sided difference slope of Re q at kappa = 0, Richardson-extrapolated
    over the halving steps.  Runs at ``dps`` digits so rounding is negligible.
    """
    with mp.workdps(dps):
        y, tau, t1, t2 = (mp.mpf(float(v)) for v in (y, tau, t1, t2))
        base = q_hp(0, y, tau, t1, t2).real
        table = [(q_hp(mp.mpf(h), y, tau, t1, t2).real - base) / mp.mpf(h) for h in steps]
        # error expansion in powers of h: eliminate h, h^2
        for level in range(1, len(table)):
            factor = mp.mpf(2) ** level
            table = [(factor * table[m + 1] - table[m]) / (factor - 1) for m in range(len(table) - 1)]
        return float(table[0])


def log_power_moment(alpha: float, k: int, dps: int = 30) -> float:
    """int_0^1 t^k log(1/t)^(alpha-1) / Gamma(alpha) dt by mpmath quadrature."""
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        val = mp.quad(lambda u: mp.exp(-(k + 1) * u) * u ** (a - 1), [0, 1, mp.inf]) / mp.gamma(a)
        return float(val)


def polylog(alpha: float, z: complex) -> complex:
    with mp.workdps(30):
        return complex(mp.polylog(alpha, mp.mpc(z.real, z.imag)))


def stieltjes_hp(density, z: complex, dps: int = 30, points=()) -> complex:
    """
    int_0^1 density(t) / (1 - t z) dt with mpmath; density takes an mpf.

    ``points`` are near-poles; the range is also split at geometric
    distances from each of them so that mpmath resolves the peak.
    """
    z = complex(z)
    with mp.workdps(dps):
        zz = mp.mpc(z.real, z.imag)
        cuts = {mp.mpf(0), mp.mpf("0.5"), mp.mpf(1)}
        if points:
            width = abs((1 / zz).imag)
            for p in points:
                p = mp.mpf(p)
                cuts.add(p)
                for k in range(12):
                    for s in (-1, 1):
                        c = p + s * width * 10**k
                        if 0 < c < 1:
                            cuts.add(c)
        return complex(mp.quad(lambda t: density(t) / (1 - t * zz), sorted(cuts), maxdegree=8))
