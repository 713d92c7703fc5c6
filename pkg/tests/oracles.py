"""Reference computations that share no code with qcalc.

Brackets are exact rationals; series and lattice sums are summed directly in
mpmath at 40 digits.
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40


def bracket_exact(n, q):
    q = Fraction(q)
    return (q**n - q**-n) / (q - 1 / q)


def bracket_mp(n, q):
    q = mp.mpf(q)
    if n == 0:
        return mp.mpf(0)
    return (q**n - q**-n) / (q - 1 / q)


def factorial_mp(n, q):
    out = mp.mpf(1)
    for k in range(1, n + 1):
        out *= bracket_mp(k, q)
    return out


def series_mp(kind, x, q, terms=60):
    x = mp.mpf(x)
    if kind == "qexp":
        return mp.fsum(x**k / factorial_mp(k, q) for k in range(terms))
    if kind == "qsin":
        return mp.fsum((-1) ** k * x ** (2 * k + 1) / factorial_mp(2 * k + 1, q) for k in range(terms))
    return mp.fsum((-1) ** k * x ** (2 * k) / factorial_mp(2 * k, q) for k in range(terms))


def jackson_sum(f, q, b, terms=200):
    """Direct finite Jackson sum with a fixed number of terms."""
    q, b = mp.mpf(q), mp.mpf(b)
    return b * (1 / q - q) * mp.fsum(q ** (2 * n + 1) * f(q ** (2 * n + 1) * b) for n in range(terms))


def two_tail_sum(f, q, n_lo=-60, n_hi=60):
    q = mp.mpf(q)
    return (1 / q - q) * mp.fsum(q ** (2 * n + 1) * f(q ** (2 * n + 1)) for n in range(n_lo, n_hi + 1))
