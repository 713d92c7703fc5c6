"""Numeric inner loops.

Everything here takes and returns plain floats, ints and float64 arrays so the
same source compiles under numba or runs as ordinary Python (see
:mod:`qcalc._jit`).  Higher-level validation and error reporting live in the
calling modules; kernels signal trouble through integer status codes.
"""

import math

import numpy as np

from qcalc._jit import maybe_njit

#: Below this distance from 1 the bracket is summed term by term.
NEAR_ONE = 1e-4

SERIES_EXP = 0
SERIES_SIN = 1
SERIES_COS = 2

STATUS_OK = 0
STATUS_MAX_TERMS = 1
STATUS_NONFINITE = 2
STATUS_GUARD = 3


@maybe_njit
def bracket_closed(n, q):
    """``(q**n - q**-n) / (q - 1/q)`` with no special cases."""
    return (q**n - q ** (-n)) / (q - 1.0 / q)


@maybe_njit
def bracket_sum(n, q):
    """``q**(n-1) + q**(n-3) + ... + q**(1-n)``; cancellation free near q = 1."""
    s = 0.0
    for k in range(n):
        s += q ** (n - 1 - 2 * k)
    return s


@maybe_njit
def bracket(n, q):
    if n == 0:
        return 0.0
    if n == 1:
        return 1.0
    if abs(q - 1.0) < NEAR_ONE:
        return bracket_sum(n, q)
    return bracket_closed(n, q)


@maybe_njit
def bracket_table(nmax, q):
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        out[n] = bracket(n, q)
    return out


@maybe_njit
def factorial_table(nmax, q):
    """Running products ``[0]! .. [nmax]!``; entries past an overflow are inf."""
    out = np.empty(nmax + 1)
    acc = 1.0
    out[0] = acc
    for n in range(1, nmax + 1):
        acc = acc * bracket(n, q)
        out[n] = acc
    return out


@maybe_njit
def compensated_sum(terms, count, reverse):
    """Neumaier-compensated sum of ``terms[:count]`` in a fixed order."""
    s = 0.0
    c = 0.0
    for i in range(count):
        j = count - 1 - i if reverse else i
        t = terms[j]
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
    return s + c


@maybe_njit
def weighted_sum(weights, values):
    """Sum of ``weights * values``, smallest-index-last (deepest lattice terms first)."""
    n = weights.shape[0]
    terms = np.empty(n)
    for i in range(n):
        terms[i] = weights[i] * values[i]
    return compensated_sum(terms, n, True)


@maybe_njit
def geometric_points(scale, q, n_lo, n_hi):
    """``scale * q**(2n+1)`` for ``n = n_lo .. n_hi``; each power taken directly."""
    out = np.empty(n_hi - n_lo + 1)
    for i in range(n_hi - n_lo + 1):
        out[i] = scale * q ** (2 * (n_lo + i) + 1)
    return out


@maybe_njit
def q_series(x, q, kind, tol, max_terms, bound):
    """Sum one of the bracket-factorial power series at ``x``.

    Terms come from the ratio recursion, so no factorial is formed explicitly.
    Stops after the first term that is below ``tol`` and no larger than its
    predecessor.  Returns ``(value, terms_used, last_abs_term, status)``.
    """
    terms = np.empty(max_terms)
    x2 = x * x
    if kind == SERIES_SIN:
        t = x
    else:
        t = 1.0
    count = 0
    prev = math.inf
    status = STATUS_MAX_TERMS
    for k in range(max_terms):
        if k > 0:
            if kind == SERIES_EXP:
                t = t * x / bracket(k, q)
            elif kind == SERIES_SIN:
                t = -t * x2 / (bracket(2 * k, q) * bracket(2 * k + 1, q))
            else:
                t = -t * x2 / (bracket(2 * k - 1, q) * bracket(2 * k, q))
        if not math.isfinite(t):
            status = STATUS_NONFINITE
            break
        terms[count] = t
        count += 1
        a = abs(t)
        if a > bound:
            status = STATUS_GUARD
            break
        if a < tol and a <= prev:
            status = STATUS_OK
            break
        prev = a
    return compensated_sum(terms, count, True), count, abs(t), status
