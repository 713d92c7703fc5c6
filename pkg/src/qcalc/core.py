"""Deformation parameter, q-brackets and q-factorials.

The symmetric q-bracket

.. math::

    [n]_q = \\frac{q^n - q^{-n}}{q - q^{-1}}

reduces to ``n`` as ``q -> 1``.  All arithmetic is binary64.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from qcalc import kernels


class QCalcError(Exception):
    """Base class for errors raised by qcalc."""


class QDomainError(QCalcError, ValueError):
    """An argument lies outside the domain of an operation."""


class QRangeError(QCalcError, OverflowError):
    """A result is not representable in binary64."""


class DivergenceError(QCalcError, ArithmeticError):
    """A series or lattice sum failed to converge under its control."""

    def __init__(self, message, *, tail=None, last_term=None):
        super().__init__(message)
        self.tail = tail
        self.last_term = last_term


class GuardTripped(DivergenceError):
    """A sample exceeded the magnitude bound of its :class:`SummationControl`."""


@dataclass(frozen=True)
class DeformationParameter:
    """A validated deformation parameter ``0 < q < 1``.

    ``q_inv`` and ``span = q - 1/q`` are cached; ``span`` is negative.
    Values ``q >= 1`` are rejected rather than mapped to ``1/q``, even though
    every formula here is invariant under that substitution.
    """

    q: float
    q_inv: float = field(init=False, repr=False)
    span: float = field(init=False, repr=False)

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or math.isnan(q):
            raise QDomainError(f"q must lie in (0,1), got {self.q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q_inv", 1.0 / q)
        object.__setattr__(self, "span", q - 1.0 / q)


def as_dp(q) -> DeformationParameter:
    if isinstance(q, DeformationParameter):
        return q
    return DeformationParameter(q)


class DivergencePolicy(enum.Enum):
    ERROR = "error"
    PARTIAL = "return_partial_with_flag"


@dataclass(frozen=True)
class SummationControl:
    """Truncation and guard settings shared by every series and lattice sum.

    ``magnitude_bound`` is the ``M`` in the assumption ``|f| <= M`` on the
    lattice; it feeds the geometric tail majorant and the per-sample guard.
    """

    tol: float = 1e-12
    max_terms: int = 10000
    magnitude_bound: float = 1e6
    on_divergence: DivergencePolicy = DivergencePolicy.ERROR

    def __post_init__(self):
        if not self.tol > 0:
            raise QDomainError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_terms) < 1:
            raise QDomainError(f"max_terms must be >= 1, got {self.max_terms!r}")
        if not self.magnitude_bound > 0:
            raise QDomainError(f"magnitude_bound must be positive, got {self.magnitude_bound!r}")
        object.__setattr__(self, "max_terms", int(self.max_terms))
        object.__setattr__(self, "on_divergence", DivergencePolicy(self.on_divergence))

    @property
    def partial_ok(self) -> bool:
        return self.on_divergence is DivergencePolicy.PARTIAL


def _check_index(n) -> int:
    if int(n) != n or n < 0:
        raise QDomainError(f"index must be a non-negative integer, got {n!r}")
    return int(n)


def q_bracket(n: int, dp) -> float:
    """Return ``[n]_q``; exactly 0 for ``n = 0`` and exactly 1 for ``n = 1``."""
    n = _check_index(n)
    dp = as_dp(dp)
    try:
        value = float(kernels.bracket(n, dp.q))
    except (OverflowError, ZeroDivisionError):
        value = math.inf
    if not math.isfinite(value):
        raise QRangeError(f"[{n}]_q overflows binary64 (q={dp.q})")
    return value


def q_bracket_formula(n: int, q: float) -> float:
    """Closed-form bracket for any real ``q > 0``, including ``q > 1``.

    Unlike :func:`q_bracket` this does no validation of ``q`` and never
    switches to the summed form; it exists for checking the ``q -> 1/q``
    symmetry and for comparing against the summed form.
    """
    n = _check_index(n)
    return float(kernels.bracket_closed(n, float(q)))


def q_bracket_summed(n: int, q: float) -> float:
    """``q**(n-1) + q**(n-3) + ... + q**(1-n)``, algebraically equal to ``[n]_q``."""
    n = _check_index(n)
    return float(kernels.bracket_sum(n, float(q)))


def q_brackets(nmax: int, dp) -> np.ndarray:
    """Array of ``[0]_q .. [nmax]_q``."""
    nmax = _check_index(nmax)
    dp = as_dp(dp)
    try:
        table = kernels.bracket_table(nmax, dp.q)
    except (OverflowError, ZeroDivisionError):
        table = np.array([math.inf])
    if not np.all(np.isfinite(table)):
        raise QRangeError(f"q-brackets up to n={nmax} overflow binary64 (q={dp.q})")
    return table


def q_factorials(nmax: int, dp) -> np.ndarray:
    """Array of ``[0]_q! .. [nmax]_q!`` with ``[0]_q! = 1``.

    Raises :class:`QRangeError` naming the first index whose product overflows.
    """
    nmax = _check_index(nmax)
    q_brackets(nmax, dp)
    table = kernels.factorial_table(nmax, as_dp(dp).q)
    bad = np.flatnonzero(~np.isfinite(table))
    if bad.size:
        raise QRangeError(f"q-factorial overflows binary64 at n={int(bad[0])} (q={as_dp(dp).q})")
    return table


def q_factorial(n: int, dp) -> float:
    return float(q_factorials(n, dp)[-1])


def q_bracket_classical_gap(n: int, dp) -> float:
    """``|[n]_q - n|``, the distance of the bracket from the classical integer."""
    return abs(q_bracket(n, dp) - n)
