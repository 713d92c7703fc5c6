"""Fundamental-theorem identities and the integral equation ``int_0^b h = F(b)``.

The finite Jackson integral only sees ``h`` on ``{b q^(2n+1)}``, so the
equation fixes ``h`` there and nowhere else: solutions form a lattice
equivalence class.  :func:`recover_integrand` constructs the class
representative on the lattice from ``F``, and :func:`uniqueness_check`
measures how the integral separates two candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from qcalc import kernels
from qcalc.core import QDomainError, SummationControl, as_dp
from qcalc.deriv import RealFn, jackson_derivative
from qcalc.integrate import jackson_integral

# consecutive lattice samples that must agree to accept a lattice limit
_STABLE_RUN = 3


def ft_derivative_of_integral(f: RealFn, dp, b: float, ctrl: SummationControl = SummationControl()) -> float:
    """``D_q`` of ``G(y) = int_0^y f`` at ``y = b``; telescopes to ``f(b)``."""
    dp = as_dp(dp)
    if not b > 0:
        raise QDomainError(f"upper limit must be positive, got {b!r}")
    return jackson_derivative(lambda y: jackson_integral(f, dp, y, ctrl).value, dp, b)


class IntegralOfDerivative(NamedTuple):
    value: float
    lattice_limit: float


def ft_integral_of_derivative(
    f: RealFn, dp, b: float, ctrl: SummationControl = SummationControl()
) -> IntegralOfDerivative:
    """``int_0^b D_q f`` summed term by term on the lattice.

    The ``n``-th term is ``f(q^(2n) b) - f(q^(2n+2) b)``, so the sum equals
    ``f(b)`` minus the limit of ``f`` along ``q^(2n) b``.  That limit is read
    off the deepest samples once three consecutive ones agree within
    ``ctrl.tol``; ``f(0)`` is never used.
    """
    dp = as_dp(dp)
    if not b > 0:
        raise QDomainError(f"upper limit must be positive, got {b!r}")
    factor = (dp.q_inv - dp.q) * b
    terms = []
    tail = [f(b)]
    for n in range(ctrl.max_terms):
        p = b * dp.q ** (2 * n + 1)
        terms.append(factor * dp.q ** (2 * n + 1) * jackson_derivative(f, dp, p))
        tail.append(f(b * dp.q ** (2 * n + 2)))
        if len(tail) >= _STABLE_RUN:
            last = tail[-_STABLE_RUN:]
            if max(last) - min(last) <= ctrl.tol:
                arr = np.asarray(terms)
                value = float(kernels.compensated_sum(arr, len(arr), True))
                return IntegralOfDerivative(value, tail[-1])
    raise QDomainError(
        f"no lattice limit: f(q^(2n) b) not stable within {ctrl.tol!r} after {ctrl.max_terms} terms"
    )


@dataclass(frozen=True)
class LatticeSolution:
    """Values of an integrand on ``b q^(2n+1)``, ``n = 0 .. depth``."""

    base: float
    points: np.ndarray
    h_values: np.ndarray

    @property
    def values(self):
        return list(zip(self.points.tolist(), self.h_values.tolist()))

    def reintegrate(self, dp) -> float:
        """Finite integral over ``[0, base]`` of the lattice-supported integrand."""
        dp = as_dp(dp)
        return float(kernels.weighted_sum((dp.q_inv - dp.q) * self.points, self.h_values))

    def rows(self):
        return [{"point": p, "h_value": h} for p, h in self.values]


def recover_integrand(F: RealFn, dp, b: float, depth: int) -> LatticeSolution:
    """Solve ``int_0^b h = F(b)`` on the lattice: ``h(p) = D_q F(p)``."""
    dp = as_dp(dp)
    if depth < 1:
        raise QDomainError(f"depth must be >= 1, got {depth!r}")
    if not b > 0:
        raise QDomainError(f"base must be positive, got {b!r}")
    points = kernels.geometric_points(float(b), dp.q, 0, int(depth))
    h = np.array([jackson_derivative(F, dp, p) for p in points.tolist()])
    return LatticeSolution(float(b), points, h)


class UniquenessReport(NamedTuple):
    same_class: bool
    integral_gap: float


def uniqueness_check(
    f: RealFn, g: RealFn, dp, b: float, depth: int, tol: float = 0.0,
    ctrl: SummationControl = SummationControl(),
) -> UniquenessReport:
    """Compare two candidate solutions of ``int_0^b h = F(b)``.

    ``same_class`` tests agreement on ``b q^(2n+1)`` for ``n <= depth``;
    ``integral_gap`` is ``|int_0^b (f - g)|``.  The integrand difference is
    integrated directly so that a single perturbed atom shows up as exactly
    its weight times the perturbation.
    """
    dp = as_dp(dp)
    if depth < 1:
        raise QDomainError(f"depth must be >= 1, got {depth!r}")
    points = kernels.geometric_points(float(b), dp.q, 0, int(depth))
    same = all(abs(f(p) - g(p)) <= tol for p in points.tolist())
    gap = abs(jackson_integral(lambda x: f(x) - g(x), dp, b, ctrl).value)
    return UniquenessReport(same, gap)
