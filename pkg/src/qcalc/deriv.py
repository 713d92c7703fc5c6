"""The symmetric Jackson derivative.

.. math::

    D_q f(x) = \\frac{f(qx) - f(q^{-1}x)}{(q - q^{-1})\\,x}

It acts on any real callable (an *evaluator*) pointwise, and exactly on
:class:`PolynomialRep` coefficient vectors via ``D x^n = [n]_q x^(n-1)``.

Evaluators must be deterministic and free of internal mutation so they can be
called concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from qcalc.core import QDomainError, as_dp, q_bracket, q_brackets

RealFn = Callable[[float], float]


@dataclass(frozen=True)
class Evaluator:
    """A named real function; ``note`` records domain caveats such as a pole at 0."""

    fn: RealFn
    note: str = ""

    def __call__(self, x):
        return self.fn(x)


def _trim(coeffs) -> tuple:
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, init=False)
class PolynomialRep:
    """Polynomial ``sum(coeffs[k] * x**k)`` with no trailing zero coefficients."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def monomial(cls, n: int, c: float = 1.0) -> "PolynomialRep":
        return cls([0.0] * n + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> float:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def __call__(self, x):
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, PolynomialRep):
            other = PolynomialRep([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return PolynomialRep([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolynomialRep([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, PolynomialRep) else -float(other))

    def __mul__(self, other):
        if isinstance(other, PolynomialRep):
            if self.is_zero() or other.is_zero():
                return PolynomialRep()
            out = np.convolve(np.asarray(self.coeffs), np.asarray(other.coeffs))
            return PolynomialRep(out)
        return PolynomialRep([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def times_x(self) -> "PolynomialRep":
        """Multiplication by the position operator."""
        if self.is_zero():
            return self
        return PolynomialRep((0.0,) + self.coeffs)

    def __repr__(self):
        return f"PolynomialRep({list(self.coeffs)!r})"


def jackson_derivative(f: RealFn, dp, x: float) -> float:
    """Symmetric Jackson derivative of ``f`` at ``x != 0``."""
    dp = as_dp(dp)
    if x == 0:
        raise QDomainError("Jackson derivative undefined at 0")
    return (f(dp.q * x) - f(dp.q_inv * x)) / (dp.span * x)


def derivative_evaluator(f: RealFn, dp) -> Evaluator:
    """``x -> D_q f(x)`` as an evaluator, for composing ``D`` with itself."""
    dp = as_dp(dp)
    return Evaluator(lambda x: jackson_derivative(f, dp, x), note="undefined at 0")


def jackson_derivative_poly(p: PolynomialRep, dp) -> PolynomialRep:
    """Exact ``D_q`` on a polynomial: ``c_n x^n -> c_n [n]_q x^(n-1)``."""
    if p.is_zero():
        return p
    br = q_brackets(p.degree, dp)
    return PolynomialRep([p.coeffs[n] * br[n] for n in range(1, p.degree + 1)])


def jackson_partial(f: Callable[..., float], dp, point: Sequence[float], axis: int) -> float:
    """Jackson derivative of a multivariate ``f(*point)`` along one coordinate."""
    dp = as_dp(dp)
    x = point[axis]
    if x == 0:
        raise QDomainError("Jackson derivative undefined at 0")
    up = list(point)
    down = list(point)
    up[axis] = dp.q * x
    down[axis] = dp.q_inv * x
    return (f(*up) - f(*down)) / (dp.span * x)


class ProductRuleForms(NamedTuple):
    lhs: float
    form1: float
    form2: float


def product_rule_forms(f: RealFn, g: RealFn, dp, x: float) -> ProductRuleForms:
    """``D(fg)`` at ``x`` alongside its two expansions.

    ``form1 = Df(x) g(x/q) + f(qx) Dg(x)`` and
    ``form2 = Df(x) g(qx) + f(x/q) Dg(x)``.
    """
    dp = as_dp(dp)
    lhs = jackson_derivative(lambda t: f(t) * g(t), dp, x)
    df = jackson_derivative(f, dp, x)
    dg = jackson_derivative(g, dp, x)
    qx, qix = dp.q * x, dp.q_inv * x
    form1 = df * g(qix) + f(qx) * dg
    form2 = df * g(qx) + f(qix) * dg
    return ProductRuleForms(lhs, form1, form2)


class CommutatorReport(NamedTuple):
    """Eigenvalue of ``[x, p] / (i hbar)`` on ``x**n`` with ``p = -i hbar D_q``.

    ``ratio`` equals ``[n+1]_q - [n]_q``; the undeformed value is 1.
    """

    n: int
    ratio: float
    deviation: float


def q_commutator_xp(n: int, dp) -> CommutatorReport:
    """Measure ``[x, p]`` on ``x**n`` in the exact polynomial representation."""
    dp = as_dp(dp)
    q_bracket(n, dp)  # index validation
    p = PolynomialRep.monomial(n)
    # x.D - D.x ; hbar factored out, and [x, p]/(i hbar) = D.x - x.D
    xd = jackson_derivative_poly(p, dp).times_x()
    dx = jackson_derivative_poly(p.times_x(), dp)
    ratio = (dx - xd).coeff(n)
    return CommutatorReport(n, ratio, abs(ratio - 1.0))
