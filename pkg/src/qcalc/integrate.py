"""Jackson integrals as weighted sums over the geometric lattice.

The finite integral is a point measure with atoms at ``b q^(2n+1)``::

    int_0^b f d_q x = b (1/q - q) * sum_{n>=0} q^(2n+1) f(b q^(2n+1))

Interval, improper (both lattice tails) and two-sided forms are built on top.
A function is never sampled at 0, and the result depends on ``f`` only
through its values on the lattice.

Truncation of the small-point tail uses the geometric majorant implied by
``|f| <= M``: after ``N`` terms the remainder is at most ``M b q^(2N)``.  The
large-point tail of improper integrals has no a priori bound and is truncated
by a ratio test on the observed terms.  Every sum is a single sequential
compensated fold, deepest terms first, so results are bit-reproducible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from qcalc import kernels
from qcalc.core import (
    DivergenceError,
    GuardTripped,
    QDomainError,
    SummationControl,
    as_dp,
)
from qcalc.deriv import Evaluator, RealFn

PARTIAL = "partial"
GUARD_TRIPPED = "guard_tripped"

# consecutive exactly-zero terms accepted as the end of a large-point tail
_ZERO_RUN = 3


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"


@dataclass(frozen=True)
class QLattice:
    """Lattice points ``s * scale * q^(2n+1)`` for ``n_lo <= n <= n_hi``.

    Ordered by ascending ``n``; for ``Sign.BOTH`` the positive point of each
    index precedes the negative one.
    """

    dp: object
    scale: float
    sign: Sign
    n_lo: int
    n_hi: int
    indices: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.points)


def lattice_points(dp, scale: float, n_lo: int, n_hi: int, sign="positive") -> QLattice:
    dp = as_dp(dp)
    sign = Sign(sign)
    if not scale > 0:
        raise QDomainError(f"lattice scale must be positive, got {scale!r}")
    if n_lo > n_hi:
        raise QDomainError(f"empty index range [{n_lo}, {n_hi}]")
    base = kernels.geometric_points(float(scale), dp.q, int(n_lo), int(n_hi))
    n = np.arange(n_lo, n_hi + 1)
    if sign is Sign.BOTH:
        signs = np.tile([1, -1], len(n))
        idx = np.repeat(n, 2)
        pts = np.repeat(base, 2) * signs
    else:
        s = 1 if sign is Sign.POSITIVE else -1
        signs = np.full(len(n), s)
        idx = n
        pts = s * base
    return QLattice(dp, float(scale), sign, int(n_lo), int(n_hi), idx, signs, pts)


@dataclass(frozen=True)
class PointMeasure:
    """Finitely many weighted atoms; integrating ``f`` sums ``w * f(x)``."""

    locations: np.ndarray
    weights: np.ndarray

    @property
    def atoms(self):
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    @property
    def total_mass(self) -> float:
        return float(kernels.compensated_sum(self.weights, len(self.weights), True))

    def integrate(self, f: RealFn) -> float:
        values = np.array([f(x) for x in self.locations.tolist()], dtype=float)
        return float(kernels.weighted_sum(self.weights, values))


def delta_eval(f: RealFn, x0: float) -> float:
    """The evaluation functional at ``x0``: a single unit atom."""
    return f(x0)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    terms_used: int
    tail_estimate: float
    converged: bool
    flags: frozenset = frozenset()


def _finite_depth(dp, b, ctrl):
    """Number of small-point terms so that ``M b q^(2N) <= tol``."""
    bound = ctrl.magnitude_bound * b
    if bound <= ctrl.tol:
        return 1, bound * dp.q**2, True
    need = math.ceil((math.log(ctrl.tol) - math.log(bound)) / (2.0 * math.log(dp.q)))
    need = max(need, 1)
    if need <= ctrl.max_terms:
        return need, bound * dp.q ** (2 * need), True
    return ctrl.max_terms, bound * dp.q ** (2 * ctrl.max_terms), False


def _finite_lattice(dp, b, ctrl):
    """Atoms ``b q^(2n+1)`` and weights for the truncated finite integral.

    Points that underflow to 0 are dropped (0 is never sampled) and the tail
    bound is recomputed for the points kept.
    """
    n, tail, ok = _finite_depth(dp, b, ctrl)
    locations = kernels.geometric_points(float(b), dp.q, 0, n - 1)
    keep = int(np.count_nonzero(locations > 0))
    if keep < n:
        locations = locations[:keep]
        tail = ctrl.magnitude_bound * b * dp.q ** (2 * keep)
        ok = tail <= ctrl.tol
    return locations, (dp.q_inv - dp.q) * locations, tail, ok


def _sample(f, points, ctrl, flags):
    values = np.empty(len(points))
    for i, x in enumerate(points.tolist()):
        v = float(f(x))
        if not abs(v) <= ctrl.magnitude_bound:
            if not ctrl.partial_ok:
                raise GuardTripped(
                    f"|f({x!r})| = {abs(v)!r} exceeds magnitude bound {ctrl.magnitude_bound!r}"
                )
            flags.add(GUARD_TRIPPED)
        values[i] = v
    return values


def jackson_measure(dp, b: float, ctrl: SummationControl = SummationControl()) -> PointMeasure:
    """Atoms of the truncated finite integral over ``[0, b]``."""
    dp = as_dp(dp)
    if not b > 0:
        raise QDomainError(f"upper limit must be positive, got {b!r}")
    locations, weights, _, ok = _finite_lattice(dp, b, ctrl)
    if not ok and not ctrl.partial_ok:
        raise DivergenceError(f"finite integral needs more than max_terms={ctrl.max_terms} terms")
    return PointMeasure(locations, weights)


def jackson_integral(f: RealFn, dp, b: float, ctrl: SummationControl = SummationControl()) -> IntegralResult:
    """Finite Jackson integral of ``f`` over ``[0, b]``, ``b > 0``."""
    dp = as_dp(dp)
    if not b > 0:
        raise QDomainError(f"upper limit must be positive, got {b!r}")
    locations, weights, tail, ok = _finite_lattice(dp, b, ctrl)
    flags = set()
    if not ok:
        if not ctrl.partial_ok:
            raise DivergenceError(
                f"finite integral tail {tail!r} still above tol after max_terms={ctrl.max_terms}",
                tail=tail,
            )
        flags.add(PARTIAL)
    values = _sample(f, locations, ctrl, flags)
    value = float(kernels.weighted_sum(weights, values))
    return IntegralResult(value, len(locations), tail, not flags, frozenset(flags))


def jackson_integral_interval(
    f: RealFn, dp, a: float, b: float, ctrl: SummationControl = SummationControl()
) -> IntegralResult:
    """``int_0^b f - int_0^a f`` for ``0 < a <= b``.

    The two sub-integrals sample ``f`` at ``b q^(2n+1)`` and ``a q^(2n+1)``,
    which mostly lie below ``a``: the result is a signed combination of point
    masses, not a non-negative measure on ``[a, b]``.
    """
    if not a > 0:
        raise QDomainError(f"lower limit must be positive, got {a!r}")
    if b < a:
        raise QDomainError(f"need a <= b, got a={a!r}, b={b!r}")
    upper = jackson_integral(f, dp, b, ctrl)
    lower = jackson_integral(f, dp, a, ctrl)
    flags = upper.flags | lower.flags
    return IntegralResult(
        upper.value - lower.value,
        upper.terms_used + lower.terms_used,
        upper.tail_estimate + lower.tail_estimate,
        not flags,
        flags,
    )


def _large_tail(f, dp, ctrl, flags, side):
    """Sum ``(1/q - q) p f(p)`` over ``p = q^-1, q^-3, ...``; returns (value, terms, tail)."""
    terms = []
    factor = dp.q_inv - dp.q
    zeros = 0
    for m in range(1, ctrl.max_terms + 1):
        try:
            p = dp.q_inv ** (2 * m - 1)
        except OverflowError:
            break
        if not math.isfinite(p):
            break
        v = float(f(p))
        if not abs(v) <= ctrl.magnitude_bound:
            if not ctrl.partial_ok:
                raise GuardTripped(
                    f"|f({p!r})| = {abs(v)!r} exceeds magnitude bound on the {side} large-point tail"
                )
            flags.add(GUARD_TRIPPED)
        t = factor * p * v
        if not math.isfinite(t):
            break
        terms.append(t)
        if t == 0.0:
            zeros += 1
            if zeros >= _ZERO_RUN:
                return _fold(terms), len(terms), 0.0
            continue
        zeros = 0
        if len(terms) >= 2 and terms[-2] != 0.0:
            r = abs(t) / abs(terms[-2])
            if r < 1.0:
                est = abs(t) * r / (1.0 - r)
                if est <= ctrl.tol:
                    return _fold(terms), len(terms), est
    last = abs(terms[-1]) if terms else math.inf
    msg = f"{side} large-point tail diverged: terms not decaying after {len(terms)} terms"
    if len(terms) < ctrl.max_terms:
        msg += " (lattice points overflow binary64)"
    if not ctrl.partial_ok:
        raise DivergenceError(msg, tail=math.inf, last_term=last)
    flags.add(PARTIAL)
    return _fold(terms), len(terms), math.inf


def _fold(terms):
    arr = np.asarray(terms, dtype=float)
    return float(kernels.compensated_sum(arr, len(arr), True))


def _half_line(f, dp, ctrl, side):
    flags = set()
    locations, weights, small_tail, ok = _finite_lattice(dp, 1.0, ctrl)
    if not ok:
        if not ctrl.partial_ok:
            raise DivergenceError(
                f"{side} small-point tail still above tol after max_terms={ctrl.max_terms}",
                tail=small_tail,
            )
        flags.add(PARTIAL)
    n = len(locations)
    values = _sample(f, locations, ctrl, flags)
    small = float(kernels.weighted_sum(weights, values))
    large, m, large_tail = _large_tail(f, dp, ctrl, flags, side)
    return small, large, n + m, small_tail + large_tail, flags


def jackson_integral_improper(f: RealFn, dp, ctrl: SummationControl = SummationControl()) -> IntegralResult:
    """``(1/q - q) * sum_{n in Z} q^(2n+1) f(q^(2n+1))``, both lattice tails."""
    dp = as_dp(dp)
    small, large, used, tail, flags = _half_line(f, dp, ctrl, "positive")
    value = _fold([large, small])
    return IntegralResult(value, used, tail, not flags, frozenset(flags))


def jackson_integral_real_line(f: RealFn, dp, ctrl: SummationControl = SummationControl()) -> IntegralResult:
    """Two-sided integral: the improper sums at ``-q^(2n+1)`` and ``+q^(2n+1)``.

    Weights are positive on both sides, so odd integrands cancel term by term.
    """
    dp = as_dp(dp)
    ns, nl, nused, ntail, nflags = _half_line(lambda x: f(-x), dp, ctrl, "negative")
    ps, pl, pused, ptail, pflags = _half_line(f, dp, ctrl, "positive")
    value = _fold([nl, ns]) + _fold([pl, ps])
    flags = nflags | pflags
    return IntegralResult(value, nused + pused, ntail + ptail, not flags, frozenset(flags))


def antiderivative_at(
    f: RealFn, dp, x: float, constant: float = 0.0, ctrl: SummationControl = SummationControl()
) -> float:
    """``(1/q - q) * sum_{n>=0} q^(2n+1) x f(q^(2n+1) x) + constant``."""
    return jackson_integral(f, dp, x, ctrl).value + constant


def equivalent_on_lattice(f: RealFn, g: RealFn, dp, depth: int, tol: float = 0.0) -> bool:
    """True iff ``|f - g| <= tol`` on every point ``+-q^(2n+1)`` with ``|n| <= depth``.

    Functions that pass are indistinguishable to every integral built on
    the unit lattice.
    """
    if depth < 1:
        raise QDomainError(f"depth must be >= 1, got {depth!r}")
    lat = lattice_points(dp, 1.0, -depth, depth, Sign.BOTH)
    return all(abs(f(p) - g(p)) <= tol for p in lat.points.tolist())


def lattice_table(dp, scale: float, n_lo: int, n_hi: int, sign="positive", f: RealFn | None = None):
    """Rows ``(n, location, weight, f_value, term)`` for the lattice atoms.

    ``weight = (1/q - q) * scale * q^(2n+1)``, the atom weight of the finite
    integral with upper limit ``scale``; ``f`` defaults to the constant 1.
    """
    dp = as_dp(dp)
    lat = lattice_points(dp, scale, n_lo, n_hi, sign)
    f = f if f is not None else (lambda x: 1.0)
    rows = []
    for n, s, x in zip(lat.indices.tolist(), lat.signs.tolist(), lat.points.tolist()):
        w = (dp.q_inv - dp.q) * abs(x)
        v = float(f(x))
        rows.append({"n": n, "location": x, "weight": w, "f_value": v, "term": w * v})
    return rows


def bump(lo: float, hi: float, height: float = 1.0) -> Evaluator:
    """Smooth bump of peak ``height`` supported on the open interval ``(lo, hi)``."""
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def fn(x):
        t = (x - mid) / half
        if abs(t) >= 1.0:
            return 0.0
        return height * math.exp(1.0 - 1.0 / (1.0 - t * t))

    return Evaluator(fn, note=f"smooth bump on ({lo!r}, {hi!r})")


def plateau(lo: float, hi: float, height: float = 1.0) -> Evaluator:
    """``height`` on the closed interval ``[lo, hi]``, 0 elsewhere."""
    return Evaluator(lambda x: height if lo <= x <= hi else 0.0, note=f"plateau on [{lo!r}, {hi!r}]")


class Counterexample(NamedTuple):
    f_spec: Evaluator
    g_spec: Evaluator
    int_f: float
    int_g: float


def monotonicity_counterexample(
    dp, a: float, b: float, *, swap: bool = False, ctrl: SummationControl | None = None
) -> Counterexample:
    """Two integrands with ``f > g`` on ``[a, b]`` but ``int_a^b f < int_a^b g``.

    ``f`` is the constant 1.  ``g`` vanishes on ``[a, b]`` and carries a
    plateau around the first point ``b q^(2n+1)`` below ``a``; the plateau is
    narrow enough to miss every sample ``a q^(2m+1)`` of the lower integral.
    Requires ``a / b > q^2``, which keeps the two sample series disjoint.

    With ``swap=True`` the roles are exchanged: ``g > f`` on ``[a, b]`` and
    ``int f > int g``.
    """
    dp = as_dp(dp)
    if not 0 < a < b:
        raise QDomainError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    if not a / b > dp.q**2:
        raise QDomainError(f"need a/b > q^2 = {dp.q**2!r}, got a/b = {a / b!r}")
    n = 0
    while b * dp.q ** (2 * n + 1) >= a:
        n += 1
    spike = b * dp.q ** (2 * n + 1)
    weight = (dp.q_inv - dp.q) * spike
    lower_pts = a * dp.q ** (2 * np.arange(0, n + 3) + 1)
    gap = min(np.min(np.abs(lower_pts - spike)), a - spike, spike - spike * dp.q**2)
    half = 0.5 * gap
    height = max(3.0, 2.0 * (b - a + 0.1) / weight)
    one = Evaluator(lambda x: 1.0, note="constant 1")
    spiky = plateau(spike - half, spike + half, height)
    if ctrl is None:
        ctrl = SummationControl(magnitude_bound=max(1e6, 2.0 * height))
    f, g = (spiky, one) if swap else (one, spiky)
    int_f = jackson_integral_interval(f, dp, a, b, ctrl).value
    int_g = jackson_integral_interval(g, dp, a, b, ctrl).value
    return Counterexample(f, g, int_f, int_g)
