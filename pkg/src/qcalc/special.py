"""q-exponential, q-sine and q-cosine built on symmetric q-factorials.

    E_q(x) = sum_k x^k / [k]!
    S_q(x) = sum_k (-1)^k x^(2k+1) / [2k+1]!
    C_q(x) = sum_k (-1)^k x^(2k) / [2k]!

Because ``D_q x^n = [n] x^(n-1)``, these satisfy ``D E = E``, ``D S = C`` and
``D C = -S`` term by term, so ``S`` and ``C`` solve ``D^2 f + f = 0``.
Convergence is decided by the series guard at run time, not by a radius
formula.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from qcalc import kernels
from qcalc.core import DivergenceError, GuardTripped, SummationControl, as_dp
from qcalc.deriv import derivative_evaluator, jackson_derivative


class SeriesKind(enum.Enum):
    Q_EXP = "qexp"
    Q_SIN = "qsin"
    Q_COS = "qcos"


_KERNEL_KIND = {
    SeriesKind.Q_EXP: kernels.SERIES_EXP,
    SeriesKind.Q_SIN: kernels.SERIES_SIN,
    SeriesKind.Q_COS: kernels.SERIES_COS,
}

DEFAULT_CONTROL = SummationControl(tol=1e-16)


@dataclass(frozen=True)
class QSeries:
    """One of the three series, bound to a deformation and a control.

    Instances are callable, so they can be handed to the derivative and
    integral routines as evaluators.
    """

    kind: SeriesKind
    dp: object
    ctrl: SummationControl = DEFAULT_CONTROL

    def __post_init__(self):
        object.__setattr__(self, "kind", SeriesKind(self.kind))
        object.__setattr__(self, "dp", as_dp(self.dp))

    def evaluate(self, x: float):
        """Return ``(value, terms_used)``; raise or flag per the control."""
        value, count, last, status = kernels.q_series(
            float(x),
            self.dp.q,
            _KERNEL_KIND[self.kind],
            self.ctrl.tol,
            self.ctrl.max_terms,
            self.ctrl.magnitude_bound,
        )
        if status != kernels.STATUS_OK and not self.ctrl.partial_ok:
            name = self.kind.value
            if status == kernels.STATUS_GUARD:
                raise GuardTripped(
                    f"{name}({x!r}): term magnitude {last!r} exceeds bound {self.ctrl.magnitude_bound!r}",
                    last_term=last,
                )
            if status == kernels.STATUS_NONFINITE:
                raise DivergenceError(f"{name}({x!r}): series term overflowed", last_term=last)
            raise DivergenceError(
                f"{name}({x!r}): no convergence in {count} terms, last term magnitude {last!r}",
                last_term=last,
            )
        return float(value), int(count)

    def __call__(self, x):
        return self.evaluate(x)[0]


def q_exp(x: float, dp, ctrl: SummationControl = DEFAULT_CONTROL) -> float:
    return QSeries(SeriesKind.Q_EXP, dp, ctrl)(x)


def q_sin(x: float, dp, ctrl: SummationControl = DEFAULT_CONTROL) -> float:
    return QSeries(SeriesKind.Q_SIN, dp, ctrl)(x)


def q_cos(x: float, dp, ctrl: SummationControl = DEFAULT_CONTROL) -> float:
    return QSeries(SeriesKind.Q_COS, dp, ctrl)(x)


def ode_residual(kind, a: float, dp, x: float, ctrl: SummationControl = DEFAULT_CONTROL) -> float:
    """``|D_q^2 f(x) + a f(x)|`` for the chosen series, ``D_q`` applied twice pointwise."""
    f = QSeries(kind, dp, ctrl)
    df = derivative_evaluator(f, f.dp)
    return abs(jackson_derivative(df, f.dp, x) + a * f(x))
