"""q-deformed Fock states and truncated ladder matrices.

The vacuum is the constant ``psi_0 = 1`` (annihilated by ``D_q``), and

    psi_n = x^n / sqrt([n]_q!)

so that ``D_q psi_n = sqrt([n]_q) psi_{n-1}`` and
``x psi_n = sqrt([n+1]_q) psi_{n+1}``.  States are plain coefficient vectors
in this basis; no inner product is attached to them.

Two number operators coexist: the abstract ``N`` with spectrum ``0, 1, 2, ...``
used by the oscillator relations, and ``x D_q`` with spectrum ``[n]_q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from qcalc.core import QDomainError, as_dp, q_brackets, q_factorials
from qcalc.deriv import PolynomialRep, jackson_derivative


@dataclass(frozen=True, init=False)
class FockState:
    coeffs: np.ndarray
    dp: object

    def __init__(self, coeffs: Sequence[float], dp):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1:
            raise QDomainError("Fock state coefficients must be a 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "dp", as_dp(dp))

    @classmethod
    def basis(cls, n: int, dp) -> "FockState":
        c = np.zeros(n + 1)
        c[n] = 1.0
        return cls(c, dp)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, n: int) -> float:
        return float(self.coeffs[n]) if 0 <= n < len(self.coeffs) else 0.0

    def to_polynomial(self) -> PolynomialRep:
        """Expand in powers of ``x`` using ``psi_n = x^n / sqrt([n]!)``."""
        if len(self.coeffs) == 0:
            return PolynomialRep()
        fact = q_factorials(len(self.coeffs) - 1, self.dp)
        return PolynomialRep(self.coeffs / np.sqrt(fact))


def apply_lowering(s: FockState) -> FockState:
    """``psi_n -> sqrt([n]_q) psi_{n-1}``, ``psi_0 -> 0``."""
    if len(s) <= 1:
        return FockState(np.zeros(max(len(s) - 1, 0)), s.dp)
    br = q_brackets(len(s) - 1, s.dp)
    return FockState(np.sqrt(br[1:]) * s.coeffs[1:], s.dp)


def apply_raising(s: FockState) -> FockState:
    """``psi_n -> sqrt([n+1]_q) psi_{n+1}``."""
    br = q_brackets(len(s), s.dp)
    out = np.zeros(len(s) + 1)
    out[1:] = np.sqrt(br[1:]) * s.coeffs
    return FockState(out, s.dp)


def apply_q_number(s: FockState) -> FockState:
    """``x D_q``: ``psi_n -> [n]_q psi_n``."""
    if len(s) == 0:
        return s
    br = q_brackets(len(s) - 1, s.dp)
    return FockState(br * s.coeffs, s.dp)


def vacuum_check(dp, samples: Sequence[float], psi0=None) -> float:
    """``max |D_q psi_0(x)|`` over the samples; ``psi_0`` defaults to the constant 1."""
    dp = as_dp(dp)
    psi0 = psi0 if psi0 is not None else (lambda x: 1.0)
    if any(x == 0 for x in samples):
        raise QDomainError("vacuum check sample at 0: Jackson derivative undefined at 0")
    return max((abs(jackson_derivative(psi0, dp, x)) for x in samples), default=0.0)


@dataclass(frozen=True)
class TruncatedOperators:
    """Ladder and number operators on ``span(psi_0 .. psi_{dim-1})``."""

    dp: object
    dim: int
    lowering: np.ndarray
    raising: np.ndarray
    number: np.ndarray
    q_number: np.ndarray


def build_truncated(dp, dim: int, *, brackets: Sequence[float] | None = None) -> TruncatedOperators:
    """Matrices with ``lowering[n-1, n] = sqrt([n]_q)`` and ``raising = lowering.T``.

    ``brackets`` overrides the values ``[0] .. [dim-1]`` placed in the ladder
    entries (the number operators are unaffected); used for controls such as
    the classical ladder ``[n] -> n``.
    """
    dp = as_dp(dp)
    if dim < 2:
        raise QDomainError(f"truncation dimension must be >= 2, got {dim!r}")
    br = q_brackets(dim - 1, dp)
    ladder = br if brackets is None else np.asarray(brackets, dtype=float)
    lowering = np.diag(np.sqrt(ladder[1:dim]), k=1)
    raising = lowering.T.copy()
    number = np.diag(np.arange(dim, dtype=float))
    q_number = np.diag(br)
    for m in (lowering, raising, number, q_number):
        m.setflags(write=False)
    return TruncatedOperators(dp, dim, lowering, raising, number, q_number)


class AlgebraResiduals(NamedTuple):
    r1: float
    r2: float
    r3: float


def algebra_residuals(ops: TruncatedOperators) -> AlgebraResiduals:
    """Residuals of the oscillator relations on the untruncated block.

    * ``r1``: ``a a^+ - q a^+ a - q^(-N)`` on rows/columns ``0 .. dim-2``.  Row
      ``n`` is divided by ``max(1, q^-n)``, the size of the exact right-hand
      side, so ``r1`` is a relative residual.  The last basis vector is left
      out because ``a a^+`` loses its ``[dim]`` term there.
    * ``r2``: ``[N, a^+] - a^+`` and ``r3``: ``[N, a] + a``, on the same block.
      Since ``N`` is diagonal the commutators are formed entrywise as
      ``(N_ii - N_jj) A_ij``.
    """
    q = ops.dp.q
    a, ad = ops.lowering, ops.raising
    k = ops.dim - 1
    n = np.arange(ops.dim, dtype=float)
    rhs = np.diag(q ** (-n))
    rel = a @ ad - q * (ad @ a) - rhs
    scale = np.maximum(1.0, q ** (-n))[:, None]
    r1 = float(np.max(np.abs(rel / scale)[:k, :k]))
    nd = np.diag(ops.number)
    diff = nd[:, None] - nd[None, :]
    r2 = float(np.max(np.abs(diff * ad - ad)[:k, :k]))
    r3 = float(np.max(np.abs(diff * a + a)[:k, :k]))
    return AlgebraResiduals(r1, r2, r3)


def eigen_gap_table(dp, dim: int):
    """Rows ``(n, number, q_number, gap)`` with ``gap = [n]_q - n``."""
    ops = build_truncated(dp, dim)
    nd, qd = np.diag(ops.number), np.diag(ops.q_number)
    return [
        {"n": i, "number": float(nd[i]), "q_number": float(qd[i]), "gap": float(qd[i] - nd[i])}
        for i in range(dim)
    ]
