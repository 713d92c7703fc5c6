"""Symmetric q-deformed (Jackson) calculus.

q-brackets, the Jackson derivative, Jackson integrals as point-measure sums on
the geometric lattice, q-special functions, the q-oscillator Fock algebra and
lattice uniqueness checks for q-integral equations.
"""

from qcalc._jit import BACKEND
from qcalc.core import (
    DeformationParameter,
    DivergenceError,
    DivergencePolicy,
    GuardTripped,
    QCalcError,
    QDomainError,
    QRangeError,
    SummationControl,
    q_bracket,
    q_bracket_classical_gap,
    q_brackets,
    q_factorial,
    q_factorials,
)
from qcalc.deriv import (
    Evaluator,
    PolynomialRep,
    jackson_derivative,
    jackson_derivative_poly,
    product_rule_forms,
    q_commutator_xp,
)
from qcalc.integrate import (
    jackson_integral,
    jackson_integral_improper,
    jackson_integral_interval,
    jackson_integral_real_line,
    lattice_points,
)
from qcalc.special import q_cos, q_exp, q_sin

__version__ = "0.1.0"
