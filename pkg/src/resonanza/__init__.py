"""Exact workbench for integrable sets of fully resonant oscillators."""

from .exact import ExactComplex
from .polycore import Polynomial, jacobian_rank, poisson_bracket, re_im
from .quantize import OperatorPolynomial, commutator, moyal_bracket, weyl_symmetrize
from .setfactory import IntegrableSet, PreconditionError

__version__ = "0.1.0"

__all__ = [
    "ExactComplex", "Polynomial", "poisson_bracket", "re_im", "jacobian_rank",
    "IntegrableSet", "PreconditionError", "OperatorPolynomial", "weyl_symmetrize",
    "commutator", "moyal_bracket", "__version__",
]
