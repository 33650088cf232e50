"""Truncated bosonic Fock space: symmetric algebra, ladder operators, Gaussians,
symplectic implementers and Weyl operators."""

from .expstates import (SymAntilinear, coherent, gaussian, gaussian_norm2_exact,
                        gaussian_pair_exact, quadratic)
from .implementer import Implementer, build_implementer, cocycle, truncated_cocycle
from .symalg import FockVector, enumerate_basis, fock_inner, fock_product, permanent
from .symplectic import SympMap, compose, invert, make_squeeze, make_unitary, shale_operator
from .weyl import CoherentSpan, implementer_kernel, weyl_apply

__version__ = "0.1.0"

__all__ = [
    "CoherentSpan", "FockVector", "Implementer", "SymAntilinear", "SympMap",
    "build_implementer", "cocycle", "coherent", "compose", "enumerate_basis",
    "fock_inner", "fock_product", "gaussian", "gaussian_norm2_exact", "gaussian_pair_exact",
    "implementer_kernel", "invert", "make_squeeze", "make_unitary", "permanent",
    "quadratic", "shale_operator", "truncated_cocycle", "weyl_apply",
]
