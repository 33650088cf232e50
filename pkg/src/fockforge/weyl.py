"""Coherent-state picture: finite combinations of exponential vectors and Weyl operators.

Spans, Weyl operators and kernels are closed form. A span sum_i w_i eps^{z_i}
pairs with another through exp(<z_i|z'_j>). Only ``truncated_kernel`` and
``cyclicity_rank`` go through the occupation basis, as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expstates import SymAntilinear, coherent, gaussian
from .symalg import FockVector, _basis, basis_size, fock_product
from .implementer import build_implementer
from .symplectic import SympMap, _require_symplectic, conjugate_by_j, invert, omega

DISTINCT_TOL = 1e-12


@dataclass(frozen=True)
class CoherentSpan:
    points: np.ndarray = field(repr=False)   # shape (k, m)
    weights: np.ndarray = field(repr=False)  # shape (k,)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex)).copy()
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex)).copy()
        if w.shape != (pts.shape[0],):
            raise ValueError(f"{pts.shape[0]} points but {w.size} weights")
        _check_distinct(pts)
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def single(cls, z, weight: complex = 1.0) -> "CoherentSpan":
        return cls(np.atleast_2d(z), [weight])

    @property
    def modes(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


def _check_distinct(points: np.ndarray):
    k = points.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            if np.max(np.abs(points[i] - points[j])) <= DISTINCT_TOL:
                raise ValueError(f"points {i} and {j} coincide")


def cross_gram(xs, ys) -> np.ndarray:
    """exp(<x_i|y_j>) for two point lists."""
    xs = np.atleast_2d(np.asarray(xs, dtype=complex))
    ys = np.atleast_2d(np.asarray(ys, dtype=complex))
    return np.exp(xs.conj() @ ys.T)


def coherent_gram(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    _check_distinct(pts)
    return cross_gram(pts, pts)


def span_inner(a: CoherentSpan, b: CoherentSpan) -> complex:
    return complex(a.weights.conj() @ cross_gram(a.points, b.points) @ b.weights)


def weyl_apply(v, span: CoherentSpan) -> CoherentSpan:
    """W(v) eps^z = exp(-|v|^2/2 - <v|z>) eps^{v+z}, applied pointwise."""
    v = np.asarray(v, dtype=complex).ravel()
    factors = np.exp(-0.5 * np.vdot(v, v).real - span.points @ v.conj())
    return CoherentSpan(span.points + v, span.weights * factors)


def weyl_cocycle_check(x, y, span: CoherentSpan) -> float:
    """Compare W(x) W(y) with exp(-i Omega(x, y)) W(x + y) on ``span``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    lhs = weyl_apply(x, weyl_apply(y, span))
    rhs = weyl_apply(x + y, span)
    phase = np.exp(-1j * omega(x, y))
    dp = float(np.max(np.abs(lhs.points - rhs.points)))
    dw = float(np.max(np.abs(lhs.weights - phase * rhs.weights)))
    return max(dp, dw)


def regularity_element(x, v, y, t: float) -> complex:
    """<eps^x | W(t v) eps^y> in closed form."""
    x, v, y = (np.asarray(a, dtype=complex).ravel() for a in (x, v, y))
    expo = np.vdot(x, y) + (np.vdot(x, v) - np.vdot(v, y)) * t - 0.5 * np.vdot(v, v).real * t**2
    return complex(np.exp(expo))


def regularity_two_path(x, v, y, t: float) -> complex:
    """Same matrix element evaluated through weyl_apply and the Gram pairing."""
    v = np.asarray(v, dtype=complex).ravel()
    moved = weyl_apply(t * v, CoherentSpan.single(y))
    return span_inner(CoherentSpan.single(x), moved)


def weyl_kernel(g: SympMap, x, y) -> complex:
    """Kernel of the implementer with U W(v) = W(g v) U, where W(v) = exp(c(v) - a(v)).

    exp{ <x | C_{g^-1}^{-1} (y - A_{g^-1} x)>/2 + <C_g^{-1} (x - A_g y) | y>/2 }
    """
    _require_symplectic(g)
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    gi = invert(g)
    first = np.vdot(x, np.linalg.solve(gi.C, y - gi.antilinear_part(x)))
    second = np.vdot(np.linalg.solve(g.C, x - g.antilinear_part(y)), y)
    return complex(np.exp(0.5 * first + 0.5 * second))


def implementer_kernel(g: SympMap, x, y) -> complex:
    """<e^x | U_g e^y> in closed form, for the occupation-basis implementer U_g.

    U_g intertwines fields, U pi(v) = pi(g v) U. Since W(v) = exp(-i sqrt2 pi(i v)),
    that operator moves Weyl operators by J g J^-1 = C_g - A_g, so its kernel is
    ``weyl_kernel`` of the J-conjugated map.
    """
    return weyl_kernel(conjugate_by_j(g), x, y)


def truncated_kernel(g: SympMap, x, y, cap: int) -> complex:
    """<e^x | U_g e^y> from the occupation-basis implementer truncated at ``cap``."""
    u = build_implementer(g, cap).matrix
    ex = coherent(x, cap).to_array()
    ey = coherent(y, cap).to_array()
    return complex(np.vdot(ex, u @ ey))


def kernel_intertwining_check(g: SympMap, v, x, y) -> float:
    """|[U W(v) eps^y](eps^x) - [U eps^y](W(-g v) eps^x)| for U with kernel ``weyl_kernel``.

    Measured relative to the larger side.

    The right side is antilinear in its argument, hence the conjugated weight.
    """
    v = np.asarray(v, dtype=complex).ravel()
    left_span = weyl_apply(v, CoherentSpan.single(y))
    lhs = left_span.weights[0] * weyl_kernel(g, x, left_span.points[0])
    right_span = weyl_apply(-g(v), CoherentSpan.single(x))
    rhs = np.conj(right_span.weights[0]) * weyl_kernel(g, right_span.points[0], y)
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))


def cyclicity_rank(M, cap: int, probe_degree: int, tol: float = 1e-10) -> int:
    """Rank of {v^D e^Z : |D| <= b} projected to degrees <= b."""
    M = M if isinstance(M, SymAntilinear) else SymAntilinear(M)
    if M.norm() >= 1:
        raise ValueError(f"operator norm {M.norm():.6g} >= 1")
    b = probe_degree
    if b > cap:
        raise ValueError(f"probe degree {b} exceeds cap {cap}")
    m = M.modes
    gauss = gaussian(M, cap)
    cols = []
    for idx in _basis(m, b):
        prod = fock_product(FockVector.basis_vector(idx, cap), gauss, cap)
        cols.append(prod.to_array(b))
    mat = np.column_stack(cols)
    assert mat.shape == (basis_size(m, b),) * 2
    return int(np.linalg.matrix_rank(mat, tol=tol))
