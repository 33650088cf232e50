"""Fock implementers U_g of symplectic maps and the metaplectic cocycle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import ops
from .expstates import SymAntilinear, det_inv_sqrt, gaussian
from .ops import OperatorMatrix
from .symalg import FockVector, _basis, _basis_lookup, basis_size
from .symplectic import SympMap, _require_symplectic, compose, invert, shale_operator


def transformed_creator_sparse(g: SympMap, v, cap: int) -> sp.csr_matrix:
    """c_g(v) = c(C_g v) + a(A_g v)."""
    v = np.asarray(v, dtype=complex).ravel()
    return ops.creator_sparse(g.linear_part(v), cap) + ops.annihilator_sparse(g.antilinear_part(v), cap)


def transformed_annihilator_sparse(g: SympMap, v, cap: int) -> sp.csr_matrix:
    """a_g(v) = a(C_g v) + c(A_g v)."""
    v = np.asarray(v, dtype=complex).ravel()
    return ops.annihilator_sparse(g.linear_part(v), cap) + ops.creator_sparse(g.antilinear_part(v), cap)


def _apply(mat, phi: FockVector) -> FockVector:
    return FockVector.from_array(phi.modes, phi.cap, mat @ phi.to_array())


def transformed_create(g: SympMap, v, phi: FockVector) -> FockVector:
    if g.modes != phi.modes:
        raise ValueError(f"mode mismatch: {g.modes} vs {phi.modes}")
    return _apply(transformed_creator_sparse(g, v, phi.cap), phi)


def transformed_annihilate(g: SympMap, v, phi: FockVector) -> FockVector:
    if g.modes != phi.modes:
        raise ValueError(f"mode mismatch: {g.modes} vs {phi.modes}")
    return _apply(transformed_annihilator_sparse(g, v, phi.cap), phi)


@dataclass(frozen=True)
class Implementer:
    """Unnormalized implementer U_g on the occupation basis up to degree ``cap``.

    ``matrix[:, D]`` holds c_g(e_1)^{d_1} ... c_g(e_m)^{d_m} e^{Z_g} / sqrt(D!).
    Columns are accumulated in a working space of degree ``working_cap``; with
    the default ``2 * cap`` every stored entry equals the untruncated one.
    """

    g: SympMap
    cap: int
    matrix: np.ndarray = field(repr=False)
    normalization: float
    shale: SymAntilinear = field(repr=False)
    working_cap: int

    @property
    def modes(self) -> int:
        return self.g.modes

    def vacuum_column(self) -> FockVector:
        return FockVector.from_array(self.modes, self.cap, self.matrix[:, 0])

    def as_operator(self) -> OperatorMatrix:
        return OperatorMatrix(self.modes, self.cap, self.matrix.copy())


def build_implementer(g: SympMap, cap: int, working_cap: int | None = None) -> Implementer:
    _require_symplectic(g)
    working_cap = 2 * cap if working_cap is None else working_cap
    if working_cap < cap:
        raise ValueError(f"working cap {working_cap} below cap {cap}")
    m = g.modes
    Z = shale_operator(g)
    vac = gaussian(Z, working_cap).to_array()
    eye = np.eye(m)
    raise_g = [transformed_creator_sparse(g, eye[k], working_cap) for k in range(m)]

    basis = _basis(m, cap)
    lookup = _basis_lookup(m, cap)
    n_out = len(basis)
    columns = np.zeros((basis_size(m, working_cap), n_out), dtype=complex)
    columns[:, 0] = vac
    for col, idx in enumerate(basis[1:], start=1):
        k = next(j for j, d in enumerate(idx) if d)
        parent = idx[:k] + (idx[k] - 1,) + idx[k + 1:]
        columns[:, col] = raise_g[k] @ columns[:, lookup[parent]] / math.sqrt(idx[k])

    sv = np.linalg.svd(Z.matrix, compute_uv=False)
    norm = float(np.prod(1 - sv**2) ** 0.25)
    mat = columns[:n_out, :].copy()
    mat.setflags(write=False)
    return Implementer(g, cap, mat, norm, Z, working_cap)


def normalized_matrix(imp: Implementer) -> OperatorMatrix:
    """U(g) = det(I - Z_g^2)^(1/4) U_g."""
    return OperatorMatrix(imp.modes, imp.cap, imp.normalization * imp.matrix)


def _block_size(modes: int, max_degree: int) -> int:
    return basis_size(modes, max_degree)


def adjoint_check(g: SympMap, cap: int, block: int | None = None) -> float:
    """max |U_g^dagger - U_{g^-1}| over basis vectors of degree <= block (default cap - 2)."""
    block = cap - 2 if block is None else block
    n = _block_size(g.modes, block)
    u = build_implementer(g, cap).matrix[:n, :n]
    ui = build_implementer(invert(g), cap).matrix[:n, :n]
    return float(np.max(np.abs(u.conj().T - ui)))


def unitarity_deviation(g: SympMap, cap: int, block: int) -> float:
    """Spectral norm of U(g)^dagger U(g) - I restricted to input degrees <= block."""
    n = _block_size(g.modes, block)
    u = normalized_matrix(build_implementer(g, cap)).matrix[:, :n]
    return float(np.linalg.norm(u.conj().T @ u - np.eye(n), 2))


def isometry_deviation(g: SympMap, cap: int, phi: FockVector, psi: FockVector) -> float:
    """|<U(g)phi|U(g)psi> - <phi|psi>| for low-degree phi, psi."""
    u = normalized_matrix(build_implementer(g, cap)).matrix
    a = u @ phi.to_array(cap)
    b = u @ psi.to_array(cap)
    return float(abs(np.vdot(a, b) - np.vdot(phi.to_array(cap), psi.to_array(cap))))


def intertwining_deviation(g: SympMap, v, cap: int, block: int | None = None,
                           imp: Implementer | None = None) -> float:
    """max entry of U_g c(v) - c_g(v) U_g and U_g a(v) - a_g(v) U_g on degrees <= block."""
    block = cap - 2 if block is None else block
    imp = build_implementer(g, cap) if imp is None else imp
    u = imp.matrix
    n = _block_size(g.modes, block)
    worst = 0.0
    pairs = (
        (ops.creator_sparse(v, cap), transformed_creator_sparse(g, v, cap)),
        (ops.annihilator_sparse(v, cap), transformed_annihilator_sparse(g, v, cap)),
    )
    for plain, transformed in pairs:
        lhs = u @ plain.toarray()
        rhs = transformed @ u
        worst = max(worst, float(np.max(np.abs((lhs - rhs)[:n, :n]))))
    return worst


def field_intertwining_deviation(g: SympMap, v, cap: int, block: int | None = None,
                                 imp: Implementer | None = None) -> float:
    """max entry of U_g pi(v) - pi(g v) U_g on degrees <= block."""
    block = cap - 2 if block is None else block
    imp = build_implementer(g, cap) if imp is None else imp
    u = imp.matrix
    n = _block_size(g.modes, block)
    lhs = u @ ops.field_sparse(v, cap).toarray()
    rhs = ops.field_sparse(g(np.asarray(v, dtype=complex)), cap) @ u
    return float(np.max(np.abs((lhs - rhs)[:n, :n])))


def vacuum_kernel(g: SympMap, cap: int, tol: float = 1e-9) -> tuple[int, np.ndarray]:
    """Joint null space of the a_g(e_k) on degrees <= cap - 2.

    The operators are compressed to input degrees <= K = cap - 2 and output
    degrees <= K - 1, where the truncation is exact. Returns the kernel
    dimension and an orthonormal basis of it (columns).
    """
    m = g.modes
    K = cap - 2
    n_in = _block_size(m, K)
    n_out = _block_size(m, K - 1)
    eye = np.eye(m)
    blocks = [transformed_annihilator_sparse(g, eye[k], cap).toarray()[:n_out, :n_in] for k in range(m)]
    stacked = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stacked)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    null = vh[rank:].conj().T
    return null.shape[1], null


def cocycle(g: SympMap, h: SympMap) -> complex:
    """delta(g, h) = det(I - Z_h Z_{g^-1})^(-1/2), principal branch."""
    if g.modes != h.modes:
        raise ValueError(f"mode mismatch: {g.modes} vs {h.modes}")
    _require_symplectic(g, "g")
    _require_symplectic(h, "h")
    zh = shale_operator(h).matrix
    zgi = shale_operator(invert(g)).matrix
    return det_inv_sqrt(np.eye(g.modes) - zh @ zgi.conj())


def truncated_cocycle(g: SympMap, h: SympMap, cap: int) -> complex:
    """Vacuum-vacuum entry of the truncated product U_g U_h, divided by that of U_gh."""
    ug = build_implementer(g, cap).matrix
    uh = build_implementer(h, cap).matrix
    ugh = build_implementer(compose(g, h), cap).matrix
    return complex((ug[0, :] @ uh[:, 0]) / ugh[0, 0])


def product_deviation(g: SympMap, h: SympMap, cap: int, block: int) -> float:
    """max |U_g U_h - delta(g, h) U_gh| over entries of degree <= block."""
    n = _block_size(g.modes, block)
    ug = build_implementer(g, cap).matrix
    uh = build_implementer(h, cap).matrix
    ugh = build_implementer(compose(g, h), cap).matrix
    diff = (ug @ uh)[:n, :n] - cocycle(g, h) * ugh[:n, :n]
    return float(np.max(np.abs(diff)))
