"""Creators, annihilators and field operators on the truncated occupation basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .symalg import FockVector, _basis, _basis_lookup, basis_degrees

SQRT2 = math.sqrt(2.0)


@lru_cache(maxsize=None)
def lowering(modes: int, cap: int, k: int) -> sp.csr_matrix:
    """Sparse matrix of a(e_k): v^D -> sqrt(d_k) v^{D - e_k}."""
    basis = _basis(modes, cap)
    lookup = _basis_lookup(modes, cap)
    rows, cols, vals = [], [], []
    for col, idx in enumerate(basis):
        if idx[k]:
            lower = idx[:k] + (idx[k] - 1,) + idx[k + 1:]
            rows.append(lookup[lower])
            cols.append(col)
            vals.append(math.sqrt(idx[k]))
    n = len(basis)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=float)
    return mat


@lru_cache(maxsize=None)
def raising(modes: int, cap: int, k: int) -> sp.csr_matrix:
    """Sparse matrix of c(e_k); overflow past ``cap`` is dropped."""
    return lowering(modes, cap, k).T.tocsr()


def creator_sparse(v, cap: int) -> sp.csr_matrix:
    """c(v) = sum_k v_k c(e_k), complex-linear in v."""
    v = np.asarray(v, dtype=complex).ravel()
    m = v.size
    out = sp.csr_matrix((math.comb(m + cap, cap),) * 2, dtype=complex)
    for k in range(m):
        if v[k] != 0:
            out = out + v[k] * raising(m, cap, k)
    return out


def annihilator_sparse(v, cap: int) -> sp.csr_matrix:
    """a(v) = sum_k conj(v_k) a(e_k), antilinear in v."""
    v = np.asarray(v, dtype=complex).ravel()
    m = v.size
    out = sp.csr_matrix((math.comb(m + cap, cap),) * 2, dtype=complex)
    for k in range(m):
        if v[k] != 0:
            out = out + np.conj(v[k]) * lowering(m, cap, k)
    return out


def field_sparse(v, cap: int) -> sp.csr_matrix:
    return (creator_sparse(v, cap) + annihilator_sparse(v, cap)) / SQRT2


def _apply(mat: sp.spmatrix, phi: FockVector) -> FockVector:
    return FockVector.from_array(phi.modes, phi.cap, mat @ phi.to_array())


def _check_dim(v, phi: FockVector):
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != phi.modes:
        raise ValueError(f"vector of length {v.size} does not match {phi.modes} modes")
    return v


def create(v, phi: FockVector) -> FockVector:
    """c(v) phi, truncated at phi.cap."""
    v = _check_dim(v, phi)
    return _apply(creator_sparse(v, phi.cap), phi)


def annihilate(v, phi: FockVector) -> FockVector:
    """a(v) phi. Note a(v) is antilinear in v: a(v) w = <v|w>."""
    v = _check_dim(v, phi)
    return _apply(annihilator_sparse(v, phi.cap), phi)


def field(v, phi: FockVector) -> FockVector:
    """pi(v) phi = (c(v) + a(v)) phi / sqrt(2); real-linear in v."""
    v = _check_dim(v, phi)
    return _apply(field_sparse(v, phi.cap), phi)


def number_apply(phi: FockVector) -> FockVector:
    return FockVector(phi.modes, phi.cap, {k: sum(k) * a for k, a in phi.items()})


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of an operator in enumerate_basis order.

    ``shift`` is +1 for creators, -1 for annihilators and None for mixed
    operators such as fields.
    """

    modes: int
    cap: int
    matrix: np.ndarray
    shift: int | None = None

    def __post_init__(self):
        n = math.comb(self.modes + self.cap, self.cap)
        if self.matrix.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {self.matrix.shape}")
        self.matrix.setflags(write=False)

    def apply(self, phi: FockVector) -> FockVector:
        return FockVector.from_array(self.modes, self.cap, self.matrix @ phi.to_array(self.cap))

    def block(self, max_degree: int) -> np.ndarray:
        """Sub-matrix on basis vectors of degree <= max_degree (rows and columns)."""
        n = math.comb(self.modes + max_degree, max_degree)
        return self.matrix[:n, :n]


_BUILDERS = {
    "create": (creator_sparse, 1),
    "annihilate": (annihilator_sparse, -1),
    "field": (field_sparse, None),
}


def operator_matrix(kind: str, v, modes: int, cap: int) -> OperatorMatrix:
    try:
        build, shift = _BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {sorted(_BUILDERS)}") from None
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != modes:
        raise ValueError(f"vector of length {v.size} does not match {modes} modes")
    return OperatorMatrix(modes, cap, build(v, cap).toarray(), shift)


def degree_mask(modes: int, cap: int, max_degree: int) -> np.ndarray:
    return basis_degrees(modes, cap) <= max_degree


def joint_kernel_dimension(mats, tol: float = 1e-9) -> int:
    """Dimension of the common null space of a list of (dense or sparse) matrices."""
    stacked = np.vstack([m.toarray() if sp.issparse(m) else np.asarray(m) for m in mats])
    s = np.linalg.svd(stacked, compute_uv=False)
    n = stacked.shape[1]
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return n - rank
