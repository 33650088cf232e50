"""Coherent vectors, quadratics, Gaussians and their closed-form pairings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ops
from .symalg import FockVector, _basis, fock_product

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class SymAntilinear:
    """Symmetric antilinear map v -> M conj(v) on C^m, stored by its matrix M = M^T.

    Inputs that are symmetric to within ``SYMMETRY_TOL`` (relative) are
    symmetrized; anything further off is rejected.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
        if asym > SYMMETRY_TOL * scale:
            raise ValueError(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")
        m = (m + m.T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def modes(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(v, dtype=complex))

    def square(self) -> np.ndarray:
        """Matrix of the positive complex-linear map Z^2 = M conj(M) = M M^dagger."""
        return self.matrix @ self.matrix.conj()

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.modes else 0.0

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    @classmethod
    def zero(cls, modes: int) -> "SymAntilinear":
        return cls(np.zeros((modes, modes), dtype=complex))

    @classmethod
    def random(cls, modes: int, rng: np.random.Generator, norm: float | None = None) -> "SymAntilinear":
        """Random symmetric matrix, rescaled to operator norm ``norm`` when given."""
        a = rng.normal(size=(modes, modes)) + 1j * rng.normal(size=(modes, modes))
        a = (a + a.T) / 2
        if norm is not None:
            a *= norm / np.linalg.norm(a, 2)
        return cls(a)


def _as_sym(M) -> SymAntilinear:
    return M if isinstance(M, SymAntilinear) else SymAntilinear(np.asarray(M, dtype=complex))


def coherent(z, cap: int) -> FockVector:
    """Truncated exponential e^z = sum_n z^n / n!.

    The coefficient of v^D is prod_k z_k^{d_k} / sqrt(d_k!).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = z.size
    coeffs = {}
    for idx in _basis(m, cap):
        amp = 1 + 0j
        for zk, dk in zip(z, idx):
            if dk:
                amp *= zk**dk / math.sqrt(math.factorial(dk))
        coeffs[idx] = amp
    return FockVector(m, cap, coeffs)


def quadratic(M, cap: int = 2) -> FockVector:
    """The quadratic zeta = 1/2 sum_{a,b} M[a,b] e_a e_b associated with M.

    In normalized coordinates the off-diagonal coefficient of e_a e_b is M[a,b]
    and the diagonal coefficient of v^{2 e_a} is M[a,a] / sqrt(2).
    """
    M = _as_sym(M)
    mat = M.matrix
    m = M.modes
    coeffs = {}
    for a in range(m):
        idx = [0] * m
        idx[a] = 2
        coeffs[tuple(idx)] = mat[a, a] / math.sqrt(2)
        for b in range(a + 1, m):
            idx = [0] * m
            idx[a] = idx[b] = 1
            coeffs[tuple(idx)] = mat[a, b]
    return FockVector(m, max(cap, 2), coeffs)


def annihilate_quadratic_check(v, M) -> np.ndarray:
    """The degree-one vector a(v) zeta, returned as a C^m vector (equals M conj(v))."""
    M = _as_sym(M)
    out = ops.annihilate(v, quadratic(M))
    m = M.modes
    res = np.zeros(m, dtype=complex)
    for k in range(m):
        idx = [0] * m
        idx[k] = 1
        res[k] = out[tuple(idx)]
    return res


def gaussian(M, cap: int) -> FockVector:
    """Truncated Gaussian e^Z = sum_{2n <= cap} zeta^n / n!, built by repeated products."""
    M = _as_sym(M)
    zeta = quadratic(M, cap=max(cap, 2))
    term = FockVector.vacuum(M.modes, cap)
    total = term
    n = 1
    while 2 * n <= cap:
        term = fock_product(term, zeta, cap) / n
        total = total + term
        n += 1
    return total


def gaussian_norm2_exact(M) -> float:
    """||e^Z||^2 = det(I - Z^2)^(-1/2), or +inf once ||Z|| >= 1."""
    M = _as_sym(M)
    if M.modes == 0:
        return 1.0
    if M.norm() >= 1:
        return math.inf
    sv = np.linalg.svd(M.matrix, compute_uv=False)
    return float(np.prod(1 - sv**2) ** -0.5)


def det_inv_sqrt(mat: np.ndarray) -> complex:
    """det(mat)^(-1/2) through principal logarithms of the eigenvalues."""
    eig = np.linalg.eigvals(mat)
    return complex(np.exp(-0.5 * np.sum(np.log(eig.astype(complex)))))


def gaussian_pair_exact(MX, MY) -> complex:
    """<e^X | e^Y> = det(I - M_Y conj(M_X))^(-1/2).

    Every eigenvalue of M_Y conj(M_X) lies strictly inside the unit disc, so the
    branch is fixed by summing principal logarithms over the spectrum.
    """
    MX, MY = _as_sym(MX), _as_sym(MY)
    if MX.modes != MY.modes:
        raise ValueError(f"mode mismatch: {MX.modes} vs {MY.modes}")
    for name, M in (("M_X", MX), ("M_Y", MY)):
        if M.norm() >= 1:
            raise ValueError(f"{name} has operator norm {M.norm():.6g} >= 1")
    m = MX.modes
    return det_inv_sqrt(np.eye(m) - MY.matrix @ MX.matrix.conj())


def coherent_gaussian_pair(z, M) -> complex:
    """<e^z | e^Z> = exp(<z|Zz> / 2)."""
    M = _as_sym(M)
    if M.norm() >= 1:
        raise ValueError(f"operator norm {M.norm():.6g} >= 1")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return complex(np.exp(0.5 * np.vdot(z, M(z))))


def exp_homogeneous(phi: FockVector, cap: int) -> FockVector:
    """Truncated exp(phi) for homogeneous phi."""
    degs = phi.degrees()
    if len(degs) > 1:
        raise ValueError(f"expected a homogeneous vector, got degrees {sorted(degs)}")
    d = degs.pop() if degs else 0
    total = FockVector.vacuum(phi.modes, cap)
    if d == 0:
        # exp of a constant
        return total * np.exp(phi[(0,) * phi.modes])
    term = total
    n = 1
    while d * n <= cap:
        term = fock_product(term, phi, cap) / n
        total = total + term
        n += 1
    return total


def partial_norms(builder, caps) -> list[float]:
    """Squared norms of ``builder(cap)`` over a grid of caps."""
    return [builder(c).norm2() for c in caps]


def is_divergent(norms, growth: float = 10.0) -> bool:
    """Monotone-growth certificate: strictly increasing with last > growth * first."""
    norms = list(norms)
    increasing = all(b > a for a, b in zip(norms, norms[1:]))
    return increasing and norms[-1] > growth * norms[0]
