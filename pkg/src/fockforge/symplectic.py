"""Real-linear maps of C^m in complex-linear / antilinear form.

A map is stored as a pair (C, A) acting by v -> C v + A conj(v). The real
picture uses coordinates (Re v, Im v) in R^{2m}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import unitary_group

from .expstates import SymAntilinear

SYMPLECTIC_TOL = 1e-10


@dataclass(frozen=True)
class SympMap:
    C: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=complex)).copy()
        A = np.atleast_2d(np.asarray(self.A, dtype=complex)).copy()
        if C.shape != A.shape or C.shape[0] != C.shape[1]:
            raise ValueError(f"C and A must be equal square matrices, got {C.shape} and {A.shape}")
        C.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "A", A)

    @property
    def modes(self) -> int:
        return self.C.shape[0]

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return self.C @ v + self.A @ v.conj()

    def linear_part(self, v) -> np.ndarray:
        return self.C @ np.asarray(v, dtype=complex)

    def antilinear_part(self, v) -> np.ndarray:
        return self.A @ np.conj(np.asarray(v, dtype=complex))

    def real_matrix(self) -> np.ndarray:
        Cr, Ci, Ar, Ai = self.C.real, self.C.imag, self.A.real, self.A.imag
        return np.block([[Cr + Ar, Ai - Ci], [Ci + Ai, Cr - Ar]])

    def __matmul__(self, other: "SympMap") -> "SympMap":
        return compose(self, other)

    @classmethod
    def identity(cls, modes: int) -> "SympMap":
        return cls(np.eye(modes), np.zeros((modes, modes)))


def split(G) -> SympMap:
    """(C, A) parts of a real 2m x 2m matrix: C = (g - JgJ)/2, A = (g + JgJ)/2."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] % 2:
        raise ValueError(f"expected a real 2m x 2m matrix, got shape {G.shape}")
    if abs(np.linalg.det(G)) < 1e-14 * max(1.0, np.linalg.norm(G)) ** G.shape[0]:
        raise ValueError("matrix is singular")
    m = G.shape[0] // 2
    G11, G12, G21, G22 = G[:m, :m], G[:m, m:], G[m:, :m], G[m:, m:]
    C = (G11 + G22) / 2 + 1j * (G21 - G12) / 2
    A = (G11 - G22) / 2 + 1j * (G21 + G12) / 2
    return SympMap(C, A)


def real_j(modes: int) -> np.ndarray:
    """Multiplication by i in (Re, Im) coordinates."""
    I, Z = np.eye(modes), np.zeros((modes, modes))
    return np.block([[Z, -I], [I, Z]])


def omega(x, y) -> float:
    """The symplectic form Im <x|y>."""
    return float(np.vdot(x, y).imag)


class SymplecticReport(NamedTuple):
    ok: bool
    violation: float


def is_symplectic(g: SympMap, tol: float = SYMPLECTIC_TOL) -> SymplecticReport:
    """Check Im<gx|gy> = Im<x|y> on every pair from {e_k, i e_k}."""
    m = g.modes
    eye = np.eye(m, dtype=complex)
    vecs = [eye[k] for k in range(m)] + [1j * eye[k] for k in range(m)]
    images = [g(v) for v in vecs]
    worst = 0.0
    for p, x in enumerate(vecs):
        for q, y in enumerate(vecs):
            worst = max(worst, abs(omega(images[p], images[q]) - omega(x, y)))
    return SymplecticReport(worst <= tol, worst)


def compose(g: SympMap, h: SympMap) -> SympMap:
    """g o h, with C = C_g C_h + A_g conj(A_h) and A = C_g A_h + A_g conj(C_h)."""
    if g.modes != h.modes:
        raise ValueError(f"mode mismatch: {g.modes} vs {h.modes}")
    return SympMap(g.C @ h.C + g.A @ h.A.conj(), g.C @ h.A + g.A @ h.C.conj())


def invert(g: SympMap) -> SympMap:
    G = g.real_matrix()
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e14:
        raise ValueError("map is singular")
    return split(np.linalg.inv(G))


def _require_symplectic(g: SympMap, what: str = "map"):
    rep = is_symplectic(g, tol=1e-8 * max(1.0, np.linalg.norm(g.real_matrix(), 2) ** 2))
    if not rep.ok:
        raise ValueError(f"{what} is not symplectic (violation {rep.violation:.3e})")


def shale_operator(g: SympMap) -> SymAntilinear:
    """Z_g = -A_g C_g^{-1}, with matrix -A conj(C^{-1})."""
    _require_symplectic(g)
    if np.linalg.cond(g.C) > 1e12:
        raise ValueError("complex-linear part is numerically singular")
    return SymAntilinear(-g.A @ np.linalg.inv(g.C).conj())


def shale_operator_via_inverse(g: SympMap) -> SymAntilinear:
    """The same operator from the inverse map: C_{g^-1}^{-1} A_{g^-1}."""
    _require_symplectic(g)
    gi = invert(g)
    return SymAntilinear(np.linalg.solve(gi.C, gi.A))


def conjugate_by_j(g: SympMap) -> SympMap:
    """J^{-1} g J = C_g - A_g."""
    return SympMap(g.C, -g.A)


def make_squeeze(r: float, mode: int = 0, modes: int = 1) -> SympMap:
    """v_k -> cosh(r) v_k + sinh(r) conj(v_k) on one mode, identity elsewhere."""
    if not 0 <= mode < modes:
        raise ValueError(f"mode {mode} outside [0, {modes})")
    C = np.eye(modes, dtype=complex)
    A = np.zeros((modes, modes), dtype=complex)
    C[mode, mode] = np.cosh(r)
    A[mode, mode] = np.sinh(r)
    return SympMap(C, A)


def make_unitary(U) -> SympMap:
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    if U.shape[0] != U.shape[1] or not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=1e-10):
        raise ValueError("matrix is not unitary")
    return SympMap(U, np.zeros_like(U))


def random_symplectic(modes: int, seed: int, spread: float = 0.3, depth: int = 2) -> SympMap:
    """Alternating product U_0 S_1 U_1 ... S_depth U_depth of random unitaries and squeezes.

    Squeeze parameters are uniform in [-spread, spread] on random modes, so
    ||Z_g|| <= tanh(depth * spread).
    """
    rng = np.random.default_rng(seed)

    def unitary():
        if modes == 1:
            return np.array([[np.exp(2j * np.pi * rng.random())]])
        return unitary_group.rvs(modes, random_state=rng)

    g = make_unitary(unitary())
    for _ in range(depth):
        r = rng.uniform(-spread, spread)
        k = int(rng.integers(modes))
        g = compose(compose(make_unitary(unitary()), make_squeeze(r, k, modes)), g)
    return g
