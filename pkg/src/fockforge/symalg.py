"""Truncated symmetric algebra over C^m in the normalized occupation basis.

A vector of the symmetric algebra is stored by its coefficients against the
orthonormal basis ``v^D = e_1^{d_1} ... e_m^{d_m} / sqrt(d_1! ... d_m!)``.
Inner products are antilinear in the first slot throughout the package.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

MultiIndex = tuple  # tuple[int, ...] of occupation numbers

PERMANENT_LIMIT = 16
NAIVE_PERMANENT_LIMIT = 8


def degree(index: MultiIndex) -> int:
    return sum(index)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, lex descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _basis(modes: int, cap: int) -> tuple:
    return tuple(idx for d in range(cap + 1) for idx in _compositions(d, modes))


@lru_cache(maxsize=None)
def _basis_lookup(modes: int, cap: int) -> dict:
    return {idx: n for n, idx in enumerate(_basis(modes, cap))}


def enumerate_basis(modes: int, cap: int) -> list:
    """Multi-indices of degree <= cap in graded-lex order.

    Within a degree, indices are ordered lexicographically descending, so for two
    modes the degree-one block reads ``(1, 0), (0, 1)``.
    """
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    return list(_basis(modes, cap))


def basis_size(modes: int, cap: int) -> int:
    return math.comb(modes + cap, cap)


def basis_position(index: MultiIndex, cap: int) -> int:
    return _basis_lookup(len(index), cap)[tuple(index)]


@lru_cache(maxsize=None)
def basis_degrees(modes: int, cap: int) -> np.ndarray:
    degs = np.array([sum(idx) for idx in _basis(modes, cap)], dtype=int)
    degs.setflags(write=False)
    return degs


# ---------------------------------------------------------------------------
# permanents


def permanent_naive(matrix) -> complex:
    """Permanent as the sum over all permutations. Reference oracle for small n."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > NAIVE_PERMANENT_LIMIT:
        raise ValueError(f"naive permanent limited to n <= {NAIVE_PERMANENT_LIMIT}, got {n}")
    rows = np.arange(n)
    total = 0j
    for perm in itertools.permutations(range(n)):
        total += np.prod(a[rows, list(perm)])
    return complex(total)


def permanent(matrix, limit: int = PERMANENT_LIMIT) -> complex:
    """Permanent by Ryser's inclusion-exclusion formula.

    per(A) = (-1)^n sum_{S subset [n]} (-1)^{|S|} prod_i sum_{j in S} A[i, j]

    All column subsets are evaluated at once, so memory is O(2^n n).
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > limit:
        raise ValueError(f"permanent limited to n <= {limit}, got {n}")
    if n == 0:
        return 1 + 0j
    subsets = (np.arange(1, 2**n)[:, None] >> np.arange(n)) & 1
    rowsums = subsets.astype(complex) @ a.T
    sizes = subsets.sum(axis=1)
    signs = np.where((n - sizes) % 2 == 0, 1.0, -1.0)
    return complex(np.sum(signs * np.prod(rowsums, axis=1)))


def monomial_inner(xs: Sequence, ys: Sequence) -> complex:
    """<x_1 ... x_d | y_1 ... y_d> as the permanent of the Gram matrix <x_a|y_b>."""
    if len(xs) != len(ys):
        raise ValueError(f"monomials of different degree: {len(xs)} vs {len(ys)}")
    if len(xs) == 0:
        return 1 + 0j
    x = np.atleast_2d(np.asarray(xs, dtype=complex))
    y = np.atleast_2d(np.asarray(ys, dtype=complex))
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"vector dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    return permanent(x.conj() @ y.T)


# ---------------------------------------------------------------------------
# vectors


class FockVector:
    """Truncated element of the symmetric algebra.

    Coefficients are kept sparsely as ``{multi-index: amplitude}``; exact zeros
    are never stored. Instances are treated as immutable.
    """

    __slots__ = ("modes", "cap", "_coeffs")

    def __init__(self, modes: int, cap: int, coeffs: Mapping | None = None):
        if modes < 1:
            raise ValueError(f"modes must be >= 1, got {modes}")
        if cap < 0:
            raise ValueError(f"cap must be >= 0, got {cap}")
        self.modes = int(modes)
        self.cap = int(cap)
        store = {}
        for idx, amp in (coeffs or {}).items():
            idx = tuple(int(k) for k in idx)
            if len(idx) != modes or min(idx) < 0:
                raise ValueError(f"bad multi-index {idx} for {modes} modes")
            if sum(idx) > cap:
                raise ValueError(f"multi-index {idx} exceeds cap {cap}")
            amp = complex(amp)
            if amp != 0:
                store[idx] = store.get(idx, 0j) + amp
        self._coeffs = {k: v for k, v in store.items() if v != 0}

    # construction -------------------------------------------------------
    @classmethod
    def vacuum(cls, modes: int, cap: int = 0) -> "FockVector":
        return cls(modes, cap, {(0,) * modes: 1.0})

    @classmethod
    def basis_vector(cls, index: Sequence[int], cap: int | None = None) -> "FockVector":
        index = tuple(index)
        return cls(len(index), sum(index) if cap is None else cap, {index: 1.0})

    @classmethod
    def from_array(cls, modes: int, cap: int, array) -> "FockVector":
        arr = np.asarray(array, dtype=complex)
        basis = _basis(modes, cap)
        if arr.shape != (len(basis),):
            raise ValueError(f"expected length {len(basis)}, got {arr.shape}")
        nz = np.flatnonzero(arr)
        return cls(modes, cap, {basis[n]: arr[n] for n in nz})

    @classmethod
    def embed(cls, v, cap: int = 1) -> "FockVector":
        """The one-particle vector v as a degree-one element."""
        v = np.asarray(v, dtype=complex).ravel()
        m = v.size
        coeffs = {}
        for k in range(m):
            idx = [0] * m
            idx[k] = 1
            coeffs[tuple(idx)] = v[k]
        return cls(m, max(cap, 1), coeffs)

    # access -------------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, index) -> complex:
        return self._coeffs.get(tuple(index), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def to_array(self, cap: int | None = None) -> np.ndarray:
        """Dense coefficients in enumerate_basis order; entries above ``cap`` are dropped."""
        cap = self.cap if cap is None else cap
        lookup = _basis_lookup(self.modes, cap)
        out = np.zeros(len(lookup), dtype=complex)
        for idx, amp in self._coeffs.items():
            pos = lookup.get(idx)
            if pos is not None:
                out[pos] = amp
        return out

    def degrees(self) -> set:
        return {sum(idx) for idx in self._coeffs}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self._coeffs.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def truncate(self, cap: int) -> "FockVector":
        return FockVector(self.modes, cap,
                          {k: v for k, v in self._coeffs.items() if sum(k) <= cap})

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "FockVector"):
        if self.modes != other.modes:
            raise ValueError(f"mode mismatch: {self.modes} vs {other.modes}")

    def __add__(self, other: "FockVector") -> "FockVector":
        self._check(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0j) + v
        return FockVector(self.modes, max(self.cap, other.cap), out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-1) * other

    def __neg__(self) -> "FockVector":
        return (-1) * self

    def __mul__(self, scalar) -> "FockVector":
        scalar = complex(scalar)
        return FockVector(self.modes, self.cap,
                          {k: scalar * v for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "FockVector":
        return self * (1 / complex(scalar))

    def allclose(self, other: "FockVector", atol: float = 1e-10, max_degree: int | None = None) -> bool:
        """Coefficientwise comparison, optionally restricted to degrees <= max_degree."""
        self._check(other)
        keys = set(self._coeffs) | set(other._coeffs)
        if max_degree is not None:
            keys = {k for k in keys if sum(k) <= max_degree}
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def __repr__(self) -> str:
        return f"FockVector(modes={self.modes}, cap={self.cap}, nnz={len(self._coeffs)})"


def fock_inner(phi: FockVector, psi: FockVector) -> complex:
    """<phi|psi>, antilinear in phi. Missing coefficients count as zero."""
    if phi.modes != psi.modes:
        raise ValueError(f"mode mismatch: {phi.modes} vs {psi.modes}")
    small, large = (phi, psi) if len(phi) <= len(psi) else (psi, phi)
    total = 0j
    for idx in small._coeffs:
        if idx in large._coeffs:
            total += phi._coeffs[idx].conjugate() * psi._coeffs[idx]
    return total


@lru_cache(maxsize=65536)
def _product_weight(a: MultiIndex, b: MultiIndex) -> float:
    return math.sqrt(math.prod(math.comb(x + y, x) for x, y in zip(a, b)))


def fock_product(phi: FockVector, psi: FockVector, cap: int | None = None) -> FockVector:
    """Symmetric-algebra product truncated at ``cap`` (default: the larger input cap).

    On basis vectors v^A v^B = prod_i sqrt((a_i+b_i)! / (a_i! b_i!)) v^{A+B}.
    """
    if phi.modes != psi.modes:
        raise ValueError(f"mode mismatch: {phi.modes} vs {psi.modes}")
    cap = max(phi.cap, psi.cap) if cap is None else cap
    out: dict = {}
    for a, x in phi._coeffs.items():
        da = sum(a)
        if da > cap:
            continue
        for b, y in psi._coeffs.items():
            if da + sum(b) > cap:
                continue
            key = tuple(i + j for i, j in zip(a, b))
            out[key] = out.get(key, 0j) + _product_weight(a, b) * x * y
    return FockVector(phi.modes, cap, out)


def fock_power(phi: FockVector, n: int, cap: int | None = None) -> FockVector:
    cap = phi.cap if cap is None else cap
    result = FockVector.vacuum(phi.modes, cap)
    for _ in range(n):
        result = fock_product(result, phi, cap)
    return result


def monomial(vectors: Sequence, cap: int | None = None) -> FockVector:
    """The product v_1 ... v_d of one-particle vectors, in normalized coordinates."""
    vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vectors:
        raise ValueError("need at least one vector (use FockVector.vacuum for the empty product)")
    cap = len(vectors) if cap is None else cap
    result = FockVector.vacuum(vectors[0].size, cap)
    for v in vectors:
        result = fock_product(result, FockVector.embed(v, cap), cap)
    return result


def project_degree(phi: FockVector, d: int) -> FockVector:
    if not 0 <= d <= phi.cap:
        raise ValueError(f"degree {d} outside [0, {phi.cap}]")
    return FockVector(phi.modes, phi.cap, {k: v for k, v in phi.items() if sum(k) == d})


def project_modes(phi: FockVector, keep: Iterable[int]) -> FockVector:
    """Orthogonal projection onto the subalgebra generated by the modes in ``keep``.

    Mode ids are 0-based.
    """
    keep = set(keep)
    bad = [k for k in keep if not (isinstance(k, (int, np.integer)) and 0 <= k < phi.modes)]
    if bad:
        raise ValueError(f"invalid mode ids {bad} for {phi.modes} modes")
    drop = [k for k in range(phi.modes) if k not in keep]
    return FockVector(phi.modes, phi.cap,
                      {idx: v for idx, v in phi.items() if all(idx[k] == 0 for k in drop)})


def scale_action(t: float, phi: FockVector) -> FockVector:
    """Functorial extension of v -> t v: the degree-d part is multiplied by t^d."""
    if not t > 0:
        raise ValueError(f"scaling parameter must be positive, got {t}")
    return FockVector(phi.modes, phi.cap, {k: v * t ** sum(k) for k, v in phi.items()})


def random_vector(modes: int, cap: int, rng: np.random.Generator,
                  degrees: Iterable[int] | None = None) -> FockVector:
    """Gaussian random coefficients on the requested degrees (default: all <= cap)."""
    degrees = set(range(cap + 1) if degrees is None else degrees)
    coeffs = {}
    for idx in _basis(modes, cap):
        if sum(idx) in degrees:
            coeffs[idx] = complex(rng.normal(), rng.normal())
    return FockVector(modes, cap, coeffs)
