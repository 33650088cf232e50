import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockforge.expstates import SymAntilinear
from fockforge.symplectic import (SympMap, compose, conjugate_by_j, invert, is_symplectic,
                                  make_squeeze, make_unitary, omega, random_symplectic, real_j,
                                  shale_operator, shale_operator_via_inverse, split)

from conftest import cvec


def _as_real(v):
    return np.concatenate([v.real, v.imag])


def _as_complex(x):
    m = x.size // 2
    return x[:m] + 1j * x[m:]


def test_split_identity():
    g = split(np.eye(4))
    assert np.allclose(g.C, np.eye(2)) and np.allclose(g.A, 0)


def test_split_multiplication_by_i():
    g = split(real_j(2))
    assert np.allclose(g.C, 1j * np.eye(2)) and np.allclose(g.A, 0)


def test_split_conjugation():
    g = split(np.diag([1.0, -1.0]))
    assert np.allclose(g.C, 0) and np.allclose(g.A, 1)


def test_split_rejects_singular():
    with pytest.raises(ValueError):
        split(np.zeros((2, 2)))


def test_real_matrix_roundtrip(rng):
    G = rng.normal(size=(6, 6))
    g = split(G)
    assert np.allclose(g.real_matrix(), G)
    v = cvec(rng, 3)
    assert np.allclose(_as_real(g(v)), G @ _as_real(v))


def test_is_symplectic_examples():
    assert is_symplectic(SympMap.identity(2)).ok
    for r in (-1.0, 0.3, 2.0):
        assert is_symplectic(make_squeeze(r)).ok
    dil = is_symplectic(SympMap([[2.0]], [[0.0]]))
    assert not dil.ok and dil.violation == pytest.approx(3.0)


def test_compose_identity_and_inverse(rng):
    g = random_symplectic(2, 5)
    ident = SympMap.identity(2)
    comp = compose(g, ident)
    assert np.allclose(comp.C, g.C) and np.allclose(comp.A, g.A)
    gi = compose(g, invert(g))
    assert np.allclose(gi.C, np.eye(2)) and np.allclose(gi.A, 0, atol=1e-12)


def test_compose_matches_function_composition(rng):
    g, h = random_symplectic(2, 1), random_symplectic(2, 2)
    v = cvec(rng, 2)
    assert np.allclose(compose(g, h)(v), g(h(v)))


def test_invert_squeeze():
    inv = invert(make_squeeze(0.7))
    ref = make_squeeze(-0.7)
    assert np.allclose(inv.C, ref.C) and np.allclose(inv.A, ref.A)


def test_invert_rejects_singular():
    with pytest.raises(ValueError):
        invert(SympMap([[1.0]], [[1.0]]))


@pytest.mark.parametrize("seed", range(5))
def test_inverse_block_identities(seed):
    g = random_symplectic(2, seed, spread=0.5)
    gi = invert(g)
    # C_{g^-1} C_g + A_{g^-1} conj(A_g) = I and A_{g^-1} conj(C_g) + C_{g^-1} A_g = 0
    assert np.allclose(gi.C @ g.C + gi.A @ g.A.conj(), np.eye(2))
    assert np.allclose(gi.A @ g.C.conj() + gi.C @ g.A, 0, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_adjoint_identity(seed):
    g = random_symplectic(2, seed, spread=0.5)
    G = g.real_matrix()
    J = real_j(2)
    assert np.allclose(G.T, -J @ np.linalg.inv(G) @ J, atol=1e-10)
    gi = invert(g)
    assert np.allclose(g.C.conj().T, gi.C, atol=1e-10)
    assert np.allclose(g.A.T, -gi.A, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_norm_identity(seed, rng):
    g = random_symplectic(2, seed, spread=0.5)
    v = cvec(rng, 2)
    assert np.linalg.norm(g.C @ v) ** 2 == pytest.approx(np.linalg.norm(g.A @ v.conj()) ** 2 + np.linalg.norm(v) ** 2)
    assert np.min(np.linalg.svd(g.C, compute_uv=False)) >= 1 - 1e-12


def test_shale_identity_and_unitary(rng):
    assert np.allclose(shale_operator(SympMap.identity(2)).matrix, 0)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    assert np.allclose(shale_operator(make_unitary(q)).matrix, 0)


@pytest.mark.parametrize("r", [0.2, 0.5, 1.0, -0.8])
def test_shale_squeeze(r):
    M = shale_operator(make_squeeze(r)).matrix
    assert abs(M[0, 0] + np.tanh(r)) <= 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_shale_two_formulas(seed):
    g = random_symplectic(2, seed, spread=0.6, depth=3)
    Z = shale_operator(g)
    assert np.allclose(Z.matrix, shale_operator_via_inverse(g).matrix, atol=1e-10)
    assert Z.norm() < 1
    assert isinstance(Z, SymAntilinear)


def test_shale_rejects_non_symplectic():
    with pytest.raises(ValueError):
        shale_operator(SympMap([[2.0]], [[0.0]]))


def test_generators():
    sq = make_squeeze(0.0, 1, 3)
    assert np.allclose(sq.C, np.eye(3)) and np.allclose(sq.A, 0)
    with pytest.raises(ValueError):
        make_unitary([[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        make_squeeze(0.1, 2, 2)


def test_random_symplectic_passes_check_for_many_seeds():
    for seed in range(100):
        assert is_symplectic(random_symplectic(1 + seed % 3, seed)).ok


def test_random_symplectic_norm_bound():
    for seed in range(20):
        g = random_symplectic(2, seed, spread=0.25, depth=2)
        assert shale_operator(g).norm() <= np.tanh(0.5) + 1e-12


def test_conjugate_by_j(rng):
    g = random_symplectic(2, 3)
    v = cvec(rng, 2)
    # J^-1 g J v = -i g(i v)
    assert np.allclose(conjugate_by_j(g)(v), -1j * g(1j * v))


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_omega_preserved_by_squeeze(a, b, c, d):
    g = make_squeeze(0.9)
    x, y = np.array([a + 1j * b]), np.array([c + 1j * d])
    assert omega(g(x), g(y)) == pytest.approx(omega(x, y), abs=1e-9)
