import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockforge.symalg import (FockVector, basis_position, basis_size, enumerate_basis, fock_inner,
                              fock_power, fock_product, monomial, monomial_inner, permanent,
                              permanent_naive, project_degree, project_modes, random_vector,
                              scale_action)
from fockforge.expstates import coherent

from conftest import cvec


# -- basis enumeration

def test_basis_single_mode():
    assert enumerate_basis(1, 2) == [(0,), (1,), (2,)]


def test_basis_two_modes_degree_one():
    assert enumerate_basis(2, 1) == [(0, 0), (1, 0), (0, 1)]


@pytest.mark.parametrize("m,cap", [(2, 3), (3, 4), (1, 0), (4, 2)])
def test_basis_matches_brute_force(m, cap):
    brute = {idx for idx in itertools.product(range(cap + 1), repeat=m) if sum(idx) <= cap}
    basis = enumerate_basis(m, cap)
    assert set(basis) == brute
    assert len(basis) == basis_size(m, cap) == math.comb(m + cap, cap)
    degrees = [sum(i) for i in basis]
    assert degrees == sorted(degrees)
    for d in range(cap + 1):
        block = [i for i in basis if sum(i) == d]
        assert block == sorted(block, reverse=True)


def test_basis_two_modes_cap_three_length():
    assert len(enumerate_basis(2, 3)) == 10


def test_basis_zero_cap_is_vacuum():
    assert enumerate_basis(3, 0) == [(0, 0, 0)]


def test_basis_rejects_bad_modes():
    with pytest.raises(ValueError):
        enumerate_basis(0, 2)


def test_basis_position_roundtrip():
    for n, idx in enumerate(enumerate_basis(3, 4)):
        assert basis_position(idx, 4) == n


# -- permanents

def test_permanent_small_cases():
    assert permanent([[5]]) == 5
    assert permanent([[1, 1], [1, 1]]) == 2
    assert permanent(np.ones((3, 3))) == pytest.approx(6)
    assert permanent_naive(np.ones((3, 3))) == pytest.approx(6)


def test_permanent_empty_is_one():
    assert permanent(np.zeros((0, 0))) == 1


def test_permanent_rejects_non_square():
    with pytest.raises(ValueError):
        permanent(np.ones((2, 3)))


def test_permanent_rejects_above_limit():
    with pytest.raises(ValueError):
        permanent(np.ones((17, 17)))
    with pytest.raises(ValueError):
        permanent(np.ones((5, 5)), limit=4)


def test_naive_permanent_limit():
    with pytest.raises(ValueError):
        permanent_naive(np.ones((9, 9)))


def test_permanent_of_all_ones_is_factorial():
    for n in range(1, 11):
        assert permanent(np.ones((n, n))) == pytest.approx(math.factorial(n), rel=1e-12)


def test_permanent_of_diagonal_is_product():
    d = np.array([2.0, -1.5, 3j, 0.5])
    assert permanent(np.diag(d)) == pytest.approx(np.prod(d))


@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_ryser_matches_naive(n, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    ref = permanent_naive(a)
    assert abs(permanent(a) - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_permanent_invariant_under_row_permutation_and_transpose(n, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    p = r.permutation(n)
    ref = permanent(a)
    assert abs(permanent(a[p]) - ref) <= 1e-10 * max(1, abs(ref))
    assert abs(permanent(a.T) - ref) <= 1e-10 * max(1, abs(ref))


# -- monomial inner products

def test_monomial_inner_degree_one(rng):
    x, y = cvec(rng, 3), cvec(rng, 3)
    assert monomial_inner([x], [y]) == pytest.approx(np.vdot(x, y))


def test_monomial_inner_square(rng):
    x, y = cvec(rng, 2), cvec(rng, 2)
    assert monomial_inner([x, x], [y, y]) == pytest.approx(2 * np.vdot(x, y) ** 2)


def test_monomial_inner_distinct_basis_monomials_vanish():
    e = np.eye(3)
    assert monomial_inner([e[0], e[0]], [e[0], e[1]]) == 0
    assert monomial_inner([e[0], e[1]], [e[2], e[1]]) == 0


def test_monomial_inner_empty_is_one():
    assert monomial_inner([], []) == 1


def test_monomial_inner_errors(rng):
    with pytest.raises(ValueError):
        monomial_inner([cvec(rng, 2)], [])
    with pytest.raises(ValueError):
        monomial_inner([cvec(rng, 2)], [cvec(rng, 3)])


def test_monomial_inner_antilinear_in_first_slot(rng):
    x, y = cvec(rng, 2), cvec(rng, 2)
    assert monomial_inner([1j * x], [y]) == pytest.approx(-1j * monomial_inner([x], [y]))


@given(st.integers(1, 3), st.integers(1, 5), st.integers(0, 2**31 - 1))
def test_fock_inner_of_monomials_matches_permanent(m, d, seed):
    r = np.random.default_rng(seed)
    xs = [cvec(r, m) for _ in range(d)]
    ys = [cvec(r, m) for _ in range(d)]
    ref = monomial_inner(xs, ys)
    assert abs(fock_inner(monomial(xs), monomial(ys)) - ref) <= 1e-10 * max(1, abs(ref))


# -- vectors and inner products

def test_vacuum_inner():
    vac = FockVector.vacuum(2, 3)
    assert fock_inner(vac, vac) == 1


def test_distinct_basis_vectors_orthogonal():
    assert fock_inner(FockVector.basis_vector((1, 0)), FockVector.basis_vector((0, 1))) == 0


def test_fock_inner_mode_mismatch():
    with pytest.raises(ValueError):
        fock_inner(FockVector.vacuum(1), FockVector.vacuum(2))


def test_fock_inner_different_caps(rng):
    phi = random_vector(2, 4, rng)
    psi = phi.truncate(2)
    assert fock_inner(phi, psi) == pytest.approx(psi.norm2())


def test_vector_rejects_index_above_cap():
    with pytest.raises(ValueError):
        FockVector(1, 2, {(3,): 1.0})


def test_exact_zeros_not_stored():
    phi = FockVector(2, 2, {(1, 0): 0.0, (0, 1): 1.0})
    assert len(phi) == 1


def test_parseval(rng):
    phi = random_vector(3, 4, rng)
    assert phi.norm2() == pytest.approx(np.sum(np.abs(phi.to_array()) ** 2))
    total = sum(project_degree(phi, d).norm2() for d in range(5))
    assert total == pytest.approx(phi.norm2(), rel=1e-12)


# -- product

def test_product_unit(rng):
    psi = random_vector(2, 3, rng)
    assert fock_product(FockVector.vacuum(2, 3), psi, 3).allclose(psi)


def test_product_normalization():
    e = FockVector.basis_vector((1, 0), 2)
    out = fock_product(e, e, 2)
    assert out[(2, 0)] == pytest.approx(math.sqrt(2))
    assert len(out) == 1


def test_product_drops_overflow():
    e = FockVector.basis_vector((1,), 1)
    assert len(fock_product(e, e, 1)) == 0


def test_product_mode_mismatch():
    with pytest.raises(ValueError):
        fock_product(FockVector.vacuum(1), FockVector.vacuum(2))


@given(st.integers(0, 2**31 - 1))
def test_product_commutative_and_associative(seed):
    r = np.random.default_rng(seed)
    a, b, c = (random_vector(2, 3, r) for _ in range(3))
    assert fock_product(a, b, 5).allclose(fock_product(b, a, 5))
    left = fock_product(fock_product(a, b, 5), c, 5)
    right = fock_product(a, fock_product(b, c, 5), 5)
    assert left.allclose(right, atol=1e-9)


def test_product_factorizes_against_powers(rng):
    # <v^{a+b}/(a+b)! | phi psi> = <v^a/a! | phi> <v^b/b! | psi>
    m, a, b = 2, 2, 3
    v = cvec(rng, m)
    phi = random_vector(m, a, rng, degrees=[a])
    psi = random_vector(m, b, rng, degrees=[b])
    lhs = fock_inner(monomial([v] * (a + b)) / math.factorial(a + b), fock_product(phi, psi, a + b))
    rhs = (fock_inner(monomial([v] * a) / math.factorial(a), phi)
           * fock_inner(monomial([v] * b) / math.factorial(b), psi))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_power_of_vector_inner(rng):
    x, y = cvec(rng, 2), cvec(rng, 2)
    d = 4
    xd = fock_power(FockVector.embed(x, d), d, d)
    yd = fock_power(FockVector.embed(y, d), d, d)
    assert fock_inner(xd, yd) == pytest.approx(math.factorial(d) * np.vdot(x, y) ** d, rel=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_polarization(d, rng):
    m = 2
    us = [cvec(rng, m) for _ in range(d)]
    total = FockVector(m, d)
    for signs in itertools.product((1, -1), repeat=d):
        s = sum(sg * u for sg, u in zip(signs, us))
        total = total + monomial([s] * d, d) * np.prod(signs)
    expected = monomial(us, d) * (2**d * math.factorial(d))
    assert total.allclose(expected, atol=1e-9)


# -- projections and scaling

def test_project_degree_of_coherent():
    phi = project_degree(coherent([0.3, 0.2j], 5), 0)
    assert phi[(0, 0)] == pytest.approx(1)
    assert len(phi) == 1


def test_project_degree_idempotent(rng):
    phi = random_vector(2, 4, rng)
    once = project_degree(phi, 2)
    assert project_degree(once, 2).allclose(once, atol=0)


def test_project_degree_out_of_range(rng):
    with pytest.raises(ValueError):
        project_degree(random_vector(1, 2, rng), 3)


def test_project_modes_all_is_identity(rng):
    phi = random_vector(3, 3, rng)
    assert project_modes(phi, [0, 1, 2]).allclose(phi, atol=0)


def test_project_modes_empty_keeps_vacuum(rng):
    phi = random_vector(2, 3, rng)
    out = project_modes(phi, [])
    assert set(out.coeffs) == {(0, 0)}


def test_project_modes_invalid(rng):
    with pytest.raises(ValueError):
        project_modes(random_vector(2, 2, rng), [2])


@given(st.integers(0, 2**31 - 1))
def test_project_modes_pythagoras_and_consistency(seed):
    r = np.random.default_rng(seed)
    phi = random_vector(3, 3, r)
    inner, outer = [0], [0, 2]
    proj = project_modes(phi, outer)
    assert phi.norm2() == pytest.approx((phi - proj).norm2() + proj.norm2(), rel=1e-10)
    assert project_modes(proj, inner).allclose(project_modes(phi, inner), atol=0)


def test_scale_action(rng):
    phi = random_vector(2, 3, rng)
    assert scale_action(1.0, phi).allclose(phi, atol=0)
    hom = random_vector(2, 3, rng, degrees=[3])
    assert scale_action(0.5, hom).allclose(hom * 0.125, atol=1e-14)
    assert scale_action(2.0, scale_action(0.7, phi)).allclose(scale_action(1.4, phi), atol=1e-12)
    with pytest.raises(ValueError):
        scale_action(0.0, phi)
