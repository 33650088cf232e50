"""Acceptance criteria, shared by the test suite and ``fockforge verify``.

Each criterion returns a :class:`CriterionResult`; tolerances are fixed here
and never tuned at run time.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import ops
from .expstates import (SymAntilinear, coherent, exp_homogeneous, gaussian,
                        gaussian_norm2_exact, gaussian_pair_exact)
from .implementer import (build_implementer, cocycle, intertwining_deviation,
                          transformed_annihilator_sparse, transformed_creator_sparse,
                          truncated_cocycle, unitarity_deviation)
from .symalg import (FockVector, basis_size, fock_inner, monomial, monomial_inner,
                     permanent, permanent_naive, project_modes, random_vector)
from .symplectic import (make_squeeze, make_unitary, random_symplectic, shale_operator,
                         shale_operator_via_inverse)
from .weyl import (CoherentSpan, implementer_kernel, regularity_element, regularity_two_path,
                   truncated_kernel, weyl_cocycle_check)

# roundoff floor below which two successive truncation errors count as converged
ROUNDOFF_FLOOR = 1e-14


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _cvec(rng, m, scale=1.0):
    return scale * (rng.normal(size=m) + 1j * rng.normal(size=m))


def _unit_ball(rng, m, radius=1.0):
    v = _cvec(rng, m)
    return v / np.linalg.norm(v) * radius * rng.uniform() ** (1 / (2 * m))


def _strictly_decreasing(errs) -> bool:
    return all(b < a or (a <= ROUNDOFF_FLOOR and b <= ROUNDOFF_FLOOR) for a, b in zip(errs, errs[1:]))


def criterion_gaussian_norm() -> tuple[bool, str]:
    lams = [round(0.1 * k, 1) for k in range(1, 10)]
    caps = (10, 20, 40)
    ok, worst = True, []
    for lam in lams:
        exact = gaussian_norm2_exact([[lam]])
        errs = [abs(gaussian([[lam]], c).norm2() - exact) for c in caps]
        tol = 1e-8 if lam <= 0.7 else 1e-4
        good = errs[-1] <= tol and _strictly_decreasing(errs)
        if not good:
            worst.append(f"lam={lam}: err@40={errs[-1]:.2e} (tol {tol:.0e})")
        ok &= good
    return ok, "all lambda within tolerance" if ok else "; ".join(worst)


def criterion_gaussian_pair() -> tuple[bool, str]:
    rng = np.random.default_rng(2)
    cap, worst = 30, 0.0
    for _ in range(20):
        X = SymAntilinear.random(2, rng, norm=rng.uniform(0.05, 0.5))
        Y = SymAntilinear.random(2, rng, norm=rng.uniform(0.05, 0.5))
        trunc = fock_inner(gaussian(X, cap), gaussian(Y, cap))
        worst = max(worst, abs(trunc - gaussian_pair_exact(X, Y)))
    return worst <= 1e-8, f"max |trunc - det| = {worst:.2e} (tol 1e-8)"


def criterion_ccr() -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    m, cap = 2, 10
    n = basis_size(m, cap - 2)
    eye = np.eye(basis_size(m, cap))
    worst = 0.0

    def comm(a, b):
        return (a @ b - b @ a).toarray()[:, :n]

    for _ in range(20):
        x, y = _cvec(rng, m), _cvec(rng, m)
        ax, ay = ops.annihilator_sparse(x, cap), ops.annihilator_sparse(y, cap)
        cx, cy = ops.creator_sparse(x, cap), ops.creator_sparse(y, cap)
        px, py = ops.field_sparse(x, cap), ops.field_sparse(y, cap)
        worst = max(worst,
                    np.abs(comm(ax, cy) - np.vdot(x, y) * eye[:, :n]).max(),
                    np.abs(comm(ax, ay)).max(),
                    np.abs(comm(cx, cy)).max(),
                    np.abs(comm(px, py) - 1j * np.vdot(x, y).imag * eye[:, :n]).max())
    for seed in range(10):
        g = random_symplectic(m, seed, spread=0.3, depth=2)
        x, y = _cvec(rng, m), _cvec(rng, m)
        ax = transformed_annihilator_sparse(g, x, cap)
        ay = transformed_annihilator_sparse(g, y, cap)
        cx = transformed_creator_sparse(g, x, cap)
        cy = transformed_creator_sparse(g, y, cap)
        # c_g, a_g couple degree d to d +- 1; columns <= cap - 2 stay exact
        worst = max(worst,
                    np.abs(comm(ax, cy) - np.vdot(x, y) * eye[:, :n]).max(),
                    np.abs(comm(ax, ay)).max(),
                    np.abs(comm(cx, cy)).max())
    return worst <= 1e-10, f"max commutator residual {worst:.2e} (tol 1e-10)"


def criterion_adjointness() -> tuple[bool, str]:
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        cap = int(rng.integers(2, 7))
        v = _cvec(rng, m)
        phi = random_vector(m, cap, rng)
        psi = random_vector(m, cap, rng, degrees=range(cap))
        lhs = fock_inner(ops.annihilate(v, phi), psi)
        rhs = fock_inner(phi, ops.create(v, psi))
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return worst <= 1e-10, f"max residual {worst:.2e} (tol 1e-10)"


def criterion_pythagoras() -> tuple[bool, str]:
    rng = np.random.default_rng(5)
    worst_c, worst_m = 0.0, 0.0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        cap = int(rng.integers(2, 7))
        v = _cvec(rng, m)
        phi = random_vector(m, cap, rng, degrees=range(cap))
        lhs = ops.create(v, phi).norm2()
        rhs = ops.annihilate(v, phi).norm2() + np.vdot(v, v).real * phi.norm2()
        worst_c = max(worst_c, abs(lhs - rhs) / max(1.0, lhs))
        full = random_vector(m, cap, rng)
        keep = [k for k in range(m) if rng.random() < 0.5]
        proj = project_modes(full, keep)
        total = (full - proj).norm2() + proj.norm2()
        worst_m = max(worst_m, abs(full.norm2() - total) / max(1.0, total))
    ok = worst_c <= 1e-10 and worst_m <= 1e-10
    return ok, f"creator identity {worst_c:.2e}, mode projection {worst_m:.2e} (tol 1e-10)"


def criterion_shale() -> tuple[bool, str]:
    worst_formula, worst_sym, max_norm = 0.0, 0.0, 0.0
    for seed in range(20):
        g = random_symplectic(2, seed, spread=0.6, depth=3)
        Z1 = shale_operator(g).matrix
        Z2 = shale_operator_via_inverse(g).matrix
        worst_formula = max(worst_formula, np.abs(Z1 - Z2).max())
        raw = -g.A @ np.linalg.inv(g.C).conj()
        worst_sym = max(worst_sym, np.abs(raw - raw.T).max())
        max_norm = max(max_norm, np.linalg.norm(Z1, 2))
    worst_sq = max(abs(shale_operator(make_squeeze(r)).matrix[0, 0] + np.tanh(r)) for r in (0.2, 0.5, 1.0))
    ok = worst_formula <= 1e-10 and worst_sym <= 1e-10 and max_norm < 1 and worst_sq <= 1e-12
    return ok, (f"formulas agree to {worst_formula:.2e}, asymmetry {worst_sym:.2e}, "
                f"max ||Z|| {max_norm:.4f}, squeeze error {worst_sq:.2e}")


def criterion_intertwining() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    cap = 16
    maps = [make_squeeze(0.5), make_squeeze(-0.3, 1, 2)]
    maps += [random_symplectic(m, seed, spread=0.25, depth=2) for m in (1, 2) for seed in (11, 12)]
    worst, znorm = 0.0, 0.0
    for g in maps:
        znorm = max(znorm, shale_operator(g).norm())
        imp = build_implementer(g, cap)
        for _ in range(3):
            worst = max(worst, intertwining_deviation(g, _cvec(rng, g.modes), cap, imp=imp))
    ok = worst < 1e-8 and znorm <= 0.5
    return ok, f"max deviation {worst:.2e} (tol 1e-8), max ||Z_g|| {znorm:.3f}"


def criterion_unitarity() -> tuple[bool, str]:
    g = make_squeeze(0.4)
    devs = [unitarity_deviation(g, cap, 8) for cap in (16, 20, 24)]
    monotone = devs[0] > devs[1] > devs[2]
    ok = devs[-1] < 1e-6 and monotone
    return ok, ("deviation at cap 16/20/24: " + ", ".join(f"{d:.2e}" for d in devs)
                + f" (tol 1e-6 at cap 24, monotone={monotone})")


def _fixed_unitary(m):
    if m == 1:
        return make_unitary([[np.exp(0.7j)]])
    th, ph = 0.6, 0.3
    return make_unitary([[np.cos(th), -np.exp(1j * ph) * np.sin(th)],
                         [np.exp(-1j * ph) * np.sin(th), np.cos(th)]])


def criterion_cocycle() -> tuple[bool, str]:
    cap, worst, count = 24, 0.0, 0
    for m in (1, 2):
        gens = [make_squeeze(0.3, 0, m), make_squeeze(0.6, 0, m), _fixed_unitary(m)]
        for g, h in itertools.product(gens, repeat=2):
            worst = max(worst, abs(truncated_cocycle(g, h, cap) - cocycle(g, h)))
            count += 1
    return worst <= 1e-6, f"{count} words, max |delta_trunc - delta| = {worst:.2e} (tol 1e-6)"


def criterion_weyl() -> tuple[bool, str]:
    rng = np.random.default_rng(10)
    worst_w, worst_r = 0.0, 0.0
    for _ in range(50):
        m = int(rng.integers(1, 3))
        x, y = _cvec(rng, m, 0.7), _cvec(rng, m, 0.7)
        span = CoherentSpan(np.array([_cvec(rng, m, 0.5) for _ in range(3)]), _cvec(rng, 3))
        worst_w = max(worst_w, weyl_cocycle_check(x, y, span))
        a, v, b = _cvec(rng, m, 0.5), _cvec(rng, m, 0.5), _cvec(rng, m, 0.5)
        t = rng.uniform(-2, 2)
        closed = regularity_element(a, v, b, t)
        worst_r = max(worst_r, abs(closed - regularity_two_path(a, v, b, t)) / max(1.0, abs(closed)))
    ok = worst_w <= 1e-12 and worst_r <= 1e-12
    return ok, f"Weyl relation {worst_w:.2e}, regularity two-path {worst_r:.2e} (tol 1e-12)"


def criterion_kernel() -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    g = make_squeeze(0.4)
    cap = 30
    worst = 0.0
    for _ in range(20):
        x, y = _unit_ball(rng, 1), _unit_ball(rng, 1)
        worst = max(worst, abs(implementer_kernel(g, x, y) - truncated_kernel(g, x, y, cap)))
    return worst <= 1e-6, f"max |kernel - <e^x|U_g e^y>| = {worst:.2e} (tol 1e-6)"


def criterion_divergence() -> tuple[bool, str]:
    caps = (10, 20, 30, 40)
    gauss = [gaussian([[1.0]], c).norm() for c in caps]
    cubic_seed = FockVector(1, 3, {(3,): 0.1 * np.sqrt(6.0)})  # 0.1 v^3 in normalized coordinates
    cubic = [exp_homogeneous(cubic_seed.truncate(3), c).norm() for c in caps]
    parts = []
    ok = True
    for name, seq in (("gaussian lambda=1", gauss), ("cubic lambda=0.1", cubic)):
        inc = all(b > a for a, b in zip(seq, seq[1:]))
        ratio = seq[-1] / seq[0]
        ok &= inc and ratio > 10
        parts.append(f"{name}: increasing={inc}, final/initial={ratio:.2f}")
    return ok, "; ".join(parts) + " (need > 10)"


def criterion_oracles() -> tuple[bool, str]:
    rng = np.random.default_rng(13)
    worst_p, worst_i = 0.0, 0.0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ref = permanent_naive(a)
        worst_p = max(worst_p, abs(permanent(a) - ref) / max(1e-300, abs(ref)))
    for _ in range(200):
        m = int(rng.integers(1, 4))
        d = int(rng.integers(1, 6))
        xs = [_cvec(rng, m) for _ in range(d)]
        ys = [_cvec(rng, m) for _ in range(d)]
        ref = monomial_inner(xs, ys)
        val = fock_inner(monomial(xs), monomial(ys))
        worst_i = max(worst_i, abs(val - ref) / max(1e-300, abs(ref)))
    ok = worst_p <= 1e-10 and worst_i <= 1e-10
    return ok, f"Ryser vs naive {worst_p:.2e}, fock_inner vs permanent {worst_i:.2e} (relative, tol 1e-10)"


CRITERIA = [
    (1, "Gaussian norm", criterion_gaussian_norm),
    (2, "Gaussian pairing", criterion_gaussian_pair),
    (3, "CCR / Heisenberg", criterion_ccr),
    (4, "Adjointness", criterion_adjointness),
    (5, "Pythagorean identities", criterion_pythagoras),
    (6, "Shale operator", criterion_shale),
    (7, "Implementer intertwining", criterion_intertwining),
    (8, "Unitarity of U(g)", criterion_unitarity),
    (9, "Metaplectic cocycle", criterion_cocycle),
    (10, "Weyl relation and regularity", criterion_weyl),
    (11, "Implementer kernel", criterion_kernel),
    (12, "Divergence certificates", criterion_divergence),
    (13, "Oracle equivalence", criterion_oracles),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(num, title, bool(passed), detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, _, _ in CRITERIA]
