"""Acceptance criteria, one test per criterion.

Each test prints (and records for the terminal summary) a single
``criterion N: PASS|FAIL ...`` line. Thresholds are the pinned acceptance
tolerances; the comparison values come from routes independent of the code
under test wherever one exists.
"""

import time

import numpy as np
import pytest

from mbred.extensions import extract_omega_tilde, index_map, verify_representation
from mbred.fuzzy import (
    Povm,
    classical_distribution,
    kernel_from_povm,
    quantum_distribution,
    random_povm,
    sharp_effect_residual,
    simulate_outcomes,
)
from mbred.harness import (
    balanced_hemisphere_labels,
    bloch_affine_residual,
    build_example,
    near_dirac_measure,
    random_measure,
)
from mbred.linalg import random_density, random_effect, random_isometry, trace_norm
from mbred.mbmap import (
    adjoint_effect,
    alternative_ensemble,
    eigen_ensemble,
    purity,
    reduce,
    support_concentration,
    to_pure_point,
)
from mbred.measures import DiscreteMeasure, dirac, expectation, tv_distance
from mbred.projective import (
    PurePoint,
    dist_opnorm,
    dist_trace,
    in_weak_neighborhood,
    sample_haar_kets,
    transition_probability,
)

from .conftest import ACCEPTANCE_LINES

# Residual for balanced_hemisphere_labels(200, seed=0), pinned once from the
# Bloch-coordinate least-squares oracle; enforced with 10% slack.
SHARP_R0 = 0.2627973640465641
SHARP_SLACK = 0.9


def _record(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {text}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _eig_norms(D):
    """Operator and trace norms of a stack of Hermitian matrices via eigvalsh."""
    ev = np.abs(np.linalg.eigvalsh(D))
    return ev.max(axis=-1), ev.sum(axis=-1)


def _projectors(kets):
    k = kets / np.linalg.norm(kets, axis=-1, keepdims=True)
    return np.einsum("ni,nj->nij", k, k.conj())


def test_criterion_01_metric_formulas():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst_lit = worst_impl = worst_tr = 0.0
    for dim in (2, 3, 4, 8):
        A, B = sample_haar_kets(dim, 1000, rng), sample_haar_kets(dim, 1000, rng)
        op, tr = _eig_norms(_projectors(A) - _projectors(B))
        t = np.abs(np.einsum("ni,ni->n", A.conj(), B)) ** 2
        literal = np.sqrt(np.clip(1.0 - t, 0.0, None))
        impl = np.array([dist_opnorm(PurePoint(a), PurePoint(b)) for a, b in zip(A, B)])
        impl_tr = np.array([dist_trace(PurePoint(a), PurePoint(b)) for a, b in zip(A, B)])
        worst_lit = max(worst_lit, np.max(np.abs(literal - op)))
        worst_impl = max(worst_impl, np.max(np.abs(impl - op)))
        worst_tr = max(worst_tr, np.max(np.abs(tr - 2 * op)), np.max(np.abs(impl_tr - tr)))
    elapsed = time.perf_counter() - start
    ok = max(worst_lit, worst_impl, worst_tr) <= 1e-10 and elapsed < 10
    _record(1, ok, f"metric formulas: sqrt(1-tr)={worst_lit:.1e} dist_opnorm={worst_impl:.1e} "
                   f"trace={worst_tr:.1e} (tol 1e-10), {elapsed:.2f}s (< 10s)")


def test_criterion_02_contraction():
    rng = np.random.default_rng(102)
    worst = -np.inf
    for dim in (1, 2, 3, 4, 8):
        A, B = sample_haar_kets(dim, 1000, rng), sample_haar_kets(dim, 1000, rng)
        # half the pairs are close, so the bound is probed near equality too
        B[::2] = A[::2] + 1e-3 * B[::2]
        B[::2] /= np.linalg.norm(B[::2], axis=1, keepdims=True)
        for a, b in zip(A, B):
            worst = max(worst, dist_opnorm(PurePoint(a), PurePoint(b)) - np.linalg.norm(a - b))
    _record(2, worst <= 1e-12, f"contraction: max(rho_n - |phi-psi|) = {worst:.2e} (<= 1e-12)")


def test_criterion_03_neighborhood_identity():
    rng = np.random.default_rng(103)
    eps_set = (0.1, 0.5, 1.0)
    disagreements = cases = 0
    for dim in (2, 4):
        center = PurePoint(sample_haar_kets(dim, 1, rng)[0])
        haar = sample_haar_kets(dim, 5000, rng)
        z = sample_haar_kets(dim, 5000, rng)
        near = center.ket + 10.0 ** rng.uniform(-3, 0.5, size=(5000, 1)) * z
        kets = np.vstack([haar, near])
        # ball membership from the eigenvalue route, independent of dist_opnorm
        op, _ = _eig_norms(_projectors(kets) - center.projector)
        for k, ket in enumerate(kets):
            P_t = PurePoint(ket)
            for eps in eps_set:
                weak = in_weak_neighborhood(P_t, center, [center], eps**2)
                disagreements += weak != bool(op[k] < eps)
                cases += 1
    _record(3, disagreements == 0, f"neighborhood identity: {disagreements} disagreements in {cases} cases")


def test_criterion_04_mb_roundtrip():
    start = time.perf_counter()
    rng = np.random.default_rng(104)
    worst = 0.0
    for k in range(500):
        dim = 2 + k % 7
        rank = int(rng.integers(1, dim + 1))
        W = random_density(dim, rng, rank=rank)
        worst = max(worst, trace_norm(reduce(eigen_ensemble(W)) - W))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 30
    _record(4, ok, f"MB roundtrip: max trace distance {worst:.1e} (<= 1e-10), {elapsed:.2f}s (< 30s)")


def test_criterion_05_duality():
    rng = np.random.default_rng(105)
    worst = 0.0
    for k in range(500):
        dim = 2 + k % 4
        mu = random_measure(dim, rng, 32)
        A = random_effect(dim, rng)
        lhs = np.real(np.trace(reduce(mu) @ A))
        rhs = expectation(mu, adjoint_effect(A))
        # oracle: sum of w <phi|A|phi> with plain Python accumulation
        oracle = sum(w * np.real(np.vdot(P.ket, A @ P.ket)) for P, w in mu)
        worst = max(worst, abs(lhs - rhs), abs(rhs - oracle))
    _record(5, worst <= 1e-12, f"duality: max |tr(R mu A) - <mu, f_A>| = {worst:.1e} (<= 1e-12)")


def test_criterion_06_contextuality():
    rng = np.random.default_rng(106)
    H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    W0 = np.eye(2) / 2
    pairs = [(eigen_ensemble(W0), alternative_ensemble(W0, H))]
    for k in range(100):
        dim = 2 + k % 4
        W = random_density(dim, rng, rank=int(rng.integers(2, dim + 1)))
        r = len(eigen_ensemble(W))
        M = random_isometry(r + int(rng.integers(0, 3)), r, rng)
        pairs.append((eigen_ensemble(W), alternative_ensemble(W, M)))
    tvs = [tv_distance(a, b) for a, b in pairs]
    gaps = [trace_norm(reduce(a) - reduce(b)) for a, b in pairs]
    ok = min(tvs) >= 0.1 and max(gaps) <= 1e-12
    _record(6, ok, f"contextuality: min tv {min(tvs):.3f} (>= 0.1), I/2 tv {tvs[0]:.3f}, "
                   f"max reduction gap {max(gaps):.1e} (<= 1e-12), {len(pairs)} cases")


def _shell_counterexample():
    """``0.99 delta_P + 0.01 delta_Q`` with ``1 - tr(PQ) = 2e-9``.

    Purity deficit ``2 m (1 - m)(1 - t) ~ 4e-11`` clears the 1e-10 gate, yet
    ``Q`` lies outside the 1e-9 equality shell, so concentration is 0.99.
    """
    th = np.arcsin(np.sqrt(2e-9))
    P = PurePoint(np.array([1.0, 0.0]))
    Q = PurePoint(np.array([np.cos(th), np.sin(th)]))
    return DiscreteMeasure([P, Q], [0.99, 0.01])


def _dirac_cases(rng, count=400):
    for k in range(count):
        dim = 2 + k % 3
        yield near_dirac_measure(dim, rng) if k % 2 == 0 else random_measure(dim, rng, 4)
    yield _shell_counterexample()


@pytest.mark.xfail(
    strict=True,
    reason="a fixed 1e-9 equality shell cannot certify every measure whose purity deficit is "
    "below 1e-10; see the explicit shell counterexample",
)
def test_criterion_07_dirac_fiber():
    rng = np.random.default_rng(107)
    worst_short, tested = 0.0, 0
    for mu in _dirac_cases(rng):
        W = reduce(mu)
        if purity(W) >= 1 - 1e-10:
            tested += 1
            worst_short = max(worst_short, 1 - support_concentration(mu, to_pure_point(W)))
    _record(7, worst_short <= 1e-8, f"Dirac fiber: concentration shortfall {worst_short:.1e} (<= 1e-8) over "
                                    f"{tested} near-pure reductions (literal tolerance form, known unattainable)")


def test_criterion_07_provable_parts():
    """What does hold: the converse bound, and the shell bound ``m <= (1 - purity) / tol``.

    ``purity <= lambda_max = tr(W P) <= 1 - m tol`` for outside mass ``m``.
    """
    rng = np.random.default_rng(107)
    worst_bound = -np.inf
    for mu in _dirac_cases(rng):
        W = reduce(mu)
        p = purity(W)
        if p >= 1 - 1e-10:
            outside = 1 - support_concentration(mu, to_pure_point(W))
            worst_bound = max(worst_bound, outside - (max(0.0, 1 - p) / 1e-9 + 1e-12))
    worst_formula = worst_excess = 0.0
    for k in range(400):
        dim = 2 + k % 3
        P, Q = (PurePoint(v) for v in sample_haar_kets(dim, 2, rng))
        t = transition_probability(P, Q)
        p2 = purity(reduce(DiscreteMeasure([P, Q], [0.5, 0.5])))
        worst_formula = max(worst_formula, abs(p2 - (1 - 0.5 * (1 - t))))
        if t <= 0.9:
            worst_excess = max(worst_excess, p2 - 0.96)
    ok = worst_bound <= 0 and worst_formula <= 1e-12 and worst_excess <= 0
    _record(7, ok, f"Dirac fiber provable parts: two-point purity oracle error {worst_formula:.1e}, "
                   f"max purity - 0.96 = {worst_excess:.3f} (<= 0), shell bound slack {worst_bound:.1e} (<= 0)")


def test_criterion_08_kernel_reproduction():
    rng = np.random.default_rng(108)
    worst = 0.0
    for k in range(200):
        dim = 2 + k % 3
        F = random_povm(dim, int(rng.integers(1, 6)), rng)
        W = random_density(dim, rng)
        r = len(eigen_ensemble(W))
        mu = eigen_ensemble(W) if k % 2 == 0 else alternative_ensemble(W, random_isometry(r + 2, r, rng))
        K = kernel_from_povm(F)
        # Born-rule oracle from the raw effect matrices
        born = np.array([np.real(np.trace(W @ E)) for E in F.effects])
        worst = max(
            worst,
            np.max(np.abs(born - classical_distribution(K, mu))),
            np.max(np.abs(born - quantum_distribution(F, W))),
        )
    _record(8, worst <= 1e-10, f"kernel reproduction: max |tr(W F_b) - sum w K| = {worst:.1e} (<= 1e-10)")


def test_criterion_09_simulation():
    rng = np.random.default_rng(109)
    n = 100_000
    plus = PurePoint(np.ones(2))
    scenarios = [(Povm.from_basis(np.eye(2)), dirac(plus))]
    for _ in range(3):
        dim = int(rng.integers(2, 5))
        scenarios.append((random_povm(dim, 4, rng), random_measure(dim, rng, 8)))
    worst = 0.0
    for s, (F, mu) in enumerate(scenarios):
        K = kernel_from_povm(F)
        p = classical_distribution(K, mu)
        counts = simulate_outcomes(K, mu, n, 9000 + s)
        assert counts.sum() == n
        sigma = np.sqrt(n * p * (1 - p))
        dev = np.abs(counts - n * p)
        worst = max(worst, float(np.max(np.where(sigma > 0, dev / np.where(sigma > 0, sigma, 1), np.inf * dev))))
    _record(9, worst <= 4.0, f"simulation: max deviation {worst:.2f} sigma (<= 4) at n = {n}, "
                             f"{len(scenarios)} scenarios")


def test_criterion_10_representation():
    start = time.perf_counter()
    rng = np.random.default_rng(110)
    worst, runs = 0.0, 0
    setups = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 2)]  # for example3 the dim is the target dim
    per_setup = {ex: 100 // sum(1 for e, _ in setups if e == ex) + 1 for ex in (1, 2, 3)}
    for ex, dim in setups:
        ext = build_example(ex, dim, rng)
        tilde = extract_omega_tilde(ext)
        i = index_map(ext)
        for _ in range(per_setup[ex]):
            m = int(rng.integers(1, min(8, len(tilde)) + 1))
            pick = rng.choice(len(tilde), m, replace=False)
            mu = DiscreteMeasure([tilde[j] for j in pick], rng.dirichlet(np.ones(m)))
            delta, passed = verify_representation(ext, mu, i)
            assert passed
            worst = max(worst, delta)
            runs += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 10
    _record(10, ok, f"representation: max Delta {worst:.1e} (<= 1e-10) over {runs} measures, "
                    f"{elapsed:.2f}s (< 10s)")


def test_criterion_11_sharp_effects():
    points, labels = balanced_hemisphere_labels(200, 0)
    res = sharp_effect_residual(points, labels)
    oracle = bloch_affine_residual(points, labels)
    ok = int(labels.sum()) == 100 and abs(res - oracle) <= 1e-12 and res >= SHARP_SLACK * SHARP_R0
    _record(11, ok, f"sharp effects: residual {res:.6f} >= {SHARP_SLACK} * R0 = {SHARP_SLACK * SHARP_R0:.6f} "
                    f"(oracle {oracle:.6f})")


def test_criterion_12_purity_limit():
    rng = np.random.default_rng(112)
    worst_id = worst_bound = 0.0
    for k in range(1000):
        dim = 2 + k % 7
        P, Q = (PurePoint(v) for v in sample_haar_kets(dim, 2, rng))
        worst_id = max(worst_id, abs(1 - transition_probability(P, Q) - dist_opnorm(P, Q) ** 2))
        W = random_density(dim, rng)
        lam_max = np.linalg.eigvalsh(W)[-1]
        worst_bound = max(worst_bound, np.real(np.vdot(P.projector, W)) - lam_max)
    ok = worst_id <= 1e-12 and worst_bound <= 1e-12
    _record(12, ok, f"purity limit: |1 - tr PQ - rho_n^2| <= {worst_id:.1e}, "
                    f"max tr(WP) - lambda_max = {worst_bound:.1e} (both <= 1e-12)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
