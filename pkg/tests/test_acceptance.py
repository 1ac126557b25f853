"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The terminal summary (see conftest) repeats the verdicts at the end of a run.
"""

import time

import numpy as np
import pytest
from scipy.linalg import logm

from qmon.darwinism import (
    EnvironmentModel,
    evolve_dense,
    pointer_states,
    reduced_state_structured,
    system_state_after,
)
from qmon.monitoring import (
    accessible_info,
    decompose_irreality,
    dephase,
    irreality,
    monitor,
    monitor_repeated,
)
from qmon.operators import (
    ket_to_density,
    make_rng,
    partial_trace,
    random_density,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from qmon.phases import analytic_phases, eta_from_phases, solve_phases
from qmon.qubit import monitored_by_cmaybe


def verdict(number, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}")
    assert ok, detail


def entropy_via_logm(rho):
    """Independent entropy evaluation through the matrix logarithm (full-rank input)."""
    return float(-np.trace(rho @ logm(rho)).real / np.log(2))


def test_criterion_01_qutrit_noise_law():
    thetas = np.linspace(-2 * np.pi / 3, 2 * np.pi / 3, 100)
    worst = max(abs(eta_from_phases(analytic_phases(3, t)) - (1 + 2 * np.cos(t)) / 3) for t in thetas)
    verdict(1, worst <= 1e-14, f"max |eta - (1+2cos)/3| = {worst:.2e}")


def test_criterion_02_perfect_record():
    phases = analytic_phases(3, 2 * np.pi / 3)
    e = pointer_states(phases)
    gram = np.abs(e.conj() @ e.T - np.eye(3)).max()
    model = EnvironmentModel(phases, n=1)
    worst_map = 0.0
    for k in range(3):
        ket = np.eye(3)[k]
        out = evolve_dense(ket_to_density(ket), model)
        worst_map = max(worst_map, np.abs(out - ket_to_density(np.kron(ket, e[k]))).max())
    ok = gram < 1e-10 and worst_map < 1e-10
    verdict(2, ok, f"pointer Gram deviation {gram:.1e}, map deviation {worst_map:.1e}")


def test_criterion_03_monitoring_realization():
    rng = make_rng(3)
    worst = 0.0
    for d in range(2, 8):
        for target in (0.0, 0.37, 0.8):
            report = solve_phases(d, target, seed=d)
            assert report.success
            eta = eta_from_phases(report.phases)
            for k in range(20):
                d_b = 1 + k % 2
                rho = random_density(d * d_b, seed=rng)
                model = EnvironmentModel(report.phases, n=1, d_B=d_b)
                traced = partial_trace(evolve_dense(rho, model), model.layout(), [0, 1])
                worst = max(worst, trace_distance(traced, monitor(rho, 1 - eta, [d, d_b])))
    verdict(3, worst < 1e-8, f"max trace distance {worst:.2e} over d=2..7")


def test_criterion_04_effective_noise():
    rng = make_rng(4)
    worst_law = worst_backend = 0.0
    for target in (0.3, 0.6, 0.9):
        phases = solve_phases(3, target, seed=0).phases
        eta = eta_from_phases(phases)
        for n in range(6):
            for k in range(5):
                d_b = 1 + k % 2
                rho = random_density(3 * d_b, seed=rng)
                model = EnvironmentModel(phases, n, d_B=d_b)
                omega = evolve_dense(rho, model)
                traced = partial_trace(omega, model.layout(), [0, 1])
                worst_law = max(worst_law, trace_distance(traced, monitor(rho, 1 - eta**n, [3, d_b])))
                for m in range(n + 1):
                    dense = partial_trace(omega, model.layout(), range(2 + m))
                    worst_backend = max(worst_backend, trace_distance(reduced_state_structured(rho, model, m), dense))
    ok = worst_law < 1e-9 and worst_backend < 1e-9
    verdict(4, ok, f"law deviation {worst_law:.1e}, backend deviation {worst_backend:.1e}")


def test_criterion_05_recursion_identity():
    rng = make_rng(5)
    worst = 0.0
    for eps in np.round(np.arange(0.1, 1.0, 0.1), 10):
        for n in range(1, 7):
            rho = random_density(6, seed=rng)
            lhs = monitor_repeated(rho, eps, n, [3, 2])
            rhs = monitor(rho, 1 - (1 - eps) ** n, [3, 2])
            worst = max(worst, np.abs(lhs - rhs).max())
    verdict(5, worst < 1e-12, f"max entry deviation {worst:.1e}")


def test_criterion_06_convergence_to_realism():
    rng = make_rng(6)
    slack = np.inf
    for d in (2, 3, 4, 5):
        for target in (0.2, 0.5, 0.9):
            phases = solve_phases(d, target, seed=1).phases
            eta = eta_from_phases(phases)
            rho = random_density(2 * d, seed=rng)
            target_state = dephase(rho, layout=[d, 2])
            for n in range(201):
                dist = trace_distance(system_state_after(rho, EnvironmentModel(phases, n, d_B=2)), target_state)
                slack = min(slack, d * eta**n + 1e-9 - dist)
    verdict(6, slack >= 0, f"smallest margin to d*eta^n bound {slack:.2e}")


def test_criterion_07_solver_existence_sweep():
    start = time.perf_counter()
    failures = []
    for d in (4, 5, 6, 7):
        for target in np.round(np.linspace(0, 1, 11), 10):
            r = solve_phases(d, float(target), seed=0)
            if not (r.success and r.residual_norm < 1e-10 and abs(r.achieved_eta - target) < 1e-8):
                failures.append((d, target))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    verdict(7, ok, f"{44 - len(failures)}/44 solved in {elapsed:.2f} s")


def test_criterion_08_qubit_cross_check():
    rng = make_rng(8)
    worst = 0.0
    for theta in np.linspace(0, np.pi / 2, 20):
        for k in range(10):
            d_b = 1 + k % 2
            rho = random_density(2 * d_b, seed=rng)
            model = EnvironmentModel(analytic_phases(2, np.pi / 2 - theta), n=1, d_B=d_b)
            general = partial_trace(evolve_dense(rho, model), model.layout(), [0, 1])
            worst = max(worst, trace_distance(monitored_by_cmaybe(rho, theta), general))
    verdict(8, worst < 1e-10, f"max channel distance {worst:.1e}")


def test_criterion_09_information_identities():
    rng = make_rng(9)
    same = indep = gap = 0.0
    bound = np.inf
    for k in range(100):
        dim = (2, 3, 4, 6)[k % 4]
        rho = random_density(dim, seed=rng)
        eps = rng.uniform(0, 1)
        out = monitor(rho, eps)
        s_in, s_out = von_neumann_entropy(rho), von_neumann_entropy(out)
        delta_info = accessible_info(rho) - accessible_info(out)
        same = max(same, abs(delta_info - (s_out - s_in)))
        ind = (np.log2(dim) - entropy_via_logm(rho)) - (np.log2(dim) - entropy_via_logm(out))
        indep = max(indep, abs(delta_info - ind))
        gap = max(gap, abs(accessible_info(rho) - accessible_info(dephase(rho)) - irreality(rho)))
        bound = min(bound, (s_out - s_in) - eps * irreality(rho))
    ok = same < 1e-12 and indep < 1e-10 and gap < 1e-10 and bound >= -1e-9
    verdict(9, ok, f"same-expr {same:.1e}, independent {indep:.1e}, full-dephasing gap {gap:.1e}, bound margin {bound:.2e}")


def test_criterion_10_irreality_decomposition():
    rng = make_rng(10)
    worst = 0.0
    for k in range(100):
        d_a, d_b = 2 + k % 2, 1 + (k // 2) % 3
        rho = random_density(d_a * d_b, rank=1 + k % (d_a * d_b), seed=rng)
        coherence, discord = decompose_irreality(rho, layout=[d_a, d_b])
        worst = max(worst, abs(coherence + discord - irreality(rho, layout=[d_a, d_b])))
    verdict(10, worst < 1e-9, f"max |coherence + discord - irreality| = {worst:.1e}")
