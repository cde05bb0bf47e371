"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -v -s`` to see
them all); the assertions carry the same tolerances.
"""

import math
import time

import numpy as np
import pytest

from slspec.bessel import bessel_j
from slspec.solver import (
    ProblemSpec,
    fd_oracle,
    find_eigenvalues_spps,
    find_eigenvalues_transmutation,
    normalize,
)
from slspec.spps import build_phi_basis, spps_characteristic, spps_solution
from slspec.transmute import TransmutationChar, chebyshev_table, phi_char, transmuted_images

PI2 = math.pi**2

REFERENCE = {
    1: 4.8966693800,
    2: 10.045189893,
    3: 16.019267250,
    4: 23.266270940,
    5: 32.26370704,
    6: 43.2200196,
    7: 56.18159,
    8: 71.15299,
    9: 88.1321,
    10: 107.11,
    11: 128.10,
    17: 296.07,
    28: 791.05,
    43: 1856.05,
    50: 2507.0,
}


def report(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def exp_table_run():
    """q = e^x on (0, pi), N = 18, defaults, scan wide enough for row 50."""
    spec = ProblemSpec(potential="exp", interval=(0.0, math.pi), beta_max=160.0)
    t0 = time.perf_counter()
    norm = normalize(spec)
    spectrum = find_eigenvalues_transmutation(norm, spec)
    wall = time.perf_counter() - t0
    return spectrum, wall


@pytest.fixture(scope="module")
def free_runs():
    spec = ProblemSpec(potential="zero", interval=(0.0, 1.0), beta_max=16.5)
    norm = normalize(spec)
    return (
        find_eigenvalues_transmutation(norm, spec),
        find_eigenvalues_spps(norm, spec),
    )


@pytest.fixture(scope="module")
def const_runs():
    spec = ProblemSpec(potential="const:1", interval=(0.0, 1.0), beta_max=16.5)
    norm = normalize(spec)
    return (
        find_eigenvalues_transmutation(norm, spec),
        find_eigenvalues_spps(norm, spec),
    )


@pytest.fixture(scope="module")
def exp_normalized_basis():
    spec = ProblemSpec(potential="exp", interval=(0.0, math.pi))
    return build_phi_basis(normalize(spec).q_unit, 100)


@pytest.fixture(scope="module")
def poly_run():
    spec = ProblemSpec(potential="poly:1,0,1", interval=(0.0, 1.0), beta_max=19.0)
    norm = normalize(spec)
    return norm, find_eigenvalues_transmutation(norm, spec)


def test_criterion_1_reference_table_low_rows(exp_table_run):
    spectrum, wall = exp_table_run
    by_index = {r.index: r for r in spectrum.records}
    worst = {}
    for idx, tol in [(i, 1e-7) for i in range(1, 6)] + [
        (i, 5e-4) for i in range(6, 10)
    ] + [(10, 1e-2), (11, 1e-2)]:
        rel = abs(by_index[idx].lam - REFERENCE[idx]) / REFERENCE[idx]
        worst[idx] = (rel, tol)
    ok = all(rel <= tol for rel, tol in worst.values()) and wall < 30.0
    detail = (
        f"rel errs 1-5 <= {max(worst[i][0] for i in range(1, 6)):.2e} (tol 1e-7), "
        f"6-9 <= {max(worst[i][0] for i in range(6, 10)):.2e} (tol 5e-4), "
        f"10-11 <= {max(worst[i][0] for i in (10, 11)):.2e} (tol 1e-2), "
        f"wall {wall:.1f}s (< 30s)"
    )
    report(1, ok, detail)


def test_criterion_2_high_index_anomaly(exp_table_run):
    spectrum, _ = exp_table_run
    by_index = {r.index: r for r in spectrum.records}
    rel28 = abs(by_index[28].lam - REFERENCE[28]) / REFERENCE[28]
    rel43 = abs(by_index[43].lam - REFERENCE[43]) / REFERENCE[43]
    for idx in (17, 50):  # reported, not asserted
        rec = by_index.get(idx)
        rel = abs(rec.lam - REFERENCE[idx]) / REFERENCE[idx]
        print(
            f"  row {idx}: computed {rec.lam:.6f} vs reference {REFERENCE[idx]} "
            f"(rel {rel:.2e}, reported only)"
        )
    ok = rel28 <= 1e-4 and rel43 <= 5e-4
    report(2, ok, f"row 28 rel {rel28:.2e} (tol 1e-4), row 43 rel {rel43:.2e} (tol 5e-4)")


def test_criterion_3_free_problem_exactness(free_runs):
    worst = 0.0
    for spectrum in free_runs:
        for n in range(1, 6):
            rel = abs(spectrum.records[n - 1].lam - n**2 * PI2) / (n**2 * PI2)
            worst = max(worst, rel)
    report(3, worst <= 1e-9, f"max rel err over both methods {worst:.2e} (tol 1e-9)")


def test_criterion_4_constant_potential(const_runs):
    worst = 0.0
    for spectrum in const_runs:
        for n in range(1, 6):
            want = 1.0 + n**2 * PI2
            rel = abs(spectrum.records[n - 1].lam - want) / want
            worst = max(worst, rel)
    report(4, worst <= 1e-8, f"max rel err over both methods {worst:.2e} (tol 1e-8)")


def test_criterion_5_cross_method_identity(exp_normalized_basis):
    basis = exp_normalized_basis
    # N deep enough that the expansion tail clears the tolerance at beta=20
    char = TransmutationChar(transmuted_images(basis, chebyshev_table(59)), 29)
    char18 = TransmutationChar(transmuted_images(basis, chebyshev_table(37)), 18)
    worst = worst18 = 0.0
    for beta in [0.5] + [float(k) for k in range(1, 21)]:
        phi = phi_char(char, beta)
        s = spps_characteristic(basis, -(beta**2))
        worst = max(worst, abs(phi - beta * s) / (1.0 + abs(phi)))
        phi18 = phi_char(char18, beta)
        worst18 = max(worst18, abs(phi18 - beta * s) / (1.0 + abs(phi18)))
    print(f"  default truncation (N=18) mismatch {worst18:.2e} for reference")
    report(5, worst <= 1e-8, f"max normalized mismatch {worst:.2e} (tol 1e-8)")


def test_criterion_6_wronskian():
    spec = ProblemSpec(potential="exp", interval=(0.0, 1.0))
    basis = build_phi_basis(normalize(spec).q_unit, 100)
    worst = 0.0
    for lam in (-50.0, -10.0, 0.0, 10.0):
        u1 = spps_solution(basis, lam, which="u1")
        u2 = spps_solution(basis, lam, which="u2")
        w = u1.u.values * u2.u_prime.values - u1.u_prime.values * u2.u.values
        worst = max(worst, float(np.max(np.abs(w - 1.0))))
    report(6, worst <= 1e-8, f"max |W - 1| over lam set {worst:.2e} (tol 1e-8)")


def test_criterion_7_sine_expansion():
    xs = np.linspace(-1.0, 1.0, 401)
    theta = np.arccos(xs)
    worst = 0.0
    for beta in (1.0, 10.0, 30.0):
        total = np.zeros_like(xs)
        for m in range(41):
            n = 2 * m + 1
            total += (-1.0) ** m * bessel_j(n, beta) * np.cos(n * theta)
        worst = max(worst, float(np.max(np.abs(2.0 * total - np.sin(beta * xs)))))
    report(7, worst <= 1e-12, f"max-norm deviation {worst:.2e} (tol 1e-12)")


def test_criterion_8_oracle_equivalence(exp_table_run, poly_run):
    exp_spectrum, _ = exp_table_run
    spec = ProblemSpec(potential="exp", interval=(0.0, math.pi))
    exp_oracle = fd_oracle(normalize(spec), 5, mesh=1000)
    poly_norm, poly_spectrum = poly_run
    poly_oracle = fd_oracle(poly_norm, 5, mesh=1000)
    worst = 0.0
    for n in range(5):
        worst = max(
            worst,
            abs(exp_spectrum.records[n].lam - exp_oracle[n]) / exp_oracle[n],
            abs(poly_spectrum.records[n].lam - poly_oracle[n]) / poly_oracle[n],
        )
    report(8, worst <= 1e-5, f"max rel disagreement vs FD oracle {worst:.2e} (tol 1e-5)")


def test_criterion_9_realness_diagnostics(
    exp_table_run, free_runs, const_runs, poly_run
):
    runs = [exp_table_run[0], *free_runs, *const_runs, poly_run[1]]
    worst = max(s.diagnostics["max_im_residual"] for s in runs)
    report(
        9,
        worst <= 1e-9,
        f"max |Im|/(1+|value|) over all real-q scans {worst:.2e} (tol 1e-9)",
    )
