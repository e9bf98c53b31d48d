"""Acceptance criteria, one test per criterion.

Each test runs the same certification code the `enclose3d verify` CLI uses
and prints one pass/fail line with the measured value. The Monte Carlo
invariance criterion dominates the runtime (about a minute).
"""

import time

import pytest

from enclose3d.verify import (
    format_results,
    suite_allocation,
    suite_barrier,
    suite_bounds,
    suite_equivalence,
    suite_lyapunov,
    suite_speed,
)


def report(results):
    print()
    print(format_results(results))
    failed = [r for r in results if r.gating and not r.passed]
    assert not failed, "; ".join(r.name + ": " + r.detail for r in failed)


@pytest.fixture(scope="module")
def bounds_results():
    return suite_bounds()


def test_speed_controller_exactness():
    t0 = time.perf_counter()
    results = suite_speed()
    elapsed = time.perf_counter() - t0
    report(results)
    assert elapsed < 1.0, f"speed criterion must run in < 1 s, took {elapsed:.2f}"


def test_barrier_invariance_monte_carlo():
    t0 = time.perf_counter()
    results = suite_barrier(n=100)
    elapsed = time.perf_counter() - t0
    report(results)
    assert elapsed < 120.0, f"barrier criterion must run in < 2 min, took {elapsed:.1f}"


def test_convergence_at_desk_scale(bounds_results):
    picks = [r for r in bounds_results if r.name.startswith(("ST convergence", "MT steady-state"))]
    assert len(picks) == 2
    report(picks)


def test_disturbance_robustness(bounds_results):
    picks = [r for r in bounds_results if r.name.startswith("disturbance")]
    assert len(picks) == 1
    report(picks)


def test_lyapunov_decrease():
    report(suite_lyapunov())


def test_allocation_optimality():
    t0 = time.perf_counter()
    results = suite_allocation(n=1000)
    elapsed = time.perf_counter() - t0
    report(results)
    assert elapsed < 5.0, f"allocation criterion must run in < 5 s, took {elapsed:.2f}"


def test_cross_integrator_equivalence():
    report(suite_equivalence())


def test_equilibrium_centripetal_check(bounds_results):
    picks = [r for r in bounds_results if r.name.startswith("equilibrium")]
    assert len(picks) == 1
    report(picks)
