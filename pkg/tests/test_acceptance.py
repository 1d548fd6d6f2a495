"""The nine acceptance criteria at full scale, one pass/fail line each."""
import time

import pytest

from dlattice import suites


@pytest.fixture(scope="module")
def theorem_results():
    start = time.perf_counter()
    partition, rho_glue = suites.theorem_suite(6)
    return partition, rho_glue, time.perf_counter() - start


def report(capsys, number, *results, extra=""):
    passed = all(r.passed for r in results)
    detail = "; ".join(f"{r.name}: {r.checked} checked, {len(r.failures)} failures" for r in results)
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if passed else 'FAIL'} ({detail}{extra})")
    return passed


def test_criterion_1_partition_matches_two_isomorphism(theorem_results, capsys):
    partition, _, seconds = theorem_results
    ok = report(capsys, 1, partition, extra=f"; {seconds:.1f}s")
    assert ok, partition.failures[:5]
    assert seconds <= 600


def test_criterion_2_short_covectors_are_orientations(capsys):
    res = suites.short_graph_suite(5)
    assert report(capsys, 2, res), res.failures[:5]


def test_criterion_3_numeric_example(capsys):
    res = suites.numeric_example_suite()
    assert report(capsys, 3, res), res.failures


def test_criterion_4_van_der_blij(theorem_results, capsys):
    _, rho_glue, _ = theorem_results
    standard = suites.van_der_blij_standard(6)
    assert report(capsys, 4, standard, rho_glue), (standard.failures, rho_glue.failures[:5])
    assert rho_glue.checked > 0


def test_criterion_5_kirchhoff(capsys):
    res = suites.kirchhoff_suite(7)
    assert report(capsys, 5, res), res.failures[:5]


def test_criterion_6_reconstruction_round_trip(capsys):
    start = time.perf_counter()
    res = suites.roundtrip_suite(200, seed=2024)
    seconds = time.perf_counter() - start
    assert report(capsys, 6, res, extra=f"; {seconds:.1f}s"), res.failures[:5]
    assert res.checked == 200
    assert seconds <= 300


def test_criterion_7_two_bridge_classes(capsys):
    res, report_ = suites.two_bridge_suite(8)
    assert report(capsys, 7, res, extra=f"; {len(report_.classes)} classes"), res.failures


def test_criterion_8_mutants_share_crossing_number(capsys):
    res = suites.crossing_number_suite(200, seed=2024, max_crossings=8)
    assert report(capsys, 8, res), res.failures[:5]


def test_criterion_9_methods_agree(capsys):
    res = suites.method_suite(6)
    assert report(capsys, 9, res), res.failures[:5]
