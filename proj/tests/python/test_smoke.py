"""Smoke tests for the pyhoi module: a few anchor values per subsystem."""

import math

import pytest

import pyhoi


def xor_table():
    probs = [0.0] * 8
    for a in range(2):
        for b in range(2):
            probs[4 * a + 2 * b + (a ^ b)] = 0.25
    return pyhoi.JointTable(["A", "B", "C"], [2, 2, 2], probs)


def test_entropy_and_mi():
    t = xor_table()
    assert pyhoi.entropy(t, [0, 1, 2]) == pytest.approx(2.0)
    assert pyhoi.mutual_information(t, [0, 1, 2]) == pytest.approx(-1.0)
    assert pyhoi.total_correlation(t, [0, 1, 2]) == pytest.approx(1.0)


def test_ising_round_trip():
    t = pyhoi.JointTable.from_ising({(0, 1): 0.7, (2,): -0.4}, 3)
    assert pyhoi.mfi_value(t, [0, 1]) == pytest.approx(0.7, abs=1e-9)
    assert pyhoi.mfi_value(t, [0, 1, 2]) == pytest.approx(0.0, abs=1e-9)


def test_gate_report_coefficients():
    rows = pyhoi.gate_report(["OR"], 0.23, 0.02)
    unit = 4 * math.log(0.23 / 0.02)
    assert rows[0]["J_star_A"] == pytest.approx(-unit, abs=1e-9)
    assert rows[0]["I_star_A"] == pytest.approx(0.0, abs=1e-9)


def test_outeraction_identity():
    t = pyhoi.gate_table("XNOR", 0.23, 0.02)
    direct = pyhoi.outeraction(t, [0])
    composed = pyhoi.mfi_value(t, [0, 1, 2]) + pyhoi.mfi_value(t, [1, 2])
    assert direct == pytest.approx(composed, abs=1e-9)


def test_lattice():
    lat = pyhoi.Lattice.chain_product([3, 3])
    assert lat.mobius([1, 1], [2, 2]) == 1
    assert lat.mobius([2, 1], [2, 2]) == -1
    assert lat.mobius([2, 0], [2, 2]) == 0
    assert lat.leq([1, 0], [2, 1])

    b2 = pyhoi.Lattice.boolean_algebra(2)
    assert b2.downset() == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_simulation_and_estimation():
    dag = pyhoi.CausalDag(3, [(0, 1), (1, 2)], "additive", 0.5, 0.4)
    samples = pyhoi.simulate_dag(dag, 20000, 7)
    est = pyhoi.estimate_mfi(samples, [0, 1], [2])
    phi = 0.5 * math.erfc(-1.25 / math.sqrt(2.0))
    assert est["value"] == pytest.approx(2 * math.log(phi / (1 - phi)), abs=0.3)

    boot = pyhoi.bootstrap_sign_fraction(samples, [0, 1], [2], 100, 3)
    assert boot["F"] < 0.05

    table = pyhoi.exact_dag_table(dag)
    blankets = pyhoi.discover_markov_blankets_exact(table)
    assert blankets == [{1}, {0, 2}, {1}]
    assert pyhoi.prune_targets(blankets, 3) == []


def test_dytri():
    rep = pyhoi.dytri_report(1e-4)
    assert rep["dyadic_exponents"] == {"p": 0, "eps": 0}
    assert rep["triadic_exponents"] == {"p": -64, "eps": 64}
    assert rep["max_shannon_gap"] < 1e-9


def test_zero_probability_error():
    t = pyhoi.JointTable(["A", "B"], [2, 2], [0.5, 0.5, 0.0, 0.0])
    with pytest.raises(pyhoi.ZeroProbabilityError):
        pyhoi.mfi_value(t, [0, 1])
