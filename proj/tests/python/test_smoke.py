import math

import numpy as np
import pytest

import walras


def test_example_prices_and_ratio():
    econ = walras.example_market()
    (eq,) = walras.solve(econ)
    assert eq.price_ratios == pytest.approx([1.0, 1.5, 0.505], abs=2e-3)
    r = walras.evaluate_deviation(econ, 0, walras.example_report())
    assert r.ratio == pytest.approx(1.4977, abs=1e-4)
    assert r.budget_invariance_residual < 1e-9


def test_search_finds_a_gain():
    r = walras.incentive_ratio(walras.example_market(), agent=0)
    assert 1.497 <= r.ratio <= 3.0


def test_economy_from_arrays():
    econ = walras.Economy("cobb_douglas", np.full((2, 2), 0.5), np.full((2, 2), 0.5))
    (eq,) = walras.solve(econ)
    assert eq.price_ratios[1] == pytest.approx(1.0)
    assert walras.is_equilibrium(econ, eq.prices, eq.allocation)
    assert walras.excess_demand(econ, np.array([1.0, 1.0])) == pytest.approx([0.0, 0.0], abs=1e-15)


def test_assumption_violation_is_a_value_error():
    econ = walras.witness_cd(0.1).economy
    with pytest.raises(ValueError):
        walras.incentive_ratio(econ)


def test_witnesses():
    assert walras.witness_cd(0.02).ratio == pytest.approx(10.0)
    assert walras.witness_linear(0.01).certified
    assert walras.witness_leontief(0.001, 0.001).ratio == pytest.approx(250.375, rel=1e-5)
    with pytest.raises(ValueError):
        walras.witness_cd(2.0)


def test_adjugate_and_bound():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert walras.adjugate(m) == pytest.approx(np.array([[4.0, -2.0], [-3.0, 1.0]]))
    assert walras.concentration_bound(np.full(4, 0.25)) == pytest.approx(4.0)
    t1, t2, ratio = walras.ratio_closed_form_2x2(0.3, 0.6, 0.5, 0.5, 0.5)
    assert ratio == pytest.approx(t1**0.3 * t2**0.7)


def test_market_round_trip():
    econ = walras.example_market()
    back, renormalized, warnings = walras.load_market(walras.dump_market(econ))
    assert back == econ
    assert not renormalized and warnings == []


def test_reproduce_and_verify():
    report, code = walras.reproduce()
    assert code == 0
    assert report["ratio_rounded"] == 1.5
    report, code = walras.verify("power", seed=3, samples=500)
    assert code == 0 and report["suites"]["power"]["pass"]
    assert math.isclose(walras.solve_cd_2x2(0.5, 0.5, 0.5, 0.5)[0], 1.0)
