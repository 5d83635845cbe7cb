"""Competitive equilibria and incentive ratios of exchange markets."""

import json as _json

from ._core import (
    AssumptionViolation,
    Economy,
    Equilibrium,
    NoConvergence,
    OutOfRange,
    RatioResult,
    UnboundedDemand,
    Witness,
    adjugate,
    brute_force_equilibrium,
    budget_determinant,
    concentration_bound,
    evaluate_deviation,
    example_market,
    example_report,
    excess_demand,
    incentive_ratio,
    is_equilibrium,
    price_from_adjugate,
    ratio_closed_form_2x2,
    solve,
    solve_cd_2x2,
    spending_matrix,
    utility,
    witness_cd,
    witness_leontief,
    witness_linear,
)
from . import _core

__version__ = "0.1.0"


def reproduce():
    """Run the worked three-good example; returns (report dict, exit code)."""
    text, code = _core._reproduce()
    return _json.loads(text), code


def verify(suite="all", seed=7, samples=None):
    """Run a verification suite; returns (report dict, exit code)."""
    text, code = _core._verify(suite, seed, samples)
    return _json.loads(text), code


def load_market(text):
    """Parse a market document; returns (Economy, renormalized, warnings)."""
    return _core._load_market(text)


def dump_market(economy):
    return _core._dump_market(economy)
