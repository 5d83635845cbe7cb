#pragma once

#include <cstdint>

#include "walras/market.hpp"

namespace walras {

struct BudgetSweepReport {
    std::size_t samples = 0;
    double worst_residual = 0.0;  ///< relative: |d - d'| / max(1, |d|)
    bool pass = false;
};

/// Random Cobb-Douglas markets (2..max_agents agents, 2..max_commodities goods) with a
/// random report for one random agent; checks that the agent's budget determinant does
/// not move (tolerance 1e-9 relative).
BudgetSweepReport budget_invariance_sweep(std::size_t samples, std::uint64_t seed, Index max_agents = 5,
                                          Index max_commodities = 6);

struct OracleSweepReport {
    std::size_t samples = 0;
    double worst_ratio_deviation = 0.0;  ///< max |p_j/p_1 - q_j/q_1|
    bool pass = false;
};

/// Compares solve_cobb_douglas with brute_force_equilibrium on random markets with
/// 2..max_commodities goods (tolerance 1e-6 on price ratios).
OracleSweepReport oracle_equivalence_sweep(std::size_t samples, std::uint64_t seed, Index max_commodities = 3);

}  // namespace walras
