#include "walras/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "walras/adjugate.hpp"
#include "walras/sampler.hpp"
#include "walras/solvers.hpp"

namespace walras {

BudgetSweepReport budget_invariance_sweep(std::size_t samples, std::uint64_t seed, Index max_agents,
                                          Index max_commodities) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> agents_dist(2, max_agents);
    std::uniform_int_distribution<Index> goods_dist(2, max_commodities);
    BudgetSweepReport report;
    for (std::size_t s = 0; s < samples; ++s) {
        const Index n = agents_dist(rng);
        const Index m = goods_dist(rng);
        const Economy economy = sample_cobb_douglas_economy(n, m, 1.0, 1.0, rng);
        const Index agent = std::uniform_int_distribution<Index>(0, n - 1)(rng);
        const ReportProfile truthful = ReportProfile::truthful(economy);
        const ReportProfile deviant =
            truthful.with_report(agent, UtilityFunction::cobb_douglas(sample_dirichlet(m, 1.0, rng)));
        const double before = budget_determinant(economy, truthful, agent);
        const double residual = check_budget_invariance(economy, truthful, deviant, agent);
        report.worst_residual = std::max(report.worst_residual, residual / std::max(1.0, std::abs(before)));
        ++report.samples;
    }
    report.pass = report.worst_residual <= 1e-9;
    return report;
}

OracleSweepReport oracle_equivalence_sweep(std::size_t samples, std::uint64_t seed, Index max_commodities) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> agents_dist(2, 3);
    std::uniform_int_distribution<Index> goods_dist(2, max_commodities);
    OracleSweepReport report;
    SolverConfig config;
    config.grid_resolution = 41;
    for (std::size_t s = 0; s < samples; ++s) {
        const Economy economy = sample_cobb_douglas_economy(agents_dist(rng), goods_dist(rng), 1.0, 1.0, rng);
        const ReportProfile reports = ReportProfile::truthful(economy);
        const Vector closed = ratio_normalized(solve_cobb_douglas(economy, reports, config).prices);
        const Vector brute = ratio_normalized(brute_force_equilibrium(economy, reports, config).prices);
        report.worst_ratio_deviation =
            std::max(report.worst_ratio_deviation, (closed - brute).cwiseAbs().maxCoeff());
        ++report.samples;
    }
    report.pass = report.worst_ratio_deviation <= 1e-6;
    return report;
}

}  // namespace walras
