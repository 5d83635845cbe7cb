#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "walras/market.hpp"
#include "walras/solvers.hpp"

namespace walras {

struct OptimizerSettings {
    int grid_resolution = 21;  ///< points per simplex edge
    int refine_iterations = 200;
    double refine_shrink = 0.5;
    std::uint64_t seed = 0;  ///< fixes the polling order of the pattern search
};

struct RatioQuery {
    Economy economy;
    Index agent_index = 0;
    OptimizerSettings optimizer;
    SolverConfig solver;
};

struct TraceEntry {
    Vector report;
    double utility = 0.0;  ///< true utility at the resulting equilibrium; NaN when skipped
    bool skipped = false;  ///< the report left some commodity undemanded
};

struct RatioResult {
    Equilibrium truthful_equilibrium;
    double truthful_utility = 0.0;
    UtilityFunction best_report;
    Equilibrium deviant_equilibrium;
    double deviant_utility = 0.0;  ///< evaluated with the true utility
    double ratio = 1.0;
    /// Relative change of the deviating agent's budget determinant between the truthful
    /// and the best deviant profile.
    double budget_invariance_residual = 0.0;
    std::vector<TraceEntry> trace;
};

/// Best misreport of one agent in a Cobb-Douglas market with positive endowments and
/// strong competitiveness. Searches the exponent simplex with a full grid followed by a
/// pattern search around the best grid point. The truthful report is always evaluated,
/// so the ratio never drops below one.
RatioResult incentive_ratio_cd(const RatioQuery& query);

/// Ratio attained by one fixed report of `agent` (no search).
RatioResult evaluate_deviation(const Economy& economy, Index agent, const Vector& report,
                               const SolverConfig& solver = {});

struct ClosedForm2x2 {
    double t1 = 1.0;
    double t2 = 1.0;
    double ratio = 1.0;  ///< t1^alpha * t2^(1 - alpha)
};

/// Utility ratio of agent 1 in the 2x2 market of solve_cd_2x2 when it reports
/// `alpha_dev` instead of `alpha`.
ClosedForm2x2 ratio_closed_form_2x2(double alpha, double alpha_dev, double beta, double e11, double e12);

struct FactCheckReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    bool pass = false;
};

/// Samples (alpha, alpha', beta, e11, e12) uniformly in (0,1)^5 and checks
///   alpha' >= alpha  =>  T1 <= alpha'/alpha  and  T2 <= 1
///   alpha' <  alpha  =>  T1 < 1              and  T2 < (1 - alpha')/(1 - alpha)
FactCheckReport check_2x2_facts(std::size_t samples, std::uint64_t seed);

/// An analytic pair of equilibria with unbounded utility ratio as the parameter shrinks.
struct Witness {
    Economy economy;
    ReportProfile truthful_reports;
    ReportProfile deviant_reports;
    Equilibrium truthful;
    Equilibrium deviant;
    EquilibriumVerdict truthful_verdict;
    EquilibriumVerdict deviant_verdict;
    double ratio = 0.0;        ///< u_0(x'_0) / u_0(x_0) from the allocations
    double closed_form = 0.0;  ///< the analytic expression for the same ratio

    EquilibriumSet equilibria() const { return {{truthful, deviant}, false, std::nullopt}; }
    bool certified() const { return truthful_verdict.ok && deviant_verdict.ok; }
};

/// Linear market where agent 1 cares only for good 1 and agent 2 for nothing; two
/// equilibria give agent 1 utilities epsilon and 1.
Witness witness_linear(double epsilon);
/// Leontief market where every price ray clears; ratio (1+delta)/(2(eps+delta-delta eps)).
Witness witness_leontief(double epsilon, double delta);
/// Cobb-Douglas market without positive endowments; reporting (1, 0) drives the price of
/// good 2 to zero. Ratio sqrt(2/epsilon).
Witness witness_cd(double epsilon);

struct SamplerConfig {
    Index agents = 2;
    Index commodities = 3;
    std::size_t samples = 200;
    std::uint64_t seed = 7;
    double endowment_concentration = 1.0;
    double exponent_concentration = 1.0;
    /// Economies evaluated before the random draws (counted in `samples`).
    std::vector<Economy> anchors;
    OptimizerSettings optimizer;
};

struct BoundReport {
    Index agents = 0;
    Index commodities = 0;
    std::size_t samples = 0;
    double bound = 0.0;  ///< m
    double max_ratio = 0.0;
    std::size_t argmax_sample = 0;
    Economy argmax_economy;
    double worst_budget_residual = 0.0;
    std::vector<double> ratios;
    bool pass = false;
};

/// Runs incentive_ratio_cd for agent 0 on sampled markets and checks ratio <= m + 1e-6.
BoundReport verify_upper_bound_m(const SamplerConfig& config);

struct PowerInequalityReport {
    std::size_t samples = 0;
    double worst_excess = 0.0;  ///< max of x^y - e^{xy/e}
    bool pass = false;
};

/// Checks x^y <= e^{xy/e} + 1e-12 (0^0 := 1) on every sample.
PowerInequalityReport check_power_inequality(std::span<const std::pair<double, double>> samples);

std::vector<std::pair<double, double>> uniform_power_samples(std::size_t count, std::uint64_t seed,
                                                             double upper = 10.0);

/// Two agents, three goods, endowments (.99,.01,.01)/(.01,.99,.99), exponents
/// (.2,.3,.5)/(.4,.6,0). Agent 0 gains about 1.5x by reporting (.85,.1,.05).
Economy manipulable_example_market();
Vector manipulable_example_report();

}  // namespace walras
