#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "walras/errors.hpp"

namespace walras {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class UtilityKind { Linear, Leontief, CobbDouglas };

std::string_view to_string(UtilityKind kind);
std::optional<UtilityKind> parse_utility_kind(std::string_view text);

/// A utility function from one of the three supported families, described by its
/// weight vector over commodities.
///
///   Linear       u(x) = sum_j alpha_j x_j
///   Leontief     u(x) = min_j x_j / alpha_j
///   CobbDouglas  u(x) = prod_j x_j^alpha_j      (x^0 == 1, also at x == 0)
struct UtilityFunction {
    UtilityKind kind = UtilityKind::CobbDouglas;
    Vector alpha;

    static UtilityFunction linear(Vector alpha) { return {UtilityKind::Linear, std::move(alpha)}; }
    static UtilityFunction leontief(Vector alpha) { return {UtilityKind::Leontief, std::move(alpha)}; }
    static UtilityFunction cobb_douglas(Vector alpha) {
        return {UtilityKind::CobbDouglas, std::move(alpha)};
    }

    Index commodities() const { return alpha.size(); }
};

bool operator==(const UtilityFunction& a, const UtilityFunction& b);

/// Pure exchange economy. Row i of `endowments` is agent i's endowment; every column
/// is expected to sum to one (total supply of each commodity is normalized).
struct Economy {
    Matrix endowments;
    std::vector<UtilityFunction> utilities;

    Index agents() const { return endowments.rows(); }
    Index commodities() const { return endowments.cols(); }
    Vector supply() const { return endowments.colwise().sum().transpose(); }
    Vector endowment(Index agent) const { return endowments.row(agent).transpose(); }
    /// Kind of the first agent's utility; economies never mix families.
    UtilityKind kind() const;
};

bool operator==(const Economy& a, const Economy& b);

/// The utilities announced to the market. Equal to the true utilities when everyone is
/// truthful; a single misreporting agent differs in one coordinate.
struct ReportProfile {
    std::vector<UtilityFunction> reports;

    static ReportProfile truthful(const Economy& economy) { return {economy.utilities}; }
    ReportProfile with_report(Index agent, UtilityFunction report) const;
    const UtilityFunction& operator[](Index agent) const { return reports.at(static_cast<std::size_t>(agent)); }
    Index size() const { return static_cast<Index>(reports.size()); }
};

struct Equilibrium {
    Vector prices;
    Matrix allocation;
    Vector clearing_residual;  ///< sum_i x_ij - sum_i e_ij
    Vector budget_residual;    ///< p.x_i - p.e_i
};

/// Wraps prices and allocation with their clearing and budget residuals.
Equilibrium make_equilibrium(const Economy& economy, Vector prices, Matrix allocation);

struct SolverConfig {
    double clearing_tol = 1e-8;
    double price_floor = 0.0;
    int max_iterations = 10000;
    int grid_resolution = 21;
};

struct Violation {
    std::string rule;
    std::vector<Index> indices;
    std::string message;
};

/// Checks the type invariants of `economy`. With `require_assumption1` it also checks
/// strictly positive endowments and that every commodity is demanded by some agent.
std::vector<Violation> validate_economy(const Economy& economy, bool require_assumption1);

/// Strong competitiveness of an announced profile: every commodity has a reporter with
/// positive weight on it.
std::vector<Violation> validate_reports(const Economy& economy, const ReportProfile& reports,
                                        bool require_strong_competitiveness);

std::string describe(const std::vector<Violation>& violations);

double utility_eval(const UtilityFunction& u, const Vector& bundle);

/// The optimal set of the consumer problem max u(x) s.t. p.x <= budget, x >= 0.
///
/// `bundle` is one optimal bundle (the only one when single_valued()), with nothing of
/// the free goods and equal spending across a linear support. Commodities in
/// `free_goods` have price zero and
/// zero weight, so any quantity of them is optimal. For linear utilities the budget may
/// be split arbitrarily across `spend_support` (the bang-per-buck maximizers); a zero
/// linear utility makes every affordable bundle optimal.
struct DemandSet {
    Vector bundle;
    std::vector<Index> spend_support;
    std::vector<Index> free_goods;
    bool whole_budget_set = false;
    double budget = 0.0;

    bool single_valued() const;
};

DemandSet demand(const UtilityFunction& u, const Vector& prices, double budget);

/// Linear demand with an explicit relative tie tolerance for the bang-per-buck argmax.
DemandSet linear_demand(const Vector& alpha, const Vector& prices, double budget, double tie_tol);

/// Supremum of u over the budget set {x >= 0 : p.x <= budget}; +inf when unbounded.
double max_utility(const UtilityFunction& u, const Vector& prices, double budget);

/// z_j(p) = sum_i x_ij(p, p.e_i) - sum_i e_ij. Throws MultiValuedDemand when some
/// agent's demand is not a single bundle.
Vector excess_demand(const Economy& economy, const ReportProfile& reports, const Vector& prices);

struct EquilibriumVerdict {
    bool ok = false;
    Vector clearing_residual;
    Vector budget_residual;
    Vector optimality_gap;  ///< max utility over budget set minus utility of x_i, per agent
    std::vector<std::string> failures;
};

/// Checks market clearing, budget feasibility and optimality of every bundle under the
/// announced utilities. Handles correspondence-valued demand, so it can certify
/// equilibria that `excess_demand` cannot evaluate.
EquilibriumVerdict is_equilibrium(const Economy& economy, const ReportProfile& reports,
                                  const Vector& prices, const Matrix& allocation, double tol);

}  // namespace walras
