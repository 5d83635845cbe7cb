#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walras/market.hpp"

namespace walras {

struct EquilibriumSet {
    std::vector<Equilibrium> members;
    bool exhaustive = false;
    /// Set when the members lie on a segment of clearing prices (a continuum).
    std::optional<std::string> family_note;
};

/// Prices scaled to sum to one.
Vector simplex_normalized(const Vector& prices);
/// Prices divided by the first price (p_1 == 1).
Vector ratio_normalized(const Vector& prices);

/// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

/// All points of the simplex in R^m whose coordinates are multiples of 1/(resolution-1),
/// in lexicographic order. With `interior_only`, points with a zero coordinate are dropped.
std::vector<Vector> simplex_grid(Index m, int resolution, bool interior_only);

/// Unique Cobb-Douglas equilibrium under positive endowments and strongly competitive
/// reports. Prices solve p = T p with T(k,j) = sum_i alpha_ik e_ij, a column-stochastic
/// matrix, found by power iteration accelerated with repeated squaring. Prices are
/// returned on the simplex.
Equilibrium solve_cobb_douglas(const Economy& economy, const ReportProfile& reports,
                               const SolverConfig& config = {});

struct CobbDouglas2x2 {
    double p2 = 0.0;  ///< price of commodity 2 with p1 == 1
    Vector x1;
    Vector x2;
};

/// Closed form for two agents and two commodities. Agent 1 has exponents (alpha, 1-alpha)
/// and endowment (e11, e12); agent 2 has (beta, 1-beta) and the complement.
CobbDouglas2x2 solve_cd_2x2(double alpha, double beta, double e11, double e12);

/// Multi-start damped tatonnement on the price simplex for Leontief markets.
EquilibriumSet solve_leontief(const Economy& economy, const ReportProfile& reports,
                              const SolverConfig& config = {});

/// Grid enumeration of bang-per-buck structures for small linear markets (n, m <= 4).
/// Heuristic: the returned set is never marked exhaustive.
EquilibriumSet solve_linear_smallscale(const Economy& economy, const ReportProfile& reports,
                                       const SolverConfig& config = {});

/// Minimizes |z(p)| over the interior of the price simplex by grid search and compass
/// refinement. Independent of the closed-form paths; meant as a test oracle.
Equilibrium brute_force_equilibrium(const Economy& economy, const ReportProfile& reports,
                                    const SolverConfig& config = {});

}  // namespace walras
