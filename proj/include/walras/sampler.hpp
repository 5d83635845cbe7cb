#pragma once

#include <random>

#include "walras/market.hpp"

namespace walras {

/// Symmetric Dirichlet draw of the given dimension. Components are bounded away from
/// zero by resampling, so the result lies in the open simplex.
Vector sample_dirichlet(Index dimension, double concentration, std::mt19937_64& rng);

/// Cobb-Douglas economy with strictly positive endowments (each commodity's holdings are
/// a Dirichlet draw across agents) and Dirichlet exponents. Strong competitiveness is
/// enforced by rejection.
Economy sample_cobb_douglas_economy(Index agents, Index commodities, double endowment_concentration,
                                    double exponent_concentration, std::mt19937_64& rng);

}  // namespace walras
