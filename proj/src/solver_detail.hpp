#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "walras/market.hpp"

namespace walras::detail {

/// max_j of |z_j| on priced goods and of max(z_j, 0) on free goods.
double clearing_gap(const Vector& z, const Vector& prices);

bool lexicographic_less(const Vector& a, const Vector& b);

/// Sorts by price lexicographically and drops members closer than `min_distance` (max-norm).
void sort_and_dedup(std::vector<Equilibrium>& members, double min_distance);

/// Looks for three or more members on one segment whose midpoints also clear.
std::optional<std::string> detect_continuum(const std::vector<Equilibrium>& members,
                                            const std::function<bool(const Vector&)>& clears);

/// Hands the unclaimed supply of zero-price goods to agents in proportion to endowments.
Matrix absorb_free_surplus(const Economy& economy, Matrix allocation, const Vector& prices);

}  // namespace walras::detail
