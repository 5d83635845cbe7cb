#pragma once

#include "walras/market.hpp"

namespace walras {

/// M = E A^T - I for Cobb-Douglas reports: M(j,k) = sum_i e_ij alpha_ik - [j == k].
/// Equilibrium prices are exactly the nonnegative left null vectors of M.
struct SpendingMatrix {
    Matrix entries;
};

SpendingMatrix build_spending_matrix(const Economy& economy, const ReportProfile& reports);

/// Classical adjugate (transpose of the signed cofactor matrix). The adjugate of a 1x1
/// matrix is [[1]].
Matrix adjugate(const Matrix& m);

/// First row of Adj(M), flipped so its first nonzero entry is positive. Proportional to
/// the equilibrium prices. Throws std::domain_error when entries keep mixed signs.
Vector price_from_adjugate(const Economy& economy, const ReportProfile& reports);

/// det of M with its first column replaced by agent's endowment. Equals c (p . e_i) where
/// c is the adjugate scale, and does not depend on the agent's own exponents.
double budget_determinant(const Economy& economy, const ReportProfile& reports, Index agent);

/// |budget_determinant(truthful) - budget_determinant(deviant)| for one agent. The two
/// profiles must differ at most at `agent`.
double check_budget_invariance(const Economy& economy, const ReportProfile& truthful,
                               const ReportProfile& deviant, Index agent);

/// prod_j (1/alpha_j)^alpha_j with 0^0 terms dropped; lies in [1, m].
double concentration_bound(const Vector& alpha);

}  // namespace walras
