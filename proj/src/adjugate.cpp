#include "walras/adjugate.hpp"

#include <cmath>

namespace walras {

namespace {

Matrix minor_of(const Matrix& a, Index row, Index col) {
    const Index k = a.rows();
    Matrix out(k - 1, k - 1);
    for (Index r = 0, rr = 0; r < k; ++r) {
        if (r == row) continue;
        for (Index c = 0, cc = 0; c < k; ++c) {
            if (c == col) continue;
            out(rr, cc++) = a(r, c);
        }
        ++rr;
    }
    return out;
}

}  // namespace

SpendingMatrix build_spending_matrix(const Economy& economy, const ReportProfile& reports) {
    if (reports.size() != economy.agents()) throw DimensionMismatch("build_spending_matrix: report count");
    const Index n = economy.agents();
    const Index m = economy.commodities();
    Matrix alpha(n, m);
    for (Index i = 0; i < n; ++i) {
        if (reports[i].kind != UtilityKind::CobbDouglas)
            throw KindMismatch("build_spending_matrix: reports must be Cobb-Douglas");
        if (reports[i].alpha.size() != m) throw DimensionMismatch("build_spending_matrix: exponent length");
        alpha.row(i) = reports[i].alpha.transpose();
    }
    return {economy.endowments.transpose() * alpha - Matrix::Identity(m, m)};
}

Matrix adjugate(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("adjugate: matrix must be square");
    const Index k = a.rows();
    if (k == 1) return Matrix::Ones(1, 1);
    Matrix adj(k, k);
    for (Index r = 0; r < k; ++r)
        for (Index c = 0; c < k; ++c) {
            const double sign = ((r + c) % 2 == 0) ? 1.0 : -1.0;
            adj(c, r) = sign * minor_of(a, r, c).determinant();
        }
    return adj;
}

Vector price_from_adjugate(const Economy& economy, const ReportProfile& reports) {
    const SpendingMatrix spending = build_spending_matrix(economy, reports);
    Vector row = adjugate(spending.entries).row(0).transpose();
    Index first = 0;
    while (first < row.size() && row[first] == 0.0) ++first;
    if (first == row.size()) throw std::domain_error("price_from_adjugate: adjugate row vanishes");
    if (row[first] < 0.0) row = -row;
    const double scale = row.cwiseAbs().maxCoeff();
    if ((row.array() < -1e-12 * scale).any())
        throw std::domain_error("price_from_adjugate: adjugate row has mixed signs");
    return row.cwiseMax(0.0);
}

double budget_determinant(const Economy& economy, const ReportProfile& reports, Index agent) {
    if (agent < 0 || agent >= economy.agents()) throw OutOfRange("budget_determinant: agent index");
    Matrix replaced = build_spending_matrix(economy, reports).entries;
    replaced.col(0) = economy.endowment(agent);
    return replaced.determinant();
}

double check_budget_invariance(const Economy& economy, const ReportProfile& truthful,
                               const ReportProfile& deviant, Index agent) {
    if (truthful.size() != deviant.size()) throw DimensionMismatch("check_budget_invariance: profile sizes");
    for (Index i = 0; i < truthful.size(); ++i)
        if (i != agent && !(truthful[i] == deviant[i]))
            throw std::invalid_argument("check_budget_invariance: profiles differ at agent " +
                                        std::to_string(i) + " as well");
    return std::abs(budget_determinant(economy, truthful, agent) - budget_determinant(economy, deviant, agent));
}

double concentration_bound(const Vector& alpha) {
    double log_value = 0.0;
    for (Index j = 0; j < alpha.size(); ++j)
        if (alpha[j] > 0.0) log_value -= alpha[j] * std::log(alpha[j]);
    return std::exp(log_value);
}

}  // namespace walras
