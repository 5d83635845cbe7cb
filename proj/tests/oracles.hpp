#pragma once

// Reference computations used only by the tests. None of them calls into the solver
// code paths they are compared against.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "walras/market.hpp"

namespace oracle {

using walras::Economy;
using walras::Index;
using walras::Matrix;
using walras::ReportProfile;
using walras::Vector;

inline Vector cd_demand(const Vector& alpha, const Vector& p, double budget) {
    return (alpha.array() * budget / p.array()).matrix();
}

inline double cd_utility(const Vector& alpha, const Vector& x) {
    double u = 1.0;
    for (Index j = 0; j < alpha.size(); ++j)
        if (alpha[j] > 0.0) u *= std::pow(x[j], alpha[j]);
    return u;
}

inline double concentration(const Vector& alpha) {
    double prod = 1.0;
    for (Index j = 0; j < alpha.size(); ++j)
        if (alpha[j] > 0.0) prod *= std::pow(1.0 / alpha[j], alpha[j]);
    return prod;
}

/// Equilibrium prices of a Cobb-Douglas market from the kernel of the spending balance
/// p_k = sum_{i,j} alpha_ik e_ij p_j, via a full-pivot LU decomposition.
inline Vector cd_prices_lu(const Economy& economy, const ReportProfile& reports) {
    const Index m = economy.commodities();
    Matrix t = Matrix::Zero(m, m);
    for (Index i = 0; i < economy.agents(); ++i)
        for (Index k = 0; k < m; ++k)
            for (Index j = 0; j < m; ++j) t(k, j) += reports[i].alpha[k] * economy.endowments(i, j);
    Eigen::FullPivLU<Matrix> lu(t - Matrix::Identity(m, m));
    lu.setThreshold(1e-10);
    Vector p = lu.kernel().col(0);
    if (p.sum() < 0) p = -p;
    return p / p[0];
}

/// Cofactor expansion of the adjugate through the inverse: adj(M) = det(M) M^{-1}.
inline Matrix adjugate_via_inverse(const Matrix& m) { return m.determinant() * m.inverse(); }

struct TwoByTwo {
    double p2;
    double b1;
};

inline TwoByTwo two_by_two(double alpha, double beta, double e11, double e12) {
    const double e21 = 1.0 - e11;
    const double e22 = 1.0 - e12;
    const double p2 = (1.0 - alpha * e11 - beta * e21) / (alpha * e12 + beta * e22);
    return {p2, e11 + p2 * e12};
}

/// Agent 1's true-utility ratio when reporting alpha_dev, from equilibrium demands.
inline double ratio_2x2(double alpha, double alpha_dev, double beta, double e11, double e12) {
    const TwoByTwo t = two_by_two(alpha, beta, e11, e12);
    const TwoByTwo d = two_by_two(alpha_dev, beta, e11, e12);
    const double x1 = alpha * t.b1, x2 = (1.0 - alpha) * t.b1 / t.p2;
    const double y1 = alpha_dev * d.b1, y2 = (1.0 - alpha_dev) * d.b1 / d.p2;
    return std::pow(y1 / x1, alpha) * std::pow(y2 / x2, 1.0 - alpha);
}

/// Maximum of ratio_2x2 over alpha_dev in [0,1]: dense scan, then golden section.
inline double max_ratio_2x2(double alpha, double beta, double e11, double e12) {
    constexpr int kScan = 20000;
    int best = 0;
    double best_value = 0.0;
    for (int k = 0; k <= kScan; ++k) {
        const double a = static_cast<double>(k) / kScan;
        const double v = ratio_2x2(alpha, a, beta, e11, e12);
        if (v > best_value) best_value = v, best = k;
    }
    double lo = std::max(0.0, (best - 1.0) / kScan), hi = std::min(1.0, (best + 1.0) / kScan);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (ratio_2x2(alpha, a, beta, e11, e12) < ratio_2x2(alpha, b, beta, e11, e12)) lo = a;
        else hi = b;
    }
    return std::max(best_value, ratio_2x2(alpha, 0.5 * (lo + hi), beta, e11, e12));
}

}  // namespace oracle
