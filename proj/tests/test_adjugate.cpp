#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "walras/adjugate.hpp"
#include "walras/incentive.hpp"
#include "walras/sampler.hpp"
#include "walras/solvers.hpp"

using namespace walras;

namespace {

Vector v(std::initializer_list<double> values) {
    Vector out(static_cast<Index>(values.size()));
    Index k = 0;
    for (double x : values) out[k++] = x;
    return out;
}

Economy symmetric_2x2() {
    Economy econ;
    econ.endowments = Matrix::Constant(2, 2, 0.5);
    econ.utilities = {UtilityFunction::cobb_douglas(v({0.5, 0.5})), UtilityFunction::cobb_douglas(v({0.5, 0.5}))};
    return econ;
}

}  // namespace

TEST_SUITE("adjugate") {

TEST_CASE("spending matrix by hand") {
    const Economy sym = symmetric_2x2();
    Matrix expected(2, 2);
    expected << -0.5, 0.5, 0.5, -0.5;
    CHECK((build_spending_matrix(sym, ReportProfile::truthful(sym)).entries - expected).cwiseAbs().maxCoeff() < 1e-15);

    Economy diag;
    diag.endowments = Matrix::Identity(3, 3);
    for (Index i = 0; i < 3; ++i) diag.utilities.push_back(UtilityFunction::cobb_douglas(Vector::Unit(3, i)));
    CHECK(build_spending_matrix(diag, ReportProfile::truthful(diag)).entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjugate of a 2x2 matrix") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    Matrix expected(2, 2);
    expected << 4.0, -2.0, -3.0, 1.0;
    CHECK((adjugate(m) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adjugate identity on random 4x4 matrices") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int s = 0; s < 50; ++s) {
        Matrix m(4, 4);
        for (Index k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
        const Matrix adj = adjugate(m);
        CHECK((m * adj - m.determinant() * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((adj - oracle::adjugate_via_inverse(m)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("prices from the adjugate") {
    const Economy econ = manipulable_example_market();
    const ReportProfile truth = ReportProfile::truthful(econ);
    const Vector p = ratio_normalized(price_from_adjugate(econ, truth));
    CHECK(p[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.505).epsilon(2e-3));
    const Matrix adj = adjugate(build_spending_matrix(econ, truth).entries);
    CHECK((ratio_normalized(adj.row(0).transpose()) - p).cwiseAbs().maxCoeff() < 1e-12);

    const ReportProfile dev = truth.with_report(0, UtilityFunction::cobb_douglas(manipulable_example_report()));
    const Vector q = ratio_normalized(price_from_adjugate(econ, dev));
    CHECK(q[1] == doctest::Approx(0.3323).epsilon(2e-3));
    CHECK(q[2] == doctest::Approx(0.0497).epsilon(2e-2));

    const Economy sym = symmetric_2x2();
    const Vector s = price_from_adjugate(sym, ReportProfile::truthful(sym));
    CHECK(s[0] == doctest::Approx(s[1]));
    CHECK(s[0] > 0.0);
}

TEST_CASE("budget determinant is unchanged by the agent's own report") {
    const Economy econ = manipulable_example_market();
    const ReportProfile truth = ReportProfile::truthful(econ);
    const ReportProfile dev = truth.with_report(0, UtilityFunction::cobb_douglas(manipulable_example_report()));
    CHECK(budget_determinant(econ, truth, 0) == doctest::Approx(budget_determinant(econ, dev, 0)).epsilon(1e-12));
    CHECK(check_budget_invariance(econ, truth, dev, 0) <= 1e-9);
    CHECK(check_budget_invariance(econ, truth, truth, 0) == 0.0);

    // The determinant is the agent's budget at the adjugate price scale.
    const Vector p = price_from_adjugate(econ, truth);
    CHECK(std::abs(budget_determinant(econ, truth, 0)) == doctest::Approx(std::abs(p.dot(econ.endowment(0)))).epsilon(1e-10));

    const Economy sym = symmetric_2x2();
    const ReportProfile s = ReportProfile::truthful(sym);
    CHECK(budget_determinant(sym, s, 0) == doctest::Approx(budget_determinant(sym, s, 1)));
}

TEST_CASE("budget determinant under a transfer between two exponents") {
    std::mt19937_64 rng(17);
    for (int s = 0; s < 100; ++s) {
        const Economy econ = sample_cobb_douglas_economy(3, 3, 1.0, 1.0, rng);
        const ReportProfile truth = ReportProfile::truthful(econ);
        const Index i = static_cast<Index>(s % 3), j = static_cast<Index>((s / 3) % 3), k = (j + 1) % 3;
        Vector alpha = econ.utilities[static_cast<std::size_t>(i)].alpha;
        const double delta = std::uniform_real_distribution<double>(0.0, alpha[k])(rng);
        alpha[k] -= delta;
        alpha[j] += delta;
        const ReportProfile dev = truth.with_report(i, UtilityFunction::cobb_douglas(alpha));
        const double before = budget_determinant(econ, truth, i);
        CHECK(std::abs(before - budget_determinant(econ, dev, i)) <= 1e-10 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("concentration bound") {
    for (Index m = 1; m <= 6; ++m)
        CHECK(concentration_bound(Vector::Constant(m, 1.0 / static_cast<double>(m))) ==
              doctest::Approx(static_cast<double>(m)).epsilon(1e-14));
    CHECK(concentration_bound(v({1.0, 0.0, 0.0})) == 1.0);
    const Vector a = v({0.2, 0.3, 0.5});
    CHECK(concentration_bound(a) == doctest::Approx(oracle::concentration(a)).epsilon(1e-14));
    CHECK(concentration_bound(a) == doctest::Approx(2.80009).epsilon(1e-5));
    CHECK(concentration_bound(a) <= 3.0);

    std::mt19937_64 rng(2);
    for (int s = 0; s < 200; ++s) {
        const Vector alpha = sample_dirichlet(2 + s % 6, 0.5, rng);
        CHECK(concentration_bound(alpha) == doctest::Approx(oracle::concentration(alpha)).epsilon(1e-12));
        CHECK(concentration_bound(alpha) <= static_cast<double>(alpha.size()) + 1e-12);
    }
}

}
