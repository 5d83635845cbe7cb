// Acceptance run: one line per criterion with the measured quantity, the tolerance it
// was held to and the wall time. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "walras/adjugate.hpp"
#include "walras/harness/commands.hpp"
#include "walras/incentive.hpp"
#include "walras/solvers.hpp"
#include "walras/verification.hpp"

using namespace walras;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Vector v2(double a, double b) {
    Vector out(2);
    out << a, b;
    return out;
}

Outcome example_reproduction() {
    const auto r = harness::cmd_reproduce();
    double worst = 0.0;
    for (const auto& c : r.report.at("checks"))
        worst = std::max(worst, std::abs(c.at("diff").get<double>()) / c.at("tolerance").get<double>());
    return {r.exit_code == 0 && r.report.at("runtime_seconds").get<double>() < 1.0,
            fmt("ratio %.6f, worst field at %.2f of its tolerance", r.report.at("ratio").get<double>(), worst)};
}

Outcome closed_form_2x2() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] {
        double x;
        do x = u(rng);
        while (x <= 1e-3 || x >= 1.0 - 1e-3);
        return x;
    };
    double worst_price = 0.0, worst_ratio = 0.0;
    for (int s = 0; s < 10000; ++s) {
        const double a = draw(), ad = draw(), b = draw(), e11 = draw(), e12 = draw();
        Economy econ;
        econ.endowments.resize(2, 2);
        econ.endowments << e11, e12, 1 - e11, 1 - e12;
        econ.utilities = {UtilityFunction::cobb_douglas(v2(a, 1 - a)), UtilityFunction::cobb_douglas(v2(b, 1 - b))};
        const double p2 = solve_cd_2x2(a, b, e11, e12).p2;
        const double q2 = ratio_normalized(solve_cobb_douglas(econ, ReportProfile::truthful(econ)).prices)[1];
        worst_price = std::max(worst_price, std::abs(p2 - q2) / std::max(1.0, p2));
        const double closed = ratio_closed_form_2x2(a, ad, b, e11, e12).ratio;
        const double solved = evaluate_deviation(econ, 0, v2(ad, 1 - ad)).ratio;
        worst_ratio = std::max(worst_ratio, std::abs(closed - solved) / solved);
    }
    const FactCheckReport facts = check_2x2_facts(10000, 2024);
    return {worst_price <= 1e-10 && worst_ratio <= 1e-10 && facts.pass,
            fmt("price dev %.2e, ratio dev %.2e (tol 1e-10); fact violations %zu/%zu", worst_price, worst_ratio,
                facts.violations, facts.samples)};
}

Outcome budget_invariance() {
    const BudgetSweepReport r = budget_invariance_sweep(1000, 7);
    return {r.pass, fmt("%zu markets, worst relative residual %.2e (tol 1e-9)", r.samples, r.worst_residual)};
}

Outcome ratio_bound() {
    const double e1e = std::exp(1.0 / std::numbers::e);
    bool pass = true;
    double best_m3 = 0.0;
    std::string detail;
    for (Index n : {2, 3})
        for (Index m : {2, 3, 4}) {
            SamplerConfig config;
            config.agents = n;
            config.commodities = m;
            config.samples = 200;
            config.seed = 7;
            if (n == 2 && m == 3) config.anchors.push_back(manipulable_example_market());
            const BoundReport r = verify_upper_bound_m(config);
            pass = pass && r.pass && r.samples >= 200;
            if (m == 2) pass = pass && r.max_ratio <= e1e + 1e-6;
            if (m == 3) best_m3 = std::max(best_m3, r.max_ratio);
            detail += fmt("%s(%td,%td) max %.4f", detail.empty() ? "" : ", ", n, m, r.max_ratio);
        }
    pass = pass && best_m3 >= 1.45;
    return {pass, detail + fmt("; m=2 cap %.4f, m=3 needs >= 1.45", e1e)};
}

Outcome witnesses() {
    bool pass = true;
    double worst = 0.0;
    for (auto [eps, expected] : {std::pair{0.5, 2.0}, {0.1, std::sqrt(20.0)}, {0.02, 10.0}, {0.001, std::sqrt(2000.0)}}) {
        const Witness w = witness_cd(eps);
        pass = pass && w.certified();
        worst = std::max(worst, std::abs(w.ratio - expected) / expected);
    }
    const Witness leo = witness_leontief(0.001, 0.001);
    const Witness lin = witness_linear(0.01);
    pass = pass && leo.certified() && lin.certified();
    worst = std::max({worst, std::abs(leo.ratio - 250.375) / 250.375 > 1e-5 ? 1.0 : 0.0,
                      std::abs(lin.ratio - 100.0) / 100.0});
    // Divergence: strictly increasing ratios as the parameter shrinks. The Leontief ratio
    // dips below one for epsilon = delta above about .6, so the grid starts at .5.
    bool increasing = true;
    double cd_last = 0.0, leo_last = 0.0, lin_last = 0.0;
    for (int k = 0; k <= 40; ++k) {
        const double eps = 0.5 * std::pow(1e-4 / 0.5, k / 40.0);
        const Witness a = witness_cd(eps), b = witness_leontief(eps, eps), c = witness_linear(eps);
        increasing = increasing && a.ratio > cd_last && b.ratio > leo_last && c.ratio > lin_last;
        pass = pass && a.certified() && b.certified() && c.certified();
        cd_last = a.ratio, leo_last = b.ratio, lin_last = c.ratio;
    }
    pass = pass && increasing && worst <= 1e-9;
    return {pass, fmt("leontief %.4f, linear %.4f, worst rel dev %.1e, monotone %s", leo.ratio, lin.ratio, worst,
                      increasing ? "yes" : "no")};
}

Outcome oracle_equivalence() {
    const OracleSweepReport r = oracle_equivalence_sweep(100, 7);
    return {r.pass, fmt("%zu markets, worst price-ratio deviation %.2e (tol 1e-6)", r.samples, r.worst_ratio_deviation)};
}

Outcome power_inequality() {
    const auto samples = uniform_power_samples(10000, 7);
    const PowerInequalityReport r = check_power_inequality(samples);
    return {r.pass, fmt("%zu samples, worst excess %.2e (tol 1e-12)", r.samples, r.worst_excess)};
}

Outcome degenerate_guards() {
    std::mt19937_64 rng(8);
    bool pass = true;
    for (int s = 0; s < 20; ++s) {
        Economy single;
        single.endowments = Matrix::Ones(1, 3);
        std::gamma_distribution<double> g(1.0);
        Vector a(3);
        for (Index j = 0; j < 3; ++j) a[j] = g(rng);
        single.utilities = {UtilityFunction::cobb_douglas(a / a.sum())};
        pass = pass && incentive_ratio_cd({single, 0, {}, {}}).ratio == 1.0;
    }
    SamplerConfig one_good;
    one_good.agents = 3;
    one_good.commodities = 1;
    one_good.samples = 20;
    for (double r : verify_upper_bound_m(one_good).ratios) pass = pass && r == 1.0;
    harness::MarketSpec corner;
    corner.economy = witness_cd(0.1).economy;
    const int code = harness::cmd_ratio(corner, {}).exit_code;
    pass = pass && code == harness::kExitValidationError;
    return {pass, fmt("n=1 and m=1 ratios exactly 1; corner market exit code %d", code)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"A1 example reproduction", example_reproduction},
        {"A2 2x2 closed form", closed_form_2x2},
        {"A3 budget invariance", budget_invariance},
        {"A4 ratio at most m", ratio_bound},
        {"A5 witness families", witnesses},
        {"A6 oracle equivalence", oracle_equivalence},
        {"A7 power inequality", power_inequality},
        {"A8 degenerate guards", degenerate_guards},
    };
    const double limits[] = {1.0, 10.0, 30.0, 300.0, 60.0, 120.0, 60.0, 60.0};
    int failed = 0;
    int k = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = o.pass && seconds < limits[k++];
        failed += ok ? 0 : 1;
        std::printf("%-26s %s  %7.2fs  %s\n", name, ok ? "PASS" : "FAIL", seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
