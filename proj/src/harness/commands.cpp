#include "walras/harness/commands.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "walras/adjugate.hpp"
#include "walras/solvers.hpp"
#include "walras/verification.hpp"

namespace walras::harness {

using nlohmann::json;

namespace {

const double kEToOneOverE = std::exp(1.0 / std::numbers::e);

json vec_json(const Vector& v) {
    json a = json::array();
    for (Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
    return a;
}

json mat_json(const Matrix& m) {
    json a = json::array();
    for (Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
    return a;
}

json check(const std::string& name, double value, double expected, double tol, bool pass) {
    return {{"name", name}, {"value", value}, {"expected", expected}, {"diff", value - expected},
            {"tolerance", tol}, {"pass", pass}};
}

json close_check(const std::string& name, double value, double expected, double tol) {
    return check(name, value, expected, tol, std::abs(value - expected) <= tol);
}

json bound_check(const std::string& name, double value, double bound, double tol) {
    return check(name, value, bound, tol, value <= bound + tol);
}

bool all_pass(const json& checks) {
    for (const auto& c : checks)
        if (!c.at("pass").get<bool>()) return false;
    return true;
}

json prices_json(const Vector& p) {
    json out{{"raw", vec_json(p)}, {"simplex", vec_json(simplex_normalized(p))}};
    out["ratio"] = p[0] > 0.0 ? vec_json(ratio_normalized(p)) : json(nullptr);
    return out;
}

json equilibrium_json(const Economy& economy, const ReportProfile& reports, const Equilibrium& eq, double tol) {
    const EquilibriumVerdict verdict = is_equilibrium(economy, reports, eq.prices, eq.allocation, tol);
    json utilities = json::array();
    for (Index i = 0; i < economy.agents(); ++i) {
        const Vector x = eq.allocation.row(i).transpose();
        utilities.push_back({{"true", utility_eval(economy.utilities[static_cast<std::size_t>(i)], x)},
                             {"reported", utility_eval(reports[i], x)}});
    }
    return {{"prices", prices_json(eq.prices)},
            {"allocation", mat_json(eq.allocation)},
            {"utilities", std::move(utilities)},
            {"residuals",
             {{"clearing", vec_json(verdict.clearing_residual)},
              {"budget", vec_json(verdict.budget_residual)},
              {"optimality_gap", vec_json(verdict.optimality_gap)},
              {"tolerance", tol}}},
            {"verified", verdict.ok},
            {"failures", verdict.failures}};
}

json economy_json(const Economy& economy) {
    MarketSpec spec;
    spec.economy = economy;
    return market_spec_to_json(spec);
}

CommandResult make_result(json report, int exit_code) {
    report["exit_code"] = exit_code;
    return {std::move(report), exit_code, {}};
}

}  // namespace

CommandResult error_result(int exit_code, const std::string& message) {
    return make_result({{"error", message}}, exit_code);
}

// ---------------------------------------------------------------------------------

CommandResult cmd_solve(const MarketSpec& spec, const SolveOptions& options) {
    json report{{"command", "solve"}, {"market", market_spec_to_json(spec)},
                {"renormalized", spec.renormalized}, {"warnings", spec.warnings}};
    SolverConfig config;
    config.clearing_tol = options.tol;
    config.grid_resolution = options.grid;
    const ReportProfile reports = spec.reports();

    EquilibriumSet set;
    try {
        switch (spec.economy.kind()) {
            case UtilityKind::CobbDouglas:
                set.members.push_back(solve_cobb_douglas(spec.economy, reports, config));
                set.exhaustive = true;
                break;
            case UtilityKind::Leontief:
                set = solve_leontief(spec.economy, reports, config);
                break;
            case UtilityKind::Linear:
                set = solve_linear_smallscale(spec.economy, reports, config);
                break;
        }
    } catch (const NoConvergence& e) {
        report["error"] = e.what();
        report["best_residual"] = e.best_residual();
        return make_result(std::move(report), kExitResidualFailure);
    } catch (const std::invalid_argument& e) {
        report["error"] = e.what();
        return make_result(std::move(report), kExitValidationError);
    }

    json members = json::array();
    bool verified = !set.members.empty();
    for (const Equilibrium& eq : set.members) {
        members.push_back(equilibrium_json(spec.economy, reports, eq, options.tol));
        verified = verified && members.back().at("verified").get<bool>();
    }
    report["equilibria"] = std::move(members);
    report["exhaustive"] = set.exhaustive;
    report["family_note"] = set.family_note ? json(*set.family_note) : json(nullptr);
    return make_result(std::move(report), verified ? kExitPass : kExitResidualFailure);
}

// ---------------------------------------------------------------------------------

CommandResult cmd_ratio(const MarketSpec& spec, const RatioOptions& options) {
    const Economy& economy = spec.economy;
    json report{{"command", "ratio"}, {"market", market_spec_to_json(spec)}, {"agent", options.agent},
                {"renormalized", spec.renormalized}, {"warnings", spec.warnings}};
    if (economy.kind() != UtilityKind::CobbDouglas) {
        report["error"] = "ratio analysis requires a cobb_douglas market";
        return make_result(std::move(report), kExitValidationError);
    }
    const auto violations = validate_economy(economy, true);
    if (!violations.empty()) {
        json list = json::array();
        for (const auto& v : violations) list.push_back({{"rule", v.rule}, {"indices", v.indices}, {"message", v.message}});
        report["error"] = "market violates positive endowments or strong competitiveness";
        report["violations"] = std::move(list);
        return make_result(std::move(report), kExitValidationError);
    }
    if (options.agent < 0 || options.agent >= economy.agents()) {
        report["error"] = "agent index out of range";
        return make_result(std::move(report), kExitValidationError);
    }

    SolverConfig solver;
    solver.clearing_tol = options.tol;
    RatioResult r;
    try {
        if (options.deviation) {
            const Vector report_alpha = options.deviation->size() == 0
                                            ? economy.utilities[static_cast<std::size_t>(options.agent)].alpha
                                            : *options.deviation;
            r = evaluate_deviation(economy, options.agent, report_alpha, solver);
            report["mode"] = "fixed_deviation";
        } else {
            RatioQuery query{economy, options.agent, options.optimizer, solver};
            r = incentive_ratio_cd(query);
            report["mode"] = "search";
            report["optimizer"] = {{"grid_resolution", options.optimizer.grid_resolution},
                                   {"refine_iterations", options.optimizer.refine_iterations},
                                   {"refine_shrink", options.optimizer.refine_shrink},
                                   {"seed", options.optimizer.seed}};
        }
    } catch (const std::invalid_argument& e) {
        report["error"] = e.what();
        return make_result(std::move(report), kExitValidationError);
    } catch (const NoConvergence& e) {
        report["error"] = e.what();
        return make_result(std::move(report), kExitResidualFailure);
    }

    const ReportProfile truthful = ReportProfile::truthful(economy);
    const ReportProfile deviant = truthful.with_report(options.agent, r.best_report);
    std::size_t skipped = 0;
    for (const auto& t : r.trace) skipped += t.skipped ? 1 : 0;
    report["truthful"] = {{"equilibrium", equilibrium_json(economy, truthful, r.truthful_equilibrium, options.tol)},
                          {"utility", r.truthful_utility}};
    report["deviant"] = {{"report", vec_json(r.best_report.alpha)},
                         {"equilibrium", equilibrium_json(economy, deviant, r.deviant_equilibrium, options.tol)},
                         {"utility", r.deviant_utility}};
    report["ratio"] = r.ratio;
    report["evaluations"] = r.trace.size();
    report["skipped_reports"] = skipped;

    const double m = static_cast<double>(economy.commodities());
    json checks = json::array();
    checks.push_back(check("ratio_at_least_one", r.ratio, 1.0, 1e-9, r.ratio >= 1.0 - 1e-9));
    checks.push_back(bound_check("ratio_at_most_m", r.ratio, m, 1e-6));
    if (economy.commodities() == 2) checks.push_back(bound_check("ratio_at_most_e_to_1_over_e", r.ratio, kEToOneOverE, 1e-6));
    checks.push_back(bound_check("budget_invariance_residual", r.budget_invariance_residual, 0.0, 1e-9));
    const bool pass = all_pass(checks);
    report["checks"] = std::move(checks);
    return make_result(std::move(report), pass ? kExitPass : kExitVerificationFailure);
}

// ---------------------------------------------------------------------------------

namespace {

Witness build_witness(const std::string& family, double epsilon, double delta) {
    if (family == "linear") return witness_linear(epsilon);
    if (family == "leontief") return witness_leontief(epsilon, delta);
    if (family == "cobb_douglas") return witness_cd(epsilon);
    throw std::invalid_argument("unknown witness family '" + family + "'");
}

double default_epsilon(const std::string& family) {
    if (family == "linear") return 0.01;
    if (family == "leontief") return 0.001;
    return 0.02;
}

}  // namespace

CommandResult cmd_witness(const WitnessOptions& options) {
    json report{{"command", "witness"}, {"family", options.family}};
    try {
        if (!options.sweep_points) {
            const double eps = options.epsilon.value_or(default_epsilon(options.family));
            const double delta = options.delta.value_or(eps);
            const Witness w = build_witness(options.family, eps, delta);
            report["parameters"] = {{"epsilon", eps}};
            if (options.family == "leontief") report["parameters"]["delta"] = delta;
            report["market"] = economy_json(w.economy);
            report["truthful"] = equilibrium_json(w.economy, w.truthful_reports, w.truthful, 1e-8);
            report["deviant"] = equilibrium_json(w.economy, w.deviant_reports, w.deviant, 1e-8);
            report["deviant"]["reports"] = json::array();
            for (const auto& u : w.deviant_reports.reports) report["deviant"]["reports"].push_back(vec_json(u.alpha));
            report["ratio"] = w.ratio;
            report["closed_form"] = w.closed_form;
            json checks = json::array();
            checks.push_back(check("truthful_certified", w.truthful_verdict.ok, 1.0, 0.0, w.truthful_verdict.ok));
            checks.push_back(check("deviant_certified", w.deviant_verdict.ok, 1.0, 0.0, w.deviant_verdict.ok));
            checks.push_back(close_check("ratio_matches_closed_form", w.ratio, w.closed_form, 1e-9 * w.closed_form));
            const bool pass = all_pass(checks);
            report["checks"] = std::move(checks);
            return make_result(std::move(report), pass ? kExitPass : kExitVerificationFailure);
        }

        const std::size_t points = std::max<std::size_t>(*options.sweep_points, 2);
        if (!(options.sweep_from > 0.0 && options.sweep_to > 0.0))
            throw OutOfRange("sweep bounds must be positive");
        std::ostringstream csv;
        csv.precision(17);
        csv << "family,epsilon,delta,ratio,closed_form,truthful_certified,deviant_certified\n";
        json rows = json::array();
        bool pass = true;
        double previous_ratio = 0.0;
        double previous_eps = 0.0;
        bool monotone = true;
        for (std::size_t k = 0; k < points; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(points - 1);
            const double eps = options.sweep_from * std::pow(options.sweep_to / options.sweep_from, t);
            const double delta = options.delta.value_or(eps);
            const Witness w = build_witness(options.family, eps, delta);
            const bool certified = w.certified();
            const bool exact = std::abs(w.ratio - w.closed_form) <= 1e-9 * w.closed_form;
            pass = pass && certified && exact;
            if (k > 0) {
                const bool expected_up = eps < previous_eps;
                monotone = monotone && (expected_up ? w.ratio > previous_ratio : w.ratio < previous_ratio);
            }
            previous_ratio = w.ratio;
            previous_eps = eps;
            rows.push_back({{"epsilon", eps}, {"delta", options.family == "leontief" ? json(delta) : json(nullptr)},
                            {"ratio", w.ratio}, {"closed_form", w.closed_form},
                            {"truthful_certified", w.truthful_verdict.ok}, {"deviant_certified", w.deviant_verdict.ok}});
            csv << options.family << ',' << eps << ',' << (options.family == "leontief" ? delta : 0.0) << ','
                << w.ratio << ',' << w.closed_form << ',' << w.truthful_verdict.ok << ',' << w.deviant_verdict.ok << '\n';
        }
        report["sweep"] = std::move(rows);
        report["ratio_monotone_in_epsilon"] = monotone;
        CommandResult result = make_result(std::move(report), pass && monotone ? kExitPass : kExitVerificationFailure);
        if (options.csv) result.csv = csv.str();
        return result;
    } catch (const std::out_of_range& e) {
        report["error"] = e.what();
        return make_result(std::move(report), kExitValidationError);
    } catch (const std::invalid_argument& e) {
        report["error"] = e.what();
        return make_result(std::move(report), kExitValidationError);
    }
}

// ---------------------------------------------------------------------------------

CommandResult cmd_verify(const VerifyOptions& options) {
    const auto& suite = options.suite;
    const bool everything = suite == "all";
    if (!everything && suite != "bounds" && suite != "budget" && suite != "oracle" && suite != "power")
        return error_result(kExitValidationError, "unknown suite '" + suite + "'");

    json report{{"command", "verify"}, {"suite", suite}, {"seed", options.seed}};
    json suites = json::object();
    bool pass = true;
    std::ostringstream csv;
    csv.precision(17);

    if (everything || suite == "bounds") {
        json combos = json::array();
        csv << "suite,agents,commodities,samples,max_ratio,bound,pass\n";
        for (Index n : options.agents)
            for (Index m : options.commodities) {
                SamplerConfig sampler;
                sampler.agents = n;
                sampler.commodities = m;
                sampler.samples = options.samples.value_or(200);
                sampler.seed = options.seed;
                sampler.optimizer.grid_resolution = options.grid;
                if (n == 2 && m == 3) sampler.anchors.push_back(manipulable_example_market());
                const BoundReport b = verify_upper_bound_m(sampler);
                bool ok = b.pass;
                json entry{{"agents", n}, {"commodities", m}, {"samples", b.samples},
                           {"max_ratio", b.max_ratio}, {"bound", b.bound}, {"tolerance", 1e-6},
                           {"argmax_sample", b.argmax_sample}, {"argmax_market", economy_json(b.argmax_economy)},
                           {"worst_budget_residual", b.worst_budget_residual}};
                if (m == 2) {
                    const bool within = b.max_ratio <= kEToOneOverE + 1e-6;
                    entry["e_to_1_over_e_bound"] = kEToOneOverE;
                    entry["within_e_to_1_over_e"] = within;
                    ok = ok && within;
                } else {
                    entry["exceeds_e_to_1_over_e"] = b.max_ratio > kEToOneOverE;
                }
                entry["pass"] = ok;
                pass = pass && ok;
                csv << "bounds," << n << ',' << m << ',' << b.samples << ',' << b.max_ratio << ',' << b.bound << ','
                    << ok << '\n';
                combos.push_back(std::move(entry));
            }
        suites["bounds"] = std::move(combos);
    }
    if (everything || suite == "budget") {
        const BudgetSweepReport b = budget_invariance_sweep(options.samples.value_or(1000), options.seed);
        suites["budget"] = {{"samples", b.samples}, {"worst_residual", b.worst_residual}, {"tolerance", 1e-9},
                            {"pass", b.pass}};
        pass = pass && b.pass;
    }
    if (everything || suite == "oracle") {
        const OracleSweepReport o = oracle_equivalence_sweep(options.samples.value_or(100), options.seed);
        suites["oracle"] = {{"samples", o.samples}, {"worst_ratio_deviation", o.worst_ratio_deviation},
                            {"tolerance", 1e-6}, {"pass", o.pass}};
        pass = pass && o.pass;
    }
    if (everything || suite == "power") {
        const auto samples = uniform_power_samples(options.samples.value_or(10000), options.seed);
        const PowerInequalityReport p = check_power_inequality(samples);
        suites["power"] = {{"samples", p.samples}, {"worst_excess", p.worst_excess}, {"tolerance", 1e-12},
                           {"pass", p.pass}};
        pass = pass && p.pass;
    }
    report["suites"] = std::move(suites);
    CommandResult result = make_result(std::move(report), pass ? kExitPass : kExitVerificationFailure);
    if (options.csv) result.csv = csv.str();
    return result;
}

// ---------------------------------------------------------------------------------

CommandResult cmd_reproduce() {
    const auto started = std::chrono::steady_clock::now();
    const Economy economy = manipulable_example_market();
    const Vector misreport = manipulable_example_report();
    const RatioResult r = evaluate_deviation(economy, 0, misreport);

    const Vector p = ratio_normalized(r.truthful_equilibrium.prices);
    const Vector q = ratio_normalized(r.deviant_equilibrium.prices);
    const Vector x = r.truthful_equilibrium.allocation.row(0).transpose();
    const Vector xd = r.deviant_equilibrium.allocation.row(0).transpose();

    json checks = json::array();
    const double p_expected[] = {1.0, 1.5, 0.505};
    const double q_expected[] = {1.0, 0.3323, 0.0497};
    const double x_expected[] = {0.202, 0.202, 1.0};
    const double xd_expected[] = {0.845, 0.299, 1.0};
    for (Index j = 0; j < 3; ++j) {
        const std::string k = std::to_string(j + 1);
        checks.push_back(close_check("truthful_price_ratio_" + k, p[j], p_expected[j], 2e-3));
        checks.push_back(close_check("truthful_bundle_agent1_good" + k, x[j], x_expected[j], 2e-3));
        checks.push_back(close_check("deviant_price_ratio_" + k, q[j], q_expected[j], 2e-3));
        checks.push_back(close_check("deviant_bundle_agent1_good" + k, xd[j], xd_expected[j], 2e-3));
    }
    checks.push_back(close_check("truthful_utility_agent1", r.truthful_utility, 0.4495, 5e-4));
    checks.push_back(close_check("deviant_utility_agent1", r.deviant_utility, 0.6731, 5e-4));
    checks.push_back(close_check("incentive_ratio", r.ratio, 1.50, 0.01));
    checks.push_back(bound_check("budget_invariance_residual", r.budget_invariance_residual, 0.0, 1e-9));

    json witnesses = json::array();
    auto replay = [&](const std::string& name, const Witness& w, double expected) {
        const bool ok = w.certified() && std::abs(w.ratio - expected) <= 1e-9 * expected;
        witnesses.push_back({{"name", name}, {"ratio", w.ratio}, {"expected", expected}, {"tolerance", 1e-9 * expected},
                             {"certified", w.certified()}, {"pass", ok}});
    };
    replay("cobb_douglas epsilon=0.5", witness_cd(0.5), 2.0);
    replay("cobb_douglas epsilon=0.02", witness_cd(0.02), 10.0);
    replay("leontief epsilon=delta=0.001", witness_leontief(0.001, 0.001), 1.001 / (2.0 * 0.001999));
    replay("linear epsilon=0.01", witness_linear(0.01), 100.0);
    // The ratios must grow without bound as the parameter shrinks.
    bool diverging = true;
    double last = 0.0;
    for (double eps : {0.5, 0.1, 0.01, 0.001, 0.0001}) {
        const double v = witness_cd(eps).ratio;
        diverging = diverging && v > last;
        last = v;
    }
    witnesses.push_back({{"name", "cobb_douglas ratio increases as epsilon shrinks"}, {"pass", diverging},
                         {"largest_ratio", last}});

    bool pass = all_pass(checks);
    for (const auto& w : witnesses) pass = pass && w.at("pass").get<bool>();

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json report{{"command", "reproduce"},
                {"market", economy_json(economy)},
                {"misreport", vec_json(misreport)},
                {"assumption", "agent 2 utility read as x21^.4 x22^.6 (exponents (.4,.6,0))"},
                {"truthful",
                 {{"prices", prices_json(r.truthful_equilibrium.prices)},
                  {"allocation", mat_json(r.truthful_equilibrium.allocation)},
                  {"utility_agent1", r.truthful_utility}}},
                {"deviant",
                 {{"prices", prices_json(r.deviant_equilibrium.prices)},
                  {"allocation", mat_json(r.deviant_equilibrium.allocation)},
                  {"utility_agent1", r.deviant_utility}}},
                {"ratio", r.ratio},
                {"ratio_rounded", std::round(r.ratio * 100.0) / 100.0},
                {"checks", std::move(checks)},
                {"witnesses", std::move(witnesses)},
                {"runtime_seconds", elapsed}};
    return make_result(std::move(report), pass ? kExitPass : kExitVerificationFailure);
}

}  // namespace walras::harness
