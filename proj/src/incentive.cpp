#include "walras/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "walras/adjugate.hpp"
#include "walras/sampler.hpp"

namespace walras {

namespace {

constexpr double kInteriorFloor = 1e-9;

void require_open_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw OutOfRange(std::string(what) + " must lie in (0,1)");
}

Vector row_of(const Matrix& m, Index i) { return m.row(i).transpose(); }

// Fixed agent, fixed others: evaluates reports for the deviating agent.
class DeviationObjective {
public:
    DeviationObjective(const Economy& economy, Index agent, const SolverConfig& solver)
        : economy_(economy),
          agent_(agent),
          solver_(solver),
          truthful_(ReportProfile::truthful(economy)),
          needs_interior_(economy.commodities(), false) {
        for (Index j = 0; j < economy.commodities(); ++j) {
            bool others = false;
            for (Index k = 0; k < economy.agents(); ++k)
                if (k != agent && economy.utilities[static_cast<std::size_t>(k)].alpha[j] > 0.0) others = true;
            needs_interior_[static_cast<std::size_t>(j)] = !others;
        }
    }

    /// Reports that leave a commodity undemanded are inadmissible.
    bool admissible(const Vector& report) const {
        for (Index j = 0; j < report.size(); ++j)
            if (needs_interior_[static_cast<std::size_t>(j)] && !(report[j] > 0.0)) return false;
        return true;
    }

    /// Simplex projection, then lifts coordinates that must stay positive.
    Vector project(const Vector& v) const {
        Vector p = project_to_simplex(v);
        bool lifted = false;
        for (Index j = 0; j < p.size(); ++j)
            if (needs_interior_[static_cast<std::size_t>(j)] && p[j] < kInteriorFloor) {
                p[j] = kInteriorFloor;
                lifted = true;
            }
        if (lifted) p /= p.sum();
        return p;
    }

    ReportProfile profile(const Vector& report) const {
        return truthful_.with_report(agent_, UtilityFunction::cobb_douglas(report));
    }

    Equilibrium solve(const Vector& report) const { return solve_cobb_douglas(economy_, profile(report), solver_); }

    double true_utility(const Equilibrium& eq) const {
        return utility_eval(economy_.utilities[static_cast<std::size_t>(agent_)], row_of(eq.allocation, agent_));
    }

    const ReportProfile& truthful() const { return truthful_; }

private:
    const Economy& economy_;
    Index agent_;
    SolverConfig solver_;
    ReportProfile truthful_;
    std::vector<bool> needs_interior_;
};

void require_ratio_preconditions(const Economy& economy, Index agent) {
    if (economy.utilities.empty() || economy.kind() != UtilityKind::CobbDouglas)
        throw KindMismatch("incentive ratio: economy must be Cobb-Douglas");
    const auto violations = validate_economy(economy, true);
    if (!violations.empty()) throw AssumptionViolation("incentive ratio: " + describe(violations));
    if (agent < 0 || agent >= economy.agents()) throw OutOfRange("incentive ratio: agent index out of range");
}

RatioResult finish(const Economy& economy, Index agent, const DeviationObjective& objective,
                   const Equilibrium& truthful_eq, double truthful_utility, const Vector& best_report,
                   Equilibrium deviant_eq, double deviant_utility) {
    RatioResult r;
    r.truthful_equilibrium = truthful_eq;
    r.truthful_utility = truthful_utility;
    r.best_report = UtilityFunction::cobb_douglas(best_report);
    r.deviant_equilibrium = std::move(deviant_eq);
    r.deviant_utility = deviant_utility;
    r.ratio = deviant_utility / truthful_utility;
    const double before = budget_determinant(economy, objective.truthful(), agent);
    const double after = budget_determinant(economy, objective.profile(best_report), agent);
    r.budget_invariance_residual = std::abs(before - after) / std::max(1.0, std::abs(before));
    return r;
}

}  // namespace

RatioResult incentive_ratio_cd(const RatioQuery& query) {
    const Economy& economy = query.economy;
    const Index agent = query.agent_index;
    const OptimizerSettings& opt = query.optimizer;
    require_ratio_preconditions(economy, agent);
    if (opt.grid_resolution < 2) throw std::invalid_argument("incentive_ratio_cd: grid_resolution must be >= 2");
    if (!(opt.refine_shrink > 0.0 && opt.refine_shrink < 1.0))
        throw std::invalid_argument("incentive_ratio_cd: refine_shrink must lie in (0,1)");

    const DeviationObjective objective(economy, agent, query.solver);
    const Vector truth = economy.utilities[static_cast<std::size_t>(agent)].alpha;
    const Equilibrium truthful_eq = objective.solve(truth);
    const double truthful_utility = objective.true_utility(truthful_eq);
    if (!(truthful_utility > 0.0))
        throw std::domain_error("incentive_ratio_cd: truthful utility is zero, ratio undefined");

    std::vector<TraceEntry> trace;
    Vector best_report = truth;
    Equilibrium best_eq = truthful_eq;
    double best_value = truthful_utility;
    trace.push_back({truth, truthful_utility, false});

    auto consider = [&](const Vector& report) {
        if (!objective.admissible(report)) {
            trace.push_back({report, std::numeric_limits<double>::quiet_NaN(), true});
            return false;
        }
        Equilibrium eq = objective.solve(report);
        const double value = objective.true_utility(eq);
        trace.push_back({report, value, false});
        if (value > best_value) {
            best_value = value;
            best_report = report;
            best_eq = std::move(eq);
            return true;
        }
        return false;
    };

    const Index m = economy.commodities();
    for (const Vector& point : simplex_grid(m, opt.grid_resolution, false)) consider(point);

    std::vector<Vector> directions;
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k)
            if (j != k) {
                Vector d = Vector::Zero(m);
                d[j] = 1.0;
                d[k] = -1.0;
                directions.push_back(std::move(d));
            }
    std::mt19937_64 rng(opt.seed);
    std::shuffle(directions.begin(), directions.end(), rng);

    double step = 1.0 / (opt.grid_resolution - 1);
    for (int it = 0; it < opt.refine_iterations && !directions.empty() && step > 1e-12; ++it) {
        bool improved = false;
        for (const Vector& d : directions) {
            const Vector candidate = objective.project(best_report + step * d);
            if ((candidate - best_report).cwiseAbs().maxCoeff() == 0.0) continue;
            if (consider(candidate)) {
                improved = true;
                // Reflect further along the successful direction while it keeps paying off.
                for (int extra = 0; extra < 64 && consider(objective.project(best_report + step * d)); ++extra) {
                }
                break;
            }
        }
        if (!improved) step *= opt.refine_shrink;
    }

    RatioResult result =
        finish(economy, agent, objective, truthful_eq, truthful_utility, best_report, std::move(best_eq), best_value);
    result.trace = std::move(trace);
    return result;
}

RatioResult evaluate_deviation(const Economy& economy, Index agent, const Vector& report,
                               const SolverConfig& solver) {
    require_ratio_preconditions(economy, agent);
    if (report.size() != economy.commodities()) throw DimensionMismatch("evaluate_deviation: report length");
    const DeviationObjective objective(economy, agent, solver);
    const Equilibrium truthful_eq = objective.solve(economy.utilities[static_cast<std::size_t>(agent)].alpha);
    const double truthful_utility = objective.true_utility(truthful_eq);
    if (!(truthful_utility > 0.0))
        throw std::domain_error("evaluate_deviation: truthful utility is zero, ratio undefined");
    Equilibrium deviant_eq = objective.solve(report);
    const double deviant_utility = objective.true_utility(deviant_eq);
    RatioResult r = finish(economy, agent, objective, truthful_eq, truthful_utility, report, std::move(deviant_eq),
                           deviant_utility);
    r.trace.push_back({report, deviant_utility, false});
    return r;
}

ClosedForm2x2 ratio_closed_form_2x2(double alpha, double alpha_dev, double beta, double e11, double e12) {
    require_open_unit(alpha, "alpha");
    require_open_unit(alpha_dev, "alpha'");
    require_open_unit(beta, "beta");
    require_open_unit(e11, "e11");
    require_open_unit(e12, "e12");
    const double e21 = 1.0 - e11;
    const double e22 = 1.0 - e12;
    ClosedForm2x2 out;
    out.t1 = alpha_dev * (alpha * e12 + beta * e22) / (alpha * (alpha_dev * e12 + beta * e22));
    out.t2 = (1.0 - alpha_dev) * (1.0 - alpha * e11 - beta * e21) /
             ((1.0 - alpha) * (1.0 - alpha_dev * e11 - beta * e21));
    out.ratio = std::pow(out.t1, alpha) * std::pow(out.t2, 1.0 - alpha);
    return out;
}

FactCheckReport check_2x2_facts(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        double v = 0.0;
        while (!(v > 0.0)) v = unit(rng);
        return v;
    };
    FactCheckReport report;
    for (std::size_t s = 0; s < samples; ++s) {
        const double a = draw(), ad = draw(), b = draw(), e11 = draw(), e12 = draw();
        const ClosedForm2x2 t = ratio_closed_form_2x2(a, ad, b, e11, e12);
        bool ok;
        if (ad >= a)
            ok = t.t1 <= ad / a && t.t2 <= 1.0;
        else
            ok = t.t1 < 1.0 && t.t2 < (1.0 - ad) / (1.0 - a);
        if (!ok) ++report.violations;
        ++report.samples;
    }
    report.pass = report.violations == 0;
    return report;
}

// ---------------------------------------------------------------------------------
// Witness families

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

constexpr double kWitnessTol = 1e-8;

Witness certify(Witness w, Vector p, Matrix x, Vector p_dev, Matrix x_dev) {
    w.truthful_verdict = is_equilibrium(w.economy, w.truthful_reports, p, x, kWitnessTol);
    w.deviant_verdict = is_equilibrium(w.economy, w.deviant_reports, p_dev, x_dev, kWitnessTol);
    w.truthful = make_equilibrium(w.economy, std::move(p), std::move(x));
    w.deviant = make_equilibrium(w.economy, std::move(p_dev), std::move(x_dev));
    const UtilityFunction& u = w.economy.utilities.front();
    w.ratio = utility_eval(u, row_of(w.deviant.allocation, 0)) / utility_eval(u, row_of(w.truthful.allocation, 0));
    return w;
}

}  // namespace

Witness witness_linear(double epsilon) {
    require_open_unit(epsilon, "epsilon");
    Witness w;
    w.economy.endowments = mat2(epsilon, 1.0 - epsilon, 1.0 - epsilon, epsilon);
    w.economy.utilities = {UtilityFunction::linear(vec2(1.0, 0.0)), UtilityFunction::linear(vec2(0.0, 0.0))};
    w.truthful_reports = ReportProfile::truthful(w.economy);
    w.deviant_reports = w.truthful_reports;
    w.closed_form = 1.0 / epsilon;
    return certify(std::move(w), vec2(1.0, 0.0), mat2(epsilon, 1.0 - epsilon, 1.0 - epsilon, epsilon),
                   vec2(1.0, 1.0), mat2(1.0, 0.0, 0.0, 1.0));
}

Witness witness_leontief(double epsilon, double delta) {
    require_open_unit(epsilon, "epsilon");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw OutOfRange("delta must be positive");
    Witness w;
    w.economy.endowments = mat2(1.0 - epsilon, epsilon, epsilon, 1.0 - epsilon);
    w.economy.utilities = {UtilityFunction::leontief(vec2(1.0, 1.0)), UtilityFunction::leontief(vec2(1.0, 1.0))};
    w.truthful_reports = ReportProfile::truthful(w.economy);
    w.deviant_reports = w.truthful_reports;
    const double k1 = (epsilon + delta - delta * epsilon) / (1.0 + delta);
    const double k2 = (1.0 - epsilon + delta * epsilon) / (1.0 + delta);
    w.closed_form = (1.0 + delta) / (2.0 * (epsilon + delta - delta * epsilon));
    return certify(std::move(w), vec2(delta, 1.0), mat2(k1, k1, k2, k2), vec2(1.0, 1.0),
                   mat2(0.5, 0.5, 0.5, 0.5));
}

Witness witness_cd(double epsilon) {
    require_open_unit(epsilon, "epsilon");
    Witness w;
    w.economy.endowments = mat2(1.0, 0.0, 0.0, 1.0);
    w.economy.utilities = {UtilityFunction::cobb_douglas(vec2(0.5, 0.5)),
                           UtilityFunction::cobb_douglas(vec2(epsilon, 1.0 - epsilon))};
    w.truthful_reports = ReportProfile::truthful(w.economy);
    w.deviant_reports = w.truthful_reports.with_report(0, UtilityFunction::cobb_douglas(vec2(1.0, 0.0)));
    w.closed_form = std::sqrt(2.0 / epsilon);
    return certify(std::move(w), vec2(1.0, 1.0 / (2.0 * epsilon)), mat2(0.5, epsilon, 0.5, 1.0 - epsilon),
                   vec2(1.0, 0.0), mat2(1.0, 1.0, 0.0, 0.0));
}

// ---------------------------------------------------------------------------------
// Sweeps

BoundReport verify_upper_bound_m(const SamplerConfig& config) {
    BoundReport report;
    report.agents = config.agents;
    report.commodities = config.commodities;
    report.bound = static_cast<double>(config.commodities);
    std::mt19937_64 rng(config.seed);
    for (std::size_t s = 0; s < config.samples; ++s) {
        Economy economy;
        if (s < config.anchors.size()) {
            economy = config.anchors[s];
            if (economy.agents() != config.agents || economy.commodities() != config.commodities)
                throw std::invalid_argument("verify_upper_bound_m: anchor has the wrong shape");
        } else {
            economy = sample_cobb_douglas_economy(config.agents, config.commodities, config.endowment_concentration,
                                                  config.exponent_concentration, rng);
        }
        RatioQuery query{economy, 0, config.optimizer, {}};
        query.optimizer.seed = config.optimizer.seed + s;
        const RatioResult r = incentive_ratio_cd(query);
        report.ratios.push_back(r.ratio);
        report.worst_budget_residual = std::max(report.worst_budget_residual, r.budget_invariance_residual);
        if (s == 0 || r.ratio > report.max_ratio) {
            report.max_ratio = r.ratio;
            report.argmax_sample = s;
            report.argmax_economy = economy;
        }
        ++report.samples;
    }
    report.pass = report.max_ratio <= report.bound + 1e-6;
    return report;
}

PowerInequalityReport check_power_inequality(std::span<const std::pair<double, double>> samples) {
    PowerInequalityReport report;
    report.worst_excess = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : samples) {
        const double excess = std::pow(x, y) - std::exp(x * y / std::numbers::e);
        report.worst_excess = std::max(report.worst_excess, excess);
        ++report.samples;
    }
    report.pass = report.samples == 0 || report.worst_excess <= 1e-12;
    return report;
}

std::vector<std::pair<double, double>> uniform_power_samples(std::size_t count, std::uint64_t seed, double upper) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, upper);
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = dist(rng);
        out.emplace_back(x, dist(rng));
    }
    return out;
}

Economy manipulable_example_market() {
    Economy e;
    e.endowments = Matrix(2, 3);
    e.endowments << 0.99, 0.01, 0.01, 0.01, 0.99, 0.99;
    Vector a1(3), a2(3);
    a1 << 0.2, 0.3, 0.5;
    a2 << 0.4, 0.6, 0.0;
    e.utilities = {UtilityFunction::cobb_douglas(a1), UtilityFunction::cobb_douglas(a2)};
    return e;
}

Vector manipulable_example_report() {
    Vector r(3);
    r << 0.85, 0.1, 0.05;
    return r;
}

}  // namespace walras
