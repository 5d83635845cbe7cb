#include "walras/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace walras {

namespace {

constexpr double kSimplexSumTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_bundle_size(const Vector& alpha, const Vector& v, const char* what) {
    if (alpha.size() != v.size()) {
        std::ostringstream os;
        os << what << ": expected length " << alpha.size() << ", got " << v.size();
        throw DimensionMismatch(os.str());
    }
}

void require_price_budget(const Vector& prices, double budget) {
    if ((prices.array() < 0.0).any()) throw std::invalid_argument("demand: negative price");
    if ((prices.array() == 0.0).all()) throw std::invalid_argument("demand: all prices are zero");
    if (!(budget >= 0.0)) throw std::invalid_argument("demand: negative budget");
}

std::vector<Index> zero_price_goods(const Vector& prices) {
    std::vector<Index> out;
    for (Index j = 0; j < prices.size(); ++j)
        if (prices[j] == 0.0) out.push_back(j);
    return out;
}

DemandSet cobb_douglas_demand(const Vector& alpha, const Vector& prices, double budget) {
    DemandSet d;
    d.budget = budget;
    d.bundle = Vector::Zero(alpha.size());
    if (budget == 0.0) {
        // Any affordable bundle has a zero coordinate on some weighted good with
        // positive price, so all of them are optimal with utility zero.
        bool forced_zero = false;
        for (Index j = 0; j < alpha.size(); ++j)
            if (alpha[j] > 0.0 && prices[j] > 0.0) forced_zero = true;
        if (!forced_zero) throw UnboundedDemand("demand: every weighted commodity is free");
        d.free_goods = zero_price_goods(prices);
        return d;
    }
    for (Index j = 0; j < alpha.size(); ++j) {
        if (prices[j] > 0.0) {
            d.bundle[j] = alpha[j] * budget / prices[j];
        } else if (alpha[j] > 0.0) {
            throw UnboundedDemand("demand: commodity " + std::to_string(j) +
                                  " has positive weight and zero price");
        } else {
            d.free_goods.push_back(j);
        }
    }
    return d;
}

DemandSet leontief_demand(const Vector& alpha, const Vector& prices, double budget) {
    const double cost = prices.dot(alpha);
    if (!(cost > 0.0)) throw UnboundedDemand("demand: Leontief bundle costs nothing at these prices");
    DemandSet d;
    d.budget = budget;
    d.bundle = (budget / cost) * alpha;
    return d;
}

}  // namespace

std::string_view to_string(UtilityKind kind) {
    switch (kind) {
        case UtilityKind::Linear: return "linear";
        case UtilityKind::Leontief: return "leontief";
        case UtilityKind::CobbDouglas: return "cobb_douglas";
    }
    return "unknown";
}

std::optional<UtilityKind> parse_utility_kind(std::string_view text) {
    if (text == "linear") return UtilityKind::Linear;
    if (text == "leontief") return UtilityKind::Leontief;
    if (text == "cobb_douglas") return UtilityKind::CobbDouglas;
    return std::nullopt;
}

bool operator==(const UtilityFunction& a, const UtilityFunction& b) {
    return a.kind == b.kind && a.alpha.size() == b.alpha.size() && a.alpha == b.alpha;
}

UtilityKind Economy::kind() const {
    if (utilities.empty()) throw std::logic_error("economy has no agents");
    return utilities.front().kind;
}

bool operator==(const Economy& a, const Economy& b) {
    return a.endowments.rows() == b.endowments.rows() && a.endowments.cols() == b.endowments.cols() &&
           a.endowments == b.endowments && a.utilities == b.utilities;
}

ReportProfile ReportProfile::with_report(Index agent, UtilityFunction report) const {
    ReportProfile out = *this;
    out.reports.at(static_cast<std::size_t>(agent)) = std::move(report);
    return out;
}

Equilibrium make_equilibrium(const Economy& economy, Vector prices, Matrix allocation) {
    Equilibrium eq;
    eq.clearing_residual = allocation.colwise().sum().transpose() - economy.supply();
    eq.budget_residual = allocation * prices - economy.endowments * prices;
    eq.prices = std::move(prices);
    eq.allocation = std::move(allocation);
    return eq;
}

namespace {

void check_utility(const UtilityFunction& u, Index agent, Index m, std::vector<Violation>& out,
                   const char* owner) {
    const std::string who = std::string(owner) + " " + std::to_string(agent);
    if (u.alpha.size() != m) {
        out.push_back({"alpha_length", {agent}, who + ": weight vector has wrong length"});
        return;
    }
    switch (u.kind) {
        case UtilityKind::Linear:
            for (Index j = 0; j < m; ++j)
                if (!(u.alpha[j] >= 0.0))
                    out.push_back({"linear_alpha_nonnegative", {agent, j}, who + ": negative weight"});
            break;
        case UtilityKind::Leontief:
            for (Index j = 0; j < m; ++j)
                if (!(u.alpha[j] > 0.0))
                    out.push_back({"leontief_alpha_positive", {agent, j}, who + ": weight must be > 0"});
            break;
        case UtilityKind::CobbDouglas:
            for (Index j = 0; j < m; ++j)
                if (!(u.alpha[j] >= 0.0 && u.alpha[j] <= 1.0))
                    out.push_back({"cobb_douglas_alpha_range", {agent, j}, who + ": exponent outside [0,1]"});
            if (!(std::abs(u.alpha.sum() - 1.0) <= kSimplexSumTol))
                out.push_back({"cobb_douglas_alpha_sum", {agent}, who + ": exponents do not sum to 1"});
            break;
    }
}

void check_competitiveness(const std::vector<UtilityFunction>& utilities, Index m,
                           std::vector<Violation>& out) {
    for (Index j = 0; j < m; ++j) {
        bool demanded = false;
        for (const auto& u : utilities)
            if (u.alpha.size() == m && u.alpha[j] > 0.0) demanded = true;
        if (!demanded)
            out.push_back({"strong_competitiveness", {j},
                           "commodity " + std::to_string(j) + " is not demanded by any agent"});
    }
}

}  // namespace

std::vector<Violation> validate_economy(const Economy& economy, bool require_assumption1) {
    std::vector<Violation> out;
    const Index n = economy.agents();
    const Index m = economy.commodities();
    if (n < 1 || m < 1) {
        out.push_back({"shape", {n, m}, "economy needs at least one agent and one commodity"});
        return out;
    }
    if (static_cast<Index>(economy.utilities.size()) != n) {
        out.push_back({"shape", {n, static_cast<Index>(economy.utilities.size())},
                       "number of utilities differs from number of endowment rows"});
        return out;
    }
    for (Index i = 0; i < n; ++i) {
        check_utility(economy.utilities[static_cast<std::size_t>(i)], i, m, out, "agent");
        if (economy.utilities[static_cast<std::size_t>(i)].kind != economy.utilities.front().kind)
            out.push_back({"single_family", {i}, "agents mix utility families"});
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
            const double e = economy.endowments(i, j);
            if (!(e >= 0.0 && e <= 1.0))
                out.push_back({"endowment_range", {i, j}, "endowment outside [0,1]"});
        }
    const Vector supply = economy.supply();
    for (Index j = 0; j < m; ++j)
        if (!(std::abs(supply[j] - 1.0) <= kSimplexSumTol))
            out.push_back({"supply_normalization", {j},
                           "endowments of commodity " + std::to_string(j) + " do not sum to 1"});

    if (require_assumption1) {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j)
                if (!(economy.endowments(i, j) > 0.0))
                    out.push_back({"endowment_positivity", {i, j},
                                   "agent " + std::to_string(i) + " holds none of commodity " +
                                       std::to_string(j)});
        check_competitiveness(economy.utilities, m, out);
    }
    return out;
}

std::vector<Violation> validate_reports(const Economy& economy, const ReportProfile& reports,
                                        bool require_strong_competitiveness) {
    std::vector<Violation> out;
    const Index m = economy.commodities();
    if (reports.size() != economy.agents()) {
        out.push_back({"shape", {reports.size()}, "report profile length differs from agent count"});
        return out;
    }
    for (Index i = 0; i < reports.size(); ++i) {
        check_utility(reports[i], i, m, out, "report");
        if (reports[i].kind != reports[0].kind)
            out.push_back({"single_family", {i}, "reports mix utility families"});
    }
    if (require_strong_competitiveness) check_competitiveness(reports.reports, m, out);
    return out;
}

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (std::size_t k = 0; k < violations.size(); ++k) {
        if (k) os << "; ";
        os << violations[k].rule << ": " << violations[k].message;
    }
    return os.str();
}

double utility_eval(const UtilityFunction& u, const Vector& bundle) {
    require_bundle_size(u.alpha, bundle, "utility_eval");
    switch (u.kind) {
        case UtilityKind::Linear:
            return u.alpha.dot(bundle);
        case UtilityKind::Leontief: {
            double value = kInf;
            for (Index j = 0; j < bundle.size(); ++j)
                if (u.alpha[j] > 0.0) value = std::min(value, bundle[j] / u.alpha[j]);
            return value;
        }
        case UtilityKind::CobbDouglas: {
            double value = 1.0;
            for (Index j = 0; j < bundle.size(); ++j)
                if (u.alpha[j] != 0.0) value *= std::pow(bundle[j], u.alpha[j]);
            return value;
        }
    }
    return 0.0;
}

bool DemandSet::single_valued() const {
    return !whole_budget_set && free_goods.empty() && spend_support.size() <= 1;
}

DemandSet linear_demand(const Vector& alpha, const Vector& prices, double budget, double tie_tol) {
    require_bundle_size(alpha, prices, "demand");
    require_price_budget(prices, budget);
    DemandSet d;
    d.budget = budget;
    d.bundle = Vector::Zero(alpha.size());
    if ((alpha.array() == 0.0).all()) {
        d.whole_budget_set = true;
        d.free_goods = zero_price_goods(prices);
        return d;
    }
    double best = 0.0;
    for (Index j = 0; j < alpha.size(); ++j) {
        if (prices[j] == 0.0) {
            if (alpha[j] > 0.0)
                throw UnboundedDemand("demand: commodity " + std::to_string(j) +
                                      " has positive weight and zero price");
            d.free_goods.push_back(j);
        } else {
            best = std::max(best, alpha[j] / prices[j]);
        }
    }
    if (budget == 0.0) return d;
    for (Index j = 0; j < alpha.size(); ++j)
        if (prices[j] > 0.0 && alpha[j] / prices[j] >= (1.0 - tie_tol) * best) d.spend_support.push_back(j);
    // Representative optimum: equal spending across the support.
    const double share = budget / static_cast<double>(d.spend_support.size());
    for (Index j : d.spend_support) d.bundle[j] = share / prices[j];
    return d;
}

DemandSet demand(const UtilityFunction& u, const Vector& prices, double budget) {
    require_bundle_size(u.alpha, prices, "demand");
    switch (u.kind) {
        case UtilityKind::Linear:
            return linear_demand(u.alpha, prices, budget, 1e-12);
        case UtilityKind::Leontief:
            require_price_budget(prices, budget);
            return leontief_demand(u.alpha, prices, budget);
        case UtilityKind::CobbDouglas:
            require_price_budget(prices, budget);
            return cobb_douglas_demand(u.alpha, prices, budget);
    }
    throw std::logic_error("demand: unknown utility kind");
}

double max_utility(const UtilityFunction& u, const Vector& prices, double budget) {
    require_bundle_size(u.alpha, prices, "max_utility");
    const Vector& a = u.alpha;
    switch (u.kind) {
        case UtilityKind::Linear: {
            double best = 0.0;
            for (Index j = 0; j < a.size(); ++j) {
                if (a[j] <= 0.0) continue;
                if (prices[j] <= 0.0) return kInf;
                best = std::max(best, a[j] / prices[j]);
            }
            return budget * best;
        }
        case UtilityKind::Leontief: {
            const double cost = prices.dot(a);
            return cost > 0.0 ? budget / cost : kInf;
        }
        case UtilityKind::CobbDouglas: {
            if (budget <= 0.0) {
                for (Index j = 0; j < a.size(); ++j)
                    if (a[j] > 0.0 && prices[j] > 0.0) return 0.0;
                return kInf;
            }
            double value = 1.0;
            for (Index j = 0; j < a.size(); ++j) {
                if (a[j] == 0.0) continue;
                if (prices[j] <= 0.0) return kInf;
                value *= std::pow(a[j] * budget / prices[j], a[j]);
            }
            return value;
        }
    }
    return kInf;
}

Vector excess_demand(const Economy& economy, const ReportProfile& reports, const Vector& prices) {
    if (prices.size() != economy.commodities())
        throw DimensionMismatch("excess_demand: price vector has wrong length");
    if (reports.size() != economy.agents())
        throw DimensionMismatch("excess_demand: report profile has wrong length");
    Vector total = Vector::Zero(economy.commodities());
    for (Index i = 0; i < economy.agents(); ++i) {
        const DemandSet d = demand(reports[i], prices, prices.dot(economy.endowment(i)));
        if (!d.single_valued())
            throw MultiValuedDemand("excess_demand: demand of agent " + std::to_string(i) +
                                    " is not single-valued");
        total += d.bundle;
    }
    return total - economy.supply();
}

EquilibriumVerdict is_equilibrium(const Economy& economy, const ReportProfile& reports,
                                  const Vector& prices, const Matrix& allocation, double tol) {
    EquilibriumVerdict v;
    const Index n = economy.agents();
    const Index m = economy.commodities();
    if (prices.size() != m || allocation.rows() != n || allocation.cols() != m || reports.size() != n) {
        v.failures.push_back("dimension mismatch");
        return v;
    }
    if ((prices.array() < -tol).any()) v.failures.push_back("negative price");
    const double scale = prices.cwiseMax(0.0).sum();
    if (!(scale > 0.0)) {
        v.failures.push_back("all prices are zero");
        return v;
    }
    if ((allocation.array() < -tol).any()) v.failures.push_back("negative allocation entry");

    // Conditions are homogeneous in prices; check them on the simplex.
    const Vector p = prices.cwiseMax(0.0) / scale;
    v.clearing_residual = allocation.colwise().sum().transpose() - economy.supply();
    v.budget_residual = allocation * p - economy.endowments * p;
    v.optimality_gap = Vector::Zero(n);

    for (Index j = 0; j < m; ++j)
        if (std::abs(v.clearing_residual[j]) > tol)
            v.failures.push_back("market " + std::to_string(j) + " does not clear");
    for (Index i = 0; i < n; ++i) {
        if (v.budget_residual[i] > tol)
            v.failures.push_back("agent " + std::to_string(i) + " overspends");
        const Vector x = allocation.row(i).transpose().cwiseMax(0.0);
        const double best = max_utility(reports[i], p, p.dot(economy.endowment(i)));
        const double got = utility_eval(reports[i], x);
        v.optimality_gap[i] = best - got;
        if (!std::isfinite(best) || best - got > tol * std::max(1.0, std::abs(best)))
            v.failures.push_back("bundle of agent " + std::to_string(i) + " is not optimal");
    }
    v.ok = v.failures.empty();
    return v;
}

}  // namespace walras
