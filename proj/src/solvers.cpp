#include "walras/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "solver_detail.hpp"

namespace walras {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_kind(const ReportProfile& reports, UtilityKind kind, const char* who) {
    for (const auto& r : reports.reports)
        if (r.kind != kind)
            throw KindMismatch(std::string(who) + ": expected " + std::string(to_string(kind)) +
                               " reports");
}

void compositions(Index parts, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = 0; k <= total; ++k) {
        prefix.push_back(k);
        compositions(parts - 1, total - k, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

Vector simplex_normalized(const Vector& prices) { return prices / prices.sum(); }

Vector ratio_normalized(const Vector& prices) {
    if (prices[0] == 0.0) throw std::domain_error("ratio_normalized: first price is zero");
    return prices / prices[0];
}

Vector project_to_simplex(const Vector& v) {
    const Index m = v.size();
    std::vector<double> u(v.data(), v.data() + m);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (Index k = 0; k < m; ++k) {
        cumulative += u[static_cast<std::size_t>(k)];
        const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
    }
    return (v.array() - theta).cwiseMax(0.0).matrix();
}

std::vector<Vector> simplex_grid(Index m, int resolution, bool interior_only) {
    if (m < 1) throw std::invalid_argument("simplex_grid: dimension must be >= 1");
    if (resolution < 2) throw std::invalid_argument("simplex_grid: resolution must be >= 2");
    std::vector<std::vector<int>> raw;
    std::vector<int> prefix;
    compositions(m, resolution - 1, prefix, raw);
    std::vector<Vector> out;
    out.reserve(raw.size());
    const double denom = resolution - 1;
    for (const auto& c : raw) {
        if (interior_only && m > 1 && std::any_of(c.begin(), c.end(), [](int k) { return k == 0; }))
            continue;
        Vector p(m);
        for (Index j = 0; j < m; ++j) p[j] = c[static_cast<std::size_t>(j)] / denom;
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------------
// Cobb-Douglas

Equilibrium solve_cobb_douglas(const Economy& economy, const ReportProfile& reports,
                               const SolverConfig& config) {
    require_kind(reports, UtilityKind::CobbDouglas, "solve_cobb_douglas");
    auto violations = validate_economy(economy, false);
    auto report_violations = validate_reports(economy, reports, true);
    violations.insert(violations.end(), report_violations.begin(), report_violations.end());
    for (Index i = 0; i < economy.agents(); ++i)
        for (Index j = 0; j < economy.commodities(); ++j)
            if (!(economy.endowments(i, j) > 0.0))
                violations.push_back({"endowment_positivity", {i, j}, "endowment must be positive"});
    if (!violations.empty()) throw AssumptionViolation("solve_cobb_douglas: " + describe(violations));

    const Index n = economy.agents();
    const Index m = economy.commodities();
    Matrix alpha(n, m);
    for (Index i = 0; i < n; ++i) alpha.row(i) = reports[i].alpha.transpose();

    // p_k = sum_i alpha_ik (p . e_i): spending on k equals the value of its supply.
    const Matrix transition = alpha.transpose() * economy.endowments;

    Matrix power = transition;
    for (int s = 0; s < 64; ++s) {
        Matrix next = power * power;
        next.array().rowwise() /= next.colwise().sum().array();
        const double change = (next - power).cwiseAbs().maxCoeff();
        power = std::move(next);
        if (change <= 1e-16) break;
    }
    Vector p = power.rowwise().mean();
    p /= p.sum();
    double step = kInf;
    for (int it = 0; it < config.max_iterations && step > 1e-15; ++it) {
        Vector q = transition * p;
        q /= q.sum();
        step = (q - p).cwiseAbs().maxCoeff();
        p = std::move(q);
    }
    const double fixed_point_residual = (transition * p - p).cwiseAbs().maxCoeff();
    if (!(fixed_point_residual <= config.clearing_tol) || !(p.array() > 0.0).all())
        throw NoConvergence("solve_cobb_douglas: price iteration did not converge", fixed_point_residual);

    Matrix allocation(n, m);
    if (n == 1) {
        // Clearing leaves the single agent with the whole supply.
        allocation = economy.endowments;
    } else {
        const Vector budgets = economy.endowments * p;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j) allocation(i, j) = alpha(i, j) * budgets[i] / p[j];
    }
    Equilibrium eq = make_equilibrium(economy, std::move(p), std::move(allocation));
    const double clearing = eq.clearing_residual.cwiseAbs().maxCoeff();
    if (!(clearing <= config.clearing_tol))
        throw NoConvergence("solve_cobb_douglas: markets do not clear", clearing);
    return eq;
}

CobbDouglas2x2 solve_cd_2x2(double alpha, double beta, double e11, double e12) {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!open_unit(alpha) || !open_unit(beta) || !open_unit(e11) || !open_unit(e12))
        throw OutOfRange("solve_cd_2x2: parameters must lie in (0,1)");
    const double e21 = 1.0 - e11;
    const double e22 = 1.0 - e12;
    CobbDouglas2x2 out;
    out.p2 = (1.0 - alpha * e11 - beta * e21) / (alpha * e12 + beta * e22);
    out.x1 = Vector(2);
    out.x2 = Vector(2);
    out.x1 << alpha * (e11 + e12 * out.p2), (1.0 - alpha) * (e11 / out.p2 + e12);
    out.x2 << beta * (e21 + e22 * out.p2), (1.0 - beta) * (e21 / out.p2 + e22);
    return out;
}

// ---------------------------------------------------------------------------------
// Shared helpers for the set-valued solvers

namespace detail {

double clearing_gap(const Vector& z, const Vector& prices) {
    double gap = 0.0;
    for (Index j = 0; j < z.size(); ++j)
        gap = std::max(gap, prices[j] > 0.0 ? std::abs(z[j]) : std::max(z[j], 0.0));
    return gap;
}

bool lexicographic_less(const Vector& a, const Vector& b) {
    for (Index j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return true;
        if (a[j] > b[j]) return false;
    }
    return false;
}

void sort_and_dedup(std::vector<Equilibrium>& members, double min_distance) {
    std::stable_sort(members.begin(), members.end(), [](const Equilibrium& a, const Equilibrium& b) {
        return lexicographic_less(a.prices, b.prices);
    });
    std::vector<Equilibrium> kept;
    for (auto& eq : members) {
        const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Equilibrium& k) {
            return (k.prices - eq.prices).cwiseAbs().maxCoeff() < min_distance;
        });
        if (!duplicate) kept.push_back(std::move(eq));
    }
    members = std::move(kept);
}

std::optional<std::string> detect_continuum(const std::vector<Equilibrium>& members,
                                            const std::function<bool(const Vector&)>& clears) {
    if (members.size() < 3) return std::nullopt;
    const Vector& a = members.front().prices;
    for (std::size_t k = members.size() - 1; k >= 1; --k) {
        const Vector d = members[k].prices - a;
        const double dd = d.squaredNorm();
        if (dd == 0.0) continue;
        std::vector<double> along{0.0};
        for (std::size_t c = 1; c < members.size(); ++c) {
            const Vector w = members[c].prices - a;
            const double t = w.dot(d) / dd;
            if ((w - t * d).cwiseAbs().maxCoeff() < 1e-9) along.push_back(t);
        }
        if (along.size() < 3) continue;
        std::sort(along.begin(), along.end());
        bool all_clear = true;
        for (std::size_t s = 0; s + 1 < along.size() && all_clear; ++s)
            all_clear = clears(a + 0.5 * (along[s] + along[s + 1]) * d);
        if (!all_clear) continue;
        std::ostringstream os;
        const Vector lo = a + along.front() * d;
        const Vector hi = a + along.back() * d;
        os << "continuum: every price on the segment from (" << lo.transpose() << ") to ("
           << hi.transpose() << ") clears (" << along.size() << " sampled members)";
        return os.str();
    }
    return std::nullopt;
}

Matrix absorb_free_surplus(const Economy& economy, Matrix allocation, const Vector& prices) {
    const Vector surplus = economy.supply() - allocation.colwise().sum().transpose();
    const Vector supply = economy.supply();
    for (Index j = 0; j < prices.size(); ++j) {
        if (prices[j] > 0.0 || supply[j] <= 0.0) continue;
        for (Index i = 0; i < economy.agents(); ++i)
            allocation(i, j) += surplus[j] * economy.endowments(i, j) / supply[j];
    }
    return allocation;
}

}  // namespace detail

// ---------------------------------------------------------------------------------
// Leontief

namespace {

struct LeontiefEval {
    double gap = kInf;
    Matrix bundles;
};

LeontiefEval evaluate_leontief(const Economy& economy, const ReportProfile& reports, const Vector& p) {
    LeontiefEval out;
    out.bundles = Matrix::Zero(economy.agents(), economy.commodities());
    try {
        for (Index i = 0; i < economy.agents(); ++i)
            out.bundles.row(i) = demand(reports[i], p, p.dot(economy.endowment(i))).bundle.transpose();
    } catch (const std::exception&) {
        return out;
    }
    const Vector z = out.bundles.colwise().sum().transpose() - economy.supply();
    out.gap = detail::clearing_gap(z, p);
    return out;
}

}  // namespace

EquilibriumSet solve_leontief(const Economy& economy, const ReportProfile& reports,
                              const SolverConfig& config) {
    require_kind(reports, UtilityKind::Leontief, "solve_leontief");
    const auto violations = validate_reports(economy, reports, false);
    if (!violations.empty()) throw std::invalid_argument("solve_leontief: " + describe(violations));

    const Index m = economy.commodities();
    const std::vector<Vector> starts = simplex_grid(m, config.grid_resolution, true);

    EquilibriumSet set;
    double best_gap = kInf;
    for (const Vector& start : starts) {
        Vector p = start;
        LeontiefEval current = evaluate_leontief(economy, reports, p);
        double step = 0.5;
        for (int it = 0; it < config.max_iterations && current.gap > config.clearing_tol; ++it) {
            const Vector z = current.bundles.colwise().sum().transpose() - economy.supply();
            const Vector candidate = project_to_simplex(p + step * z);
            LeontiefEval next = evaluate_leontief(economy, reports, candidate);
            if (next.gap < current.gap) {
                p = candidate;
                current = std::move(next);
                step = std::min(1.0, 2.0 * step);
            } else {
                step *= 0.5;
                if (step < 1e-16) break;
            }
        }
        best_gap = std::min(best_gap, current.gap);
        if (current.gap <= config.clearing_tol)
            set.members.push_back(make_equilibrium(
                economy, p, detail::absorb_free_surplus(economy, current.bundles, p)));
    }
    if (set.members.empty())
        throw NoConvergence("solve_leontief: no clearing prices found", best_gap);

    detail::sort_and_dedup(set.members, 1e-6);
    set.family_note = detail::detect_continuum(set.members, [&](const Vector& p) {
        return evaluate_leontief(economy, reports, p).gap <= config.clearing_tol;
    });
    set.exhaustive = false;
    return set;
}

// ---------------------------------------------------------------------------------
// Brute-force oracle

Equilibrium brute_force_equilibrium(const Economy& economy, const ReportProfile& reports,
                                    const SolverConfig& config) {
    const Index m = economy.commodities();
    auto merit = [&](const Vector& p) {
        try {
            return excess_demand(economy, reports, p).squaredNorm();
        } catch (const std::exception&) {
            return kInf;
        }
    };

    std::vector<Vector> grid = simplex_grid(m, config.grid_resolution, true);
    Vector p = grid.front();
    double value = kInf;
    for (const Vector& q : grid) {
        const double f = merit(q);
        if (f < value) {
            value = f;
            p = q;
        }
    }
    if (!std::isfinite(value)) throw NoConvergence("brute_force_equilibrium: no admissible grid point", kInf);

    std::vector<Vector> directions;
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k)
            if (j != k) {
                Vector d = Vector::Zero(m);
                d[j] = 1.0;
                d[k] = -1.0;
                directions.push_back(std::move(d));
            }

    double h = 1.0 / (config.grid_resolution - 1);
    for (long polls = 0; h > 1e-16 && value > 0.0 && polls < 200L * config.max_iterations; ++polls) {
        bool improved = false;
        for (const Vector& d : directions) {
            const Vector q = p + h * d;
            if ((q.array() <= 0.0).any()) continue;
            const double f = merit(q);
            if (f < value) {
                value = f;
                p = q;
                improved = true;
                break;
            }
        }
        h = improved ? std::min(2.0 * h, 0.5) : 0.5 * h;
    }

    const Vector z = excess_demand(economy, reports, p);
    const double residual = z.cwiseAbs().maxCoeff();
    if (!(residual <= config.clearing_tol))
        throw NoConvergence("brute_force_equilibrium: residual above tolerance", residual);
    Matrix allocation(economy.agents(), m);
    for (Index i = 0; i < economy.agents(); ++i)
        allocation.row(i) = demand(reports[i], p, p.dot(economy.endowment(i))).bundle.transpose();
    return make_equilibrium(economy, p, std::move(allocation));
}

}  // namespace walras
