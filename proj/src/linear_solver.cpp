#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "solver_detail.hpp"
#include "walras/solvers.hpp"

namespace walras {

namespace {

struct MoneyFlow {
    double value = 0.0;
    Matrix flow;  ///< money agent i spends on good j
};

// Edmonds-Karp on source -> agents -> goods -> sink. Agent arcs carry budgets, good arcs
// carry the value of the supply, middle arcs are uncapacitated where allowed.
MoneyFlow max_money_flow(const Vector& budgets, const Vector& values, const std::vector<std::vector<bool>>& allowed) {
    const Index n = budgets.size();
    const Index m = values.size();
    const Index nodes = n + m + 2;
    const Index source = 0;
    const Index sink = nodes - 1;
    const double total = budgets.sum() + values.sum();
    const double eps = 1e-15 * std::max(1.0, total);

    Matrix residual = Matrix::Zero(nodes, nodes);
    for (Index i = 0; i < n; ++i) {
        residual(source, 1 + i) = budgets[i];
        for (Index j = 0; j < m; ++j)
            if (allowed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                residual(1 + i, 1 + n + j) = total + 1.0;
    }
    for (Index j = 0; j < m; ++j) residual(1 + n + j, sink) = values[j];
    const Matrix capacity = residual;

    MoneyFlow out;
    std::vector<Index> parent(static_cast<std::size_t>(nodes));
    while (true) {
        std::fill(parent.begin(), parent.end(), Index{-1});
        parent[static_cast<std::size_t>(source)] = source;
        std::deque<Index> queue{source};
        while (!queue.empty() && parent[static_cast<std::size_t>(sink)] < 0) {
            const Index u = queue.front();
            queue.pop_front();
            for (Index v = 0; v < nodes; ++v)
                if (parent[static_cast<std::size_t>(v)] < 0 && residual(u, v) > eps) {
                    parent[static_cast<std::size_t>(v)] = u;
                    queue.push_back(v);
                }
        }
        if (parent[static_cast<std::size_t>(sink)] < 0) break;
        double push = std::numeric_limits<double>::infinity();
        for (Index v = sink; v != source; v = parent[static_cast<std::size_t>(v)])
            push = std::min(push, residual(parent[static_cast<std::size_t>(v)], v));
        for (Index v = sink; v != source; v = parent[static_cast<std::size_t>(v)]) {
            const Index u = parent[static_cast<std::size_t>(v)];
            residual(u, v) -= push;
            residual(v, u) += push;
        }
        out.value += push;
    }
    out.flow = Matrix::Zero(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
            out.flow(i, j) = std::max(0.0, capacity(1 + i, 1 + n + j) - residual(1 + i, 1 + n + j));
    return out;
}

struct Candidate {
    bool feasible = false;
    MoneyFlow flow;
};

// Which goods each agent may buy at p when bang-per-buck ties are relaxed by tie_tol.
Candidate clearing_flow(const Economy& economy, const ReportProfile& reports, const Vector& p, double tie_tol) {
    const Index n = economy.agents();
    const Index m = economy.commodities();
    Candidate c;
    std::vector<std::vector<bool>> allowed(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(m), false));
    const Vector budgets = economy.endowments * p;
    for (Index i = 0; i < n; ++i) {
        auto& row = allowed[static_cast<std::size_t>(i)];
        DemandSet d;
        try {
            d = linear_demand(reports[i].alpha, p, budgets[i], tie_tol);
        } catch (const UnboundedDemand&) {
            return c;
        }
        if (d.whole_budget_set) {
            for (Index j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = p[j] > 0.0;
        } else {
            for (Index j : d.spend_support) row[static_cast<std::size_t>(j)] = true;
        }
    }
    Vector values = (p.array() * economy.supply().array()).matrix();
    c.flow = max_money_flow(budgets, values, allowed);
    c.feasible = values.sum() - c.flow.value <= 1e-9 * std::max(1.0, values.sum());
    return c;
}

// Projects (p, flows on used arcs) onto the affine set where every used arc is a
// bang-per-buck tie, goods are paid for exactly, and every budget is spent.
std::optional<std::pair<Vector, Matrix>> project_onto_support(const Economy& economy, const ReportProfile& reports,
                                                               const Vector& p0, const Matrix& f0) {
    const Index n = economy.agents();
    const Index m = economy.commodities();
    const Vector supply = economy.supply();
    std::vector<std::pair<Index, Index>> arcs;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
            if (p0[j] > 0.0 && f0(i, j) > 1e-13) arcs.emplace_back(i, j);
    const Index vars = m + static_cast<Index>(arcs.size());

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    auto add_row = [&](Eigen::RowVectorXd r, double b) {
        rows.push_back(std::move(r));
        rhs.push_back(b);
    };
    for (Index j = 0; j < m; ++j) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(vars);
        if (p0[j] == 0.0) {
            r[j] = 1.0;
        } else {
            r[j] = -supply[j];
            for (std::size_t a = 0; a < arcs.size(); ++a)
                if (arcs[a].second == j) r[m + static_cast<Index>(a)] = 1.0;
        }
        add_row(std::move(r), 0.0);
    }
    for (Index i = 0; i < n; ++i) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(vars);
        r.head(m) = -economy.endowment(i).transpose();
        std::vector<Index> bought;
        for (std::size_t a = 0; a < arcs.size(); ++a)
            if (arcs[a].first == i) {
                r[m + static_cast<Index>(a)] = 1.0;
                bought.push_back(arcs[a].second);
            }
        add_row(std::move(r), 0.0);
        const Vector& alpha = reports[i].alpha;
        if ((alpha.array() == 0.0).all()) continue;
        for (std::size_t k = 1; k < bought.size(); ++k) {
            Eigen::RowVectorXd tie = Eigen::RowVectorXd::Zero(vars);
            const Index j = bought.front();
            const Index l = bought[k];
            tie[l] += alpha[j];
            tie[j] -= alpha[l];
            add_row(std::move(tie), 0.0);
        }
    }
    Eigen::RowVectorXd norm = Eigen::RowVectorXd::Zero(vars);
    norm.head(m).setOnes();
    add_row(std::move(norm), 1.0);

    Matrix constraints(static_cast<Index>(rows.size()), vars);
    Vector targets(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        constraints.row(static_cast<Index>(r)) = rows[r];
        targets[static_cast<Index>(r)] = rhs[r];
    }
    Vector x0(vars);
    x0.head(m) = p0;
    for (std::size_t a = 0; a < arcs.size(); ++a) x0[m + static_cast<Index>(a)] = f0(arcs[a].first, arcs[a].second);

    const Vector correction =
        Eigen::CompleteOrthogonalDecomposition<Matrix>(constraints).solve(constraints * x0 - targets);
    const Vector x = x0 - correction;
    if ((constraints * x - targets).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;
    if ((x.array() < -1e-12).any()) return std::nullopt;

    Vector p = x.head(m).cwiseMax(0.0);
    Matrix allocation = Matrix::Zero(n, m);
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto [i, j] = arcs[a];
        if (!(p[j] > 1e-12)) return std::nullopt;
        allocation(i, j) = std::max(0.0, x[m + static_cast<Index>(a)]) / p[j];
    }
    return std::make_pair(std::move(p), std::move(allocation));
}

}  // namespace

EquilibriumSet solve_linear_smallscale(const Economy& economy, const ReportProfile& reports,
                                       const SolverConfig& config) {
    for (const auto& r : reports.reports)
        if (r.kind != UtilityKind::Linear) throw KindMismatch("solve_linear_smallscale: expected linear reports");
    const auto violations = validate_reports(economy, reports, false);
    if (!violations.empty()) throw std::invalid_argument("solve_linear_smallscale: " + describe(violations));

    const Index m = economy.commodities();
    const double spacing = 1.0 / (config.grid_resolution - 1);
    EquilibriumSet set;
    set.exhaustive = false;

    for (const Vector& p : simplex_grid(m, config.grid_resolution, false)) {
        double smallest = 1.0;
        for (Index j = 0; j < m; ++j)
            if (p[j] > 0.0) smallest = std::min(smallest, p[j]);
        const double relaxed = std::min(0.5, 2.0 * spacing / smallest);
        const Candidate c = clearing_flow(economy, reports, p, relaxed);
        if (!c.feasible) continue;
        const auto refined = project_onto_support(economy, reports, p, c.flow.flow);
        if (!refined) continue;
        const auto& [prices, bought] = *refined;
        const Matrix allocation = detail::absorb_free_surplus(economy, bought, prices);
        if (!is_equilibrium(economy, reports, prices, allocation, config.clearing_tol).ok) continue;
        set.members.push_back(make_equilibrium(economy, prices, allocation));
    }

    detail::sort_and_dedup(set.members, 1e-6);
    set.family_note = detail::detect_continuum(set.members, [&](const Vector& p) {
        const Candidate c = clearing_flow(economy, reports, p, 1e-12);
        if (!c.feasible) return false;
        const Matrix allocation = detail::absorb_free_surplus(
            economy, (c.flow.flow.array().rowwise() / p.transpose().array().max(1e-300)).matrix(), p);
        return is_equilibrium(economy, reports, p, allocation, config.clearing_tol).ok;
    });
    return set;
}

}  // namespace walras
