#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "walras/adjugate.hpp"
#include "walras/errors.hpp"
#include "walras/harness/commands.hpp"
#include "walras/incentive.hpp"
#include "walras/solvers.hpp"

namespace py = pybind11;
using namespace walras;

namespace {

Economy make_economy(const std::string& kind, const Matrix& endowments, const Matrix& alphas) {
    const auto k = parse_utility_kind(kind);
    if (!k) throw std::invalid_argument("unknown utility kind '" + kind + "'");
    if (alphas.rows() != endowments.rows() || alphas.cols() != endowments.cols())
        throw DimensionMismatch("alphas must have the shape of endowments");
    Economy econ;
    econ.endowments = endowments;
    for (Index i = 0; i < alphas.rows(); ++i) econ.utilities.push_back({*k, alphas.row(i).transpose()});
    return econ;
}

Matrix alpha_matrix(const Economy& econ) {
    Matrix a(econ.agents(), econ.commodities());
    for (Index i = 0; i < econ.agents(); ++i) a.row(i) = econ.utilities[static_cast<std::size_t>(i)].alpha.transpose();
    return a;
}

ReportProfile reports_from(const Economy& econ, const std::optional<Matrix>& reports) {
    if (!reports) return ReportProfile::truthful(econ);
    Economy swapped = make_economy(std::string(to_string(econ.kind())), econ.endowments, *reports);
    return ReportProfile{swapped.utilities};
}

SolverConfig config_with(double tol, int grid) {
    SolverConfig c;
    c.clearing_tol = tol;
    c.grid_resolution = grid;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Competitive equilibria and incentive ratios of exchange markets";

    py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);
    py::register_exception<OutOfRange>(m, "OutOfRange", PyExc_ValueError);
    py::register_exception<NoConvergence>(m, "NoConvergence", PyExc_RuntimeError);
    py::register_exception<UnboundedDemand>(m, "UnboundedDemand", PyExc_ArithmeticError);

    py::class_<Economy>(m, "Economy")
        .def(py::init(&make_economy), py::arg("kind"), py::arg("endowments"), py::arg("alphas"))
        .def_property_readonly("kind", [](const Economy& e) { return std::string(to_string(e.kind())); })
        .def_readonly("endowments", &Economy::endowments)
        .def_property_readonly("alphas", &alpha_matrix)
        .def_property_readonly("agents", &Economy::agents)
        .def_property_readonly("commodities", &Economy::commodities)
        .def("violations",
             [](const Economy& e, bool strict) {
                 std::vector<std::string> out;
                 for (const auto& v : validate_economy(e, strict)) out.push_back(v.rule + ": " + v.message);
                 return out;
             },
             py::arg("strict") = true)
        .def("__eq__", [](const Economy& a, const Economy& b) { return a == b; });

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("prices", &Equilibrium::prices)
        .def_readonly("allocation", &Equilibrium::allocation)
        .def_readonly("clearing_residual", &Equilibrium::clearing_residual)
        .def_readonly("budget_residual", &Equilibrium::budget_residual)
        .def_property_readonly("price_ratios", [](const Equilibrium& e) { return ratio_normalized(e.prices); });

    m.def("utility", [](const std::string& kind, const Vector& alpha, const Vector& bundle) {
        const auto k = parse_utility_kind(kind);
        if (!k) throw std::invalid_argument("unknown utility kind '" + kind + "'");
        return utility_eval({*k, alpha}, bundle);
    }, py::arg("kind"), py::arg("alpha"), py::arg("bundle"));

    m.def("excess_demand",
          [](const Economy& e, const Vector& p, const std::optional<Matrix>& r) {
              return excess_demand(e, reports_from(e, r), p);
          },
          py::arg("economy"), py::arg("prices"), py::arg("reports") = py::none());

    m.def("is_equilibrium",
          [](const Economy& e, const Vector& p, const Matrix& x, double tol, const std::optional<Matrix>& r) {
              return is_equilibrium(e, reports_from(e, r), p, x, tol).ok;
          },
          py::arg("economy"), py::arg("prices"), py::arg("allocation"), py::arg("tol") = 1e-8,
          py::arg("reports") = py::none());

    m.def("solve",
          [](const Economy& e, const std::optional<Matrix>& r, double tol, int grid) {
              const ReportProfile reports = reports_from(e, r);
              const SolverConfig c = config_with(tol, grid);
              switch (e.kind()) {
                  case UtilityKind::CobbDouglas: return std::vector<Equilibrium>{solve_cobb_douglas(e, reports, c)};
                  case UtilityKind::Leontief: return solve_leontief(e, reports, c).members;
                  case UtilityKind::Linear: return solve_linear_smallscale(e, reports, c).members;
              }
              return std::vector<Equilibrium>{};
          },
          py::arg("economy"), py::arg("reports") = py::none(), py::arg("tol") = 1e-8, py::arg("grid") = 21,
          "All equilibria found for the market (a single one for Cobb-Douglas).");

    m.def("brute_force_equilibrium",
          [](const Economy& e, int grid) {
              return brute_force_equilibrium(e, ReportProfile::truthful(e), config_with(1e-8, grid));
          },
          py::arg("economy"), py::arg("grid") = 41);

    m.def("solve_cd_2x2",
          [](double a, double b, double e11, double e12) {
              const CobbDouglas2x2 s = solve_cd_2x2(a, b, e11, e12);
              return py::make_tuple(s.p2, s.x1, s.x2);
          },
          py::arg("alpha"), py::arg("beta"), py::arg("e11"), py::arg("e12"));

    m.def("adjugate", &adjugate, py::arg("matrix"));
    m.def("spending_matrix",
          [](const Economy& e, const std::optional<Matrix>& r) { return build_spending_matrix(e, reports_from(e, r)).entries; },
          py::arg("economy"), py::arg("reports") = py::none());
    m.def("price_from_adjugate",
          [](const Economy& e, const std::optional<Matrix>& r) { return price_from_adjugate(e, reports_from(e, r)); },
          py::arg("economy"), py::arg("reports") = py::none());
    m.def("budget_determinant",
          [](const Economy& e, Index agent, const std::optional<Matrix>& r) {
              return budget_determinant(e, reports_from(e, r), agent);
          },
          py::arg("economy"), py::arg("agent"), py::arg("reports") = py::none());
    m.def("concentration_bound", &concentration_bound, py::arg("alpha"));

    py::class_<RatioResult>(m, "RatioResult")
        .def_readonly("ratio", &RatioResult::ratio)
        .def_readonly("truthful_utility", &RatioResult::truthful_utility)
        .def_readonly("deviant_utility", &RatioResult::deviant_utility)
        .def_readonly("truthful_equilibrium", &RatioResult::truthful_equilibrium)
        .def_readonly("deviant_equilibrium", &RatioResult::deviant_equilibrium)
        .def_readonly("budget_invariance_residual", &RatioResult::budget_invariance_residual)
        .def_property_readonly("best_report", [](const RatioResult& r) { return r.best_report.alpha; });

    m.def("incentive_ratio",
          [](const Economy& e, Index agent, int grid, int refine_iterations, std::uint64_t seed) {
              RatioQuery q{e, agent, {}, {}};
              q.optimizer.grid_resolution = grid;
              q.optimizer.refine_iterations = refine_iterations;
              q.optimizer.seed = seed;
              return incentive_ratio_cd(q);
          },
          py::arg("economy"), py::arg("agent") = 0, py::arg("grid") = 21, py::arg("refine_iterations") = 200,
          py::arg("seed") = 0);
    m.def("evaluate_deviation",
          [](const Economy& e, Index agent, const Vector& report) { return evaluate_deviation(e, agent, report); },
          py::arg("economy"), py::arg("agent"), py::arg("report"));
    m.def("ratio_closed_form_2x2",
          [](double a, double ad, double b, double e11, double e12) {
              const ClosedForm2x2 c = ratio_closed_form_2x2(a, ad, b, e11, e12);
              return py::make_tuple(c.t1, c.t2, c.ratio);
          },
          py::arg("alpha"), py::arg("alpha_dev"), py::arg("beta"), py::arg("e11"), py::arg("e12"));

    py::class_<Witness>(m, "Witness")
        .def_readonly("economy", &Witness::economy)
        .def_readonly("truthful", &Witness::truthful)
        .def_readonly("deviant", &Witness::deviant)
        .def_readonly("ratio", &Witness::ratio)
        .def_readonly("closed_form", &Witness::closed_form)
        .def_property_readonly("certified", &Witness::certified);
    m.def("witness_linear", &witness_linear, py::arg("epsilon"));
    m.def("witness_leontief", &witness_leontief, py::arg("epsilon"), py::arg("delta"));
    m.def("witness_cd", &witness_cd, py::arg("epsilon"));

    m.def("example_market", &manipulable_example_market);
    m.def("example_report", &manipulable_example_report);

    // Harness commands return their JSON report as text; the package decodes it.
    m.def("_reproduce", [] {
        const auto r = harness::cmd_reproduce();
        return py::make_tuple(r.report.dump(), r.exit_code);
    });
    m.def("_verify", [](const std::string& suite, std::uint64_t seed, std::optional<std::size_t> samples) {
        harness::VerifyOptions o;
        o.suite = suite;
        o.seed = seed;
        o.samples = samples;
        const auto r = harness::cmd_verify(o);
        return py::make_tuple(r.report.dump(), r.exit_code);
    }, py::arg("suite"), py::arg("seed"), py::arg("samples"));
    m.def("_load_market", [](const std::string& text) {
        const auto spec = harness::parse_market_spec(text);
        return py::make_tuple(spec.economy, spec.renormalized, spec.warnings);
    }, py::arg("text"));
    m.def("_dump_market", [](const Economy& e) {
        harness::MarketSpec spec;
        spec.economy = e;
        return harness::write_market_spec(spec);
    }, py::arg("economy"));
}
