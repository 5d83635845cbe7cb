// walras: solve exchange markets, measure incentive ratios and run the verification suites.
//
//   walras solve market.json [--tol 1e-8] [--grid 21]
//   walras ratio market.json [--agent 0] [--grid 21] [--seed 0] [--deviation .85,.1,.05|truth]
//   walras witness cobb_douglas [--epsilon .02] [--sweep 20 --from .5 --to .001] [--csv]
//   walras verify [bounds|budget|oracle|power|all] [--seed 7] [--samples N] [--csv]
//   walras reproduce
//
// The JSON report goes to standard output. With --csv, the sweep rows replace it and the
// report is written to standard error instead.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "walras/harness/commands.hpp"

namespace {

using namespace walras;
using namespace walras::harness;

Vector parse_deviation(const std::string& text) {
    if (text == "truth") return Vector(0);
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("--deviation: '" + item + "' is not a number");
        }
    }
    if (values.empty()) throw ParseError("--deviation: empty list");
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

int emit(const CommandResult& result, bool csv) {
    if (csv && !result.csv.empty()) {
        std::cout << result.csv;
        std::cerr << result.report.dump(2) << '\n';
    } else {
        std::cout << result.report.dump(2) << '\n';
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Competitive equilibria and incentive ratios of exchange markets"};
    app.require_subcommand(1);

    std::string market_path;
    double tol = 1e-8;
    int grid = 21;
    bool csv = false;

    auto* solve = app.add_subcommand("solve", "Compute the equilibria of a market file");
    solve->add_option("market", market_path, "Market file (JSON)")->required();
    solve->add_option("--tol", tol, "Clearing tolerance");
    solve->add_option("--grid", grid, "Price grid resolution for the linear and Leontief solvers");

    Index agent = 0;
    std::uint64_t seed = 0;
    std::string deviation;
    auto* ratio = app.add_subcommand("ratio", "Best misreport of one agent in a Cobb-Douglas market");
    ratio->add_option("market", market_path, "Market file (JSON)")->required();
    ratio->add_option("--agent", agent, "Deviating agent (0-based)");
    ratio->add_option("--grid", grid, "Points per edge of the report simplex grid");
    ratio->add_option("--seed", seed, "Polling order of the local refinement");
    ratio->add_option("--tol", tol, "Clearing tolerance");
    ratio->add_option("--deviation", deviation, "Evaluate this report instead of searching ('truth' or a,b,c)");

    WitnessOptions witness_options;
    std::size_t sweep_points = 0;
    auto* witness = app.add_subcommand("witness", "Build a two-equilibrium witness market");
    witness->add_option("family", witness_options.family, "linear | leontief | cobb_douglas")
        ->required()
        ->check(CLI::IsMember({"linear", "leontief", "cobb_douglas"}));
    auto* eps_opt = witness->add_option("--epsilon", "Family parameter epsilon");
    auto* delta_opt = witness->add_option("--delta", "Leontief parameter delta");
    witness->add_option("--sweep", sweep_points, "Number of log-spaced epsilon values");
    witness->add_option("--from", witness_options.sweep_from, "First epsilon of the sweep");
    witness->add_option("--to", witness_options.sweep_to, "Last epsilon of the sweep");
    witness->add_flag("--csv", csv, "Emit sweep rows as CSV");

    VerifyOptions verify_options;
    std::size_t samples = 0;
    auto* verify = app.add_subcommand("verify", "Run the property suites");
    verify->add_option("suite", verify_options.suite, "bounds | budget | oracle | power | all")
        ->check(CLI::IsMember({"bounds", "budget", "oracle", "power", "all"}));
    verify->add_option("--seed", verify_options.seed, "Sampler seed");
    verify->add_option("--samples", samples, "Samples per suite (per market size for bounds)");
    verify->add_option("--grid", verify_options.grid, "Report grid resolution for the bounds suite");
    verify->add_option("--agents", verify_options.agents, "Agent counts for the bounds suite");
    verify->add_option("--commodities", verify_options.commodities, "Commodity counts for the bounds suite");
    verify->add_flag("--csv", csv, "Emit bounds rows as CSV");

    auto* reproduce = app.add_subcommand("reproduce", "Replay the worked three-good example and the witnesses");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return emit(error_result(kExitParseError, e.what()), false);
    }

    try {
        if (*solve) {
            SolveOptions options{tol, grid};
            return emit(cmd_solve(load_market_spec(market_path), options), false);
        }
        if (*ratio) {
            RatioOptions options;
            options.agent = agent;
            options.optimizer.grid_resolution = grid;
            options.optimizer.seed = seed;
            options.tol = tol;
            if (!deviation.empty()) options.deviation = parse_deviation(deviation);
            return emit(cmd_ratio(load_market_spec(market_path), options), false);
        }
        if (*witness) {
            if (*eps_opt) witness_options.epsilon = eps_opt->as<double>();
            if (*delta_opt) witness_options.delta = delta_opt->as<double>();
            if (sweep_points > 0) witness_options.sweep_points = sweep_points;
            witness_options.csv = csv;
            return emit(cmd_witness(witness_options), csv);
        }
        if (*verify) {
            if (samples > 0) verify_options.samples = samples;
            verify_options.csv = csv;
            return emit(cmd_verify(verify_options), csv);
        }
        if (*reproduce) return emit(cmd_reproduce(), false);
    } catch (const ParseError& e) {
        return emit(error_result(kExitParseError, e.what()), false);
    } catch (const ValidationError& e) {
        return emit(error_result(kExitValidationError, e.what()), false);
    } catch (const std::invalid_argument& e) {
        return emit(error_result(kExitValidationError, e.what()), false);
    }
    return kExitParseError;
}
