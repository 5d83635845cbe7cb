#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walras/harness/market_file.hpp"
#include "walras/incentive.hpp"

namespace walras::harness {

enum ExitCode : int {
    kExitPass = 0,
    kExitVerificationFailure = 1,
    kExitResidualFailure = 2,
    kExitParseError = 3,
    kExitValidationError = 4,
};

/// A machine-readable run report plus the process exit code it implies. `csv` holds
/// sweep rows when CSV output was requested.
struct CommandResult {
    nlohmann::json report;
    int exit_code = kExitPass;
    std::string csv;
};

struct SolveOptions {
    double tol = 1e-8;
    int grid = 21;
};

CommandResult cmd_solve(const MarketSpec& spec, const SolveOptions& options);

struct RatioOptions {
    Index agent = 0;
    OptimizerSettings optimizer;
    /// Evaluate this report instead of searching. An empty vector means "report the truth".
    std::optional<Vector> deviation;
    double tol = 1e-8;
};

CommandResult cmd_ratio(const MarketSpec& spec, const RatioOptions& options);

struct WitnessOptions {
    std::string family;  ///< linear | leontief | cobb_douglas
    std::optional<double> epsilon;
    std::optional<double> delta;
    /// Log-spaced epsilon values from `sweep_from` to `sweep_to` (inclusive).
    std::optional<std::size_t> sweep_points;
    double sweep_from = 0.5;
    double sweep_to = 0.001;
    bool csv = false;
};

CommandResult cmd_witness(const WitnessOptions& options);

struct VerifyOptions {
    std::string suite = "all";  ///< bounds | budget | oracle | power | all
    std::uint64_t seed = 7;
    std::optional<std::size_t> samples;
    std::vector<Index> agents{2, 3};
    std::vector<Index> commodities{2, 3, 4};
    int grid = 21;
    bool csv = false;
};

CommandResult cmd_verify(const VerifyOptions& options);

CommandResult cmd_reproduce();

/// Report for a failure before any command ran (bad file, bad flag).
CommandResult error_result(int exit_code, const std::string& message);

}  // namespace walras::harness
