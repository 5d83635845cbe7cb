#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "walras/market.hpp"

namespace walras::harness {

/// Malformed document (exit code 3).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed document describing an invalid market (exit code 4).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Deviation {
    Index agent = 0;
    Vector alpha;
};

struct MarketSpec {
    Economy economy;
    std::optional<Deviation> deviation;
    bool renormalized = false;  ///< some endowment column was off by more than 1e-9
    std::vector<std::string> warnings;

    /// Truthful profile with the deviation applied, if any.
    ReportProfile reports() const;
};

inline constexpr int kMarketFormatVersion = 1;

/// Parses a market document (JSON, `"format": 1`). Columns of the endowment matrix that
/// do not sum to one are rescaled; a warning is recorded when the mismatch exceeds 1e-9.
MarketSpec parse_market_spec(std::string_view text);
MarketSpec load_market_spec(const std::filesystem::path& path);

nlohmann::json market_spec_to_json(const MarketSpec& spec);
/// Serializes with round-trip exact doubles (17 significant digits).
std::string write_market_spec(const MarketSpec& spec);

}  // namespace walras::harness
