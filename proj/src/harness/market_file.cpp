#include "walras/harness/market_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace walras::harness {

using nlohmann::json;

namespace {

Vector to_vector(const json& node, Index expected, const std::string& where) {
    if (!node.is_array()) throw ParseError(where + ": expected an array of numbers");
    if (static_cast<Index>(node.size()) != expected)
        throw ValidationError(where + ": expected " + std::to_string(expected) + " entries, got " +
                              std::to_string(node.size()));
    Vector v(expected);
    for (Index k = 0; k < expected; ++k) {
        const json& x = node[static_cast<std::size_t>(k)];
        if (!x.is_number()) throw ParseError(where + ": entry " + std::to_string(k) + " is not a number");
        v[k] = x.get<double>();
    }
    return v;
}

const json& require_field(const json& doc, const char* key, const std::string& where) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

json vector_json(const Vector& v) {
    json a = json::array();
    for (Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
    return a;
}

}  // namespace

ReportProfile MarketSpec::reports() const {
    ReportProfile r = ReportProfile::truthful(economy);
    if (deviation) r = r.with_report(deviation->agent, UtilityFunction{economy.kind(), deviation->alpha});
    return r;
}

MarketSpec parse_market_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("market file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("market file: top level must be an object");

    const json& format = require_field(doc, "format", "market file");
    if (!format.is_number_integer() || format.get<int>() != kMarketFormatVersion)
        throw ParseError("market file: unsupported format (expected 1)");

    const json& kind_node = require_field(doc, "market_kind", "market file");
    if (!kind_node.is_string()) throw ParseError("market file: market_kind must be a string");
    const auto kind = parse_utility_kind(kind_node.get<std::string>());
    if (!kind) throw ParseError("market file: unknown market_kind '" + kind_node.get<std::string>() + "'");

    const json& m_node = require_field(doc, "commodities", "market file");
    if (!m_node.is_number_integer()) throw ParseError("market file: commodities must be an integer");
    const Index m = m_node.get<Index>();
    if (m < 1) throw ValidationError("market file: commodities must be >= 1");

    const json& agents = require_field(doc, "agents", "market file");
    if (!agents.is_array()) throw ParseError("market file: agents must be an array");
    const Index n = static_cast<Index>(agents.size());
    if (n < 1) throw ValidationError("market file: at least one agent is required");

    MarketSpec spec;
    spec.economy.endowments = Matrix(n, m);
    for (Index i = 0; i < n; ++i) {
        const std::string where = "agents[" + std::to_string(i) + "]";
        const json& a = agents[static_cast<std::size_t>(i)];
        if (!a.is_object()) throw ParseError(where + ": expected an object");
        spec.economy.endowments.row(i) = to_vector(require_field(a, "endowment", where), m, where + ".endowment").transpose();
        spec.economy.utilities.push_back({*kind, to_vector(require_field(a, "alpha", where), m, where + ".alpha")});
    }

    for (Index j = 0; j < m; ++j) {
        const double total = spec.economy.endowments.col(j).sum();
        if (!(total > 0.0))
            throw ValidationError("market file: commodity " + std::to_string(j) + " has no supply");
        if (std::abs(total - 1.0) > 1e-12) spec.economy.endowments.col(j) /= total;
        if (std::abs(total - 1.0) > 1e-9) {
            spec.renormalized = true;
            std::ostringstream os;
            os << "endowments of commodity " << j << " summed to " << total << "; rescaled to 1";
            spec.warnings.push_back(os.str());
        }
    }

    if (auto it = doc.find("deviation"); it != doc.end() && !it->is_null()) {
        const json& d = *it;
        if (!d.is_object()) throw ParseError("market file: deviation must be an object");
        const json& agent = require_field(d, "agent", "deviation");
        if (!agent.is_number_integer()) throw ParseError("deviation.agent must be an integer");
        Deviation dev{agent.get<Index>(), to_vector(require_field(d, "alpha", "deviation"), m, "deviation.alpha")};
        if (dev.agent < 0 || dev.agent >= n) throw ValidationError("deviation.agent is out of range");
        spec.deviation = std::move(dev);
    }

    auto violations = validate_economy(spec.economy, false);
    if (spec.deviation) {
        const auto more = validate_reports(spec.economy, spec.reports(), false);
        violations.insert(violations.end(), more.begin(), more.end());
    }
    if (!violations.empty()) throw ValidationError("market file: " + describe(violations));
    return spec;
}

MarketSpec load_market_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open market file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_market_spec(buffer.str());
}

json market_spec_to_json(const MarketSpec& spec) {
    json doc;
    doc["format"] = kMarketFormatVersion;
    doc["market_kind"] = std::string(to_string(spec.economy.kind()));
    doc["commodities"] = spec.economy.commodities();
    json agents = json::array();
    for (Index i = 0; i < spec.economy.agents(); ++i)
        agents.push_back({{"endowment", vector_json(spec.economy.endowment(i))},
                          {"alpha", vector_json(spec.economy.utilities[static_cast<std::size_t>(i)].alpha)}});
    doc["agents"] = std::move(agents);
    if (spec.deviation) doc["deviation"] = {{"agent", spec.deviation->agent}, {"alpha", vector_json(spec.deviation->alpha)}};
    return doc;
}

std::string write_market_spec(const MarketSpec& spec) { return market_spec_to_json(spec).dump(2) + "\n"; }

}  // namespace walras::harness
