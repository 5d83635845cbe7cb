#include <doctest.h>

#include <random>

#include "walras/harness/commands.hpp"
#include "walras/sampler.hpp"

using namespace walras;
using namespace walras::harness;

namespace {

const char* kExample = R"({
  "format": 1,
  "market_kind": "cobb_douglas",
  "commodities": 3,
  "agents": [
    {"endowment": [0.99, 0.01, 0.01], "alpha": [0.2, 0.3, 0.5]},
    {"endowment": [0.01, 0.99, 0.99], "alpha": [0.4, 0.6, 0.0]}
  ]
})";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("market file round trip is bit exact") {
    std::mt19937_64 rng(1);
    for (int s = 0; s < 100; ++s) {
        MarketSpec spec;
        spec.economy = sample_cobb_douglas_economy(2 + s % 3, 2 + s % 4, 0.7, 0.7, rng);
        if (s % 2) spec.deviation = Deviation{1, sample_dirichlet(spec.economy.commodities(), 1.0, rng)};
        const MarketSpec back = parse_market_spec(write_market_spec(spec));
        CHECK(back.economy == spec.economy);
        CHECK(back.deviation.has_value() == spec.deviation.has_value());
        if (spec.deviation) CHECK(back.deviation->alpha == spec.deviation->alpha);
        CHECK_FALSE(back.renormalized);
    }
}

TEST_CASE("loader rescales columns and flags the change") {
    const MarketSpec spec = parse_market_spec(R"({"format": 1, "market_kind": "cobb_douglas", "commodities": 2,
        "agents": [{"endowment": [0.5, 0.5], "alpha": [0.5, 0.5]}, {"endowment": [0.4, 0.5], "alpha": [0.3, 0.7]}]})");
    CHECK(spec.renormalized);
    REQUIRE(spec.warnings.size() == 1);
    CHECK(spec.economy.supply()[0] == doctest::Approx(1.0).epsilon(1e-15));
    const CommandResult r = cmd_solve(spec, {});
    CHECK(r.report.at("renormalized").get<bool>());
    CHECK(r.report.at("warnings").size() == 1);
}

TEST_CASE("malformed and invalid documents") {
    CHECK_THROWS_AS(parse_market_spec("{not json"), ParseError);
    CHECK_THROWS_AS(parse_market_spec(R"({"format": 2})"), ParseError);
    CHECK_THROWS_AS(parse_market_spec(R"({"format": 1, "market_kind": "ces", "commodities": 1, "agents": []})"), ParseError);
    CHECK_THROWS_AS(parse_market_spec(R"({"format": 1, "market_kind": "linear", "commodities": 2,
        "agents": [{"endowment": [1.0], "alpha": [1.0, 1.0]}]})"), ValidationError);
    CHECK_THROWS_AS(parse_market_spec(R"({"format": 1, "market_kind": "cobb_douglas", "commodities": 2,
        "agents": [{"endowment": [1.0, 1.0], "alpha": [0.7, 0.7]}]})"), ValidationError);
}

TEST_CASE("solve reports both normalizations of the example prices") {
    const CommandResult r = cmd_solve(parse_market_spec(kExample), {});
    CHECK(r.exit_code == kExitPass);
    const auto& eq = r.report.at("equilibria").at(0);
    CHECK(eq.at("prices").at("ratio").at(1).get<double>() == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(eq.at("prices").at("simplex").at(0).get<double>() + eq.at("prices").at("simplex").at(1).get<double>() +
              eq.at("prices").at("simplex").at(2).get<double>() ==
          doctest::Approx(1.0));
    CHECK(eq.at("utilities").at(0).at("true").get<double>() == doctest::Approx(0.4495).epsilon(1e-3));
    CHECK(eq.at("residuals").at("tolerance").get<double>() == 1e-8);
}

TEST_CASE("solve on a symmetric market") {
    const CommandResult r = cmd_solve(parse_market_spec(R"({"format": 1, "market_kind": "cobb_douglas", "commodities": 2,
        "agents": [{"endowment": [0.5, 0.5], "alpha": [0.5, 0.5]}, {"endowment": [0.5, 0.5], "alpha": [0.5, 0.5]}]})"), {});
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report.at("equilibria").at(0).at("prices").at("ratio").at(1).get<double>() == doctest::Approx(1.0));
}

TEST_CASE("ratio command") {
    const MarketSpec spec = parse_market_spec(kExample);
    const CommandResult search = cmd_ratio(spec, {});
    CHECK(search.exit_code == kExitPass);
    CHECK(search.report.at("ratio").get<double>() >= 1.497);

    RatioOptions truth;
    truth.deviation = Vector(0);
    CHECK(cmd_ratio(spec, truth).report.at("ratio").get<double>() == 1.0);

    RatioOptions bad_agent;
    bad_agent.agent = 5;
    CHECK(cmd_ratio(spec, bad_agent).exit_code == kExitValidationError);

    const MarketSpec corner = parse_market_spec(R"({"format": 1, "market_kind": "cobb_douglas", "commodities": 2,
        "agents": [{"endowment": [1.0, 0.0], "alpha": [0.5, 0.5]}, {"endowment": [0.0, 1.0], "alpha": [0.1, 0.9]}]})");
    CHECK(cmd_ratio(corner, {}).exit_code == kExitValidationError);
}

TEST_CASE("witness command") {
    WitnessOptions o;
    o.family = "cobb_douglas";
    o.epsilon = 0.02;
    CommandResult r = cmd_witness(o);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report.at("ratio").get<double>() == doctest::Approx(10.0));

    o.epsilon = 1.5;
    CHECK(cmd_witness(o).exit_code == kExitValidationError);

    o.family = "leontief";
    o.epsilon.reset();
    o.sweep_points = 6;
    o.csv = true;
    r = cmd_witness(o);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.csv.rfind("family,epsilon,delta,ratio,closed_form,truthful_certified,deviant_certified\n", 0) == 0);
    CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == 7);
}

TEST_CASE("verify is deterministic for a fixed seed") {
    VerifyOptions o;
    o.suite = "bounds";
    o.samples = 5;
    o.agents = {2};
    o.commodities = {2, 3};
    const CommandResult a = cmd_verify(o);
    const CommandResult b = cmd_verify(o);
    CHECK(a.exit_code == kExitPass);
    CHECK(a.report == b.report);

    o.suite = "nonsense";
    CHECK(cmd_verify(o).exit_code == kExitValidationError);
}

TEST_CASE("reproduce passes") {
    const CommandResult r = cmd_reproduce();
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report.at("ratio_rounded").get<double>() == 1.5);
    CHECK(r.report.at("assumption").get<std::string>().find(".4,.6,0") != std::string::npos);
}

}
