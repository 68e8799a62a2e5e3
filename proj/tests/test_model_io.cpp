#include "frog/model_io.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>

using namespace frog;

namespace {

ModelSpec nested_model() {
    ModelSpec s;
    std::vector<Piece> parts;
    parts.push_back({0, 4, std::make_shared<const SequenceFamily>(SequenceFamily::table({0.6, 0.55, 0.52, 0.51}))});
    parts.push_back({4, std::nullopt,
                     std::make_shared<const SequenceFamily>(SequenceFamily::power_above(1.5, 0.25, {0.75}))});
    s.drift = SequenceFamily::piecewise(std::move(parts));
    s.lifetime = SequenceFamily::table({1.0, 0.95}, SequenceFamily::power_lifetime(2.0, 0.5, {1.0}));
    s.occupied = OccupiedSet::periodic(3, {0, 2});
    return s;
}

} // namespace

TEST_CASE("models round-trip through JSON", "[io]") {
    std::vector<ModelSpec> cases;
    cases.push_back(ModelSpec{});
    cases.push_back(nested_model());
    ModelSpec stair;
    stair.drift = SequenceFamily::staircase_above(3.0, 1.0, 1.0, true, {0.75});
    stair.occupied = OccupiedSet::geometric(3);
    cases.push_back(stair);
    ModelSpec crit;
    crit.drift = SequenceFamily::log_critical(0.25, -1.0, {0.4, 0.4, 0.4});
    crit.occupied = OccupiedSet::explicit_sites({0, 3, 9});
    crit.allow_critical_drift = true;
    cases.push_back(crit);
    for (const auto& m : cases) {
        const std::string text = serialize_model(m);
        const ModelSpec back = parse_model(text);
        CHECK(back == m);
        CHECK(serialize_model(back) == text);
    }
}

TEST_CASE("defaults for omitted fields", "[io]") {
    const auto m = parse_model(R"({"drift": {"kind": "constant", "value": 0.3}})");
    CHECK(m.lifetime == SequenceFamily::constant(1.0));
    CHECK(m.occupied == OccupiedSet::all());
    CHECK_FALSE(m.allow_critical_drift);
}

TEST_CASE("parse errors name the offending field", "[io][errors]") {
    auto field_of = [](const std::string& text) {
        try {
            parse_model(text);
        } catch (const ParseError& e) {
            return e.field();
        }
        return std::string("<no error>");
    };
    CHECK(field_of("{not json") == "");
    CHECK(field_of(R"({"schema": "frog-model/9", "drift": {"kind": "constant", "value": 0.3}})") == "schema");
    CHECK(field_of(R"({"lifetime": {"kind": "constant", "value": 1}})") == "drift");
    CHECK(field_of(R"({"drift": {"kind": "wobble"}})") == "drift.kind");
    CHECK(field_of(R"({"drift": {"kind": "constant", "value": "x"}})").rfind("drift", 0) == 0);
    CHECK(field_of(R"({"drift": {"kind": "constant", "value": 0.3}, "occupied": {"kind": "moon"}})") ==
          "occupied.kind");
    CHECK(field_of(R"({"drift": {"kind": "power_below", "exponent": 1}})").rfind("drift", 0) == 0);
    CHECK(field_of(R"({"drift": {"kind": "constant", "value": 1.7}})") == "drift.value");
    CHECK(field_of(R"({"drift": {"kind": "constant", "value": 0.3}, "lifetime": {"kind": "table", "values": [1, -0.1]}})") ==
          "lifetime.values[1]");
}

TEST_CASE("load_model reports missing files", "[io][errors]") {
    CHECK_THROWS_AS(load_model("/nonexistent/frog.json"), ParseError);
}

TEST_CASE("bundled model files parse and validate", "[io]") {
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FROG_MODELS_DIR)) {
        if (entry.path().extension() != ".json") continue;
        INFO(entry.path().string());
        const ModelSpec m = load_model(entry.path().string());
        CHECK_NOTHROW(validate(m));
        ++seen;
    }
    CHECK(seen >= 4);
}
