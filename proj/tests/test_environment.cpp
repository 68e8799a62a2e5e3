#include "frog/environment.hpp"

#include <catch_amalgamated.hpp>

using namespace frog;

namespace {

EnvironmentLaw uniform_fast() {
    EnvironmentLaw law;
    law.primary = {1.0, 2.0, 1.0}; // l_n uniform on (1/2 - 2/n, 1/2 - 1/n)
    return law;
}

EnvironmentLaw degenerate_slow() {
    EnvironmentLaw law;
    law.primary = {1.0, 1.0, 0.5}; // l_n = 1/2 - 1/sqrt(n)
    return law;
}

EnvironmentLaw harmonic_mixture() {
    EnvironmentLaw law;
    law.primary = {1.0, 1.0, 0.5};
    law.alternative = EnvBand{1.0, 5.0, 1.0}; // n (1/2 - l_n) <= 5 with probability 1/n
    law.alt_weight_scale = 1.0;
    law.alt_weight_decay = 1.0;
    return law;
}

} // namespace

TEST_CASE("random environment verdicts", "[environment]") {
    SECTION("bounded n(1/2 - l_n) survives almost surely") {
        const auto rep = classify_random_environment(uniform_fast(), 20, 11, 2048);
        CHECK(rep.verdict.local == LocalOutcome::SurvivesAS);
        CHECK(rep.verdict.cites(cite::kEnvironment1));
        CHECK(rep.verdict.cites(cite::kEnvironment2));
        CHECK(rep.empirical_survival_fraction == 1.0);
        CHECK(rep.verdict.consistent());
    }
    SECTION("degenerate 1/2 - 1/sqrt(n) dies") {
        const auto rep = classify_random_environment(degenerate_slow(), 20, 11, 2048);
        CHECK(rep.verdict.local == LocalOutcome::Dies);
        CHECK(rep.verdict.cites(cite::kEnvironment3));
        CHECK(rep.empirical_survival_fraction == 0.0);
    }
    SECTION("harmonic weight on a bounded band survives") {
        const auto rep = classify_random_environment(harmonic_mixture(), 5, 3, 1024);
        CHECK(rep.verdict.local == LocalOutcome::SurvivesAS);
        CHECK(rep.verdict.cites(cite::kEnvironment1));
        CHECK_FALSE(rep.verdict.cites(cite::kEnvironment2));
    }
    SECTION("summable weight on a bounded band does not help") {
        auto law = harmonic_mixture();
        law.alt_weight_decay = 2.0;
        const auto rep = classify_random_environment(law, 5, 3, 1024);
        CHECK(rep.verdict.local == LocalOutcome::Dies);
    }
    SECTION("slow band with summable weight behind a fast primary") {
        EnvironmentLaw law = uniform_fast();
        law.alternative = EnvBand{1.0, 1.0, 0.25};
        law.alt_weight_scale = 1.0;
        law.alt_weight_decay = 1.5;
        const auto rep = classify_random_environment(law, 5, 3, 1024);
        CHECK(rep.verdict.local == LocalOutcome::SurvivesAS);
        CHECK(rep.verdict.cites(cite::kEnvironment2));
    }
}

TEST_CASE("environment preconditions", "[environment][errors]") {
    EnvironmentLaw law;
    law.primary = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(classify_random_environment(law, 1, 1), PreconditionError);
    law.primary = {2.0, 1.0, 1.0};
    CHECK_THROWS_AS(law.check(), DomainError);
    law = uniform_fast();
    law.l0 = 0.6;
    CHECK_THROWS_AS(law.check(), PreconditionError);
    CHECK_THROWS_AS(classify_random_environment(uniform_fast(), 1, 1, 1), DomainError);
}

TEST_CASE("environment realisations", "[environment]") {
    const auto a = realize_environment(uniform_fast(), 500, 42);
    const auto b = realize_environment(uniform_fast(), 500, 42);
    CHECK(a == b);
    CHECK_FALSE(a == realize_environment(uniform_fast(), 500, 43));
    CHECK(eval_drift(a, 0) == 0.25);
    for (Site n = 5; n <= 500; ++n) { // below 5 the band can exceed 1/2 and is clipped
        const double d = 0.5 - eval_drift(a, n);
        CHECK(d * static_cast<double>(n) >= 1.0 - 1e-9);
        CHECK(d * static_cast<double>(n) <= 2.0 + 1e-9);
    }
    CHECK_NOTHROW(validate(a));
}

TEST_CASE("environment report is deterministic given the seed", "[environment]") {
    const auto x = classify_random_environment(harmonic_mixture(), 8, 99, 512);
    const auto y = classify_random_environment(harmonic_mixture(), 8, 99, 512);
    CHECK(x.empirical_survival_fraction == y.empirical_survival_fraction);
    CHECK(to_json(x.verdict) == to_json(y.verdict));
}
