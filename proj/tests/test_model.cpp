#include "frog/model.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

using namespace frog;
using Catch::Approx;

namespace {

ModelSpec with_drift(SequenceFamily f) {
    ModelSpec s;
    s.drift = std::move(f);
    return s;
}

} // namespace

TEST_CASE("eval_drift on the basic families", "[model]") {
    CHECK(eval_drift(with_drift(SequenceFamily::constant(0.45)), 7) == 0.45);
    CHECK(eval_drift(with_drift(SequenceFamily::power_below(1.0, 1.0, {0.25})), 10) == Approx(0.4).epsilon(1e-15));
    CHECK(eval_drift(with_drift(SequenceFamily::power_above(2.0, 1.0, {0.75})), 2) == 0.75);
}

TEST_CASE("eval_lifetime on the basic families", "[model]") {
    ModelSpec s;
    CHECK(eval_lifetime(s, 3) == 1.0);
    s.lifetime = SequenceFamily::power_lifetime(2.0, 1.0, {0.5});
    CHECK(eval_lifetime(s, 10) == Approx(0.99).epsilon(1e-15));
    s.lifetime = SequenceFamily::table({0.5, 0.0, 1.0});
    CHECK(eval_lifetime(s, 1) == 0.0);
    CHECK(eval_lifetime(s, 2) == 1.0);
}

TEST_CASE("evaluation errors", "[model][errors]") {
    SECTION("unoccupied site") {
        ModelSpec s;
        s.occupied = OccupiedSet::arithmetic(2);
        CHECK_THROWS_AS(eval_drift(s, 3), DomainError);
        CHECK_THROWS_AS(eval_lifetime(s, 5), DomainError);
    }
    SECTION("table without tail") {
        ModelSpec s;
        s.lifetime = SequenceFamily::table({0.5, 0.5});
        CHECK_THROWS_AS(eval_lifetime(s, 2), DomainError);
    }
    SECTION("power law at the origin without an explicit value") {
        CHECK_THROWS_AS(eval_drift(with_drift(SequenceFamily::power_below(1.0, 1.0, {})), 0), DomainError);
    }
    SECTION("negative index") {
        CHECK_THROWS_AS(SequenceFamily::constant(0.4).evaluate(-1, Role::Drift), DomainError);
    }
}

TEST_CASE("evaluation is pure", "[model][property]") {
    const auto f = SequenceFamily::staircase_above(3.0, 2.0, 1.0, false, {0.75});
    for (Site n = 0; n < 200; ++n) CHECK(f.evaluate(n, Role::Drift).value == f.evaluate(n, Role::Drift).value);
}

TEST_CASE("unit-scale power laws sit exactly n^-alpha away from 1/2", "[model][property]") {
    // Absolute error is a few ulps of 1/2, so the rescaled error grows like n^a.
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const auto below = SequenceFamily::power_below(a, 1.0, {0.25});
        const auto above = SequenceFamily::power_above(a, 1.0, {0.75});
        for (Site n = 5; n <= 5000; n += 7) {
            const double x = std::pow(static_cast<double>(n), a);
            const double vb = below.evaluate(n, Role::Drift).value;
            const double va = above.evaluate(n, Role::Drift).value;
            CHECK(std::abs((0.5 - vb) * x - 1.0) <= 1e-12 * std::max(1.0, x));
            CHECK(std::abs((va - 0.5) * x - 1.0) <= 1e-12 * std::max(1.0, x));
        }
    }
}

TEST_CASE("clipping keeps drifts inside (0,1) and reports it", "[model]") {
    // Staircase with j = 1 gives 1/2 + 1 = 1.5 on the first cell.
    const auto f = SequenceFamily::staircase_above(3.0, 2.0, 1.0, false, {0.75});
    const Sample s = f.evaluate(1, Role::Drift);
    CHECK(s.clipped);
    CHECK(s.value == 1.0 - kDriftClip);
    ModelSpec spec = with_drift(f);
    const auto report = validate(spec, 100);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("clipped") != std::string::npos);
}

TEST_CASE("staircase cells", "[model]") {
    CHECK(SequenceFamily::staircase_cell(1, 3.0) == 1);
    CHECK(SequenceFamily::staircase_cell(7, 3.0) == 1);
    CHECK(SequenceFamily::staircase_cell(8, 3.0) == 2);
    CHECK(SequenceFamily::staircase_cell(26, 3.0) == 2);
    CHECK(SequenceFamily::staircase_cell(27, 3.0) == 3);
    CHECK(SequenceFamily::staircase_cell(1000, 3.0) == 10);
    CHECK(SequenceFamily::staircase_cell(999, 3.0) == 9);
    const auto f = SequenceFamily::staircase_above(3.0, 2.0, 1.0, false, {0.75});
    CHECK(f.evaluate(8, Role::Drift).value == 0.75);
    CHECK(f.evaluate(27, Role::Drift).value == Approx(0.5 + 1.0 / 9.0));
}

TEST_CASE("piecewise families", "[model]") {
    std::vector<Piece> parts;
    parts.push_back({0, 5, std::make_shared<const SequenceFamily>(SequenceFamily::constant(0.7))});
    parts.push_back({5, std::nullopt, std::make_shared<const SequenceFamily>(SequenceFamily::power_below(2.0, 1.0, {}))});
    const auto f = SequenceFamily::piecewise(std::move(parts));
    CHECK(f.evaluate(4, Role::Drift).value == 0.7);
    CHECK(f.evaluate(10, Role::Drift).value == Approx(0.49));
    const auto t = drift_tail(f);
    REQUIRE(t);
    CHECK(t->sign == -1);
    CHECK(t->start == 5);
    CHECK(t->deviation.decay == 2.0);
}

TEST_CASE("validation guards", "[model][errors]") {
    SECTION("p_0 must be positive") {
        ModelSpec s;
        s.lifetime = SequenceFamily::table({0.0}, SequenceFamily::constant(0.5));
        CHECK_THROWS_AS(validate(s), PreconditionError);
    }
    SECTION("immortal critical drift needs an opt-in") {
        ModelSpec s = with_drift(SequenceFamily::table({0.4, 0.4, 0.4, 0.4, 0.4, 0.5}, SequenceFamily::constant(0.4)));
        CHECK_THROWS_AS(validate(s), PreconditionError);
        s.allow_critical_drift = true;
        CHECK_NOTHROW(validate(s));
    }
    SECTION("mortal critical drift is fine") {
        ModelSpec s = with_drift(SequenceFamily::constant(0.5));
        s.lifetime = SequenceFamily::constant(0.9);
        CHECK_NOTHROW(validate(s));
    }
    SECTION("occupied set must contain the origin") {
        CHECK_THROWS_AS(OccupiedSet::explicit_sites({1, 2}), PreconditionError);
        CHECK_THROWS_AS(OccupiedSet::periodic(3, {1}), PreconditionError);
    }
}

TEST_CASE("default block plans", "[model][blocks]") {
    SECTION("all sites, L = 3") {
        ModelSpec s;
        const auto plan = default_block_plan(s, 3);
        CHECK(plan.block(0) == std::vector<Site>{0, 1, 2});
        CHECK(plan.block(1) == std::vector<Site>{3, 4, 5});
        CHECK(plan.block(2) == std::vector<Site>{6, 7, 8});
        CHECK(plan.gap_bound() == 5);
    }
    SECTION("even sites, L = 2") {
        ModelSpec s;
        s.occupied = OccupiedSet::arithmetic(2);
        const auto plan = default_block_plan(s, 2);
        CHECK(plan.block(0) == std::vector<Site>{0, 2});
        CHECK(plan.block(1) == std::vector<Site>{4, 6});
    }
    SECTION("powers of two are not representable") {
        ModelSpec s;
        s.occupied = OccupiedSet::geometric(2);
        CHECK_THROWS_AS(default_block_plan(s, 2), NotRepresentable);
    }
    SECTION("L = 0") {
        CHECK_THROWS_AS(default_block_plan(ModelSpec{}, 0), DomainError);
    }
}

TEST_CASE("block plan invariants over random gap patterns", "[model][blocks][property]") {
    std::mt19937_64 gen(20241018);
    for (int round = 0; round < 60; ++round) {
        const Site period = std::uniform_int_distribution<Site>(1, 9)(gen);
        std::vector<Site> residues{0};
        for (Site r = 1; r < period; ++r)
            if (gen() % 2) residues.push_back(r);
        ModelSpec s;
        s.occupied = OccupiedSet::periodic(period, residues);
        const auto L = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 7)(gen));
        const auto plan = default_block_plan(s, L);
        std::set<Site> seen;
        Site observed_gap = 0;
        for (std::size_t k = 0; k < 40; ++k) {
            const auto b = plan.block(k);
            REQUIRE(b.size() == L);
            for (Site x : b) {
                CHECK(s.occupied.contains(x));
                CHECK(seen.insert(x).second); // pairwise disjoint
                CHECK(plan.in_even_union(x) != plan.in_odd_union(x));
                CHECK(plan.in_even_union(x) == (k % 2 == 0));
            }
            if (k > 0) observed_gap = std::max(observed_gap, b.back() - plan.block(k - 1).front());
        }
        CHECK(observed_gap <= plan.gap_bound());
    }
}

TEST_CASE("occupied sets", "[model]") {
    const auto g = OccupiedSet::geometric(2);
    CHECK(g.sites_upto(20) == std::vector<Site>{0, 1, 2, 4, 8, 16});
    CHECK_FALSE(g.bounded_gaps());
    const auto p = OccupiedSet::periodic(5, {0, 1, 3});
    CHECK(p.sites_upto(12) == std::vector<Site>{0, 1, 3, 5, 6, 8, 10, 11});
    CHECK(p.max_gap() == 2);
    const auto e = OccupiedSet::explicit_sites({4, 0, 2});
    CHECK(e.finite());
    CHECK(e.sites_upto(100) == std::vector<Site>{0, 2, 4});
    CHECK_FALSE(e.next_after(4).has_value());
}

TEST_CASE("tails of the families", "[model]") {
    const auto t = drift_tail(SequenceFamily::staircase_above(3.0, 2.0, 1.0, false, {0.75}));
    REQUIRE(t);
    CHECK(t->sign == 1);
    CHECK(t->deviation.decay == Approx(2.0 / 3.0));
    CHECK(t->deviation.precision == Precision::Order);
    CHECK_FALSE(drift_tail(SequenceFamily::table({0.3})).has_value());
    const auto lt = lifetime_tail(SequenceFamily::power_lifetime(3.0, 1.0, {0.5}));
    REQUIRE(lt);
    CHECK(lt->deficit.decay == 3.0);
    CHECK(is_immortal(ModelSpec{}));
    ModelSpec m;
    m.lifetime = SequenceFamily::table({1.0, 0.5}, SequenceFamily::constant(1.0));
    CHECK_FALSE(is_immortal(m));
}
