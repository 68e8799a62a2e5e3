#include "frog/oracle.hpp"
#include "frog/simulator.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace frog;
using Catch::Approx;

namespace {

ModelSpec small_system(double l, double p) {
    ModelSpec s;
    s.drift = SequenceFamily::constant(l);
    s.lifetime = SequenceFamily::constant(p);
    s.occupied = OccupiedSet::explicit_sites({0, 1, 3});
    return s;
}

// |x - mu| within k standard errors of a Bernoulli mean over n samples.
bool within(double x, double mu, std::size_t n, double k) {
    const double se = std::sqrt(mu * (1.0 - mu) / static_cast<double>(n));
    return std::abs(x - mu) <= k * se + 1e-12;
}

} // namespace

TEST_CASE("trials are reproducible", "[simulator]") {
    const ModelSpec s = small_system(0.4, 0.9);
    SimConfig cfg;
    cfg.site_horizon = 3;
    cfg.time_horizon = 50;
    cfg.record_trajectory = true;
    CHECK(run_trial(s, cfg, 123) == run_trial(s, cfg, 123));
    cfg.replications = 200;
    const auto serial = run_trials(s, cfg);
    cfg.threads = 4;
    CHECK(run_trials(s, cfg) == serial);
    cfg.rng_seed = 2;
    CHECK_FALSE(run_trials(s, cfg) == serial);
}

TEST_CASE("simulator matches exact enumeration on a three-site system", "[simulator][oracle]") {
    const std::size_t n = 40000;
    for (double l : {0.3, 0.6}) {
        const ModelSpec s = small_system(l, 0.7);
        const auto exact = enumerate_small_activation(s, 9);
        SimConfig cfg;
        cfg.site_horizon = 3;
        cfg.time_horizon = 9;
        cfg.replications = n;
        const auto trials = run_trials(s, cfg);
        std::vector<std::size_t> activated(3, 0);
        std::size_t dead_by_end = 0, visited = 0;
        for (const auto& r : trials) {
            for (std::size_t i = 0; i < 3; ++i)
                if (std::binary_search(r.activated_sites.begin(), r.activated_sites.end(), exact.sites[i])) ++activated[i];
            if (r.all_dead_time && *r.all_dead_time <= 9) ++dead_by_end;
            if (r.origin_visits >= 1) ++visited;
        }
        auto freq = [n](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n); };
        INFO("l = " << l);
        for (std::size_t i = 1; i < 3; ++i) CHECK(within(freq(activated[i]), exact.p_activated(i), n, 4.0));
        CHECK(within(freq(dead_by_end), exact.all_dead_by[9].convert_to<double>(), n, 4.0));
        CHECK(within(freq(visited), exact.origin_visits_at_least[1].convert_to<double>(), n, 4.0));
    }
}

TEST_CASE("per-site origin visits follow (9/11)^n", "[simulator][statistics]") {
    ModelSpec s; // immortal, l = 0.45
    SimConfig cfg;
    cfg.site_horizon = 4;
    cfg.time_horizon = 4000;
    cfg.replications = 20000;
    cfg.escape_tolerance = 1e-12;
    const auto trials = run_trials(s, cfg);
    const auto rows = per_site_visit_table(s, trials, 4);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        INFO("site " << row.site);
        CHECK(row.analytic == Approx(std::pow(9.0 / 11.0, static_cast<double>(row.site))));
        CHECK(row.activations == cfg.replications); // right drift wakes everything in range
        CHECK(std::abs(row.frequency - row.analytic) <= 4.0 * row.std_error);
    }
}

TEST_CASE("zero-lifetime sites are empty", "[simulator]") {
    ModelSpec s;
    s.drift = SequenceFamily::constant(0.2);
    s.lifetime = SequenceFamily::table({1.0, 0.0}, SequenceFamily::constant(1.0));
    SimConfig cfg;
    cfg.site_horizon = 5;
    cfg.time_horizon = 200;
    const auto r = run_trial(s, cfg, 9);
    CHECK(std::find(r.activated_sites.begin(), r.activated_sites.end(), 1) == r.activated_sites.end());
    CHECK(r.activated_count == r.activated_sites.size());
}

TEST_CASE("horizon flags", "[simulator]") {
    ModelSpec s;
    s.drift = SequenceFamily::constant(0.1);
    SimConfig cfg;
    cfg.site_horizon = 10;
    cfg.time_horizon = 100;
    const auto r = run_trial(s, cfg, 1);
    CHECK(r.hit_site_horizon);
    CHECK(r.activated_count == 11);
    CHECK(r.rightmost_activated == 10);
    CHECK_FALSE(r.all_dead_time.has_value());

    s.lifetime = SequenceFamily::constant(0.5);
    cfg.time_horizon = 10000;
    const auto d = run_trial(s, cfg, 1);
    REQUIRE(d.all_dead_time.has_value());
    CHECK_FALSE(d.hit_time_horizon);
}

TEST_CASE("activation fronts are monotone", "[simulator]") {
    ModelSpec s;
    s.drift = SequenceFamily::staircase_above(3.0, 2.0, 1.0, false, std::vector<double>(8, 0.75));
    SimConfig cfg;
    cfg.site_horizon = 300;
    cfg.time_horizon = 3000;
    cfg.record_trajectory = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = run_trial(s, cfg, seed);
        REQUIRE_FALSE(r.front.empty());
        CHECK(std::is_sorted(r.front.begin(), r.front.end()));
        CHECK(r.front.back() == r.rightmost_activated);
        CHECK(std::is_sorted(r.activation_times.begin(), r.activation_times.end()));
    }
}

TEST_CASE("local-survival proxy grows with the horizon", "[simulator]") {
    ModelSpec s;
    s.drift = SequenceFamily::power_below(1.0, 0.25, {0.25});
    SimConfig cfg;
    cfg.site_horizon = 50;
    cfg.time_horizon = 100;
    cfg.replications = 300;
    cfg.origin_visit_target = 3;
    const auto reps = horizon_doubling_report(s, cfg, 3);
    REQUIRE(reps.size() == 4);
    for (std::size_t k = 1; k < reps.size(); ++k) CHECK(reps[k].estimate >= reps[k - 1].estimate);
    cfg.time_horizon = 2000;
    CHECK(estimate_infinite_activation_proxy(s, cfg).estimate >= 0.9);
}

TEST_CASE("escape freezing is counted and rare", "[simulator]") {
    ModelSpec s;
    s.drift = SequenceFamily::constant(0.3);
    SimConfig cfg;
    cfg.site_horizon = 5;
    cfg.time_horizon = 5000;
    cfg.escape_tolerance = 1e-9;
    const auto r = run_trial(s, cfg, 4);
    CHECK(r.retired_walkers > 0);
    cfg.escape_tolerance = 0.0;
    CHECK(run_trial(s, cfg, 4).retired_walkers == 0);
}

TEST_CASE("more lifetime never delays an activation", "[simulator][coupling]") {
    ModelSpec a;
    a.drift = SequenceFamily::constant(0.4);
    a.lifetime = SequenceFamily::constant(0.8);
    ModelSpec b = a;
    b.lifetime = SequenceFamily::power_lifetime(1.0, 0.1, {0.9});
    SimConfig cfg;
    cfg.site_horizon = 40;
    cfg.time_horizon = 400;
    cfg.replications = 300;
    const auto m = monotone_coupling_check(a, b, cfg);
    CHECK(m.trials == 300);
    CHECK(m.violations == 0);
    CHECK_THROWS_AS(monotone_coupling_check(b, a, cfg), PreconditionError);
}

TEST_CASE("frog and firework activation sets coincide", "[simulator][coupling]") {
    ModelSpec s;
    s.drift = SequenceFamily::power_above(1.0, 1.0, {0.75, 0.75, 0.75});
    SimConfig cfg;
    cfg.site_horizon = 100;
    cfg.time_horizon = 500;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto c = coupled_frog_firework(s, cfg, derive_seed(77, i));
        CHECK(c.equal());
    }
}

TEST_CASE("generation chain of a homogeneous left drift", "[simulator][generations]") {
    ModelSpec s;
    s.drift = SequenceFamily::constant(0.6);
    SimConfig cfg;
    cfg.site_horizon = 2000;
    cfg.time_horizon = 20000;
    cfg.replications = 500;
    const auto sum = generation_chain_diagnostic(s, cfg, 50);
    CHECK(sum.beyond_generation <= 5);
    CHECK(sum.absorptions >= 495);
    CHECK(sum.absorption_frequency > 0.0);
    ModelSpec right;
    CHECK_THROWS_AS(generation_chain_diagnostic(right, cfg), PreconditionError);
}

TEST_CASE("absorption product bound", "[simulator][generations]") {
    // prod (1 - (2/3)^i), computed directly with enough factors that the rest is below 1e-16.
    long double direct = 1.0L;
    for (int i = 1; i <= 120; ++i) direct *= 1.0L - std::pow(2.0L / 3.0L, static_cast<long double>(i));
    const auto b = generation_absorption_bound(0.6);
    CHECK(b.tail_bound < 1e-10);
    CHECK(b.value == Approx(static_cast<double>(direct)).margin(1e-10));
    CHECK(b.value > 0.0);
    CHECK_THROWS_AS(generation_absorption_bound(0.5), DomainError);
}

TEST_CASE("configuration errors", "[simulator][errors]") {
    SimConfig cfg;
    cfg.time_horizon = 0;
    CHECK_THROWS_AS(cfg.check(), DomainError);
    cfg = SimConfig{};
    cfg.escape_tolerance = 1.0;
    CHECK_THROWS_AS(cfg.check(), DomainError);
    cfg = SimConfig{};
    cfg.front_fraction = 0.0;
    CHECK_THROWS_AS(cfg.check(), DomainError);
    cfg = SimConfig{};
    cfg.origin_visit_target = 0;
    CHECK_THROWS_AS(run_trial(ModelSpec{}, cfg, 1), DomainError);
}
