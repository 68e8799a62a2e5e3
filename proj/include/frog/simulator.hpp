#pragma once

// Finite-horizon Monte Carlo of the frog model.
//
// Time is discrete and updates are synchronous. At tick t every live active
// walker either dies or jumps to a neighbour; a dormant particle whose site is
// occupied at the end of tick t becomes active with activation time t and
// makes its first jump at tick t + 1. Several activations in one tick are
// processed in ascending site order.
//
// Randomness is attached to walkers, not to ticks: walker n draws from the
// stream derive_seed(trial_seed, n). Its first draw U fixes the number of
// jumps it will make, K = floor(log U / log p_n) with P(K >= k) = p_n^k, and
// each further draw u decides one jump (left iff u < l_n). Two runs whose
// models differ only in p_n therefore see the same paths with different
// lengths, and the firework process below reads the very same paths.

#include "frog/analytics.hpp"
#include "frog/errors.hpp"
#include "frog/model.hpp"
#include "frog/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace frog {

struct SimConfig {
    Site site_horizon = 100;          ///< sites beyond this hold no particle in the simulation
    std::int64_t time_horizon = 1000; ///< global ticks
    std::size_t replications = 1000;
    std::uint64_t rng_seed = 1;
    std::int64_t origin_visit_target = 1; ///< K in the local-survival proxy
    bool record_trajectory = false;       ///< keep the activation front after every tick
    double front_fraction = 0.9;          ///< rho in the infinite-activation proxy
    /// Stop moving a walker once its chance of ever returning to the region that
    /// matters drops below this (0 disables; retirements are counted).
    double escape_tolerance = 0.0;
    /// Each walker makes at most this many jumps after activation (0 = unlimited).
    std::int64_t local_step_budget = 0;
    unsigned threads = 1;

    void check() const {
        if (site_horizon < 0) throw DomainError("site_horizon must be nonnegative");
        if (time_horizon < 1) throw DomainError("time_horizon must be positive");
        if (origin_visit_target < 1) throw DomainError("origin_visit_target must be at least 1");
        if (!(escape_tolerance >= 0.0 && escape_tolerance < 1.0)) throw DomainError("escape_tolerance must lie in [0, 1)");
        if (local_step_budget < 0) throw DomainError("local_step_budget must be nonnegative");
        if (!(front_fraction > 0.0 && front_fraction <= 1.0)) throw DomainError("front_fraction must lie in (0, 1]");
    }
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::size_t activated_count = 0;
    Site rightmost_activated = 0;
    std::int64_t origin_visits = 0;
    std::optional<std::int64_t> all_dead_time;
    bool hit_site_horizon = false; ///< some walker stood beyond site_horizon
    bool hit_time_horizon = false; ///< the run ended at time_horizon with a walker still alive
    std::size_t retired_walkers = 0;
    std::vector<Site> activated_sites;          ///< ascending
    std::vector<std::int64_t> activation_times; ///< parallel to activated_sites
    std::vector<Site> origin_visitors;          ///< home sites of walkers that visited 0 at some t >= 1, ascending
    std::vector<Site> front;                    ///< rightmost activated site after each tick, if recorded

    bool operator==(const TrialRecord&) const = default;
};

namespace detail {

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

/// Number of jumps before death, from the walker's first draw.
inline std::int64_t lifetime_jumps(Stream& s, double p) {
    const double u = s.uniform_open_closed();
    if (p >= 1.0) return kNever;
    if (p <= 0.0) return 0;
    const double k = std::floor(std::log(u) / std::log(p));
    return k >= 9.0e18 ? kNever : static_cast<std::int64_t>(k);
}

struct Walker {
    Site home = 0;
    double l = 0.5;
    double p = 1.0;
    Stream rng;
    Site pos = 0;
    std::int64_t jumps_left = 0;
    std::int64_t jumps = 0;
    std::int64_t activated_at = -1;
    double log_to_left = 0.0;  ///< log of the first-passage probability one step left
    double log_to_right = 0.0; ///< one step right
    bool dead = false;
    bool frozen = false;
    bool visited_origin = false;
};

/// Walkers for occupied sites in [0, horizon] with p_n > 0, plus a site -> walker map.
struct Population {
    std::vector<Walker> walkers;
    std::vector<int> by_site;
};

inline Population populate(const ModelSpec& spec, Site horizon, std::uint64_t trial_seed) {
    Population pop;
    pop.by_site.assign(static_cast<std::size_t>(horizon) + 1, -1);
    for (Site n : spec.occupied.sites_upto(horizon)) {
        const double p = eval_lifetime(spec, n);
        if (p <= 0.0) continue;
        Walker w;
        w.home = n;
        w.pos = n;
        w.l = eval_drift(spec, n);
        w.p = p;
        w.rng = Stream(derive_seed(trial_seed, static_cast<std::uint64_t>(n)));
        pop.by_site[static_cast<std::size_t>(n)] = static_cast<int>(pop.walkers.size());
        pop.walkers.push_back(w);
    }
    return pop;
}

inline void activate(Walker& w, std::int64_t t, double escape_tolerance) {
    w.activated_at = t;
    w.jumps_left = lifetime_jumps(w.rng, w.p);
    if (escape_tolerance > 0.0) {
        const StepLaw law{w.p, w.l};
        w.log_to_left = std::log(first_passage_left(law));
        w.log_to_right = std::log(first_passage_right(law));
    }
}

} // namespace detail

/// One replication.
inline TrialRecord run_trial(const ModelSpec& spec, const SimConfig& cfg, std::uint64_t trial_seed) {
    cfg.check();
    if (eval_lifetime(spec, 0) <= 0.0) throw PreconditionError("p_0 must be positive");
    auto pop = detail::populate(spec, cfg.site_horizon, trial_seed);
    auto& W = pop.walkers;
    const double log_tol = cfg.escape_tolerance > 0.0 ? std::log(cfg.escape_tolerance) : 0.0;

    TrialRecord rec;
    rec.seed = trial_seed;
    std::vector<int> moving;
    std::size_t dormant = W.size() - 1;
    detail::activate(W[0], 0, cfg.escape_tolerance);
    moving.push_back(0);
    std::vector<int> fresh;

    std::int64_t t = 0;
    while (t < cfg.time_horizon && !moving.empty()) {
        ++t;
        const std::int64_t remaining = cfg.time_horizon - t;
        fresh.clear();
        std::size_t keep = 0;
        for (std::size_t k = 0; k < moving.size(); ++k) {
            detail::Walker& w = W[static_cast<std::size_t>(moving[k])];
            if (w.jumps_left == 0) {
                w.dead = true;
                continue;
            }
            w.pos += w.rng.uniform() < w.l ? -1 : 1;
            ++w.jumps;
            if (w.jumps_left != detail::kNever) --w.jumps_left;
            if (w.pos == 0) {
                ++rec.origin_visits;
                w.visited_origin = true;
            }
            if (w.pos > cfg.site_horizon) rec.hit_site_horizon = true;
            if (w.pos >= 0 && w.pos <= cfg.site_horizon) {
                const int j = pop.by_site[static_cast<std::size_t>(w.pos)];
                if (j >= 0 && W[static_cast<std::size_t>(j)].activated_at < 0) {
                    W[static_cast<std::size_t>(j)].activated_at = t; // claimed; finalised below
                    fresh.push_back(j);
                }
            }
            // Freeze walkers that can no longer change any recorded quantity.
            const Site upper = dormant > 0 ? cfg.site_horizon : 0;
            const Site gap = w.pos > upper ? w.pos - upper : (w.pos < 0 ? -w.pos : 0);
            bool freeze = gap > remaining;
            if (!freeze && cfg.local_step_budget > 0 && w.jumps >= cfg.local_step_budget) freeze = true;
            if (!freeze && cfg.escape_tolerance > 0.0 && gap > 0) {
                const double lg = w.pos > upper ? w.log_to_left : w.log_to_right;
                if (static_cast<double>(gap) * lg < log_tol) {
                    freeze = true;
                    ++rec.retired_walkers;
                }
            }
            if (freeze) {
                w.frozen = true;
                continue;
            }
            moving[keep++] = moving[k];
        }
        moving.resize(keep);
        std::sort(fresh.begin(), fresh.end()); // walker order equals site order
        for (int j : fresh) {
            detail::activate(W[static_cast<std::size_t>(j)], t, cfg.escape_tolerance);
            moving.push_back(j);
            --dormant;
        }
        if (cfg.record_trajectory) {
            Site front = rec.front.empty() ? 0 : rec.front.back();
            for (int j : fresh) front = std::max(front, W[static_cast<std::size_t>(j)].home);
            rec.front.push_back(front);
        }
    }

    std::int64_t last_death = 0;
    bool all_dead = true;
    for (const auto& w : W) {
        if (w.activated_at < 0) continue;
        rec.activated_sites.push_back(w.home);
        rec.activation_times.push_back(w.activated_at);
        rec.rightmost_activated = std::max(rec.rightmost_activated, w.home);
        if (w.visited_origin) rec.origin_visitors.push_back(w.home);
        if (w.dead) {
            last_death = std::max(last_death, w.activated_at + w.jumps + 1);
        } else if (w.jumps_left != detail::kNever && cfg.local_step_budget == 0) {
            last_death = std::max(last_death, w.activated_at + w.jumps + w.jumps_left + 1);
        } else {
            all_dead = false;
        }
    }
    rec.activated_count = rec.activated_sites.size();
    if (all_dead && last_death <= cfg.time_horizon) rec.all_dead_time = last_death;
    rec.hit_time_horizon = !rec.all_dead_time.has_value();
    return rec;
}

inline std::uint64_t trial_seed(const SimConfig& cfg, std::size_t index) { return derive_seed(cfg.rng_seed, index); }

/// cfg.replications independent trials, seeds derived from (rng_seed, index); output order is by index.
inline std::vector<TrialRecord> run_trials(const ModelSpec& spec, const SimConfig& cfg) {
    cfg.check();
    std::vector<TrialRecord> out(cfg.replications);
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.replications)));
    auto work = [&](unsigned id) {
        for (std::size_t i = id; i < cfg.replications; i += threads) out[i] = run_trial(spec, cfg, trial_seed(cfg, i));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
        for (auto& th : pool) th.join();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Estimators

struct EstimateReport {
    double estimate = 0.0;
    double std_error = 0.0; ///< sample standard deviation / sqrt(replications)
    std::size_t replications = 0;
    SimConfig config;
    std::string quantity;
};

inline EstimateReport bernoulli_report(std::size_t hits, std::size_t n, const SimConfig& cfg, std::string quantity) {
    EstimateReport r;
    r.replications = n;
    r.config = cfg;
    r.quantity = std::move(quantity);
    if (n == 0) return r;
    const double m = static_cast<double>(hits) / static_cast<double>(n);
    r.estimate = m;
    if (n > 1) {
        const double var = m * (1.0 - m) * static_cast<double>(n) / static_cast<double>(n - 1);
        r.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return r;
}

/// Fraction of trials with at least K origin visits by the time horizon. A finite-horizon
/// proxy for local survival; it can only grow with the horizons.
inline EstimateReport estimate_local_survival_proxy(const ModelSpec& spec, const SimConfig& cfg) {
    std::size_t hits = 0;
    for (const auto& r : run_trials(spec, cfg))
        if (r.origin_visits >= cfg.origin_visit_target) ++hits;
    return bernoulli_report(hits, cfg.replications, cfg, "P(origin visits >= K by time horizon)");
}

/// Fraction of trials whose activation front reaches rho * site_horizon. Proxy for infinite activation.
inline EstimateReport estimate_infinite_activation_proxy(const ModelSpec& spec, const SimConfig& cfg) {
    std::size_t hits = 0;
    const double target = cfg.front_fraction * static_cast<double>(cfg.site_horizon);
    for (const auto& r : run_trials(spec, cfg))
        if (static_cast<double>(r.rightmost_activated) >= target) ++hits;
    return bernoulli_report(hits, cfg.replications, cfg, "P(rightmost activated >= rho * site horizon)");
}

/// Local-survival proxy at time_horizon * 2^k for k = 0..doublings.
inline std::vector<EstimateReport> horizon_doubling_report(const ModelSpec& spec, SimConfig cfg, int doublings) {
    if (doublings < 0) throw DomainError("doublings must be nonnegative");
    std::vector<EstimateReport> out;
    for (int k = 0; k <= doublings; ++k) {
        out.push_back(estimate_local_survival_proxy(spec, cfg));
        cfg.time_horizon *= 2;
    }
    return out;
}

struct SiteVisitRow {
    Site site = 0;
    std::size_t activations = 0;
    std::size_t visits = 0; ///< activated trials in which this walker visited the origin
    double frequency = 0.0;
    double std_error = 0.0;
    double analytic = 0.0; ///< P(A_n | B_n) from the closed form
};

/// Per-site empirical P(walker n visits 0 | activated) next to the closed form.
inline std::vector<SiteVisitRow> per_site_visit_table(const ModelSpec& spec, const std::vector<TrialRecord>& trials,
                                                      Site max_site) {
    std::vector<SiteVisitRow> rows;
    for (Site n : spec.occupied.sites_upto(max_site)) {
        if (n == 0 || eval_lifetime(spec, n) <= 0.0) continue;
        SiteVisitRow row;
        row.site = n;
        row.analytic = prob_visit_origin_given_active(spec, n);
        for (const auto& r : trials) {
            if (!std::binary_search(r.activated_sites.begin(), r.activated_sites.end(), n)) continue;
            ++row.activations;
            if (std::binary_search(r.origin_visitors.begin(), r.origin_visitors.end(), n)) ++row.visits;
        }
        if (row.activations > 0) {
            const auto rep = bernoulli_report(row.visits, row.activations, SimConfig{}, "");
            row.frequency = rep.estimate;
            row.std_error = rep.std_error;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Monotone coupling

/// Activation time of every occupied site in [0, site_horizon] (nullopt if never activated).
inline std::vector<std::optional<std::int64_t>> activation_profile(const ModelSpec& spec, const SimConfig& cfg,
                                                                   std::uint64_t seed) {
    const auto rec = run_trial(spec, cfg, seed);
    std::vector<std::optional<std::int64_t>> out(static_cast<std::size_t>(cfg.site_horizon) + 1);
    for (std::size_t i = 0; i < rec.activated_sites.size(); ++i)
        out[static_cast<std::size_t>(rec.activated_sites[i])] = rec.activation_times[i];
    return out;
}

struct MonotoneCheck {
    std::size_t trials = 0;
    std::size_t violations = 0; ///< sites activated later (or not at all) under the larger p
    std::vector<std::uint64_t> violating_seeds;
};

/// Runs both models on shared streams and checks that the one with pointwise larger p activates no site later.
inline MonotoneCheck monotone_coupling_check(const ModelSpec& smaller_p, const ModelSpec& larger_p, const SimConfig& cfg) {
    if (!(smaller_p.drift == larger_p.drift) || !(smaller_p.occupied == larger_p.occupied))
        throw PreconditionError("monotone coupling compares models that differ only in p_n");
    for (Site n : smaller_p.occupied.sites_upto(cfg.site_horizon))
        if (eval_lifetime(smaller_p, n) > eval_lifetime(larger_p, n))
            throw PreconditionError("p_n of the second model must dominate at site " + std::to_string(n));
    MonotoneCheck out;
    for (std::size_t i = 0; i < cfg.replications; ++i) {
        const auto seed = trial_seed(cfg, i);
        const auto a = activation_profile(smaller_p, cfg, seed);
        const auto b = activation_profile(larger_p, cfg, seed);
        ++out.trials;
        bool bad = false;
        for (std::size_t s = 0; s < a.size(); ++s)
            if (a[s] && (!b[s] || *b[s] > *a[s])) bad = true;
        if (bad) {
            ++out.violations;
            out.violating_seeds.push_back(seed);
        }
    }
    return out;
}

} // namespace frog

#include "frog/firework.hpp"
