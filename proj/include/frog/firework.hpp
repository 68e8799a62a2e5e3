#pragma once

// Firework process read off the frog walkers' own paths, the exact coupling
// between the two activation sets, and the generation chain of a left-drift
// system. Included from simulator.hpp.

#include "frog/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace frog {

/// Maximal rightward excursion of walker `home` over its first min(K, H) jumps, from the shared stream.
struct Excursion {
    Site radius = 0;
    bool censored = false; ///< still alive after H jumps and standing at its running maximum
};

inline Excursion walker_excursion(const ModelSpec& spec, Site home, std::uint64_t trial_seed, std::int64_t H) {
    Stream s(derive_seed(trial_seed, static_cast<std::uint64_t>(home)));
    const double l = eval_drift(spec, home);
    const std::int64_t K = detail::lifetime_jumps(s, eval_lifetime(spec, home));
    const std::int64_t n = std::min(K, H);
    Site x = 0, best = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        x += s.uniform() < l ? -1 : 1;
        best = std::max(best, x);
    }
    return Excursion{best, K > H && x == best};
}

struct FireworkResult {
    std::vector<Site> activated; ///< ascending
    std::size_t censored = 0;
};

inline std::int64_t firework_budget(const SimConfig& cfg) {
    return cfg.local_step_budget > 0 ? cfg.local_step_budget : cfg.time_horizon;
}

/// Greedy rightward activation: an active site i lights every occupied site in (i, i + R_i].
inline FireworkResult run_firework_trial(const ModelSpec& spec, const SimConfig& cfg, std::uint64_t trial_seed) {
    cfg.check();
    const std::int64_t H = firework_budget(cfg);
    FireworkResult out;
    Site front = 0;
    for (Site s : spec.occupied.sites_upto(cfg.site_horizon)) {
        if (eval_lifetime(spec, s) <= 0.0) continue;
        if (s > front) break;
        out.activated.push_back(s);
        const auto e = walker_excursion(spec, s, trial_seed, H);
        if (e.censored) ++out.censored;
        front = std::max(front, s + e.radius);
    }
    return out;
}

struct CoupledResult {
    std::vector<Site> frog;
    std::vector<Site> firework;
    std::size_t censored = 0;
    bool equal() const { return frog == firework; }
};

/// Both processes on the same walker paths: each walker makes exactly H jumps
/// (or fewer if it dies) after activation, with no global time limit.
inline CoupledResult coupled_frog_firework(const ModelSpec& spec, const SimConfig& cfg, std::uint64_t trial_seed) {
    SimConfig c = cfg;
    c.local_step_budget = firework_budget(cfg);
    c.escape_tolerance = 0.0;
    c.record_trajectory = false;
    const auto walkers = static_cast<std::int64_t>(spec.occupied.sites_upto(cfg.site_horizon).size());
    // Each activation happens within H ticks of the one that caused it.
    c.time_horizon = (walkers + 2) * c.local_step_budget + 1;
    CoupledResult out;
    out.frog = run_trial(spec, c, trial_seed).activated_sites;
    auto fw = run_firework_trial(spec, c, trial_seed);
    out.firework = std::move(fw.activated);
    out.censored = fw.censored;
    return out;
}

// ---------------------------------------------------------------------------
// Generation chain

struct GenerationStep {
    std::size_t size = 0; ///< newly activated particles in this generation
    Site rightmost = 0;   ///< rightmost activated site after this generation
};

struct GenerationTrace {
    std::vector<GenerationStep> steps; ///< steps[0] is the origin particle alone
    bool absorbed = false;             ///< a generation produced no new particle
    bool truncated = false;            ///< the chain reached site_horizon
};

/// Generation n + 1 is the set of occupied sites in (j_n, max_{i in gen n}(i + R_i)].
inline GenerationTrace generation_trace(const ModelSpec& spec, const SimConfig& cfg, std::uint64_t trial_seed) {
    const std::int64_t H = firework_budget(cfg);
    GenerationTrace tr;
    std::vector<Site> gen{0};
    Site j = 0;
    tr.steps.push_back({1, 0});
    while (true) {
        Site reach = j;
        for (Site s : gen) reach = std::max(reach, s + walker_excursion(spec, s, trial_seed, H).radius);
        if (reach > cfg.site_horizon) {
            tr.truncated = true;
            reach = cfg.site_horizon;
        }
        std::vector<Site> next;
        for (auto s = spec.occupied.next_after(j); s && *s <= reach; s = spec.occupied.next_after(*s))
            if (eval_lifetime(spec, *s) > 0.0) next.push_back(*s);
        if (next.empty()) {
            tr.absorbed = !tr.truncated;
            return tr;
        }
        j = reach;
        tr.steps.push_back({next.size(), j});
        gen = std::move(next);
        if (tr.truncated) return tr;
    }
}

struct GenerationSummary {
    std::vector<GenerationTrace> traces;
    std::size_t transitions = 0;           ///< generation steps taken from a live state
    std::size_t absorptions = 0;           ///< of which produced nothing new
    double absorption_frequency = 0.0;     ///< absorptions / transitions
    std::size_t beyond_generation = 0;     ///< trials with new activations after `late_generation`
    std::size_t late_generation = 50;
};

/// cfg.replications traces of a left-drift system.
inline GenerationSummary generation_chain_diagnostic(const ModelSpec& spec, const SimConfig& cfg,
                                                     std::size_t late_generation = 50) {
    cfg.check();
    for (Site n : spec.occupied.sites_upto(cfg.site_horizon))
        if (!(eval_drift(spec, n) > 0.5)) throw PreconditionError("generation chain needs l_n > 1/2 on every site");
    GenerationSummary sum;
    sum.late_generation = late_generation;
    for (std::size_t i = 0; i < cfg.replications; ++i) {
        auto tr = generation_trace(spec, cfg, trial_seed(cfg, i));
        sum.transitions += tr.steps.size() - (tr.absorbed ? 0 : 1);
        if (tr.absorbed) ++sum.absorptions;
        if (tr.steps.size() > late_generation + 1) ++sum.beyond_generation;
        sum.traces.push_back(std::move(tr));
    }
    sum.absorption_frequency = sum.transitions ? static_cast<double>(sum.absorptions) / static_cast<double>(sum.transitions) : 0.0;
    return sum;
}

struct ProductBound {
    double value = 0.0;
    double tail_bound = 0.0; ///< relative error bound of the truncation
    std::size_t factors = 0;
};

/// prod_{i >= 1} (1 - q^i) with q = (1 - l)/l, truncated once the neglected tail is below `tail`.
inline ProductBound generation_absorption_bound(double l, double tail = 1e-10) {
    if (!(l > 0.5 && l < 1.0)) throw DomainError("absorption bound needs 1/2 < l < 1");
    const double q = (1.0 - l) / l;
    ProductBound b;
    long double v = 1.0L;
    double qi = q;
    while (true) {
        v *= 1.0L - qi;
        ++b.factors;
        qi *= q;
        const double rest = qi / (1.0 - q);
        if (rest < tail) {
            b.tail_bound = rest;
            break;
        }
    }
    b.value = static_cast<double>(v);
    return b;
}

} // namespace frog
