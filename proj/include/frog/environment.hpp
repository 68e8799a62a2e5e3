#pragma once

// Immortal right-drift particles in a random environment: the l_n are
// independent, 1/2 - l_n = U_n * n^-e with U_n uniform on a band [lo, hi].
// Each site draws from the primary band, or from the alternative band with
// probability min(1, c n^-g). Band and weight tails make every almost-sure
// rule decidable symbolically; sampled realisations give a finite-horizon
// statistic that is reported next to the verdict.

#include "frog/asymptotics.hpp"
#include "frog/errors.hpp"
#include "frog/model.hpp"
#include "frog/rng.hpp"
#include "frog/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace frog {

struct EnvBand {
    double lo = 1.0;       ///< lower bound of n^e (1/2 - l_n)
    double hi = 1.0;       ///< upper bound of n^e (1/2 - l_n)
    double exponent = 1.0; ///< e

    /// n (1/2 - l_n) stays bounded: e >= 1. Otherwise it outgrows log n.
    bool fast() const { return exponent >= 1.0; }
};

struct EnvironmentLaw {
    EnvBand primary;
    std::optional<EnvBand> alternative;
    double alt_weight_scale = 0.0; ///< c
    double alt_weight_decay = 1.0; ///< g
    double l0 = 0.25;              ///< explicit value at the origin

    void check() const {
        auto check_band = [](const EnvBand& b, const char* name) {
            if (!(b.lo > 0.0))
                throw PreconditionError(std::string(name) + " band reaches l_n = 1/2; environment needs P(l_n < 1/2) = 1");
            if (!(b.hi >= b.lo)) throw DomainError(std::string(name) + " band has hi < lo");
            if (!(b.exponent >= 0.0)) throw DomainError(std::string(name) + " band exponent must be nonnegative");
        };
        check_band(primary, "primary");
        if (alternative) check_band(*alternative, "alternative");
        if (!(alt_weight_scale >= 0.0) || !(alt_weight_decay >= 0.0)) throw DomainError("alternative weight must be nonnegative");
        if (!(l0 > 0.0 && l0 < 0.5)) throw PreconditionError("l_0 must lie in (0, 1/2)");
    }

    double alt_weight(Site n) const {
        if (!alternative || n < 1) return 0.0;
        return std::min(1.0, alt_weight_scale * std::pow(static_cast<double>(n), -alt_weight_decay));
    }
};

/// Deviation 1/2 - l_n, clipped into (0, 1/2).
inline double sample_deviation(const EnvironmentLaw& law, Site n, Stream& rng) {
    const bool alt = rng.uniform() < law.alt_weight(n);
    const EnvBand& b = alt ? *law.alternative : law.primary;
    const double u = b.lo + (b.hi - b.lo) * rng.uniform();
    const double d = u * std::pow(static_cast<double>(n), -b.exponent);
    return std::clamp(d, 1e-300, 0.5 - kDriftClip);
}

/// One realisation of the environment as an immortal model on sites 0..horizon.
inline ModelSpec realize_environment(const EnvironmentLaw& law, Site horizon, std::uint64_t seed) {
    law.check();
    Stream rng(seed);
    std::vector<double> values{law.l0};
    values.reserve(static_cast<std::size_t>(horizon) + 1);
    for (Site n = 1; n <= horizon; ++n) values.push_back(0.5 - sample_deviation(law, n, rng));
    ModelSpec spec;
    spec.drift = SequenceFamily::table(std::move(values));
    spec.lifetime = SequenceFamily::constant(1.0);
    std::vector<Site> sites(static_cast<std::size_t>(horizon) + 1);
    for (Site n = 0; n <= horizon; ++n) sites[static_cast<std::size_t>(n)] = n;
    spec.occupied = OccupiedSet::explicit_sites(std::move(sites));
    return spec;
}

struct EnvironmentReport {
    Verdict verdict;
    std::size_t trials = 0;
    Site horizon = 0;
    double empirical_survival_fraction = 0.0; ///< share of realisations whose late-window mass reaches the threshold
    double threshold = 0.5;
    std::string statistic = "sum over n in (H/2, H] of (l_n/(1-l_n))^n";
};

namespace detail {

inline bool weight_summable(const EnvironmentLaw& law, bool alternative_band) {
    const bool alt_always = law.alternative && law.alt_weight_decay == 0.0 && law.alt_weight_scale >= 1.0;
    if (alternative_band) return !law.alternative || law.alt_weight_scale == 0.0 ||
                                 summable(Rate::power(law.alt_weight_scale, law.alt_weight_decay));
    return alt_always;
}

inline double late_window_mass(const EnvironmentLaw& law, Site horizon, std::uint64_t seed) {
    Stream rng(seed);
    long double mass = 0.0L;
    for (Site n = 1; n <= horizon; ++n) {
        const double d = sample_deviation(law, n, rng);
        if (2 * n <= horizon) continue;
        const double ratio = (0.5 - d) / (0.5 + d);
        mass += std::exp(static_cast<long double>(n) * std::log(static_cast<long double>(ratio)));
    }
    return static_cast<double>(mass);
}

} // namespace detail

/// Almost-sure local survival in a random right-drift environment.
inline EnvironmentReport classify_random_environment(const EnvironmentLaw& law, std::size_t trials, std::uint64_t seed,
                                                     Site horizon = 4096) {
    law.check();
    if (horizon < 2) throw DomainError("environment horizon must be at least 2");
    EnvironmentReport rep;
    rep.trials = trials;
    rep.horizon = horizon;

    struct BandUse {
        const EnvBand* band;
        bool summable_weight;
    };
    std::vector<BandUse> bands{{&law.primary, detail::weight_summable(law, false)}};
    if (law.alternative && law.alt_weight_scale > 0.0) bands.push_back({&*law.alternative, detail::weight_summable(law, true)});

    // sum_n P(n(1/2 - l_n) <= M) is infinite iff some bounded band carries non-summable weight.
    bool rule1 = false;
    bool rule2 = true; // unbounded bands carry summable weight
    for (const auto& b : bands) {
        if (b.band->fast() && !b.summable_weight) rule1 = true;
        if (!b.band->fast() && !b.summable_weight) rule2 = false;
    }
    const bool rule3 = !rule1; // bounded bands carry summable weight

    Verdict& v = rep.verdict;
    v.global = GlobalOutcome::Trivial;
    v.cite(cite::kImmortalGlobal);
    v.infinite_activation = LocalOutcome::SurvivesAS;
    v.cite(cite::kRightDriftActivation);
    if (rule1 || rule2) {
        v.local = LocalOutcome::SurvivesAS;
        if (rule1) v.cite(cite::kEnvironment1);
        if (rule2) v.cite(cite::kEnvironment2);
        v.notes.push_back("local survival for almost every realisation");
    } else if (rule3) {
        v.local = LocalOutcome::Dies;
        v.cite(cite::kEnvironment3);
        v.notes.push_back("local extinction for almost every realisation");
    }

    std::size_t alive = 0;
    for (std::size_t t = 0; t < trials; ++t)
        if (detail::late_window_mass(law, horizon, derive_seed(seed, t)) >= rep.threshold) ++alive;
    rep.empirical_survival_fraction = trials ? static_cast<double>(alive) / static_cast<double>(trials) : 0.0;
    v.diagnostics["empirical_survival_fraction"] = rep.empirical_survival_fraction;
    v.diagnostics["environment_trials"] = static_cast<double>(trials);
    return rep;
}

} // namespace frog
