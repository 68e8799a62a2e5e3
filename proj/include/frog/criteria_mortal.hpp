#pragma once

// Mortal particles (p_n < 1 somewhere): global survival via block plans,
// local survival via the rate r_n = 2 delta_n + sqrt(2 Delta_n + 4 delta_n^2),
// with delta_n = 1/2 - l_n and Delta_n = 1 - p_n. Included from criteria.hpp.

#include "frog/criteria.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace frog {

namespace detail {

struct MortalFacts {
    PrefixScan scan;
    std::optional<DriftTail> drift;
    std::optional<LifetimeTail> life;
};

inline MortalFacts mortal_facts(const ModelSpec& spec) {
    return MortalFacts{scan_prefix(spec, prefix_bound(spec)), drift_tail(spec.drift), lifetime_tail(spec.lifetime)};
}

inline bool tail_deficit_bounded_below(const MortalFacts& f) { return f.life && !f.life->deficit.tends_to_zero(); }

inline bool all_left_with_gap(const MortalFacts& f) {
    return f.scan.right == 0 && f.scan.critical == 0 && f.drift && f.drift->sign == 1 && !f.drift->deviation.tends_to_zero();
}

/// Block criterion for global survival with blocks of size L.
inline bool global_blocks_certified(const MortalFacts& f, const BlockPlan& plan) {
    if (!f.drift || !f.life || !f.life->deficit.tends_to_zero()) return false;
    const double L = static_cast<double>(plan.cardinality());
    if (!summable(f.life->deficit, L / 2.0)) return false;
    if (f.drift->sign == 1 && !summable(f.drift->deviation, L)) return false;
    return true;
}

inline Rate rescaled(Rate base, double scale) {
    base.scale = scale;
    return base;
}

/// Eventual form of r_n, or nullopt when it cannot be derived.
inline std::optional<Rate> local_rate(const DriftTail& drift, const LifetimeTail& life) {
    const Rate& d = drift.deviation;
    const Rate& D = life.deficit;
    if (!d.zero && !d.tends_to_zero() && drift.sign != 0) return std::nullopt;
    const Rate sqrt2D = [&] {
        Rate r = pow(D, 0.5);
        if (!r.zero) r.scale *= std::sqrt(2.0);
        return r.with_precision(Precision::Asymptotic);
    }();
    if (drift.sign == 0 || d.zero) return D.zero ? Rate::vanishing() : sqrt2D;
    const int cmp = D.zero ? 1 : compare_decay(D, pow(d, 2.0)); // +1: D negligible against d^2
    if (drift.sign == -1) {
        if (D.zero) return rescaled(d, 4.0 * d.scale);
        if (cmp > 0) return rescaled(d, 4.0 * d.scale).with_precision(Precision::Asymptotic);
        if (cmp < 0) return sqrt2D;
        const double s = 2.0 * d.scale + std::sqrt(2.0 * D.scale + 4.0 * d.scale * d.scale);
        return rescaled(d, s).with_precision(weaker(D.precision, Precision::Asymptotic));
    }
    // left drift: r = 2 Delta / (sqrt(2 Delta + 4 d^2) + 2 d)
    if (D.zero) return Rate::vanishing();
    if (cmp > 0) {
        Rate r = quotient(D, d);
        r.scale /= 2.0;
        return r.with_precision(Precision::Asymptotic);
    }
    if (cmp < 0) return sqrt2D;
    const double s = std::sqrt(2.0 * D.scale + 4.0 * d.scale * d.scale) - 2.0 * d.scale;
    return rescaled(d, s).with_precision(weaker(D.precision, Precision::Asymptotic));
}

inline bool is_power_family(const SequenceFamily& f) {
    const auto k = tail_family(f).kind;
    return k == FamilyKind::PowerLawBelow || k == FamilyKind::PowerLawAbove || k == FamilyKind::PowerLawLifetime;
}

inline void mark_dead(Verdict& v) {
    v.local = LocalOutcome::Dies;
    v.infinite_activation = LocalOutcome::Dies;
    v.global = GlobalOutcome::Dies;
}

} // namespace detail

/// Global survival of a mortal system. `plan` may be null when the occupied set has unbounded gaps.
inline Verdict classify_mortal_global(const ModelSpec& spec, const BlockPlan* plan) {
    const auto f = detail::mortal_facts(spec);
    Verdict v;
    if (spec.occupied.finite()) {
        v.local = LocalOutcome::Dies;
        v.infinite_activation = LocalOutcome::Dies;
        v.global = f.scan.first_immortal >= 0 ? GlobalOutcome::Trivial : GlobalOutcome::Dies;
        v.cite(cite::kFiniteOccupation);
        return v;
    }
    if (f.scan.first_immortal >= 0 || (f.life && f.life->deficit.zero)) {
        v.global = GlobalOutcome::Trivial;
        v.cite(cite::kSomeImmortal);
        return v;
    }
    if (detail::tail_deficit_bounded_below(f) && f.scan.max_p < 1.0) {
        detail::mark_dead(v);
        v.cite(cite::kGlobalExtinction);
        v.cite(cite::kLocalExtinction3);
        v.notes.push_back("sup p_n < 1");
        return v;
    }
    if (detail::all_left_with_gap(f)) {
        detail::mark_dead(v);
        v.cite(cite::kMonotoneCoupling);
        v.cite(cite::kGenerationChain);
        v.notes.push_back("liminf l_n > 1/2: dominated by a dying immortal system");
        return v;
    }
    if (plan && detail::global_blocks_certified(f, *plan)) {
        v.global = GlobalOutcome::Survives;
        v.infinite_activation = LocalOutcome::SurvivesWP;
        v.cite(cite::kGlobalSurvival);
        v.diagnostics["block_size"] = static_cast<double>(plan->cardinality());
        return v;
    }
    v.notes.push_back(plan ? "global block criterion fails for L = " + std::to_string(plan->cardinality())
                           : "no block plan for this occupied set");
    return v;
}

/// Local survival of a mortal system, using `plan` for the block conditions.
inline Verdict classify_mortal_local(const ModelSpec& spec, const BlockPlan* plan) {
    Verdict v = classify_mortal_global(spec, plan);
    if (v.local == LocalOutcome::Dies) return v;
    const auto f = detail::mortal_facts(spec);
    if (!f.drift || !f.life) {
        v.notes.push_back("missing symbolic tail");
        return v;
    }
    auto local_dies = [&](const char* tag, const std::string& why) {
        v.local = LocalOutcome::Dies;
        v.cite(tag);
        v.notes.push_back(why);
        return v;
    };
    if (detail::tail_deficit_bounded_below(f))
        return local_dies(cite::kLocalExtinction3, "sum p_n^n converges");
    if (f.drift->sign == -1 && !f.drift->deviation.tends_to_zero())
        return local_dies(cite::kLocalExtinction2, "liminf (1/2 - l_n) > 0");
    if (detail::all_left_with_gap(f)) {
        v.cite(cite::kMonotoneCoupling);
        v.cite(cite::kGenerationChain);
        v.infinite_activation = LocalOutcome::Dies;
        return local_dies(cite::kLocalExtinction, "liminf l_n > 1/2");
    }
    const auto r = detail::local_rate(*f.drift, *f.life);
    if (!r) {
        v.notes.push_back("rate r_n not derivable");
        return v;
    }
    v.diagnostics["r_decay"] = r->zero ? std::numeric_limits<double>::infinity() : r->decay;
    v.diagnostics["r_log_power"] = r->log_power;
    v.diagnostics["r_scale"] = r->scale;
    const auto lim = n_over_log_limit(*r);
    using K = ScaledLimit::Kind;
    if (lim.kind == K::Finite) v.diagnostics["n_r_over_log_limit"] = lim.value;
    if (lim.kind == K::Infinite || (lim.kind == K::Finite && lim.value > 1.0)) {
        if (detail::is_power_family(spec.drift) && detail::is_power_family(spec.lifetime)) v.cite(cite::kPowerPhase);
        return local_dies(cite::kLocalExtinction1, "n r_n / log n exceeds 1 eventually");
    }
    if (!plan) {
        v.notes.push_back("local survival criteria need a block plan");
        return v;
    }
    if (!detail::global_blocks_certified(f, *plan)) {
        v.notes.push_back("even blocks not certified for L = " + std::to_string(plan->cardinality()));
        return v;
    }
    const double L = static_cast<double>(plan->cardinality());
    const bool bounded_kr = r->zero || r->decay > 1.0 ||
                            (r->decay == 1.0 && (r->log_power < 0.0 || (r->log_power == 0.0 && r->loglog <= 0.0)));
    const bool below_log = lim.kind == K::Zero || (lim.kind == K::Finite && lim.value < 1.0);
    const bool sums = summable(pow(times_power_of_n(pow(f.life->deficit, 0.5), 1.0), L)) &&
                      (f.drift->sign != -1 || summable(pow(times_power_of_n(f.drift->deviation, 1.0), L)));
    if (!bounded_kr && !below_log && !sums) {
        v.notes.push_back("no local survival condition holds for L = " + std::to_string(plan->cardinality()));
        return v;
    }
    if (bounded_kr) v.cite(cite::kLocalSurvival1);
    if (below_log) v.cite(cite::kLocalSurvival2);
    if (sums) v.cite(cite::kLocalSurvival3);
    if (detail::is_power_family(spec.drift) && detail::is_power_family(spec.lifetime)) v.cite(cite::kPowerPhase);
    v.local = LocalOutcome::SurvivesWP;
    v.infinite_activation = LocalOutcome::SurvivesWP;
    if (v.global != GlobalOutcome::Trivial) v.global = GlobalOutcome::Survives;
    v.cite(cite::kGlobalSurvival);
    v.diagnostics["block_size"] = L;
    return v;
}

namespace detail {

/// Partial sum of P(A_n | B_n) over occupied n <= horizon; reported, never used to decide.
inline double head_series_partial_sum(const ModelSpec& spec, Site horizon) {
    double sum = 0.0;
    for (Site n : spec.occupied.sites_upto(horizon))
        if (n > 0) sum += prob_visit_origin_given_active(spec, n);
    return sum;
}

inline Verdict sweep_block_sizes(const ModelSpec& spec, const ClassifyOptions& opts) {
    if (!spec.occupied.bounded_gaps()) {
        Verdict v = classify_mortal_local(spec, nullptr);
        demote_survival_on_sparse_sites(spec, v);
        return v;
    }
    std::optional<Verdict> best;
    for (std::size_t L = 1; L <= opts.max_block_size; ++L) {
        const BlockPlan plan = default_block_plan(spec, L);
        Verdict v = classify_mortal_local(spec, &plan);
        if (survives(v.local)) return v;
        if (v.local == LocalOutcome::Dies) {
            // Local extinction does not use the plan; keep sweeping for a global certificate.
            for (std::size_t M = L; v.global == GlobalOutcome::Inconclusive && M <= opts.max_block_size; ++M) {
                const BlockPlan gp = default_block_plan(spec, M);
                const Verdict g = classify_mortal_global(spec, &gp);
                if (g.global != GlobalOutcome::Survives) continue;
                v.global = g.global;
                if (v.infinite_activation == LocalOutcome::Inconclusive) v.infinite_activation = g.infinite_activation;
                for (const auto& c : g.citations) v.cite(c);
                v.diagnostics["block_size"] = static_cast<double>(M);
            }
            return v;
        }
        if (!best || (v.global == GlobalOutcome::Survives && best->global != GlobalOutcome::Survives)) best = v;
    }
    return *best;
}

} // namespace detail

/// Sweeps block sizes 1..max_block_size and keeps the strongest certificate.
inline Verdict classify_mortal(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    Verdict v = detail::sweep_block_sizes(spec, opts);
    Site horizon = spec.occupied.finite() ? spec.occupied.listed().back() : opts.scan_limit;
    if (const auto e = defined_extent(spec); e && !spec.occupied.finite()) horizon = std::min(horizon, *e - 1);
    v.diagnostics["head_series_partial_sum"] = detail::head_series_partial_sum(spec, horizon);
    return v;
}

/// Validates the model and dispatches to the immortal or mortal classifiers.
inline Verdict classify(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    const auto report = validate(spec, opts.scan_limit);
    Verdict v = is_immortal(spec) ? classify_immortal(spec, opts) : classify_mortal(spec, opts);
    for (const auto& w : report.warnings) v.notes.push_back(w);
    return v;
}

// ---------------------------------------------------------------------------
// Power-law phase diagram

enum class DriftSide { Left, Right };

/// l_n = 1/2 -/+ n^-alpha (Right/Left), p_n = 1 - n^-beta; beta = +inf means immortal.
struct PhasePoint {
    double alpha = 1.0;
    double beta = std::numeric_limits<double>::infinity();
    DriftSide side = DriftSide::Left;
};

inline Verdict phase_power_law(const PhasePoint& pt) {
    if (!(pt.alpha > 0.0) || std::isinf(pt.alpha)) throw DomainError("alpha must be a positive finite number");
    if (!(pt.beta > 0.0)) throw DomainError("beta must be positive (or +inf)");
    Verdict v;
    if (std::isinf(pt.beta)) {
        v.global = GlobalOutcome::Trivial;
        v.cite(cite::kImmortalGlobal);
        if (pt.side == DriftSide::Right) {
            v.local = pt.alpha >= 1.0 ? LocalOutcome::SurvivesAS : LocalOutcome::Dies;
            v.infinite_activation = LocalOutcome::SurvivesAS;
            v.cite(cite::kZeroOneLaw);
            v.cite(cite::kRightPowerExample);
        } else {
            v.local = LocalOutcome::SurvivesWP;
            v.infinite_activation = LocalOutcome::SurvivesWP;
            v.cite(cite::kLeftDriftEquivalence);
            v.cite(cite::kLeftPowerExample);
        }
        return v;
    }
    v.global = GlobalOutcome::Survives;
    v.cite(cite::kGlobalSurvival);
    bool local = false;
    if (pt.side == DriftSide::Left) {
        local = pt.beta >= std::min(2.0, 1.0 + pt.alpha);
        v.cite(cite::kPowerPhaseLeft);
    } else {
        local = pt.beta >= 2.0 && pt.alpha >= 1.0;
        v.cite(cite::kPowerPhaseRight);
    }
    v.local = local ? LocalOutcome::SurvivesWP : LocalOutcome::Dies;
    v.infinite_activation = LocalOutcome::SurvivesWP;
    return v;
}

/// Concrete model on the phase diagram, with scales chosen so nothing is clipped.
inline ModelSpec phase_model(const PhasePoint& pt, double drift_scale = 0.25, double deficit_scale = 0.5) {
    ModelSpec spec;
    spec.drift = pt.side == DriftSide::Left ? SequenceFamily::power_above(pt.alpha, drift_scale, {0.5 + drift_scale})
                                            : SequenceFamily::power_below(pt.alpha, drift_scale, {0.5 - drift_scale});
    spec.lifetime = std::isinf(pt.beta) ? SequenceFamily::constant(1.0)
                                        : SequenceFamily::power_lifetime(pt.beta, deficit_scale, {1.0 - deficit_scale});
    return spec;
}

} // namespace frog
