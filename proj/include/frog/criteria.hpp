#pragma once

// Survival and extinction classifiers. Every verdict is derived symbolically
// from the eventual form of the parameter sequences; numeric partial sums are
// attached as diagnostics only and never decide an outcome.

#include "frog/analytics.hpp"
#include "frog/asymptotics.hpp"
#include "frog/errors.hpp"
#include "frog/model.hpp"
#include "frog/verdict.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace frog {

struct ClassifyOptions {
    std::size_t max_block_size = 64; ///< largest L tried for the block criteria
    Site scan_limit = 4096;          ///< horizon for numeric diagnostics
};

namespace detail {

/// Facts about the occupied sites before the symbolic tails take over.
struct PrefixScan {
    Site upto = -1;
    std::size_t count = 0;
    std::size_t right = 0;    ///< l < 1/2
    std::size_t left = 0;     ///< l > 1/2
    std::size_t critical = 0; ///< l == 1/2
    Site first_right = -1;
    bool critical_immortal = false;
    bool origin_critical_immortal = false;
    double max_p = 0.0;
    Site first_immortal = -1;
};

inline PrefixScan scan_prefix(const ModelSpec& spec, Site upto) {
    PrefixScan s;
    s.upto = upto;
    for (Site n : spec.occupied.sites_upto(upto)) {
        const double l = eval_drift(spec, n);
        const double p = eval_lifetime(spec, n);
        if (p == 0.0) continue; // a particle that dies at once never moves
        ++s.count;
        if (l < 0.5) {
            ++s.right;
            if (s.first_right < 0) s.first_right = n;
        } else if (l > 0.5) {
            ++s.left;
        } else {
            ++s.critical;
            if (p == 1.0) {
                s.critical_immortal = true;
                if (n == 0) s.origin_critical_immortal = true;
            }
        }
        s.max_p = std::max(s.max_p, p);
        if (p == 1.0 && s.first_immortal < 0) s.first_immortal = n;
    }
    return s;
}

/// Scan bound: every occupied site for finite sets, otherwise the sites before the symbolic tails.
inline Site prefix_bound(const ModelSpec& spec) {
    if (spec.occupied.finite()) return spec.occupied.listed().back();
    return symbolic_start(spec) - 1;
}

/// Family that governs large indices.
inline const SequenceFamily& tail_family(const SequenceFamily& f) {
    if (f.kind == FamilyKind::Table && f.tail) return tail_family(*f.tail);
    if (f.kind == FamilyKind::Piecewise && !f.pieces.empty()) return tail_family(*f.pieces.back().family);
    return f;
}

inline const char* sumexp_corollary(const SeriesVerdict& s) {
    if (s.justification == sumexp_rule::kBounded) return cite::kCorBounded;
    if (s.justification == sumexp_rule::kBelowLog) return cite::kCorBelowLog;
    if (s.justification == sumexp_rule::kAboveLog) return cite::kCorAboveLog;
    return nullptr;
}

/// a_n = (1 - 2l)/(1 - l) = 4d - 8d^2/(1 + 2d) for l = 1/2 - d.
/// The correction is negative and O(log^2 n / n^2) for the log-critical form,
/// which is below every term the sum-exp rules look at, so that form stays Exact.
inline Rate right_drift_gap_rate(const Rate& deviation) {
    Rate a = deviation;
    if (a.zero) return a;
    a.scale *= 4.0;
    a.loglog *= 4.0;
    const bool log_critical = a.decay == 1.0 && a.log_power == 1.0 && a.precision == Precision::Exact;
    if (!log_critical) a.precision = weaker(a.precision, Precision::Asymptotic);
    return a;
}

/// Numeric partial sum of (l_n/(1 - l_n))^n over occupied right-drift sites n <= horizon.
inline double right_drift_partial_sum(const ModelSpec& spec, Site horizon) {
    long double sum = 0.0L;
    for (Site n : spec.occupied.sites_upto(horizon)) {
        if (n == 0) continue;
        const double l = eval_drift(spec, n);
        if (l >= 0.5) continue;
        sum += std::exp(static_cast<long double>(n) * std::log(static_cast<long double>(l / (1.0 - l))));
    }
    return static_cast<double>(sum);
}

inline void demote_survival_on_sparse_sites(const ModelSpec& spec, Verdict& v) {
    if (spec.occupied.bounded_gaps() || spec.occupied.finite()) return;
    if (survives(v.local) || v.global == GlobalOutcome::Survives) {
        v.notes.push_back("occupied set has unbounded gaps; survival certificates need bounded gaps, demoted");
        if (survives(v.local)) v.local = LocalOutcome::Inconclusive;
        if (v.global == GlobalOutcome::Survives) v.global = GlobalOutcome::Inconclusive;
        if (survives(v.infinite_activation)) v.infinite_activation = LocalOutcome::Inconclusive;
    }
}

inline void require_immortal(const ModelSpec& spec) {
    if (!is_immortal(spec)) throw PreconditionError("classifier needs p_n = 1 on every occupied site");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Immortal particles

/// All occupied sites carry l_n < 1/2. Local survival obeys a 0-1 law decided by sum (l_n/(1-l_n))^n.
inline Verdict classify_right_drift_immortal(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    detail::require_immortal(spec);
    const auto scan = detail::scan_prefix(spec, detail::prefix_bound(spec));
    const auto tail = drift_tail(spec.drift);
    if (scan.left > 0 || scan.critical > 0 || (!spec.occupied.finite() && tail && tail->sign != -1))
        throw PreconditionError("right-drift classifier needs l_n < 1/2 on every occupied site");

    Verdict v;
    v.global = GlobalOutcome::Trivial;
    v.cite(cite::kImmortalGlobal);
    v.diagnostics["sumexp_partial_sum"] = detail::right_drift_partial_sum(spec, opts.scan_limit);
    if (spec.occupied.finite()) {
        v.local = LocalOutcome::Dies;
        v.infinite_activation = LocalOutcome::Dies;
        v.cite(cite::kFiniteOccupation);
        return v;
    }
    v.infinite_activation = LocalOutcome::SurvivesAS;
    v.cite(cite::kRightDriftActivation);
    if (!tail) {
        v.notes.push_back("drift has no symbolic tail");
        return v;
    }
    const auto series = classify_sumexp(SymbolicSequence{{}, detail::right_drift_gap_rate(tail->deviation)});
    v.notes.push_back("sum (l_n/(1-l_n))^n: " + std::string(to_string(series.status)) + " (" + series.justification + ")");
    if (series.status == SeriesStatus::Inconclusive) return v;
    v.local = series.status == SeriesStatus::Converges ? LocalOutcome::Dies : LocalOutcome::SurvivesAS;
    v.cite(cite::kZeroOneLaw);
    if (const char* c = detail::sumexp_corollary(series)) v.cite(c);
    if (detail::tail_family(spec.drift).kind == FamilyKind::PowerLawBelow) v.cite(cite::kRightPowerExample);
    detail::demote_survival_on_sparse_sites(spec, v);
    return v;
}

/// All occupied sites carry l_n > 1/2. Local survival and infinite activation are equivalent.
inline Verdict classify_left_drift_immortal(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    detail::require_immortal(spec);
    const auto scan = detail::scan_prefix(spec, detail::prefix_bound(spec));
    const auto tail = drift_tail(spec.drift);
    if (scan.right > 0 || scan.critical > 0 || (!spec.occupied.finite() && tail && tail->sign != 1))
        throw PreconditionError("left-drift classifier needs l_n > 1/2 on every occupied site");

    Verdict v;
    v.global = GlobalOutcome::Trivial;
    v.cite(cite::kImmortalGlobal);
    if (spec.occupied.finite()) {
        v.local = LocalOutcome::Dies;
        v.infinite_activation = LocalOutcome::Dies;
        v.cite(cite::kFiniteOccupation);
        return v;
    }
    v.diagnostics["canonical_sequence_sites"] =
        static_cast<double>(canonical_test_sequence(spec, opts.scan_limit).size());
    if (!tail) {
        v.notes.push_back("drift has no symbolic tail");
        return v;
    }
    const Rate& dev = tail->deviation;
    auto decide = [&](LocalOutcome o) {
        v.local = o;
        v.infinite_activation = o;
        v.cite(cite::kLeftDriftEquivalence);
    };
    if (!dev.tends_to_zero()) {
        decide(LocalOutcome::Dies);
        v.cite(cite::kGenerationChain);
        v.notes.push_back("liminf l_n > 1/2");
        return v;
    }
    const FamilyKind fk = detail::tail_family(spec.drift).kind;
    auto cite_example = [&] {
        if (fk == FamilyKind::PowerLawAbove) v.cite(cite::kLeftPowerExample);
        if (fk == FamilyKind::StaircaseAbove) v.cite(cite::kStaircaseExample);
    };
    // Every supported tail is eventually nonincreasing, so the running minimum
    // in the sequence test equals the tail itself.
    if (summable(dev)) {
        decide(LocalOutcome::SurvivesWP);
        v.cite(cite::kSequenceTest);
        cite_example();
        v.notes.push_back("sum of (2 l_n - 1)/l_n converges");
        return v;
    }
    if (spec.occupied.bounded_gaps()) {
        for (std::size_t L = 2; L <= opts.max_block_size; ++L) {
            if (!summable(dev, static_cast<double>(L))) continue;
            decide(LocalOutcome::SurvivesWP);
            v.cite(cite::kBlocks);
            cite_example();
            v.diagnostics["block_size"] = static_cast<double>(L);
            v.notes.push_back("sum of (l_n - 1/2)^L converges for L = " + std::to_string(L));
            return v;
        }
    }
    if (fk == FamilyKind::StaircaseAbove && detail::tail_family(spec.drift).log_decay)
        v.notes.push_back("logarithmic staircase: no block size makes the series converge");
    else
        v.notes.push_back("no sufficient condition holds up to block size " + std::to_string(opts.max_block_size));
    return v;
}

/// Immortal particles with both drift directions present.
inline Verdict classify_mixed_immortal(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    detail::require_immortal(spec);
    const auto scan = detail::scan_prefix(spec, detail::prefix_bound(spec));
    const auto tail = drift_tail(spec.drift);

    Verdict v;
    v.global = GlobalOutcome::Trivial;
    v.cite(cite::kImmortalGlobal);
    if (spec.occupied.finite()) {
        v.local = LocalOutcome::Dies;
        v.infinite_activation = LocalOutcome::Dies;
        v.cite(cite::kFiniteOccupation);
        return v;
    }
    if (!tail) {
        v.notes.push_back("drift has no symbolic tail");
        return v;
    }
    // The first right-drift particle activates everything to its right with probability one.
    const bool origin_right = scan.first_right == 0 || (scan.count == 0 && tail->sign == -1);
    const LocalOutcome via_first_right = origin_right ? LocalOutcome::SurvivesAS : LocalOutcome::SurvivesWP;
    const bool has_right = scan.right > 0 || tail->sign == -1;
    if (has_right) {
        v.infinite_activation = via_first_right;
        v.cite(cite::kRightDriftActivation);
    }
    if (tail->sign == 1) {
        if (!has_right) throw PreconditionError("mixed classifier needs at least one right-drift site");
        v.local = via_first_right;
        v.cite(cite::kMixed);
        v.notes.push_back("infinitely many left-drift particles behind a right-drift particle");
        detail::demote_survival_on_sparse_sites(spec, v);
        return v;
    }
    if (tail->sign == -1) {
        const auto series = classify_sumexp(SymbolicSequence{{}, detail::right_drift_gap_rate(tail->deviation)});
        v.diagnostics["sumexp_partial_sum"] = detail::right_drift_partial_sum(spec, opts.scan_limit);
        v.notes.push_back("tail series: " + std::string(to_string(series.status)) + " (" + series.justification + ")");
        if (series.status == SeriesStatus::Inconclusive) return v;
        v.local = series.status == SeriesStatus::Converges ? LocalOutcome::Dies : via_first_right;
        v.cite(cite::kMixed);
        if (const char* c = detail::sumexp_corollary(series)) v.cite(c);
        detail::demote_survival_on_sparse_sites(spec, v);
        return v;
    }
    v.notes.push_back("critical drift tail");
    return v;
}

/// Dispatches an immortal model to the matching classifier.
inline Verdict classify_immortal(const ModelSpec& spec, const ClassifyOptions& opts = {}) {
    detail::require_immortal(spec);
    const auto scan = detail::scan_prefix(spec, detail::prefix_bound(spec));
    const auto tail = drift_tail(spec.drift);
    const bool tail_critical = !spec.occupied.finite() && tail && tail->sign == 0;
    if (scan.critical_immortal || tail_critical) {
        // A recurrent particle visits every site infinitely often once it is active.
        Verdict v;
        v.global = GlobalOutcome::Trivial;
        v.cite(cite::kImmortalGlobal);
        v.cite(cite::kCriticalSite);
        const bool at_origin = scan.origin_critical_immortal || (tail_critical && tail->start == 0);
        v.local = at_origin ? LocalOutcome::SurvivesAS : LocalOutcome::SurvivesWP;
        v.infinite_activation = spec.occupied.finite() ? LocalOutcome::Dies : v.local;
        return v;
    }
    if (spec.occupied.finite()) return classify_mixed_immortal(spec, opts);
    if (!tail) {
        Verdict v;
        v.global = GlobalOutcome::Trivial;
        v.cite(cite::kImmortalGlobal);
        v.notes.push_back("drift has no symbolic tail");
        return v;
    }
    if (scan.left == 0 && tail->sign == -1) return classify_right_drift_immortal(spec, opts);
    if (scan.right == 0 && tail->sign == 1) return classify_left_drift_immortal(spec, opts);
    return classify_mixed_immortal(spec, opts);
}

} // namespace frog

#include "frog/criteria_mortal.hpp"
