#pragma once

// Parameter sequences {l_n} (left-jump probabilities) and {p_n} (per-step
// survival probabilities), the set of initially occupied sites, and the block
// plans used by the survival criteria.

#include "frog/asymptotics.hpp"
#include "frog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frog {

using Site = std::int64_t;

/// Drift values are clipped into [kDriftClip, 1 - kDriftClip].
inline constexpr double kDriftClip = 1e-12;

enum class FamilyKind {
    Constant,
    PowerLawBelow,    ///< 1/2 - scale / n^exponent
    PowerLawAbove,    ///< 1/2 + scale / n^exponent
    PowerLawLifetime, ///< 1 - scale / n^exponent
    Table,            ///< explicit values, optional tail rule
    Piecewise,        ///< finitely many index ranges, last one unbounded
    StaircaseAbove,   ///< 1/2 + scale / j^exponent on [j^cell, (j+1)^cell)
    LogCritical,      ///< 1/2 - (scale log n + loglog log log n) / n
};

/// Which probability a family describes; decides the admissible range.
enum class Role { Drift, Lifetime };

struct Sample {
    double value = 0.0;
    bool clipped = false;
};

struct SequenceFamily;

struct Piece {
    Site begin = 0;
    std::optional<Site> end; ///< exclusive; nullopt = unbounded
    std::shared_ptr<const SequenceFamily> family;
};

/// Symbolic description of a parameter sequence indexed by site.
///
/// Parametric families need explicit values for the indices where the
/// formula is undefined (index 0 for power laws, n < 3 for LogCritical);
/// those go in `head`, which always takes precedence over the formula.
struct SequenceFamily {
    FamilyKind kind = FamilyKind::Constant;
    double value = 0.0;
    double exponent = 1.0;
    double scale = 1.0;
    double cell_exponent = 3.0;
    bool log_decay = false;
    double loglog = 0.0;
    std::vector<double> head;
    std::shared_ptr<const SequenceFamily> tail;
    std::vector<Piece> pieces;

    static SequenceFamily constant(double v) {
        SequenceFamily f;
        f.kind = FamilyKind::Constant;
        f.value = v;
        return f;
    }
    static SequenceFamily power_below(double alpha, double scale, std::vector<double> head) {
        return parametric(FamilyKind::PowerLawBelow, alpha, scale, std::move(head));
    }
    static SequenceFamily power_above(double alpha, double scale, std::vector<double> head) {
        return parametric(FamilyKind::PowerLawAbove, alpha, scale, std::move(head));
    }
    static SequenceFamily power_lifetime(double beta, double scale, std::vector<double> head) {
        return parametric(FamilyKind::PowerLawLifetime, beta, scale, std::move(head));
    }
    static SequenceFamily table(std::vector<double> values, std::optional<SequenceFamily> tail_rule = {}) {
        SequenceFamily f;
        f.kind = FamilyKind::Table;
        f.head = std::move(values);
        if (tail_rule) f.tail = std::make_shared<const SequenceFamily>(std::move(*tail_rule));
        return f;
    }
    static SequenceFamily piecewise(std::vector<Piece> parts) {
        SequenceFamily f;
        f.kind = FamilyKind::Piecewise;
        f.pieces = std::move(parts);
        return f;
    }
    static SequenceFamily staircase_above(double cell_exponent, double decay, double scale, bool log_decay,
                                          std::vector<double> head) {
        SequenceFamily f = parametric(FamilyKind::StaircaseAbove, decay, scale, std::move(head));
        f.cell_exponent = cell_exponent;
        f.log_decay = log_decay;
        return f;
    }
    static SequenceFamily log_critical(double coefficient, double loglog_coeff, std::vector<double> head) {
        SequenceFamily f = parametric(FamilyKind::LogCritical, 1.0, coefficient, std::move(head));
        f.loglog = loglog_coeff;
        return f;
    }

    /// Value at index n, clipped into the range admissible for `role`.
    Sample evaluate(Site n, Role role) const {
        if (n < 0) throw DomainError("negative site index " + std::to_string(n));
        return clip(raw(n), role);
    }

    friend bool operator==(const SequenceFamily& a, const SequenceFamily& b) {
        auto same_ptr = [](const std::shared_ptr<const SequenceFamily>& x,
                           const std::shared_ptr<const SequenceFamily>& y) {
            return (!x && !y) || (x && y && *x == *y);
        };
        if (a.kind != b.kind || a.value != b.value || a.exponent != b.exponent || a.scale != b.scale ||
            a.cell_exponent != b.cell_exponent || a.log_decay != b.log_decay || a.loglog != b.loglog ||
            a.head != b.head || !same_ptr(a.tail, b.tail) || a.pieces.size() != b.pieces.size())
            return false;
        for (std::size_t i = 0; i < a.pieces.size(); ++i) {
            const auto& p = a.pieces[i];
            const auto& q = b.pieces[i];
            if (p.begin != q.begin || p.end != q.end || !same_ptr(p.family, q.family)) return false;
        }
        return true;
    }

    /// Largest j with j^cell <= n (n >= 1).
    static Site staircase_cell(Site n, double cell) {
        auto j = static_cast<Site>(std::floor(std::pow(static_cast<double>(n), 1.0 / cell)));
        j = std::max<Site>(j, 1);
        while (j > 1 && std::pow(static_cast<double>(j), cell) > static_cast<double>(n)) --j;
        while (std::pow(static_cast<double>(j + 1), cell) <= static_cast<double>(n)) ++j;
        return j;
    }

private:
    static SequenceFamily parametric(FamilyKind kind, double exponent, double scale, std::vector<double> head) {
        SequenceFamily f;
        f.kind = kind;
        f.exponent = exponent;
        f.scale = scale;
        f.head = std::move(head);
        return f;
    }

    static Sample clip(double v, Role role) {
        const double lo = role == Role::Drift ? kDriftClip : 0.0;
        const double hi = role == Role::Drift ? 1.0 - kDriftClip : 1.0;
        if (v < lo) return {lo, true};
        if (v > hi) return {hi, true};
        return {v, false};
    }

    double raw(Site n) const {
        const auto idx = static_cast<std::size_t>(n);
        if (kind != FamilyKind::Piecewise && idx < head.size()) return head[idx];
        const auto x = static_cast<double>(n);
        switch (kind) {
        case FamilyKind::Constant:
            return value;
        case FamilyKind::PowerLawBelow:
            require_positive(n);
            return 0.5 - scale / std::pow(x, exponent);
        case FamilyKind::PowerLawAbove:
            require_positive(n);
            return 0.5 + scale / std::pow(x, exponent);
        case FamilyKind::PowerLawLifetime:
            require_positive(n);
            return 1.0 - scale / std::pow(x, exponent);
        case FamilyKind::Table:
            if (!tail) throw DomainError("index " + std::to_string(n) + " beyond table without tail rule");
            return tail->raw(n);
        case FamilyKind::Piecewise:
            for (const auto& p : pieces)
                if (n >= p.begin && (!p.end || n < *p.end)) return p.family->raw(n);
            throw DomainError("index " + std::to_string(n) + " not covered by any piece");
        case FamilyKind::StaircaseAbove: {
            require_positive(n);
            const auto j = static_cast<double>(staircase_cell(n, cell_exponent));
            const double denom = log_decay ? std::pow(std::log(j + 1.0), exponent) : std::pow(j, exponent);
            return 0.5 + scale / denom;
        }
        case FamilyKind::LogCritical:
            if (n < 3) throw DomainError("log-critical family needs explicit values below index 3");
            return 0.5 - (scale * std::log(x) + loglog * std::log(std::log(x))) / x;
        }
        throw DomainError("unknown family kind");
    }

    static void require_positive(Site n) {
        if (n == 0) throw DomainError("power-law family needs an explicit index-0 value");
    }
};

// ---------------------------------------------------------------------------
// Eventual behaviour of a family

/// Sign and size of l_n - 1/2 for n >= start. sign +1: left drift, -1: right drift, 0: l_n = 1/2.
struct DriftTail {
    int sign = 0;
    Rate deviation;
    Site start = 0;
};

/// Size of 1 - p_n for n >= start.
struct LifetimeTail {
    Rate deficit;
    Site start = 0;
};

namespace detail {

inline Site head_start(const SequenceFamily& f, Site minimum) {
    return std::max<Site>(static_cast<Site>(f.head.size()), minimum);
}

} // namespace detail

inline std::optional<DriftTail> drift_tail(const SequenceFamily& f) {
    switch (f.kind) {
    case FamilyKind::Constant: {
        const double d = f.value - 0.5;
        return DriftTail{d > 0 ? 1 : (d < 0 ? -1 : 0), Rate::constant(std::abs(d)), detail::head_start(f, 0)};
    }
    case FamilyKind::PowerLawBelow:
        return DriftTail{-1, Rate::power(f.scale, f.exponent), detail::head_start(f, 1)};
    case FamilyKind::PowerLawAbove:
        return DriftTail{1, Rate::power(f.scale, f.exponent), detail::head_start(f, 1)};
    case FamilyKind::StaircaseAbove: {
        // j ~ n^(1/cell), so the excess is of order n^(-decay/cell) up to bounded factors
        Rate r = f.log_decay ? Rate::inverse_log(f.scale, f.exponent)
                             : Rate::power(f.scale, f.exponent / f.cell_exponent, Precision::Order);
        return DriftTail{1, r, detail::head_start(f, 1)};
    }
    case FamilyKind::LogCritical:
        return DriftTail{-1, Rate::log_over_n(f.scale, f.loglog), detail::head_start(f, 3)};
    case FamilyKind::Table: {
        if (!f.tail) return std::nullopt;
        auto t = drift_tail(*f.tail);
        if (t) t->start = std::max(t->start, static_cast<Site>(f.head.size()));
        return t;
    }
    case FamilyKind::Piecewise: {
        if (f.pieces.empty() || f.pieces.back().end) return std::nullopt;
        auto t = drift_tail(*f.pieces.back().family);
        if (t) t->start = std::max(t->start, f.pieces.back().begin);
        return t;
    }
    case FamilyKind::PowerLawLifetime:
        return std::nullopt;
    }
    return std::nullopt;
}

inline std::optional<LifetimeTail> lifetime_tail(const SequenceFamily& f) {
    switch (f.kind) {
    case FamilyKind::Constant:
        return LifetimeTail{Rate::constant(1.0 - f.value), detail::head_start(f, 0)};
    case FamilyKind::PowerLawLifetime:
        return LifetimeTail{Rate::power(f.scale, f.exponent), detail::head_start(f, 1)};
    case FamilyKind::Table: {
        if (!f.tail) return std::nullopt;
        auto t = lifetime_tail(*f.tail);
        if (t) t->start = std::max(t->start, static_cast<Site>(f.head.size()));
        return t;
    }
    case FamilyKind::Piecewise: {
        if (f.pieces.empty() || f.pieces.back().end) return std::nullopt;
        auto t = lifetime_tail(*f.pieces.back().family);
        if (t) t->start = std::max(t->start, f.pieces.back().begin);
        return t;
    }
    default:
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Occupied sites

enum class OccupiedKind { All, Periodic, Explicit, Geometric };

/// Initially occupied sites. Always contains the origin.
class OccupiedSet {
public:
    static OccupiedSet all() { return OccupiedSet(OccupiedKind::All); }

    /// Sites n with n mod period in `residues` (which must include 0).
    static OccupiedSet periodic(Site period, std::vector<Site> residues) {
        if (period < 1) throw DomainError("period must be positive");
        std::sort(residues.begin(), residues.end());
        residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
        if (residues.empty() || residues.front() != 0)
            throw PreconditionError("occupied set must contain the origin");
        if (residues.back() >= period) throw DomainError("residue outside [0, period)");
        OccupiedSet s(OccupiedKind::Periodic);
        s.period_ = period;
        s.sites_ = std::move(residues);
        return s;
    }
    static OccupiedSet arithmetic(Site step) { return periodic(step, {0}); }

    static OccupiedSet explicit_sites(std::vector<Site> sites) {
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        if (sites.empty() || sites.front() != 0) throw PreconditionError("occupied set must contain the origin");
        OccupiedSet s(OccupiedKind::Explicit);
        s.sites_ = std::move(sites);
        return s;
    }

    /// {0} together with every power of `base`.
    static OccupiedSet geometric(Site base) {
        if (base < 2) throw DomainError("geometric base must be at least 2");
        OccupiedSet s(OccupiedKind::Geometric);
        s.period_ = base;
        return s;
    }

    OccupiedKind kind() const { return kind_; }
    Site period() const { return period_; }
    const std::vector<Site>& listed() const { return sites_; }

    bool contains(Site n) const {
        if (n < 0) return false;
        switch (kind_) {
        case OccupiedKind::All:
            return true;
        case OccupiedKind::Periodic:
            return std::binary_search(sites_.begin(), sites_.end(), n % period_);
        case OccupiedKind::Explicit:
            return std::binary_search(sites_.begin(), sites_.end(), n);
        case OccupiedKind::Geometric: {
            if (n == 0 || n == 1) return true;
            while (n % period_ == 0) n /= period_;
            return n == 1;
        }
        }
        return false;
    }

    /// Smallest occupied site strictly greater than n.
    std::optional<Site> next_after(Site n) const {
        switch (kind_) {
        case OccupiedKind::All:
            return n + 1;
        case OccupiedKind::Periodic: {
            const Site base = (n + 1) - (n + 1) % period_;
            for (int round = 0; round < 2; ++round)
                for (Site r : sites_)
                    if (base + round * period_ + r > n) return base + round * period_ + r;
            return std::nullopt;
        }
        case OccupiedKind::Explicit: {
            auto it = std::upper_bound(sites_.begin(), sites_.end(), n);
            if (it == sites_.end()) return std::nullopt;
            return *it;
        }
        case OccupiedKind::Geometric: {
            if (n < 1) return 1;
            Site p = 1;
            while (p <= n) p *= period_;
            return p;
        }
        }
        return std::nullopt;
    }

    /// All occupied sites in [0, last].
    std::vector<Site> sites_upto(Site last) const {
        std::vector<Site> out;
        if (last < 0) return out;
        for (std::optional<Site> s = 0; s && *s <= last; s = next_after(*s)) out.push_back(*s);
        return out;
    }

    bool finite() const { return kind_ == OccupiedKind::Explicit; }
    bool bounded_gaps() const { return kind_ == OccupiedKind::All || kind_ == OccupiedKind::Periodic; }

    /// Largest distance between consecutive occupied sites (bounded-gap sets only).
    Site max_gap() const {
        if (kind_ == OccupiedKind::All) return 1;
        if (kind_ != OccupiedKind::Periodic) throw NotRepresentable("occupied set has unbounded gaps");
        Site gap = sites_.front() + period_ - sites_.back();
        for (std::size_t i = 1; i < sites_.size(); ++i) gap = std::max(gap, sites_[i] - sites_[i - 1]);
        return gap;
    }

    friend bool operator==(const OccupiedSet& a, const OccupiedSet& b) {
        return a.kind_ == b.kind_ && a.period_ == b.period_ && a.sites_ == b.sites_;
    }

private:
    explicit OccupiedSet(OccupiedKind k) : kind_(k) {}

    OccupiedKind kind_;
    Site period_ = 1;
    std::vector<Site> sites_;
};

// ---------------------------------------------------------------------------
// Model

/// Complete model definition. Immutable once validated; share freely across threads.
struct ModelSpec {
    SequenceFamily drift = SequenceFamily::constant(0.45);
    SequenceFamily lifetime = SequenceFamily::constant(1.0);
    OccupiedSet occupied = OccupiedSet::all();
    bool allow_critical_drift = false; ///< permits l_n = 1/2 at immortal sites

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

inline double eval_drift(const ModelSpec& spec, Site n) {
    if (!spec.occupied.contains(n)) throw DomainError("site " + std::to_string(n) + " is not occupied");
    return spec.drift.evaluate(n, Role::Drift).value;
}

inline double eval_lifetime(const ModelSpec& spec, Site n) {
    if (!spec.occupied.contains(n)) throw DomainError("site " + std::to_string(n) + " is not occupied");
    return spec.lifetime.evaluate(n, Role::Lifetime).value;
}

/// One past the last index a family can evaluate; nullopt when it is defined everywhere.
inline std::optional<Site> defined_extent(const SequenceFamily& f) {
    if (f.kind == FamilyKind::Table) return f.tail ? defined_extent(*f.tail) : std::optional<Site>(static_cast<Site>(f.head.size()));
    if (f.kind == FamilyKind::Piecewise && !f.pieces.empty()) {
        const auto& last = f.pieces.back();
        return last.end ? last.end : defined_extent(*last.family);
    }
    return std::nullopt;
}

/// Sites [0, extent) on which both parameter sequences are defined.
inline std::optional<Site> defined_extent(const ModelSpec& spec) {
    const auto a = defined_extent(spec.drift);
    const auto b = defined_extent(spec.lifetime);
    if (a && b) return std::min(*a, *b);
    return a ? a : b;
}

/// Index past which both tails are described symbolically (or a default scan bound when a tail is missing).
/// Never exceeds the defined extent of a black-box table.
inline Site symbolic_start(const ModelSpec& spec, Site fallback = 64) {
    const auto d = drift_tail(spec.drift);
    const auto p = lifetime_tail(spec.lifetime);
    Site s = std::max(d ? d->start : fallback, p ? p->start : fallback);
    if (spec.drift.kind == FamilyKind::StaircaseAbove) s = std::max<Site>(s, 2);
    if (const auto e = defined_extent(spec)) s = std::min(s, *e);
    return s;
}

/// Identically immortal: every p_n equals 1 (decided symbolically, not by sampling).
inline bool is_immortal(const ModelSpec& spec) {
    const auto tail = lifetime_tail(spec.lifetime);
    if (!tail || !tail->deficit.zero) return spec.occupied.finite() && [&] {
        for (Site s : spec.occupied.listed())
            if (spec.lifetime.evaluate(s, Role::Lifetime).value != 1.0) return false;
        return true;
    }();
    for (Site s : spec.occupied.sites_upto(tail->start - 1))
        if (spec.lifetime.evaluate(s, Role::Lifetime).value != 1.0) return false;
    return true;
}

struct ValidationReport {
    std::vector<std::string> warnings; ///< clipping events and similar non-fatal findings
};

/// Checks the model invariants. Throws PreconditionError on violation; reports clipping.
inline ValidationReport validate(const ModelSpec& spec, Site scan_limit = 4096) {
    ValidationReport report;
    if (!spec.occupied.contains(0)) throw PreconditionError("occupied set must contain the origin");
    Site last = spec.occupied.finite() ? spec.occupied.listed().back()
                                             : std::max(symbolic_start(spec), scan_limit);
    if (const auto e = defined_extent(spec); e && !spec.occupied.finite()) {
        if (*e < 1) throw PreconditionError("parameter tables must define site 0");
        last = std::min(last, *e - 1);
        report.warnings.push_back("parameters defined only on sites below " + std::to_string(*e));
    }
    std::size_t clipped = 0;
    Site first_clip = -1;
    for (Site n : spec.occupied.sites_upto(last)) {
        const Sample l = spec.drift.evaluate(n, Role::Drift);
        const Sample p = spec.lifetime.evaluate(n, Role::Lifetime);
        if (l.clipped || p.clipped) {
            if (clipped++ == 0) first_clip = n;
        }
        if (n == 0 && p.value <= 0.0) throw PreconditionError("p_0 must be positive or the process never starts");
        if (p.value == 1.0 && l.value == 0.5 && !spec.allow_critical_drift)
            throw PreconditionError("immortal particle with l_n = 1/2 at site " + std::to_string(n) +
                                    " (set allow_critical_drift to accept trivial survival)");
    }
    const auto dt = drift_tail(spec.drift);
    const auto lt = lifetime_tail(spec.lifetime);
    if (!spec.occupied.finite() && dt && lt && dt->sign == 0 && lt->deficit.zero && !spec.allow_critical_drift)
        throw PreconditionError("immortal tail with l_n = 1/2 (set allow_critical_drift to accept trivial survival)");
    if (clipped > 0)
        report.warnings.push_back(std::to_string(clipped) + " value(s) clipped into the admissible range, first at site " +
                                  std::to_string(first_clip));
    return report;
}

// ---------------------------------------------------------------------------
// Blocks

/// Pairwise disjoint blocks of L occupied sites each. Block k takes the first L
/// occupied sites of [k * width, (k + 1) * width).
class BlockPlan {
public:
    BlockPlan(OccupiedSet occupied, std::size_t L, Site width, Site gap_bound)
        : occupied_(std::move(occupied)), L_(L), width_(width), gap_bound_(gap_bound) {}

    std::size_t cardinality() const { return L_; }
    Site width() const { return width_; }
    /// sup_n (max B_{n+1} - min B_n)
    Site gap_bound() const { return gap_bound_; }

    std::vector<Site> block(std::size_t k) const {
        std::vector<Site> out;
        out.reserve(L_);
        const Site lo = static_cast<Site>(k) * width_;
        std::optional<Site> s = occupied_.contains(lo) ? std::optional<Site>(lo) : occupied_.next_after(lo);
        while (s && *s < lo + width_ && out.size() < L_) {
            out.push_back(*s);
            s = occupied_.next_after(*s);
        }
        return out;
    }

    /// Block index containing n, if any.
    std::optional<std::size_t> block_of(Site n) const {
        if (n < 0 || !occupied_.contains(n)) return std::nullopt;
        const auto k = static_cast<std::size_t>(n / width_);
        const auto b = block(k);
        if (std::find(b.begin(), b.end(), n) == b.end()) return std::nullopt;
        return k;
    }

    bool in_even_union(Site n) const {
        const auto k = block_of(n);
        return k && *k % 2 == 0;
    }
    bool in_odd_union(Site n) const {
        const auto k = block_of(n);
        return k && *k % 2 == 1;
    }

private:
    OccupiedSet occupied_;
    std::size_t L_;
    Site width_;
    Site gap_bound_;
};

/// Consecutive-interval blocks. Over a set with gaps at most m the interval
/// width is inflated to L*m, which always holds at least L occupied sites.
inline BlockPlan default_block_plan(const ModelSpec& spec, std::size_t L) {
    if (L == 0) throw DomainError("block cardinality must be positive");
    if (!spec.occupied.bounded_gaps())
        throw NotRepresentable("occupied set has unbounded gaps; no block plan with finite gap bound");
    const Site m = spec.occupied.max_gap();
    const Site width = static_cast<Site>(L) * m;
    BlockPlan probe(spec.occupied, L, width, 0);
    // The block pattern repeats with the occupancy period, so one period decides the sup.
    const Site period = spec.occupied.kind() == OccupiedKind::All ? 1 : spec.occupied.period();
    Site gap = 0;
    for (Site k = 0; k <= period; ++k) {
        const auto a = probe.block(static_cast<std::size_t>(k));
        const auto b = probe.block(static_cast<std::size_t>(k + 1));
        gap = std::max(gap, b.back() - a.front());
    }
    return BlockPlan(spec.occupied, L, width, gap);
}

} // namespace frog
