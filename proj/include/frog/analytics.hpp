#pragma once

// Closed-form hitting probabilities of a mortal nearest-neighbour walk and the
// series/product tests that the survival criteria reduce to.

#include "frog/asymptotics.hpp"
#include "frog/errors.hpp"
#include "frog/model.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace frog {

/// One-step law of a walker: survives a step w.p. p, then jumps left w.p. l, right w.p. 1 - l.
struct StepLaw {
    double p = 1.0;
    double l = 0.5;

    void check() const {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("survival probability outside [0,1]");
        if (!(l > 0.0 && l < 1.0)) throw DomainError("left-jump probability outside (0,1)");
    }
    double left_mass() const { return p * l; }
    double right_mass() const { return p * (1.0 - l); }
    double death_mass() const { return 1.0 - p; }
};

enum class Direction { Left, Right };

/// 1 - 4 p^2 l (1 - l), written as (2pl - 1)^2 + 4p(1 - p)l so that it keeps
/// full relative precision when p -> 1 and l -> 1/2.
inline double first_passage_radicand(const StepLaw& law) {
    const double a = 2.0 * law.p * law.l - 1.0;
    return a * a + 4.0 * law.p * (1.0 - law.p) * law.l;
}

/// Probability of ever reaching the neighbour on the left. Rationalised form
/// 2pl / (1 + sqrt(radicand)) has no cancellation anywhere in the domain.
inline double first_passage_left(const StepLaw& law) {
    law.check();
    return 2.0 * law.p * law.l / (1.0 + std::sqrt(first_passage_radicand(law)));
}

/// Probability of ever reaching the neighbour on the right.
inline double first_passage_right(const StepLaw& law) {
    law.check();
    return 2.0 * law.p * (1.0 - law.l) / (1.0 + std::sqrt(first_passage_radicand(law)));
}

inline double first_passage(const StepLaw& law, Direction d) {
    return d == Direction::Left ? first_passage_left(law) : first_passage_right(law);
}

inline StepLaw step_law(const ModelSpec& spec, Site n) { return StepLaw{eval_lifetime(spec, n), eval_drift(spec, n)}; }

/// P(walker n, once active, ever visits the origin).
inline double prob_visit_origin_given_active(const ModelSpec& spec, Site n) {
    if (n <= 0) throw DomainError("origin-visit probability needs a site n >= 1");
    return std::pow(first_passage_left(step_law(spec, n)), static_cast<double>(n));
}

/// P(walker n, once active, ever visits site m > n).
inline double prob_reach_right_given_active(const ModelSpec& spec, Site n, Site m) {
    if (m <= n) throw DomainError("target site must lie to the right of the home site");
    return std::pow(first_passage_right(step_law(spec, n)), static_cast<double>(m - n));
}

/// P(R >= k) for the maximal rightward excursion R of a walker with this law.
inline double max_right_excursion_tail(const StepLaw& law, std::int64_t k) {
    if (k < 0) throw DomainError("excursion length must be nonnegative");
    if (k == 0) return 1.0;
    return std::pow(first_passage_right(law), static_cast<double>(k));
}

// ---------------------------------------------------------------------------
// Series and products

/// Finite prefix plus an optional symbolic description of the rest.
struct SymbolicSequence {
    std::vector<double> prefix; ///< terms with index 1 .. prefix.size()
    std::optional<Rate> tail;   ///< eventual behaviour beyond the prefix
};

enum class SeriesStatus { Converges, Diverges, Inconclusive };

inline const char* to_string(SeriesStatus s) {
    switch (s) {
    case SeriesStatus::Converges: return "Converges";
    case SeriesStatus::Diverges: return "Diverges";
    case SeriesStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct SeriesVerdict {
    SeriesStatus status = SeriesStatus::Inconclusive;
    double partial_sum = 0.0;
    std::size_t terms_used = 0;
    std::string justification;
};

namespace sumexp_rule {
inline constexpr const char* kBounded = "liminf n a_n < inf";
inline constexpr const char* kBelowLog = "a_n <= log(n)/n eventually";
inline constexpr const char* kAboveLog = "a_n >= (log n + b log log n)/n eventually, b > 1";
} // namespace sumexp_rule

namespace detail {

inline SeriesVerdict rule_verdict(SeriesStatus s, const char* rule) { return SeriesVerdict{s, 0.0, 0, rule}; }

/// Decides sum (1 - a_n)^n from the eventual form of a_n.
inline SeriesVerdict sumexp_tail(const Rate& a) {
    using S = SeriesStatus;
    using namespace frog::sumexp_rule;
    if (a.zero) return rule_verdict(S::Diverges, kBelowLog);
    if (a.decay > 1.0 || (a.decay == 1.0 && a.log_power < 0.0)) return rule_verdict(S::Diverges, kBounded);
    if (a.decay < 1.0) return rule_verdict(S::Converges, kAboveLog);
    // decay == 1
    if (a.log_power == 0.0) {
        if (a.loglog <= 0.0) return rule_verdict(S::Diverges, kBounded);
        return rule_verdict(S::Diverges, kBelowLog);
    }
    if (a.log_power < 1.0) return rule_verdict(S::Diverges, kBelowLog);
    if (a.log_power > 1.0) return rule_verdict(S::Converges, kAboveLog);
    // a_n of order log(n)/n: the leading constant decides, then the log log term
    if (a.precision == Precision::Order) return rule_verdict(S::Inconclusive, "a_n of order log(n)/n, constant unknown");
    if (a.scale < 1.0) return rule_verdict(S::Diverges, kBelowLog);
    if (a.scale > 1.0) return rule_verdict(S::Converges, kAboveLog);
    if (a.precision != Precision::Exact)
        return rule_verdict(S::Inconclusive, "a_n ~ log(n)/n, lower-order terms unknown");
    if (a.loglog > 1.0) return rule_verdict(S::Converges, kAboveLog);
    if (a.loglog <= 0.0) return rule_verdict(S::Diverges, kBelowLog);
    return rule_verdict(S::Inconclusive, "a_n = (log n + b log log n)/n with 0 < b <= 1");
}

} // namespace detail

/// Classifies W = sum_{n>=1} (1 - a_n)^n. Only symbolic tail rules produce a
/// verdict; the prefix contributes a numeric partial sum for diagnostics.
inline SeriesVerdict classify_sumexp(const SymbolicSequence& a) {
    double partial = 0.0;
    for (std::size_t i = 0; i < a.prefix.size(); ++i) {
        const double v = a.prefix[i];
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("sumexp term a_" + std::to_string(i + 1) + " outside [0,1]");
        partial += std::pow(1.0 - v, static_cast<double>(i + 1));
    }
    if (a.tail && !a.tail->zero && !(a.tail->scale > 0.0))
        throw DomainError("sumexp tail must be nonnegative");
    if (a.tail && a.tail->is_constant() && a.tail->scale > 1.0) throw DomainError("sumexp tail exceeds 1");
    SeriesVerdict v = a.tail ? detail::sumexp_tail(*a.tail)
                             : SeriesVerdict{SeriesStatus::Inconclusive, 0.0, 0, "no tail rule"};
    v.partial_sum = partial;
    v.terms_used = a.prefix.size();
    return v;
}

/// min over 1 <= n <= N of n (1 - log(n)/n)^n; the constant c with (1 - q_n)^n >= c/n, measured.
inline double sumexp_constant_diagnostic(std::int64_t N) {
    long double best = 1.0L;
    for (std::int64_t n = 2; n <= N; ++n) {
        const long double x = static_cast<long double>(n);
        const long double v = std::exp(std::log(x) + x * std::log1p(-std::log(x) / x));
        if (v < best) best = v;
    }
    return static_cast<double>(best);
}

struct ProductVerdict {
    std::optional<bool> positive; ///< nullopt when no tail rule decides
    std::string note;
};

/// Whether prod_i (1 - alpha_i)^{k_i} > 0, via the equivalent series sum k_i alpha_i < inf.
/// Multiplicity tails are rates with nonpositive decay (k_i ~ c i^g is Rate::power(c, -g)).
inline ProductVerdict product_positive(const SymbolicSequence& alpha, const SymbolicSequence& k) {
    for (std::size_t i = 0; i < alpha.prefix.size(); ++i) {
        const double a = alpha.prefix[i];
        const double ki = i < k.prefix.size() ? k.prefix[i] : 1.0;
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("alpha_" + std::to_string(i + 1) + " outside [0,1)");
        if (a == 1.0 && ki >= 1.0) return {false, "zero factor at index " + std::to_string(i + 1)};
    }
    for (double ki : k.prefix)
        if (ki < 0.0) throw DomainError("multiplicities must be nonnegative");
    if (!alpha.tail || !k.tail) return {std::nullopt, "no tail rule"};
    if (k.tail->zero || k.tail->decay > 0.0) throw DomainError("multiplicity tail must satisfy k_i >= 1 eventually");
    if (alpha.tail->is_constant() && alpha.tail->scale >= 1.0) return {false, "factors eventually zero"};
    const bool converges = summable(product(*alpha.tail, *k.tail));
    return {converges, converges ? "sum k_i alpha_i converges" : "sum k_i alpha_i diverges"};
}

/// Running-minimum drop points of h(n) = min_{k <= n} (2 l_k - 1)/l_k over occupied sites <= horizon.
/// The optimal chain for the sequence test is formed by exactly these sites.
inline std::vector<Site> canonical_test_sequence(const ModelSpec& spec, Site horizon) {
    std::vector<Site> out;
    double h = 0.0;
    for (Site n : spec.occupied.sites_upto(horizon)) {
        const double l = eval_drift(spec, n);
        if (!(l > 0.5))
            throw PreconditionError("canonical sequence needs left drift; l_" + std::to_string(n) + " <= 1/2");
        const double v = (2.0 * l - 1.0) / l;
        if (out.empty() || v < h) {
            out.push_back(n);
            h = v;
        }
    }
    return out;
}

} // namespace frog
