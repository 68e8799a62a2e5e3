#pragma once

// Brute-force ground truth: a time-indexed DP for first passage of a single
// mortal walker, and exact enumeration of tiny frog systems in rational
// arithmetic. Both are deliberately independent of the closed forms.

#include "frog/analytics.hpp"
#include "frog/errors.hpp"
#include "frog/model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <charconv>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace frog {

struct DpResult {
    double probability = 0.0; ///< P(hit target within horizon)
    double pruned_mass = 0.0; ///< mass dropped by the negligible-entry cutoff (an upper bound on the error)
    std::int64_t steps = 0;   ///< ticks actually iterated before the mass ran out
};

struct DpOptions {
    double negligible = 1e-30;             ///< entries below this are dropped and accounted in pruned_mass
    std::int64_t max_window = 1LL << 24;   ///< cap on 2 * horizon + 1 cells
};

/// P(a walker with `law` reaches the site `distance` steps away in direction `dir` within `horizon` ticks).
inline DpResult dp_first_passage_detailed(const StepLaw& law, std::int64_t distance, std::int64_t horizon,
                                          Direction dir = Direction::Left, const DpOptions& opts = {}) {
    law.check();
    if (distance < 1) throw DomainError("distance must be at least 1");
    if (horizon < distance) throw DomainError("horizon must be at least the distance");
    if (2 * horizon + 1 > opts.max_window) throw ResourceError("DP window of " + std::to_string(2 * horizon + 1) + " cells exceeds the cap");

    // Orient so the target is always on the left: position x in [-horizon, horizon], target -distance.
    const double toward = law.p * (dir == Direction::Left ? law.l : 1.0 - law.l);
    const double away = law.p * (dir == Direction::Left ? 1.0 - law.l : law.l);
    const std::int64_t off = horizon;
    std::vector<double> cur(static_cast<std::size_t>(2 * horizon + 1), 0.0), next(cur.size(), 0.0);
    cur[static_cast<std::size_t>(off)] = 1.0;
    std::int64_t lo = 0, hi = 0; // live positions
    long double hit = 0.0L, pruned = 0.0L;
    DpResult out;
    for (std::int64_t t = 0; t < horizon && lo <= hi; ++t) {
        const std::int64_t remaining = horizon - t - 1; // ticks left after this one
        std::int64_t nlo = hi + 2, nhi = lo - 2;
        for (std::int64_t x = lo; x <= hi; ++x) {
            const double m = cur[static_cast<std::size_t>(x + off)];
            if (m == 0.0) continue;
            cur[static_cast<std::size_t>(x + off)] = 0.0;
            const std::int64_t left = x - 1, right = x + 1;
            if (left == -distance) {
                hit += static_cast<long double>(m * toward);
            } else {
                next[static_cast<std::size_t>(left + off)] += m * toward;
                nlo = std::min(nlo, left);
                nhi = std::max(nhi, left);
            }
            next[static_cast<std::size_t>(right + off)] += m * away;
            nlo = std::min(nlo, right);
            nhi = std::max(nhi, right);
        }
        // Drop positions that cannot reach the target in the remaining ticks (exact) and negligible entries.
        lo = hi = 0;
        bool any = false;
        for (std::int64_t x = nlo; x <= nhi; ++x) {
            double& m = next[static_cast<std::size_t>(x + off)];
            if (m == 0.0) continue;
            if (x + distance > remaining) {
                m = 0.0;
                continue;
            }
            if (m < opts.negligible) {
                pruned += m;
                m = 0.0;
                continue;
            }
            if (!any) lo = x;
            hi = x;
            any = true;
        }
        std::swap(cur, next);
        out.steps = t + 1;
        if (!any) {
            lo = 1;
            hi = 0;
        }
    }
    out.probability = static_cast<double>(hit);
    out.pruned_mass = static_cast<double>(pruned);
    return out;
}

inline double dp_first_passage(const StepLaw& law, std::int64_t distance, std::int64_t horizon,
                               Direction dir = Direction::Left) {
    return dp_first_passage_detailed(law, distance, horizon, dir).probability;
}

// ---------------------------------------------------------------------------
// Exact enumeration

using Rational = boost::multiprecision::cpp_rational;

struct EnumerationOptions {
    std::size_t max_sites = 4;
    std::int64_t max_steps_cap = 12;
    std::size_t max_states = 400000;
};

struct EnumerationResult {
    std::int64_t steps = 0;
    std::vector<Site> sites;                          ///< occupied sites with p_n > 0; walker i lives at sites[i]
    std::map<std::uint32_t, Rational> activation;     ///< bitmask of activated walkers at the end -> probability
    std::vector<Rational> origin_visits_at_least;     ///< [k] = P(at least k origin visits by the end)
    std::vector<Rational> all_dead_by;                ///< [t] = P(no walker alive and active at time t, all activated ones dead)
    std::vector<Rational> activated_by;               ///< [i] = P(walker i activated by the end)
    Rational total_mass;
    std::size_t peak_states = 0;

    double p_activated(std::size_t i) const { return activated_by.at(i).convert_to<double>(); }
};

namespace detail {

/// The shortest decimal that round-trips to x, as an exact fraction (0.7 -> 7/10).
inline Rational decimal_rational(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    const std::string text(buf, res.ptr);
    const auto e = text.find('e');
    std::string digits;
    for (char c : text.substr(0, e))
        if (c != '.') digits.push_back(c);
    // mantissa d.ddd has digits.size() - 1 fractional digits (a leading '-' is not a digit)
    const bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(0, 1);
    const int exp10 = std::stoi(text.substr(e + 1)) - static_cast<int>(digits.size() - 1);
    Rational r{boost::multiprecision::cpp_int(digits)};
    const boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), std::abs(exp10));
    if (exp10 >= 0)
        r *= scale;
    else
        r /= scale;
    return neg ? Rational(-r) : r;
}

inline constexpr int kDormant = 1000;
inline constexpr int kDead = 1001;

struct EnumState {
    std::array<int, 4> pos{}; ///< position, kDormant or kDead
    int visits = 0;
    friend bool operator<(const EnumState& a, const EnumState& b) {
        if (a.pos != b.pos) return a.pos < b.pos;
        return a.visits < b.visits;
    }
};

} // namespace detail

/// Exact law of the frog process on a tiny occupied set, up to `max_steps` ticks.
/// Parameters enter as their shortest decimal form, which keeps the fractions small.
/// Conventions match the simulator: every live active walker moves each tick,
/// a dormant walker activates at the end of the tick in which a live walker
/// stands on its site, and an origin visit is a (walker, t >= 1) with position 0.
inline EnumerationResult enumerate_small_activation(const ModelSpec& spec, std::int64_t max_steps,
                                                    const EnumerationOptions& opts = {}) {
    if (!spec.occupied.finite()) throw PreconditionError("enumeration needs a finite occupied set");
    if (spec.occupied.listed().size() > opts.max_sites || spec.occupied.listed().size() > 4)
        throw PreconditionError("enumeration supports at most " + std::to_string(std::min<std::size_t>(opts.max_sites, 4)) + " sites");
    if (max_steps < 0 || max_steps > opts.max_steps_cap)
        throw PreconditionError("enumeration supports at most " + std::to_string(opts.max_steps_cap) + " steps");
    validate(spec);
    std::vector<Site> sites; // sites with p_n = 0 hold no particle
    for (Site n : spec.occupied.listed())
        if (eval_lifetime(spec, n) > 0.0) sites.push_back(n);

    const std::size_t W = sites.size();
    std::vector<Rational> die(W), left(W), right(W);
    for (std::size_t i = 0; i < W; ++i) {
        const Rational p = detail::decimal_rational(eval_lifetime(spec, sites[i]));
        const Rational l = detail::decimal_rational(eval_drift(spec, sites[i]));
        die[i] = 1 - p;
        left[i] = p * l;
        right[i] = p * (1 - l);
    }

    using detail::kDead;
    using detail::kDormant;
    detail::EnumState init;
    init.pos.fill(kDead);
    for (std::size_t i = 0; i < W; ++i) init.pos[i] = kDormant;
    init.pos[0] = static_cast<int>(sites[0]);

    EnumerationResult res;
    res.steps = max_steps;
    res.sites = sites;
    res.all_dead_by.assign(static_cast<std::size_t>(max_steps) + 1, Rational(0));

    auto all_dead = [&](const detail::EnumState& s) {
        for (std::size_t i = 0; i < W; ++i)
            if (s.pos[i] != kDead && s.pos[i] != kDormant) return false;
        return true;
    };

    std::map<detail::EnumState, Rational> layer{{init, Rational(1)}};
    for (const auto& [s, m] : layer)
        if (all_dead(s)) res.all_dead_by[0] += m;

    for (std::int64_t t = 1; t <= max_steps; ++t) {
        std::map<detail::EnumState, Rational> next;
        for (const auto& [s, mass] : layer) {
            std::vector<std::size_t> movers;
            for (std::size_t i = 0; i < W; ++i)
                if (s.pos[i] != kDead && s.pos[i] != kDormant) movers.push_back(i);
            std::size_t combos = 1;
            for (std::size_t k = 0; k < movers.size(); ++k) combos *= 3;
            for (std::size_t c = 0; c < combos; ++c) {
                detail::EnumState n = s;
                Rational w = mass;
                std::size_t code = c;
                for (std::size_t i : movers) {
                    const std::size_t choice = code % 3;
                    code /= 3;
                    if (choice == 0) {
                        w *= die[i];
                        n.pos[i] = kDead;
                    } else if (choice == 1) {
                        w *= left[i];
                        n.pos[i] -= 1;
                    } else {
                        w *= right[i];
                        n.pos[i] += 1;
                    }
                }
                if (w == 0) continue;
                for (std::size_t i : movers)
                    if (n.pos[i] == 0) ++n.visits;
                for (std::size_t j = 0; j < W; ++j) {
                    if (s.pos[j] != kDormant) continue;
                    for (std::size_t i : movers)
                        if (n.pos[i] == static_cast<int>(sites[j])) {
                            n.pos[j] = static_cast<int>(sites[j]);
                            break;
                        }
                }
                next[n] += w;
            }
        }
        layer = std::move(next);
        res.peak_states = std::max(res.peak_states, layer.size());
        if (layer.size() > opts.max_states)
            throw ResourceError("enumeration exceeded " + std::to_string(opts.max_states) + " states");
        for (const auto& [s, m] : layer)
            if (all_dead(s)) res.all_dead_by[static_cast<std::size_t>(t)] += m;
    }

    res.activated_by.assign(W, Rational(0));
    int max_visits = 0;
    for (const auto& [s, m] : layer) max_visits = std::max(max_visits, s.visits);
    res.origin_visits_at_least.assign(static_cast<std::size_t>(max_visits) + 1, Rational(0));
    for (const auto& [s, m] : layer) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < W; ++i)
            if (s.pos[i] != kDormant) {
                mask |= 1u << i;
                res.activated_by[i] += m;
            }
        res.activation[mask] += m;
        for (int k = 0; k <= s.visits; ++k) res.origin_visits_at_least[static_cast<std::size_t>(k)] += m;
        res.total_mass += m;
    }
    return res;
}

} // namespace frog
