#pragma once

// Eventual behaviour of nonnegative sequences of the form
//     x_n = (scale * (log n)^log_power + loglog * log log n) / n^decay
// Every criterion in the library reduces to comparing such rates, so this is
// the common vocabulary between the model families and the classifiers.

#include <cmath>
#include <limits>
#include <optional>

namespace frog {

/// How much of a Rate is trustworthy.
enum class Precision {
    Exact,      ///< x_n equals the form for all large n
    Asymptotic, ///< x_n ~ form (ratio tends to 1); lower-order terms unknown
    Order,      ///< x_n ≍ form (ratio bounded above and below); constants unknown
};

inline Precision weaker(Precision a, Precision b) { return a > b ? a : b; }

struct Rate {
    bool zero = false;     ///< eventually identically zero
    double scale = 1.0;    ///< leading coefficient (> 0 unless zero)
    double decay = 0.0;    ///< polynomial exponent
    double log_power = 0.0;
    double loglog = 0.0;   ///< secondary additive coefficient, see header comment
    Precision precision = Precision::Exact;

    static Rate vanishing() {
        return Rate{true, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0, Precision::Exact};
    }
    static Rate constant(double c) { return c == 0.0 ? vanishing() : Rate{false, c, 0.0, 0.0, 0.0, Precision::Exact}; }
    static Rate power(double scale, double decay, Precision precision = Precision::Exact) {
        return Rate{false, scale, decay, 0.0, 0.0, precision};
    }
    static Rate inverse_log(double scale, double b, Precision precision = Precision::Order) {
        return Rate{false, scale, 0.0, -b, 0.0, precision};
    }
    static Rate log_over_n(double c, double loglog_coeff, Precision precision = Precision::Exact) {
        return Rate{false, c, 1.0, 1.0, loglog_coeff, precision};
    }

    Rate with_precision(Precision p) const {
        Rate r = *this;
        r.precision = weaker(r.precision, p);
        return r;
    }

    bool tends_to_zero() const { return zero || decay > 0.0 || (decay == 0.0 && log_power < 0.0); }
    bool is_constant() const { return !zero && decay == 0.0 && log_power == 0.0; }
};

/// Orders rates by speed of decay: +1 if a decays strictly faster than b, 0 same order, -1 slower.
inline int compare_decay(const Rate& a, const Rate& b) {
    if (a.zero || b.zero) return a.zero == b.zero ? 0 : (a.zero ? 1 : -1);
    if (a.decay != b.decay) return a.decay > b.decay ? 1 : -1;
    if (a.log_power != b.log_power) return a.log_power < b.log_power ? 1 : -1;
    return 0;
}

/// Rate of x_n^power.
inline Rate pow(const Rate& r, double power) {
    if (r.zero) return r;
    Rate out = r;
    out.scale = std::pow(r.scale, power);
    out.decay = r.decay * power;
    out.log_power = r.log_power * power;
    out.loglog = 0.0;
    if (r.loglog != 0.0) out.precision = weaker(r.precision, Precision::Asymptotic);
    return out;
}

namespace detail {
inline Precision combined_precision(const Rate& a, const Rate& b) {
    Precision p = weaker(a.precision, b.precision);
    if (a.loglog != 0.0 || b.loglog != 0.0) p = weaker(p, Precision::Asymptotic);
    return p;
}
} // namespace detail

/// Rate of x_n * y_n.
inline Rate product(const Rate& a, const Rate& b) {
    if (a.zero) return a;
    if (b.zero) return b;
    return Rate{false, a.scale * b.scale, a.decay + b.decay, a.log_power + b.log_power, 0.0,
                detail::combined_precision(a, b)};
}

/// Rate of x_n / y_n (y not vanishing).
inline Rate quotient(const Rate& a, const Rate& b) {
    if (a.zero) return a;
    return Rate{false, a.scale / b.scale, a.decay - b.decay, a.log_power - b.log_power, 0.0,
                detail::combined_precision(a, b)};
}

/// Rate of n^k * x_n.
inline Rate times_power_of_n(const Rate& r, double k) {
    if (r.zero) return r;
    Rate out = r;
    out.decay -= k;
    return out;
}

/// Whether sum_n x_n^power converges. Valid over any subset of positive lower density.
inline bool summable(const Rate& r, double power = 1.0) {
    if (r.zero) return true;
    const double d = r.decay * power;
    const double k = r.log_power * power;
    return d > 1.0 || (d == 1.0 && k < -1.0);
}

/// Limit of n * x_n / log n.
struct ScaledLimit {
    enum class Kind { Zero, Finite, Infinite, Unknown };
    Kind kind = Kind::Unknown;
    double value = 0.0;
};

inline ScaledLimit n_over_log_limit(const Rate& r) {
    using K = ScaledLimit::Kind;
    if (r.zero) return {K::Zero, 0.0};
    const double d = r.decay - 1.0;
    const double k = r.log_power - 1.0;
    if (d > 0.0 || (d == 0.0 && k < 0.0)) return {K::Zero, 0.0};
    if (d < 0.0 || (d == 0.0 && k > 0.0)) return {K::Infinite, 0.0};
    // same order as log n / n: the limit is the leading constant, if known
    if (r.precision == Precision::Order) return {K::Unknown, 0.0};
    return {K::Finite, r.scale};
}

} // namespace frog
