#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "morrey/rational.hpp"

namespace morrey {

/// The 9-tuple (d; sigma1,u1,p1,q1; sigma2,u2,p2,q2) driving the decay-regime
/// formulas. S is double (boundary equality at 1e-12 relative tolerance) or
/// Rational (exact mode, reaches the measure-zero Boundary kind cleanly).
/// q1, q2 are stored but never affect classification.
template <typename S>
struct BasicParamTuple {
    int d = 1;
    S sigma1{};
    S sigma2{};
    S u1{}, p1{}, q1{};
    S u2{}, p2{}, q2{};
};

using ParamTuple = BasicParamTuple<double>;
using RationalParamTuple = BasicParamTuple<Rational>;

enum class RegimeKind { NotCompact, Classical, AlphaGap, Boundary };

inline const char* to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::NotCompact: return "NotCompact";
        case RegimeKind::Classical: return "Classical";
        case RegimeKind::AlphaGap: return "AlphaGap";
        case RegimeKind::Boundary: return "Boundary";
    }
    return "?";
}

/// Classification outcome. `exponent` is delta = (sigma1-sigma2)/d for
/// Classical/Boundary and alpha for AlphaGap; `gap` carries the epsilon-gap
/// caveat where the upper decay exponent is only proven up to epsilon.
struct Regime {
    RegimeKind kind = RegimeKind::NotCompact;
    double exponent = 0.0;
    std::optional<std::string> gap;
};

namespace detail {

template <typename S>
constexpr bool is_rational_v = std::is_same_v<S, Rational>;

template <typename S>
S scalar_inv(const S& x) {
    if constexpr (is_rational_v<S>)
        return x.reciprocal();
    else
        return 1.0 / x;
}

template <typename S>
S scalar_ratio(long long num, long long den) {
    if constexpr (is_rational_v<S>)
        return Rational(num, den);
    else
        return static_cast<double>(num) / static_cast<double>(den);
}

template <typename S>
bool scalar_finite_positive(const S& x) {
    if constexpr (is_rational_v<S>)
        return !x.is_infinite() && Rational(0) < x;
    else
        return std::isfinite(x) && x > 0.0;
}

template <typename S>
bool scalar_positive(const S& x) {  // +inf allowed
    if constexpr (is_rational_v<S>)
        return Rational(0) < x;
    else
        return x > 0.0;
}

/// Boundary equality: exact for rationals, 1e-12 relative for doubles.
template <typename S>
bool boundary_equal(const S& a, const S& b) {
    if constexpr (is_rational_v<S>) {
        return a == b;
    } else {
        const double scale = std::max(std::abs(a), std::abs(b));
        return std::abs(a - b) <= 1e-12 * scale;
    }
}

template <typename S>
double scalar_to_double(const S& x) {
    if constexpr (is_rational_v<S>)
        return x.to_double();
    else
        return x;
}

}  // namespace detail

template <typename S>
void validate(const BasicParamTuple<S>& t) {
    using namespace detail;
    if (t.d < 1) throw std::invalid_argument("ParamTuple: d >= 1 required");
    const bool ok = scalar_finite_positive(t.p1) && scalar_finite_positive(t.u1) &&
                    scalar_finite_positive(t.p2) && scalar_finite_positive(t.u2) &&
                    !(t.u1 < t.p1) && !(t.u2 < t.p2) && scalar_positive(t.q1) &&
                    scalar_positive(t.q2);
    if (!ok) throw std::invalid_argument("ParamTuple: need 0 < p_i <= u_i < inf, q_i > 0");
}

/// The three competing terms of the compactness condition and the boundary
/// value where the Classical and AlphaGap regimes meet.
template <typename S>
struct CompactnessBreakdown {
    S delta;      // (sigma1 - sigma2)/d
    S u_term;     // 1/u1 - 1/u2
    S p_term;     // (p1/u1)(1/p1 - 1/p2)
    S threshold;  // max{0, u_term, p_term}
    S boundary;   // 1/p1 - 1/p2
};

template <typename S>
CompactnessBreakdown<S> compactness_breakdown(const BasicParamTuple<S>& t) {
    using namespace detail;
    validate(t);
    CompactnessBreakdown<S> b{};
    const S inv_d = scalar_ratio<S>(1, t.d);
    b.delta = (t.sigma1 - t.sigma2) * inv_d;
    b.u_term = scalar_inv(t.u1) - scalar_inv(t.u2);
    b.boundary = scalar_inv(t.p1) - scalar_inv(t.p2);
    b.p_term = (t.p1 / t.u1) * b.boundary;
    const S zero = scalar_ratio<S>(0, 1);
    b.threshold = std::max({zero, b.u_term, b.p_term});
    return b;
}

/// Compactness of the embedding: delta strictly above all three terms.
template <typename S>
bool is_compact(const BasicParamTuple<S>& t) {
    const auto b = compactness_breakdown(t);
    return b.threshold < b.delta;
}

/// Full regime classification. The four kinds partition parameter space:
///   NotCompact; Classical k^{-delta}; AlphaGap (slower decay, exponent
///   alpha = u1/(u1-p1) (delta - p_term)); Boundary where they meet.
template <typename S>
Regime classify(const BasicParamTuple<S>& t) {
    using namespace detail;
    const auto b = compactness_breakdown(t);
    Regime r;
    if (!(b.threshold < b.delta)) {
        r.kind = RegimeKind::NotCompact;
        r.exponent = 0.0;
        return r;
    }
    const S zero = scalar_ratio<S>(0, 1);
    if (!(std::max(zero, b.u_term) < b.p_term)) {
        // max term is 0 or the u-term: classical exponent in all such cases
        r.kind = RegimeKind::Classical;
        r.exponent = scalar_to_double(b.delta);
        return r;
    }
    // Here p1 < p2 and p2/u2 > p1/u1 (proper Morrey source, p1 < u1).
    if (boundary_equal(b.delta, b.boundary)) {
        r.kind = RegimeKind::Boundary;
        r.exponent = scalar_to_double(b.delta);
        r.gap = "two-sided: k^{-delta} lower, k^{-delta+eps} upper for every eps > 0";
        return r;
    }
    if (b.boundary < b.delta) {
        r.kind = RegimeKind::Classical;
        r.exponent = scalar_to_double(b.delta);
        return r;
    }
    const S alpha = (t.u1 / (t.u1 - t.p1)) * (b.delta - b.p_term);
    r.kind = RegimeKind::AlphaGap;
    r.exponent = scalar_to_double(alpha);
    r.gap = "lower bound k^{-alpha} proven; upper decay alpha-eps for every eps > 0 "
            "(alpha conjectured sharp)";
    return r;
}

/// Function-space smoothness maps to sequence smoothness by sigma = s + d/2;
/// differences are unaffected, so classification just shifts both sides.
template <typename S>
Regime classify_function_space(int d, const S& s1, const S& s2, const S& u1, const S& p1,
                               const S& q1, const S& u2, const S& p2, const S& q2) {
    const S half_d = detail::scalar_ratio<S>(d, 2);
    BasicParamTuple<S> t{d, s1 + half_d, s2 + half_d, u1, p1, q1, u2, p2, q2};
    return classify(t);
}

/// Embedding into L_r(Omega): target indices p2 = u2 = r for finite r.
/// r = inf is the L_inf / C(Omega) target: compact iff s > d/u, AlphaGap for
/// d/u < s < d/p (alpha with the 1/r term dropped), Classical above.
template <typename S>
Regime classify_into_lr(int d, const S& s, const S& u, const S& p, const S& q, const S& r) {
    using namespace detail;
    const S zero = scalar_ratio<S>(0, 1);
    const bool r_infinite = [&] {
        if constexpr (is_rational_v<S>)
            return r.is_infinite();
        else
            return std::isinf(r);
    }();
    if (!r_infinite) {
        const S one = scalar_ratio<S>(1, 1);
        return classify_function_space(d, s, zero, u, p, q, r, r, one);
    }
    if (!scalar_finite_positive(u) || !scalar_finite_positive(p) || u < p)
        throw std::invalid_argument("classify_into_lr: need 0 < p <= u < inf");
    Regime out;
    const S s_over_d = s * scalar_ratio<S>(1, d);
    const S inv_u = scalar_inv(u);
    if (!(inv_u < s_over_d)) return out;  // NotCompact: needs s > d/u
    if (p == u) {
        out.kind = RegimeKind::Classical;
        out.exponent = scalar_to_double(s_over_d);
        return out;
    }
    const S inv_p = scalar_inv(p);
    if (boundary_equal(s_over_d, inv_p)) {
        out.kind = RegimeKind::Boundary;
        out.exponent = scalar_to_double(s_over_d);
        out.gap = "two-sided: k^{-s/d} lower, k^{-s/d+eps} upper for every eps > 0";
        return out;
    }
    if (inv_p < s_over_d) {
        out.kind = RegimeKind::Classical;
        out.exponent = scalar_to_double(s_over_d);
        return out;
    }
    const S alpha = (u / (u - p)) * (s_over_d - inv_u);
    out.kind = RegimeKind::AlphaGap;
    out.exponent = scalar_to_double(alpha);
    out.gap = "lower bound k^{-alpha} proven; upper decay alpha-eps for every eps > 0 "
              "(alpha conjectured sharp)";
    return out;
}

}  // namespace morrey
