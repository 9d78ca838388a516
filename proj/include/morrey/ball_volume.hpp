#pragma once

#include <cmath>
#include <stdexcept>

#include "morrey/rational.hpp"

namespace morrey {

/// log2 of the Lebesgue volume of { x in R^D : ||x||_p <= r }, with
/// log2(r) passed in. Closed form (2r)^D Gamma(1+1/p)^D / Gamma(1+D/p),
/// evaluated through lgamma so huge D stays finite.
inline double log2_ball_volume_lp(long long D, const Rational& p, double log2_r) {
    if (D < 1) throw std::invalid_argument("ball volume: D >= 1 required");
    if (!(Rational(0) < p)) throw std::invalid_argument("ball volume: p > 0 required");
    if (p.is_infinite()) return static_cast<double>(D) * (1.0 + log2_r);
    const double inv_p = p.reciprocal().to_double();
    const double ln2 = std::log(2.0);
    const double log2_gamma_one = std::lgamma(1.0 + inv_p) / ln2;
    const double log2_gamma_big = std::lgamma(1.0 + static_cast<double>(D) * inv_p) / ln2;
    return static_cast<double>(D) * (1.0 + log2_r + log2_gamma_one) - log2_gamma_big;
}

inline double ball_volume_lp(long long D, const Rational& p, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball volume: r > 0 required");
    return std::exp2(log2_ball_volume_lp(D, p, std::log2(r)));
}

/// Volumetric entropy lower bound for id: X -> Y on R^D where the source
/// unit ball contains an l_{src_p} ball of radius src_r and the target unit
/// ball is contained in an l_{tgt_p} ball of radius tgt_r:
///   e_k >= 2^{-(k-1)/D} (vol B_src / vol B_tgt)^{1/D}.
inline double volumetric_lower_generic(long long D, const Rational& src_p, double src_log2_r,
                                       const Rational& tgt_p, double tgt_log2_r, long long k) {
    if (k < 1) throw std::invalid_argument("volumetric bound: k >= 1 required");
    const double vol_gap = (log2_ball_volume_lp(D, src_p, src_log2_r) -
                            log2_ball_volume_lp(D, tgt_p, tgt_log2_r)) /
                           static_cast<double>(D);
    const double packing = -static_cast<double>(k - 1) / static_cast<double>(D);
    return std::exp2(packing + vol_gap);
}

}  // namespace morrey
