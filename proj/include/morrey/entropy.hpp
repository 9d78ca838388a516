#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "morrey/ball_volume.hpp"
#include "morrey/operators.hpp"
#include "morrey/rng.hpp"

namespace morrey {

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInfUpper = std::numeric_limits<double>::infinity();

/// Certified bracket lower <= e_k <= upper for one k, with the methods that
/// produced each side.
struct EntropyEntry {
    long long k = 1;
    double lower = 0.0;
    double upper = kInfUpper;
    std::string methods;
};

struct EntropyBoundSeries {
    LevelEmbedding spec;
    std::vector<EntropyEntry> entries;
    std::string note;

    /// Sorts by k and tightens to the monotone envelope. Both directions are
    /// sound: e_k is nonincreasing, so an upper bound at smaller k bounds all
    /// larger k, and a lower bound at larger k bounds all smaller k.
    void normalize() {
        std::sort(entries.begin(), entries.end(),
                  [](const EntropyEntry& a, const EntropyEntry& b) { return a.k < b.k; });
        entries.erase(std::unique(entries.begin(), entries.end(),
                                  [](const EntropyEntry& a, const EntropyEntry& b) {
                                      return a.k == b.k;
                                  }),
                      entries.end());
        double run_upper = kInfUpper;
        for (auto& e : entries) {
            run_upper = std::min(run_upper, e.upper);
            e.upper = run_upper;
        }
        double run_lower = 0.0;
        for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
            run_lower = std::max(run_lower, it->lower);
            it->lower = run_lower;
        }
    }
};

/// Volumetric lower bound on e_k(id_j). Morrey balls are sandwiched between
/// l_p balls: B_{u1}(0,1) inside the source ball, the target ball inside
/// B_{p2}(0, 2^{jd(1/p2-1/u2)}).
inline double volume_lower_bound(const LevelEmbedding& spec, long long k) {
    const long long D = spec.coefficients();
    const Rational jd = Rational(spec.level) * Rational(spec.dim);
    const Rational src_p = spec.source.morrey ? spec.source.u : spec.source.p;
    const double src_log2_r = 0.0;
    const Rational tgt_p = spec.target.p;
    const double tgt_log2_r =
        spec.target.morrey
            ? (jd * (spec.target.p.reciprocal() - spec.target.u.reciprocal())).to_double()
            : 0.0;
    return volumetric_lower_generic(D, src_p, src_log2_r, tgt_p, tgt_log2_r, k);
}

/// Same bound for a source ball of radius r (e_k(rK, Y) = r e_k(K, Y)).
inline double volume_lower_bound(const LevelEmbedding& spec, long long k,
                                 double source_radius) {
    return source_radius * volume_lower_bound(spec, k);
}

namespace detail {

/// Uniform sample from the l_p ball of radius `radius` (Barthe et al.:
/// generalized-Gaussian directions, radial factor U^{1/D}).
inline void sample_lp_ball(std::span<double> out, const Rational& p, double radius,
                           std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const long long D = static_cast<long long>(out.size());
    if (p.is_infinite()) {
        std::uniform_real_distribution<double> sym(-radius, radius);
        for (double& x : out) x = sym(rng);
        return;
    }
    const double pd = p.to_double();
    std::gamma_distribution<double> gamma(1.0 / pd, 1.0);
    std::bernoulli_distribution sign(0.5);
    double norm_p = 0.0;
    for (double& x : out) {
        const double g = std::pow(gamma(rng), 1.0 / pd);
        x = sign(rng) ? g : -g;
        norm_p += std::pow(std::abs(x), pd);
    }
    norm_p = std::pow(norm_p, 1.0 / pd);
    if (norm_p == 0.0) {
        for (double& x : out) x = 0.0;
        return;
    }
    const double radial = std::pow(unif(rng), 1.0 / static_cast<double>(D));
    const double scale = radius * radial / norm_p;
    for (double& x : out) x *= scale;
}

}  // namespace detail

/// Greedy-packing lower bound on e_k: if more than 2^{k-1} admissible points
/// are pairwise further than 2 C eps in the target quasi-norm, then
/// e_k >= eps. Returns the largest certified eps found by bisection
/// (relative tolerance 1e-3), 0 if no admissible points were sampled.
inline double packing_lower_bound(const LevelEmbedding& spec, long long k, int samples,
                                  std::uint64_t seed, double source_radius = 1.0) {
    if (spec.coefficients() > (1LL << 12))
        throw std::invalid_argument("packing_lower_bound: lattice larger than 2^12");
    if (k < 1) throw std::invalid_argument("packing_lower_bound: k >= 1 required");
    const long long D = spec.coefficients();
    const long long max_points = (1LL << 24) / std::max<long long>(1, D);
    const long long n_draw = std::min<long long>(samples, max_points);

    // Rejection sampling through the l_{p1} superset ball.
    const Rational jd = Rational(spec.level) * Rational(spec.dim);
    const double superset_radius =
        source_radius *
        (spec.source.morrey
             ? pow2(jd * (spec.source.p.reciprocal() - spec.source.u.reciprocal()))
             : 1.0);
    auto rng = make_rng(seed);
    std::vector<std::vector<double>> points;
    std::vector<double> draw(static_cast<size_t>(D));
    for (long long i = 0; i < n_draw; ++i) {
        detail::sample_lp_ball(draw, spec.source.p, superset_radius, rng);
        if (spec.source.norm(draw, spec.dim, spec.level) <= source_radius)
            points.push_back(draw);
    }
    if (points.empty()) return 0.0;

    const long long need = (k - 1 < 62) ? (1LL << (k - 1)) : std::numeric_limits<long long>::max();
    if (static_cast<long long>(points.size()) <= need) return 0.0;

    const double C = spec.target.triangle_constant();
    std::vector<double> diff(static_cast<size_t>(D));
    auto target_dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (long long i = 0; i < D; ++i)
            diff[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];
        return spec.target.norm(diff, spec.dim, spec.level);
    };
    // farthest-point greedy, seeded at the point of largest target norm;
    // keeps the pairwise separation near the best the sample allows
    size_t seed_idx = 0;
    double seed_norm = -1.0;
    for (size_t i = 0; i < points.size(); ++i) {
        const double n = spec.target.norm(points[i], spec.dim, spec.level);
        if (n > seed_norm) {
            seed_norm = n;
            seed_idx = i;
        }
    }
    auto certified = [&](double eps) -> bool {
        const double threshold = 2.0 * C * eps;
        std::vector<double> min_dist(points.size(),
                                     std::numeric_limits<double>::infinity());
        size_t next = seed_idx;
        long long kept = 0;
        while (true) {
            ++kept;
            if (kept > need) return true;
            const auto& just_added = points[next];
            size_t best = points.size();
            double best_dist = -1.0;
            for (size_t i = 0; i < points.size(); ++i) {
                if (min_dist[i] == 0.0) continue;
                const double dcur = std::min(min_dist[i], target_dist(points[i], just_added));
                min_dist[i] = (i == next) ? 0.0 : dcur;
                if (i != next && dcur > best_dist) {
                    best_dist = dcur;
                    best = i;
                }
            }
            if (best == points.size() || !(best_dist > threshold)) return false;
            next = best;
        }
    };

    double lo = 0.0;
    double hi = source_radius * opnorm_upper_value(spec);
    if (certified(hi)) return hi;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (certified(mid))
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-3 * hi) break;
    }
    return lo;
}

/// Smallest k such that a constructed l_inf quantization grid certifies
/// e_k <= eps. Grid cells are counted by recursive lattice enumeration with
/// monotone pruning; more than 2^40 cells raises ResourceLimitError.
inline long long covering_upper_bound(const LevelEmbedding& spec, double eps,
                                      double source_radius = 1.0) {
    if (spec.coefficients() > (1LL << 12))
        throw std::invalid_argument("covering_upper_bound: lattice larger than 2^12");
    if (!(eps > 0.0)) throw std::invalid_argument("covering_upper_bound: eps > 0 required");
    const double opnorm = source_radius * opnorm_upper_value(spec);
    if (eps >= opnorm) return 1;  // one ball of radius ||id|| around 0 covers

    const int d = spec.dim;
    const int j = spec.level;
    const long long D = spec.coefficients();
    const LevelSpaceParams linf = LevelSpaceParams::make_lp(Rational::infinity());
    const double n_inf_tgt =
        opnorm_upper_value(LevelEmbedding(d, j, linf, spec.target));
    const double n_inf_src =
        opnorm_upper_value(LevelEmbedding(d, j, linf, spec.source));
    // quantization step: (delta/2) ||id: l_inf -> target|| == eps
    const double delta = 2.0 * eps / n_inf_tgt;
    // coefficients of source-ball points are bounded by the radius
    const long long steps = static_cast<long long>(std::ceil(source_radius / delta));
    if (steps > (1LL << 22))
        throw ResourceLimitError("covering_upper_bound: axis grid finer than 2^22 steps");
    const long long n_min = -steps;
    const long long n_max = steps - 1;
    const double c_src = spec.source.triangle_constant();
    const double inflate = c_src * (source_radius + 0.5 * delta * n_inf_src);

    constexpr long long kCountCap = 1LL << 40;

    // Certified lower estimate of the cell count before enumerating: every
    // cell whose coordinates all satisfy |q| <= r0 passes the pruning and the
    // leaf test, where r0 puts the center inside the l_{u}-ball (l_p for
    // plain spaces) of radius `inflate`.
    {
        const Rational& u_eff = spec.source.morrey ? spec.source.u : spec.source.p;
        const double r0 = u_eff.is_infinite()
                              ? inflate
                              : inflate * std::pow(static_cast<double>(D),
                                                   -u_eff.reciprocal().to_double());
        long long per_axis = 0;
        for (long long n = n_min; n <= n_max; ++n) {
            const double q = delta * (static_cast<double>(n) + 0.5);
            if (std::abs(q) <= r0) ++per_axis;
        }
        if (per_axis > 1 &&
            static_cast<double>(D) * std::log2(static_cast<double>(per_axis)) > 40.0)
            throw ResourceLimitError("covering_upper_bound: more than 2^40 grid cells");
    }

    // Candidate coordinate values, restricted to |q| <= inflate (every norm
    // here dominates the sup of coordinates).
    std::vector<double> qs;
    for (long long n = n_min; n <= n_max; ++n) {
        const double q = delta * (static_cast<double>(n) + 0.5);
        if (std::abs(q) <= inflate) qs.push_back(q);
    }
    if (qs.empty())  // inflate >= radius + delta/2, so +-delta/2 always qualify
        throw std::logic_error("covering_upper_bound: empty coordinate grid");

    // Prefix pruning: for l_p-like sources (plain l_p or m_{p,p}) the power
    // sum is a monotone lower bound on the final norm. A proper Morrey source
    // is pruned through ||.||_p <= 2^{jd(1/p-1/u)} ||.|m_{u,p}||, with the
    // exact norm checked at the leaves.
    const bool lp_like = !spec.source.morrey || spec.source.u == spec.source.p;
    const bool inf_source = spec.source.p.is_infinite();
    const double src_pd = inf_source ? 0.0 : spec.source.p.to_double();
    double budget = 0.0;
    bool exact_leaf_check = false;
    if (!inf_source) {
        double power_bound = inflate;
        if (spec.source.morrey && !lp_like) {
            const Rational jd = Rational(j) * Rational(d);
            power_bound =
                inflate * pow2(jd * (spec.source.p.reciprocal() - spec.source.u.reciprocal()));
            exact_leaf_check = true;
        }
        budget = std::pow(power_bound, src_pd);
    }
    std::vector<double> qpow(qs.size(), 0.0);
    if (!inf_source)
        for (size_t i = 0; i < qs.size(); ++i) qpow[i] = std::pow(std::abs(qs[i]), src_pd);

    long long count = 0;
    if (inf_source) {
        // no pruning beyond the coordinate box: the count is exactly qs^D
        count = 1;
        for (long long i = 0; i < D; ++i) {
            if (count > kCountCap / static_cast<long long>(qs.size()) + 1)
                throw ResourceLimitError("covering_upper_bound: more than 2^40 grid cells");
            count *= static_cast<long long>(qs.size());
            if (count > kCountCap)
                throw ResourceLimitError("covering_upper_bound: more than 2^40 grid cells");
        }
        long long kk_inf = 1;
        while (kk_inf - 1 < 62 && (1LL << (kk_inf - 1)) < count) ++kk_inf;
        return count <= 1 ? 1 : kk_inf;
    }
    std::vector<double> center(static_cast<size_t>(D), 0.0);

    auto enumerate = [&](auto&& self, long long i, double prefix_power) -> void {
        if (i == D) {
            if (exact_leaf_check && spec.source.norm(center, d, j) > inflate) return;
            if (++count > kCountCap)
                throw ResourceLimitError("covering_upper_bound: more than 2^40 grid cells");
            return;
        }
        for (size_t qi = 0; qi < qs.size(); ++qi) {
            const double power = prefix_power + qpow[qi];
            if (power > budget) continue;
            center[static_cast<size_t>(i)] = qs[qi];
            self(self, i + 1, power);
        }
        center[static_cast<size_t>(i)] = 0.0;
    };
    enumerate(enumerate, 0, 0.0);

    if (count <= 1) return 1;
    long long kk = 1;
    while (kk - 1 < 62 && (1LL << (kk - 1)) < count) ++kk;
    return kk;
}

struct CoveringEps {
    double eps = kInfUpper;
    bool limited = false;  // enumeration cap degraded the search
};

/// Smallest certified eps with covering_upper_bound(spec, eps) <= k, by
/// bisection at relative tolerance 1e-3. Probes that blow the enumeration
/// cap count as uncertified, so the result stays a valid upper bound.
inline CoveringEps covering_eps_for_k(const LevelEmbedding& spec, long long k,
                                      double source_radius = 1.0) {
    CoveringEps out;
    double hi = source_radius * opnorm_upper_value(spec);  // k=1 certified here
    double lo = 0.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > 0.0)) break;
        bool ok = false;
        try {
            ok = covering_upper_bound(spec, mid, source_radius) <= k;
        } catch (const ResourceLimitError&) {
            out.limited = true;
        }
        if (ok)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-3 * hi) break;
    }
    out.eps = hi;
    return out;
}

/// Piecewise reference shape of e_k(l_{p1}^N -> l_{p2}^N) (asymptotic, no
/// absolute constant): 1, then (log(1+N/k)/k)^{1/p1-1/p2}, then
/// 2^{-k/2N} N^{1/p2-1/p1}; the last branch for all k when p2 < p1.
/// Natural logarithm throughout.
inline double schuett_reference(const Rational& p1, const Rational& p2, long long N,
                                long long k) {
    if (N < 1 || k < 1) throw std::invalid_argument("schuett_reference: N,k >= 1");
    const double e = (p1.reciprocal() - p2.reciprocal()).to_double();
    const double Nd = static_cast<double>(N);
    const double kd = static_cast<double>(k);
    const double tail = std::exp2(-kd / (2.0 * Nd)) * std::pow(Nd, -e);
    if (p2 < p1) return tail;
    if (kd <= std::log(2.0 * Nd)) return 1.0;
    if (kd <= 2.0 * Nd) return std::pow(std::log1p(Nd / kd) / kd, e);
    return tail;
}

enum class BoundSide { Lower, Upper };

/// sup over recorded k of k^{1/r} bound(k) -- the operator-ideal quasi-norm
/// evaluated on a certified series.
inline double lre_norm(const EntropyBoundSeries& series, double r, BoundSide side) {
    if (series.entries.empty()) throw std::invalid_argument("lre_norm: empty series");
    if (!(r > 0.0)) throw std::invalid_argument("lre_norm: r > 0 required");
    double best = 0.0;
    for (const auto& e : series.entries) {
        const double v = side == BoundSide::Lower ? e.lower : e.upper;
        if (std::isinf(v)) return kInfUpper;
        best = std::max(best, std::pow(static_cast<double>(e.k), 1.0 / r) * v);
    }
    return best;
}

/// e_{k1+k2-1}(T2 T1) <= e_{k1}(T1) e_{k2}(T2): combined upper envelope over
/// all splits of composable series.
inline EntropyBoundSeries combine_multiplicativity(const EntropyBoundSeries& s1,
                                                   const EntropyBoundSeries& s2) {
    if (!(s1.spec.target == s2.spec.source) || s1.spec.dim != s2.spec.dim ||
        s1.spec.level != s2.spec.level)
        throw std::invalid_argument("combine_multiplicativity: series not composable");
    EntropyBoundSeries out{
        LevelEmbedding(s1.spec.dim, s1.spec.level, s1.spec.source, s2.spec.target),
        {},
        "multiplicativity"};
    std::map<long long, double> best;
    for (const auto& a : s1.entries)
        for (const auto& b : s2.entries) {
            const long long k = a.k + b.k - 1;
            const double cand = a.upper * b.upper;
            auto [it, fresh] = best.emplace(k, cand);
            if (!fresh) it->second = std::min(it->second, cand);
        }
    for (const auto& [k, up] : best)
        out.entries.push_back({k, 0.0, up, "multiplicativity"});
    out.normalize();
    return out;
}

/// e_{2k}(T: A -> B_theta) <= c e_k(T: A -> B_0)^{1-theta} e_k(T: A -> B_1)^theta.
/// c is carried symbolically: values are reported with c = 1 and the note
/// records that they hold up to the interpolation constant.
inline EntropyBoundSeries combine_interpolation(const EntropyBoundSeries& s0,
                                                const EntropyBoundSeries& s1, double theta) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("combine_interpolation: theta must be in (0,1)");
    if (!(s0.spec.source == s1.spec.source) || s0.spec.dim != s1.spec.dim ||
        s0.spec.level != s1.spec.level)
        throw std::invalid_argument("combine_interpolation: different source spaces");
    std::map<long long, double> up1;
    for (const auto& e : s1.entries) up1.emplace(e.k, e.upper);
    EntropyBoundSeries out{s0.spec, {},
                           "interpolated target (theta=" + std::to_string(theta) +
                               "), up to the interpolation constant"};
    for (const auto& e : s0.entries) {
        const auto it = up1.find(e.k);
        if (it == up1.end()) continue;
        const double up = std::pow(e.upper, 1.0 - theta) * std::pow(it->second, theta);
        out.entries.push_back({2 * e.k, 0.0, up, "interpolation"});
    }
    out.normalize();
    return out;
}

}  // namespace morrey
