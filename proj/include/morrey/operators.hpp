#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morrey/ball_volume.hpp"
#include "morrey/norms.hpp"
#include "morrey/regimes.hpp"
#include "morrey/rng.hpp"

namespace morrey {

/// One side of a per-level embedding: either the Morrey space m_{u,p} or the
/// plain l_p space (p may be infinite) on the same 2^{jd} coefficients.
struct LevelSpaceParams {
    bool morrey = false;
    Rational u;
    Rational p;

    static LevelSpaceParams make_morrey(Rational u, Rational p) {
        MorreyLevelParams check(u, p);  // validates 0 < p <= u < inf
        LevelSpaceParams s;
        s.morrey = true;
        s.u = check.u;
        s.p = check.p;
        return s;
    }

    static LevelSpaceParams make_lp(Rational p) {
        if (!(Rational(0) < p)) throw std::invalid_argument("LevelSpaceParams: p > 0");
        LevelSpaceParams s;
        s.morrey = false;
        s.u = p;
        s.p = p;
        return s;
    }

    [[nodiscard]] bool is_linf() const { return !morrey && p.is_infinite(); }

    [[nodiscard]] double norm(std::span<const double> coeffs, int dim, int level) const {
        if (morrey) return morrey_level_norm(coeffs, dim, level, MorreyLevelParams(u, p));
        return lp_norm(coeffs, p);
    }

    /// C with ||x+y|| <= C (||x|| + ||y||): 2^{1/min(1,p)-1}.
    [[nodiscard]] double triangle_constant() const {
        return pow2(min(Rational(1), p).reciprocal() - Rational(1));
    }

    friend bool operator==(const LevelSpaceParams& a, const LevelSpaceParams& b) {
        return a.morrey == b.morrey && a.u == b.u && a.p == b.p;
    }

    [[nodiscard]] std::string str() const {
        if (!morrey) return "l_" + p.str();
        return "m_{" + u.str() + "," + p.str() + "}";
    }
};

/// id_j between two norms on the level-j coefficient lattice.
struct LevelEmbedding {
    int dim = 1;
    int level = 0;
    LevelSpaceParams source;
    LevelSpaceParams target;

    LevelEmbedding(int d, int j, LevelSpaceParams src, LevelSpaceParams tgt)
        : dim(d), level(j), source(src), target(tgt) {
        cubes_at_level(d, j);  // range check on jd
    }

    [[nodiscard]] long long coefficients() const { return cubes_at_level(dim, level); }

    friend bool operator==(const LevelEmbedding& a, const LevelEmbedding& b) {
        return a.dim == b.dim && a.level == b.level && a.source == b.source &&
               a.target == b.target;
    }
};

/// id between two full sequence spaces on levels 0..max_level.
struct SeqEmbedding {
    int dim = 1;
    int max_level = 0;
    SeqSpaceParams source;
    SeqSpaceParams target;

    /// The per-level block id_j of the decomposition id = sum_j id_j.
    [[nodiscard]] LevelEmbedding level_embedding(int j) const {
        return LevelEmbedding(dim, j, LevelSpaceParams::make_morrey(source.u, source.p),
                              LevelSpaceParams::make_morrey(target.u, target.p));
    }
};

enum class NormCase { EQ1a, EQ1b, EQ2, TWO_SIDED };

inline const char* to_string(NormCase c) {
    switch (c) {
        case NormCase::EQ1a: return "EQ1a";
        case NormCase::EQ1b: return "EQ1b";
        case NormCase::EQ2: return "EQ2";
        case NormCase::TWO_SIDED: return "TWO_SIDED";
    }
    return "?";
}

struct OpNormResult {
    double value = 0.0;   // upper value; exact cases: the operator norm
    double lower = 0.0;   // certified lower bound, lower == value when exact
    bool exact = false;
    NormCase case_tag = NormCase::EQ1a;
};

/// Evenly spread 0/1 vector: `count` ones, one per selected cube of the
/// coarsest level holding that many cubes, each placed at the
/// lexicographically first level-j descendant.
inline std::vector<double> sparse_spread_vector(int dim, int level, long long count) {
    const long long total = cubes_at_level(dim, level);
    if (count < 1 || count > total)
        throw std::invalid_argument("sparse_spread_vector: count out of range");
    int spread_level = 0;
    while (cubes_at_level(dim, spread_level) < count) ++spread_level;
    const long long cells = cubes_at_level(dim, spread_level);
    std::vector<double> v(static_cast<size_t>(total), 0.0);
    for (long long i = 0; i < count; ++i) {
        const long long cell = (i * cells) / count;
        const auto coarse = position_of(dim, spread_level, cell);
        std::vector<int> fine(dim);
        for (int c = 0; c < dim; ++c) fine[c] = coarse[c] << (level - spread_level);
        v[static_cast<size_t>(linear_index(level, fine))] = 1.0;
    }
    return v;
}

/// k_j = floor(2^{jd(1 - p1/u1)}), the number of ones in the extremal
/// sequence. Exact for integer exponents.
inline long long sparse_spread_count(int dim, int level, const Rational& u1,
                                     const Rational& p1) {
    if (!(p1 < u1))
        throw std::invalid_argument("sparse_spread_count: requires p1 < u1");
    const Rational e = Rational(level) * Rational(dim) * (Rational(1) - p1 / u1);
    if (e.is_integer()) return 1LL << e.num();
    return static_cast<long long>(std::floor(std::exp2(e.to_double())));
}

struct SparseSpread {
    LevelSequence seq;
    long long count = 0;  // k_j
};

/// The extremal sequence of the lower-bound construction: k_j maximally
/// spread unit coefficients, rescaled to ||.|m_{u1,p1}|| = 1.
inline SparseSpread extremal_sparse_spread(int dim, int level, const Rational& u1,
                                           const Rational& p1) {
    if (!(Rational(0) < p1) || !(p1 < u1) || u1.is_infinite())
        throw std::invalid_argument("extremal_sparse_spread: requires 0 < p1 < u1 < inf");
    const long long k = std::max<long long>(1, sparse_spread_count(dim, level, u1, p1));
    std::vector<double> v = sparse_spread_vector(dim, level, k);
    const double n = morrey_level_norm(v, dim, level, MorreyLevelParams(u1, p1));
    if (n != 1.0)
        for (double& x : v) x /= n;
    return SparseSpread{LevelSequence(dim, level, std::move(v)), k};
}

namespace detail {

/// Deterministic candidate family whose best ratio certifies a lower bound
/// on the operator norm: spike, all-ones, every dyadic subcube indicator,
/// and sparse spreads over a dyadic grid of densities (plus k_j when the
/// source is proper Morrey).
template <typename Fn>
void for_each_structured_candidate(const LevelEmbedding& spec, Fn&& fn) {
    const int d = spec.dim;
    const int j = spec.level;
    const long long D = spec.coefficients();
    {
        std::vector<double> spike(static_cast<size_t>(D), 0.0);
        spike[0] = 1.0;
        fn(spike);
    }
    fn(std::vector<double>(static_cast<size_t>(D), 1.0));
    for (int nu = 0; nu <= j; ++nu) {
        const long long cells = cubes_at_level(d, nu);
        if (nu == 0 || nu == j) continue;  // all-ones and spikes cover these
        const int shift = j - nu;
        for (long long cell = 0; cell < cells; ++cell) {
            std::vector<double> v(static_cast<size_t>(D), 0.0);
            const auto coarse = position_of(d, nu, cell);
            // fill the block of level-j descendants
            const long long block = 1LL << (static_cast<long long>(shift) * d);
            for (long long off = 0; off < block; ++off) {
                const auto rel = position_of(d, shift, off);
                std::vector<int> fine(d);
                for (int c = 0; c < d; ++c) fine[c] = (coarse[c] << shift) | rel[c];
                v[static_cast<size_t>(linear_index(j, fine))] = 1.0;
            }
            fn(v);
        }
    }
    for (long long count = 2; count < D; count *= 2) fn(sparse_spread_vector(d, j, count));
    if (spec.source.morrey && spec.source.p < spec.source.u) {
        const long long k = sparse_spread_count(d, j, spec.source.u, spec.source.p);
        if (k >= 1 && k <= D) fn(sparse_spread_vector(d, j, k));
    }
}

inline double ratio_of(const LevelEmbedding& spec, std::span<const double> v) {
    const double s = spec.source.norm(v, spec.dim, spec.level);
    if (!(s > 0.0)) return 0.0;
    return spec.target.norm(v, spec.dim, spec.level) / s;
}

inline double best_structured_ratio(const LevelEmbedding& spec) {
    double best = 0.0;
    for_each_structured_candidate(
        spec, [&](const std::vector<double>& v) { best = std::max(best, ratio_of(spec, v)); });
    return best;
}

}  // namespace detail

/// Closed-form upper value of ||id_j|| (the exact norm outside the
/// TWO_SIDED case). Cheap: no candidate scan.
inline double opnorm_upper_value(const LevelEmbedding& spec) {
    const auto& s = spec.source;
    const auto& t = spec.target;
    const Rational jd = Rational(spec.level) * Rational(spec.dim);
    if (s.is_linf()) return t.is_linf() ? 1.0 : pow2(jd * t.u.reciprocal());
    if (t.is_linf()) return 1.0;
    const Rational u1 = s.u, p1 = s.p, u2 = t.u, p2 = t.p;
    if (p1 >= p2 && u2 >= u1) return 1.0;
    if (p1 < p2 && p2 / u2 <= p1 / u1) return 1.0;
    if (p1 >= p2 && u2 < u1) return pow2(jd * (u2.reciprocal() - u1.reciprocal()));
    return pow2(jd * (u2.reciprocal() - p1 / (u1 * p2)));
}

/// Exact operator norm of id_j where the closed form is known, two-sided
/// bracket otherwise. In the TWO_SIDED case `value` is the closed-form upper
/// value and `lower` the certified ratio of the best structured candidate;
/// the full oracle below can only tighten `lower`.
inline OpNormResult opnorm_closed_form(const LevelEmbedding& spec) {
    const auto& s = spec.source;
    const auto& t = spec.target;
    const Rational jd = Rational(spec.level) * Rational(spec.dim);
    OpNormResult r;
    if (s.is_linf()) {
        // all-ones attains 2^{jd/u2}; the EQ2 formula with 1/u1 = 0
        r.case_tag = NormCase::EQ2;
        r.value = t.is_linf() ? 1.0 : pow2(jd * t.u.reciprocal());
        r.lower = r.value;
        r.exact = true;
        return r;
    }
    if (t.is_linf()) {
        // |coef_i| <= source norm, spike attains
        r.case_tag = NormCase::EQ1a;
        r.value = r.lower = 1.0;
        r.exact = true;
        return r;
    }
    const Rational u1 = s.u, p1 = s.p, u2 = t.u, p2 = t.p;
    if (p1 >= p2 && u2 >= u1) {
        r.case_tag = NormCase::EQ1a;
        r.value = r.lower = 1.0;
        r.exact = true;
    } else if (p1 < p2 && p2 / u2 <= p1 / u1) {
        r.case_tag = NormCase::EQ1b;
        r.value = r.lower = 1.0;
        r.exact = true;
    } else if (p1 >= p2 && u2 < u1) {
        r.case_tag = NormCase::EQ2;
        r.value = r.lower = pow2(jd * (u2.reciprocal() - u1.reciprocal()));
        r.exact = true;
    } else {
        r.case_tag = NormCase::TWO_SIDED;
        r.value = pow2(jd * (u2.reciprocal() - p1 / (u1 * p2)));
        r.lower = std::min(detail::best_structured_ratio(spec), r.value);
        r.exact = false;
    }
    return r;
}

struct BruteForceResult {
    double value = 0.0;
    long long evaluations = 0;
    bool budget_exhausted = false;
};

/// Certified lower bound on ||id_j||: the best target/source norm ratio over
/// the structured family plus seeded random starts refined by coordinate
/// ascent (moves x2, x/2, ->0, ->max; strict improvement; stop after a full
/// pass without progress). Deterministic for fixed seed.
inline BruteForceResult opnorm_bruteforce(const LevelEmbedding& spec, long long budget,
                                          std::uint64_t seed, int random_restarts = 8) {
    if (spec.coefficients() > (1LL << 12))
        throw std::invalid_argument("opnorm_bruteforce: lattice larger than 2^12");
    BruteForceResult out;
    auto evaluate = [&](std::span<const double> v) -> double {
        ++out.evaluations;
        return detail::ratio_of(spec, v);
    };
    bool stop = false;
    detail::for_each_structured_candidate(spec, [&](const std::vector<double>& v) {
        if (stop) return;
        out.value = std::max(out.value, evaluate(v));
        if (out.evaluations >= budget) stop = true;
    });
    if (stop) {
        out.budget_exhausted = true;
        return out;
    }
    const long long D = spec.coefficients();
    for (int restart = 0; restart < random_restarts && !stop; ++restart) {
        auto rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(restart)));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> v(static_cast<size_t>(D));
        for (double& x : v) x = unif(rng);
        double cur = evaluate(v);
        bool improved = true;
        while (improved && !stop) {
            improved = false;
            for (long long i = 0; i < D && !stop; ++i) {
                const double old = v[static_cast<size_t>(i)];
                const double vmax = *std::max_element(v.begin(), v.end());
                const double moves[4] = {old * 2.0, old * 0.5, 0.0, vmax};
                for (const double m : moves) {
                    if (m == old) continue;
                    if (out.evaluations >= budget) {
                        stop = true;
                        break;
                    }
                    v[static_cast<size_t>(i)] = m;
                    const double c = evaluate(v);
                    if (c > cur) {  // first strict improvement wins
                        cur = c;
                        improved = true;
                        break;
                    }
                    v[static_cast<size_t>(i)] = old;
                }
            }
        }
        out.value = std::max(out.value, cur);
    }
    out.budget_exhausted = stop;
    return out;
}

/// Lower bound on e_{k_j}(id_j: m_{u1,p1} -> m_{u2,p2}) through the diagram
/// l_inf^{k_j} -> m -> m -> l_{p2}^{k_j}: volumetric bound on the l-space
/// embedding divided by ||P2|| <= 2^{jd(1/p2 - 1/u2)}.
inline double step3_lower_diagram(int dim, int level, const MorreyLevelParams& source,
                                  const MorreyLevelParams& target) {
    const Rational u1 = source.u, p1 = source.p, u2 = target.u, p2 = target.p;
    if (!(p1 < p2) || !(p2 / u2 > p1 / u1))
        throw std::invalid_argument(
            "step3_lower_diagram: requires p1 < p2 and p2/u2 > p1/u1");
    const long long k = std::max<long long>(1, sparse_spread_count(dim, level, u1, p1));
    const double lp_lower =
        volumetric_lower_generic(k, Rational::infinity(), 0.0, p2, 0.0, k);
    const double p2_norm =
        pow2(Rational(level) * Rational(dim) * (p2.reciprocal() - u2.reciprocal()));
    return lp_lower / p2_norm;
}

inline double step3_lower_diagram(int dim, int level, const RationalParamTuple& t) {
    validate(t);
    return step3_lower_diagram(dim, level, MorreyLevelParams(t.u1, t.p1),
                               MorreyLevelParams(t.u2, t.p2));
}

/// Level split of the block decomposition: head carries levels 0..M, tail
/// levels M+1..J, head + tail = lambda coefficientwise.
inline std::pair<MultiLevelSequence, MultiLevelSequence> split_blocks(
    const MultiLevelSequence& lambda, int M) {
    const int J = lambda.max_level();
    if (M < 0 || M > J) throw std::invalid_argument("split_blocks: need 0 <= M <= J");
    MultiLevelSequence head(lambda.dim(), J);
    MultiLevelSequence tail(lambda.dim(), J);
    for (int j = 0; j <= J; ++j) {
        auto& dst = j <= M ? head : tail;
        const auto src = lambda.level(j).coeffs();
        std::copy(src.begin(), src.end(), dst.level(j).coeffs().begin());
    }
    return {std::move(head), std::move(tail)};
}

}  // namespace morrey
