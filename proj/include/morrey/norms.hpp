#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "morrey/dyadic.hpp"
#include "morrey/rational.hpp"

namespace morrey {

/// Indices of the per-level Morrey space m^{2^{jd}}_{u,p}; requires 0 < p <= u < inf.
struct MorreyLevelParams {
    Rational u;
    Rational p;

    MorreyLevelParams(Rational u_, Rational p_) : u(u_), p(p_) {
        if (p.is_infinite() || u.is_infinite() || !(Rational(0) < p) || !(p <= u))
            throw std::invalid_argument("MorreyLevelParams: need 0 < p <= u < inf");
    }
};

/// Indices of the full sequence space n^sigma_{u,p,q}(Q); q may be infinite.
struct SeqSpaceParams {
    Rational sigma;
    Rational u;
    Rational p;
    Rational q;

    SeqSpaceParams(Rational sigma_, Rational u_, Rational p_, Rational q_)
        : sigma(sigma_), u(u_), p(p_), q(q_) {
        if (p.is_infinite() || u.is_infinite() || !(Rational(0) < p) || !(p <= u))
            throw std::invalid_argument("SeqSpaceParams: need 0 < p <= u < inf");
        if (!(Rational(0) < q))
            throw std::invalid_argument("SeqSpaceParams: need q > 0");
    }

    [[nodiscard]] MorreyLevelParams level_params() const { return {u, p}; }
};

/// (sum |v_i|^p)^{1/p}; max |v_i| for p = inf.
inline double lp_norm(std::span<const double> v, const Rational& p) {
    if (!(Rational(0) < p)) throw std::invalid_argument("lp_norm: p must be positive");
    if (p.is_infinite()) {
        double m = 0.0;
        for (const double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    const double pd = p.to_double();
    double sum = 0.0;
    if (pd == 1.0) {
        for (const double x : v) sum += std::abs(x);
        return sum;
    }
    if (pd == 2.0) {
        for (const double x : v) sum += x * x;
        return std::sqrt(sum);
    }
    for (const double x : v) sum += std::pow(std::abs(x), pd);
    return std::pow(sum, 1.0 / pd);
}

/// sup over cubes Q_{nu,k} subset Q, nu <= j, of
///   2^{d(j-nu)(1/u-1/p)} (sum_{Q_{j,m} subset Q_{nu,k}} |coef|^p)^{1/p}.
/// Weight exponents are exact rationals; each weight is one exp2 rounding.
inline double morrey_level_norm(std::span<const double> coeffs, int dim, int level,
                                const MorreyLevelParams& mp) {
    const double pd = mp.p.to_double();
    const double inv_p = 1.0 / pd;
    const Rational exp_step = Rational(dim) * (mp.u.reciprocal() - mp.p.reciprocal());
    const CubePowerTable table = aggregate_powers(coeffs, dim, level, pd);
    double best = 0.0;
    for (int nu = level; nu >= 0; --nu) {
        double m = 0.0;
        for (const double s : table.at_level(nu)) m = std::max(m, s);
        const double w = pow2(Rational(level - nu) * exp_step);
        best = std::max(best, w * std::pow(m, inv_p));
    }
    return best;
}

inline double morrey_level_norm(const LevelSequence& lambda, const MorreyLevelParams& mp) {
    return morrey_level_norm(lambda.coeffs(), lambda.dim(), lambda.level(), mp);
}

/// ( sum_j 2^{jq(sigma-d/u)} ||lambda_j | m_{u,p}||^q )^{1/q}, sup over j if q = inf.
inline double seq_space_norm(const MultiLevelSequence& lambda, const SeqSpaceParams& sp) {
    const MorreyLevelParams level_params = sp.level_params();
    const Rational weight_exp = sp.sigma - Rational(lambda.dim()) * sp.u.reciprocal();
    if (sp.q.is_infinite()) {
        double best = 0.0;
        for (int j = 0; j <= lambda.max_level(); ++j) {
            const double w = pow2(Rational(j) * weight_exp);
            best = std::max(best, w * morrey_level_norm(lambda.level(j), level_params));
        }
        return best;
    }
    const double qd = sp.q.to_double();
    double sum = 0.0;
    for (int j = 0; j <= lambda.max_level(); ++j) {
        const double w = pow2(Rational(j) * weight_exp);
        const double term = w * morrey_level_norm(lambda.level(j), level_params);
        if (term > 0.0) sum += std::pow(term, qd);
    }
    return std::pow(sum, 1.0 / qd);
}

/// r = min(1, p, q): the space satisfies the r-triangle inequality
/// ||x+y||^r <= ||x||^r + ||y||^r.
inline Rational rnorm_exponent(const SeqSpaceParams& sp) {
    return min(Rational(1), min(sp.p, sp.q));
}

inline Rational rnorm_exponent(const MorreyLevelParams& mp) {
    return min(Rational(1), mp.p);
}

}  // namespace morrey
