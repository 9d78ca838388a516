#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/entropy.hpp"
#include "morrey/experiment.hpp"
#include "morrey/fit.hpp"
#include "morrey/norms.hpp"
#include "morrey/operators.hpp"
#include "morrey/regimes.hpp"

namespace morrey {

struct SelfTestResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Compact property suite behind the `selftest` subcommand: each check is a
/// quick randomized version of an invariant the full test suite pins down.
inline std::vector<SelfTestResult> run_selftest(std::uint64_t seed, int samples = 300) {
    std::vector<SelfTestResult> results;
    auto check = [&](const std::string& name, const std::function<std::string()>& fn) {
        SelfTestResult r;
        r.name = name;
        try {
            r.detail = fn();
            r.pass = true;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    };
    auto fail = [](const std::string& msg) { throw std::runtime_error(msg); };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    auto random_level = [&](int d, int j) {
        LevelSequence lam(d, j);
        for (long long i = 0; i < lam.size(); ++i) lam[i] = unif(rng);
        return lam;
    };

    check("dyadic.tree_consistency", [&] {
        for (int rep = 0; rep < samples; ++rep) {
            const auto lam = random_level(1, 3);
            const auto t = aggregate_powers(lam, 1.5);
            for (int nu = 0; nu < 3; ++nu)
                for (long long k = 0; k < cubes_at_level(1, nu); ++k) {
                    double sum = 0.0;
                    detail::for_each_child(1, nu, k,
                                           [&](long long c) { sum += t.value(nu + 1, c); });
                    if (std::abs(t.value(nu, k) - sum) > 1e-12 * (1.0 + sum))
                        fail("parent != sum of children");
                }
        }
        return "parent sums match children";
    });

    check("norms.homogeneity", [&] {
        const MorreyLevelParams mp(Rational(3), Rational(1));
        for (int rep = 0; rep < samples; ++rep) {
            const auto lam = random_level(1, 3);
            const double c = unif(rng);
            LevelSequence scaled = lam;
            for (long long i = 0; i < scaled.size(); ++i) scaled[i] *= c;
            const double lhs = morrey_level_norm(scaled, mp);
            const double rhs = std::abs(c) * morrey_level_norm(lam, mp);
            if (std::abs(lhs - rhs) > 1e-12 * (1.0 + rhs)) fail("|c| norm mismatch");
        }
        return "norm(c x) = |c| norm(x)";
    });

    check("norms.r_triangle", [&] {
        const SeqSpaceParams sp(Rational(1, 2), Rational(3), Rational(1, 2), Rational(2));
        const double r = rnorm_exponent(sp).to_double();
        for (int rep = 0; rep < samples; ++rep) {
            MultiLevelSequence a(1, 2), b(1, 2);
            for (int j = 0; j <= 2; ++j)
                for (long long i = 0; i < a.level(j).size(); ++i) {
                    a.level(j)[i] = unif(rng);
                    b.level(j)[i] = unif(rng);
                }
            MultiLevelSequence sum = a;
            for (int j = 0; j <= 2; ++j)
                for (long long i = 0; i < sum.level(j).size(); ++i)
                    sum.level(j)[i] += b.level(j)[i];
            const double lhs = std::pow(seq_space_norm(sum, sp), r);
            const double rhs =
                std::pow(seq_space_norm(a, sp), r) + std::pow(seq_space_norm(b, sp), r);
            if (lhs > rhs * (1.0 + 1e-12)) fail("r-triangle violated");
        }
        return "||x+y||^r <= ||x||^r + ||y||^r with r = min(1,p,q)";
    });

    check("norms.mpp_equals_lp", [&] {
        for (int rep = 0; rep < samples; ++rep) {
            const auto lam = random_level(2, 2);
            const Rational p(3, 2);
            const double a = morrey_level_norm(lam, MorreyLevelParams(p, p));
            const double b = lp_norm(lam.coeffs(), p);
            if (std::abs(a - b) > 1e-12 * (1.0 + b)) fail("m_{p,p} != l_p");
        }
        return "m_{p,p} coincides with l_p";
    });

    check("norms.ball_inclusions", [&] {
        const Rational u(3), p(1);
        const double blow = pow2(Rational(3) * (p.reciprocal() - u.reciprocal()));
        for (int rep = 0; rep < samples; ++rep) {
            const auto lam = random_level(1, 3);
            const double m = morrey_level_norm(lam, MorreyLevelParams(u, p));
            if (m > lp_norm(lam.coeffs(), u) * (1.0 + 1e-12)) fail("m-norm above l_u");
            if (lp_norm(lam.coeffs(), p) > blow * m * (1.0 + 1e-12)) fail("l_p above blowup");
        }
        return "l_u ball inside m-ball inside blown-up l_p ball";
    });

    check("norms.hoelder_uu1a", [&] {
        const Rational u1(2), p1(1), u2(2), p2(2);
        const double factor = pow2(Rational(3) * (u2.reciprocal() - p1 / (p2 * u1)));
        const double theta = (p1 / p2).to_double();
        for (int rep = 0; rep < samples; ++rep) {
            const auto lam = random_level(1, 3);
            const double lhs = morrey_level_norm(lam, MorreyLevelParams(u2, p2));
            const double rhs =
                factor *
                std::pow(lp_norm(lam.coeffs(), Rational::infinity()), 1.0 - theta) *
                std::pow(morrey_level_norm(lam, MorreyLevelParams(u1, p1)), theta);
            if (lhs > rhs * (1.0 + 1e-12)) fail("interpolation inequality violated");
        }
        return "target norm <= weighted geometric mean of l_inf and source";
    });

    check("operators.opnorm_sandwich", [&] {
        const std::vector<std::array<long long, 4>> grid = {
            {2, 2, 4, 1}, {4, 2, 2, 1}, {2, 1, 2, 2}, {2, 1, 8, 2}};
        for (const auto& g : grid) {
            const LevelEmbedding spec(
                1, 2, LevelSpaceParams::make_morrey(Rational(g[0]), Rational(g[1])),
                LevelSpaceParams::make_morrey(Rational(g[2]), Rational(g[3])));
            const auto cf = opnorm_closed_form(spec);
            const auto bf = opnorm_bruteforce(spec, 30000, seed);
            if (bf.value > cf.value * (1.0 + 1e-9)) fail("oracle above closed form");
            if (cf.exact && bf.value < cf.value * (1.0 - 1e-6))
                fail("oracle below exact closed form");
        }
        return "oracle within [exact - 1e-6, closed form + 1e-9]";
    });

    check("operators.extremal_unit_norm", [&] {
        for (const int j : {1, 2, 3}) {
            const auto sp = extremal_sparse_spread(1, j, Rational(2), Rational(1));
            const double n =
                morrey_level_norm(sp.seq, MorreyLevelParams(Rational(2), Rational(1)));
            if (std::abs(n - 1.0) > 1e-12) fail("extremal norm != 1");
        }
        return "extremal sequences normalized";
    });

    check("entropy.volume_and_covering", [&] {
        const auto linf1 = LevelEmbedding(1, 0,
                                          LevelSpaceParams::make_lp(Rational::infinity()),
                                          LevelSpaceParams::make_lp(Rational::infinity()));
        if (covering_upper_bound(linf1, 0.5) != 2) fail("interval cover");
        for (long long k = 1; k <= 6; ++k)
            if (std::abs(volume_lower_bound(linf1, k) - std::exp2(1.0 - k)) > 1e-12)
                fail("interval volume bound");
        const auto spec = LevelEmbedding(
            1, 2, LevelSpaceParams::make_morrey(Rational(2), Rational(1)),
            LevelSpaceParams::make_morrey(Rational(2), Rational(2)));
        for (long long k = 1; k <= 6; ++k)
            if (volume_lower_bound(spec, k) > covering_eps_for_k(spec, k).eps * (1 + 1e-9))
                fail("lower above upper");
        return "interval exact, lower <= upper on the sample spec";
    });

    check("entropy.packing_interval", [&] {
        const auto linf1 = LevelEmbedding(1, 0,
                                          LevelSpaceParams::make_lp(Rational::infinity()),
                                          LevelSpaceParams::make_lp(Rational::infinity()));
        const double v = packing_lower_bound(linf1, 2, 2048, seed);
        if (v < 0.5 * 0.98 || v > 0.5 * (1.0 + 1e-9)) fail("interval packing off");
        return "e_2([-1,1]) recovered to 2%";
    });

    check("entropy.scaling", [&] {
        const auto spec = LevelEmbedding(
            1, 2, LevelSpaceParams::make_morrey(Rational(3), Rational(1)),
            LevelSpaceParams::make_morrey(Rational(2), Rational(2)));
        for (const double r : {0.5, 2.0})
            for (const long long k : {1LL, 5LL})
                if (std::abs(volume_lower_bound(spec, k, r) -
                             r * volume_lower_bound(spec, k)) > 1e-12)
                    fail("volumetric bound not 1-homogeneous in the radius");
        return "e_k(rK) = r e_k(K) on volumetric bounds";
    });

    check("regimes.examples_and_partition", [&] {
        const auto mk = [](double delta) {
            return ParamTuple{1, delta, 0.0, 2.0, 1.0, 2.0, 2.0, 2.0, 2.0};
        };
        if (classify(mk(0.4)).kind != RegimeKind::AlphaGap) fail("alpha example");
        if (std::abs(classify(mk(0.4)).exponent - 0.3) > 1e-12) fail("alpha exponent");
        if (classify(mk(0.6)).kind != RegimeKind::Classical) fail("classical example");
        if (classify(mk(0.2)).kind != RegimeKind::NotCompact) fail("non-compact example");
        std::uniform_real_distribution<double> pos(0.3, 4.0);
        for (int rep = 0; rep < samples; ++rep) {
            const double u1 = pos(rng), u2 = pos(rng);
            ParamTuple t{1, unif(rng), 0.0, u1, std::min(u1, pos(rng)), 2.0,
                         u2, std::min(u2, pos(rng)), 2.0};
            const auto r = classify(t);
            if ((r.kind == RegimeKind::NotCompact) == is_compact(t))
                fail("kind/compactness mismatch");
        }
        return "worked examples and compactness partition";
    });

    check("fit.exact_recovery", [&] {
        std::vector<long long> ks;
        std::vector<double> vals;
        for (long long k = 2; k <= 30; ++k) {
            ks.push_back(k);
            vals.push_back(std::pow(static_cast<double>(k), -0.6));
        }
        const auto f = fit_decay(ks, vals, FitMode::PowerLaw);
        if (std::abs(f.slope + 0.6) > 1e-9) fail("power-law slope off");
        return "slope -0.6 recovered to 1e-9";
    });

    check("experiment.determinism", [&] {
        ExperimentConfig c;
        RationalParamTuple t;
        t.d = 1;
        t.sigma1 = Rational(2, 5);
        t.sigma2 = Rational(0);
        t.u1 = Rational(2);
        t.p1 = Rational(1);
        t.q1 = Rational(2);
        t.u2 = Rational(2);
        t.p2 = Rational(2);
        t.q2 = Rational(2);
        c.tuples.push_back(t);
        c.j_min = 1;
        c.j_max = 2;
        c.ks = {1, 2, 3, 4};
        c.methods = {"volume", "packing", "schuett"};
        c.seed = seed;
        c.samples = 200;
        const auto a = sweep_csv_string(run_sweep(c));
        c.threads = 3;
        const auto b = sweep_csv_string(run_sweep(c));
        if (a != b) fail("sweep bytes differ across runs/threads");
        return "sweep bytes identical across reruns and thread counts";
    });

    return results;
}

inline std::string selftest_table(const std::vector<SelfTestResult>& results) {
    std::ostringstream out;
    size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
            << std::string(width - r.name.size() + 2, ' ') << r.detail << "\n";
    }
    return out.str();
}

}  // namespace morrey
