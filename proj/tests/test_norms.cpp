#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "morrey/norms.hpp"

using namespace morrey;

namespace {

// Reference Morrey level norm straight from the definition: enumerate every
// cube Q_{nu,k} and every level-j position, testing containment by integer
// division. Independent of the aggregation tree in the implementation.
double reference_morrey_norm(const LevelSequence& lam, double u, double p) {
    const int d = lam.dim();
    const int j = lam.level();
    double best = 0.0;
    for (int nu = 0; nu <= j; ++nu) {
        const double w = std::exp2(d * (j - nu) * (1.0 / u - 1.0 / p));
        for (long long k = 0; k < cubes_at_level(d, nu); ++k) {
            const auto kpos = position_of(d, nu, k);
            double sum = 0.0;
            for (long long m = 0; m < lam.size(); ++m) {
                const auto mpos = position_of(d, j, m);
                bool inside = true;
                for (int c = 0; c < d; ++c)
                    if (mpos[c] / (1 << (j - nu)) != kpos[c]) inside = false;
                if (inside) sum += std::pow(std::abs(lam[m]), p);
            }
            best = std::max(best, w * std::pow(sum, 1.0 / p));
        }
    }
    return best;
}

LevelSequence random_level_sequence(int d, int j, std::mt19937& rng, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    LevelSequence lam(d, j);
    for (long long i = 0; i < lam.size(); ++i)
        lam[i] = coin(rng) < zero_prob ? 0.0 : unif(rng);
    return lam;
}

}  // namespace

TEST_CASE("lp_norm basics", "[norms]") {
    const std::vector<double> v{3.0, 4.0};
    CHECK(lp_norm(v, Rational(2)) == 5.0);
    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
    CHECK(lp_norm(ones, Rational(1)) == 4.0);
    const std::vector<double> w{1.0, -2.0, 0.0};
    CHECK(lp_norm(w, Rational::infinity()) == 2.0);
    CHECK_THROWS_AS(lp_norm(v, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm(v, Rational(-1)), std::invalid_argument);
}

TEST_CASE("morrey_level_norm worked examples", "[norms]") {
    const MorreyLevelParams m21(Rational(2), Rational(1));
    CHECK(morrey_level_norm(LevelSequence(1, 1, {1.0, 1.0}), m21) ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(morrey_level_norm(LevelSequence(1, 1, {1.0, 0.0}), m21) == 1.0);
    const MorreyLevelParams m22(Rational(2), Rational(2));
    CHECK(morrey_level_norm(LevelSequence(1, 1, {3.0, 4.0}), m22) ==
          Catch::Approx(5.0).epsilon(1e-14));
    CHECK_THROWS_AS(MorreyLevelParams(Rational(1), Rational(2)), std::invalid_argument);
}

TEST_CASE("morrey_level_norm agrees with the definition oracle", "[norms]") {
    std::mt19937 rng(2024);
    const std::vector<std::pair<Rational, Rational>> params = {
        {Rational(2), Rational(1)}, {Rational(3), Rational(1, 2)},
        {Rational(4), Rational(2)}, {Rational(7, 2), Rational(7, 2)}};
    for (const int d : {1, 2}) {
        for (const int j : {1, 2, 3}) {
            if (d * j > 6) continue;
            for (const auto& [u, p] : params) {
                const MorreyLevelParams mp(u, p);
                for (int rep = 0; rep < 25; ++rep) {
                    const auto lam = random_level_sequence(d, j, rng);
                    const double got = morrey_level_norm(lam, mp);
                    const double want =
                        reference_morrey_norm(lam, u.to_double(), p.to_double());
                    CHECK(got == Catch::Approx(want).epsilon(1e-12).margin(1e-14));
                }
            }
        }
    }
}

TEST_CASE("seq_space_norm worked examples", "[norms]") {
    // single level-0 coefficient
    {
        MultiLevelSequence lam(1, 0);
        lam.level(0)[0] = -2.5;
        const SeqSpaceParams sp(Rational(3, 4), Rational(2), Rational(1), Rational(2));
        CHECK(seq_space_norm(lam, sp) == Catch::Approx(2.5).epsilon(1e-14));
    }
    // weight 2^{j/2}: sigma = 1/2 + d/u with u=2 -> sigma = 1
    {
        MultiLevelSequence lam(1, 1);
        lam.level(1)[0] = 1.0;
        lam.level(1)[1] = 1.0;
        const SeqSpaceParams sp(Rational(1), Rational(2), Rational(1), Rational::infinity());
        CHECK(seq_space_norm(lam, sp) == Catch::Approx(2.0).epsilon(1e-14));
    }
    {
        const MultiLevelSequence zero(2, 2);
        const SeqSpaceParams sp(Rational(1, 3), Rational(3), Rational(2), Rational(1, 2));
        CHECK(seq_space_norm(zero, sp) == 0.0);
    }
}

TEST_CASE("rnorm_exponent", "[norms]") {
    CHECK(rnorm_exponent(SeqSpaceParams(Rational(0), Rational(4), Rational(2), Rational(3))) ==
          Rational(1));
    CHECK(rnorm_exponent(SeqSpaceParams(Rational(0), Rational(1), Rational(1, 2), Rational(2))) ==
          Rational(1, 2));
    CHECK(rnorm_exponent(SeqSpaceParams(Rational(0), Rational(2), Rational(1), Rational(1, 3))) ==
          Rational(1, 3));
}

namespace {

struct TupleCase {
    SeqSpaceParams params;
    int d;
    int J;
};

std::vector<TupleCase> property_tuples() {
    std::vector<TupleCase> out;
    out.push_back({SeqSpaceParams(Rational(1, 2), Rational(2), Rational(1), Rational(2)), 1, 3});
    out.push_back({SeqSpaceParams(Rational(1), Rational(3), Rational(1, 2), Rational(1, 3)), 1, 2});
    out.push_back({SeqSpaceParams(Rational(-1, 4), Rational(4), Rational(2), Rational::infinity()), 2, 2});
    out.push_back({SeqSpaceParams(Rational(2), Rational(5, 2), Rational(5, 2), Rational(1)), 1, 3});
    return out;
}

MultiLevelSequence random_multi(int d, int J, std::mt19937& rng) {
    MultiLevelSequence lam(d, J);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int j = 0; j <= J; ++j)
        for (long long i = 0; i < lam.level(j).size(); ++i) lam.level(j)[i] = unif(rng);
    return lam;
}

}  // namespace

TEST_CASE("norm properties: homogeneity, monotonicity, r-triangle", "[norms]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> cdist(-3.0, 3.0);
    for (const auto& tc : property_tuples()) {
        const double r = rnorm_exponent(tc.params).to_double();
        for (int rep = 0; rep < 50; ++rep) {
            const auto a = random_multi(tc.d, tc.J, rng);
            const auto b = random_multi(tc.d, tc.J, rng);
            const double na = seq_space_norm(a, tc.params);
            const double nb = seq_space_norm(b, tc.params);

            // homogeneity
            const double c = cdist(rng);
            MultiLevelSequence scaled = a;
            for (int j = 0; j <= tc.J; ++j)
                for (long long i = 0; i < scaled.level(j).size(); ++i) scaled.level(j)[i] *= c;
            CHECK(seq_space_norm(scaled, tc.params) ==
                  Catch::Approx(std::abs(c) * na).epsilon(1e-12).margin(1e-300));

            // monotonicity: shrink a few entries of |a|
            MultiLevelSequence smaller = a;
            std::uniform_real_distribution<double> shrink(0.0, 1.0);
            for (int j = 0; j <= tc.J; ++j)
                for (long long i = 0; i < smaller.level(j).size(); ++i)
                    smaller.level(j)[i] *= shrink(rng);
            CHECK(seq_space_norm(smaller, tc.params) <= na * (1.0 + 1e-12));

            // r-triangle inequality
            MultiLevelSequence sum = a;
            for (int j = 0; j <= tc.J; ++j)
                for (long long i = 0; i < sum.level(j).size(); ++i)
                    sum.level(j)[i] += b.level(j)[i];
            const double ns = seq_space_norm(sum, tc.params);
            CHECK(std::pow(ns, r) <=
                  (std::pow(na, r) + std::pow(nb, r)) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("m_{p,p} = l_p and ball inclusions", "[norms]") {
    std::mt19937 rng(11);
    for (const int d : {1, 2}) {
        const int j = d == 1 ? 3 : 2;
        for (const auto& [u, p] :
             std::vector<std::pair<Rational, Rational>>{{Rational(2), Rational(1)},
                                                        {Rational(3), Rational(3, 2)},
                                                        {Rational(4), Rational(2)}}) {
            const MorreyLevelParams mp(u, p);
            const Rational jd = Rational(j) * Rational(d);
            const double blow = pow2(jd * (p.reciprocal() - u.reciprocal()));
            for (int rep = 0; rep < 50; ++rep) {
                const auto lam = random_level_sequence(d, j, rng);
                const double morrey = morrey_level_norm(lam, mp);
                // m_{p,p} = l_p exactly
                const double mpp =
                    morrey_level_norm(lam, MorreyLevelParams(p, p));
                CHECK(mpp == Catch::Approx(lp_norm(lam.coeffs(), p)).epsilon(1e-13));
                // ||.|m_{u,p}|| <= ||.|l_u|| and ||.|l_p|| <= 2^{jd(1/p-1/u)} ||.|m_{u,p}||
                CHECK(morrey <= lp_norm(lam.coeffs(), u) * (1.0 + 1e-12));
                CHECK(lp_norm(lam.coeffs(), p) <= blow * morrey * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("Hoelder-type inequality between Morrey norms", "[norms]") {
    // For p1 < p2 and p2/u2 > p1/u1:
    //   ||.|m_{u2,p2}|| <= 2^{jd(1/u2 - p1/(p2 u1))} ||.|l_inf||^{1-p1/p2} ||.|m_{u1,p1}||^{p1/p2}
    std::mt19937 rng(13);
    struct Case {
        Rational u1, p1, u2, p2;
    };
    const std::vector<Case> cases = {{Rational(2), Rational(1), Rational(2), Rational(2)},
                                     {Rational(3), Rational(1), Rational(2), Rational(2)},
                                     {Rational(4), Rational(1, 2), Rational(4), Rational(1)}};
    for (const int d : {1, 2}) {
        const int j = d == 1 ? 3 : 2;
        for (const auto& c : cases) {
            REQUIRE(c.p1 < c.p2);
            REQUIRE(c.p2 / c.u2 > c.p1 / c.u1);
            const Rational jd = Rational(j) * Rational(d);
            const double factor = pow2(jd * (c.u2.reciprocal() - c.p1 / (c.p2 * c.u1)));
            const double theta = (c.p1 / c.p2).to_double();
            for (int rep = 0; rep < 100; ++rep) {
                const auto lam = random_level_sequence(d, j, rng);
                const double lhs =
                    morrey_level_norm(lam, MorreyLevelParams(c.u2, c.p2));
                const double rhs = factor *
                                   std::pow(lp_norm(lam.coeffs(), Rational::infinity()),
                                            1.0 - theta) *
                                   std::pow(morrey_level_norm(
                                                lam, MorreyLevelParams(c.u1, c.p1)),
                                            theta);
                CHECK(lhs <= rhs * (1.0 + 1e-12));
            }
        }
    }
}
