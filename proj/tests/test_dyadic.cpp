#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "morrey/dyadic.hpp"

using namespace morrey;

namespace {

CubeIndex cube(int level, std::vector<int> pos) { return CubeIndex{level, std::move(pos)}; }

// Containment decided straight from the interval definition, independent of
// the bit arithmetic in contains().
bool contains_reference(const CubeIndex& parent, const CubeIndex& child) {
    if (parent.level > child.level) return false;
    for (int i = 0; i < parent.dim(); ++i) {
        const double lo_p = parent.pos[i] / std::exp2(parent.level);
        const double hi_p = (parent.pos[i] + 1) / std::exp2(parent.level);
        const double lo_c = child.pos[i] / std::exp2(child.level);
        const double hi_c = (child.pos[i] + 1) / std::exp2(child.level);
        if (lo_c < lo_p || hi_c > hi_p) return false;
    }
    return true;
}

std::vector<CubeIndex> random_cubes(int d, int max_level, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<CubeIndex> out;
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> lev(0, max_level);
        const int level = lev(rng);
        std::vector<int> pos(d);
        std::uniform_int_distribution<int> p(0, (1 << level) - 1);
        for (int c = 0; c < d; ++c) pos[c] = p(rng);
        out.push_back(cube(level, std::move(pos)));
    }
    return out;
}

}  // namespace

TEST_CASE("contains matches the worked examples", "[dyadic]") {
    CHECK(contains(cube(1, {0, 1}), cube(3, {1, 5})));
    CHECK(contains(cube(2, {3, 0}), cube(2, {3, 0})));
    CHECK_FALSE(contains(cube(2, {3}), cube(1, {0})));
    CHECK_THROWS_AS(contains(cube(1, {0}), cube(1, {0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(contains(cube(1, {2}), cube(1, {0})), std::invalid_argument);
}

TEST_CASE("contains is a partial order on the lattice", "[dyadic]") {
    for (const int d : {1, 2, 3}) {
        const auto cubes = random_cubes(d, d == 3 ? 3 : 5, 40, 1234u + d);
        for (const auto& a : cubes) CHECK(contains(a, a));
        for (const auto& a : cubes)
            for (const auto& b : cubes) {
                CHECK(contains(a, b) == contains_reference(a, b));
                if (contains(a, b) && contains(b, a)) {
                    CHECK(a.level == b.level);
                    CHECK(a.pos == b.pos);
                }
                for (const auto& c : cubes)
                    if (contains(a, b) && contains(b, c)) CHECK(contains(a, c));
            }
    }
}

TEST_CASE("aggregate_powers matches the worked examples", "[dyadic]") {
    {
        const LevelSequence lam(1, 1, {1.0, 2.0});
        const auto t = aggregate_powers(lam, 1.0);
        CHECK(t.value(1, 0) == 1.0);
        CHECK(t.value(1, 1) == 2.0);
        CHECK(t.value(0, 0) == 3.0);
    }
    {
        const LevelSequence lam(1, 2, {1.0, 0.0, 0.0, 1.0});
        const auto t = aggregate_powers(lam, 2.0);
        CHECK(t.value(0, 0) == 2.0);
    }
    {
        const LevelSequence zero(2, 2);
        const auto t = aggregate_powers(zero, 0.7);
        for (int nu = 0; nu <= 2; ++nu)
            for (const double s : t.at_level(nu)) CHECK(s == 0.0);
    }
    CHECK_THROWS_AS(aggregate_powers(LevelSequence(1, 1), 0.0), std::invalid_argument);
}

TEST_CASE("tree consistency and flat-sum identity", "[dyadic]") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (const int d : {1, 2}) {
        for (const int j : {1, 2, 3}) {
            LevelSequence lam(d, j);
            for (long long i = 0; i < lam.size(); ++i) lam[i] = unif(rng);
            for (const double p : {0.5, 1.0, 2.0, 3.5}) {
                const auto t = aggregate_powers(lam, p);
                for (int nu = 0; nu < j; ++nu) {
                    for (long long k = 0; k < cubes_at_level(d, nu); ++k) {
                        double child_sum = 0.0;
                        detail::for_each_child(d, nu, k,
                                               [&](long long c) { child_sum += t.value(nu + 1, c); });
                        CHECK(t.value(nu, k) == Catch::Approx(child_sum).epsilon(1e-13));
                    }
                }
                double flat = 0.0;
                for (long long i = 0; i < lam.size(); ++i)
                    flat += std::pow(std::abs(lam[i]), p);
                CHECK(t.value(0, 0) == Catch::Approx(flat).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("sequence types enforce their invariants", "[dyadic]") {
    CHECK_THROWS_AS(LevelSequence(1, 2, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(LevelSequence(1, 1, {1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(LevelSequence(5, 5), std::invalid_argument);  // jd over the cap
    MultiLevelSequence ml(2, 3);
    CHECK(ml.max_level() == 3);
    CHECK(ml.level(2).size() == 16);
    std::vector<LevelSequence> bad;
    bad.emplace_back(1, 1);
    CHECK_THROWS_AS(MultiLevelSequence(std::move(bad)), std::invalid_argument);
}

TEST_CASE("linear index round trip", "[dyadic]") {
    for (const int d : {1, 2, 3}) {
        const int j = d == 3 ? 2 : 3;
        for (long long idx = 0; idx < cubes_at_level(d, j); ++idx) {
            const auto pos = position_of(d, j, idx);
            CHECK(linear_index(j, pos) == idx);
        }
    }
}
