#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace morrey {

/// Hard cap on lattice size: 2^{jd} coefficients with jd <= 24 bits.
inline constexpr int kMaxLevelBits = 24;

/// Index of the dyadic cube Q_{level,pos} inside the unit cube:
/// side 2^{-level}, corner pos / 2^level, with 0 <= pos[i] < 2^level.
struct CubeIndex {
    int level = 0;
    std::vector<int> pos;

    [[nodiscard]] int dim() const { return static_cast<int>(pos.size()); }

    [[nodiscard]] bool valid() const {
        if (level < 0 || pos.empty()) return false;
        if (level * dim() > kMaxLevelBits) return false;
        const long long side = 1LL << level;
        for (const int m : pos)
            if (m < 0 || m >= side) return false;
        return true;
    }
};

/// true iff Q_{child} is contained in Q_{parent} (reflexive).
inline bool contains(const CubeIndex& parent, const CubeIndex& child) {
    if (parent.dim() != child.dim())
        throw std::invalid_argument("contains: dimension mismatch");
    if (!parent.valid() || !child.valid())
        throw std::invalid_argument("contains: invalid cube index");
    if (parent.level > child.level) return false;
    const int shift = child.level - parent.level;
    for (int i = 0; i < parent.dim(); ++i)
        if ((child.pos[i] >> shift) != parent.pos[i]) return false;
    return true;
}

inline long long cubes_at_level(int dim, int level) {
    if (dim <= 0 || level < 0 || level * dim > kMaxLevelBits)
        throw std::invalid_argument("cubes_at_level: out of supported range");
    return 1LL << (static_cast<long long>(level) * dim);
}

/// Row-major linear index of a level-`level` position vector.
inline long long linear_index(int level, std::span<const int> pos) {
    long long idx = 0;
    for (const int m : pos) idx = (idx << level) | static_cast<unsigned>(m);
    return idx;
}

inline std::vector<int> position_of(int dim, int level, long long idx) {
    std::vector<int> pos(dim);
    const long long mask = (1LL << level) - 1;
    for (int i = dim - 1; i >= 0; --i) {
        pos[i] = static_cast<int>(idx & mask);
        idx >>= level;
    }
    return pos;
}

/// All level-j coefficients of one dyadic level, dense row-major.
class LevelSequence {
public:
    LevelSequence(int dim, int level)
        : dim_(dim), level_(level), coeffs_(check_size(dim, level), 0.0) {}

    LevelSequence(int dim, int level, std::vector<double> coeffs)
        : dim_(dim), level_(level), coeffs_(std::move(coeffs)) {
        if (static_cast<long long>(coeffs_.size()) != check_size(dim, level))
            throw std::invalid_argument("LevelSequence: coefficient count != 2^{jd}");
        for (const double x : coeffs_)
            if (!std::isfinite(x))
                throw std::invalid_argument("LevelSequence: non-finite coefficient");
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] long long size() const { return static_cast<long long>(coeffs_.size()); }
    [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
    [[nodiscard]] std::span<double> coeffs() { return coeffs_; }
    [[nodiscard]] double operator[](long long i) const { return coeffs_[static_cast<size_t>(i)]; }
    double& operator[](long long i) { return coeffs_[static_cast<size_t>(i)]; }

private:
    static long long check_size(int dim, int level) {
        return cubes_at_level(dim, level);
    }

    int dim_;
    int level_;
    std::vector<double> coeffs_;
};

/// Levels 0..J of a coefficient sequence on the unit cube.
class MultiLevelSequence {
public:
    MultiLevelSequence(int dim, int max_level) : dim_(dim) {
        levels_.reserve(max_level + 1);
        for (int j = 0; j <= max_level; ++j) levels_.emplace_back(dim, j);
    }

    explicit MultiLevelSequence(std::vector<LevelSequence> levels)
        : dim_(levels.empty() ? 0 : levels.front().dim()), levels_(std::move(levels)) {
        if (levels_.empty()) throw std::invalid_argument("MultiLevelSequence: empty");
        for (size_t j = 0; j < levels_.size(); ++j)
            if (levels_[j].level() != static_cast<int>(j) || levels_[j].dim() != dim_)
                throw std::invalid_argument("MultiLevelSequence: level/dim mismatch");
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int max_level() const { return static_cast<int>(levels_.size()) - 1; }
    [[nodiscard]] const LevelSequence& level(int j) const { return levels_.at(j); }
    [[nodiscard]] LevelSequence& level(int j) { return levels_.at(j); }

private:
    int dim_;
    std::vector<LevelSequence> levels_;
};

/// Per-cube power sums S(nu,k) = sum_{Q_{j,m} subset Q_{nu,k}} |lambda_{j,m}|^p
/// for every lattice cube with 0 <= nu <= j. table[nu][k] is indexed by the
/// row-major linear index of Q_{nu,k}. Built bottom-up: each parent is the sum
/// of its 2^d children, so total work is proportional to the node count.
class CubePowerTable {
public:
    CubePowerTable(int dim, int level) : dim_(dim), levels_(level + 1) {
        for (int nu = 0; nu <= level; ++nu)
            levels_[nu].assign(static_cast<size_t>(cubes_at_level(dim, nu)), 0.0);
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int level() const { return static_cast<int>(levels_.size()) - 1; }
    [[nodiscard]] std::span<const double> at_level(int nu) const { return levels_.at(nu); }
    [[nodiscard]] std::span<double> at_level(int nu) { return levels_.at(nu); }
    [[nodiscard]] double value(int nu, long long k) const {
        return levels_.at(nu)[static_cast<size_t>(k)];
    }

private:
    int dim_;
    std::vector<std::vector<double>> levels_;
};

namespace detail {

/// Children of the level-nu cube with linear index k are the 2^d level-(nu+1)
/// cubes with coordinates 2 m_i + b_i. Enumerated without decoding to
/// coordinate vectors: the row-major child index interleaves the doubled
/// parent coordinates with the offset bits.
inline void for_each_child(int dim, int nu, long long k, auto&& fn) {
    // Decode parent coordinates once.
    const long long mask = (1LL << nu) - 1;
    long long coords[32];
    long long tmp = k;
    for (int i = dim - 1; i >= 0; --i) {
        coords[i] = tmp & mask;
        tmp >>= nu;
    }
    const int child_level = nu + 1;
    const long long combos = 1LL << dim;
    for (long long bits = 0; bits < combos; ++bits) {
        long long idx = 0;
        for (int i = 0; i < dim; ++i) {
            const long long c = (coords[i] << 1) | ((bits >> (dim - 1 - i)) & 1);
            idx = (idx << child_level) | c;
        }
        fn(idx);
    }
}

}  // namespace detail

/// Bottom-up aggregation of |coef|^p over the dyadic tree.
inline CubePowerTable aggregate_powers(std::span<const double> coeffs, int dim, int level,
                                       double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("aggregate_powers: p must be positive and finite");
    if (static_cast<long long>(coeffs.size()) != cubes_at_level(dim, level))
        throw std::invalid_argument("aggregate_powers: coefficient count != 2^{jd}");
    CubePowerTable table(dim, level);
    auto leaf = table.at_level(level);
    const long long n_leaf = static_cast<long long>(coeffs.size());
    if (p == 1.0) {
        for (long long i = 0; i < n_leaf; ++i) leaf[i] = std::abs(coeffs[i]);
    } else if (p == 2.0) {
        for (long long i = 0; i < n_leaf; ++i) leaf[i] = coeffs[i] * coeffs[i];
    } else {
        for (long long i = 0; i < n_leaf; ++i) leaf[i] = std::pow(std::abs(coeffs[i]), p);
    }
    for (int nu = level - 1; nu >= 0; --nu) {
        auto out = table.at_level(nu);
        const auto in = table.at_level(nu + 1);
        const long long n = cubes_at_level(dim, nu);
        for (long long k = 0; k < n; ++k) {
            double sum = 0.0;
            detail::for_each_child(dim, nu, k, [&](long long c) { sum += in[c]; });
            out[k] = sum;
        }
    }
    return table;
}

inline CubePowerTable aggregate_powers(const LevelSequence& lambda, double p) {
    return aggregate_powers(lambda.coeffs(), lambda.dim(), lambda.level(), p);
}

}  // namespace morrey
