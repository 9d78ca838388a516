#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace morrey {

enum class FitMode { PowerLaw, Geometric };

/// Least-squares line through (x, log value) with x = log k (PowerLaw) or
/// x = k (Geometric). Natural logarithms; a PowerLaw slope is the exponent
/// of k, a Geometric slope is per unit k.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    long long k_min = 0;
    long long k_max = 0;
    bool degenerate = false;  // constant column: slope 0, r_squared reported as 0
};

inline FitResult fit_decay(std::span<const long long> ks, std::span<const double> values,
                           FitMode mode) {
    if (ks.size() != values.size())
        throw std::invalid_argument("fit_decay: length mismatch");
    if (ks.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 points");
    std::vector<double> xs, ys;
    xs.reserve(ks.size());
    ys.reserve(ks.size());
    long long kmin = ks[0], kmax = ks[0];
    for (size_t i = 0; i < ks.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw std::invalid_argument("fit_decay: values must be positive and finite");
        kmin = std::min(kmin, ks[i]);
        kmax = std::max(kmax, ks[i]);
        const double k = static_cast<double>(ks[i]);
        xs.push_back(mode == FitMode::PowerLaw ? std::log(k) : k);
        ys.push_back(std::log(values[i]));
    }
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult out;
    out.k_min = kmin;
    out.k_max = kmax;
    if (sxx == 0.0) throw std::invalid_argument("fit_decay: degenerate abscissa");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    if (syy == 0.0) {
        out.degenerate = true;  // constant column; r^2 undefined
        out.slope = 0.0;
        out.intercept = my;
        out.r_squared = 0.0;
        return out;
    }
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (out.intercept + out.slope * xs[i]);
        ss_res += e * e;
    }
    out.r_squared = std::min(1.0, std::max(0.0, 1.0 - ss_res / syy));
    return out;
}

}  // namespace morrey
