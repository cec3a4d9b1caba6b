#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "wavemaps/grid.hpp"
#include "wavemaps/rng.hpp"

namespace testing_support {

using wavemaps::Field1D;
using wavemaps::Grid1D;

// random trigonometric polynomial with integer-ish frequencies xi_k, 1 <= k <= kmax
inline Field1D random_band_limited(const Grid1D& g, std::size_t kmax, std::uint64_t seed, bool with_mean = true) {
    wavemaps::Rng rng(seed, 77);
    const double a0 = with_mean ? rng.normal() : 0.0;
    std::vector<double> a(kmax + 1), b(kmax + 1);
    for (std::size_t k = 1; k <= kmax; ++k) {
        a[k] = rng.normal() / static_cast<double>(k);
        b[k] = rng.normal() / static_cast<double>(k);
    }
    return Field1D::from(g, [&](double x) {
        double s = a0;
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double w = g.freq(static_cast<double>(k));
            s += a[k] * std::cos(w * x) + b[k] * std::sin(w * x);
        }
        return s;
    });
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace testing_support
