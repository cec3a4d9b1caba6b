/// @file test_spectral.cpp
/// @brief Littlewood-Paley toolbox: symbols, projections, norms, para-products, Duhamel

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "support.hpp"
#include "wavemaps/cutoff.hpp"
#include "wavemaps/spectral.hpp"

using namespace wavemaps;
using testing_support::max_abs_diff;
using testing_support::random_band_limited;

namespace {

const Grid1D kPi256(256, std::numbers::pi);

Field1D sine(const Grid1D& g, double m) {
    return Field1D::from(g, [m](double x) { return std::sin(m * x); });
}

Field2D gaussian2d(std::size_t n) {
    const Grid1D g(n, 4.0);
    return Field2D::from(g, g, [](double u, double v) {
        return std::exp(-(u - 0.2) * (u - 0.2) / 0.18 - (v + 0.1) * (v + 0.1) / 0.18) * (1.0 + 0.5 * u);
    });
}

}  // namespace

TEST_CASE("rho plateaus, support and evenness") {
    CHECK(rho(0.5) == 1.0);
    CHECK(rho(0.875) == 1.0);
    CHECK(rho(1.2) == 0.0);
    CHECK(rho(1.125) == 0.0);
    Rng rng(1, 0);
    for (int k = 0; k < 100; ++k) {
        const double xi = 3.0 * rng.uniform();
        CHECK(rho(-xi) == rho(xi));
    }
    double prev = 1.0;
    for (double xi = 0.875; xi <= 1.125; xi += 1e-3) {
        CHECK(rho(xi) <= prev);
        prev = rho(xi);
    }
}

TEST_CASE("dyadic symbols telescope and vanish below 7N/16") {
    for (double xi = -40.0; xi <= 40.0; xi += 0.173) {
        double sum = 0.0;
        for (double N = 1.0; N <= 32.0; N *= 2.0) sum += rho_N(xi, N);
        CHECK(sum == doctest::Approx(rho(xi / 32.0)).epsilon(1e-14));
    }
    // rho(1/2) = 1 but 1 lies inside the transition band, where rho(1) = 1/2
    CHECK(rho_N(1.0, 2.0) == doctest::Approx(1.0 - rho(1.0)));
    CHECK(rho(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double N = 2.0; N <= 1024.0; N *= 2.0)
        for (double xi = 0.0; xi <= 7.0 * N / 16.0; xi += N / 512.0) CHECK(rho_N(xi, N) == 0.0);
}

TEST_CASE("projections of constants and sines") {
    const Field1D c = Field1D::from(kPi256, [](double) { return 2.5; });
    CHECK(max_abs_diff(lp_project(c, 1.0).v, c.v) < 1e-13);
    for (double N = 2.0; N <= kPi256.max_scale(); N *= 2.0) CHECK(lp_project(c, N).sup() < 1e-13);
    for (int m : {1, 3, 7, 12, 20, 27}) {
        const Field1D s = sine(kPi256, m);
        for (double N : kPi256.scales()) {
            Field1D expect = rho_N(m, N) * s;
            CHECK(max_abs_diff(lp_project(s, N).v, expect.v) < 1e-12);
        }
    }
    CHECK_THROWS_AS(lp_project(c, 64.0), ResolutionError);
    CHECK_THROWS_AS(lp_project(c, 3.0), ResolutionError);
}

TEST_CASE("disjoint supports and commuting projections") {
    const Field1D f = random_band_limited(kPi256, 28, 3);
    for (double M : kPi256.scales())
        for (double N : kPi256.scales()) {
            const auto a = lp_project(lp_project(f, N), M);
            const auto b = lp_project(lp_project(f, M), N);
            CHECK(max_abs_diff(a.v, b.v) < 1e-12);
            if (M >= 4 * N || N >= 4 * M) CHECK(a.sup() < 1e-12);
        }
    const Grid1D g(64, std::numbers::pi);
    Field2D F = Field2D::from(g, g, [](double u, double v) { return std::sin(3 * u) * std::cos(5 * v) + u * 0; });
    for (double N1 : {1.0, 4.0})
        for (double N2 : {2.0, 8.0}) {
            const auto a = lp_project(lp_project(F, Axis::u, N1), Axis::v, N2);
            const auto b = lp_project(lp_project(F, Axis::v, N2), Axis::u, N1);
            CHECK(max_abs_diff(a.v, b.v) < 1e-12);
        }
}

TEST_CASE("partition of unity on the resolved band") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Field1D f = random_band_limited(kPi256, 28, seed);
        Field1D sum(kPi256);
        for (double N : kPi256.scales()) sum += lp_project(f, N);
        CHECK(max_abs_diff(sum.v, f.v) <= 1e-10);
    }
}

TEST_CASE("low-pass plateau and telescoping") {
    const Field1D f = random_band_limited(kPi256, 14, 9);
    CHECK(max_abs_diff(low_pass(f, 16.0).v, f.v) < 1e-12);
    const Field1D g = random_band_limited(kPi256, 40, 10);
    Field1D sum(kPi256);
    for (double M = 1.0; M <= 16.0; M *= 2.0) sum += lp_project(g, M);
    CHECK(max_abs_diff(low_pass(g, 16.0).v, sum.v) < 1e-12);
    const Field1D s = sine(kPi256, 16);
    CHECK(max_abs_diff(low_pass(s, 16.0).v, (rho(1.0) * s).v) < 1e-12);
}

TEST_CASE("fattened projection is the sum over comparable scales") {
    const Field1D f = random_band_limited(kPi256, 28, 4);
    CHECK(max_abs_diff(lp_project(f, 4.0, true).v, f.v) < 1e-12);
    for (double xi = 0.0; xi < 5000.0; xi += 3.7) {
        double sum = 0.0;
        for (double M = 1.0; M < 2048.0 * 1024.0; M *= 2.0)
            if (comparable(M, 2048.0)) sum += rho_N(xi, M);
        CHECK(fattened_symbol(xi, 2048.0) == doctest::Approx(sum).epsilon(1e-13));
    }
}

TEST_CASE("Hoelder norm oracles") {
    const Field1D c = Field1D::from(kPi256, [](double) { return -1.5; });
    for (double g : {-0.55, 0.0, 0.45, 2.0}) CHECK(holder_norm(c, g) == doctest::Approx(1.5).epsilon(1e-12));
    const Field1D f = random_band_limited(kPi256, 20, 5);
    CHECK(holder_norm(-3.0 * f, 0.3) == doctest::Approx(3.0 * holder_norm(f, 0.3)).epsilon(1e-12));

    const Grid1D big(1024, std::numbers::pi);
    const Field1D s = sine(big, 64);
    double expect = 0.0;
    for (double N : big.scales()) expect = std::max(expect, std::sqrt(N) * std::abs(rho_N(64.0, N)));
    CHECK(holder_norm(s, 0.5) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("Bernstein-type bound for a single block") {
    const Grid1D g(512, std::numbers::pi);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Field1D f = random_band_limited(g, 56, seed);
        for (double N : g.scales())
            for (auto [gam, gam2] : {std::pair{0.45, -0.55}, std::pair{0.45, 0.0}, std::pair{1.0, 0.45}}) {
                const double lhs = holder_norm(lp_project(f, N), gam);
                CHECK(lhs <= 21.0 * std::pow(N, gam - gam2) * holder_norm(f, gam2));
            }
    }
}

TEST_CASE("product norm oracles") {
    const Grid1D g(64, std::numbers::pi);
    const Field1D a = random_band_limited(g, 6, 11);
    const Field2D F = Field2D::from(g, g, [&](double u, double) {
        const auto j = static_cast<std::size_t>(std::lround((u + g.half_length()) / g.h()));
        return a.v[j];
    });
    CHECK(product_norm(F, 0.45, 0.3) == doctest::Approx(holder_norm(a, 0.45)).epsilon(1e-12));
    const double single = lp_project(lp_project(F, Axis::u, 2.0), Axis::v, 1.0).sup();
    CHECK(product_norm(F, 0.0, 0.0) >= single);

    const Grid1D h(128, std::numbers::pi);
    const Field2D S = Field2D::from(h, h, [](double u, double v) { return std::sin(8 * u) * std::sin(8 * v); });
    double expect = 0.0;
    for (double N1 : h.scales())
        for (double N2 : h.scales())
            expect = std::max(expect, std::pow(N1, 0.45) * std::pow(N2, -0.2) * std::abs(rho_N(8, N1) * rho_N(8, N2)));
    CHECK(product_norm(S, 0.45, -0.2) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("para-products partition the product") {
    const Grid1D g(256, std::numbers::pi);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Field1D f = random_band_limited(g, 28, seed);
        const Field1D h = random_band_limited(g, 28, seed + 100);
        const Field1D fg = f * h;
        const Field1D ll = paraproduct(f, h, Para::ll), sim = paraproduct(f, h, Para::sim),
                      gg = paraproduct(f, h, Para::gg);
        CHECK(max_abs_diff((ll + sim + gg).v, fg.v) <= 1e-10);
        CHECK(max_abs_diff(paraproduct(f, h, Para::lesssim).v, (ll + sim).v) <= 1e-10);
        CHECK(max_abs_diff(paraproduct(f, h, Para::notsim).v, (ll + gg).v) <= 1e-10);
        CHECK(max_abs_diff(paraproduct(f, h, Para::gg).v, paraproduct(h, f, Para::ll).v) <= 1e-12);
        const Field1D a = paraproduct(f, h, Para::ll_sigma, 0.5), b = paraproduct(f, h, Para::gtrsim_sigma, 0.5);
        CHECK(max_abs_diff((a + b).v, fg.v) <= 1e-10);
    }
}

TEST_CASE("para-products with well separated scales") {
    // 2^14 points resolve scales up to 2048, enough for 2^{-10} separation
    const Grid1D g(16384, std::numbers::pi);
    const Field1D low = Field1D::from(g, [](double x) { return 0.7 + std::cos(x); });
    const Field1D high = Field1D::from(g, [](double x) { return std::sin(1500 * x); });
    const Field1D ll = paraproduct(low, high, Para::ll);
    CHECK(max_abs_diff(ll.v, (low * high).v) < 1e-10);
    CHECK(paraproduct(low, high, Para::sim).sup() < 1e-10);
    CHECK(max_abs_diff(paraproduct(high, low, Para::gg).v, ll.v) < 1e-12);
    const Field1D c = Field1D::from(kPi256, [](double) { return 3.0; });
    CHECK(paraproduct(c, random_band_limited(kPi256, 20, 2), Para::ll).sup() == 0.0);
}

TEST_CASE("down para-product keeps only low output frequencies") {
    const Grid1D g(1024, std::numbers::pi);
    const Field1D f = Field1D::from(g, [](double x) { return std::sin(96 * x); });
    const Field1D h = Field1D::from(g, [](double x) { return std::sin(97 * x); });
    // product = (cos(x) - cos(193 x)) / 2; sigma = 0.5 keeps K <= 8
    const Field1D d = paraproduct(f, h, Para::down, 0.5);
    const Field1D expect = Field1D::from(g, [](double x) { return 0.5 * std::cos(x); });
    CHECK(max_abs_diff(d.v, expect.v) < 1e-12);
}

TEST_CASE("aliasing guard") {
    const Field1D a = sine(kPi256, 100), b = sine(kPi256, 60);
    CHECK_THROWS_AS(product(a, b), AliasingError);
    CHECK_THROWS_AS(paraproduct(a, b, Para::sim), AliasingError);
}

TEST_CASE("commutator") {
    const Field1D c = Field1D::from(kPi256, [](double) { return 1.7; });
    const Field1D g = random_band_limited(kPi256, 28, 3);
    for (double K : kPi256.scales()) CHECK(commutator_apply(c, g, K).sup() < 1e-12);
    const Field1D lo = Field1D::from(kPi256, [](double x) { return std::cos(x); });
    const Field1D lo2 = Field1D::from(kPi256, [](double x) { return std::sin(2 * x); });
    CHECK(commutator_apply(lo, lo2, 32.0).sup() < 1e-12);

    // lacunary f of regularity alpha: block K carries K^-alpha cos(3K/4 x)
    const Grid1D big(2048, std::numbers::pi);
    const double alpha = 0.3;
    const Field1D f = Field1D::from(big, [&](double x) {
        double s = 0.0;
        for (double K = 8.0; K <= 256.0; K *= 2.0) s += std::pow(K, -alpha) * std::cos(0.75 * K * x);
        return s;
    });
    std::vector<std::pair<double, double>> pts;
    const Field1D cosx = Field1D::from(big, [](double x) { return std::cos(x); });
    for (double K = 8.0; K <= 128.0; K *= 2.0) pts.emplace_back(K, commutator_apply(f, cosx, K).sup());
    CHECK(std::abs(scaling_slope(pts).slope - (0.0 - alpha)) <= 0.15);
}

TEST_CASE("traces") {
    const Grid1D g(32, 2.0);
    const Field2D F = Field2D::from(g, g, [](double u, double) { return std::sin(u); });
    CHECK(max_abs_diff(trace_diag(F).v, Field1D::from(g, [](double x) { return std::sin(x); }).v) < 1e-15);
    const Field2D G = Field2D::from(g, g, [](double u, double v) { return u * v + std::cos(u - 2 * v); });
    CHECK(max_abs_diff(trace_diag(trace_u(G)).v, trace_diag(G).v) == 0.0);
    CHECK(max_abs_diff(trace_diag(trace_v(G)).v, trace_diag(G).v) == 0.0);
    const Field2D P = Field2D::from(g, g, [](double u, double v) { return u * v; });
    const Field1D t = trace_diag(P);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(t.v[j] == g.x(j) * g.x(j));
    CHECK_THROWS_AS(trace_diag(Field2D(g, Grid1D(64, 2.0))), GridMismatch);
}

TEST_CASE("trace estimate sanity against the product norm") {
    const Grid1D g(64, std::numbers::pi);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed, 5);
        const std::size_t K = 6;
        std::vector<double> c(4 * K * K);
        for (double& a : c) a = rng.normal();
        const Field2D F = Field2D::from(g, g, [&](double u, double v) {
            double s = 0.0;
            for (std::size_t p = 0; p < K; ++p)
                for (std::size_t q = 0; q < K; ++q) {
                    const double* w = &c[4 * (p * K + q)];
                    s += (w[0] * std::cos(p * u) + w[1] * std::sin(p * u)) *
                         (w[2] * std::cos(q * v) + w[3] * std::sin(q * v)) / (1.0 + p + q);
                }
            return s;
        });
        const double ratio = holder_norm(trace_diag(F), 0.45) / product_norm(F, 0.45, 0.45);
        worst = std::max(worst, ratio);
    }
    MESSAGE("largest trace ratio " << worst);
    CHECK(worst <= 30.0);
}

TEST_CASE("integration") {
    const Grid1D g(512, 4.0);
    CHECK(integrate(Field1D(g)).sup() == 0.0);
    auto bump = [](double x) {
        const double r = x / 1.5;
        return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) * (1.0 + x) : 0.0;
    };
    const Field1D f = Field1D::from(g, bump);
    const Field1D I = integrate(f);
    CHECK(I.v[g.origin()] == 0.0);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(bump, 0.0, x, 15, 1e-14);
        err = std::max(err, std::abs(I.v[j] - ref));
    }
    CHECK(err <= 1e-8);
    const Field1D wide = Field1D::from(g, [](double x) { return std::exp(-x * x); });
    CHECK_THROWS_AS(integrate(wide), SupportError);
    const Field1D w = rewindow(Field1D::from(g, [](double) { return 1.0; }));
    CHECK(w.v[g.origin()] == 1.0);
    CHECK(w.v[0] == 0.0);
}

TEST_CASE("Duhamel: both representations, refinement and the wave equation") {
    CHECK(duhamel(Field2D(Grid1D(32, 4.0))).sup() == 0.0);
    std::vector<double> gaps, residuals;
    for (std::size_t n : {128, 256, 512}) {
        const Field2D F = gaussian2d(n);
        const Field2D Dd = duhamel(F, DuhamelMethod::direct);
        const Field2D Df = duhamel(F, DuhamelMethod::factorized);
        gaps.push_back((Dd - Df).sup());
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(Df(i, i)) < 1e-12);
        // interior mixed difference of the direct scheme
        const double h = F.gu.h();
        double res = 0.0;
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i)
            for (std::size_t j = n / 4; j < 3 * n / 4; ++j) {
                const double mixed =
                    (Dd(i + 1, j + 1) - Dd(i + 1, j - 1) - Dd(i - 1, j + 1) + Dd(i - 1, j - 1)) / (4 * h * h);
                res = std::max(res, std::abs(mixed - F(i, j)));
            }
        residuals.push_back(res);
    }
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        const double ratio = gaps[k] / gaps[k + 1];
        MESSAGE("direct/factorized gap ratio " << ratio);
        CHECK(ratio >= 3.4);
        CHECK(ratio <= 4.6);
        CHECK(residuals[k] / residuals[k + 1] >= 3.4);
    }
}

TEST_CASE("Duhamel vanishes to second order at the diagonal") {
    // D(u, u + d) = -d^2 F(u, u) / 2 + O(d^3): value and first transverse derivative vanish
    std::vector<double> err;
    for (std::size_t n : {256, 512}) {
        const Field2D F = gaussian2d(n);
        const Field2D D = duhamel(F, DuhamelMethod::factorized);
        const double h = F.gu.h();
        double e = 0.0;
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
            e = std::max(e, std::abs(D(i, i + 1) + 0.5 * h * h * F(i, i)) / (h * h));
            e = std::max(e, std::abs(D(i + 1, i) + 0.5 * h * h * F(i, i)) / (h * h));
        }
        err.push_back(e);
    }
    CHECK(err[1] < 0.6 * err[0]);
}

TEST_CASE("scaling slope") {
    std::vector<std::pair<double, double>> sq, cst, noisy;
    Rng rng(2, 2);
    for (double s = 1.0; s <= 1024.0; s *= 2.0) {
        sq.emplace_back(s, s * s);
        cst.emplace_back(s, 3.0);
        noisy.emplace_back(s, std::pow(s, 0.45) * (1.0 + 0.01 * rng.normal()));
    }
    const Fit a = scaling_slope(sq);
    CHECK(a.slope == doctest::Approx(2.0));
    CHECK(a.r_squared == doctest::Approx(1.0));
    CHECK(scaling_slope(cst).slope == doctest::Approx(0.0));
    CHECK(std::abs(scaling_slope(noisy).slope - 0.45) < 0.05);
    std::vector<std::pair<double, double>> bad = {{1, 1}, {2, 0}, {4, 1}};
    CHECK_THROWS(scaling_slope(bad));
}
