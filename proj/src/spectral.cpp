#include "wavemaps/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "wavemaps/cutoff.hpp"

namespace wavemaps {

namespace {

bool is_dyadic(double N) {
    if (!(N >= 1.0) || !std::isfinite(N)) return false;
    int e = 0;
    return std::frexp(N, &e) == 0.5;
}

void check_scale(const Grid1D& g, double N) {
    if (!is_dyadic(N)) throw ResolutionError("scale " + std::to_string(N) + " is not dyadic");
    if (N > g.max_scale())
        throw ResolutionError("scale " + std::to_string(N) + " exceeds resolved band " +
                              std::to_string(g.max_scale()));
}

// copies each line of F along the axis into a Field1D, applies fn, writes back
template <class Fn>
Field2D map_lines(const Field2D& F, Axis axis, Fn&& fn) {
    Field2D out(F.gu, F.gv);
    if (axis == Axis::v) {
        for (std::size_t i = 0; i < F.rows(); ++i) {
            Field1D line(F.gv, std::vector<double>(F.row(i).begin(), F.row(i).end()));
            Field1D r = fn(line, i);
            std::copy(r.v.begin(), r.v.end(), out.row(i).begin());
        }
    } else {
        Field1D line(F.gu);
        for (std::size_t j = 0; j < F.cols(); ++j) {
            for (std::size_t i = 0; i < F.rows(); ++i) line.v[i] = F(i, j);
            Field1D r = fn(line, j);
            for (std::size_t i = 0; i < F.rows(); ++i) out(i, j) = r.v[i];
        }
    }
    return out;
}

Field1D line_of(const Field2D& F, Axis axis, std::size_t k) {
    if (axis == Axis::v) return Field1D(F.gv, std::vector<double>(F.row(k).begin(), F.row(k).end()));
    Field1D line(F.gu);
    for (std::size_t i = 0; i < F.rows(); ++i) line.v[i] = F(i, k);
    return line;
}

Field1D from_spectrum(const Grid1D& g, const std::vector<cplx>& c, double N,
                      double (*symbol)(double, double)) {
    std::vector<cplx> d(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) d[k] = c[k] * symbol(g.freq(static_cast<double>(k)), N);
    return Field1D(g, irfft(d, g.size()));
}

double low_symbol(double xi, double N) { return rho(xi / N); }

double sup_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

}  // namespace

Field1D apply_symbol(const Field1D& f, const std::function<double(double)>& m) {
    auto c = rfft(f.v);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m(f.grid.freq(static_cast<double>(k)));
    return Field1D(f.grid, irfft(c, f.size()));
}

Field2D apply_symbol(const Field2D& F, Axis axis, const std::function<double(double)>& m) {
    return map_lines(F, axis, [&](const Field1D& line, std::size_t) { return apply_symbol(line, m); });
}

double max_frequency(const Field1D& f, double rel_tol) {
    const auto c = rfft(f.v);
    double peak = 0.0;
    for (const auto& a : c) peak = std::max(peak, std::abs(a));
    if (peak == 0.0) return 0.0;
    for (std::size_t k = c.size(); k-- > 0;)
        if (std::abs(c[k]) > rel_tol * peak) return f.grid.freq(static_cast<double>(k));
    return 0.0;
}

double dyadic_symbol(double xi, double N) { return rho_N(xi, N); }

double fattened_symbol(double xi, double N) {
    // telescoped sum of rho_M over dyadic M with N/1024 < M < 1024 N
    const double hi = N * kFatten / 2.0;
    const double lo = std::max(1.0, 2.0 * N / kFatten);
    const double top = rho(xi / hi);
    return lo > 1.0 ? top - rho(2.0 * xi / lo) : top;
}

Field1D lp_project(const Field1D& f, double N, bool fattened) {
    check_scale(f.grid, N);
    const auto c = rfft(f.v);
    return from_spectrum(f.grid, c, N, fattened ? &fattened_symbol : &dyadic_symbol);
}

Field2D lp_project(const Field2D& F, Axis axis, double N, bool fattened) {
    check_scale(axis == Axis::u ? F.gu : F.gv, N);
    return map_lines(F, axis, [&](const Field1D& line, std::size_t) {
        return from_spectrum(line.grid, rfft(line.v), N, fattened ? &fattened_symbol : &dyadic_symbol);
    });
}

Field1D low_pass(const Field1D& f, double N) {
    return from_spectrum(f.grid, rfft(f.v), N, &low_symbol);
}

Field2D low_pass(const Field2D& F, Axis axis, double N) {
    return map_lines(F, axis, [&](const Field1D& line, std::size_t) { return low_pass(line, N); });
}

Field1D derivative(const Field1D& f) {
    auto c = rfft(f.v);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= cplx(0.0, f.grid.freq(static_cast<double>(k)));
    c.back() = 0.0;
    return Field1D(f.grid, irfft(c, f.size()));
}

std::vector<double> block_sups(const Field1D& f) {
    const auto c = rfft(f.v);
    std::vector<double> out;
    for (double N : f.grid.scales()) out.push_back(sup_of(from_spectrum(f.grid, c, N, &dyadic_symbol).v));
    return out;
}

double holder_norm(const Field1D& f, double gamma) {
    const auto sups = block_sups(f);
    const auto scales = f.grid.scales();
    double best = 0.0;
    for (std::size_t k = 0; k < sups.size(); ++k) best = std::max(best, std::pow(scales[k], gamma) * sups[k]);
    return best;
}

double holder_norm(std::span<const Field1D> f, double gamma) {
    if (f.empty()) return 0.0;
    const Grid1D g = f[0].grid;
    std::vector<std::vector<cplx>> spectra;
    for (const auto& c : f) {
        require_same(g, c.grid, "holder_norm");
        spectra.push_back(rfft(c.v));
    }
    double best = 0.0;
    for (double N : g.scales()) {
        std::vector<double> norm2(g.size(), 0.0);
        for (const auto& c : spectra) {
            const auto p = from_spectrum(g, c, N, &dyadic_symbol);
            for (std::size_t j = 0; j < g.size(); ++j) norm2[j] += p.v[j] * p.v[j];
        }
        best = std::max(best, std::pow(N, gamma) * std::sqrt(*std::max_element(norm2.begin(), norm2.end())));
    }
    return best;
}

double product_norm(const Field2D& F, double gamma1, double gamma2) {
    double best = 0.0;
    for (double N1 : F.gu.scales()) {
        const Field2D G = lp_project(F, Axis::u, N1);
        std::vector<std::vector<cplx>> rows;
        for (std::size_t i = 0; i < G.rows(); ++i) rows.push_back(rfft(G.row(i)));
        for (double N2 : F.gv.scales()) {
            double m = 0.0;
            for (const auto& c : rows) m = std::max(m, sup_of(from_spectrum(F.gv, c, N2, &dyadic_symbol).v));
            best = std::max(best, std::pow(N1, gamma1) * std::pow(N2, gamma2) * m);
        }
    }
    return best;
}

void check_product(const Field1D& f, const Field1D& g) {
    require_same(f.grid, g.grid, "product");
    const double band = max_frequency(f) + max_frequency(g);
    if (band > f.grid.nyquist() * (1.0 + 1e-12))
        throw AliasingError("product bands " + std::to_string(band) + " exceed Nyquist " +
                            std::to_string(f.grid.nyquist()));
}

Field1D product(const Field1D& f, const Field1D& g) {
    check_product(f, g);
    return f * g;
}

namespace {

bool para_predicate(Para kind, double M, double N, double sigma) {
    switch (kind) {
        case Para::ll: return much_less(M, N);
        case Para::sim: return comparable(M, N);
        case Para::gg: return much_less(N, M);
        case Para::lesssim: return less_sim(M, N);
        case Para::gtrsim: return less_sim(N, M);
        case Para::notsim: return !comparable(M, N);
        case Para::ll_sigma: return std::log2(M) <= (1.0 - sigma) * std::log2(N);
        case Para::gtrsim_sigma: return std::log2(M) > (1.0 - sigma) * std::log2(N);
        case Para::down: return comparable(M, N);
    }
    return false;
}

// dyadic blocks 1..N_top with sum rho(xi / N_top) = 1 on the field content
std::vector<Field1D> blocks(const Field1D& f, double top) {
    const auto c = rfft(f.v);
    std::vector<Field1D> out;
    for (double N = 1.0; N <= top; N *= 2.0) out.push_back(from_spectrum(f.grid, c, N, &dyadic_symbol));
    return out;
}

}  // namespace

Field1D paraproduct(const Field1D& f, const Field1D& g, Para kind, double sigma) {
    check_product(f, g);
    const double band = std::max(max_frequency(f), max_frequency(g));
    double top = 1.0;
    while (0.875 * top < band) top *= 2.0;
    const auto pf = blocks(f, top);
    const auto pg = blocks(g, top);
    Field1D out(f.grid);
    double M = 1.0;
    for (std::size_t a = 0; a < pf.size(); ++a, M *= 2.0) {
        double N = 1.0;
        for (std::size_t b = 0; b < pg.size(); ++b, N *= 2.0) {
            if (!para_predicate(kind, M, N, sigma)) continue;
            Field1D prod = pf[a] * pg[b];
            if (kind == Para::down) {
                double K = 1.0;
                while (2.0 * K <= std::pow(std::min(M, N), sigma) * (1.0 + 1e-12)) K *= 2.0;
                prod = low_pass(prod, K);
            }
            out += prod;
        }
    }
    return out;
}

Field2D paraproduct(const Field2D& f, const Field2D& g, Axis axis, Para kind, double sigma) {
    require_same(f.gu, g.gu, "paraproduct");
    require_same(f.gv, g.gv, "paraproduct");
    return map_lines(f, axis, [&](const Field1D& line, std::size_t k) {
        return paraproduct(line, line_of(g, axis, k), kind, sigma);
    });
}

Field1D commutator_apply(const Field1D& f, const Field1D& g, double K) {
    check_scale(f.grid, K);
    const Field1D fg = product(f, g);
    return lp_project(fg, K) - f * lp_project(g, K);
}

Field2D commutator_apply(const Field2D& f, const Field2D& g, Axis axis, double K) {
    require_same(f.gu, g.gu, "commutator");
    require_same(f.gv, g.gv, "commutator");
    return map_lines(f, axis, [&](const Field1D& line, std::size_t k) {
        return commutator_apply(line, line_of(g, axis, k), K);
    });
}

Field1D trace_diag(const Field2D& F) {
    require_same(F.gu, F.gv, "trace");
    Field1D out(F.gu);
    for (std::size_t i = 0; i < F.rows(); ++i) out.v[i] = F(i, i);
    return out;
}

Field2D trace_u(const Field2D& F) {
    require_same(F.gu, F.gv, "trace");
    Field2D out(F.gu, F.gv);
    for (std::size_t i = 0; i < F.rows(); ++i)
        for (std::size_t j = 0; j < F.cols(); ++j) out(i, j) = F(i, i);
    return out;
}

Field2D trace_v(const Field2D& F) {
    require_same(F.gu, F.gv, "trace");
    Field2D out(F.gu, F.gv);
    for (std::size_t i = 0; i < F.rows(); ++i)
        for (std::size_t j = 0; j < F.cols(); ++j) out(i, j) = F(j, j);
    return out;
}

namespace {

constexpr double kTailTolerance = 1e-8;

Field1D antiderivative(const Field1D& f) {
    const Grid1D& g = f.grid;
    auto c = rfft(f.v);
    const double mean = c[0].real() / static_cast<double>(g.size());
    c[0] = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) c[k] /= cplx(0.0, g.freq(static_cast<double>(k)));
    c.back() = 0.0;
    Field1D out(g, irfft(c, g.size()));
    const double at0 = out.v[g.origin()];
    for (std::size_t j = 0; j < g.size(); ++j) out.v[j] += mean * g.x(j) - at0;
    out.v[g.origin()] = 0.0;
    return out;
}

}  // namespace

Field1D integrate(const Field1D& f) {
    const Grid1D& g = f.grid;
    double tail = 0.0, total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        total += std::abs(f.v[j]);
        if (std::abs(g.x(j)) > 0.5 * g.half_length()) tail += std::abs(f.v[j]);
    }
    if (tail > kTailTolerance * total)
        throw SupportError("integrand not supported in [-L/2, L/2]: tail fraction " + std::to_string(tail / total));
    return antiderivative(f);
}

Field2D integrate_partial(const Field2D& F, Axis axis) {
    const Grid1D& g = axis == Axis::u ? F.gu : F.gv;
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < F.rows(); ++i)
        for (std::size_t j = 0; j < F.cols(); ++j) {
            const double a = std::abs(F(i, j));
            total += a;
            if (std::abs(g.x(axis == Axis::u ? i : j)) > 0.5 * g.half_length()) tail += a;
        }
    if (tail > kTailTolerance * total)
        throw SupportError("integrand not supported in the central half along the integration axis");
    return map_lines(F, axis, [](const Field1D& line, std::size_t) { return antiderivative(line); });
}

Field1D rewindow(const Field1D& f) {
    Field1D out = f;
    for (std::size_t j = 0; j < f.size(); ++j) out.v[j] *= window(f.grid.x(j), f.grid.half_length());
    return out;
}

namespace {

// second-order march on the characteristic lattice using the cell identity
// D(i+1,j) - D(i+1,j-1) - D(i,j) + D(i,j-1) = integral of F over the cell
Field2D duhamel_direct(const Field2D& F) {
    const std::size_t n = F.rows();
    const double h = F.gu.h();
    const double h2 = h * h;
    Field2D D(F.gu, F.gv);
    auto cell = [&](std::size_t i, std::size_t j) {
        // corners (i, j), (i+1, j), (i, j+1), (i+1, j+1)
        return 0.25 * h2 * (F(i, j) + F(i + 1, j) + F(i, j + 1) + F(i + 1, j + 1));
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        D(i, i + 1) = -h2 / 6.0 * (F(i, i) + F(i, i + 1) + F(i + 1, i + 1));
        D(i + 1, i) = -h2 / 6.0 * (F(i, i) + F(i + 1, i) + F(i + 1, i + 1));
    }
    for (std::size_t d = 2; d < n; ++d) {
        for (std::size_t i = 0; i + d < n; ++i) {
            const std::size_t j = i + d;
            D(i, j) = D(i + 1, j) + D(i, j - 1) - D(i + 1, j - 1) - cell(i, j - 1);
            D(j, i) = D(j, i + 1) - D(j - 1, i + 1) + D(j - 1, i) - cell(j - 1, i);
        }
    }
    return D;
}

Field2D duhamel_factorized(const Field2D& F) {
    const Field2D IuF = integrate_partial(F, Axis::u);
    const Field2D G = IuF - trace_v(IuF);
    const Field2D IvG = integrate_partial(G, Axis::v);
    return IvG - trace_u(IvG);
}

}  // namespace

Field2D duhamel(const Field2D& F, DuhamelMethod method) {
    require_same(F.gu, F.gv, "duhamel");
    return method == DuhamelMethod::direct ? duhamel_direct(F) : duhamel_factorized(F);
}

Fit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) throw Error("fit needs at least two distinct abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = y[k] - (intercept + slope * x[k]);
        ssr += e * e;
    }
    const double r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return {slope, intercept, r2};
}

Fit scaling_slope(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3) throw Error("scaling_slope needs at least 3 pairs");
    std::vector<double> lx, ly;
    for (const auto& [s, v] : pairs) {
        if (!(s > 0.0) || !(v > 0.0)) throw Error("scaling_slope needs positive scales and values");
        lx.push_back(std::log(s));
        ly.push_back(std::log(v));
    }
    return linear_fit(lx, ly);
}

}  // namespace wavemaps
