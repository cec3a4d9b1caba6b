#include "wavemaps/enhanced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/error.hpp"
#include "wavemaps/fft.hpp"

namespace wavemaps {

namespace {

constexpr Sign kSigns[] = {Sign::plus, Sign::minus};

std::size_t idx(Sign s) { return s == Sign::plus ? 0 : 1; }

const std::vector<Field1D>& side(const LinearWaves& w, Sign s) { return s == Sign::plus ? w.plus : w.minus; }

void check_scale(const Grid1D& g, double M) {
    const auto sc = g.scales();
    if (std::find(sc.begin(), sc.end(), M) == sc.end())
        throw ResolutionError("scale " + std::to_string(M) + " is not a resolved dyadic scale");
}

// P_M f (or its derivative), evaluated at x - t
std::vector<double> piece(const Grid1D& g, const std::vector<cplx>& c, double M, bool deriv, double t) {
    std::vector<cplx> d(c.size(), 0.0);
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        const double xi = g.freq(static_cast<double>(k));
        const double w = dyadic_symbol(xi, M);
        if (w == 0.0) continue;
        cplx z = c[k] * w;
        if (deriv) z *= cplx(0.0, xi);
        if (t != 0.0) z *= std::polar(1.0, -xi * t);
        d[k] = z;
    }
    return irfft(d, g.size());
}

struct Spectra {
    Grid1D grid;
    std::size_t D;
    std::vector<std::vector<cplx>> c[2];

    explicit Spectra(const LinearWaves& w) : grid(w.grid), D(w.dim()) {
        if (w.plus.size() != w.minus.size()) throw Error("wave component counts differ");
        for (Sign s : kSigns)
            for (const auto& f : side(w, s)) {
                require_same(grid, f.grid, "enhanced data");
                c[idx(s)].push_back(rfft(f.v));
            }
    }
};

// pieces[sign][comp][scale][deriv]; plain pieces at x - t, derivative pieces at x + t
struct Bank {
    std::size_t D, S;
    std::vector<std::vector<double>> data;

    Bank(const Spectra& sp, const std::vector<double>& scales, double t) : D(sp.D), S(scales.size()) {
        data.resize(2 * D * S * 2);
        for (Sign s : kSigns)
            for (std::size_t m = 0; m < D; ++m)
                for (std::size_t k = 0; k < S; ++k) {
                    at_mut(s, m, k, false) = piece(sp.grid, sp.c[idx(s)][m], scales[k], false, t);
                    at_mut(s, m, k, true) = piece(sp.grid, sp.c[idx(s)][m], scales[k], true, -t);
                }
    }
    std::vector<double>& at_mut(Sign s, std::size_t m, std::size_t k, bool d) {
        return data[((idx(s) * D + m) * S + k) * 2 + (d ? 1 : 0)];
    }
    const std::vector<double>& at(Sign s, std::size_t m, std::size_t k, bool d) const {
        return data[((idx(s) * D + m) * S + k) * 2 + (d ? 1 : 0)];
    }
};

// block sups of f for the grid scales whose band meets [0, support]
std::vector<double> limited_sups(const Grid1D& g, const std::vector<double>& f, double support) {
    const auto c = rfft(f);
    std::vector<double> out;
    std::vector<cplx> d(c.size());
    for (double N : g.scales()) {
        if (N > 1.0 && 7.0 * N / 16.0 > support) break;
        std::fill(d.begin(), d.end(), cplx(0.0));
        for (std::size_t k = 0; k < c.size(); ++k) d[k] = c[k] * dyadic_symbol(g.freq(static_cast<double>(k)), N);
        const auto p = irfft(d, g.size());
        double m = 0.0;
        for (double a : p) m = std::max(m, std::abs(a));
        out.push_back(m);
    }
    return out;
}

double weighted(const std::vector<double>& sups, const std::vector<double>& scales, double gamma) {
    double best = 0.0;
    for (std::size_t k = 0; k < sups.size(); ++k) best = std::max(best, std::pow(scales[k], gamma) * sups[k]);
    return best;
}

void guard_alias(const Grid1D& g, double M, double N) {
    if (9.0 / 8.0 * (M + N) > g.nyquist())
        throw AliasingError("product of scales " + std::to_string(M) + " and " + std::to_string(N) +
                            " exceeds the grid band");
}

std::vector<double> times(const std::vector<double>& a, const std::vector<double>& b, double c) {
    std::vector<double> p(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) p[j] = c * a[j] * b[j];
    return p;
}

struct Branches {
    double products = 0.0;
    double shifted = 0.0;
};

// B == nullptr: norms of A's products; otherwise norms of the differences
Branches scan(const Spectra& A, const Spectra* B, const DsOptions& opt, std::vector<DsEntry>* table) {
    const Grid1D& g = A.grid;
    std::vector<double> scales = opt.scales.empty() ? g.scales() : opt.scales;
    for (double M : scales) check_scale(g, M);
    const auto all = g.scales();
    const double gamma = opt.s - 1.0;
    Branches out;

    auto run = [&](double t, bool shifted) {
        const Bank a(A, scales, t);
        std::optional<Bank> b;
        if (B) b.emplace(*B, scales, t);
        double best = 0.0;
        for (Sign s1 : kSigns)
            for (Sign s2 : kSigns) {
                if (shifted && s1 == s2) continue;
                for (std::size_t m = 0; m < A.D; ++m)
                    for (std::size_t n = 0; n < A.D; ++n)
                        for (std::size_t i = 0; i < scales.size(); ++i)
                            for (std::size_t k = 0; k < scales.size(); ++k) {
                                const double M = scales[i], N = scales[k];
                                if (!comparable(M, N)) continue;
                                guard_alias(g, M, N);
                                const double w = std::pow(M, opt.s);
                                auto p = times(a.at(s1, m, i, false), a.at(s2, n, k, true), w);
                                if (b) {
                                    const auto q = times(b->at(s1, m, i, false), b->at(s2, n, k, true), w);
                                    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= q[j];
                                }
                                const double v = weighted(limited_sups(g, p, 9.0 / 8.0 * (M + N)), all, gamma);
                                best = std::max(best, v);
                                if (table) table->push_back({s1, s2, m, n, M, N, t, v, shifted});
                            }
            }
        return best;
    };

    out.products = std::sqrt(run(0.0, false));
    double sh = 0.0;
    for (double t : opt.t_samples) sh = std::max(sh, run(t, true));
    out.shifted = std::sqrt(sh);
    return out;
}

double linear_branch(const LinearWaves& w, double s) {
    return holder_norm(std::span<const Field1D>(w.plus), s) + holder_norm(std::span<const Field1D>(w.minus), s);
}

}  // namespace

const char* sign_name(Sign s) { return s == Sign::plus ? "+" : "-"; }

Field1D hhl_product(const LinearWaves& w, Sign a, Sign b, std::size_t m, std::size_t n, double M, double N,
                    double s, double t) {
    if (m >= w.dim() || n >= w.dim()) throw Error("component index out of range");
    const Grid1D& g = w.grid;
    check_scale(g, M);
    check_scale(g, N);
    guard_alias(g, M, N);
    const auto& f = side(w, a)[m];
    const auto& h = side(w, b)[n];
    require_same(f.grid, h.grid, "hhl_product");
    const auto p = piece(g, rfft(f.v), M, false, t);
    const auto q = piece(g, rfft(h.v), N, true, -t);
    return Field1D(g, times(p, q, std::pow(M, s)));
}

std::vector<double> default_shifts(std::size_t count, double T) {
    std::vector<double> t(count);
    if (count == 1) return {0.0};
    for (std::size_t k = 0; k < count; ++k)
        t[k] = -T + 2.0 * T * static_cast<double>(k) / static_cast<double>(count - 1);
    return t;
}

LinearWaves windowed(const LinearWaves& w) {
    LinearWaves out = w;
    for (auto& f : out.plus) f = rewindow(f);
    for (auto& f : out.minus) f = rewindow(f);
    for (auto& f : out.dplus) f = rewindow(f);
    for (auto& f : out.dminus) f = rewindow(f);
    return out;
}

DsResult ds_norm(const LinearWaves& w, const DsOptions& opt) {
    DsResult r;
    const Spectra A(w);
    const auto br = scan(A, nullptr, opt, opt.keep_table ? &r.table : nullptr);
    r.linear = linear_branch(w, opt.s);
    r.products = br.products;
    r.shifted = br.shifted;
    r.value = std::max({r.linear, r.products, r.shifted});
    return r;
}

double ds_distance(const LinearWaves& a, const LinearWaves& b, const DsOptions& opt) {
    require_same(a.grid, b.grid, "ds_distance");
    if (a.dim() != b.dim()) throw GridMismatch("ds_distance: component counts differ");
    LinearWaves diff = a;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        diff.plus[i] -= b.plus[i];
        diff.minus[i] -= b.minus[i];
    }
    const Spectra A(a), B(b);
    const auto br = scan(A, &B, opt, nullptr);
    return std::max({linear_branch(diff, opt.s), br.products, br.shifted});
}

HhlReport hhl_scaling_report(const LinearWaves& w, const HhlOptions& opt) {
    const Spectra sp(w);
    const Grid1D& g = w.grid;
    const auto all = g.scales();
    HhlReport rep;
    rep.scales = opt.scales.empty() ? all : opt.scales;
    for (double M : rep.scales) check_scale(g, M);
    rep.column.assign(rep.scales.size(), 0.0);

    const Bank bank(sp, all, 0.0);
    std::vector<double> lemma_norm(all.size() * all.size(), 0.0);
    for (Sign s1 : kSigns)
        for (Sign s2 : kSigns)
            for (std::size_t m = 0; m < sp.D; ++m)
                for (std::size_t n = 0; n < sp.D; ++n)
                    for (std::size_t i = 0; i < all.size(); ++i)
                        for (std::size_t k = 0; k < all.size(); ++k) {
                            const double M = all[i], N = all[k];
                            const auto col = std::find(rep.scales.begin(), rep.scales.end(), M);
                            const bool in_column = col != rep.scales.end() && comparable(M, N);
                            if (!in_column && !less_sim(M, N)) continue;
                            guard_alias(g, M, N);
                            const auto p = times(bank.at(s1, m, i, false), bank.at(s2, n, k, true), 1.0);
                            const auto sups = limited_sups(g, p, 9.0 / 8.0 * (M + N));
                            if (in_column) {
                                auto& c = rep.column[static_cast<std::size_t>(col - rep.scales.begin())];
                                c = std::max(c, std::pow(M, opt.s) * weighted(sups, all, opt.s - 1.0));
                            }
                            if (less_sim(M, N)) {
                                auto& l = lemma_norm[i * all.size() + k];
                                l = std::max(l, weighted(sups, all, opt.r - 1.0));
                            }
                        }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rep.scales.size(); ++i)
        if (rep.column[i] > 0.0) pts.emplace_back(rep.scales[i], rep.column[i]);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.fit = pts.size() >= 3 ? scaling_slope(pts) : Fit{nan, nan, nan};

    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t k = 0; k < all.size(); ++k) {
            if (!less_sim(all[i], all[k])) continue;
            const double bound = std::pow(all[i], -opt.s) * std::pow(all[k], opt.r - opt.s);
            const double v = lemma_norm[i * all.size() + k];
            rep.lemma.push_back({all[i], all[k], v, v / bound});
            rep.lemma_max_ratio = std::max(rep.lemma_max_ratio, v / bound);
        }
    DsOptions dopt;
    dopt.s = opt.s;
    dopt.t_samples = opt.t_samples;
    rep.ds_value = ds_norm(w, dopt).value;
    rep.lemma_holds = rep.lemma_max_ratio <= opt.lemma_constant * rep.ds_value * rep.ds_value;
    return rep;
}

}  // namespace wavemaps
