#include "wavemaps/illposed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/error.hpp"

namespace wavemaps {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

constexpr double kPointsPerWave = 16.0;

double ipow(int b, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

}  // namespace

std::vector<double> LacunaryProfile::frequencies() const {
    std::vector<double> f;
    for (int k = kappa0; k <= kappa; ++k) f.push_back(ipow(b, g * k));
    return f;
}

double LacunaryProfile::max_frequency() const { return ipow(b, g * kappa); }

void LacunaryProfile::validate() const {
    if (b < 2) throw ConfigError("b", "base must be at least 2");
    if (g < 1) throw ConfigError("g", "gap must be positive");
    if (ipow(b, g) < 8.0) throw ConfigError("g", "frequency ratio b^g must be at least 8");
    if (kappa0 < 0) throw ConfigError("kappa0", "kappa0 must be nonnegative");
    if (kappa < kappa0) throw ConfigError("kappa", "kappa must be at least kappa0");
    if (max_frequency() > 1e9) throw ConfigError("kappa", "frequencies beyond 1e9 are out of reach");
    if (!(eps_loc > 0.0)) throw ConfigError("eps_loc", "localization width must be positive");
}

Lacunary::Lacunary(LacunaryProfile p) : p_(p) {
    p_.validate();
    n_ = p_.frequencies();
    for (double n : n_) amp_.push_back(1.0 / std::sqrt(n));
}

double Lacunary::psi1(double y) const {
    const double c = chi(y / p_.eps_loc);
    if (c == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < n_.size(); ++k) s += amp_[k] * std::sin(n_[k] * y);
    return c * s;
}

double Lacunary::psi2(double y) const {
    const double c = chi(y / p_.eps_loc);
    if (c == 0.0) return 0.0;
    double s = std::sin(y);
    for (std::size_t k = 0; k < n_.size(); ++k) s += amp_[k] * std::sin((n_[k] - 1.0) * y);
    return c * s;
}

double Lacunary::dpsi1(double y) const {
    const double e = p_.eps_loc;
    const double c = chi(y / e), cp = chi_prime(y / e) / e;
    if (c == 0.0 && cp == 0.0) return 0.0;
    double s = 0.0, ds = 0.0;
    for (std::size_t k = 0; k < n_.size(); ++k) {
        s += amp_[k] * std::sin(n_[k] * y);
        ds += amp_[k] * n_[k] * std::cos(n_[k] * y);
    }
    return c * ds + cp * s;
}

double Lacunary::dpsi2(double y) const {
    const double e = p_.eps_loc;
    const double c = chi(y / e), cp = chi_prime(y / e) / e;
    if (c == 0.0 && cp == 0.0) return 0.0;
    double s = std::sin(y), ds = std::cos(y);
    for (std::size_t k = 0; k < n_.size(); ++k) {
        const double m = n_[k] - 1.0;
        s += amp_[k] * std::sin(m * y);
        ds += amp_[k] * m * std::cos(m * y);
    }
    return c * ds + cp * s;
}

std::pair<Field1D, Field1D> lacunary_fields(const LacunaryProfile& p, const Grid1D& g) {
    const Lacunary L(p);
    if (p.max_frequency() > g.nyquist() / 8.0)
        throw ResolutionError("lacunary frequency " + std::to_string(p.max_frequency()) + " above Nyquist/8 of the grid");
    if (L.support() > 0.5 * g.half_length()) throw SupportError("lacunary fields do not fit in the central half of the grid");
    return {Field1D::from(g, [&](double y) { return L.psi1(y); }),
            Field1D::from(g, [&](double y) { return L.psi2(y); })};
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double eps, double max_freq,
                                       const QuadratureOptions& q)
    : f_(std::move(f)) {
    if (!(q.refine > 0.0)) throw ConfigError("refine", "quadrature refinement must be positive");
    const double wave = 2.0 * std::numbers::pi / std::max(max_freq, 1.0);
    const double len = std::min(wave * 20.0 / kPointsPerWave, 0.02 * eps) / q.refine;
    const double breaks[] = {-2.1 * eps, -2.0 * eps, 2.0 * eps, 2.1 * eps};
    edges_.push_back(breaks[0]);
    for (std::size_t s = 0; s + 1 < std::size(breaks); ++s) {
        const double a = breaks[s], b = breaks[s + 1];
        const auto m = static_cast<std::size_t>(std::ceil((b - a) / len));
        for (std::size_t k = 1; k <= m; ++k) edges_.push_back(k == m ? b : a + (b - a) * double(k) / double(m));
    }
    prefix_.assign(edges_.size(), 0.0);
    for (std::size_t k = 1; k < edges_.size(); ++k) prefix_[k] = prefix_[k - 1] + panel(edges_[k - 1], edges_[k]);
}

double CumulativeIntegral::panel(double a, double b) const { return Gauss::integrate(f_, a, b); }

double CumulativeIntegral::operator()(double y) const {
    if (y <= edges_.front()) return 0.0;
    if (y >= edges_.back()) return total();
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), y);
    const auto k = static_cast<std::size_t>(it - edges_.begin()) - 1;
    return prefix_[k] + (y > edges_[k] ? panel(edges_[k], y) : 0.0);
}

namespace {

CumulativeIntegral picard_integrand(const Lacunary& L, const QuadratureOptions& q) {
    // psi1' psi2^2 oscillates at up to 3 n_max + 3
    return CumulativeIntegral(
        [&L](double y) {
            const double p2 = L.psi2(y);
            return L.dpsi1(y) * p2 * p2;
        },
        L.profile().eps_loc, 3.0 * L.profile().max_frequency() + 3.0, q);
}

}  // namespace

double picard_first_component(const Lacunary& L, double t, double x, const QuadratureOptions& q) {
    if (t < 0.0) throw ConfigError("t", "time must be nonnegative");
    if (t == 0.0) return 0.0;
    const auto I = picard_integrand(L, q);
    return (I(x + t) - I(x - t)) / 8.0;
}

ScanResult divergence_scan(const ScanOptions& opt) {
    if (opt.kappa_max <= opt.kappa0) throw ConfigError("kappa_max", "kappa_max must exceed kappa0");
    if (!(opt.t > 0.0)) throw ConfigError("t", "time must be positive");
    const double eps = opt.eps_loc;

    // x-integral of chi(x/eps) (I(x + t) - I(x - t)) over panels sized like the inner integral
    auto outer = [&](const CumulativeIntegral& I, double max_freq) {
        const CumulativeIntegral J(
            [&](double x) { return chi(x / eps) * (I(x + opt.t) - I(x - opt.t)); }, eps, max_freq, opt.quadrature);
        return J.total();
    };

    const CumulativeIntegral main_inner(
        [&](double y) { return std::pow(chi(y / eps), 3) * (1.0 - std::cos(2.0 * y)); }, eps, 2.0, opt.quadrature);
    ScanResult res;
    res.main_coefficient = -outer(main_inner, 2.0) / 16.0;

    std::vector<double> dk, Js;
    for (int kappa = opt.kappa0 + 1; kappa <= opt.kappa_max; ++kappa) {
        const LacunaryProfile p{opt.b, opt.g, opt.kappa0, kappa, eps};
        const Lacunary L(p);
        const double K = 3.0 * p.max_frequency() + 3.0;
        const auto I = picard_integrand(L, opt.quadrature);
        ScanRow row{};
        row.kappa = kappa;
        row.J = outer(I, K) / 8.0;
        row.predicted = res.main_coefficient * double(kappa - opt.kappa0);
        row.residual = row.J - row.predicted;
        if (opt.norms) {
            // the window is twice the support; the grid grows until the top frequency sits below Nyquist/8
            std::size_t nn = opt.norm_n;
            while (Grid1D(nn, 2.0 * L.support()).nyquist() / 8.0 < p.max_frequency()) nn *= 2;
            const auto [f1, f2] = lacunary_fields(p, Grid1D(nn, 2.0 * L.support()));
            row.psi1_norm = holder_norm(f1, 0.5);
            row.psi2_norm = holder_norm(f2, 0.5);
        }
        res.rows.push_back(row);
        dk.push_back(double(kappa - opt.kappa0));
        Js.push_back(row.J);
    }
    if (dk.size() >= 2) res.fit = linear_fit(dk, Js);
    return res;
}

}  // namespace wavemaps
