#include "wavemaps/randomdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

namespace {

constexpr double kDriftLimit = 1e-3;
// sub-step resolution: h_sub times the top forcing frequency
constexpr double kStepResolution = 0.03;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

std::size_t auto_substeps(double h, double kmax) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h * kmax / kStepResolution)));
}

// one RK4 step of dB = lambda P(B) f followed by renormalization; returns the drift
double rk4_step(const Sphere& S, Vec& B, double hs, double lambda, std::span<const double> f0,
                std::span<const double> fm, std::span<const double> f1) {
    const std::size_t D = B.size();
    Vec k1(D), k2(D), k3(D), k4(D), tmp(D);
    S.project(B, f0, k1);
    for (std::size_t i = 0; i < D; ++i) tmp[i] = B[i] + 0.5 * hs * lambda * k1[i];
    S.project(tmp, fm, k2);
    for (std::size_t i = 0; i < D; ++i) tmp[i] = B[i] + 0.5 * hs * lambda * k2[i];
    S.project(tmp, fm, k3);
    for (std::size_t i = 0; i < D; ++i) tmp[i] = B[i] + hs * lambda * k3[i];
    S.project(tmp, f1, k4);
    for (std::size_t i = 0; i < D; ++i) B[i] += hs * lambda / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double n2 = dot(B, B);
    const double drift = std::abs(n2 - 1.0);
    if (drift > kDriftLimit)
        throw ResolutionError("path ODE step drifted " + std::to_string(drift) +
                              " off the sphere; refine the grid or increase eps");
    const double nrm = std::sqrt(n2);
    for (double& b : B) b /= nrm;
    return drift;
}

void check_unit(std::span<const double> B0) {
    if (std::abs(std::sqrt(dot(B0, B0)) - 1.0) > 1e-12) throw Error("basepoint must be a unit vector");
}

// forcing samples on the refined grid x_0 + q h / (2m), q = 0 .. 2 m n - 1
using FineTable = std::vector<std::vector<double>>;

BrownianPath march(const FineTable& table, const Grid1D& grid, std::span<const double> B0, double lambda,
                   std::size_t m) {
    const std::size_t D = B0.size();
    const std::size_t n = grid.size();
    const Sphere S(D);
    BrownianPath out{grid, std::vector<Field1D>(D, Field1D(grid)), std::vector<Field1D>(D, Field1D(grid)),
                     Vec(B0.begin(), B0.end()), 0.0, 0.0};
    const double hs = grid.h() / static_cast<double>(m);
    Vec f0(D), fm(D), f1(D);
    auto load = [&](std::size_t q, Vec& f) {
        for (std::size_t i = 0; i < D; ++i) f[i] = table[i][q];
    };
    auto store = [&](std::size_t j, const Vec& B) {
        for (std::size_t i = 0; i < D; ++i) out.B[i].v[j] = B[i];
    };
    const std::size_t o = grid.origin();
    Vec B(B0.begin(), B0.end());
    store(o, B);
    for (std::size_t j = o; j + 1 < n; ++j) {
        for (std::size_t s = 0; s < m; ++s) {
            const std::size_t q = 2 * m * j + 2 * s;
            load(q, f0);
            load(q + 1, fm);
            load(q + 2, f1);
            out.constraint_drift = std::max(out.constraint_drift, rk4_step(S, B, hs, lambda, f0, fm, f1));
        }
        store(j + 1, B);
    }
    B.assign(B0.begin(), B0.end());
    for (std::size_t j = o; j > 0; --j) {
        for (std::size_t s = 0; s < m; ++s) {
            const std::size_t q = 2 * m * j - 2 * s;
            load(q, f0);
            load(q - 1, fm);
            load(q - 2, f1);
            out.constraint_drift = std::max(out.constraint_drift, rk4_step(S, B, -hs, lambda, f0, fm, f1));
        }
        store(j - 1, B);
    }
    Vec Bj(D), fj(D), d(D);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < D; ++i) Bj[i] = out.B[i].v[j];
        load(2 * m * j, fj);
        S.project(Bj, fj, d);
        for (std::size_t i = 0; i < D; ++i) out.dB[i].v[j] = lambda * d[i];
    }
    return out;
}

}  // namespace

Sphere::Sphere(std::size_t D) : D_(D) {
    if (D < 2) throw Error("sphere target needs D >= 2");
}

void Sphere::project(std::span<const double> p, std::span<const double> X, std::span<double> out) const {
    const double n2 = dot(p, p);
    const double w = n2 > 0.0 ? projection_bump(std::sqrt(n2)) : 0.0;
    const double c = w == 0.0 ? 0.0 : w * dot(p, X) / n2;
    for (std::size_t i = 0; i < D_; ++i) out[i] = X[i] - c * p[i];
}

Vec Sphere::north() const {
    Vec e(D_, 0.0);
    e.back() = 1.0;
    return e;
}

TrigSeries::TrigSeries(const Field1D& f) : grid_(f.grid) {
    const auto c = rfft(f.v);
    const std::size_t n = f.size();
    double peak = 0.0;
    for (const auto& a : c) peak = std::max(peak, std::abs(a));
    std::size_t K = 0;
    for (std::size_t k = 0; k < n / 2; ++k)
        if (std::abs(c[k]) > 1e-15 * peak) K = k;
    coef_.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        coef_[k] = c[k] * ((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
}

double TrigSeries::operator()(double x) const {
    const double xs[1] = {x};
    return sample(xs, false)[0];
}

double TrigSeries::derivative(double x) const {
    const double xs[1] = {x};
    return sample(xs, true)[0];
}

std::vector<double> TrigSeries::sample(std::span<const double> xs, bool deriv) const {
    std::vector<double> out(xs.size());
    const double w1 = grid_.freq(1.0);
    const double L = grid_.half_length();
    for (std::size_t p = 0; p < xs.size(); ++p) {
        const cplx z = std::polar(1.0, w1 * (xs[p] + L));
        cplx zk = 1.0;
        double acc = 0.0;
        for (std::size_t k = 0; k < coef_.size(); ++k) {
            const cplx term = coef_[k] * zk;
            acc += deriv ? -term.imag() * w1 * static_cast<double>(k) : term.real();
            zk *= z;
        }
        out[p] = acc;
    }
    return out;
}

std::vector<Field1D> sample_bm_increments(std::uint64_t seed, const Grid1D& grid, std::size_t D, Stream tag) {
    std::vector<Field1D> W;
    const double sh = std::sqrt(grid.h());
    const std::size_t o = grid.origin();
    for (std::size_t c = 0; c < D; ++c) {
        Rng rng(seed, stream_id(tag, c));
        Field1D w(grid);
        for (std::size_t j = o + 1; j < grid.size(); ++j) w.v[j] = w.v[j - 1] + sh * rng.normal();
        for (std::size_t j = o; j-- > 0;) w.v[j] = w.v[j + 1] - sh * rng.normal();
        W.push_back(std::move(w));
    }
    return W;
}

std::vector<Field1D> FourierBM::full() const {
    std::vector<Field1D> out = oscillatory;
    for (std::size_t c = 0; c < out.size(); ++c)
        for (std::size_t j = 0; j < out[c].size(); ++j) out[c].v[j] += drift[c] * out[c].grid.x(j);
    return out;
}

FourierBM sample_bm_fourier(std::uint64_t seed, std::size_t M_max, const Grid1D& grid, std::size_t D,
                            Stream tag) {
    if (std::abs(grid.half_length() - std::numbers::pi) > 1e-12)
        throw Error("Fourier-series Brownian motion needs L = pi");
    const std::size_t n = grid.size();
    if (M_max >= n / 2) throw ResolutionError("M_max must stay below n/2");
    const double norm = std::sqrt(2.0 * std::numbers::pi);
    FourierBM out;
    out.M_max = M_max;
    for (std::size_t c = 0; c < D; ++c) {
        Rng rng(seed, stream_id(tag, c));
        out.drift.push_back(rng.normal() / norm);
        std::vector<cplx> g(M_max + 1, 0.0);
        std::vector<cplx> spec(n / 2 + 1, 0.0);
        for (std::size_t m = 1; m <= M_max; ++m) {
            const double re = rng.normal() / std::numbers::sqrt2;
            const double im = rng.normal() / std::numbers::sqrt2;
            g[m] = {re, im};
            // grid starts at -pi: e^{i m x_j} = (-1)^m e^{2 pi i m j / n}
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            spec[m] = static_cast<double>(n) * sign * g[m] / (norm * cplx(0.0, static_cast<double>(m)));
        }
        Field1D w(grid, irfft(spec, n));
        const double at0 = w.v[grid.origin()];
        for (double& a : w.v) a -= at0;
        w.v[grid.origin()] = 0.0;
        out.oscillatory.push_back(std::move(w));
        out.g.push_back(std::move(g));
    }
    return out;
}

Field1D smooth_truncate(const Field1D& W, double eps) {
    if (!(eps > 0.0)) throw ResolutionError("eps must be positive");
    const double N = 1.0 / eps;
    if (N > W.grid.max_scale())
        throw ResolutionError("1/eps = " + std::to_string(N) + " beyond the resolved band " +
                              std::to_string(W.grid.max_scale()));
    return low_pass(W, N);
}

FourierBM smooth_truncate(const FourierBM& W, double eps) {
    FourierBM out = W;
    for (auto& f : out.oscillatory) f = smooth_truncate(f, eps);
    for (auto& g : out.g)
        for (std::size_t m = 1; m < g.size(); ++m) g[m] *= rho(static_cast<double>(m) * eps);
    return out;
}

Vec BrownianPath::at(std::size_t j) const {
    Vec p(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) p[i] = B[i].v[j];
    return p;
}

BrownianPath solve_path_ode(const ForcingFn& forcing, const Grid1D& grid, std::span<const double> B0,
                            double lambda, std::size_t substeps) {
    check_unit(B0);
    const std::size_t D = B0.size();
    const std::size_t m = std::max<std::size_t>(1, substeps);
    const std::size_t fine = 2 * m * grid.size();
    FineTable table(D, std::vector<double>(fine));
    Vec f(D);
    const double dq = grid.h() / static_cast<double>(2 * m);
    for (std::size_t q = 0; q < fine; ++q) {
        forcing(grid.x(0) + static_cast<double>(q) * dq, f);
        for (std::size_t i = 0; i < D; ++i) table[i][q] = f[i];
    }
    return march(table, grid, B0, lambda, m);
}

BrownianPath solve_path_ode(std::span<const Field1D> forcing, std::span<const double> B0, double lambda,
                            std::size_t substeps) {
    check_unit(B0);
    if (forcing.size() != B0.size()) throw Error("forcing and basepoint dimensions differ");
    const Grid1D grid = forcing[0].grid;
    const std::size_t n = grid.size();
    std::size_t m = substeps;
    if (m == 0) {
        double kmax = 0.0;
        for (const auto& f : forcing) kmax = std::max(kmax, max_frequency(f));
        m = auto_substeps(grid.h(), kmax);
    }
    // exact band-limited refinement by zero padding
    const std::size_t fine = 2 * m * n;
    FineTable table;
    for (const auto& f : forcing) {
        require_same(grid, f.grid, "solve_path_ode");
        const auto c = rfft(f.v);
        std::vector<cplx> pad(fine / 2 + 1, 0.0);
        for (std::size_t k = 0; k < n / 2; ++k) pad[k] = c[k] * static_cast<double>(2 * m);
        table.push_back(irfft(pad, fine));
    }
    return march(table, grid, B0, lambda, m);
}

VelocityField white_noise_velocity(const BrownianPath& B, std::span<const Field1D> Wbar_eps, bool with_integral) {
    const std::size_t D = B.dim();
    if (Wbar_eps.size() != D) throw Error("velocity signal dimension mismatch");
    const Sphere S(D);
    std::vector<Field1D> dW;
    for (const auto& w : Wbar_eps) {
        require_same(B.grid, w.grid, "white_noise_velocity");
        dW.push_back(derivative(w));
    }
    VelocityField out{B.grid, std::vector<Field1D>(D, Field1D(B.grid)), {}};
    Vec p(D), x(D), y(D);
    for (std::size_t j = 0; j < B.grid.size(); ++j) {
        for (std::size_t i = 0; i < D; ++i) {
            p[i] = B.B[i].v[j];
            x[i] = dW[i].v[j];
        }
        S.project(p, x, y);
        for (std::size_t i = 0; i < D; ++i) out.V[i].v[j] = y[i];
    }
    if (with_integral)
        for (const auto& v : out.V) out.Vint.push_back(integrate(v));
    return out;
}

DrivingSignals make_signals(std::uint64_t seed, std::size_t D, const Grid1D& grid, double eps) {
    DrivingSignals sig{grid, eps, {}, {}, {}, {}};
    const auto W = sample_bm_increments(seed, grid, D, Stream::path);
    const auto Wb = sample_bm_increments(seed, grid, D, Stream::velocity);
    for (std::size_t c = 0; c < D; ++c) {
        sig.W.push_back(smooth_truncate(rewindow(W[c]), eps));
        sig.Wbar.push_back(smooth_truncate(rewindow(Wb[c]), eps));
        sig.Ws.emplace_back(sig.W.back());
        sig.Wbars.emplace_back(sig.Wbar.back());
    }
    return sig;
}

BrownianPath global_path(const DrivingSignals& sig, std::span<const double> B0) {
    std::vector<Field1D> forcing;
    for (const auto& w : sig.W) forcing.push_back(derivative(w));
    BrownianPath p = solve_path_ode(forcing, B0, 1.0);
    p.eps = sig.eps;
    return p;
}

Vec path_value_at(const DrivingSignals& sig, std::span<const double> B0, double x) {
    check_unit(B0);
    const std::size_t D = B0.size();
    Vec B(B0.begin(), B0.end());
    if (x == 0.0) return B;
    double kmax = 0.0;
    for (const auto& s : sig.Ws) kmax = std::max(kmax, s.max_frequency());
    const double hmax = kStepResolution / std::max(kmax, 1.0);
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(x) / hmax));
    const double hs = x / static_cast<double>(steps);
    const Sphere S(D);
    Vec f0(D), fm(D), f1(D);
    auto eval = [&](double y, Vec& f) {
        for (std::size_t i = 0; i < D; ++i) f[i] = sig.Ws[i].derivative(y);
    };
    eval(0.0, f0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double y = hs * static_cast<double>(k);
        eval(y + 0.5 * hs, fm);
        eval(y + hs, f1);
        rk4_step(S, B, hs, 1.0, f0, fm, f1);
        f0 = f1;
    }
    return B;
}

LocalizedData localize_rescale(const DrivingSignals& sig, std::span<const double> B0, double tau, double x0,
                               const Grid1D& local) {
    if (!(tau > 0.0 && tau <= 1.0)) throw Error("tau must lie in (0, 1]");
    const double reach = tau * local.half_length() + std::abs(x0);
    if (reach > 0.5 * sig.grid.half_length())
        throw ResolutionError("rescaled window reaches " + std::to_string(reach) +
                              ", outside the accurate region of the driving signal");
    const std::size_t D = B0.size();
    const double st = std::sqrt(tau);
    const Vec Bx0 = path_value_at(sig, B0, x0);
    Vec W0(D), Wb0(D);
    for (std::size_t i = 0; i < D; ++i) {
        W0[i] = sig.Ws[i](x0);
        Wb0[i] = sig.Wbars[i](x0);
    }
    // d/dx (chi(x) W_{tau,x0}(x)) at a rescaled point
    auto localized_derivative = [&](const TrigSeries& s, double w0, double x) {
        const double y = tau * x + x0;
        const double w = (s(y) - w0) / st;
        return chi_prime(x) * w + chi(x) * st * s.derivative(y);
    };
    ForcingFn forcing = [&](double x, std::span<double> out) {
        for (std::size_t i = 0; i < D; ++i) out[i] = localized_derivative(sig.Ws[i], W0[i], x);
    };
    double kmax = 0.0;
    for (const auto& s : sig.Ws) kmax = std::max(kmax, s.max_frequency());
    // chi' has a transition of width 0.1
    const double keff = std::max(tau * kmax, 60.0);
    LocalizedData out{tau, x0, solve_path_ode(forcing, local, Bx0, st, auto_substeps(local.h(), keff)),
                      VelocityField{local, std::vector<Field1D>(D, Field1D(local)), {}}, {}};
    out.B.eps = sig.eps;
    out.B.B0 = Bx0;

    const Sphere S(D);
    Vec p(D), x(D), y(D);
    for (std::size_t j = 0; j < local.size(); ++j) {
        const double xj = local.x(j);
        for (std::size_t i = 0; i < D; ++i) {
            p[i] = out.B.B[i].v[j];
            x[i] = st * localized_derivative(sig.Wbars[i], Wb0[i], xj);
        }
        S.project(p, x, y);
        for (std::size_t i = 0; i < D; ++i) out.V.V[i].v[j] = y[i];
    }
    for (const auto& v : out.V.V) out.V.Vint.push_back(integrate(v));
    for (std::size_t i = 0; i < D; ++i) {
        Field1D w(local);
        for (std::size_t j = 0; j < local.size(); ++j) w.v[j] = (sig.Ws[i](tau * local.x(j) + x0) - W0[i]) / st;
        out.W.push_back(std::move(w));
    }
    return out;
}

LinearWaves linear_waves(const BrownianPath& B, const VelocityField& V, double theta) {
    if (!(theta > 0.0)) throw Error("theta must be positive");
    if (V.Vint.size() != B.dim()) throw Error("linear waves need the integrated velocity");
    require_same(B.grid, V.grid, "linear_waves");
    const std::size_t D = B.dim();
    const Vec base = B.at(B.grid.origin());
    LinearWaves w{B.grid, {}, {}, {}, {}, theta, base};
    const double c = 0.5 / theta;
    for (std::size_t i = 0; i < D; ++i) {
        Field1D p(B.grid), m(B.grid), dp(B.grid), dm(B.grid);
        for (std::size_t j = 0; j < B.grid.size(); ++j) {
            const double b = B.B[i].v[j] - base[i];
            p.v[j] = c * (b - V.Vint[i].v[j]);
            m.v[j] = c * (b + V.Vint[i].v[j]);
            dp.v[j] = c * (B.dB[i].v[j] - V.V[i].v[j]);
            dm.v[j] = c * (B.dB[i].v[j] + V.V[i].v[j]);
        }
        w.plus.push_back(std::move(p));
        w.minus.push_back(std::move(m));
        w.dplus.push_back(std::move(dp));
        w.dminus.push_back(std::move(dm));
    }
    return w;
}

LinearWaves waves_from_fields(std::vector<Field1D> plus, std::vector<Field1D> minus, Vec shift, double theta) {
    if (plus.empty() || plus.size() != minus.size()) throw Error("wave component counts differ");
    LinearWaves w{plus[0].grid, std::move(plus), std::move(minus), {}, {}, theta, std::move(shift)};
    for (const auto& f : w.plus) w.dplus.push_back(derivative(f));
    for (const auto& f : w.minus) w.dminus.push_back(derivative(f));
    return w;
}

}  // namespace wavemaps
