#include "wavemaps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavemaps/error.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::size_t offset_in(const Grid1D& big, const Grid1D& small) {
    if (std::abs(big.h() - small.h()) > 1e-12 * big.h() || small.half_length() > big.half_length() + 1e-12)
        throw GridMismatch("sub-grid must share the spacing and fit inside");
    const double k = (small.x(0) - big.x(0)) / big.h();
    const auto off = static_cast<std::size_t>(std::llround(k));
    if (std::abs(k - static_cast<double>(off)) > 1e-9) throw GridMismatch("sub-grid points are not grid points");
    return off;
}

Field1D restrict_field(const Field1D& f, const Grid1D& g) {
    const std::size_t off = offset_in(f.grid, g);
    Field1D out(g);
    std::copy_n(f.v.begin() + static_cast<std::ptrdiff_t>(off), g.size(), out.v.begin());
    return out;
}

// phi^+(x) at each lattice coordinate, times theta, with and without the spatial cutoff
struct Traces {
    std::vector<Vec> val;    // [component][point] theta chi phi
    std::vector<Vec> deriv;  // theta (chi phi)'
};

Traces cut_traces(const std::vector<Field1D>& f, const std::vector<Field1D>& df, double theta) {
    Traces t;
    for (std::size_t c = 0; c < f.size(); ++c) {
        const Grid1D& g = f[c].grid;
        Vec v(g.size()), d(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double x = g.x(j);
            v[j] = theta * chi(x) * f[c].v[j];
            d[j] = theta * (chi_prime(x) * f[c].v[j] + chi(x) * df[c].v[j]);
        }
        t.val.push_back(std::move(v));
        t.deriv.push_back(std::move(d));
    }
    return t;
}

void check_waves(const LinearWaves& w) {
    if (w.plus.empty() || w.plus.size() != w.minus.size() || w.dplus.size() != w.plus.size() ||
        w.dminus.size() != w.plus.size())
        throw Error("incomplete linear waves");
    if (w.shift.size() != w.plus.size()) throw Error("shift dimension differs from the waves");
}

// int_{u_i}^{v_j} G(i, .) along rows, accumulated outward from the diagonal
Field2D row_integral(const Field2D& G) {
    const std::size_t n = G.rows();
    const double hh = 0.5 * G.gu.h();
    Field2D R(G.gu, G.gv);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) R(i, j) = R(i, j - 1) + hh * (G(i, j - 1) + G(i, j));
        for (std::size_t j = i; j-- > 0;) R(i, j) = R(i, j + 1) - hh * (G(i, j) + G(i, j + 1));
    }
    return R;
}

// -int_{u_i}^{v_j} G(., j) along columns, accumulated outward from the diagonal
Field2D column_integral(const Field2D& G) {
    const std::size_t n = G.rows();
    const double hh = 0.5 * G.gu.h();
    Field2D C(G.gu, G.gv);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < n; ++i) C(i, j) = C(i - 1, j) + hh * (G(i - 1, j) + G(i, j));
        for (std::size_t i = j; i-- > 0;) C(i, j) = C(i + 1, j) - hh * (G(i, j) + G(i + 1, j));
    }
    return C;
}

}  // namespace

void SecondForm::contract(std::span<const double> p, std::span<const double> X, std::span<const double> Y,
                          std::span<double> out) const {
    const std::size_t D = p.size();
    double r2 = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
        const double q = p[i] + (shift_.empty() ? 0.0 : shift_[i]);
        r2 += q * q;
    }
    const double c = second_form_bump(std::sqrt(r2)) * dot(X, Y);
    for (std::size_t i = 0; i < D; ++i) out[i] = c * (p[i] + (shift_.empty() ? 0.0 : shift_[i]));
}

Vec SecondForm::operator()(std::span<const double> p, std::span<const double> X, std::span<const double> Y) const {
    Vec out(p.size());
    contract(p, X, Y, out);
    return out;
}

void SolverConfig::validate() const {
    if (n < 16 || (n & (n - 1)) != 0) throw ConfigError("n", "lattice size must be a power of two >= 16");
    if (!(L > 2.1)) throw ConfigError("L", "lattice must contain the support of the spatial cutoff");
    if (!(theta > 0.0)) throw ConfigError("theta", "theta must be positive");
    if (!(time_cutoff > 0.0)) throw ConfigError("time_cutoff", "time cutoff must be positive");
    if (!(picard_tol > 0.0)) throw ConfigError("picard_tol", "tolerance must be positive");
    if (max_iter == 0) throw ConfigError("max_iter", "at least one iteration is needed");
    params.validate();
}

bool SolverConfig::inner(double u, double v) const {
    return std::abs(u) <= 2.0 && std::abs(v) <= 2.0 && std::abs(v - u) <= 2.0 * time_cutoff;
}

WaveMapState::WaveMapState(Grid1D g, std::size_t D, Vec s)
    : grid(g), shift(std::move(s)), phi(D, Field2D(g)), du(D, Field2D(g)), dv(D, Field2D(g)) {}

double WaveMapState::distance(const WaveMapState& o) const {
    double m = 0.0;
    for (std::size_t c = 0; c < dim(); ++c)
        for (std::size_t k = 0; k < phi[c].v.size(); ++k) {
            m = std::max(m, std::abs(phi[c].v[k] - o.phi[c].v[k]));
            m = std::max(m, std::abs(du[c].v[k] - o.du[c].v[k]));
            m = std::max(m, std::abs(dv[c].v[k] - o.dv[c].v[k]));
        }
    return m;
}

WaveMapState WaveMapState::transposed() const {
    WaveMapState t(grid, dim(), shift);
    const std::size_t n = grid.size();
    for (std::size_t c = 0; c < dim(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                t.phi[c](j, i) = phi[c](i, j);
                t.du[c](j, i) = dv[c](i, j);
                t.dv[c](j, i) = du[c](i, j);
            }
    return t;
}

LinearWaves restrict_waves(const LinearWaves& w, const Grid1D& g) {
    check_waves(w);
    LinearWaves out{g, {}, {}, {}, {}, w.theta, w.shift};
    for (std::size_t c = 0; c < w.dim(); ++c) {
        out.plus.push_back(restrict_field(w.plus[c], g));
        out.minus.push_back(restrict_field(w.minus[c], g));
        out.dplus.push_back(restrict_field(w.dplus[c], g));
        out.dminus.push_back(restrict_field(w.dminus[c], g));
    }
    return out;
}

LinearWaves coarsen_waves(const LinearWaves& w, std::size_t factor) {
    check_waves(w);
    if (factor == 0 || w.grid.size() % factor != 0) throw GridMismatch("coarsen_waves: factor must divide the grid size");
    if (factor == 1) return w;
    const Grid1D g(w.grid.size() / factor, w.grid.half_length());
    auto pick = [&](const Field1D& f) {
        Field1D o(g);
        for (std::size_t j = 0; j < g.size(); ++j) o.v[j] = f.v[j * factor];
        return o;
    };
    LinearWaves out{g, {}, {}, {}, {}, w.theta, w.shift};
    for (std::size_t c = 0; c < w.dim(); ++c) {
        out.plus.push_back(pick(w.plus[c]));
        out.minus.push_back(pick(w.minus[c]));
        out.dplus.push_back(pick(w.dplus[c]));
        out.dminus.push_back(pick(w.dminus[c]));
    }
    return out;
}

LinearWaves swap_directions(const LinearWaves& w) {
    LinearWaves out = w;
    std::swap(out.plus, out.minus);
    std::swap(out.dplus, out.dminus);
    return out;
}

WaveMapState linear_evolution(const LinearWaves& w, const SolverConfig& cfg) {
    cfg.validate();
    const auto r = restrict_waves(w, cfg.grid());
    const std::size_t D = r.dim(), n = cfg.n;
    const auto P = cut_traces(r.plus, r.dplus, cfg.theta);
    const auto M = cut_traces(r.minus, r.dminus, cfg.theta);
    WaveMapState s(r.grid, D, r.shift);
    for (std::size_t c = 0; c < D; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                s.phi[c](i, j) = P.val[c][i] + M.val[c][j];
                s.du[c](i, j) = P.deriv[c][i];
                s.dv[c](i, j) = M.deriv[c][j];
            }
    return s;
}

WaveMapState picard_map(const WaveMapState& phi, const LinearWaves& w, const SolverConfig& cfg) {
    WaveMapState out = linear_evolution(w, cfg);
    const Grid1D& g = out.grid;
    if (!(phi.grid == g)) throw GridMismatch("picard_map: state and lattice differ");
    if (phi.dim() != out.dim()) throw GridMismatch("picard_map: component counts differ");
    const std::size_t D = out.dim(), n = g.size();
    const SecondForm S(w.shift);

    std::vector<Field2D> G(D, Field2D(g));
    Vec p(D), X(D), Y(D), o(D);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double cut = chi((g.x(j) - g.x(i)) / cfg.time_cutoff);
            if (cut == 0.0) continue;
            for (std::size_t c = 0; c < D; ++c) {
                p[c] = phi.phi[c](i, j);
                X[c] = phi.du[c](i, j);
                Y[c] = phi.dv[c](i, j);
            }
            S.contract(p, X, Y, o);
            for (std::size_t c = 0; c < D; ++c) G[c](i, j) = cut * o[c];
        }

    for (std::size_t c = 0; c < D; ++c) {
        const Field2D Dh = duhamel(G[c], DuhamelMethod::direct);
        const Field2D Ru = row_integral(G[c]);
        const Field2D Cv = column_integral(G[c]);
        for (std::size_t i = 0; i < n; ++i) {
            const double cu = chi(g.x(i)), cpu = chi_prime(g.x(i));
            if (cu == 0.0 && cpu == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const double cv = chi(g.x(j)), cpv = chi_prime(g.x(j));
                out.phi[c](i, j) -= cu * cv * Dh(i, j);
                out.du[c](i, j) -= cpu * cv * Dh(i, j) + cu * cv * Ru(i, j);
                out.dv[c](i, j) -= cu * cpv * Dh(i, j) + cu * cv * Cv(i, j);
            }
        }
    }
    return out;
}

PicardResult solve_picard(const LinearWaves& w, const SolverConfig& cfg, const std::optional<WaveMapState>& initial) {
    cfg.validate();
    PicardResult res{initial ? *initial : linear_evolution(w, cfg), {}, {}, 0, false, {}};
    std::size_t stalled = 0;
    while (res.iterations < cfg.max_iter) {
        WaveMapState next = picard_map(res.state, w, cfg);
        const double inc = next.distance(res.state);
        res.state = std::move(next);
        ++res.iterations;
        if (!std::isfinite(inc)) {
            res.failure = "non-finite Picard increment";
            return res;
        }
        if (!res.increments.empty()) {
            const double prev = res.increments.back();
            const double ratio = prev > 0.0 ? inc / prev : 0.0;
            res.ratios.push_back(ratio);
            stalled = ratio >= cfg.stall_ratio ? stalled + 1 : 0;
        }
        res.increments.push_back(inc);
        if (inc < cfg.picard_tol) {
            res.converged = true;
            return res;
        }
        if (stalled >= cfg.stall_count) {
            res.failure = "non-contraction: increment ratio >= " + std::to_string(cfg.stall_ratio) + " for " +
                          std::to_string(cfg.stall_count) + " consecutive iterations";
            return res;
        }
    }
    res.failure = "max_iter exceeded";
    return res;
}

namespace {

// upper triangle j >= i of the lattice solution with linear part theta (p(u) + m(v))
void march_upper(const std::vector<Field1D>& p, const std::vector<Field1D>& m, const SecondForm& S,
                 const OracleOptions& opt, std::vector<Field2D>& out, bool transpose) {
    const std::size_t D = p.size();
    const Grid1D& g = p[0].grid;
    const std::size_t n = g.size();
    const double h = g.h(), h2 = h * h, th = opt.theta;
    std::vector<Field2D> U(D, Field2D(g));
    Vec A(D), B(D), C(D), P(D), bar(D), X(D), Y(D), o(D);

    auto renorm = [&](Vec& q) {
        if (!opt.renormalize) return;
        double r = 0.0;
        for (std::size_t c = 0; c < D; ++c) r += std::pow(q[c] + S.shift()[c], 2);
        r = std::sqrt(r);
        for (std::size_t c = 0; c < D; ++c) q[c] = (q[c] + S.shift()[c]) / r - S.shift()[c];
    };
    auto store = [&](std::size_t i, std::size_t j, const Vec& q) {
        for (std::size_t c = 0; c < D; ++c) {
            if (!(std::abs(q[c]) <= opt.blowup)) throw SolverError("characteristic oracle blew up");
            U[c](i, j) = q[c];
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < D; ++c) P[c] = th * (p[c].v[i] + m[c].v[i]);
        store(i, i, P);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t c = 0; c < D; ++c) {
            bar[c] = 0.5 * (U[c](i, i) + U[c](i + 1, i + 1));
            X[c] = th * (p[c].v[i + 1] - p[c].v[i]) / h;
            Y[c] = th * (m[c].v[i + 1] - m[c].v[i]) / h;
        }
        S.contract(bar, X, Y, o);
        for (std::size_t c = 0; c < D; ++c) P[c] = th * (p[c].v[i] + m[c].v[i + 1]) + 0.5 * h2 * o[c];
        renorm(P);
        store(i, i + 1, P);
    }
    for (std::size_t d = 2; d < n; ++d)
        for (std::size_t i = 0; i + d < n; ++i) {
            const std::size_t j = i + d;
            for (std::size_t c = 0; c < D; ++c) {
                A[c] = U[c](i, j - 1);
                B[c] = U[c](i + 1, j);
                C[c] = U[c](i + 1, j - 1);
                bar[c] = 0.5 * (A[c] + B[c]);
                X[c] = (C[c] - A[c]) / h;
                Y[c] = (B[c] - C[c]) / h;
            }
            S.contract(bar, X, Y, o);
            for (std::size_t c = 0; c < D; ++c) P[c] = B[c] + A[c] - C[c] + h2 * o[c];
            for (std::size_t c = 0; c < D; ++c) {
                bar[c] = 0.25 * (A[c] + B[c] + C[c] + P[c]);
                X[c] = 0.5 * ((C[c] - A[c]) + (B[c] - P[c])) / h;
                Y[c] = 0.5 * ((P[c] - A[c]) + (B[c] - C[c])) / h;
            }
            S.contract(bar, X, Y, o);
            for (std::size_t c = 0; c < D; ++c) P[c] = B[c] + A[c] - C[c] + h2 * o[c];
            renorm(P);
            store(i, j, P);
        }
    for (std::size_t c = 0; c < D; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                if (transpose)
                    out[c](j, i) = U[c](i, j);
                else
                    out[c](i, j) = U[c](i, j);
            }
}

void difference_derivatives(WaveMapState& s) {
    const std::size_t n = s.grid.size();
    const double h = s.grid.h();
    for (std::size_t c = 0; c < s.dim(); ++c) {
        const Field2D& f = s.phi[c];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                s.du[c](i, j) = i == 0       ? (f(1, j) - f(0, j)) / h
                                : i == n - 1 ? (f(n - 1, j) - f(n - 2, j)) / h
                                             : (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
                s.dv[c](i, j) = j == 0       ? (f(i, 1) - f(i, 0)) / h
                                : j == n - 1 ? (f(i, n - 1) - f(i, n - 2)) / h
                                             : (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
            }
    }
}

}  // namespace

WaveMapState characteristic_oracle(const LinearWaves& w, const Grid1D& g, const OracleOptions& opt) {
    const auto r = restrict_waves(w, g);
    const SecondForm S(r.shift);
    WaveMapState s(g, r.dim(), r.shift);
    march_upper(r.plus, r.minus, S, opt, s.phi, false);
    march_upper(r.minus, r.plus, S, opt, s.phi, true);
    difference_derivatives(s);
    return s;
}

double equation_residual(const WaveMapState& s, const SolverConfig& cfg) {
    const Grid1D& g = s.grid;
    const std::size_t n = g.size(), D = s.dim();
    const double h = g.h();
    const SecondForm S(s.shift);
    Vec bar(D), X(D), Y(D), o(D);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) {
            if (!cfg.inner(g.x(i), g.x(j)) || !cfg.inner(g.x(i + 1), g.x(j + 1)) ||
                !cfg.inner(g.x(i), g.x(j + 1)) || !cfg.inner(g.x(i + 1), g.x(j)))
                continue;
            for (std::size_t c = 0; c < D; ++c) {
                const Field2D& f = s.phi[c];
                bar[c] = 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
                X[c] = 0.5 * (f(i + 1, j) - f(i, j) + f(i + 1, j + 1) - f(i, j + 1)) / h;
                Y[c] = 0.5 * (f(i, j + 1) - f(i, j) + f(i + 1, j + 1) - f(i + 1, j)) / h;
            }
            S.contract(bar, X, Y, o);
            for (std::size_t c = 0; c < D; ++c) {
                const Field2D& f = s.phi[c];
                const double mixed = (f(i + 1, j + 1) - f(i + 1, j) - f(i, j + 1) + f(i, j)) / (h * h);
                worst = std::max(worst, std::abs(mixed + o[c]));
            }
        }
    return worst;
}

double manifold_defect(const WaveMapState& s, const SolverConfig& cfg) {
    const Grid1D& g = s.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!cfg.inner(g.x(i), g.x(j))) continue;
            double r = 0.0;
            for (std::size_t c = 0; c < s.dim(); ++c) r += std::pow(s.phi[c](i, j) + s.shift[c], 2);
            worst = std::max(worst, std::abs(std::sqrt(r) - 1.0));
        }
    return worst;
}

double inner_difference(const WaveMapState& a, const WaveMapState& b, const SolverConfig& cfg) {
    if (!(a.grid == b.grid) || a.dim() != b.dim()) throw GridMismatch("inner_difference: lattices differ");
    const Grid1D& g = a.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!cfg.inner(g.x(i), g.x(j))) continue;
            for (std::size_t c = 0; c < a.dim(); ++c)
                worst = std::max(worst, std::abs(a.phi[c](i, j) + a.shift[c] - b.phi[c](i, j) - b.shift[c]));
        }
    return worst;
}

CartesianSlice null_to_cartesian(const WaveMapState& s, double t) {
    const Grid1D& g = s.grid;
    const std::size_t n = g.size(), D = s.dim();
    const double h = g.h(), x0 = g.x(0), x1 = g.x(n - 1);
    if (!(2.0 * std::abs(t) <= x1 - x0)) throw SupportError("time outside the lattice");
    CartesianSlice out{t, g, n, 0, std::vector<Field1D>(D, Field1D(g)), std::vector<Field1D>(D, Field1D(g)),
                       std::vector<Field1D>(D, Field1D(g))};
    auto locate = [&](double y, std::size_t& k, double& f) {
        double q = (y - x0) / h;
        const double r = std::round(q);
        if (std::abs(q - r) < 1e-9) q = r;
        k = std::min(static_cast<std::size_t>(std::floor(q)), n - 2);
        f = q - static_cast<double>(k);
    };
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.x(j), u = x - t, v = x + t;
        if (u < x0 - 1e-12 || u > x1 + 1e-12 || v < x0 - 1e-12 || v > x1 + 1e-12) continue;
        out.lo = std::min(out.lo, j);
        out.hi = std::max(out.hi, j);
        std::size_t iu, iv;
        double fu, fv;
        locate(u, iu, fu);
        locate(v, iv, fv);
        auto bil = [&](const Field2D& F) {
            return (1 - fu) * (1 - fv) * F(iu, iv) + fu * (1 - fv) * F(iu + 1, iv) + (1 - fu) * fv * F(iu, iv + 1) +
                   fu * fv * F(iu + 1, iv + 1);
        };
        for (std::size_t c = 0; c < D; ++c) {
            const double a = bil(s.du[c]), b = bil(s.dv[c]);
            out.position[c].v[j] = bil(s.phi[c]) + s.shift[c];
            out.velocity[c].v[j] = b - a;
            out.gradient[c].v[j] = a + b;
        }
    }
    if (out.lo > out.hi) throw SupportError("no lattice point at this time");
    return out;
}

double hamiltonian_energy(const CartesianSlice& c) {
    const double h = c.grid.h();
    double e = 0.0;
    for (std::size_t j = c.lo; j <= c.hi; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < c.position.size(); ++k)
            d += c.gradient[k].v[j] * c.gradient[k].v[j] + c.velocity[k].v[j] * c.velocity[k].v[j];
        const double w = (j == c.lo || j == c.hi) ? 0.5 : 1.0;
        e += w * d;
    }
    return 0.5 * h * e;
}

namespace {

double plateau(double x, double R, double width) { return 1.0 - smooth_step((std::abs(x) - R) / width); }

std::vector<Field1D> windowed_diff(const std::vector<Field1D>& a, const std::vector<Field1D>& b, double R,
                                   double width) {
    std::vector<Field1D> out;
    for (std::size_t c = 0; c < a.size(); ++c) {
        Field1D d(a[c].grid);
        for (std::size_t j = 0; j < d.size(); ++j) d.v[j] = plateau(d.grid.x(j), R, width) * (a[c].v[j] - b[c].v[j]);
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

LocalSolve solve_local(const DrivingSignals& sig, std::size_t D, double tau, double x0, const SolverConfig& cfg,
                       std::size_t data_refine) {
    const std::size_t f = std::max<std::size_t>(data_refine, 1);
    const Grid1D local(2 * f * cfg.n, 2.0 * cfg.L);
    const Vec B0 = Sphere(D).north();
    auto data = localize_rescale(sig, B0, tau, x0, local);
    auto waves = coarsen_waves(linear_waves(data.B, data.V, cfg.theta), f);
    auto picard = solve_picard(waves, cfg);
    return {std::move(data), std::move(waves), std::move(picard)};
}

ConvergenceResult convergence_experiment(const ConvergenceOptions& opt) {
    opt.solver.validate();
    if (opt.eps_list.size() < 2) throw ConfigError("eps_list", "need at least two values of eps");
    for (std::size_t i = 1; i < opt.eps_list.size(); ++i)
        if (opt.eps_list[i] > opt.eps_list[i - 1]) throw ConfigError("eps_list", "eps values must decrease");
    if (!(opt.s > 0.0 && opt.s < 0.5)) throw ConfigError("s", "s must satisfy 0 < s < 1/2");
    const double h = opt.solver.grid().h();
    const double tmax = 1.0;
    if (opt.R + 0.15 + tmax > opt.solver.L) throw ConfigError("R", "slice window does not fit in the lattice");

    std::vector<double> ts;
    for (std::size_t k = 0; k < opt.t_count; ++k) {
        const double t = opt.t_count == 1 ? 0.0 : -tmax + 2.0 * tmax * double(k) / double(opt.t_count - 1);
        ts.push_back(std::round(t / h) * h);
    }

    const Grid1D original(opt.original_n, opt.original_L);
    ConvergenceResult res;
    struct Snapshot {
        std::vector<CartesianSlice> slices;
        std::vector<Field1D> B, V;
        bool ok;
    };
    std::vector<Snapshot> snaps;
    for (std::size_t e = 0; e < opt.eps_list.size(); ++e) {
        const double eps = opt.eps_list[e];
        const auto sig = make_signals(opt.seed, opt.D, original, eps);
        auto run = solve_local(sig, opt.D, opt.tau, opt.x0, opt.solver, opt.data_refine);
        SolveRecord rec{eps, run.picard.iterations, run.picard.converged, run.picard.failure,
                        equation_residual(run.picard.state, opt.solver),
                        manifold_defect(run.picard.state, opt.solver)};
        res.solves.push_back(rec);
        Snapshot snap{{}, run.data.B.B, run.data.V.V, run.picard.converged};
        for (double t : ts) snap.slices.push_back(null_to_cartesian(run.picard.state, t));
        snaps.push_back(std::move(snap));

        if (e == 0 && opt.patch_check) {
            const std::size_t k = opt.solver.n / 8;
            res.patch_offset = static_cast<double>(k) * h;
            const auto other = solve_local(sig, opt.D, opt.tau, opt.x0 + opt.tau * res.patch_offset, opt.solver, opt.data_refine);
            const auto& A = run.picard.state;
            const auto& B = other.picard.state;
            const Grid1D& g = A.grid;
            double worst = 0.0;
            for (std::size_t i = k; i < g.size(); ++i)
                for (std::size_t j = k; j < g.size(); ++j) {
                    if (!opt.solver.inner(g.x(i), g.x(j)) || !opt.solver.inner(g.x(i - k), g.x(j - k))) continue;
                    for (std::size_t c = 0; c < A.dim(); ++c)
                        worst = std::max(worst, std::abs(A.phi[c](i, j) + A.shift[c] - B.phi[c](i - k, j - k) -
                                                         B.shift[c]));
                }
            res.patch_difference = worst;
            res.patch_tolerance = 2.0 * opt.solver.picard_tol;
        }
    }

    for (std::size_t e = 0; e + 1 < snaps.size(); ++e) {
        const auto& a = snaps[e];
        const auto& b = snaps[e + 1];
        ConvergenceRow row{opt.eps_list[e], opt.eps_list[e + 1], 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const auto dp = windowed_diff(a.slices[k].position, b.slices[k].position, opt.R, 0.15);
            const auto dv = windowed_diff(a.slices[k].velocity, b.slices[k].velocity, opt.R, 0.15);
            row.d_c0cs = std::max(row.d_c0cs, holder_norm(std::span<const Field1D>(dp), opt.s));
            row.d_c1cs1 = std::max(row.d_c1cs1, holder_norm(std::span<const Field1D>(dv), opt.s - 1.0));
        }
        const auto dB = windowed_diff(a.B, b.B, 2.0, 0.15);
        const auto dV = windowed_diff(a.V, b.V, 2.0, 0.15);
        row.data_diff =
            holder_norm(std::span<const Field1D>(dB), opt.s) + holder_norm(std::span<const Field1D>(dV), opt.s - 1.0);
        if (!a.ok || !b.ok) row.d_c0cs = row.d_c1cs1 = std::numeric_limits<double>::quiet_NaN();
        res.rows.push_back(row);
    }
    return res;
}

}  // namespace wavemaps
