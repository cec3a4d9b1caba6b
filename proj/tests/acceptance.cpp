#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "support.hpp"
#include "wavemaps/config.hpp"
#include "wavemaps/enhanced.hpp"
#include "wavemaps/experiments.hpp"
#include "wavemaps/illposed.hpp"
#include "wavemaps/io.hpp"
#include "wavemaps/randomdata.hpp"
#include "wavemaps/solver.hpp"
#include "wavemaps/spectral.hpp"

using namespace wavemaps;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

template <class... A>
std::string cat(const A&... a) {
    std::ostringstream s;
    s.precision(4);
    (s << ... << a);
    return s.str();
}

std::string list(const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(4);
    for (std::size_t k = 0; k < v.size(); ++k) s << (k ? " " : "") << v[k];
    return s.str();
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if (!(v[k + 1] < v[k])) return false;
    return true;
}

std::size_t index_of(const Grid1D& g, double x) {
    return static_cast<std::size_t>(std::llround((x - g.x(0)) / g.h()));
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    return testing_support::max_abs_diff(a, b);
}

// 1. LP partition of unity
Outcome partition_of_unity() {
    double worst = 0.0;
    for (std::size_t n : {256, 1024})
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Grid1D g(n, std::numbers::pi);
            const std::size_t kmax = static_cast<std::size_t>(0.8 * g.max_scale());
            const Field1D f = testing_support::random_band_limited(g, kmax, seed);
            Field1D sum(g);
            for (double N : g.scales()) sum += lp_project(f, N);
            worst = std::max(worst, max_diff(sum.v, f.v));
        }
    return {worst <= 1e-10, cat("max |sum P_N f - f| = ", worst)};
}

// 2. para-product exactness on 50 pairs
Outcome paraproduct_exactness() {
    const Grid1D g(256, std::numbers::pi);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Field1D f = testing_support::random_band_limited(g, 28, 1000 + seed);
        const Field1D h = testing_support::random_band_limited(g, 28, 2000 + seed);
        const Field1D sum = paraproduct(f, h, Para::ll) + paraproduct(f, h, Para::sim) + paraproduct(f, h, Para::gg);
        worst = std::max(worst, max_diff(sum.v, (f * h).v));
    }
    return {worst <= 1e-10, cat("max |ll + sim + gg - fg| over 50 pairs = ", worst)};
}

// 3. Duhamel: direct against factorized, and the wave equation
Outcome duhamel_identity() {
    std::vector<double> gaps, residuals;
    for (std::size_t n : {128, 256, 512}) {
        const Grid1D g(n, 4.0);
        const Field2D F = Field2D::from(g, g, [](double u, double v) {
            return std::exp(-(u - 0.2) * (u - 0.2) / 0.18 - (v + 0.1) * (v + 0.1) / 0.18) * (1.0 + 0.5 * u);
        });
        const Field2D Dd = duhamel(F, DuhamelMethod::direct);
        const Field2D Df = duhamel(F, DuhamelMethod::factorized);
        gaps.push_back((Dd - Df).sup());
        const double h = g.h();
        double res = 0.0;
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i)
            for (std::size_t j = n / 4; j < 3 * n / 4; ++j) {
                const double mixed =
                    (Dd(i + 1, j + 1) - Dd(i + 1, j - 1) - Dd(i - 1, j + 1) + Dd(i - 1, j - 1)) / (4 * h * h);
                res = std::max(res, std::abs(mixed - F(i, j)));
            }
        residuals.push_back(res);
    }
    std::vector<double> gap_ratio, res_ratio;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        gap_ratio.push_back(gaps[k] / gaps[k + 1]);
        res_ratio.push_back(residuals[k] / residuals[k + 1]);
        ok = ok && gap_ratio.back() >= 3.4 && gap_ratio.back() <= 4.6 && res_ratio.back() >= 3.4 &&
             res_ratio.back() <= 4.6;
    }
    return {ok, cat("gap ratios ", list(gap_ratio), ", d_u d_v Duh - F ratios ", list(res_ratio),
                    ", finest residual ", residuals.back())};
}

// 4. Brownian law
Outcome brownian_law() {
    const Grid1D g(64, 2.0);
    const std::size_t seeds = 2000;
    const double xs[] = {0.25, 0.5, 1.0};
    double var[3] = {};
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto W = sample_bm_increments(1000 + s, g, 3);
        for (int k = 0; k < 3; ++k) {
            const std::size_t j = index_of(g, xs[k]);
            for (std::size_t c = 0; c < 3; ++c) var[k] += W[c].v[j] * W[c].v[j];
        }
    }
    bool ok = true;
    std::vector<double> rel;
    for (int k = 0; k < 3; ++k) {
        rel.push_back(var[k] / (3.0 * double(seeds)) / xs[k] - 1.0);
        ok = ok && std::abs(rel.back()) <= 0.05;
    }

    const Grid1D gp(128, std::numbers::pi);
    const std::size_t M = 40, fseeds = 3000;
    const double norm = std::sqrt(2.0 * std::numbers::pi);
    double oracle = 1.0 / (2.0 * std::numbers::pi);
    for (std::size_t m = 1; m <= M; ++m)
        oracle += 2.0 * std::norm(std::exp(std::complex<double>(0.0, double(m))) - 1.0) /
                  (2.0 * std::numbers::pi * double(m * m));
    double acc = 0.0;
    for (std::size_t s = 0; s < fseeds; ++s) {
        const auto W = sample_bm_fourier(s, M, gp, 3);
        for (std::size_t c = 0; c < 3; ++c) {
            double w = W.drift[c];
            for (std::size_t m = 1; m <= M; ++m) {
                const double md = double(m);
                w += 2.0 * (W.g[c][m] * (std::exp(std::complex<double>(0.0, md)) - 1.0) /
                            std::complex<double>(0.0, md * norm))
                               .real();
            }
            acc += w * w;
        }
    }
    const double frel = acc / (3.0 * double(fseeds)) / oracle - 1.0;
    ok = ok && std::abs(frel) <= 0.05;
    return {ok, cat("Var W(x)/|x| - 1 at 0.25, 0.5, 1: ", list(rel), " (", seeds, " seeds); truncated series ",
                    frel, " (", fseeds, " seeds)")};
}

double unit_defect(const BrownianPath& B) {
    double worst = 0.0;
    for (std::size_t j = 0; j < B.grid.size(); ++j) {
        double r = 0.0;
        for (std::size_t c = 0; c < B.dim(); ++c) r += B.B[c].v[j] * B.B[c].v[j];
        worst = std::max(worst, std::abs(r - 1.0));
    }
    return worst;
}

double tangency(const BrownianPath& B, const VelocityField& V) {
    double worst = 0.0;
    for (std::size_t j = 0; j < B.grid.size(); ++j) {
        double d = 0.0;
        for (std::size_t c = 0; c < B.dim(); ++c) d += B.B[c].v[j] * V.V[c].v[j];
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

// 5. every emitted path lies on the sphere with tangent velocity
Outcome manifold_invariants() {
    const Grid1D g(16384, 4.0);
    const Vec B0 = Sphere(3).north();
    double defect = 0.0, tang = 0.0;
    std::size_t paths = 0;
    for (double eps : {0x1p-4, 0x1p-7, 1e-3}) {
        const auto sig = make_signals(7, 3, g, eps);
        const auto p = global_path(sig, B0);
        const auto V = white_noise_velocity(p, sig.Wbar, false);
        const auto loc = localize_rescale(sig, B0, 0.1, 0.3, Grid1D(2048, 4.4));
        defect = std::max({defect, unit_defect(p), unit_defect(loc.B)});
        tang = std::max({tang, tangency(p, V), tangency(loc.B, loc.V)});
        paths += 2;
    }
    return {defect <= 1e-8 && tang <= 1e-12,
            cat(paths, " paths: sup ||B|^2 - 1| = ", defect, ", sup |<V, B>| = ", tang)};
}

// 6. localized data against the rescaled global path
Outcome localization_consistency() {
    const Grid1D g(16384, 4.0);
    const Vec B0 = Sphere(3).north();
    const auto sig = make_signals(7, 3, g, 0x1p-6);
    const Grid1D local(2048, 4.4);
    double worst = 0.0;
    std::size_t points = 0;
    for (auto [tau, x0] : {std::pair{0.1, 0.3}, std::pair{0.25, -0.5}}) {
        const auto loc = localize_rescale(sig, B0, tau, x0, local);
        for (std::size_t j = 0; j < local.size(); j += 32) {
            const double x = local.x(j);
            if (std::abs(x) > 2.0) continue;
            const Vec ref = path_value_at(sig, B0, tau * x + x0);
            for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(loc.B.B[c].v[j] - ref[c]));
            ++points;
        }
    }
    return {worst <= 1e-6, cat("max difference on [-2, 2] over ", points, " points = ", worst)};
}

// 7. high x high -> low column: Brownian flat, lacunary adversary growing
Outcome hhl_contrast() {
    const auto scales = dyadic_range(16.0, 1024.0);
    HhlOptions opt;
    opt.scales = scales;
    std::vector<double> slopes;
    bool ok = true;
    double match = 0.0;
    Grid1D grid(8192, std::numbers::pi);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto w = fourier_waves(seed, 3, 8192, 896);
        const auto r = hhl_scaling_report(w, opt);
        slopes.push_back(r.fit.slope);
        ok = ok && r.fit.slope >= -0.5 && r.fit.slope <= 0.1;
        match = holder_norm(std::span<const Field1D>(w.plus), opt.s);
        grid = w.grid;
    }
    const auto lac = lacunary_waves(grid, 3, scales, opt.s, match);
    const auto lr = hhl_scaling_report(lac, opt);
    ok = ok && lr.fit.slope >= 0.3;
    return {ok, cat("Brownian slopes ", list(slopes), "; lacunary slope ", lr.fit.slope)};
}

// 8. data convergence
Outcome data_convergence() {
    std::vector<double> eps;
    for (int i = 4; i <= 9; ++i) eps.push_back(std::ldexp(1.0, -i));
    const auto rows = data_norms(7, 3, Grid1D(16384, 4.0), eps, 0.45);
    std::vector<double> dB, dV;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        dB.push_back(rows[k].dB_cs);
        dV.push_back(rows[k].dV_cs1);
    }
    return {strictly_decreasing(dB), cat("|B^eps_i - B^eps_i+1|_C^0.45[-2,2], i = 4..8: ", list(dB),
                                         "; velocity C^-0.55: ", list(dV))};
}

// 9. contraction, oracle agreement, residual, emerging constraint
Outcome solver_checks() {
    const auto sig = make_signals(7, 3, Grid1D(16384, 4.0), 0x1p-4);
    SolverConfig cfg;
    std::vector<double> gaps;
    double max_ratio = 0.0, residual = 0.0, defect = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    for (std::size_t n : {512, 1024}) {
        cfg.n = n;
        const auto run = solve_local(sig, 3, 0.1, 0.0, cfg);
        converged = converged && run.picard.converged;
        const auto o = characteristic_oracle(run.waves, cfg.grid());
        gaps.push_back(inner_difference(run.picard.state, o, cfg));
        if (n == 1024) {
            for (double r : run.picard.ratios) max_ratio = std::max(max_ratio, r);
            residual = equation_residual(run.picard.state, cfg);
            defect = manifold_defect(run.picard.state, cfg);
            iterations = run.picard.iterations;
        }
    }
    const bool ok = converged && max_ratio <= 0.5 && gaps[1] <= 1e-3 && gaps[1] < gaps[0] && residual <= 1e-4 &&
                    defect <= 5e-3;
    return {ok, cat(iterations, " iterations, max increment ratio ", max_ratio, "; oracle gap n=512 ", gaps[0],
                    ", n=1024 ", gaps[1], "; residual ", residual, "; manifold defect ", defect)};
}

// 10. the full pipeline
Outcome pipeline_convergence() {
    ConvergenceOptions o;
    for (int i = 4; i <= 9; ++i) o.eps_list.push_back(std::ldexp(1.0, -i));
    const auto r = convergence_experiment(o);
    std::vector<double> c0, c1, data;
    bool solved = true;
    for (const auto& row : r.rows) {
        c0.push_back(row.d_c0cs);
        c1.push_back(row.d_c1cs1);
        data.push_back(row.data_diff);
    }
    for (const auto& s : r.solves) solved = solved && s.converged;
    const bool rate = c0.back() <= c0.front() / 4.0 && c1.back() <= c1.front() / 4.0;
    const bool patch = r.patch_difference <= r.patch_tolerance;
    const bool ok = solved && strictly_decreasing(c0) && strictly_decreasing(c1) && rate && patch;
    return {ok, cat("C0Cs: ", list(c0), "; C1Cs-1: ", list(c1), "; data: ", list(data), "; last/first ",
                    c0.back() / c0.front(), " and ", c1.back() / c1.front(), "; patch difference ",
                    r.patch_difference, " (tolerance ", r.patch_tolerance, ")", solved ? "" : "; a solve failed")};
}

// 11. energy of the on-manifold oracle
Outcome energy_conservation() {
    const std::size_t n = 1024, f = 4;
    const auto sig = make_signals(7, 3, Grid1D(16384, 4.0), 0x1p-4);
    const auto data = localize_rescale(sig, Sphere(3).north(), 0.1, 0.0, Grid1D(2 * f * n, 4.4));
    const auto w = coarsen_waves(linear_waves(data.B, data.V, 1.0), f);
    const auto o = characteristic_oracle(w, w.grid);
    const double h = w.grid.h();
    const double E0 = hamiltonian_energy(null_to_cartesian(o, 0.0));
    const int kmax = static_cast<int>(std::floor(1.0 / h + 1e-9));
    double drift = 0.0;
    for (int k = -kmax; k <= kmax; k += 8)
        drift = std::max(drift, std::abs(hamiltonian_energy(null_to_cartesian(o, k * h)) - E0) / E0);
    return {drift <= 0.01, cat("relative drift over |t| <= tau: ", drift, " (E0 = ", E0, ")")};
}

// 12. divergence of the first Picard iterate
Outcome divergence() {
    ScanOptions o;
    const auto r = divergence_scan(o);
    auto q = o;
    q.norms = false;
    q.quadrature.refine = 2.0;
    const auto fine = divergence_scan(q);
    double self = 0.0, n1lo = 1e300, n1hi = 0.0, n2lo = 1e300, n2hi = 0.0;
    std::vector<double> J;
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        J.push_back(row.J);
        self = std::max(self, std::abs(row.J - fine.rows[k].J) / std::abs(row.J));
        n1lo = std::min(n1lo, row.psi1_norm);
        n1hi = std::max(n1hi, row.psi1_norm);
        n2lo = std::min(n2lo, row.psi2_norm);
        n2hi = std::max(n2hi, row.psi2_norm);
    }
    const double rel = std::abs(r.fit.slope / r.main_coefficient - 1.0);
    const double spread = std::max(n1hi / n1lo, n2hi / n2lo);
    const bool ok = rel <= 0.1 && r.fit.r_squared >= 0.99 && spread <= 2.0 && self <= 1e-8;
    return {ok, cat("kappa0 = ", o.kappa0, ", J: ", list(J), "; slope/main - 1 = ", rel, ", r^2 = ",
                    r.fit.r_squared, ", norm spread ", spread, ", quadrature self-convergence ", self)};
}

// 13. reruns give byte-identical CSVs
Outcome reproducibility() {
    const fs::path root = fs::temp_directory_path() / ("wavemaps_acceptance_" + std::to_string(::getpid()));
    const std::vector<std::vector<std::string>> runs{
        {"gen-path", "--seed", "7", "--eps", "1e-3"},
        {"norms", "--grid-n", "4096", "--eps-list", "0.125,0.0625,0.03125"},
        {"hhl", "--hhl-n", "2048", "--modes", "200", "--m-max", "128", "--shifts", "8"},
        {"solve", "--n", "256"},
        {"converge", "--n", "128", "--eps-list", "0.0625,0.03125", "--t-count", "3"},
        {"illposed", "--kappa0", "1", "--kappa-max", "6"},
    };
    std::size_t files = 0;
    std::vector<std::string> differing;
    for (const auto& args : runs) {
        std::vector<fs::path> dirs;
        for (const char* tag : {"a", "b"}) {
            auto a = args;
            dirs.push_back(root / (args[0] + "_" + tag));
            a.insert(a.end(), {"--out", dirs.back().string()});
            execute(load_config(a));
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            if (e.path().extension() != ".csv") continue;
            ++files;
            if (read_file(e.path()) != read_file(dirs[1] / e.path().filename()))
                differing.push_back(e.path().filename().string());
        }
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    std::string diff;
    for (const auto& d : differing) diff += " " + d;
    return {differing.empty() && files >= 8,
            cat(files, " CSVs from ", runs.size(), " commands compared", differing.empty() ? "" : "; differ:", diff)};
}

struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "LP partition of unity", 1.0, partition_of_unity},
        {2, "para-product decomposition exactness", 5.0, paraproduct_exactness},
        {3, "Duhamel identity", 10.0, duhamel_identity},
        {4, "Brownian law", 60.0, brownian_law},
        {5, "manifold invariants", 10.0, manifold_invariants},
        {6, "localization consistency", 30.0, localization_consistency},
        {7, "high x high -> low contrast", 120.0, hhl_contrast},
        {8, "data convergence", 60.0, data_convergence},
        {9, "solver contraction and oracle equivalence", 300.0, solver_checks},
        {10, "pipeline convergence", 1200.0, pipeline_convergence},
        {11, "energy conservation", 60.0, energy_conservation},
        {12, "first-iterate divergence", 600.0, divergence},
        {13, "reproducibility", 300.0, reproducibility},
    };
    std::vector<int> only;
    for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget;
        const bool pass = o.pass && in_time;
        failed += !pass;
        char head[160];
        std::snprintf(head, sizeof head, "%s %2d %s (%.1f s of %.0f s%s): ", pass ? "PASS" : "FAIL", c.id, c.name,
                      secs, c.budget, in_time ? "" : ", over budget");
        std::cout << head << o.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
