#include "wavemaps/experiments.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/error.hpp"
#include "wavemaps/illposed.hpp"
#include "wavemaps/randomdata.hpp"
#include "wavemaps/rng.hpp"
#include "wavemaps/solver.hpp"
#include "wavemaps/spectral.hpp"

#ifndef WAVEMAPS_VERSION
#define WAVEMAPS_VERSION "0.0.0"
#endif

namespace wavemaps {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> component_names(const char* stem, std::size_t D) {
    std::vector<std::string> out;
    for (std::size_t c = 1; c <= D; ++c) out.push_back(stem + std::to_string(c));
    return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Csv path_csv(const BrownianPath& B, const VelocityField& V) {
    const std::size_t D = B.dim();
    Csv csv(concat(concat({"x"}, component_names("B", D)), component_names("V", D)));
    std::vector<double> row(1 + 2 * D);
    for (std::size_t j = 0; j < B.grid.size(); ++j) {
        row[0] = B.grid.x(j);
        for (std::size_t c = 0; c < D; ++c) {
            row[1 + c] = B.B[c].v[j];
            row[1 + D + c] = V.V[c].v[j];
        }
        csv.row(row);
    }
    return csv;
}

Json grid_json(const Grid1D& g) { return {{"n", g.size()}, {"half_length", g.half_length()}, {"h", g.h()}}; }

Json fit_json(const Fit& f) { return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}}; }

double tangency(const BrownianPath& B, const VelocityField& V) {
    double worst = 0.0;
    for (std::size_t j = 0; j < B.grid.size(); ++j) {
        double d = 0.0;
        for (std::size_t c = 0; c < B.dim(); ++c) d += B.B[c].v[j] * V.V[c].v[j];
        worst = std::max(worst, std::abs(d));
    }
    return worst;
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

SolverConfig solver_config(const ExperimentConfig& c) {
    SolverConfig s;
    s.n = c.n;
    s.theta = c.theta;
    s.picard_tol = c.picard_tol;
    s.max_iter = c.max_iter;
    s.params = c.params;
    return s;
}

std::vector<double> snapped_times(std::size_t count, double h) {
    std::vector<double> ts;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : -1.0 + 2.0 * double(k) / double(count - 1);
        ts.push_back(std::round(t / h) * h);
    }
    return ts;
}

// 1 on [-2, 2], smooth cut to 0 by |x| = 2.15
std::vector<Field1D> on_unit_patch(const std::vector<Field1D>& f) {
    std::vector<Field1D> out;
    for (const auto& c : f) {
        Field1D w = c;
        for (std::size_t j = 0; j < w.size(); ++j) w.v[j] *= 1.0 - smooth_step((std::abs(w.grid.x(j)) - 2.0) / 0.15);
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace

std::string version_string() { return std::string("wavemaps ") + WAVEMAPS_VERSION; }

Json band_json(const Grid1D& g) {
    const double top = g.max_scale();
    return {{"grid", grid_json(g)}, {"top_scale", top}, {"exact_below", 0.875 * top}, {"seen_below", 1.125 * top}};
}

Json rng_contract_json(std::uint64_t seed) {
    return {{"generator", "mt19937_64"},
            {"seed", seed},
            {"engine_seed", "splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15))"},
            {"stream", "(tag << 32) | component"},
            {"tags", {{"path", 0}, {"velocity", 1}, {"aux", 2}}},
            {"uniform", "((next() >> 11) + 1) * 2^-53"},
            {"normal", "Box-Muller, cosine branch first, sine branch cached"}};
}

std::vector<double> dyadic_range(double lo, double hi) {
    std::vector<double> out;
    for (double M = lo; M <= hi * (1.0 + 1e-12); M *= 2.0) out.push_back(M);
    return out;
}

LinearWaves fourier_waves(std::uint64_t seed, std::size_t D, std::size_t n, std::size_t modes) {
    const Grid1D g(n, std::numbers::pi);
    auto A = sample_bm_fourier(seed, modes, g, D, Stream::path);
    auto B = sample_bm_fourier(seed, modes, g, D, Stream::velocity);
    return waves_from_fields(std::move(A.oscillatory), std::move(B.oscillatory), Sphere(D).north());
}

LinearWaves lacunary_waves(const Grid1D& g, std::size_t D, const std::vector<double>& scales, double s,
                           double match) {
    Field1D p(g), m(g);
    for (double M : scales) {
        const double k = 0.75 * M, a = 1.0 / std::sqrt(k);
        for (std::size_t j = 0; j < g.size(); ++j) {
            p.v[j] += a * std::sin(k * g.x(j));
            m.v[j] += a * std::sin((k - 1.0) * g.x(j));
        }
    }
    const double c = match / holder_norm(p, s);
    p *= c;
    m *= c;
    std::vector<Field1D> P(D, Field1D(g)), Mi(D, Field1D(g));
    P[0] = p;
    Mi[0] = m;
    return waves_from_fields(std::move(P), std::move(Mi), Sphere(D).north());
}

std::vector<DataNormRow> data_norms(std::uint64_t seed, std::size_t D, const Grid1D& grid,
                                    const std::vector<double>& eps_list, double s) {
    const Vec B0 = Sphere(D).north();
    std::vector<std::vector<Field1D>> Bs, Vs;
    std::vector<DataNormRow> rows;
    for (double eps : eps_list) {
        const auto sig = make_signals(seed, D, grid, eps);
        auto p = global_path(sig, B0);
        auto V = white_noise_velocity(p, sig.Wbar, false);
        Bs.push_back(on_unit_patch(p.B));
        Vs.push_back(on_unit_patch(V.V));
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rows.push_back({eps, holder_norm(std::span<const Field1D>(Bs.back()), s),
                        holder_norm(std::span<const Field1D>(Vs.back()), s - 1.0), nan, nan});
    }
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        std::vector<Field1D> dB, dV;
        for (std::size_t c = 0; c < D; ++c) {
            dB.push_back(Bs[k][c] - Bs[k + 1][c]);
            dV.push_back(Vs[k][c] - Vs[k + 1][c]);
        }
        rows[k].dB_cs = holder_norm(std::span<const Field1D>(dB), s);
        rows[k].dV_cs1 = holder_norm(std::span<const Field1D>(dV), s - 1.0);
    }
    return rows;
}

RunArtifacts run_gen_path(const ExperimentConfig& c) {
    const Grid1D g(c.grid_n, c.grid_L);
    const Vec B0 = Sphere(c.D).north();
    const auto sig = make_signals(c.seed, c.D, g, c.eps);
    const auto p = global_path(sig, B0);
    const auto V = white_noise_velocity(p, sig.Wbar, false);
    const SolverConfig sc = solver_config(c);
    const auto loc = localize_rescale(sig, B0, c.tau, c.x0, Grid1D(2 * sc.n, 2.0 * sc.L));

    RunArtifacts a;
    a.files.emplace_back("path.csv", path_csv(p, V));
    a.files.emplace_back("path_local.csv", path_csv(loc.B, loc.V));
    a.results = {{"eps", c.eps},
                 {"tau", c.tau},
                 {"x0", c.x0},
                 {"basepoint", B0},
                 {"grid", grid_json(g)},
                 {"local_grid", grid_json(loc.B.grid)},
                 {"local_frame", "x_local = (x - x0) / tau"},
                 {"constraint_drift", p.constraint_drift},
                 {"unit_defect", unit_defect(p)},
                 {"tangency", tangency(p, V)},
                 {"local_unit_defect", unit_defect(loc.B)},
                 {"local_tangency", tangency(loc.B, loc.V)}};
    return a;
}

RunArtifacts run_hhl(const ExperimentConfig& c) {
    const auto brownian = fourier_waves(c.seed, c.D, c.hhl_n, c.modes);
    const auto scales = dyadic_range(c.m_min, c.m_max);
    const LinearWaves w = c.data == "lacunary"
                              ? lacunary_waves(brownian.grid, c.D, scales, c.params.s,
                                               holder_norm(std::span<const Field1D>(brownian.plus), c.params.s))
                              : brownian;

    HhlOptions ho;
    ho.s = c.params.s;
    ho.r = c.params.r;
    ho.scales = scales;
    const auto rep = hhl_scaling_report(w, ho);

    DsOptions dso;
    dso.s = c.params.s;
    dso.t_samples = default_shifts(c.shifts);
    dso.keep_table = true;
    const auto ds = ds_norm(w, dso);

    Csv table({"sign1", "sign2", "m", "n", "M", "N", "t", "norm"});
    for (const auto& e : ds.table)
        table.row({sign_name(e.sign1), sign_name(e.sign2), std::to_string(e.m + 1), std::to_string(e.n + 1),
                   format_double(e.M), format_double(e.N), format_double(e.t), format_double(e.norm)});
    Csv column({"M", "norm"});
    for (std::size_t k = 0; k < rep.scales.size(); ++k) column.row(std::vector<double>{rep.scales[k], rep.column[k]});

    RunArtifacts a;
    a.files.emplace_back("hhl.csv", std::move(table));
    a.files.emplace_back("hhl_column.csv", std::move(column));
    Json lemma = Json::array();
    for (const auto& e : rep.lemma) lemma.push_back({{"M", e.M}, {"N", e.N}, {"norm", e.norm}, {"ratio", e.ratio}});
    a.results = {{"data", c.data},
                 {"ds_value", ds.value},
                 {"branch_max", {{"linear", ds.linear}, {"products", ds.products}, {"shifted", ds.shifted}}},
                 {"column_fit", fit_json(rep.fit)},
                 {"lemma_max_ratio", rep.lemma_max_ratio},
                 {"lemma_holds", rep.lemma_holds},
                 {"lemma", lemma},
                 {"band", band_json(w.grid)}};
    return a;
}

RunArtifacts run_solve(const ExperimentConfig& c) {
    const SolverConfig sc = solver_config(c);
    sc.validate();
    const auto sig = make_signals(c.seed, c.D, Grid1D(c.grid_n, c.grid_L), c.eps);
    const auto run = solve_local(sig, c.D, c.tau, c.x0, sc, c.data_refine);
    const auto& st = run.picard.state;
    const Grid1D& g = st.grid;
    const std::size_t D = c.D;

    Csv sol(concat({"u", "v"}, component_names("phi", D)));
    std::vector<double> row(2 + D);
    for (std::size_t i = 0; i < g.size(); i += c.stride)
        for (std::size_t j = 0; j < g.size(); j += c.stride) {
            row[0] = g.x(i);
            row[1] = g.x(j);
            for (std::size_t k = 0; k < D; ++k) row[2 + k] = st.phi[k](i, j) + st.shift[k];
            sol.row(row);
        }

    Csv slices(concat(concat({"t", "x"}, component_names("phi", D)), component_names("dtphi", D)));
    Json energies = Json::array();
    std::vector<double> srow(2 + 2 * D);
    for (double t : snapped_times(c.t_count, g.h())) {
        const auto cs = null_to_cartesian(st, t);
        energies.push_back({{"t", t}, {"energy", hamiltonian_energy(cs)}});
        for (std::size_t j = cs.lo; j <= cs.hi; j += c.stride) {
            srow[0] = t;
            srow[1] = g.x(j);
            for (std::size_t k = 0; k < D; ++k) {
                srow[2 + k] = cs.position[k].v[j];
                srow[2 + D + k] = cs.velocity[k].v[j];
            }
            slices.row(srow);
        }
    }

    RunArtifacts a;
    a.files.emplace_back("solution.csv", std::move(sol));
    a.files.emplace_back("slices.csv", std::move(slices));
    a.ok = run.picard.converged;
    a.failure = run.picard.failure;
    a.results = {{"frame", "rescaled: x_phys = x0 + tau x, t_phys = tau t"},
                 {"lattice", grid_json(g)},
                 {"iterations", run.picard.iterations},
                 {"converged", run.picard.converged},
                 {"increments", run.picard.increments},
                 {"ratios", run.picard.ratios},
                 {"equation_residual", equation_residual(st, sc)},
                 {"manifold_defect", manifold_defect(st, sc)},
                 {"energy", energies},
                 {"norms",
                  {{"phi_plus_cs", holder_norm(std::span<const Field1D>(run.waves.plus), c.params.s)},
                   {"phi_minus_cs", holder_norm(std::span<const Field1D>(run.waves.minus), c.params.s)}}},
                 {"band", band_json(g)}};
    return a;
}

RunArtifacts run_converge(const ExperimentConfig& c) {
    if (c.eps_list.size() < 2) throw ConfigError("eps-list", "need at least two values of eps");
    ConvergenceOptions o;
    o.seed = c.seed;
    o.D = c.D;
    o.eps_list = c.eps_list;
    o.tau = c.tau;
    o.x0 = c.x0;
    o.s = c.params.s;
    o.R = c.R;
    o.t_count = c.t_count;
    o.original_n = c.grid_n;
    o.original_L = c.grid_L;
    o.data_refine = c.data_refine;
    o.solver = solver_config(c);
    o.patch_check = c.patch_check;
    const auto r = convergence_experiment(o);

    Csv table({"eps", "d_c0cs", "d_c1cs1", "data_diff"});
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        table.row(std::vector<double>{row.eps, row.d_c0cs, row.d_c1cs1, row.data_diff});
        rows.push_back({{"eps", row.eps}, {"eps_next", row.eps_next}});
    }
    RunArtifacts a;
    a.files.emplace_back("convergence.csv", std::move(table));
    Json solves = Json::array();
    for (const auto& s : r.solves) {
        solves.push_back({{"eps", s.eps},
                          {"iterations", s.iterations},
                          {"converged", s.converged},
                          {"failure", s.failure},
                          {"equation_residual", s.residual},
                          {"manifold_defect", s.defect}});
        if (!s.converged && a.ok) {
            a.ok = false;
            a.failure = "solve at eps = " + format_double(s.eps) + " failed: " + s.failure;
        }
    }
    a.results = {{"frame", "rescaled: x_phys = x0 + tau x, t_phys = tau t"},
                 {"row_pairs", rows},
                 {"solves", solves},
                 {"patch",
                  {{"checked", c.patch_check},
                   {"offset", r.patch_offset},
                   {"difference", r.patch_difference},
                   {"tolerance", r.patch_tolerance}}},
                 {"band", band_json(o.solver.grid())}};
    return a;
}

RunArtifacts run_illposed(const ExperimentConfig& c) {
    ScanOptions o;
    o.kappa0 = c.kappa0;
    o.kappa_max = c.kappa_max;
    o.b = c.b;
    o.g = c.g;
    o.t = c.t;
    o.eps_loc = c.eps_loc;
    o.norms = c.scan_norms;
    const auto r = divergence_scan(o);

    Csv table({"kappa", "J", "predicted", "residual", "psi1_norm", "psi2_norm"});
    for (const auto& row : r.rows)
        table.row({std::to_string(row.kappa), format_double(row.J), format_double(row.predicted),
                   format_double(row.residual), format_double(row.psi1_norm), format_double(row.psi2_norm)});
    RunArtifacts a;
    a.files.emplace_back("scan.csv", std::move(table));
    a.results = {{"main_coefficient", r.main_coefficient},
                 {"fit", fit_json(r.fit)},
                 {"slope_ratio", r.fit.slope / r.main_coefficient},
                 {"norm_exponent", 0.5},
                 {"norm_grid", {{"min_points", o.norm_n}, {"half_length", 2.0 * 2.1 * o.eps_loc}}}};
    return a;
}

RunArtifacts run_norms(const ExperimentConfig& c) {
    const Grid1D g(c.grid_n, c.grid_L);
    const auto rows = data_norms(c.seed, c.D, g, c.eps_list, c.params.s);
    Csv table({"eps", "B_cs", "V_cs1", "dB_cs", "dV_cs1"});
    for (const auto& r : rows) table.row(std::vector<double>{r.eps, r.B_cs, r.V_cs1, r.dB_cs, r.dV_cs1});
    RunArtifacts a;
    a.files.emplace_back("norms.csv", std::move(table));
    a.results = {{"window", "fields cut smoothly to [-2, 2] (plateau, transition width 0.15) before measuring"},
                 {"band", band_json(g)}};
    return a;
}

RunArtifacts run_command(const ExperimentConfig& c) {
    if (c.command == "gen-path") return run_gen_path(c);
    if (c.command == "hhl") return run_hhl(c);
    if (c.command == "solve") return run_solve(c);
    if (c.command == "converge") return run_converge(c);
    if (c.command == "illposed") return run_illposed(c);
    if (c.command == "norms") return run_norms(c);
    throw ConfigError("command", "unknown command '" + c.command + "'");
}

Json run_metadata(const ExperimentConfig& c, const RunArtifacts& a) {
    Json files = Json::array();
    for (const auto& [name, csv] : a.files) files.push_back({{"name", name}, {"columns", csv.header()}, {"rows", csv.rows()}});
    return {{"schema", "wavemaps.run/1"},
            {"version", version_string()},
            {"command", c.command},
            {"status", a.ok ? "ok" : "failed"},
            {"failure", a.failure},
            {"config", c.to_json()},
            {"rng", rng_contract_json(c.seed)},
            {"numerics",
             {{"float_format", "%.17g"},
              {"interpolation", "bilinear on the null lattice; exact at the lattice-multiple times used for slices"},
              {"resampling", "trigonometric"}}},
            {"files", files},
            {"results", a.results}};
}

int execute(const ExperimentConfig& c) {
    c.validate();
    const fs::path dir(c.out);
    RunArtifacts a;
    try {
        a = run_command(c);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        a = RunArtifacts{};
        a.ok = false;
        a.failure = e.what();
    }
    for (const auto& [name, csv] : a.files) write_csv(dir / name, csv);
    write_json(dir / (c.command + ".json"), run_metadata(c, a));
    return a.ok ? 0 : 1;
}

}  // namespace wavemaps
