#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/grid.hpp"
#include "wavemaps/randomdata.hpp"

namespace wavemaps {

// b(|p + shift|) (p + shift) <X, Y>, the sphere's second fundamental form with compact extension
class SecondForm {
public:
    explicit SecondForm(Vec shift) : shift_(std::move(shift)) {}
    void contract(std::span<const double> p, std::span<const double> X, std::span<const double> Y,
                  std::span<double> out) const;
    Vec operator()(std::span<const double> p, std::span<const double> X, std::span<const double> Y) const;
    const Vec& shift() const { return shift_; }

private:
    Vec shift_;
};

struct SolverConfig {
    std::size_t n = 1024;    // lattice points per null direction
    double L = 2.2;          // lattice covers [-L, L)
    double theta = 1.0;
    double time_cutoff = 1.0;  // the chi((v - u) / time_cutoff) factor
    double picard_tol = 1e-10;
    std::size_t max_iter = 100;
    double stall_ratio = 0.9;
    std::size_t stall_count = 3;
    AnalysisParams params;

    Grid1D grid() const { return Grid1D(n, L); }
    void validate() const;
    // |u|, |v| <= 2 and |v - u| <= 2 time_cutoff: every cutoff equals one
    bool inner(double u, double v) const;
};

struct WaveMapState {
    Grid1D grid;
    Vec shift;
    std::vector<Field2D> phi, du, dv;

    WaveMapState(Grid1D g, std::size_t D, Vec shift);
    std::size_t dim() const { return phi.size(); }
    // largest sup difference over phi and both derivatives
    double distance(const WaveMapState& o) const;
    WaveMapState transposed() const;
};

// waves restricted to a sub-grid with the same spacing
LinearWaves restrict_waves(const LinearWaves& w, const Grid1D& g);
// every factor-th sample of the waves
LinearWaves coarsen_waves(const LinearWaves& w, std::size_t factor);
// the same waves with the roles of plus and minus exchanged
LinearWaves swap_directions(const LinearWaves& w);

// theta (chi phi^+)(u) + theta (chi phi^-)(v)
WaveMapState linear_evolution(const LinearWaves& w, const SolverConfig& cfg);
WaveMapState picard_map(const WaveMapState& phi, const LinearWaves& w, const SolverConfig& cfg);

struct PicardResult {
    WaveMapState state;
    std::vector<double> increments;
    std::vector<double> ratios;
    std::size_t iterations = 0;
    bool converged = false;
    std::string failure;
};

PicardResult solve_picard(const LinearWaves& w, const SolverConfig& cfg,
                          const std::optional<WaveMapState>& initial = std::nullopt);

struct OracleOptions {
    bool renormalize = false;
    double blowup = 10.0;
    double theta = 1.0;
};

// explicit march on the characteristic lattice of the waves' own grid (or a sub-grid)
WaveMapState characteristic_oracle(const LinearWaves& w, const Grid1D& g, const OracleOptions& opt = {});

// sup of the discrete residual d_u d_v phi + S(phi)(d_u phi, d_v phi) over the inner diamond
double equation_residual(const WaveMapState& s, const SolverConfig& cfg);
// sup | |phi + shift| - 1 | over the inner diamond
double manifold_defect(const WaveMapState& s, const SolverConfig& cfg);
// sup |a - b| of phi over the inner diamond
double inner_difference(const WaveMapState& a, const WaveMapState& b, const SolverConfig& cfg);

struct CartesianSlice {
    double t;
    Grid1D grid;
    std::size_t lo, hi;  // valid x indices, inclusive
    std::vector<Field1D> position, velocity, gradient;
};

CartesianSlice null_to_cartesian(const WaveMapState& s, double t);
double hamiltonian_energy(const CartesianSlice& c);

struct LocalSolve {
    LocalizedData data;
    LinearWaves waves;
    PicardResult picard;
};

// localized data at (tau, x0) built data_refine times finer than the lattice, subsampled, then solved
LocalSolve solve_local(const DrivingSignals& sig, std::size_t D, double tau, double x0, const SolverConfig& cfg,
                       std::size_t data_refine = 4);

struct ConvergenceOptions {
    std::uint64_t seed = 7;
    std::size_t D = 3;
    std::vector<double> eps_list;
    double tau = 0.1;
    double x0 = 0.0;
    double s = 0.45;
    double R = 1.0;
    std::size_t t_count = 9;
    std::size_t original_n = 16384;
    double original_L = 4.0;
    std::size_t data_refine = 4;  // local data built this many times finer than the lattice
    SolverConfig solver;
    bool patch_check = true;
};

struct ConvergenceRow {
    double eps, eps_next;
    double d_c0cs, d_c1cs1, data_diff;
};

struct SolveRecord {
    double eps;
    std::size_t iterations;
    bool converged;
    std::string failure;
    double residual;
    double defect;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::vector<SolveRecord> solves;
    double patch_difference = 0.0;
    double patch_tolerance = 0.0;
    double patch_offset = 0.0;
};

ConvergenceResult convergence_experiment(const ConvergenceOptions& opt);

}  // namespace wavemaps
