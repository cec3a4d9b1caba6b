#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wavemaps/fft.hpp"
#include "wavemaps/grid.hpp"
#include "wavemaps/rng.hpp"

namespace wavemaps {

using Vec = std::vector<double>;

// unit sphere S^{D-1} in R^D with a compactly supported projection extension
class Sphere {
public:
    explicit Sphere(std::size_t D);
    std::size_t dim() const { return D_; }
    // out = P_ext(p) X
    void project(std::span<const double> p, std::span<const double> X, std::span<double> out) const;
    Vec north() const;

private:
    std::size_t D_;
};

// band-limited periodic function given by the samples of a grid field
class TrigSeries {
public:
    explicit TrigSeries(const Field1D& f);
    double operator()(double x) const;
    double derivative(double x) const;
    // values (or derivatives) at arbitrary points
    std::vector<double> sample(std::span<const double> xs, bool deriv = false) const;
    const Grid1D& grid() const { return grid_; }
    double max_frequency() const { return grid_.freq(static_cast<double>(coef_.size() - 1)); }

private:
    Grid1D grid_;
    std::vector<cplx> coef_;
};

std::vector<Field1D> sample_bm_increments(std::uint64_t seed, const Grid1D& grid, std::size_t D,
                                          Stream tag = Stream::path);

struct FourierBM {
    std::vector<Field1D> oscillatory;  // periodic part, vanishing at 0
    Vec drift;                         // W^j(x) = drift_j x + oscillatory_j(x)
    std::vector<std::vector<cplx>> g;  // g_m^j for m = 1..M_max
    std::size_t M_max = 0;

    std::vector<Field1D> full() const;
};

// requires L = pi so that frequencies are integers
FourierBM sample_bm_fourier(std::uint64_t seed, std::size_t M_max, const Grid1D& grid, std::size_t D,
                            Stream tag = Stream::path);

Field1D smooth_truncate(const Field1D& W, double eps);
FourierBM smooth_truncate(const FourierBM& W, double eps);

struct BrownianPath {
    Grid1D grid;
    std::vector<Field1D> B;
    std::vector<Field1D> dB;  // right-hand side of the path ODE at grid points
    Vec B0;
    double eps = 0.0;
    double constraint_drift = 0.0;  // largest | |B|^2 - 1 | before renormalization

    std::size_t dim() const { return B.size(); }
    Vec at(std::size_t j) const;
};

struct VelocityField {
    Grid1D grid;
    std::vector<Field1D> V;
    std::vector<Field1D> Vint;  // empty unless V is supported in the central half

    std::size_t dim() const { return V.size(); }
};

using ForcingFn = std::function<void(double x, std::span<double> out)>;

// dB/dx = lambda P_ext(B) f(x) from x = 0 in both directions, RK4 on `substeps`
// sub-intervals per grid cell with renormalization after every sub-step
BrownianPath solve_path_ode(const ForcingFn& forcing, const Grid1D& grid, std::span<const double> B0,
                            double lambda, std::size_t substeps);
// band-limited forcing samples; substeps = 0 picks h_sub * max frequency <= 0.05
BrownianPath solve_path_ode(std::span<const Field1D> forcing, std::span<const double> B0, double lambda,
                            std::size_t substeps = 0);

VelocityField white_noise_velocity(const BrownianPath& B, std::span<const Field1D> Wbar_eps,
                                   bool with_integral = true);

// truncated driving signals W^eps and Wbar^eps on the original grid
struct DrivingSignals {
    Grid1D grid;
    double eps;
    std::vector<Field1D> W, Wbar;
    std::vector<TrigSeries> Ws, Wbars;
};

// increments on a grid of half length L, windowed to [-L/2, L/2], low-passed at 1/eps
DrivingSignals make_signals(std::uint64_t seed, std::size_t D, const Grid1D& grid, double eps);

BrownianPath global_path(const DrivingSignals& sig, std::span<const double> B0);
// B^eps(x) by direct integration from 0
Vec path_value_at(const DrivingSignals& sig, std::span<const double> B0, double x);

struct LocalizedData {
    double tau;
    double x0;
    BrownianPath B;
    VelocityField V;
    std::vector<Field1D> W;  // rescaled, translated, not localized
};

LocalizedData localize_rescale(const DrivingSignals& sig, std::span<const double> B0, double tau, double x0,
                               const Grid1D& local);

struct LinearWaves {
    Grid1D grid;
    std::vector<Field1D> plus, minus;
    std::vector<Field1D> dplus, dminus;
    double theta = 1.0;
    Vec shift;  // basepoint added back for the second fundamental form

    std::size_t dim() const { return plus.size(); }
};

LinearWaves linear_waves(const BrownianPath& B, const VelocityField& V, double theta);
// derivatives taken spectrally
LinearWaves waves_from_fields(std::vector<Field1D> plus, std::vector<Field1D> minus, Vec shift,
                              double theta = 1.0);

}  // namespace wavemaps
