#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "wavemaps/fft.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

enum class Axis { u, v };

// Fourier-side multiplier m(xi) applied to a periodic field
Field1D apply_symbol(const Field1D& f, const std::function<double(double)>& m);
Field2D apply_symbol(const Field2D& F, Axis axis, const std::function<double(double)>& m);

// largest |xi| carrying spectral weight above rel_tol of the peak
double max_frequency(const Field1D& f, double rel_tol = 1e-13);

double dyadic_symbol(double xi, double N);
double fattened_symbol(double xi, double N);

Field1D lp_project(const Field1D& f, double N, bool fattened = false);
Field2D lp_project(const Field2D& F, Axis axis, double N, bool fattened = false);
Field1D low_pass(const Field1D& f, double N);
Field2D low_pass(const Field2D& F, Axis axis, double N);
Field1D derivative(const Field1D& f);

// sup_N |P_N f| over the resolved band, one entry per grid scale
std::vector<double> block_sups(const Field1D& f);
double holder_norm(const Field1D& f, double gamma);
// pointwise Euclidean norm over components
double holder_norm(std::span<const Field1D> f, double gamma);
double product_norm(const Field2D& F, double gamma1, double gamma2);

enum class Para { ll, sim, gg, lesssim, gtrsim, notsim, ll_sigma, gtrsim_sigma, down };

// f at scale M, g at scale N
Field1D paraproduct(const Field1D& f, const Field1D& g, Para kind, double sigma = 0.5);
Field2D paraproduct(const Field2D& f, const Field2D& g, Axis axis, Para kind, double sigma = 0.5);

// P_K(f g) - f P_K g
Field1D commutator_apply(const Field1D& f, const Field1D& g, double K);
Field2D commutator_apply(const Field2D& f, const Field2D& g, Axis axis, double K);

// throws AliasingError unless the product is alias free
void check_product(const Field1D& f, const Field1D& g);
Field1D product(const Field1D& f, const Field1D& g);

Field1D trace_diag(const Field2D& F);
// F(u, u), constant in v
Field2D trace_u(const Field2D& F);
// F(v, v), constant in u
Field2D trace_v(const Field2D& F);

// antiderivative vanishing at 0; requires support inside [-L/2, L/2]
Field1D integrate(const Field1D& f);
Field2D integrate_partial(const Field2D& F, Axis axis);
Field1D rewindow(const Field1D& f);

enum class DuhamelMethod { direct, factorized };
// -int_u^v dv' int_u^v' du' F(u', v')
Field2D duhamel(const Field2D& F, DuhamelMethod method = DuhamelMethod::direct);

struct Fit {
    double slope;
    double intercept;
    double r_squared;
};
Fit scaling_slope(std::span<const std::pair<double, double>> pairs);
// ordinary least squares on raw values
Fit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace wavemaps
