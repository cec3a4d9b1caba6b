#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "wavemaps/grid.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

// frequencies b^{g k}, kappa0 <= k <= kappa
struct LacunaryProfile {
    int b = 2;
    int g = 3;
    int kappa0 = 1;
    int kappa = 1;
    double eps_loc = 0.01;

    std::vector<double> frequencies() const;
    double max_frequency() const;
    void validate() const;
};

// psi1 = chi(y/eps) sum n^{-1/2} sin(n y), psi2 = chi(y/eps) (sin y + sum n^{-1/2} sin((n-1) y))
class Lacunary {
public:
    explicit Lacunary(LacunaryProfile p);

    double psi1(double y) const;
    double psi2(double y) const;
    double dpsi1(double y) const;
    double dpsi2(double y) const;
    // both fields vanish outside [-support, support]
    double support() const { return 2.1 * p_.eps_loc; }
    const LacunaryProfile& profile() const { return p_; }

private:
    LacunaryProfile p_;
    std::vector<double> n_, amp_;
};

std::pair<Field1D, Field1D> lacunary_fields(const LacunaryProfile& p, const Grid1D& g);

// refine scales the panel count; the default gives 16 Gauss points per shortest oscillation
struct QuadratureOptions {
    double refine = 1.0;
};

// y -> int_{-inf}^{y} f for f supported in [-2.1 eps, 2.1 eps], prefix sums over Gauss-Legendre panels
class CumulativeIntegral {
public:
    // panels break at the chi plateau edges +-2 eps and the support ends +-2.1 eps
    CumulativeIntegral(std::function<double(double)> f, double eps, double max_freq, const QuadratureOptions& q);
    double operator()(double y) const;
    double total() const { return prefix_.back(); }

private:
    std::vector<double> edges_, prefix_;
    std::function<double(double)> f_;
    double panel(double a, double b) const;
};

// <Pic(t, x), e1> = (1/8) int_{x-t}^{x+t} psi1' psi2^2
double picard_first_component(const Lacunary& L, double t, double x, const QuadratureOptions& q = {});

struct ScanOptions {
    int kappa0 = 4;
    int kappa_max = 9;
    int b = 2;
    int g = 3;
    double t = 1.0;
    double eps_loc = 0.01;
    bool norms = true;
    std::size_t norm_n = 131072;  // smallest grid for the C^{1/2} norms, doubled as needed
    QuadratureOptions quadrature;
};

struct ScanRow {
    int kappa;
    double J, predicted, residual;
    double psi1_norm, psi2_norm;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    double main_coefficient = 0.0;  // predicted = main_coefficient (kappa - kappa0)
    Fit fit{};                      // J against kappa - kappa0
};

ScanResult divergence_scan(const ScanOptions& opt);

}  // namespace wavemaps
