#pragma once

namespace wavemaps {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)
double smooth_step(double t);
double smooth_step_prime(double t);

// even Fourier cutoff: 1 on |xi| <= 7/8, 0 on |xi| >= 9/8
double rho(double xi);
// rho(xi) for N = 1, rho(xi/N) - rho(2 xi/N) otherwise
double rho_N(double xi, double N);

// spatial cutoff: 1 on |x| <= 2, 0 on |x| >= 21/10
double chi(double x);
double chi_prime(double x);

// 1 on |x| <= L/2, 0 on |x| >= 0.9 L
double window(double x, double L);

// radial profile of the projection extension: 1 on [3/4, 5/4], 0 outside [1/2, 3/2]
double projection_bump(double r);
// radial profile of the second-form extension: 1 on [1/2, 3/2], 0 outside [1/4, 2]
double second_form_bump(double r);

// dyadic frequency relations
inline constexpr double kFatten = 1024.0;
inline bool much_less(double M, double N) { return M <= N / kFatten; }
inline bool comparable(double M, double N) { return N / kFatten < M && M < N * kFatten; }
inline bool less_sim(double M, double N) { return M <= N * kFatten; }

struct AnalysisParams {
    double s = 0.45;
    double r = 0.74;
    double delta = 0.01;
    double eta = 0.001;

    double sigma() const { return 100.0 * delta; }
    // throws ConfigError naming the offending field
    void validate() const;
    // 1/2 - s < delta < 3/4 - r; reported, not enforced
    bool ordered() const;
};

}  // namespace wavemaps
