#include "wavemaps/cutoff.hpp"

#include <cmath>

#include "wavemaps/error.hpp"

namespace wavemaps {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double glue_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// 1 on [a, b], 0 outside [a - w, b + w']
double plateau(double r, double lo_out, double lo_in, double hi_in, double hi_out) {
    if (r <= lo_out || r >= hi_out) return 0.0;
    if (r < lo_in) return smooth_step((r - lo_out) / (lo_in - lo_out));
    if (r > hi_in) return 1.0 - smooth_step((r - hi_in) / (hi_out - hi_in));
    return 1.0;
}

}  // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = glue(t), b = glue(1.0 - t);
    return a / (a + b);
}

double smooth_step_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double a = glue(t), b = glue(1.0 - t);
    const double s = a + b;
    return (glue_prime(t) * b + a * glue_prime(1.0 - t)) / (s * s);
}

double rho(double xi) { return 1.0 - smooth_step((std::abs(xi) - 0.875) / 0.25); }

double rho_N(double xi, double N) {
    if (N <= 1.0) return rho(xi);
    return rho(xi / N) - rho(2.0 * xi / N);
}

double chi(double x) { return 1.0 - smooth_step((std::abs(x) - 2.0) / 0.1); }

double chi_prime(double x) {
    const double d = -smooth_step_prime((std::abs(x) - 2.0) / 0.1) / 0.1;
    return x < 0.0 ? -d : d;
}

double window(double x, double L) { return 1.0 - smooth_step((std::abs(x) - 0.5 * L) / (0.4 * L)); }

double projection_bump(double r) { return plateau(r, 0.5, 0.75, 1.25, 1.5); }

double second_form_bump(double r) { return plateau(r, 0.25, 0.5, 1.5, 2.0); }

void AnalysisParams::validate() const {
    if (!(s < 0.5)) throw ConfigError("s", "s must be < 1/2");
    if (!(s > 0.0)) throw ConfigError("s", "s must be > 0");
    if (!(r > 0.5 && r < 0.75)) throw ConfigError("r", "r must satisfy 1/2 < r < 3/4");
    if (!(delta > 0.0)) throw ConfigError("delta", "delta must be positive");
    if (!(eta > 0.0)) throw ConfigError("eta", "eta must be positive");
    if (!(eta < delta)) throw ConfigError("eta", "eta must be smaller than delta");
}

bool AnalysisParams::ordered() const {
    return 0.5 - s < delta && delta < 0.75 - r;
}

}  // namespace wavemaps
