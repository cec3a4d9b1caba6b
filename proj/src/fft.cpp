#include "wavemaps/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace wavemaps {

namespace {

// one pair of plans plus aligned scratch per transform length
struct Plan {
    std::size_t n;
    double* real;
    fftw_complex* spec;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit Plan(std::size_t len) : n(len) {
        real = fftw_alloc_real(n);
        spec = fftw_alloc_complex(n / 2 + 1);
        const int ni = static_cast<int>(n);
        fwd = fftw_plan_dft_r2c_1d(ni, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(ni, spec, real, FFTW_ESTIMATE);
    }
    ~Plan() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

std::mutex plan_mutex;

Plan& plan_for(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Plan>> cache;
    auto& p = cache[n];
    if (!p) p = std::make_unique<Plan>(n);
    return *p;
}

}  // namespace

std::vector<cplx> rfft(std::span<const double> x) {
    std::lock_guard lock(plan_mutex);
    Plan& p = plan_for(x.size());
    std::copy(x.begin(), x.end(), p.real);
    fftw_execute(p.fwd);
    std::vector<cplx> out(p.n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {p.spec[k][0], p.spec[k][1]};
    return out;
}

std::vector<double> irfft(std::span<const cplx> c, std::size_t n) {
    std::lock_guard lock(plan_mutex);
    Plan& p = plan_for(n);
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        p.spec[k][0] = c[k].real();
        p.spec[k][1] = c[k].imag();
    }
    fftw_execute(p.bwd);
    std::vector<double> out(p.real, p.real + n);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& a : out) a *= scale;
    return out;
}

}  // namespace wavemaps
