#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavemaps/randomdata.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

enum class Sign { plus, minus };

const char* sign_name(Sign s);

// M^s P_M phi^{a,m}(x - t) d/dx P_N phi^{b,n}(x + t)
Field1D hhl_product(const LinearWaves& w, Sign a, Sign b, std::size_t m, std::size_t n, double M, double N,
                    double s, double t = 0.0);

// 64 equispaced shifts on [-2, 2]
std::vector<double> default_shifts(std::size_t count = 64, double T = 2.0);

// waves multiplied by the periodization window
LinearWaves windowed(const LinearWaves& w);

struct DsOptions {
    double s = 0.45;
    std::vector<double> scales;    // empty: every resolved dyadic scale
    std::vector<double> t_samples = default_shifts();
    bool keep_table = false;
};

struct DsEntry {
    Sign sign1, sign2;
    std::size_t m, n;
    double M, N, t;
    double norm;
    bool shifted;
};

struct DsResult {
    double value = 0.0;
    double linear = 0.0;    // |phi^+|_{C^s} + |phi^-|_{C^s}
    double products = 0.0;  // sqrt of the largest unshifted product norm
    double shifted = 0.0;   // same for the shifted mixed products
    std::vector<DsEntry> table;
};

DsResult ds_norm(const LinearWaves& w, const DsOptions& opt = {});
double ds_distance(const LinearWaves& a, const LinearWaves& b, const DsOptions& opt = {});

struct HhlOptions {
    double s = 0.45;
    double r = 0.74;
    std::vector<double> scales;   // M values of the column; empty: all resolved scales
    std::vector<double> t_samples{0.0};  // shifts for the D^s value entering the Lemma check
    double lemma_constant = 50.0;
};

struct LemmaEntry {
    double M, N;
    double norm;   // largest |P_M phi d P_N phi|_{C^{r-1}} over signs and components
    double ratio;  // norm / (M^{-s} N^{r-s})
};

struct HhlReport {
    std::vector<double> scales;
    std::vector<double> column;
    Fit fit{};
    std::vector<LemmaEntry> lemma;
    double lemma_max_ratio = 0.0;
    double ds_value = 0.0;
    bool lemma_holds = false;  // max ratio <= C ds^2
};

HhlReport hhl_scaling_report(const LinearWaves& w, const HhlOptions& opt = {});

}  // namespace wavemaps
