#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wavemaps/cutoff.hpp"
#include "wavemaps/io.hpp"

namespace wavemaps {

inline const std::vector<std::string> kCommands{"gen-path", "hhl", "solve", "converge", "illposed", "norms"};

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 7;
    std::size_t D = 3;
    // original path grid
    std::size_t grid_n = 16384;
    double grid_L = 4.0;
    double eps = 0.0625;
    std::vector<double> eps_list{0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
    // localization and solver lattice
    double tau = 0.1;
    double x0 = 0.0;
    double theta = 1.0;
    double R = 1.0;
    std::size_t n = 1024;
    std::size_t data_refine = 4;
    double picard_tol = 1e-10;
    std::size_t max_iter = 100;
    std::size_t t_count = 9;
    std::size_t stride = 4;
    bool patch_check = true;
    AnalysisParams params;
    // high x high -> low report
    std::string data = "brownian";
    std::size_t hhl_n = 8192;
    std::size_t modes = 896;
    double m_min = 16.0;
    double m_max = 1024.0;
    std::size_t shifts = 64;
    // lacunary scan
    int kappa0 = 4;
    int kappa_max = 9;
    int b = 2;
    int g = 3;
    double eps_loc = 0.01;
    double t = 1.0;
    bool scan_norms = true;

    std::string out;

    void validate() const;
    Json to_json() const;
};

// visits (key, member) for every key accepted in a config file or as a --key flag
template <class C, class F>
void for_each_field(C& c, F&& f) {
    f("seed", c.seed);
    f("D", c.D);
    f("grid-n", c.grid_n);
    f("grid-L", c.grid_L);
    f("eps", c.eps);
    f("eps-list", c.eps_list);
    f("tau", c.tau);
    f("x0", c.x0);
    f("theta", c.theta);
    f("R", c.R);
    f("n", c.n);
    f("data-refine", c.data_refine);
    f("picard-tol", c.picard_tol);
    f("max-iter", c.max_iter);
    f("t-count", c.t_count);
    f("stride", c.stride);
    f("patch-check", c.patch_check);
    f("s", c.params.s);
    f("r", c.params.r);
    f("delta", c.params.delta);
    f("eta", c.params.eta);
    f("data", c.data);
    f("hhl-n", c.hhl_n);
    f("modes", c.modes);
    f("m-min", c.m_min);
    f("m-max", c.m_max);
    f("shifts", c.shifts);
    f("kappa0", c.kappa0);
    f("kappa-max", c.kappa_max);
    f("b", c.b);
    f("g", c.g);
    f("eps-loc", c.eps_loc);
    f("t", c.t);
    f("scan-norms", c.scan_norms);
    f("out", c.out);
}

// WAVEMAPS_OUT, or "out"
std::string default_output_dir();

// flat JSON object with keys as in for_each_field; unknown keys and wrong types throw ConfigError
void apply_config_file(ExperimentConfig& c, const std::filesystem::path& path);
void apply_config_json(ExperimentConfig& c, const Json& j);

struct HelpRequested {
    std::string text;
};

// wavemaps <command> [--config path] [--key value ...]; file first, flags on top, then validate; --help throws HelpRequested
ExperimentConfig load_config(const std::vector<std::string>& args);

}  // namespace wavemaps
