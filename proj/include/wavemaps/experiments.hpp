#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavemaps/config.hpp"
#include "wavemaps/enhanced.hpp"
#include "wavemaps/io.hpp"

namespace wavemaps {

std::string version_string();

// what a run hands back before anything touches the disk
struct RunArtifacts {
    std::vector<std::pair<std::string, Csv>> files;
    Json results;
    bool ok = true;
    std::string failure;
};

// top dyadic scale and the exactly resolved band of a grid
Json band_json(const Grid1D& g);
Json rng_contract_json(std::uint64_t seed);

// Brownian waves from independent Fourier-series paths on [-pi, pi), plus from the path stream,
// minus from the velocity stream
LinearWaves fourier_waves(std::uint64_t seed, std::size_t D, std::size_t n, std::size_t modes);
// sum over the scales M of n^{-1/2} sin(n x) against n^{-1/2} sin((n - 1) x), n = 3M/4, in the first component,
// scaled so |phi^+|_{C^s} equals `match`
LinearWaves lacunary_waves(const Grid1D& g, std::size_t D, const std::vector<double>& scales, double s, double match);

std::vector<double> dyadic_range(double lo, double hi);

struct DataNormRow {
    double eps;
    double B_cs, V_cs1;
    double dB_cs, dV_cs1;  // difference to the next eps; NaN on the last row
};

// global paths on the original grid cut to [-2, 2], velocities without the running integral
std::vector<DataNormRow> data_norms(std::uint64_t seed, std::size_t D, const Grid1D& grid,
                                    const std::vector<double>& eps_list, double s);

RunArtifacts run_gen_path(const ExperimentConfig& c);
RunArtifacts run_hhl(const ExperimentConfig& c);
RunArtifacts run_solve(const ExperimentConfig& c);
RunArtifacts run_converge(const ExperimentConfig& c);
RunArtifacts run_illposed(const ExperimentConfig& c);
RunArtifacts run_norms(const ExperimentConfig& c);
RunArtifacts run_command(const ExperimentConfig& c);

// full metadata record for a run
Json run_metadata(const ExperimentConfig& c, const RunArtifacts& a);

// runs, writes every CSV and <command>.json into c.out; 0 on success, 1 on a validated failure
int execute(const ExperimentConfig& c);

}  // namespace wavemaps
