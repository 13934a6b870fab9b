#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptyopt/model.hpp"
#include "ptyopt/solvers.hpp"

namespace ptyopt {

/// Relative error after removing global phases and scaling: with
/// g = <z, x> / ||z||^2, u = v / g and the unit phase c aligning u with w,
/// returns ||g z - x|| / ||x|| + ||c u - w|| / ||w||. Invariant under
/// (a z, b v) for any |a| = |b| = 1. +inf when z = 0 (or g = 0). Throws on a
/// zero ground truth.
double reconstruction_error(const ComplexVector& z, const ComplexVector& v, const ComplexVector& x,
                            const ComplexVector& w);

struct DecayFit {
    double slope = 0.0;
    bool degenerate = false;  // constant or too short a series; slope is then 0
    std::size_t points = 0;
};

/// Least-squares slope of log(min-so-far |grad J|^2) against log t over
/// t_min <= t <= t_max (t >= 1). Requires trace.size() > t_min + 100.
DecayFit fit_decay_slope(const std::vector<TraceRecord>& trace, std::size_t t_min,
                         std::optional<std::size_t> t_max = std::nullopt);

/// min over the trace of |grad J|^2.
double min_grad_norm_sq(const std::vector<TraceRecord>& trace);

enum class InitMode { random, truth };

/// Starting pair: i.i.d. complex Gaussian from Rng(derive_seed(seed, 1)), or
/// the ground truth.
IteratePair initial_guess(const ProblemInstance& problem, InitMode mode, std::uint64_t seed);

struct RunSummary {
    double final_J = 0.0;
    double min_grad_norm_sq = 0.0;
    std::optional<double> decay_slope;
    std::optional<double> reconstruction_error;
    double wall_time = 0.0;  // seconds
    std::size_t iterations = 0;
    bool converged = false;
};

RunSummary summarize(const ProblemInstance& problem, const SolverResult& result, double wall_time);

/// Summary plus every solver setting, so a run can be reproduced from it.
nlohmann::json summary_to_json(const RunSummary& summary, const SolverConfig& config, InitMode init,
                               const nlohmann::json& problem_provenance);

nlohmann::json solver_config_to_json(const SolverConfig& config);

/// Reads the keys present in doc over a copy of base; unknown keys are
/// rejected with ConfigError.
SolverConfig solver_config_from_json(const nlohmann::json& doc, SolverConfig base = {});

/// Problem block of an experiment file: either {"file": path} or synthesis
/// parameters d, offsets ("all" or list), mode, seed, noise, sigma, epsilon,
/// alpha_T, beta_T, p, K.
ProblemParams problem_params_from_json(const nlohmann::json& doc);
nlohmann::json problem_params_to_json(const ProblemParams& params);

struct ExperimentConfig {
    std::optional<std::filesystem::path> problem_file;
    ProblemParams problem;
    std::vector<SolverConfig> solvers;
    std::size_t repetitions = 1;
    std::uint64_t seed = 0;
    InitMode init = InitMode::random;
    std::filesystem::path output_dir = "out";
};

ExperimentConfig experiment_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Runs every (solver, repetition) pair. Repetition i uses seed + i for the
/// solver stream and the initial guess. Writes <algo>_<index>_rep<i>.csv and
/// matching .json summaries into output_dir; returns the summary paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config);

/// Command-line entry: synth | run | verify | report. Returns the exit status
/// (0 success, 1 failed check or run, 2 usage or configuration error).
int run_cli(int argc, const char* const* argv);

}  // namespace ptyopt
