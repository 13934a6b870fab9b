#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ptyopt/model.hpp"
#include "ptyopt/objective.hpp"

namespace ptyopt {

enum class Algorithm { gd, sgd, epie, interval };

/// rate: steps equal the admissible bound. cap: bound times cap_factor.
enum class StepMode { rate, cap };

/// theory: mu * mu_max. epie_mapped: alpha p_r / (d ||v||_inf^2) and
/// beta p_r / (d ||z||_inf^2), the steps under which SGD reproduces ePIE.
enum class SgdStepPolicy { theory, epie_mapped };

/// iid: independent draws from p. shuffled: random permutation of all
/// regions per sweep (ePIE only).
enum class IndexSchedule { iid, shuffled };

std::string to_string(Algorithm a);
std::string to_string(StepMode m);
std::string to_string(SgdStepPolicy p);
std::string to_string(IndexSchedule s);
Algorithm algorithm_from_string(std::string_view name);
StepMode step_mode_from_string(std::string_view name);
SgdStepPolicy sgd_step_policy_from_string(std::string_view name);
IndexSchedule index_schedule_from_string(std::string_view name);

struct IteratePair {
    ComplexVector z;
    ComplexVector v;
};

struct SolverConfig {
    Algorithm algorithm = Algorithm::gd;
    double theta = 0.5;
    double kappa = 0.2;
    double mu = 1.0;
    double nu = 1.0;
    double epie_alpha = 0.05;
    double epie_beta = 0.05;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;
    double grad_tol = 0.0;
    std::size_t gamma_grid = 2;
    StepMode step_mode = StepMode::rate;
    double cap_factor = 1.0;
    SgdStepPolicy sgd_steps = SgdStepPolicy::theory;
    IndexSchedule schedule = IndexSchedule::iid;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Row t holds the state (z^t, v^t) and the steps taken from it; the last
/// row is the final state with zero steps.
struct TraceRecord {
    std::size_t t = 0;
    double J = 0.0;
    double L_eps = 0.0;
    double grad_z_norm = 0.0;
    double grad_v_norm = 0.0;
    double mu_t = 0.0;
    double nu_t = 0.0;
    std::int64_t wall_ns = 0;
};

/// Per-step record of the interval solver.
struct IntervalStep {
    double J_before = 0.0;
    double J_plus_z = 0.0;  // J(z_+, v)
    double J_plus_v = 0.0;  // J(z, v_+)
    double J_after = 0.0;
    double gamma = 0.0;
    double L_v = 0.0;
    double L_z = 0.0;
    double decrease_printed = 0.0;  // 1/2 L_z^{-1} |g_z|^2 + 1/2 L_v^{-1} |g_v|^2
    double decrease_swapped = 0.0;  // 1/2 L_v^{-1} |g_z|^2 + 1/2 L_z^{-1} |g_v|^2
};

struct SolverResult {
    IteratePair final;
    std::vector<TraceRecord> trace;
    std::size_t iterations = 0;
    bool converged = false;  // stopped on grad_tol
    std::vector<std::size_t> regions;  // sampled region per step (stochastic solvers, K draws per step)
    std::vector<IntervalStep> interval;
};

struct StepSizes {
    double mu = 0.0;
    double nu = 0.0;
};

/// min{B^{-1}, (15d/4)^{-1/3} |g_z|^{-2/3}, (15d/4)^{-1/3} |g_v|^{-2/3}}, a
/// vanishing gradient dropping its term.
StepSizes gd_step_sizes(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                        const GradientPair& grad);

/// C_1 of the deterministic rate; +inf unless alpha_T, beta_T > 0.
double gd_rate_constant(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0);

/// K i.i.d. region indices by inverse CDF over the ascending regions, one
/// uniform per draw.
std::vector<std::size_t> sample_indices(const std::vector<double>& p, std::size_t K, Rng& rng);

/// (1/K) sum_k p_{r_k}^{-1} grad J_{r_k}, K = indices.size().
GradientPair stochastic_gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                                 const std::vector<std::size_t>& indices);

/// min{(1+t)^{kappa-1} B^{-1/(1-theta)}, B_z^{-2/(3-theta)}, B_v^{-2/(3-theta)}, (1-1/K)^{-1/theta}};
/// the last term is dropped for K = 1 or theta = 0. K is problem.K.
double sgd_mu_max(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v, std::size_t t,
                  double theta, double kappa);

SolverResult run_gd(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                    const SolverConfig& config);
SolverResult run_sgd(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                     const SolverConfig& config);
SolverResult run_epie(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                      const SolverConfig& config);
SolverResult run_interval(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                          const SolverConfig& config);

/// Dispatch on config.algorithm.
SolverResult run_solver(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                        const SolverConfig& config);

inline constexpr std::string_view trace_csv_header = "t,J,L_eps,grad_z_norm,grad_v_norm,mu_t,nu_t,wall_ns";

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

/// %.17g
std::string format_double(double x);

}  // namespace ptyopt
