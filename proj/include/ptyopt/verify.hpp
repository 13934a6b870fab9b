#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptyopt/model.hpp"
#include "ptyopt/objective.hpp"
#include "ptyopt/rng.hpp"

namespace ptyopt {

/// Outcome of one sampled inequality or identity. Slack is normalized,
/// typically (rhs - lhs) / (1 + |rhs|), and passed == (worst_slack >= -tolerance).
struct CheckReport {
    std::string name;
    std::size_t samples = 0;
    double worst_slack = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::string detail;
};

nlohmann::json to_json(const CheckReport& report);
nlohmann::json to_json(const std::vector<CheckReport>& reports);

/// 1e-6 (1 + max(||z||_inf, ||v||_inf))
double default_fd_step(const ComplexVector& z, const ComplexVector& v);

/// Central differences of J on every real and imaginary coordinate of z and v,
/// assembled as 1/2 (d/dRe + i d/dIm).
GradientPair fd_wirtinger_gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                                   double h_step);

/// Analytic gradient against the FD oracle at n random points; slack is minus
/// the relative error ||g - g_fd|| / max(||g||, ||g_fd||).
CheckReport check_gradient_fd(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng,
                              double tolerance = 1e-6);

CheckReport check_descent_lemma(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng);

/// Explicit-direction form, for hand-built cases.
double descent_lemma_rhs(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                         const ComplexVector& u, const ComplexVector& h);

/// Exact expectation of the stochastic gradient by enumerating all R^K index
/// tuples, compared with the full gradient.
CheckReport check_unbiasedness(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                               double tolerance = 1e-12);

/// (15d/4) ||g_z||^2 <= B_z^2 and (15d/4) ||g_v||^2 <= B_v^2 at sampled points and index sets.
CheckReport check_gradient_bounds(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng);

/// sum_{r,k} |[F(z o S_r v)]_k|^2 <= d ||z||^2 ||v||^2, coefficients summed entrywise.
CheckReport check_bilinear_bound(std::size_t d, const ShiftSet& shifts, std::size_t n_samples, double scale,
                                 Rng& rng);

/// L_eps(z, v) <= d ||z||^2 ||v||^2 + ||y||_1
CheckReport check_loss_upper_bound(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng);

/// L_v <= d ||v||^2 + alpha_T and L_z <= d ||z||^2 + beta_T
CheckReport check_lipschitz_constant_bound(const ProblemInstance& problem, std::size_t n_samples, double scale,
                                           Rng& rng);

/// Local Lipschitz bound on grad J between sampled nearby pairs. Requires eps > 0.
CheckReport check_lipschitz(const ProblemInstance& problem, std::size_t n_samples, Rng& rng);

double lipschitz_bound_rhs(const ProblemInstance& problem, const ComplexVector& z1, const ComplexVector& v1,
                           const ComplexVector& z2, const ComplexVector& v2);

/// Named groups: gradient, descent, unbiased, bounds, lipschitz, all.
std::vector<CheckReport> run_suite(const std::string& suite, const ProblemInstance& problem, std::uint64_t seed);

const std::vector<std::string>& suite_names();

}  // namespace ptyopt
