#include "ptyopt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptyopt/fourier.hpp"
#include "ptyopt/shift.hpp"

namespace ptyopt {

namespace {

constexpr double vanishing_modulus = 1e-300;

void check_lengths(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    if (z.size() != problem.dimension() || v.size() != problem.dimension()) {
        throw std::invalid_argument("objective: iterate length differs from d");
    }
}

void check_region(const ProblemInstance& problem, std::size_t region) {
    if (region >= problem.regions()) throw std::out_of_range("objective: region index out of range");
}

struct RegionTerms {
    double loss = 0.0;
    ComplexVector back;  // F^* c, c_k = a_k (1 - sqrt(y+eps)/sqrt(|a|^2+eps))
};

RegionTerms region_terms(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                         std::size_t region, bool want_gradient) {
    const ShiftMode mode = problem.shifts().mode();
    const long r = problem.shifts().offset(region);
    const double eps = problem.epsilon;
    const auto y = problem.measurements.row(region);

    ComplexVector a = dft(hadamard(z, shift(v, r, mode)));
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double modulus = std::sqrt(std::norm(a[k]) + eps);
        const double target = std::sqrt(y[k] + eps);
        const double diff = modulus - target;
        total += diff * diff;
        if (want_gradient) {
            if (eps == 0.0 && std::abs(a[k]) < vanishing_modulus) continue;  // ratio term is zero
            a[k] *= 1.0 - target / modulus;
        }
    }
    RegionTerms out{total, ComplexVector(a.size())};
    if (want_gradient) out.back = dft_adjoint(a);
    return out;
}

// Adds the region's loss gradient: conj(S_r v) o s to g_z, S_{-r}(conj z o s) to g_v.
void accumulate_region_gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                                std::size_t region, const ComplexVector& s, GradientPair& out) {
    const ShiftMode mode = problem.shifts().mode();
    const long r = problem.shifts().offset(region);
    out.g_z += hadamard(conj(shift(v, r, mode)), s);
    out.g_v += shift(hadamard(conj(z), s), -r, mode);
}

}  // namespace

double measurement_scale(const ProblemInstance& problem) noexcept {
    return std::sqrt(problem.measurements.l1_norm() / static_cast<double>(problem.dimension()));
}

double loss_region(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                   std::size_t region) {
    check_lengths(problem, z, v);
    check_region(problem, region);
    return region_terms(problem, z, v, region, false).loss;
}

LossValue loss(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    check_lengths(problem, z, v);
    double L = 0.0;
    for (std::size_t region = 0; region < problem.regions(); ++region) {
        L += region_terms(problem, z, v, region, false).loss;
    }
    return {L + problem.alpha_T * norm2_squared(z) + problem.beta_T * norm2_squared(v), L};
}

Evaluation evaluate(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    check_lengths(problem, z, v);
    const std::size_t d = problem.dimension();
    GradientPair grad{ComplexVector(d), ComplexVector(d)};
    double L = 0.0;
    for (std::size_t region = 0; region < problem.regions(); ++region) {
        RegionTerms terms = region_terms(problem, z, v, region, true);
        L += terms.loss;
        accumulate_region_gradient(problem, z, v, region, terms.back, grad);
    }
    grad.g_z.axpy(problem.alpha_T, z);
    grad.g_v.axpy(problem.beta_T, v);
    const double J = L + problem.alpha_T * norm2_squared(z) + problem.beta_T * norm2_squared(v);
    return {{J, L}, std::move(grad)};
}

GradientPair gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    return evaluate(problem, z, v).gradient;
}

GradientPair gradient_region(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                             std::size_t region) {
    check_lengths(problem, z, v);
    check_region(problem, region);
    const std::size_t d = problem.dimension();
    GradientPair grad{ComplexVector(d), ComplexVector(d)};
    RegionTerms terms = region_terms(problem, z, v, region, true);
    accumulate_region_gradient(problem, z, v, region, terms.back, grad);
    const double p_r = problem.p.at(region);
    grad.g_z.axpy(problem.alpha_T * p_r, z);
    grad.g_v.axpy(problem.beta_T * p_r, v);
    return grad;
}

double bound_B(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    const double d = static_cast<double>(problem.dimension());
    return 3.0 * d * (10.0 / 3.0 * norm2_squared(z) + 10.0 / 3.0 * norm2_squared(v) + measurement_scale(problem)) +
           3.0 * std::max(problem.alpha_T, problem.beta_T);
}

namespace {

double partial_bound(const ProblemInstance& problem, double other_norm, double own_norm, double product,
                     double weight) {
    const double d = static_cast<double>(problem.dimension());
    const double denom = std::sqrt(static_cast<double>(problem.K)) * problem.p_min();
    return std::sqrt(15.0 * d / 4.0) *
           (d * other_norm * (product + measurement_scale(problem)) / denom + weight * own_norm);
}

}  // namespace

double bound_Bz(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    const double nz = norm2(z), nv = norm2(v);
    return partial_bound(problem, nv, nz, nz * nv, problem.alpha_T);
}

double bound_Bv(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    const double nz = norm2(z), nv = norm2(v);
    return partial_bound(problem, nz, nv, nz * nv, problem.beta_T);
}

LipschitzConstants lipschitz_constants(const ProblemInstance& problem, const ComplexVector& z,
                                       const ComplexVector& v) {
    check_lengths(problem, z, v);
    const std::size_t d = problem.dimension();
    const ShiftMode mode = problem.shifts().mode();
    std::vector<double> cover_v(d, 0.0), cover_z(d, 0.0);
    for (long r : problem.shifts().offsets()) {
        const ComplexVector sv = shift(v, r, mode);
        const ComplexVector sz = shift(z, -r, mode);
        for (std::size_t j = 0; j < d; ++j) {
            cover_v[j] += std::norm(sv[j]);
            cover_z[j] += std::norm(sz[j]);
        }
    }
    const double dd = static_cast<double>(d);
    return {dd * *std::max_element(cover_v.begin(), cover_v.end()) + problem.alpha_T,
            dd * *std::max_element(cover_z.begin(), cover_z.end()) + problem.beta_T};
}

BoundSet bounds(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    const LipschitzConstants L = lipschitz_constants(problem, z, v);
    return {bound_B(problem, z, v), bound_Bz(problem, z, v), bound_Bv(problem, z, v), L.L_v, L.L_z};
}

}  // namespace ptyopt
