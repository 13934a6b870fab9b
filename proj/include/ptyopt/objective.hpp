#pragma once

#include <cstddef>

#include "ptyopt/complex_vector.hpp"
#include "ptyopt/model.hpp"

namespace ptyopt {

/// Wirtinger gradient (d/d conj z, d/d conj v) = 1/2 (d/dRe + i d/dIm).
struct GradientPair {
    ComplexVector g_z;
    ComplexVector g_v;

    double norm_squared() const noexcept { return norm2_squared(g_z) + norm2_squared(g_v); }
};

struct LossValue {
    double J = 0.0;      // regularized objective
    double L_eps = 0.0;  // smoothed amplitude loss alone
};

struct Evaluation {
    LossValue value;
    GradientPair gradient;
};

struct BoundSet {
    double B = 0.0;
    double B_z = 0.0;
    double B_v = 0.0;
    double L_v = 0.0;
    double L_z = 0.0;
};

// Regions are addressed by their index in the shift set (ascending offset),
// not by the offset itself. Every sum over regions runs in that order.

/// sum_k (sqrt(|[F(z o S_r v)]_k|^2 + eps) - sqrt(y_{r,k} + eps))^2
double loss_region(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                   std::size_t region);

/// J = sum_r loss_region + alpha_T ||z||^2 + beta_T ||v||^2, together with the bare loss.
LossValue loss(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);

/// Gradient of J. With eps = 0 a coefficient of modulus below 1e-300 has its
/// ratio term dropped.
GradientPair gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);

/// Gradient of J_r = L_r + p_r (alpha_T ||z||^2 + beta_T ||v||^2).
GradientPair gradient_region(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                             std::size_t region);

/// Loss and gradient from one set of transforms.
Evaluation evaluate(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);

double bound_B(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);
double bound_Bz(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);
double bound_Bv(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);

struct LipschitzConstants {
    double L_v = 0.0;  // governs steps in z
    double L_z = 0.0;  // governs steps in v
};

/// L_v = d max_j sum_r |(S_r v)_j|^2 + alpha_T, L_z = d max_j sum_r |(S_{-r} z)_j|^2 + beta_T.
LipschitzConstants lipschitz_constants(const ProblemInstance& problem, const ComplexVector& z,
                                       const ComplexVector& v);

BoundSet bounds(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v);

/// ||y/d||_1^{1/2}
double measurement_scale(const ProblemInstance& problem) noexcept;

}  // namespace ptyopt
