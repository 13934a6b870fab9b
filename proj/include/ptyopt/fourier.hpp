#pragma once

#include "ptyopt/complex_vector.hpp"

namespace ptyopt {

// Unnormalized DFT convention: X_j = sum_k exp(-2 pi i j k / d) x_k, so that
// ||X||^2 = d ||x||^2. Power-of-two lengths go through an iterative radix-2
// transform, every other length through the direct O(d^2) sum.

ComplexVector dft(const ComplexVector& x);

/// Inverse transform, (1/d) times the conjugate-transpose transform.
ComplexVector idft(const ComplexVector& X);

/// Conjugate-transpose transform F^* (no 1/d factor).
ComplexVector dft_adjoint(const ComplexVector& X);

/// Direct O(d^2) summation, any d. Used for cross-checking the fast path.
ComplexVector dft_direct(const ComplexVector& x);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace ptyopt
