#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ptyopt {

using Complex = std::complex<double>;

/// Fixed-length vector of complex amplitudes (objects, windows, spectra,
/// gradients). The length is set at construction and is at least one.
class ComplexVector {
public:
    explicit ComplexVector(std::size_t d);
    explicit ComplexVector(std::vector<Complex> entries);
    ComplexVector(std::initializer_list<Complex> entries);

    std::size_t size() const noexcept { return entries_.size(); }

    Complex& operator[](std::size_t i) noexcept { return entries_[i]; }
    const Complex& operator[](std::size_t i) const noexcept { return entries_[i]; }

    std::span<Complex> span() noexcept { return entries_; }
    std::span<const Complex> span() const noexcept { return entries_; }
    const std::vector<Complex>& values() const noexcept { return entries_; }

    auto begin() noexcept { return entries_.begin(); }
    auto end() noexcept { return entries_.end(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    bool is_finite() const noexcept;

    ComplexVector& operator+=(const ComplexVector& rhs);
    ComplexVector& operator-=(const ComplexVector& rhs);
    ComplexVector& operator*=(Complex scale) noexcept;

    /// this += scale * x
    ComplexVector& axpy(Complex scale, const ComplexVector& x);

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    std::vector<Complex> entries_;
};

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator*(Complex scale, ComplexVector x);

ComplexVector hadamard(const ComplexVector& a, const ComplexVector& b);
ComplexVector conj(const ComplexVector& x);

/// Hermitian inner product sum_j conj(a_j) b_j.
Complex inner(const ComplexVector& a, const ComplexVector& b);

double norm2_squared(const ComplexVector& x) noexcept;
double norm2(const ComplexVector& x) noexcept;
double norm_inf(const ComplexVector& x) noexcept;

/// Largest per-coordinate |a_j - b_j|.
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);

}  // namespace ptyopt
