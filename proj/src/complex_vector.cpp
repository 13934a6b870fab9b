#include "ptyopt/complex_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ptyopt {

namespace {

void require_same_length(const ComplexVector& a, const ComplexVector& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

}  // namespace

ComplexVector::ComplexVector(std::size_t d) : entries_(d) {
    if (d == 0) throw std::invalid_argument("ComplexVector: length must be at least 1");
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("ComplexVector: length must be at least 1");
}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries)
    : ComplexVector(std::vector<Complex>(entries)) {}

bool ComplexVector::is_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& rhs) {
    require_same_length(*this, rhs, "operator+=");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] += rhs[i];
    return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& rhs) {
    require_same_length(*this, rhs, "operator-=");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] -= rhs[i];
    return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) noexcept {
    for (auto& c : entries_) c *= scale;
    return *this;
}

ComplexVector& ComplexVector::axpy(Complex scale, const ComplexVector& x) {
    require_same_length(*this, x, "axpy");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] += scale * x[i];
    return *this;
}

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs) { return lhs += rhs; }
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs) { return lhs -= rhs; }
ComplexVector operator*(Complex scale, ComplexVector x) { return x *= scale; }

ComplexVector hadamard(const ComplexVector& a, const ComplexVector& b) {
    require_same_length(a, b, "hadamard");
    ComplexVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ComplexVector conj(const ComplexVector& x) {
    ComplexVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::conj(x[i]);
    return out;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
    require_same_length(a, b, "inner");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2_squared(const ComplexVector& x) noexcept {
    double acc = 0.0;
    for (const auto& c : x) acc += std::norm(c);
    return acc;
}

double norm2(const ComplexVector& x) noexcept { return std::sqrt(norm2_squared(x)); }

double norm_inf(const ComplexVector& x) noexcept {
    double m = 0.0;
    for (const auto& c : x) m = std::max(m, std::abs(c));
    return m;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
    require_same_length(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace ptyopt
