#include "ptyopt/shift.hpp"

#include <numbers>
#include <set>
#include <stdexcept>

namespace ptyopt {

namespace {

long mod(long a, long d) {
    const long m = a % d;
    return m < 0 ? m + d : m;
}

// Index of v feeding coordinate j of S_r v, or -1 when it falls off the grid.
long source_index(std::size_t j, long r, std::size_t d, ShiftMode mode) {
    const long sd = static_cast<long>(d);
    const long src = static_cast<long>(j) - r;
    if (mode == ShiftMode::circular) return mod(src, sd);
    return (src >= 0 && src < sd) ? src : -1;
}

}  // namespace

std::string to_string(ShiftMode mode) {
    return mode == ShiftMode::circular ? "circular" : "zero-padded";
}

ShiftMode shift_mode_from_string(std::string_view name) {
    if (name == "circular") return ShiftMode::circular;
    if (name == "zero-padded" || name == "zero_padded") return ShiftMode::zero_padded;
    throw std::invalid_argument("unknown shift mode '" + std::string(name) + "'");
}

ShiftSet::ShiftSet(std::vector<long> offsets, ShiftMode mode, std::size_t d)
    : offsets_(std::move(offsets)), mode_(mode), d_(d) {
    if (d_ == 0) throw std::invalid_argument("ShiftSet: dimension must be at least 1");
    if (offsets_.empty()) throw std::invalid_argument("ShiftSet: at least one offset is required");
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        if (offsets_[i] <= offsets_[i - 1]) {
            throw std::invalid_argument("ShiftSet: offsets must be strictly increasing");
        }
    }
    if (mode_ == ShiftMode::circular) {
        std::set<long> reduced;
        for (long r : offsets_) {
            if (!reduced.insert(mod(r, static_cast<long>(d_))).second) {
                throw std::invalid_argument("ShiftSet: circular offsets must be distinct modulo d");
            }
        }
    }
}

ShiftSet ShiftSet::all_circular(std::size_t d) {
    std::vector<long> offsets(d);
    for (std::size_t r = 0; r < d; ++r) offsets[r] = static_cast<long>(r);
    return ShiftSet(std::move(offsets), ShiftMode::circular, d);
}

ComplexVector shift(const ComplexVector& v, long r, ShiftMode mode) {
    const std::size_t d = v.size();
    ComplexVector out(d);
    for (std::size_t j = 0; j < d; ++j) {
        const long src = source_index(j, r, d, mode);
        if (src >= 0) out[j] = v[static_cast<std::size_t>(src)];
    }
    return out;
}

Complex q_apply(const ComplexVector& z, const ComplexVector& v, long r, std::size_t k, ShiftMode mode) {
    const std::size_t d = z.size();
    if (v.size() != d) throw std::invalid_argument("q_apply: length mismatch");
    if (k >= d) throw std::invalid_argument("q_apply: frequency index out of range");
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < d; ++j) {
        const long src = source_index(j, r, d, mode);
        if (src < 0) continue;
        const double angle =
            -2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / static_cast<double>(d);
        acc += z[j] * std::polar(1.0, angle) * v[static_cast<std::size_t>(src)];
    }
    return acc;
}

}  // namespace ptyopt
