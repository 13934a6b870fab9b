#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ptyopt/complex_vector.hpp"

namespace ptyopt {

enum class ShiftMode { circular, zero_padded };

std::string to_string(ShiftMode mode);
ShiftMode shift_mode_from_string(std::string_view name);

/// Scan positions of the window. Offsets are kept strictly increasing, which
/// fixes the region order used in every sum over regions.
class ShiftSet {
public:
    ShiftSet(std::vector<long> offsets, ShiftMode mode, std::size_t d);

    /// All d circular shifts {0, ..., d-1}.
    static ShiftSet all_circular(std::size_t d);

    std::size_t count() const noexcept { return offsets_.size(); }
    long offset(std::size_t region) const { return offsets_.at(region); }
    const std::vector<long>& offsets() const noexcept { return offsets_; }
    ShiftMode mode() const noexcept { return mode_; }
    std::size_t dimension() const noexcept { return d_; }

    friend bool operator==(const ShiftSet&, const ShiftSet&) = default;

private:
    std::vector<long> offsets_;
    ShiftMode mode_;
    std::size_t d_;
};

/// (S_r v)_j = v_{(j-r) mod d} (circular) or v_{j-r} when 0 <= j-r < d, else 0.
ComplexVector shift(const ComplexVector& v, long r, ShiftMode mode = ShiftMode::circular);

/// z^T diag(conj f^k) S_r v, i.e. the k-th DFT coefficient of z o S_r v,
/// summed entrywise without any transform.
Complex q_apply(const ComplexVector& z, const ComplexVector& v, long r, std::size_t k,
                ShiftMode mode = ShiftMode::circular);

}  // namespace ptyopt
