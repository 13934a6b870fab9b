#pragma once

#include <cstdint>

#include "ptyopt/complex_vector.hpp"

namespace ptyopt {

/// Counter-based SplitMix64 generator.
///
/// State is a single 64-bit counter advanced by the golden-ratio increment
/// 0x9E3779B97F4A7C15; each output is the counter passed through the
/// SplitMix64 finalizer (xor-shift 30, multiply 0xBF58476D1CE4E5B9,
/// xor-shift 27, multiply 0x94D049BB133111EB, xor-shift 31). Derived
/// variates only use the transforms documented below, so a seed reproduces
/// the same stream on any platform or language that follows them.
///
/// Not thread-safe; every solver and checker owns its instance.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed), counter_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return draws_; }

    std::uint64_t next_u64() noexcept;

    /// (next_u64() >> 11) * 2^-53, in [0, 1).
    double uniform() noexcept;

    /// Box-Muller cosine branch from two uniforms: sqrt(-2 ln(1-u1)) cos(2 pi u2).
    double normal() noexcept;

    /// sqrt(-ln(1-u1)) exp(2 pi i u2), so E|c|^2 = 1.
    Complex complex_normal() noexcept;

    /// Knuth's multiplication method below mean 10, Hormann's PTRS
    /// transformed rejection above.
    std::uint64_t poisson(double mean);

    /// Uniform integer in [0, n) by 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t n) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    std::uint64_t draws_ = 0;
};

/// d i.i.d. standard complex Gaussian entries.
ComplexVector random_complex_vector(std::size_t d, Rng& rng, double scale = 1.0);

/// Independent stream seed for a labelled sub-purpose of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace ptyopt
