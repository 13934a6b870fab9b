#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptyopt/fourier.hpp"
#include "ptyopt/rng.hpp"
#include "ptyopt/shift.hpp"

using namespace ptyopt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

void require_close(const ComplexVector& a, const ComplexVector& b, double tol) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        INFO("index " << i << ": " << a[i] << " vs " << b[i]);
        REQUIRE(std::abs(a[i] - b[i]) <= tol);
    }
}

}  // namespace

TEST_CASE("complex vector basics", "[core-math]") {
    REQUIRE_THROWS_AS(ComplexVector(0), std::invalid_argument);
    REQUIRE_THROWS_AS(ComplexVector(std::vector<Complex>{}), std::invalid_argument);

    const ComplexVector a{{1, 2}, {3, -1}};
    const ComplexVector b{{0, 1}, {2, 2}};
    // conj(a) . b
    const Complex expected = std::conj(Complex(1, 2)) * Complex(0, 1) + std::conj(Complex(3, -1)) * Complex(2, 2);
    REQUIRE(inner(a, b) == expected);
    REQUIRE(norm2_squared(a) == 15.0);
    REQUIRE(norm_inf(a) == std::sqrt(10.0));
    REQUIRE((a + b)[1] == Complex(5, 1));
    REQUIRE(hadamard(a, b)[0] == Complex(1, 2) * Complex(0, 1));
    REQUIRE_THROWS_AS(a + ComplexVector(3), std::invalid_argument);

    ComplexVector c = a;
    c[0] = {std::nan(""), 0.0};
    REQUIRE_FALSE(c.is_finite());
}

TEST_CASE("dft of delta and constant", "[core-math]") {
    require_close(dft(ComplexVector{1, 0, 0, 0}), ComplexVector{1, 1, 1, 1}, 1e-15);
    require_close(dft(ComplexVector{1, 1, 1, 1}), ComplexVector{4, 0, 0, 0}, 1e-15);
    // length not a power of two goes through the direct sum
    require_close(dft(ComplexVector{1, 1, 1}), ComplexVector{3, 0, 0}, 1e-14);
}

TEST_CASE("dft matches direct summation and Parseval", "[core-math]") {
    std::mt19937_64 gen(11);
    for (std::size_t d : {2u, 3u, 5u, 8u, 12u, 16u, 31u, 32u, 64u}) {
        const ComplexVector x = oracle::random_vector(d, gen);
        const ComplexVector X = dft(x);
        INFO("d = " << d);
        REQUIRE(oracle::rel_diff(X, oracle::dft(x)) < 1e-12);
        REQUIRE(oracle::rel_diff(X, dft_direct(x)) < 1e-12);
        REQUIRE_THAT(norm2_squared(X), WithinRel(double(d) * norm2_squared(x), 1e-12));
    }
}

TEST_CASE("idft inverts dft", "[core-math]") {
    std::mt19937_64 gen(12);
    for (std::size_t d : {2u, 6u, 8u, 64u}) {
        const ComplexVector x = oracle::random_vector(d, gen);
        REQUIRE(oracle::rel_diff(idft(dft(x)), x) < 1e-12);
    }
    require_close(idft(ComplexVector{4, 0, 0, 0}), ComplexVector{1, 1, 1, 1}, 1e-15);
    require_close(idft(ComplexVector{2, 0}), ComplexVector{1, 1}, 1e-15);

    const ComplexVector X = oracle::random_vector(8, gen);
    require_close(dft_adjoint(X), 8.0 * idft(X), 1e-13);
}

TEST_CASE("circular and zero-padded shifts", "[core-math]") {
    const ComplexVector v{1, 2, 3, 4};
    REQUIRE(shift(v, 1) == ComplexVector{4, 1, 2, 3});
    REQUIRE(shift(v, 0) == v);
    REQUIRE(shift(v, 4) == v);
    REQUIRE(shift(v, -1) == ComplexVector{2, 3, 4, 1});
    REQUIRE(shift(v, 1, ShiftMode::zero_padded) == ComplexVector{0, 1, 2, 3});
    REQUIRE(shift(v, -2, ShiftMode::zero_padded) == ComplexVector{3, 4, 0, 0});
    REQUIRE(shift(v, 5, ShiftMode::zero_padded) == ComplexVector{0, 0, 0, 0});

    std::mt19937_64 gen(13);
    const ComplexVector w = oracle::random_vector(7, gen);
    for (long a = -9; a <= 9; a += 3) {
        for (long b = -4; b <= 11; b += 5) {
            REQUIRE(shift(shift(w, a), b) == shift(w, a + b));
            REQUIRE(shift(w, a) == oracle::shift(w, a, true));
            REQUIRE(shift(w, a, ShiftMode::zero_padded) == oracle::shift(w, a, false));
        }
    }
}

TEST_CASE("zero-padded shift adjoint is the opposite shift", "[core-math]") {
    std::mt19937_64 gen(14);
    const ComplexVector a = oracle::random_vector(9, gen);
    const ComplexVector b = oracle::random_vector(9, gen);
    for (long r : {-3L, 0L, 2L, 8L}) {
        const Complex lhs = inner(a, shift(b, r, ShiftMode::zero_padded));
        const Complex rhs = inner(shift(a, -r, ShiftMode::zero_padded), b);
        REQUIRE(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("shift set invariants", "[core-math]") {
    REQUIRE_THROWS_AS(ShiftSet({}, ShiftMode::circular, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(ShiftSet({1, 1}, ShiftMode::circular, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(ShiftSet({2, 1}, ShiftMode::circular, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(ShiftSet({0, 4}, ShiftMode::circular, 4), std::invalid_argument);
    REQUIRE_NOTHROW(ShiftSet({0, 4}, ShiftMode::zero_padded, 4));
    const ShiftSet all = ShiftSet::all_circular(5);
    REQUIRE(all.count() == 5);
    REQUIRE(all.offset(4) == 4);
    REQUIRE(shift_mode_from_string("zero-padded") == ShiftMode::zero_padded);
    REQUIRE_THROWS_AS(shift_mode_from_string("mirror"), std::invalid_argument);
}

TEST_CASE("q_apply agrees with the transform path", "[core-math]") {
    REQUIRE_THAT(std::abs(q_apply(ComplexVector{1, 1}, ComplexVector{1, 1}, 0, 0) - Complex(2, 0)), WithinAbs(0, 1e-15));

    std::mt19937_64 gen(15);
    const std::size_t d = 8;
    const ComplexVector v = oracle::random_vector(d, gen);
    REQUIRE(q_apply(ComplexVector(d), v, 3, 5) == Complex{});

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexVector z = oracle::random_vector(d, gen);
        const ComplexVector w = oracle::random_vector(d, gen);
        const long r = static_cast<long>(gen() % 11) - 3;
        const std::size_t k = gen() % d;
        for (ShiftMode mode : {ShiftMode::circular, ShiftMode::zero_padded}) {
            const Complex via_dft = dft(hadamard(z, shift(w, r, mode)))[k];
            REQUIRE(std::abs(q_apply(z, w, r, k, mode) - via_dft) < 1e-12 * (1.0 + std::abs(via_dft)));
        }
    }
    REQUIRE_THROWS_AS(q_apply(v, v, 0, d), std::invalid_argument);
}

TEST_CASE("rng reproduces the reference SplitMix64 stream", "[core-math]") {
    // Published SplitMix64 outputs for state 0.
    Rng rng(0);
    REQUIRE(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    REQUIRE(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    REQUIRE(rng.next_u64() == 0x06C45D188009454FULL);
    REQUIRE(rng.draws() == 3);
}

TEST_CASE("rng determinism and ranges", "[core-math]") {
    Rng a(2024), b(2024), c(2025);
    bool differs = false;
    for (int i = 0; i < 10000; ++i) {
        const auto x = a.next_u64();
        REQUIRE(x == b.next_u64());
        differs = differs || x != c.next_u64();
    }
    REQUIRE(differs);

    Rng r(7);
    double mean = 0.0, sq = 0.0, cabs = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double g = r.normal();
        mean += g;
        sq += g * g;
        cabs += std::norm(r.complex_normal());
        REQUIRE(r.below(7) < 7);
    }
    REQUIRE_THAT(mean / n, WithinAbs(0.0, 0.01));
    REQUIRE_THAT(sq / n, WithinAbs(1.0, 0.02));
    REQUIRE_THAT(cabs / n, WithinAbs(1.0, 0.02));

    REQUIRE(derive_seed(5, 1) != derive_seed(5, 2));
    REQUIRE(derive_seed(5, 1) == derive_seed(5, 1));
}

TEST_CASE("poisson sampler mean", "[core-math]") {
    Rng rng(99);
    for (double mean : {0.5, 4.0, 30.0, 1e6}) {
        double total = 0.0;
        const int n = 2000;
        for (int i = 0; i < n; ++i) total += static_cast<double>(rng.poisson(mean));
        const double sd_of_mean = std::sqrt(mean / n);
        INFO("mean " << mean);
        REQUIRE(std::abs(total / n - mean) < 5.0 * sd_of_mean);
    }
    REQUIRE(rng.poisson(0.0) == 0);
    REQUIRE_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}
