#include "ptyopt/fourier.hpp"

#include <numbers>
#include <unordered_map>
#include <vector>

namespace ptyopt {

namespace {

// Twiddle table exp(-2 pi i m / d), m = 0..d-1, plus the bit-reversal
// permutation when d is a power of two.
struct FourierPlan {
    explicit FourierPlan(std::size_t d) : twiddle(d) {
        for (std::size_t m = 0; m < d; ++m) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(d);
            twiddle[m] = std::polar(1.0, angle);
        }
        if (is_power_of_two(d)) {
            bit_reverse.resize(d);
            std::size_t bits = 0;
            while ((std::size_t{1} << bits) < d) ++bits;
            for (std::size_t i = 0; i < d; ++i) {
                std::size_t r = 0;
                for (std::size_t b = 0; b < bits; ++b) {
                    if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
                }
                bit_reverse[i] = r;
            }
        }
    }

    std::vector<Complex> twiddle;
    std::vector<std::size_t> bit_reverse;
};

const FourierPlan& plan_for(std::size_t d) {
    thread_local std::unordered_map<std::size_t, FourierPlan> cache;
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, FourierPlan(d)).first;
    return it->second;
}

Complex twiddle_at(const FourierPlan& plan, std::size_t m, bool adjoint) {
    const Complex w = plan.twiddle[m];
    return adjoint ? std::conj(w) : w;
}

ComplexVector direct(const ComplexVector& x, bool adjoint) {
    const std::size_t d = x.size();
    const auto& plan = plan_for(d);
    ComplexVector out(d);
    for (std::size_t j = 0; j < d; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < d; ++k) acc += twiddle_at(plan, (j * k) % d, adjoint) * x[k];
        out[j] = acc;
    }
    return out;
}

ComplexVector radix2(const ComplexVector& x, bool adjoint) {
    const std::size_t d = x.size();
    const auto& plan = plan_for(d);
    ComplexVector a(d);
    for (std::size_t i = 0; i < d; ++i) a[plan.bit_reverse[i]] = x[i];
    for (std::size_t len = 2; len <= d; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = d / len;
        for (std::size_t start = 0; start < d; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex w = twiddle_at(plan, k * stride, adjoint);
                const Complex u = a[start + k];
                const Complex t = w * a[start + k + half];
                a[start + k] = u + t;
                a[start + k + half] = u - t;
            }
        }
    }
    return a;
}

ComplexVector transform(const ComplexVector& x, bool adjoint) {
    return is_power_of_two(x.size()) ? radix2(x, adjoint) : direct(x, adjoint);
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

ComplexVector dft(const ComplexVector& x) { return transform(x, false); }

ComplexVector dft_adjoint(const ComplexVector& X) { return transform(X, true); }

ComplexVector idft(const ComplexVector& X) {
    ComplexVector out = transform(X, true);
    out *= 1.0 / static_cast<double>(X.size());
    return out;
}

ComplexVector dft_direct(const ComplexVector& x) { return direct(x, false); }

}  // namespace ptyopt
