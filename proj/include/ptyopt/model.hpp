#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptyopt/complex_vector.hpp"
#include "ptyopt/rng.hpp"
#include "ptyopt/shift.hpp"

namespace ptyopt {

/// Diffraction intensities y_{r,k}, one row per region, stored row-major.
class MeasurementSet {
public:
    MeasurementSet(ShiftSet shifts, std::vector<double> values);

    const ShiftSet& shifts() const noexcept { return shifts_; }
    std::size_t dimension() const noexcept { return shifts_.dimension(); }
    std::size_t regions() const noexcept { return shifts_.count(); }

    std::span<const double> row(std::size_t region) const;
    const std::vector<double>& values() const noexcept { return values_; }

    double l1_norm() const noexcept;
    double max_value() const noexcept;

    friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;

private:
    ShiftSet shifts_;
    std::vector<double> values_;
};

struct NoiseModel {
    enum class Kind { none, poisson, gaussian };
    Kind kind = Kind::none;
    double sigma = 0.0;  // gaussian only

    static NoiseModel none() { return {}; }
    static NoiseModel poisson() { return {Kind::poisson, 0.0}; }
    static NoiseModel gaussian(double sigma) { return {Kind::gaussian, sigma}; }
};

std::string to_string(const NoiseModel& noise);

struct GroundTruth {
    ComplexVector object;
    ComplexVector window;
};

/// Everything the objective needs: measurements, smoothing, Tikhonov
/// weights, and the region sampling law (p, K) for stochastic solvers.
struct ProblemInstance {
    MeasurementSet measurements;
    double epsilon = 1e-8;
    double alpha_T = 1e-3;
    double beta_T = 1e-3;
    std::vector<double> p;
    std::size_t K = 1;
    std::optional<GroundTruth> ground_truth;

    std::size_t dimension() const noexcept { return measurements.dimension(); }
    std::size_t regions() const noexcept { return measurements.regions(); }
    const ShiftSet& shifts() const noexcept { return measurements.shifts(); }
    double p_min() const noexcept;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Uniform distribution over R regions.
std::vector<double> uniform_distribution(std::size_t regions);

/// Noiseless intensities |[F(x o S_r w)]_k|^2.
MeasurementSet forward_intensities(const ComplexVector& x, const ComplexVector& w, const ShiftSet& shifts);

MeasurementSet add_noise(const MeasurementSet& y, const NoiseModel& model, Rng& rng);

struct ProblemParams {
    std::size_t d = 16;
    std::optional<ShiftSet> shifts;  // defaults to all d circular shifts
    std::uint64_t seed = 0;
    NoiseModel noise;
    double epsilon = 1e-8;
    double alpha_T = 1e-3;
    double beta_T = 1e-3;
    std::vector<double> p;  // empty means uniform
    std::size_t K = 1;
};

/// Draws x then w (i.i.d. standard complex Gaussian) from Rng(seed), then the
/// noise from the same stream. Deterministic in the parameters.
ProblemInstance synthesize_problem(const ProblemParams& params);

}  // namespace ptyopt
