#include "ptyopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ptyopt/fourier.hpp"

namespace ptyopt {

MeasurementSet::MeasurementSet(ShiftSet shifts, std::vector<double> values)
    : shifts_(std::move(shifts)), values_(std::move(values)) {
    if (values_.size() != shifts_.count() * shifts_.dimension()) {
        throw std::invalid_argument("measurements: expected " + std::to_string(shifts_.count()) + " rows of " +
                                    std::to_string(shifts_.dimension()) + " values");
    }
    for (double y : values_) {
        if (!std::isfinite(y) || y < 0.0) {
            throw std::invalid_argument("measurements: entries must be finite and nonnegative");
        }
    }
}

std::span<const double> MeasurementSet::row(std::size_t region) const {
    if (region >= regions()) throw std::out_of_range("MeasurementSet::row");
    return std::span<const double>(values_).subspan(region * dimension(), dimension());
}

double MeasurementSet::l1_norm() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double MeasurementSet::max_value() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::string to_string(const NoiseModel& noise) {
    switch (noise.kind) {
        case NoiseModel::Kind::none: return "none";
        case NoiseModel::Kind::poisson: return "poisson";
        case NoiseModel::Kind::gaussian: return "gaussian";
    }
    return "none";
}

double ProblemInstance::p_min() const noexcept {
    return p.empty() ? 0.0 : *std::min_element(p.begin(), p.end());
}

void ProblemInstance::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon: must be >= 0");
    if (!(alpha_T >= 0.0) || !std::isfinite(alpha_T)) throw std::invalid_argument("alpha_T: must be >= 0");
    if (!(beta_T >= 0.0) || !std::isfinite(beta_T)) throw std::invalid_argument("beta_T: must be >= 0");
    if (K < 1) throw std::invalid_argument("K: must be >= 1");
    if (p.size() != regions()) {
        throw std::invalid_argument("p: expected " + std::to_string(regions()) + " entries, got " +
                                    std::to_string(p.size()));
    }
    double total = 0.0;
    for (double pr : p) {
        if (!(pr > 0.0) || !std::isfinite(pr)) throw std::invalid_argument("p: entries must be strictly positive");
        total += pr;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("p: entries must sum to 1");
    if (ground_truth) {
        if (ground_truth->object.size() != dimension() || ground_truth->window.size() != dimension()) {
            throw std::invalid_argument("x/w: ground truth length must equal d");
        }
    }
}

std::vector<double> uniform_distribution(std::size_t regions) {
    return std::vector<double>(regions, 1.0 / static_cast<double>(regions));
}

MeasurementSet forward_intensities(const ComplexVector& x, const ComplexVector& w, const ShiftSet& shifts) {
    const std::size_t d = shifts.dimension();
    if (x.size() != d || w.size() != d) throw std::invalid_argument("forward_intensities: length mismatch");
    std::vector<double> values;
    values.reserve(shifts.count() * d);
    for (long r : shifts.offsets()) {
        const ComplexVector spectrum = dft(hadamard(x, shift(w, r, shifts.mode())));
        for (const auto& c : spectrum) values.push_back(std::norm(c));
    }
    return MeasurementSet(shifts, std::move(values));
}

MeasurementSet add_noise(const MeasurementSet& y, const NoiseModel& model, Rng& rng) {
    if (model.kind == NoiseModel::Kind::none) return y;
    std::vector<double> noisy = y.values();
    if (model.kind == NoiseModel::Kind::poisson) {
        for (double& v : noisy) v = static_cast<double>(rng.poisson(v));
    } else {
        if (!(model.sigma >= 0.0)) throw std::invalid_argument("noise: sigma must be >= 0");
        if (model.sigma == 0.0) return y;
        for (double& v : noisy) v = std::max(0.0, v + model.sigma * rng.normal());
    }
    return MeasurementSet(y.shifts(), std::move(noisy));
}

ProblemInstance synthesize_problem(const ProblemParams& params) {
    const std::size_t d = params.d;
    if (d == 0) throw std::invalid_argument("d: must be >= 1");
    ShiftSet shifts = params.shifts ? *params.shifts : ShiftSet::all_circular(d);
    if (shifts.dimension() != d) throw std::invalid_argument("offsets: shift set dimension differs from d");

    Rng rng(params.seed);
    ComplexVector x = random_complex_vector(d, rng);
    ComplexVector w = random_complex_vector(d, rng);
    MeasurementSet clean = forward_intensities(x, w, shifts);
    MeasurementSet measured = add_noise(clean, params.noise, rng);

    ProblemInstance problem{std::move(measured),
                            params.epsilon,
                            params.alpha_T,
                            params.beta_T,
                            params.p.empty() ? uniform_distribution(shifts.count()) : params.p,
                            params.K,
                            GroundTruth{std::move(x), std::move(w)}};
    problem.validate();
    return problem;
}

}  // namespace ptyopt
