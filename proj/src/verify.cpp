#include "ptyopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ptyopt/shift.hpp"
#include "ptyopt/solvers.hpp"

namespace ptyopt {

namespace {

class SlackTracker {
public:
    explicit SlackTracker(double tolerance) : tolerance_(tolerance) {}

    // Records (rhs - lhs) / (1 + |rhs|).
    void inequality(double lhs, double rhs) { record((rhs - lhs) / (1.0 + std::abs(rhs)), lhs, rhs); }

    // Records an already normalized slack value.
    void record(double slack, double lhs = 0.0, double rhs = 0.0) {
        if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
        if (count_ == 0 || slack < worst_) {
            worst_ = slack;
            worst_index_ = count_;
            worst_lhs_ = lhs;
            worst_rhs_ = rhs;
        }
        ++count_;
    }

    CheckReport report(std::string name, const std::string& note = {}) const {
        CheckReport out;
        out.name = std::move(name);
        out.samples = count_;
        out.worst_slack = count_ == 0 ? 0.0 : worst_;
        out.tolerance = tolerance_;
        out.passed = out.worst_slack >= -tolerance_;
        std::ostringstream detail;
        detail.precision(6);
        detail << "tolerance " << tolerance_;
        if (count_ > 0) {
            detail << "; worst sample " << worst_index_ << " (lhs " << worst_lhs_ << ", rhs " << worst_rhs_ << ")";
        }
        if (!note.empty()) detail << "; " << note;
        out.detail = detail.str();
        return out;
    }

private:
    double tolerance_;
    std::size_t count_ = 0;
    double worst_ = 0.0;
    std::size_t worst_index_ = 0;
    double worst_lhs_ = 0.0;
    double worst_rhs_ = 0.0;
};

double objective_value(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v) {
    return loss(problem, z, v).J;
}

ComplexVector fd_block(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v, double h,
                       bool in_z) {
    const std::size_t d = z.size();
    ComplexVector out(d);
    ComplexVector zz = z, vv = v;
    ComplexVector& target = in_z ? zz : vv;
    for (std::size_t j = 0; j < d; ++j) {
        const Complex saved = target[j];
        double parts[2];
        for (int part = 0; part < 2; ++part) {
            const Complex step = part == 0 ? Complex{h, 0.0} : Complex{0.0, h};
            target[j] = saved + step;
            const double plus = objective_value(problem, zz, vv);
            target[j] = saved - step;
            const double minus = objective_value(problem, zz, vv);
            parts[part] = (plus - minus) / (2.0 * h);
        }
        target[j] = saved;
        out[j] = 0.5 * Complex{parts[0], parts[1]};
    }
    return out;
}

double stacked_distance(const GradientPair& a, const GradientPair& b) {
    return std::sqrt(norm2_squared(a.g_z - b.g_z) + norm2_squared(a.g_v - b.g_v));
}

ProblemInstance with_epsilon(ProblemInstance problem, double eps) {
    problem.epsilon = eps;
    return problem;
}

}  // namespace

nlohmann::json to_json(const CheckReport& report) {
    return {{"name", report.name},           {"samples", report.samples},
            {"worst_slack", report.worst_slack}, {"tolerance", report.tolerance},
            {"passed", report.passed},       {"detail", report.detail}};
}

nlohmann::json to_json(const std::vector<CheckReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) out.push_back(to_json(r));
    return out;
}

double default_fd_step(const ComplexVector& z, const ComplexVector& v) {
    return 1e-6 * (1.0 + std::max(norm_inf(z), norm_inf(v)));
}

GradientPair fd_wirtinger_gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                                   double h_step) {
    if (!(h_step > 0.0)) throw std::invalid_argument("fd_wirtinger_gradient: h_step must be > 0");
    return {fd_block(problem, z, v, h_step, true), fd_block(problem, z, v, h_step, false)};
}

CheckReport check_gradient_fd(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng,
                              double tolerance) {
    SlackTracker tracker(tolerance);
    const std::size_t d = problem.dimension();
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        const GradientPair analytic = gradient(problem, z, v);
        const GradientPair numeric = fd_wirtinger_gradient(problem, z, v, default_fd_step(z, v));
        const double denom = std::max(std::sqrt(analytic.norm_squared()), std::sqrt(numeric.norm_squared()));
        const double err = denom == 0.0 ? 0.0 : stacked_distance(analytic, numeric) / denom;
        tracker.record(-err, err, tolerance);
    }
    std::ostringstream note;
    note << "eps " << problem.epsilon << ", relative error of the analytic gradient";
    return tracker.report("gradient_fd", note.str());
}

double descent_lemma_rhs(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                         const ComplexVector& u, const ComplexVector& h) {
    const Evaluation e = evaluate(problem, z, v);
    const double d = static_cast<double>(problem.dimension());
    const double s = measurement_scale(problem);
    const double nz = norm2_squared(z), nv = norm2_squared(v);
    const double nu = norm2_squared(u), nh = norm2_squared(h);
    const double linear =
        2.0 * inner(u, e.gradient.g_z).real() + 2.0 * inner(h, e.gradient.g_v).real();
    const double quad_u =
        nu * (problem.alpha_T + d * (10.0 / 3.0 * nv + 1.25 * nh + 2.0 / 3.0 * nz + 0.25 * nu + s));
    const double quad_h =
        nh * (problem.beta_T + d * (10.0 / 3.0 * nz + 1.25 * nu + 2.0 / 3.0 * nv + 0.25 * nh + s));
    return e.value.J + linear + quad_u + quad_h;
}

CheckReport check_descent_lemma(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng) {
    SlackTracker tracker(1e-9);
    const std::size_t d = problem.dimension();
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        const ComplexVector u = random_complex_vector(d, rng, scale);
        const ComplexVector h = random_complex_vector(d, rng, scale);
        tracker.inequality(objective_value(problem, z + u, v + h), descent_lemma_rhs(problem, z, v, u, h));
    }
    std::ostringstream note;
    note << "scale " << scale;
    return tracker.report("descent_lemma", note.str());
}

CheckReport check_unbiasedness(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                               double tolerance) {
    const std::size_t R = problem.regions();
    const std::size_t K = problem.K;
    double tuples = 1.0;
    for (std::size_t k = 0; k < K; ++k) tuples *= static_cast<double>(R);
    if (tuples > 2e5) throw std::invalid_argument("check_unbiasedness: R^K too large to enumerate");

    const std::size_t d = problem.dimension();
    GradientPair expectation{ComplexVector(d), ComplexVector(d)};
    std::vector<std::size_t> indices(K, 0);
    for (;;) {
        double weight = 1.0;
        for (std::size_t r : indices) weight *= problem.p[r];
        const GradientPair g = stochastic_gradient(problem, z, v, indices);
        expectation.g_z.axpy(weight, g.g_z);
        expectation.g_v.axpy(weight, g.g_v);
        std::size_t pos = 0;
        while (pos < K && ++indices[pos] == R) indices[pos++] = 0;
        if (pos == K) break;
    }
    const GradientPair full = gradient(problem, z, v);
    const double err = std::max(max_abs_diff(expectation.g_z, full.g_z), max_abs_diff(expectation.g_v, full.g_v));
    const double ref = 1.0 + std::max(norm_inf(full.g_z), norm_inf(full.g_v));
    SlackTracker tracker(tolerance);
    tracker.record(-err / ref, err, ref);
    std::ostringstream note;
    note << "K " << K << ", " << static_cast<std::size_t>(tuples) << " index tuples";
    return tracker.report("unbiasedness", note.str());
}

CheckReport check_gradient_bounds(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng) {
    SlackTracker tracker(1e-9);
    const std::size_t d = problem.dimension();
    const double c = 15.0 * static_cast<double>(d) / 4.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        const auto indices = sample_indices(problem.p, problem.K, rng);
        const GradientPair g = stochastic_gradient(problem, z, v, indices);
        const double Bz = bound_Bz(problem, z, v), Bv = bound_Bv(problem, z, v);
        tracker.inequality(c * norm2_squared(g.g_z), Bz * Bz);
        tracker.inequality(c * norm2_squared(g.g_v), Bv * Bv);
    }
    std::ostringstream note;
    note << "K " << problem.K << ", p_min " << problem.p_min() << ", scale " << scale;
    return tracker.report("gradient_bounds", note.str());
}

CheckReport check_bilinear_bound(std::size_t d, const ShiftSet& shifts, std::size_t n_samples, double scale,
                                 Rng& rng) {
    if (shifts.dimension() != d) throw std::invalid_argument("check_bilinear_bound: shift set dimension differs");
    SlackTracker tracker(1e-9);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        double lhs = 0.0;
        for (long r : shifts.offsets()) {
            for (std::size_t k = 0; k < d; ++k) lhs += std::norm(q_apply(z, v, r, k, shifts.mode()));
        }
        tracker.inequality(lhs, static_cast<double>(d) * norm2_squared(z) * norm2_squared(v));
    }
    return tracker.report("bilinear_bound", to_string(shifts.mode()) + " shifts, R " +
                                                std::to_string(shifts.count()));
}

CheckReport check_loss_upper_bound(const ProblemInstance& problem, std::size_t n_samples, double scale, Rng& rng) {
    SlackTracker tracker(1e-9);
    const std::size_t d = problem.dimension();
    const double y1 = problem.measurements.l1_norm();
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        tracker.inequality(loss(problem, z, v).L_eps,
                           static_cast<double>(d) * norm2_squared(z) * norm2_squared(v) + y1);
    }
    return tracker.report("loss_upper_bound");
}

CheckReport check_lipschitz_constant_bound(const ProblemInstance& problem, std::size_t n_samples, double scale,
                                           Rng& rng) {
    SlackTracker tracker(1e-9);
    const std::size_t d = problem.dimension();
    const double dd = static_cast<double>(d);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const ComplexVector z = random_complex_vector(d, rng, scale);
        const ComplexVector v = random_complex_vector(d, rng, scale);
        const LipschitzConstants L = lipschitz_constants(problem, z, v);
        tracker.inequality(L.L_v, dd * norm2_squared(v) + problem.alpha_T);
        tracker.inequality(L.L_z, dd * norm2_squared(z) + problem.beta_T);
    }
    return tracker.report("lipschitz_constant_bound");
}

double lipschitz_bound_rhs(const ProblemInstance& problem, const ComplexVector& z1, const ComplexVector& v1,
                           const ComplexVector& z2, const ComplexVector& v2) {
    const double eps = problem.epsilon;
    if (!(eps > 0.0)) throw std::invalid_argument("lipschitz_bound_rhs: requires eps > 0");
    const double d = static_cast<double>(problem.dimension());
    const double curvature = std::max(1.25, std::sqrt(problem.measurements.max_value() + eps) / std::sqrt(eps) - 0.75);
    const double L = d * (measurement_scale(problem) +
                          curvature * (norm2_squared(z1) + norm2_squared(z2) + norm2_squared(v1) + norm2_squared(v2)));
    const double reg = std::max(problem.alpha_T * problem.alpha_T, problem.beta_T * problem.beta_T);
    return std::sqrt(2.0 * L * L + 2.0 * reg) * std::sqrt(norm2_squared(z1 - z2) + norm2_squared(v1 - v2));
}

CheckReport check_lipschitz(const ProblemInstance& problem, std::size_t n_samples, Rng& rng) {
    if (!(problem.epsilon > 0.0)) throw std::invalid_argument("check_lipschitz: requires eps > 0");
    SlackTracker tracker(1e-9);
    const std::size_t d = problem.dimension();
    constexpr double separations[] = {1e-3, 1e-2, 1e-1, 1.0};
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double delta = separations[i % std::size(separations)];
        const ComplexVector z1 = random_complex_vector(d, rng);
        const ComplexVector v1 = random_complex_vector(d, rng);
        const ComplexVector z2 = z1 + random_complex_vector(d, rng, delta);
        const ComplexVector v2 = v1 + random_complex_vector(d, rng, delta);
        const double lhs = stacked_distance(gradient(problem, z1, v1), gradient(problem, z2, v2));
        tracker.inequality(lhs, lipschitz_bound_rhs(problem, z1, v1, z2, v2));
    }
    std::ostringstream note;
    note << "eps " << problem.epsilon;
    return tracker.report("local_lipschitz", note.str());
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"gradient", "descent", "unbiased", "bounds", "lipschitz", "all"};
    return names;
}

std::vector<CheckReport> run_suite(const std::string& suite, const ProblemInstance& problem, std::uint64_t seed) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }
    const bool all = suite == "all";
    std::vector<CheckReport> out;
    std::uint64_t stream = 0;
    auto next_rng = [&] { return Rng(derive_seed(seed, ++stream)); };
    const std::size_t d = problem.dimension();

    if (all || suite == "gradient") {
        for (double eps : {1e-3, 1.0}) {
            Rng rng = next_rng();
            out.push_back(check_gradient_fd(with_epsilon(problem, eps), 20, 1.0, rng));
        }
    }
    if (all || suite == "descent") {
        for (double scale : {0.1, 1.0, 10.0}) {
            Rng rng = next_rng();
            out.push_back(check_descent_lemma(problem, 200, scale, rng));
        }
    }
    if (all || suite == "unbiased") {
        Rng rng = next_rng();
        for (int i = 0; i < 10; ++i) {
            const ComplexVector z = random_complex_vector(d, rng);
            const ComplexVector v = random_complex_vector(d, rng);
            out.push_back(check_unbiasedness(problem, z, v));
        }
    }
    if (all || suite == "bounds") {
        Rng rng = next_rng();
        out.push_back(check_gradient_bounds(problem, 100, 1.0, rng));
        out.push_back(check_bilinear_bound(d, problem.shifts(), 100, 1.0, rng));
        std::vector<long> offsets;
        for (long r : problem.shifts().offsets()) offsets.push_back(r);
        const ShiftSet padded(offsets, ShiftMode::zero_padded, d);
        out.push_back(check_bilinear_bound(d, padded, 100, 1.0, rng));
        out.push_back(check_loss_upper_bound(problem, 100, 1.0, rng));
        out.push_back(check_lipschitz_constant_bound(problem, 100, 1.0, rng));
    }
    if (all || suite == "lipschitz") {
        for (double eps : {1e-2, 1e-6}) {
            Rng rng = next_rng();
            out.push_back(check_lipschitz(with_epsilon(problem, eps), 100, rng));
        }
    }
    return out;
}

}  // namespace ptyopt
