#include "ptyopt/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ptyopt/errors.hpp"
#include "ptyopt/fourier.hpp"
#include "ptyopt/shift.hpp"

namespace ptyopt {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N], const char* field) {
    for (const auto& [label, value] : table) {
        if (label == name) return value;
    }
    throw ConfigError(field, "unknown value '" + std::string(name) + "'");
}

constexpr std::pair<std::string_view, Algorithm> algorithm_names[] = {
    {"gd", Algorithm::gd}, {"sgd", Algorithm::sgd}, {"epie", Algorithm::epie}, {"interval", Algorithm::interval}};
constexpr std::pair<std::string_view, StepMode> step_mode_names[] = {{"rate", StepMode::rate},
                                                                     {"cap", StepMode::cap}};
constexpr std::pair<std::string_view, SgdStepPolicy> sgd_step_names[] = {
    {"theory", SgdStepPolicy::theory}, {"epie-mapped", SgdStepPolicy::epie_mapped}};
constexpr std::pair<std::string_view, IndexSchedule> schedule_names[] = {{"iid", IndexSchedule::iid},
                                                                         {"shuffled", IndexSchedule::shuffled}};

template <class Enum, std::size_t N>
std::string enum_name(Enum value, const std::pair<std::string_view, Enum> (&table)[N]) {
    for (const auto& [label, v] : table) {
        if (v == value) return std::string(label);
    }
    return "?";
}

class TraceRecorder {
public:
    explicit TraceRecorder(std::vector<TraceRecord>& trace)
        : trace_(trace), start_(std::chrono::steady_clock::now()) {}

    void add(std::size_t t, const Evaluation& e, double mu, double nu) {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        trace_.push_back({t, e.value.J, e.value.L_eps, norm2(e.gradient.g_z), norm2(e.gradient.g_v), mu, nu,
                          std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()});
    }

private:
    std::vector<TraceRecord>& trace_;
    std::chrono::steady_clock::time_point start_;
};

void require_finite(const Evaluation& e, std::size_t t, const char* solver) {
    if (!std::isfinite(e.value.J) || !e.gradient.g_z.is_finite() || !e.gradient.g_v.is_finite()) {
        throw std::runtime_error(std::string(solver) + ": non-finite loss or gradient at iteration " +
                                 std::to_string(t));
    }
}

void require_start(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                   const SolverConfig& config) {
    config.validate();
    if (z0.size() != problem.dimension() || v0.size() != problem.dimension()) {
        throw std::invalid_argument("solver: starting point length differs from d");
    }
    if (!z0.is_finite() || !v0.is_finite()) throw std::invalid_argument("solver: starting point is not finite");
}

// True when the run ends at this row.
bool should_stop(std::size_t t, const Evaluation& e, const SolverConfig& config, SolverResult& result) {
    const bool small = config.grad_tol > 0.0 && std::sqrt(e.gradient.norm_squared()) <= config.grad_tol;
    if (t < config.max_iters && !small) return false;
    result.iterations = t;
    result.converged = small;
    return true;
}

double region_probability(const ProblemInstance& problem, std::size_t region) { return problem.p[region]; }

}  // namespace

std::string to_string(Algorithm a) { return enum_name(a, algorithm_names); }
std::string to_string(StepMode m) { return enum_name(m, step_mode_names); }
std::string to_string(SgdStepPolicy p) { return enum_name(p, sgd_step_names); }
std::string to_string(IndexSchedule s) { return enum_name(s, schedule_names); }
Algorithm algorithm_from_string(std::string_view name) { return parse_enum(name, algorithm_names, "algo"); }
StepMode step_mode_from_string(std::string_view name) { return parse_enum(name, step_mode_names, "step_mode"); }
SgdStepPolicy sgd_step_policy_from_string(std::string_view name) {
    if (name == "epie_mapped") return SgdStepPolicy::epie_mapped;
    return parse_enum(name, sgd_step_names, "sgd_steps");
}
IndexSchedule index_schedule_from_string(std::string_view name) {
    return parse_enum(name, schedule_names, "schedule");
}

void SolverConfig::validate() const {
    if (!(theta >= 0.0 && theta < 1.0)) throw ConfigError("theta", "must lie in [0, 1)");
    if (!std::isfinite(kappa)) throw ConfigError("kappa", "must be finite");
    if (algorithm == Algorithm::sgd && sgd_steps == SgdStepPolicy::theory) {
        if (!(theta > 0.0)) throw ConfigError("theta", "must be > 0 for sgd with theory steps");
        if (!(kappa >= 0.0 && kappa < theta / (1.0 + theta))) {
            throw ConfigError("kappa", "must satisfy 0 <= kappa < theta/(1+theta)");
        }
    }
    if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("mu", "must lie in (0, 1]");
    if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("nu", "must lie in (0, 1]");
    if (!(epie_alpha >= 0.0) || !std::isfinite(epie_alpha)) throw ConfigError("epie_alpha", "must be >= 0");
    if (!(epie_beta >= 0.0) || !std::isfinite(epie_beta)) throw ConfigError("epie_beta", "must be >= 0");
    if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol", "must be >= 0");
    if (gamma_grid < 2) throw ConfigError("gamma_grid", "must be >= 2");
    if (!(cap_factor > 0.0 && cap_factor <= 1.0)) throw ConfigError("cap_factor", "must lie in (0, 1]");
}

StepSizes gd_step_sizes(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                        const GradientPair& grad) {
    const double c = std::cbrt(4.0 / (15.0 * static_cast<double>(problem.dimension())));
    double step = 1.0 / bound_B(problem, z, v);
    const double gz = norm2(grad.g_z);
    const double gv = norm2(grad.g_v);
    if (gz > 0.0) step = std::min(step, c * std::pow(gz, -2.0 / 3.0));
    if (gv > 0.0) step = std::min(step, c * std::pow(gv, -2.0 / 3.0));
    return {step, step};
}

double gd_rate_constant(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0) {
    if (!(problem.alpha_T > 0.0 && problem.beta_T > 0.0)) return inf;
    const double d = static_cast<double>(problem.dimension());
    const double J0 = loss(problem, z0, v0).J;
    const double a = d * (20.0 * (1.0 / problem.alpha_T + 1.0 / problem.beta_T) * J0 +
                          6.0 * measurement_scale(problem)) +
                     2.0 * std::max(problem.alpha_T, problem.beta_T);
    return std::max(a, std::cbrt(15.0 * d));
}

std::vector<std::size_t> sample_indices(const std::vector<double>& p, std::size_t K, Rng& rng) {
    if (p.empty()) throw std::invalid_argument("sample_indices: empty distribution");
    std::vector<std::size_t> out;
    out.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::size_t pick = p.size() - 1;
        for (std::size_t i = 0; i < p.size(); ++i) {
            cumulative += p[i];
            if (u < cumulative) {
                pick = i;
                break;
            }
        }
        out.push_back(pick);
    }
    return out;
}

GradientPair stochastic_gradient(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v,
                                 const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("stochastic_gradient: no indices");
    const std::size_t d = problem.dimension();
    GradientPair g{ComplexVector(d), ComplexVector(d)};
    for (std::size_t r : indices) {
        const GradientPair gr = gradient_region(problem, z, v, r);
        const double weight = 1.0 / region_probability(problem, r);
        g.g_z.axpy(weight, gr.g_z);
        g.g_v.axpy(weight, gr.g_v);
    }
    const double scale = 1.0 / static_cast<double>(indices.size());
    g.g_z *= scale;
    g.g_v *= scale;
    return g;
}

double sgd_mu_max(const ProblemInstance& problem, const ComplexVector& z, const ComplexVector& v, std::size_t t,
                  double theta, double kappa) {
    if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("sgd_mu_max: theta must lie in [0, 1)");
    const double B = bound_B(problem, z, v);
    double m = std::pow(1.0 + static_cast<double>(t), -1.0 + kappa) * std::pow(B, -1.0 / (1.0 - theta));
    const double power = -2.0 / (3.0 - theta);
    const double Bz = bound_Bz(problem, z, v);
    const double Bv = bound_Bv(problem, z, v);
    if (Bz > 0.0) m = std::min(m, std::pow(Bz, power));
    if (Bv > 0.0) m = std::min(m, std::pow(Bv, power));
    if (problem.K > 1 && theta > 0.0) {
        m = std::min(m, std::pow(1.0 - 1.0 / static_cast<double>(problem.K), -1.0 / theta));
    }
    return m;
}

SolverResult run_gd(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                    const SolverConfig& config) {
    require_start(problem, z0, v0, config);
    SolverResult result{{z0, v0}, {}, 0, false, {}, {}};
    auto& [z, v] = result.final;
    TraceRecorder recorder(result.trace);
    for (std::size_t t = 0;; ++t) {
        const Evaluation e = evaluate(problem, z, v);
        require_finite(e, t, "gd");
        if (should_stop(t, e, config, result)) {
            recorder.add(t, e, 0.0, 0.0);
            break;
        }
        StepSizes steps = gd_step_sizes(problem, z, v, e.gradient);
        if (config.step_mode == StepMode::cap) {
            steps.mu *= config.cap_factor;
            steps.nu *= config.cap_factor;
        }
        recorder.add(t, e, steps.mu, steps.nu);
        z.axpy(-steps.mu, e.gradient.g_z);
        v.axpy(-steps.nu, e.gradient.g_v);
    }
    return result;
}

SolverResult run_sgd(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                     const SolverConfig& config) {
    require_start(problem, z0, v0, config);
    if (config.sgd_steps == SgdStepPolicy::epie_mapped && problem.K != 1) {
        throw ConfigError("K", "epie-mapped steps require K = 1");
    }
    const double d = static_cast<double>(problem.dimension());
    Rng rng(config.seed);
    SolverResult result{{z0, v0}, {}, 0, false, {}, {}};
    auto& [z, v] = result.final;
    TraceRecorder recorder(result.trace);
    for (std::size_t t = 0;; ++t) {
        const Evaluation e = evaluate(problem, z, v);
        require_finite(e, t, "sgd");
        if (should_stop(t, e, config, result)) {
            recorder.add(t, e, 0.0, 0.0);
            break;
        }
        const std::vector<std::size_t> indices = sample_indices(problem.p, problem.K, rng);
        result.regions.insert(result.regions.end(), indices.begin(), indices.end());
        const GradientPair g = stochastic_gradient(problem, z, v, indices);
        if (!g.g_z.is_finite() || !g.g_v.is_finite()) {
            throw std::runtime_error("sgd: non-finite stochastic gradient at iteration " + std::to_string(t));
        }
        double mu = 0.0, nu = 0.0;
        if (config.sgd_steps == SgdStepPolicy::theory) {
            const double m = sgd_mu_max(problem, z, v, t, config.theta, config.kappa);
            mu = config.mu * m;
            nu = config.nu * m;
        } else {
            const double pr = problem.p[indices.front()];
            const double nz = norm_inf(z), nv = norm_inf(v);
            if (nz == 0.0 || nv == 0.0) {
                throw std::runtime_error("sgd: vanishing sup-norm iterate at iteration " + std::to_string(t));
            }
            mu = config.epie_alpha * pr / (d * nv * nv);
            nu = config.epie_beta * pr / (d * nz * nz);
        }
        recorder.add(t, e, mu, nu);
        z.axpy(-mu, g.g_z);
        v.axpy(-nu, g.g_v);
    }
    return result;
}

SolverResult run_epie(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                      const SolverConfig& config) {
    require_start(problem, z0, v0, config);
    const std::size_t R = problem.regions();
    const double d = static_cast<double>(problem.dimension());
    const ShiftMode mode = problem.shifts().mode();
    Rng rng(config.seed);
    std::vector<std::size_t> sweep;
    std::size_t sweep_pos = 0;

    SolverResult result{{z0, v0}, {}, 0, false, {}, {}};
    auto& [z, v] = result.final;
    TraceRecorder recorder(result.trace);
    for (std::size_t t = 0;; ++t) {
        const Evaluation e = evaluate(problem, z, v);
        require_finite(e, t, "epie");
        if (should_stop(t, e, config, result)) {
            recorder.add(t, e, 0.0, 0.0);
            break;
        }
        std::size_t region = 0;
        if (config.schedule == IndexSchedule::iid) {
            region = sample_indices(problem.p, 1, rng).front();
        } else {
            if (sweep_pos == sweep.size()) {
                sweep.resize(R);
                std::iota(sweep.begin(), sweep.end(), std::size_t{0});
                for (std::size_t i = R; i > 1; --i) std::swap(sweep[i - 1], sweep[rng.below(i)]);
                sweep_pos = 0;
            }
            region = sweep[sweep_pos++];
        }
        result.regions.push_back(region);

        const double nz = norm_inf(z), nv = norm_inf(v);
        if (nz == 0.0 || nv == 0.0) {
            throw std::runtime_error("epie: vanishing sup-norm iterate at iteration " + std::to_string(t));
        }
        const long r = problem.shifts().offset(region);
        const auto y = problem.measurements.row(region);
        const ComplexVector sv = shift(v, r, mode);
        const ComplexVector psi = hadamard(z, sv);
        ComplexVector corrected = dft(psi);
        for (std::size_t k = 0; k < corrected.size(); ++k) {
            const double modulus = std::abs(corrected[k]);
            corrected[k] = modulus == 0.0 ? Complex{} : std::sqrt(y[k]) * corrected[k] / modulus;
        }
        const ComplexVector residual = idft(corrected) - psi;

        const double pr = problem.p[region];
        recorder.add(t, e, config.epie_alpha * pr / (d * nv * nv), config.epie_beta * pr / (d * nz * nz));
        const ComplexVector dz = hadamard(conj(sv), residual);
        const ComplexVector dv = shift(hadamard(conj(z), residual), -r, mode);
        z.axpy(config.epie_alpha / (nv * nv), dz);
        v.axpy(config.epie_beta / (nz * nz), dv);
        if (!z.is_finite() || !v.is_finite()) {
            throw std::runtime_error("epie: non-finite iterate after iteration " + std::to_string(t));
        }
    }
    return result;
}

SolverResult run_interval(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                          const SolverConfig& config) {
    require_start(problem, z0, v0, config);
    if (!(problem.alpha_T > 0.0)) throw ConfigError("alpha_T", "interval solver requires alpha_T > 0");
    if (!(problem.beta_T > 0.0)) throw ConfigError("beta_T", "interval solver requires beta_T > 0");
    const std::size_t G = config.gamma_grid;

    SolverResult result{{z0, v0}, {}, 0, false, {}, {}};
    auto& [z, v] = result.final;
    TraceRecorder recorder(result.trace);
    for (std::size_t t = 0;; ++t) {
        const Evaluation e = evaluate(problem, z, v);
        require_finite(e, t, "interval");
        if (should_stop(t, e, config, result)) {
            recorder.add(t, e, 0.0, 0.0);
            break;
        }
        const LipschitzConstants L = lipschitz_constants(problem, z, v);
        const GradientPair& g = e.gradient;

        // Grid from gamma = 1 (the point (z_+, v)) down to gamma = 0 ((z, v_+));
        // a strict comparison keeps the larger gamma on ties.
        IntervalStep step;
        step.J_before = e.value.J;
        step.L_v = L.L_v;
        step.L_z = L.L_z;
        double best_J = inf;
        double best_gamma = 1.0;
        IteratePair best{z, v};
        for (std::size_t i = G; i-- > 0;) {
            const double gamma = static_cast<double>(i) / static_cast<double>(G - 1);
            const double zs = gamma / L.L_v;
            const double vs = (1.0 - gamma) / L.L_z;
            IteratePair candidate{z, v};
            if (zs != 0.0) candidate.z.axpy(-zs, g.g_z);
            if (vs != 0.0) candidate.v.axpy(-vs, g.g_v);
            const double J = loss(problem, candidate.z, candidate.v).J;
            if (i == G - 1) step.J_plus_z = J;
            if (i == 0) step.J_plus_v = J;
            if (J < best_J) {
                best_J = J;
                best_gamma = gamma;
                best = std::move(candidate);
            }
        }
        if (!std::isfinite(best_J)) {
            throw std::runtime_error("interval: non-finite loss at iteration " + std::to_string(t));
        }
        const double gz2 = norm2_squared(g.g_z), gv2 = norm2_squared(g.g_v);
        step.J_after = best_J;
        step.gamma = best_gamma;
        step.decrease_printed = 0.5 * gz2 / L.L_z + 0.5 * gv2 / L.L_v;
        step.decrease_swapped = 0.5 * gz2 / L.L_v + 0.5 * gv2 / L.L_z;
        result.interval.push_back(step);

        recorder.add(t, e, best_gamma / L.L_v, (1.0 - best_gamma) / L.L_z);
        z = std::move(best.z);
        v = std::move(best.v);
    }
    return result;
}

SolverResult run_solver(const ProblemInstance& problem, const ComplexVector& z0, const ComplexVector& v0,
                        const SolverConfig& config) {
    switch (config.algorithm) {
        case Algorithm::gd: return run_gd(problem, z0, v0, config);
        case Algorithm::sgd: return run_sgd(problem, z0, v0, config);
        case Algorithm::epie: return run_epie(problem, z0, v0, config);
        case Algorithm::interval: return run_interval(problem, z0, v0, config);
    }
    throw std::logic_error("run_solver: unknown algorithm");
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << trace_csv_header << '\n';
    for (const auto& row : trace) {
        out << row.t << ',' << format_double(row.J) << ',' << format_double(row.L_eps) << ','
            << format_double(row.grad_z_norm) << ',' << format_double(row.grad_v_norm) << ','
            << format_double(row.mu_t) << ',' << format_double(row.nu_t) << ',' << row.wall_ns << '\n';
    }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != trace_csv_header) {
        throw std::runtime_error("trace CSV: missing or unexpected header");
    }
    std::vector<TraceRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 8) throw std::runtime_error("trace CSV: expected 8 columns in '" + line + "'");
        TraceRecord row;
        row.t = std::stoull(cells[0]);
        row.J = std::stod(cells[1]);
        row.L_eps = std::stod(cells[2]);
        row.grad_z_norm = std::stod(cells[3]);
        row.grad_v_norm = std::stod(cells[4]);
        row.mu_t = std::stod(cells[5]);
        row.nu_t = std::stod(cells[6]);
        row.wall_ns = std::stoll(cells[7]);
        out.push_back(row);
    }
    return out;
}

}  // namespace ptyopt
