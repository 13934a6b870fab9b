#include "ptyopt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "ptyopt/errors.hpp"
#include "ptyopt/problem_io.hpp"
#include "ptyopt/verify.hpp"

namespace ptyopt {

namespace {

using nlohmann::json;

constexpr double inf = std::numeric_limits<double>::infinity();

json optional_number(const std::optional<double>& x) {
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<long> parse_offsets(const std::string& text, std::size_t d, const char* field) {
    if (text == "all") {
        std::vector<long> all(d);
        for (std::size_t r = 0; r < d; ++r) all[r] = static_cast<long>(r);
        return all;
    }
    std::vector<long> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(field, "expected 'all' or a comma-separated list of integers");
        }
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& text, const char* field) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(field, "expected a comma-separated list of numbers");
        }
    }
    return out;
}

NoiseModel noise_from(const std::string& name, double sigma) {
    if (name == "none") return NoiseModel::none();
    if (name == "poisson") return NoiseModel::poisson();
    if (name == "gaussian") {
        if (!(sigma >= 0.0)) throw ConfigError("sigma", "must be >= 0");
        return NoiseModel::gaussian(sigma);
    }
    throw ConfigError("noise", "expected none, poisson or gaussian");
}

std::string init_name(InitMode mode) { return mode == InitMode::truth ? "truth" : "random"; }

InitMode init_from(const std::string& name) {
    if (name == "random") return InitMode::random;
    if (name == "truth") return InitMode::truth;
    throw ConfigError("init", "expected random or truth");
}

template <class T>
T get_as(const json& doc, const char* field) {
    try {
        return doc.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(field, "has the wrong type");
    }
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
    if (!doc.is_object()) throw ConfigError(where, "expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
            throw ConfigError(key, "unknown key in " + where);
        }
    }
}

json read_json_file(const std::filesystem::path& path, const char* field) {
    std::ifstream in(path);
    if (!in) throw ConfigError(field, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(field, std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot write " + path.string());
    out << text;
}

std::string trace_text(const std::vector<TraceRecord>& trace) {
    std::ostringstream out;
    write_trace_csv(out, trace);
    return out.str();
}

struct TimedRun {
    SolverResult result;
    double seconds = 0.0;
};

TimedRun timed_run(const ProblemInstance& problem, const IteratePair& start, const SolverConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    SolverResult result = run_solver(problem, start.z, start.v, config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    return {std::move(result), elapsed.count()};
}

}  // namespace

double reconstruction_error(const ComplexVector& z, const ComplexVector& v, const ComplexVector& x,
                            const ComplexVector& w) {
    const double nx = norm2(x), nw = norm2(w);
    if (nx == 0.0 || nw == 0.0) throw std::invalid_argument("reconstruction_error: ground truth has zero norm");
    const double nz2 = norm2_squared(z);
    if (nz2 == 0.0) return inf;
    const Complex g = inner(z, x) / nz2;
    if (g == Complex{}) return inf;
    // The object and window carry independent global phases, so the window
    // gets its own phase alignment after the joint scale.
    const ComplexVector u = (1.0 / g) * v;
    const Complex overlap = inner(u, w);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
    return norm2(g * z - x) / nx + norm2(phase * u - w) / nw;
}

double min_grad_norm_sq(const std::vector<TraceRecord>& trace) {
    double best = inf;
    for (const auto& row : trace) {
        best = std::min(best, row.grad_z_norm * row.grad_z_norm + row.grad_v_norm * row.grad_v_norm);
    }
    return best;
}

DecayFit fit_decay_slope(const std::vector<TraceRecord>& trace, std::size_t t_min, std::optional<std::size_t> t_max) {
    if (trace.size() <= t_min + 100) {
        throw std::invalid_argument("fit_decay_slope: trace must be longer than t_min + 100");
    }
    double running = inf;
    std::vector<double> xs, ys;
    for (const auto& row : trace) {
        running = std::min(running, row.grad_z_norm * row.grad_z_norm + row.grad_v_norm * row.grad_v_norm);
        if (row.t < std::max<std::size_t>(t_min, 1)) continue;
        if (t_max && row.t > *t_max) break;
        if (!(running > 0.0) || !std::isfinite(running)) continue;
        xs.push_back(std::log(static_cast<double>(row.t)));
        ys.push_back(std::log(running));
    }
    DecayFit fit;
    fit.points = xs.size();
    const bool constant = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
    if (xs.size() < 2 || constant) {
        fit.degenerate = true;
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.slope = sxy / sxx;
    return fit;
}

IteratePair initial_guess(const ProblemInstance& problem, InitMode mode, std::uint64_t seed) {
    if (mode == InitMode::truth) {
        if (!problem.ground_truth) throw ConfigError("init", "problem carries no ground truth");
        return {problem.ground_truth->object, problem.ground_truth->window};
    }
    Rng rng(derive_seed(seed, 1));
    ComplexVector z = random_complex_vector(problem.dimension(), rng);
    ComplexVector v = random_complex_vector(problem.dimension(), rng);
    return {std::move(z), std::move(v)};
}

RunSummary summarize(const ProblemInstance& problem, const SolverResult& result, double wall_time) {
    RunSummary s;
    s.final_J = result.trace.empty() ? 0.0 : result.trace.back().J;
    s.min_grad_norm_sq = min_grad_norm_sq(result.trace);
    if (result.trace.size() > 100) {
        const DecayFit fit = fit_decay_slope(result.trace, 0);
        s.decay_slope = fit.slope;
    }
    if (problem.ground_truth) {
        s.reconstruction_error = reconstruction_error(result.final.z, result.final.v, problem.ground_truth->object,
                                                      problem.ground_truth->window);
    }
    s.wall_time = wall_time;
    s.iterations = result.iterations;
    s.converged = result.converged;
    return s;
}

json solver_config_to_json(const SolverConfig& c) {
    return {{"algo", to_string(c.algorithm)},
            {"theta", c.theta},
            {"kappa", c.kappa},
            {"mu", c.mu},
            {"nu", c.nu},
            {"epie_alpha", c.epie_alpha},
            {"epie_beta", c.epie_beta},
            {"max_iters", c.max_iters},
            {"seed", c.seed},
            {"grad_tol", c.grad_tol},
            {"gamma_grid", c.gamma_grid},
            {"step_mode", to_string(c.step_mode)},
            {"cap_factor", c.cap_factor},
            {"sgd_steps", to_string(c.sgd_steps)},
            {"schedule", to_string(c.schedule)}};
}

SolverConfig solver_config_from_json(const json& doc, SolverConfig c) {
    reject_unknown(doc,
                   {"algo", "theta", "kappa", "mu", "nu", "epie_alpha", "epie_beta", "max_iters", "seed", "grad_tol",
                    "gamma_grid", "step_mode", "cap_factor", "sgd_steps", "schedule"},
                   "solver config");
    for (const auto& [key, value] : doc.items()) {
        const char* k = key.c_str();
        if (key == "algo") c.algorithm = algorithm_from_string(get_as<std::string>(value, k));
        else if (key == "theta") c.theta = get_as<double>(value, k);
        else if (key == "kappa") c.kappa = get_as<double>(value, k);
        else if (key == "mu") c.mu = get_as<double>(value, k);
        else if (key == "nu") c.nu = get_as<double>(value, k);
        else if (key == "epie_alpha") c.epie_alpha = get_as<double>(value, k);
        else if (key == "epie_beta") c.epie_beta = get_as<double>(value, k);
        else if (key == "max_iters") c.max_iters = get_as<std::size_t>(value, k);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(value, k);
        else if (key == "grad_tol") c.grad_tol = get_as<double>(value, k);
        else if (key == "gamma_grid") c.gamma_grid = get_as<std::size_t>(value, k);
        else if (key == "step_mode") c.step_mode = step_mode_from_string(get_as<std::string>(value, k));
        else if (key == "cap_factor") c.cap_factor = get_as<double>(value, k);
        else if (key == "sgd_steps") c.sgd_steps = sgd_step_policy_from_string(get_as<std::string>(value, k));
        else if (key == "schedule") c.schedule = index_schedule_from_string(get_as<std::string>(value, k));
    }
    c.validate();
    return c;
}

ProblemParams problem_params_from_json(const json& doc) {
    reject_unknown(doc,
                   {"d", "offsets", "mode", "seed", "noise", "sigma", "epsilon", "alpha_T", "beta_T", "p", "K"},
                   "problem");
    ProblemParams p;
    if (doc.contains("d")) p.d = get_as<std::size_t>(doc["d"], "d");
    if (p.d == 0) throw ConfigError("d", "must be >= 1");
    ShiftMode mode = ShiftMode::circular;
    if (doc.contains("mode")) {
        try {
            mode = shift_mode_from_string(get_as<std::string>(doc["mode"], "mode"));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("mode", e.what());
        }
    }
    std::vector<long> offsets = parse_offsets("all", p.d, "offsets");
    if (doc.contains("offsets")) {
        const json& o = doc["offsets"];
        if (o.is_string()) {
            offsets = parse_offsets(o.get<std::string>(), p.d, "offsets");
        } else {
            offsets = get_as<std::vector<long>>(o, "offsets");
        }
    }
    try {
        p.shifts.emplace(std::move(offsets), mode, p.d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("offsets", e.what());
    }
    if (doc.contains("seed")) p.seed = get_as<std::uint64_t>(doc["seed"], "seed");
    const double sigma = doc.contains("sigma") ? get_as<double>(doc["sigma"], "sigma") : 0.0;
    if (doc.contains("noise")) p.noise = noise_from(get_as<std::string>(doc["noise"], "noise"), sigma);
    if (doc.contains("epsilon")) p.epsilon = get_as<double>(doc["epsilon"], "epsilon");
    if (doc.contains("alpha_T")) p.alpha_T = get_as<double>(doc["alpha_T"], "alpha_T");
    if (doc.contains("beta_T")) p.beta_T = get_as<double>(doc["beta_T"], "beta_T");
    if (doc.contains("p")) p.p = get_as<std::vector<double>>(doc["p"], "p");
    if (doc.contains("K")) p.K = get_as<std::size_t>(doc["K"], "K");
    return p;
}

json problem_params_to_json(const ProblemParams& p) {
    const ShiftSet shifts = p.shifts ? *p.shifts : ShiftSet::all_circular(p.d);
    return {{"d", p.d},
            {"offsets", shifts.offsets()},
            {"mode", to_string(shifts.mode())},
            {"seed", p.seed},
            {"noise", to_string(p.noise)},
            {"sigma", p.noise.sigma},
            {"epsilon", p.epsilon},
            {"alpha_T", p.alpha_T},
            {"beta_T", p.beta_T},
            {"p", p.p.empty() ? uniform_distribution(shifts.count()) : p.p},
            {"K", p.K}};
}

ExperimentConfig experiment_from_json(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown(doc, {"problem", "solvers", "repetitions", "seed", "init", "output_dir"}, "experiment");
    ExperimentConfig cfg;
    if (!doc.contains("problem")) throw ConfigError("problem", "missing");
    const json& problem = doc["problem"];
    if (problem.is_object() && problem.contains("file")) {
        if (problem.size() != 1) throw ConfigError("problem", "'file' excludes synthesis parameters");
        cfg.problem_file = base_dir / get_as<std::string>(problem["file"], "problem.file");
    } else {
        cfg.problem = problem_params_from_json(problem);
    }
    if (!doc.contains("solvers") || !doc["solvers"].is_array() || doc["solvers"].empty()) {
        throw ConfigError("solvers", "expected a nonempty array of solver configs");
    }
    for (const auto& s : doc["solvers"]) cfg.solvers.push_back(solver_config_from_json(s));
    if (doc.contains("repetitions")) cfg.repetitions = get_as<std::size_t>(doc["repetitions"], "repetitions");
    if (cfg.repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
    if (doc.contains("seed")) cfg.seed = get_as<std::uint64_t>(doc["seed"], "seed");
    if (doc.contains("init")) cfg.init = init_from(get_as<std::string>(doc["init"], "init"));
    if (doc.contains("output_dir")) cfg.output_dir = base_dir / get_as<std::string>(doc["output_dir"], "output_dir");
    else cfg.output_dir = base_dir / cfg.output_dir;
    return cfg;
}

json summary_to_json(const RunSummary& s, const SolverConfig& config, InitMode init, const json& problem_provenance) {
    json cfg = solver_config_to_json(config);
    cfg["init"] = init_name(init);
    cfg["problem"] = problem_provenance;
    return {{"final_J", s.final_J},
            {"min_grad_norm_sq", s.min_grad_norm_sq},
            {"decay_slope", optional_number(s.decay_slope)},
            {"reconstruction_error", optional_number(s.reconstruction_error)},
            {"wall_time", s.wall_time},
            {"iterations", s.iterations},
            {"converged", s.converged},
            {"config", cfg}};
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
    ProblemInstance problem = cfg.problem_file ? load_problem(*cfg.problem_file) : synthesize_problem(cfg.problem);
    const json provenance =
        cfg.problem_file ? json{{"file", cfg.problem_file->string()}} : problem_params_to_json(cfg.problem);
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<std::filesystem::path> summaries;
    for (std::size_t j = 0; j < cfg.solvers.size(); ++j) {
        for (std::size_t i = 0; i < cfg.repetitions; ++i) {
            SolverConfig solver = cfg.solvers[j];
            solver.seed = cfg.seed + i;
            const IteratePair start = initial_guess(problem, cfg.init, solver.seed);
            const TimedRun run = timed_run(problem, start, solver);
            const std::string stem = to_string(solver.algorithm) + "_" + std::to_string(j) + "_rep" + std::to_string(i);
            write_text(cfg.output_dir / (stem + ".csv"), trace_text(run.result.trace));
            const RunSummary s = summarize(problem, run.result, run.seconds);
            const auto path = cfg.output_dir / (stem + ".json");
            write_text(path, dump_json(summary_to_json(s, solver, cfg.init, provenance)));
            summaries.push_back(path);
        }
    }
    return summaries;
}

namespace {

struct SynthOptions {
    std::size_t d = 16;
    std::string shifts = "all";
    std::string mode = "circular";
    std::uint64_t seed = 0;
    std::string noise = "none";
    double sigma = 0.0;
    double epsilon = 1e-8;
    double alpha_T = 1e-3;
    double beta_T = 1e-3;
    std::string p;
    std::size_t K = 1;

    void attach(CLI::App* app) {
        app->add_option("--d", d, "signal length");
        app->add_option("--shifts", shifts, "'all' or comma-separated offsets");
        app->add_option("--mode", mode, "circular or zero-padded");
        app->add_option("--problem-seed", seed, "seed for the ground truth and noise");
        app->add_option("--noise", noise, "none, poisson or gaussian");
        app->add_option("--sigma", sigma, "gaussian noise level");
        app->add_option("--epsilon", epsilon, "amplitude smoothing");
        app->add_option("--alpha", alpha_T, "Tikhonov weight on the object");
        app->add_option("--beta", beta_T, "Tikhonov weight on the window");
        app->add_option("--p", p, "comma-separated sampling distribution (default uniform)");
        app->add_option("--K", K, "batch size");
    }

    ProblemParams params() const {
        if (d == 0) throw ConfigError("d", "must be >= 1");
        ProblemParams pp;
        pp.d = d;
        ShiftMode m;
        try {
            m = shift_mode_from_string(mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("mode", e.what());
        }
        try {
            pp.shifts.emplace(parse_offsets(shifts, d, "shifts"), m, d);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("shifts", e.what());
        }
        pp.seed = seed;
        pp.noise = noise_from(noise, sigma);
        pp.epsilon = epsilon;
        pp.alpha_T = alpha_T;
        pp.beta_T = beta_T;
        if (!p.empty()) pp.p = parse_numbers(p, "p");
        pp.K = K;
        return pp;
    }
};

ProblemInstance synthesize_checked(const ProblemParams& pp) {
    try {
        return synthesize_problem(pp);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError(colon == std::string::npos ? "problem" : msg.substr(0, colon), msg);
    }
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text(out, text);
    }
}

std::string csv_cell(const json& value) {
    if (value.is_null()) return "";
    if (value.is_number_float()) return format_double(value.get<double>());
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Blind ptychography solvers and verification"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "write a synthetic problem as JSON");
    SynthOptions synth_opts;
    synth_opts.attach(synth);
    synth->add_option("--seed", synth_opts.seed, "seed for the ground truth and noise");
    std::string synth_out;
    synth->add_option("--out", synth_out, "output path (stdout when omitted)");

    // run
    auto* run = app.add_subcommand("run", "run a solver; writes a trace CSV and a summary JSON");
    std::string problem_path, experiment_path, trace_path, summary_path, init = "random";
    std::string algo = "gd", step_mode = "rate", sgd_steps = "theory", schedule = "iid";
    SolverConfig cfg;
    run->add_option("--problem", problem_path, "problem JSON");
    run->add_option("--experiment", experiment_path, "experiment JSON (solver matrix with repetitions)");
    run->add_option("--algo", algo, "gd, sgd, epie or interval");
    run->add_option("--iters", cfg.max_iters, "iteration budget");
    run->add_option("--seed", cfg.seed, "seed for sampling and the initial guess");
    run->add_option("--theta", cfg.theta);
    run->add_option("--kappa", cfg.kappa);
    run->add_option("--mu", cfg.mu);
    run->add_option("--nu", cfg.nu);
    run->add_option("--epie-alpha", cfg.epie_alpha);
    run->add_option("--epie-beta", cfg.epie_beta);
    run->add_option("--grad-tol", cfg.grad_tol);
    run->add_option("--gamma-grid", cfg.gamma_grid);
    run->add_option("--step-mode", step_mode, "rate or cap");
    run->add_option("--cap-factor", cfg.cap_factor);
    run->add_option("--sgd-steps", sgd_steps, "theory or epie-mapped");
    run->add_option("--schedule", schedule, "iid or shuffled");
    run->add_option("--init", init, "random or truth");
    run->add_option("--trace", trace_path, "trace CSV path (stdout when omitted)");
    run->add_option("--summary", summary_path, "summary JSON path");

    // verify
    auto* verify = app.add_subcommand("verify", "run checker suites; exit 1 if any check fails");
    std::string suite = "all", verify_problem, verify_out;
    std::uint64_t verify_seed = 0;
    SynthOptions verify_opts;
    verify_opts.attach(verify);
    verify->add_option("--suite", suite, "gradient, descent, unbiased, bounds, lipschitz or all");
    verify->add_option("--problem", verify_problem, "problem JSON (synthesized when omitted)");
    verify->add_option("--seed", verify_seed, "checker seed");
    verify->add_option("--out", verify_out, "report JSON path (stdout when omitted)");

    // report
    auto* report = app.add_subcommand("report", "tabulate summary JSON files as CSV");
    std::vector<std::string> summary_files;
    std::string report_dir, report_out;
    report->add_option("summaries", summary_files, "summary JSON files");
    report->add_option("--dir", report_dir, "directory whose *.json summaries are tabulated");
    report->add_option("--out", report_out, "CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed()) {
            const ProblemInstance problem = synthesize_checked(synth_opts.params());
            emit(synth_out, dump_json(problem_to_json(problem)));
            return 0;
        }

        if (run->parsed()) {
            if (!experiment_path.empty()) {
                if (!problem_path.empty()) throw ConfigError("problem", "--problem and --experiment are exclusive");
                const std::filesystem::path path(experiment_path);
                const auto paths = run_experiment(experiment_from_json(read_json_file(path, "experiment"),
                                                                       path.parent_path()));
                for (const auto& p : paths) std::cout << p.string() << '\n';
                return 0;
            }
            if (problem_path.empty()) throw ConfigError("problem", "--problem or --experiment is required");
            cfg.algorithm = algorithm_from_string(algo);
            cfg.step_mode = step_mode_from_string(step_mode);
            cfg.sgd_steps = sgd_step_policy_from_string(sgd_steps);
            cfg.schedule = index_schedule_from_string(schedule);
            cfg.validate();
            const InitMode init_mode = init_from(init);
            const ProblemInstance problem = load_problem(problem_path);
            const IteratePair start = initial_guess(problem, init_mode, cfg.seed);
            const TimedRun result = timed_run(problem, start, cfg);
            emit(trace_path, trace_text(result.result.trace));
            if (!summary_path.empty()) {
                const RunSummary s = summarize(problem, result.result, result.seconds);
                write_text(summary_path, dump_json(summary_to_json(s, cfg, init_mode, {{"file", problem_path}})));
            }
            return 0;
        }

        if (verify->parsed()) {
            const ProblemInstance problem =
                verify_problem.empty() ? synthesize_checked(verify_opts.params()) : load_problem(verify_problem);
            const auto& names = suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end()) {
                throw ConfigError("suite", "unknown suite '" + suite + "'");
            }
            const auto reports = run_suite(suite, problem, verify_seed);
            emit(verify_out, to_json(reports).dump(2) + "\n");
            bool ok = true;
            for (const auto& r : reports) {
                if (!r.passed) {
                    ok = false;
                    std::cerr << "FAILED " << r.name << ": " << r.detail << '\n';
                }
            }
            return ok ? 0 : 1;
        }

        if (report->parsed()) {
            std::vector<std::filesystem::path> files(summary_files.begin(), summary_files.end());
            if (!report_dir.empty()) {
                if (!std::filesystem::is_directory(report_dir)) throw ConfigError("dir", "not a directory");
                std::vector<std::filesystem::path> found;
                for (const auto& entry : std::filesystem::directory_iterator(report_dir)) {
                    if (entry.path().extension() != ".json") continue;
                    // problem files and verify reports may share the directory
                    const json doc = read_json_file(entry.path(), "dir");
                    if (doc.is_object() && doc.contains("final_J")) found.push_back(entry.path());
                }
                std::sort(found.begin(), found.end());
                files.insert(files.end(), found.begin(), found.end());
            }
            if (files.empty()) throw ConfigError("summaries", "no summary files given");
            std::ostringstream out;
            out << "summary,algo,seed,iterations,final_J,min_grad_norm_sq,decay_slope,reconstruction_error,wall_time\n";
            for (const auto& f : files) {
                const json s = read_json_file(f, "summaries");
                for (const char* key : {"final_J", "min_grad_norm_sq", "decay_slope", "reconstruction_error",
                                        "wall_time", "iterations", "config"}) {
                    if (!s.contains(key)) throw ConfigError(key, "missing in " + f.string());
                }
                out << f.filename().string() << ',' << csv_cell(s["config"].value("algo", json())) << ','
                    << csv_cell(s["config"].value("seed", json())) << ',' << csv_cell(s["iterations"]) << ','
                    << csv_cell(s["final_J"]) << ',' << csv_cell(s["min_grad_norm_sq"]) << ','
                    << csv_cell(s["decay_slope"]) << ',' << csv_cell(s["reconstruction_error"]) << ','
                    << csv_cell(s["wall_time"]) << '\n';
            }
            emit(report_out, out.str());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace ptyopt
