#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptyopt/verify.hpp"

using namespace ptyopt;

namespace {

ProblemInstance make_problem(std::size_t d, std::uint64_t seed, double eps = 1e-8, double alpha = 1e-3,
                             double beta = 1e-3) {
    ProblemParams params;
    params.d = d;
    params.seed = seed;
    params.epsilon = eps;
    params.alpha_T = alpha;
    params.beta_T = beta;
    return synthesize_problem(params);
}

}  // namespace

TEST_CASE("finite differences recover a pure quadratic", "[verify]") {
    ProblemInstance p = make_problem(8, 1, 1e-3, 0.7, 0.0);
    p.measurements = MeasurementSet(ShiftSet({0}, ShiftMode::zero_padded, 8), std::vector<double>(8, 0.0));
    p.p = {1.0};
    // A window of zeros switches every region off, leaving alpha_T ||z||^2.
    std::mt19937_64 gen(51);
    const ComplexVector z = oracle::random_vector(8, gen);
    const ComplexVector v(8);
    const GradientPair fd = fd_wirtinger_gradient(p, z, v, default_fd_step(z, v));
    REQUIRE(oracle::rel_diff(fd.g_z, 0.7 * z) < 1e-8);
}

TEST_CASE("finite differences vanish at the ground truth", "[verify]") {
    const ProblemInstance p = make_problem(8, 2, 1e-3, 0.0, 0.0);
    const auto& x = p.ground_truth->object;
    const auto& w = p.ground_truth->window;
    const GradientPair fd = fd_wirtinger_gradient(p, x, w, default_fd_step(x, w));
    REQUIRE(std::sqrt(fd.norm_squared()) < 1e-8);
}

TEST_CASE("finite difference error shrinks quadratically in the step", "[verify]") {
    const ProblemInstance p = make_problem(8, 3, 1e-1, 0.0, 0.0);
    std::mt19937_64 gen(52);
    const ComplexVector z = oracle::random_vector(8, gen), v = oracle::random_vector(8, gen);
    const GradientPair exact = gradient(p, z, v);
    auto err = [&](double h) {
        const GradientPair fd = fd_wirtinger_gradient(p, z, v, h);
        return std::sqrt(norm2_squared(fd.g_z - exact.g_z) + norm2_squared(fd.g_v - exact.g_v));
    };
    const double ratio = err(2e-3) / err(1e-3);
    REQUIRE(ratio > 3.0);
    REQUIRE(ratio < 5.0);
}

TEST_CASE("gradient checker passes on random instances", "[verify]") {
    for (double eps : {1e-3, 1.0}) {
        const ProblemInstance p = make_problem(8, 4, eps);
        Rng rng(53);
        const CheckReport report = check_gradient_fd(p, 5, 1.0, rng);
        INFO(report.detail);
        REQUIRE(report.passed);
        REQUIRE(report.samples == 5);
    }
}

TEST_CASE("descent lemma is tight at zero displacement", "[verify]") {
    const ProblemInstance p = make_problem(8, 5);
    std::mt19937_64 gen(54);
    const ComplexVector z = oracle::random_vector(8, gen), v = oracle::random_vector(8, gen);
    const ComplexVector zero(8);
    REQUIRE(descent_lemma_rhs(p, z, v, zero, zero) == loss(p, z, v).J);
}

TEST_CASE("descent lemma checker", "[verify]") {
    const ProblemInstance p = make_problem(8, 6);
    for (double scale : {1.0, 10.0}) {
        Rng rng(55);
        const CheckReport report = check_descent_lemma(p, 200, scale, rng);
        INFO(report.detail);
        REQUIRE(report.passed);
    }
}

TEST_CASE("unbiasedness by enumeration", "[verify]") {
    std::mt19937_64 gen(56);
    ProblemParams params;
    params.d = 4;
    params.shifts = ShiftSet({0, 1, 3}, ShiftMode::circular, 4);
    params.p = {0.7, 0.2, 0.1};
    for (std::size_t K : {1u, 3u}) {
        params.K = K;
        const ProblemInstance p = synthesize_problem(params);
        const ComplexVector z = oracle::random_vector(4, gen), v = oracle::random_vector(4, gen);
        const CheckReport report = check_unbiasedness(p, z, v);
        INFO("K " << K << ": " << report.detail);
        REQUIRE(report.passed);
        REQUIRE_THAT(report.detail, Catch::Matchers::ContainsSubstring(K == 1 ? " 3 index tuples" : " 27 index tuples"));
    }
}

TEST_CASE("gradient bound checker", "[verify]") {
    ProblemParams params;
    params.d = 8;
    params.seed = 7;
    params.alpha_T = 0.0;
    ProblemInstance p = synthesize_problem(params);
    const ComplexVector zero(8);
    REQUIRE(bound_Bz(p, zero, zero) == 0.0);

    Rng rng(57);
    CheckReport report = check_gradient_bounds(p, 100, 1.0, rng);
    REQUIRE(report.passed);

    params.p = {0.93, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
    p = synthesize_problem(params);
    report = check_gradient_bounds(p, 100, 1.0, rng);
    INFO(report.detail);
    REQUIRE(report.passed);
}

TEST_CASE("bilinear bound", "[verify]") {
    Rng rng(58);
    const CheckReport full = check_bilinear_bound(8, ShiftSet::all_circular(8), 50, 1.0, rng);
    REQUIRE(full.passed);
    REQUIRE(std::abs(full.worst_slack) < 1e-12);  // equality over the full orbit

    const CheckReport single = check_bilinear_bound(8, ShiftSet({2}, ShiftMode::circular, 8), 50, 1.0, rng);
    REQUIRE(single.passed);
    REQUIRE(single.worst_slack > 0.0);

    const CheckReport padded =
        check_bilinear_bound(8, ShiftSet({-3, 0, 2, 5}, ShiftMode::zero_padded, 8), 50, 1.0, rng);
    REQUIRE(padded.passed);
}

TEST_CASE("loss and Lipschitz constant bounds", "[verify]") {
    const ProblemInstance p = make_problem(8, 8);
    Rng rng(59);
    REQUIRE(check_loss_upper_bound(p, 100, 1.0, rng).passed);
    REQUIRE(check_lipschitz_constant_bound(p, 100, 1.0, rng).passed);
}

TEST_CASE("local Lipschitz checker", "[verify]") {
    for (double eps : {1e-2, 1e-6}) {
        const ProblemInstance p = make_problem(8, 9, eps);
        Rng rng(60);
        const CheckReport report = check_lipschitz(p, 100, rng);
        INFO(report.detail);
        REQUIRE(report.passed);
    }
    const ProblemInstance p = make_problem(8, 9, 1e-2);
    std::mt19937_64 gen(61);
    const ComplexVector z = oracle::random_vector(8, gen), v = oracle::random_vector(8, gen);
    const GradientPair g = gradient(p, z, v);
    REQUIRE(std::sqrt(norm2_squared(g.g_z - g.g_z)) == 0.0);
    REQUIRE(lipschitz_bound_rhs(p, z, v, z, v) == 0.0);
}

TEST_CASE("suites are deterministic and serializable", "[verify]") {
    const ProblemInstance p = make_problem(8, 10);
    const auto a = run_suite("bounds", p, 5);
    const auto b = run_suite("bounds", p, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].name == b[i].name);
        REQUIRE(a[i].worst_slack == b[i].worst_slack);
        REQUIRE(a[i].passed);
    }
    const nlohmann::json doc = to_json(a);
    REQUIRE(doc.is_array());
    REQUIRE(doc[0].contains("worst_slack"));
    REQUIRE_THROWS_AS(run_suite("nonsense", p, 0), std::invalid_argument);
}
