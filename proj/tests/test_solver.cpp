#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cscolloc/errors.hpp"
#include "cscolloc/solver.hpp"

using namespace cscolloc;
using std::numbers::pi;

namespace {

DiffusionCoefficient affine_eta() { return DiffusionCoefficient::affine({0.25, 0.25}); }

ProblemSpec sparse_problem(int n, std::vector<std::size_t> ranks, std::vector<double> values) {
    auto eta = affine_eta();
    auto f = forcing_from_expansion(eta, n, ranks, values);
    return ProblemSpec{eta, f, std::nullopt, n, 2};
}

Eigen::VectorXd dense(std::size_t N, const std::vector<std::size_t>& ranks, const std::vector<double>& values) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    for (std::size_t k = 0; k < ranks.size(); ++k) x(static_cast<Eigen::Index>(ranks[k])) = values[k];
    return x;
}

}  // namespace

TEST_CASE("single-mode right-hand side") {
    ProblemSpec p{DiffusionCoefficient::constant(1.0, 2),
                  [](Point z) { return 2 * std::sin(pi * z[0]) * std::sin(pi * z[1]); }, std::nullopt, 4, 2};
    const auto rep = solve_full(p);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(16);
    expected(0) = 5.0;
    CHECK((rep.coefficients - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rep.condition_estimate.has_value());
}

TEST_CASE("Poisson solve is the transpose product") {
    ProblemSpec p{DiffusionCoefficient::constant(1.0, 2), [](Point z) { return std::exp(z[0] * z[1]) - 1; },
                  std::nullopt, 8, 2};
    const auto sys = assemble_full(p.eta, p.forcing, 8, 2);
    const auto rep = solve_full(p);
    CHECK((rep.coefficients - sys.B.transpose() * sys.c).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("full solve on the bubble problem") {
    const auto p = bubble_problem(affine_eta(), 32);
    const auto rep = solve_full(p);
    const double err = relative_L2_expansion_error(rep.coefficients, 32, 2, p.exact->value);
    MESSAGE("relative L2 error " << err);
    CHECK(err >= 3.0e-3);
    CHECK(err <= 5.0e-3);
    CHECK(*rep.condition_estimate < 1e12);
}

TEST_CASE("compressive recovery of a 2-sparse vector") {
    const std::vector<std::size_t> ranks{17, 600};
    const std::vector<double> values{1.3, -0.4};
    const auto p = sparse_problem(32, ranks, values);
    const auto rep = solve_compressive(p, std::size_t{2}, 1);
    CHECK(rep.m == 28);
    CHECK(rep.K == 2);
    CHECK(rep.tau.size() == 28);
    CHECK(relative_l2_coeff_error(rep.coefficients, dense(1024, ranks, values)) < 1e-10);
}

TEST_CASE("compressive solve with every row matches the full solve") {
    const auto p = bubble_problem(affine_eta(), 4);
    SampleDraw draw{0, 4, 2, {}};
    for (std::size_t q = 0; q < 16; ++q) draw.tau.push_back(q);
    const auto comp = solve_compressive_with_draw(p, draw, 16);
    const auto full = solve_full(p);
    CHECK((comp.coefficients - full.coefficients).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("zero forcing gives the zero solution") {
    ProblemSpec p{affine_eta(), [](Point) { return 0.0; }, std::nullopt, 8, 2};
    const auto rep = solve_compressive(p, SampleSize{20, 4}, 9);
    CHECK(rep.coefficients.isZero());
    REQUIRE(rep.sparse.has_value());
    CHECK(rep.sparse->iterations_run == 0);
}

TEST_CASE("evaluate_solution") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(25);
    const std::vector<double> z{0.3, 0.8};
    CHECK(evaluate_solution(zero, 5, 2, z) == 0.0);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(25);
    e(7) = 1.0;
    CHECK(evaluate_solution(e, 5, 2, z) == doctest::Approx(eval_psi(MultiIndex::from_rank(7, 5, 2), z)).epsilon(1e-14));
    CHECK(evaluate_laplacian(e, 5, 2, z) ==
          doctest::Approx(eval_laplacian_psi(MultiIndex::from_rank(7, 5, 2), z)).epsilon(1e-13));
    const Eigen::VectorXd any = Eigen::VectorXd::LinSpaced(25, -3, 4);
    for (double t : {0.0, 0.2, 0.5, 1.0}) {
        CHECK(evaluate_solution(any, 5, 2, std::vector<double>{0.0, t}) == 0.0);
        CHECK(evaluate_solution(any, 5, 2, std::vector<double>{t, 1.0}) == 0.0);
    }
    const std::vector<double> nodes{0.1, 0.45, 0.9};
    const auto grid = expansion_on_grid(any, 5, 2, nodes);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const std::vector<double> p{nodes[a], nodes[b]};
            CHECK(grid(a * 3 + b) == doctest::Approx(evaluate_solution(any, 5, 2, p)).epsilon(1e-12));
        }
}

TEST_CASE("coefficient error metric") {
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(10, -1, 2);
    CHECK(relative_l2_coeff_error(x, x) == 0.0);
    CHECK(relative_l2_coeff_error(2 * x, x) == doctest::Approx(1.0));
    CHECK(relative_l2_coeff_error(Eigen::VectorXd::Zero(10), x) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)relative_l2_coeff_error(x, Eigen::VectorXd::Zero(10)), InvalidArgument);
}

TEST_CASE("function error metric") {
    const auto u = polynomial_bubble(2);
    CHECK(relative_L2_function_error(u.value, u.value, 2) < 1e-14);
    CHECK(relative_L2_function_error([](Point) { return 0.0; }, u.value, 2) == doctest::Approx(1.0).epsilon(1e-12));
    const auto shifted = [&](Point z) { return u.value(z) + eval_xi(MultiIndex({1, 1}, 1), z); };
    // |xi_(1,1)| = 1/(2 pi^2) and |u| = 256 B(5,5) = 256/630.
    const double expected = 630.0 / (512.0 * pi * pi);
    CHECK(std::abs(relative_L2_function_error(shifted, u.value, 2) - expected) < 1e-8);
    CHECK_THROWS_AS((void)relative_L2_function_error(u.value, [](Point) { return 0.0; }, 2), InvalidArgument);

    const auto p = bubble_problem(affine_eta(), 8);
    const auto rep = solve_full(p);
    const ScalarField u_hat = [&](Point z) { return evaluate_solution(rep.coefficients, 8, 2, z); };
    CHECK(relative_L2_expansion_error(rep.coefficients, 8, 2, u.value) ==
          doctest::Approx(relative_L2_function_error(u_hat, u.value, 2)).epsilon(1e-10));
}

TEST_CASE("Laplacian error identity") {
    for (int n : {4, 6, 8}) {
        const auto p = bubble_problem(affine_eta(), n);
        const auto full = solve_full(p);
        const auto comp = solve_compressive(p, SampleSize{static_cast<std::size_t>(n * n / 2), 5}, 3);
        const Eigen::VectorXd diff = full.coefficients - comp.coefficients;
        const double lhs = laplacian_L2_norm(diff, n, 2);
        const double rhs = diff.norm() / (n + 1);
        CHECK(std::abs(lhs - rhs) <= 1e-6 * rhs);
    }
}

TEST_CASE("full solution satisfies the compressive system") {
    for (int n : {3, 5, 8}) {
        const auto p = bubble_problem(affine_eta(), n);
        const auto full = solve_full(p);
        auto sys = build_compressive(p.eta, p.forcing, n, 2, draw_indices(static_cast<std::size_t>(n + 4), n, 2, 21));
        CHECK((sys.A * full.coefficients - sys.b).norm() < 1e-8);
    }
}

TEST_CASE("forcing is consistent with the manufactured solution") {
    CHECK(forcing_consistency_defect(bubble_problem(affine_eta(), 8), 200, 5) < 1e-4);
    const auto u = polynomial_bubble(3);
    const auto eta3 = DiffusionCoefficient::affine({0.1, 0.2, 0.3});
    ProblemSpec p3{eta3, forcing_from_manufactured(u, eta3), u, 3, 3};
    CHECK(forcing_consistency_defect(p3, 200, 5) < 1e-4);
    ProblemSpec wrong{eta3, [](Point) { return 1.0; }, u, 3, 3};
    CHECK(forcing_consistency_defect(wrong, 50, 5) > 1e-2);
}

TEST_CASE("assembly and recovery add up to the total") {
    const auto p = bubble_problem(affine_eta(), 32);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto rep = solve_compressive(p, std::size_t{16}, seed);
        CHECK(rep.assembly_seconds >= 0.0);
        CHECK(rep.recovery_seconds >= 0.0);
        const double sum = rep.assembly_seconds + rep.recovery_seconds;
        CHECK(std::abs(sum - rep.total_seconds) <= 0.05 * rep.total_seconds);
    }
    const auto full = solve_full(bubble_problem(affine_eta(), 16));
    CHECK(std::abs(full.assembly_seconds + full.recovery_seconds - full.total_seconds) <= 0.05 * full.total_seconds);
}

TEST_CASE("one- and three-dimensional solves converge") {
    const auto eta1 = DiffusionCoefficient::affine({0.5});
    double prev = 1.0;
    for (int n : {4, 8, 16}) {
        const auto p = bubble_problem(eta1, n);
        const double err = relative_L2_expansion_error(solve_full(p).coefficients, n, 1, p.exact->value);
        CHECK(err < prev);
        prev = err;
    }
    const auto eta3 = DiffusionCoefficient::affine({0.1, 0.1, 0.1});
    const auto p3 = bubble_problem(eta3, 6);
    CHECK(relative_L2_expansion_error(solve_full(p3).coefficients, 6, 3, p3.exact->value) < 0.2);
}
