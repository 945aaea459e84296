#pragma once

// End-to-end solvers: the dense full collocation solve, the compressive
// (randomized collocation + OMP) solve, evaluation of the resulting
// expansions and the error metrics used by the experiments.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cscolloc/omp.hpp"
#include "cscolloc/operator.hpp"
#include "cscolloc/quadrature.hpp"
#include "cscolloc/sampling.hpp"

namespace cscolloc {

struct ProblemSpec {
    DiffusionCoefficient eta;
    ScalarField forcing;
    std::optional<ManufacturedSolution> exact;
    int n = 0;
    int d = 0;
};

enum class SolveMethod { FullDirect, FullOmp, Compressive };

[[nodiscard]] const char* to_string(SolveMethod method) noexcept;

struct SolveReport {
    SolveMethod method = SolveMethod::FullDirect;
    int n = 0;
    int d = 0;
    Eigen::VectorXd coefficients;           ///< dense, always filled
    std::optional<SparseSolution> sparse;   ///< OMP-based methods only
    double assembly_seconds = 0.0;
    double recovery_seconds = 0.0;
    double total_seconds = 0.0;
    std::optional<std::uint64_t> seed;      ///< compressive only
    std::size_t m = 0;
    std::size_t K = 0;
    std::size_t s = 0;
    std::optional<double> condition_estimate;  ///< full direct only
    std::vector<std::size_t> tau;              ///< compressive only
};

/// Dense LU solve of B x = c. Throws NumericalFailure when the estimated
/// 1-norm condition number exceeds `max_condition`.
[[nodiscard]] SolveReport solve_full(const ProblemSpec& problem, double max_condition = 1e12);

/// K iterations of OMP on the column-normalized full matrix.
[[nodiscard]] SolveReport solve_full_omp(const ProblemSpec& problem, std::size_t K);

/// Compressive solve on a given draw: build (A, b), normalize columns, run
/// OMP with K iterations and undo the normalization (x_j = z_j / M_j).
[[nodiscard]] SolveReport solve_compressive_with_draw(const ProblemSpec& problem,
                                                      SampleDraw draw, std::size_t K);

/// Compressive solve with explicit (m, K); the draw is made inside and
/// counted as assembly.
[[nodiscard]] SolveReport solve_compressive(const ProblemSpec& problem, SampleSize sizes,
                                            std::uint64_t seed);

/// Compressive solve with (m, K) = default_m_K(s, N).
[[nodiscard]] SolveReport solve_compressive(const ProblemSpec& problem, std::size_t s,
                                            std::uint64_t seed);

/// sum_j x_j psi_j(z); x is indexed by lex rank.
[[nodiscard]] double evaluate_solution(const Eigen::VectorXd& x, int n, int d, Point z);
/// sum_j x_j lap psi_j(z).
[[nodiscard]] double evaluate_laplacian(const Eigen::VectorXd& x, int n, int d, Point z);

/// Values of the expansion (or of its Laplacian) at every tuple of
/// `axis_nodes`, lex order with the last axis fastest. Exploits the
/// tensor-product structure of the basis.
[[nodiscard]] Eigen::VectorXd expansion_on_grid(const Eigen::VectorXd& x, int n, int d,
                                                const std::vector<double>& axis_nodes,
                                                bool laplacian = false);

/// |x_hat - x_ref|_2 / |x_ref|_2.
[[nodiscard]] double relative_l2_coeff_error(const Eigen::VectorXd& x_hat,
                                             const Eigen::VectorXd& x_ref);

/// Relative L2(Omega) error of two callables by composite Gauss-Legendre.
[[nodiscard]] double relative_L2_function_error(const ScalarField& u_hat,
                                                const ScalarField& u_exact, int d,
                                                int cells = kDefaultQuadratureCells);

/// Same metric with u_hat = sum_j x_j psi_j, using the tensor structure.
[[nodiscard]] double relative_L2_expansion_error(const Eigen::VectorXd& x, int n, int d,
                                                 const ScalarField& u_exact,
                                                 int cells = kDefaultQuadratureCells);

/// |lap(sum_j x_j psi_j)|_{L2(Omega)} by quadrature.
[[nodiscard]] double laplacian_L2_norm(const Eigen::VectorXd& x, int n, int d,
                                       int cells = kDefaultQuadratureCells);

/// Checks -div(eta grad u) == F at random interior points using a centered
/// second-order difference of the flux. Returns the largest deviation scaled
/// by max(1, |F|).
[[nodiscard]] double forcing_consistency_defect(const ProblemSpec& problem,
                                                std::size_t samples, std::uint64_t seed,
                                                double step = 1e-3);

/// Problem with u = (4^d prod_k z_k (1 - z_k))^2, which for d = 2 is
/// (16 z1 z2 (1 - z1)(1 - z2))^2, and F manufactured from it.
[[nodiscard]] ManufacturedSolution polynomial_bubble(int d);
[[nodiscard]] ProblemSpec bubble_problem(DiffusionCoefficient eta, int n);

}  // namespace cscolloc
