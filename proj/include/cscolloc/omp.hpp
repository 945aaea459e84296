#pragma once

// Orthogonal Matching Pursuit with exact least-squares updates, and the
// best s-term approximation error.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cscolloc {

struct SparseSolution {
    std::vector<std::size_t> support;  ///< in selection order, no duplicates
    std::vector<double> values;        ///< aligned with support
    std::size_t ambient_dim = 0;
    std::size_t iterations_run = 0;
    bool underdetermined = false;  ///< K > m was requested
    bool rank_deficient = false;   ///< some least-squares subproblem lost rank

    [[nodiscard]] Eigen::VectorXd densify() const;
};

struct OmpOptions {
    /// Stop once max_j |(A^T r)_j| < stop_tol * |b|_2.
    double stop_tol = 1e-12;
};

/// Per-iteration diagnostics, filled when requested.
struct OmpTrace {
    std::vector<double> residual_norms;        ///< |A x_k - b|_2 after iteration k
    std::vector<double> support_correlation;   ///< max over S_k of |(A^T r_k)_j|
    std::vector<double> selected_correlation;  ///< |(A^T r_{k-1})_{j_k}|
};

struct LeastSquaresResult {
    Eigen::VectorXd y;
    bool rank_deficient = false;
};

/// argmin_y |A_S y - b|_2 by complete orthogonal decomposition; returns the
/// minimum-norm minimizer when A_S is rank deficient.
[[nodiscard]] LeastSquaresResult least_squares(const Eigen::MatrixXd& a_s,
                                               const Eigen::VectorXd& b);

/// K iterations of OMP on a matrix with unit-norm columns. Columns whose
/// `eligible` flag is false are never selected and are exempt from the
/// unit-norm check; an empty mask means every column is eligible.
/// Argmax ties go to the lowest column index.
[[nodiscard]] SparseSolution omp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 std::size_t K, const std::vector<bool>& eligible = {},
                                 const OmpOptions& options = {}, OmpTrace* trace = nullptr);

/// sigma_s(x)_p for p in {1, 2}: l^p norm of x after removing its s largest
/// entries in magnitude (lower index wins ties).
[[nodiscard]] double best_s_term_error(std::span<const double> x, std::size_t s, int p);

}  // namespace cscolloc
