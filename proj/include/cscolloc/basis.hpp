#pragma once

// Sine eigenbasis of the Dirichlet Laplacian on the unit cube, the interior
// collocation grid, and the dense transform matrices built from them.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cscolloc {

using Point = std::span<const double>;

/// sin(pi x) and cos(pi x) with exact argument reduction, so that sin_pi
/// vanishes exactly at integers and cos_pi at half-integers.
[[nodiscard]] double sin_pi(double x) noexcept;
[[nodiscard]] double cos_pi(double x) noexcept;

/// Default cap on N = n^d for dense assembly.
inline constexpr std::size_t kDefaultMaxDofs = std::size_t{1} << 20;

/// The tensor index set [n]^d. Validates n >= 1, 1 <= d <= 3 and N <= cap.
class IndexSpace {
public:
    IndexSpace(int n, int d, std::size_t max_dofs = kDefaultMaxDofs);

    [[nodiscard]] int order() const noexcept { return n_; }
    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

private:
    int n_;
    int d_;
    std::size_t size_;
};

/// Element of [n]^d. Entries are 1-based, as in the basis formulas.
class MultiIndex {
public:
    MultiIndex(std::vector<int> entries, int n);

    /// Inverse of lex_rank.
    static MultiIndex from_rank(std::size_t rank, int n, int d);

    [[nodiscard]] int operator[](std::size_t k) const { return entries_[k]; }
    [[nodiscard]] std::size_t dim() const noexcept { return entries_.size(); }
    [[nodiscard]] int order() const noexcept { return n_; }
    [[nodiscard]] std::span<const int> entries() const noexcept { return entries_; }
    [[nodiscard]] double squared_norm() const noexcept;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> entries_;
    int n_;
};

/// Zero-based lexicographic rank, last coordinate fastest: (1,..,1) -> 0,
/// (n,..,n) -> n^d - 1.
[[nodiscard]] std::size_t lex_rank(const MultiIndex& j);

/// Grid node t_q = q / (n + 1); strictly interior.
[[nodiscard]] std::vector<double> grid_point(const MultiIndex& q);

/// xi_j(z) = 2^{d/2} / (pi^2 |j|^2) * prod_k sin(pi j_k z_k).
[[nodiscard]] double eval_xi(const MultiIndex& j, Point z);

/// psi_j = xi_j / (n+1)^{d/2}.
[[nodiscard]] double eval_psi(const MultiIndex& j, Point z);
[[nodiscard]] std::vector<double> eval_grad_psi(const MultiIndex& j, Point z);
[[nodiscard]] double eval_laplacian_psi(const MultiIndex& j, Point z);

enum class TransformKind { Sine, Cosine, Checkerboard };

struct TransformMatrix {
    TransformKind kind;
    int n;
    Eigen::MatrixXd values;
};

/// (S_n)_{ij} = sqrt(2/(n+1)) sin(pi i j / (n+1)).
[[nodiscard]] TransformMatrix sine_matrix(int n);
/// (C_n)_{ij} = sqrt(2/(n+1)) cos(pi i j / (n+1)).
[[nodiscard]] TransformMatrix cosine_matrix(int n);
/// (Q_n)_{ij} = 1 when i + j is even, else 0.
[[nodiscard]] TransformMatrix checkerboard(int n);

}  // namespace cscolloc
