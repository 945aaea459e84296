#pragma once

// Randomized collocation: i.i.d. uniform row draws over [n]^d and the scaled
// compressive system A = sqrt(N/m) B_tau, b = sqrt(N/m) c_tau.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cscolloc/operator.hpp"

namespace cscolloc {

struct SampleDraw {
    std::uint64_t seed = 0;
    int n = 0;
    int d = 0;
    std::vector<std::size_t> tau;  ///< lex ranks of the sampled nodes, repeats allowed

    [[nodiscard]] std::size_t m() const noexcept { return tau.size(); }
    [[nodiscard]] MultiIndex label(std::size_t i) const { return MultiIndex::from_rank(tau.at(i), n, d); }
};

struct CompressiveSystem {
    RowMatrix A;
    Eigen::VectorXd b;
    /// Column norms of A; zero-norm columns get 1 and are marked ineligible.
    Eigen::VectorXd M;
    std::vector<bool> eligible;
    SampleDraw draw;

    /// A diag(M)^{-1}.
    [[nodiscard]] Eigen::MatrixXd normalized() const;
};

struct SampleSize {
    std::size_t m = 0;
    std::size_t K = 0;
};

/// m labels drawn i.i.d. uniformly from [n]^d with SplitMix64(seed).
[[nodiscard]] SampleDraw draw_indices(std::size_t m, int n, int d, std::uint64_t seed);

/// Scaled rows (A, b) only; M and eligibility are left empty.
[[nodiscard]] CompressiveSystem sample_rows(const DiffusionCoefficient& eta,
                                            const ScalarField& forcing, int n, int d,
                                            SampleDraw draw);

/// Fills M and the eligibility mask from A.
void compute_column_norms(CompressiveSystem& system);

/// sample_rows followed by compute_column_norms. Rows come straight from the
/// entry formula; B is never formed.
[[nodiscard]] CompressiveSystem build_compressive(const DiffusionCoefficient& eta,
                                                  const ScalarField& forcing, int n, int d,
                                                  SampleDraw draw);

/// Same scaling applied to the rows of an already assembled full system.
[[nodiscard]] CompressiveSystem subsample_system(const CollocationSystem& full, SampleDraw draw);

/// m = ceil(2 s ln N), K = s.
[[nodiscard]] SampleSize default_m_K(std::size_t s, std::size_t N);

}  // namespace cscolloc
