#pragma once

// Brute-force restricted isometry constants for small matrices and an
// empirical check of the RIP behaviour of the compressive collocation matrix.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cscolloc/operator.hpp"

namespace cscolloc {

inline constexpr std::uint64_t kDefaultSupportCap = 200000;

struct RipReport {
    std::size_t s = 0;
    double delta_s = 0.0;                    ///< raw deviation, may exceed 1
    std::vector<std::size_t> worst_support;  ///< lexicographically smallest maximizer
    std::uint64_t enumerated_supports = 0;

    /// The formal definition needs delta < 1.
    [[nodiscard]] bool is_rip() const noexcept { return delta_s < 1.0; }
};

/// Number of s-subsets of an N-set, saturating at UINT64_MAX.
[[nodiscard]] std::uint64_t binomial(std::uint64_t N, std::uint64_t s);

/// delta_s(A) = max over |S| = s of max(lambda_max(A_S^T A_S) - 1, 1 - lambda_min(A_S^T A_S)).
/// Supports of smaller size never give a larger deviation (eigenvalue interlacing),
/// so only cardinality s is enumerated.
[[nodiscard]] RipReport rip_constant(const Eigen::MatrixXd& a, std::size_t s,
                                     std::uint64_t support_cap = kDefaultSupportCap);

struct RipTrialSummary {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::vector<double> deltas;  ///< delta_s(A / sqrt(R)) per trial

    [[nodiscard]] double success_rate() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

/// Draws `trials` compressive matrices with m rows (trial t uses seed + t),
/// computes delta_s(A / sqrt(R)) and counts how often it is <= delta_target.
[[nodiscard]] RipTrialSummary verify_rip_theorem(const DiffusionCoefficient& eta, int n,
                                                 std::size_t s, std::size_t m,
                                                 double delta_target, std::size_t trials,
                                                 std::uint64_t seed,
                                                 std::uint64_t support_cap = kDefaultSupportCap);

}  // namespace cscolloc
