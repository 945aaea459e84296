#include "cscolloc/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cscolloc/errors.hpp"
#include "cscolloc/sampling.hpp"

namespace cscolloc {

std::uint64_t binomial(std::uint64_t N, std::uint64_t s) {
    if (s > N) {
        return 0;
    }
    s = std::min(s, N - s);
    __extension__ using Wide = unsigned __int128;
    Wide result = 1;
    for (std::uint64_t i = 1; i <= s; ++i) {
        // Every prefix product result * (N - s + i) / i is an exact binomial.
        result = result * (N - s + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(result);
}

RipReport rip_constant(const Eigen::MatrixXd& a, std::size_t s, std::uint64_t support_cap) {
    const auto N = static_cast<std::size_t>(a.cols());
    if (s == 0 || s > N) {
        throw InvalidArgument("RIP order s must satisfy 1 <= s <= N = " + std::to_string(N));
    }
    const std::uint64_t count = binomial(N, s);
    if (count > support_cap) {
        throw ResourceLimit("C(" + std::to_string(N) + ", " + std::to_string(s) + ") = " +
                            std::to_string(count) + " supports exceeds the cap of " +
                            std::to_string(support_cap) + "; use a smaller N or s");
    }

    const Eigen::MatrixXd gram = a.transpose() * a;
    RipReport report;
    report.s = s;
    report.delta_s = -1.0;

    std::vector<std::size_t> support(s);
    std::iota(support.begin(), support.end(), std::size_t{0});
    Eigen::MatrixXd block(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    while (true) {
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    gram(static_cast<Eigen::Index>(support[i]), static_cast<Eigen::Index>(support[j]));
            }
        }
        eig.compute(block, Eigen::EigenvaluesOnly);
        const auto& lambda = eig.eigenvalues();
        const double deviation = std::max(lambda(lambda.size() - 1) - 1.0, 1.0 - lambda(0));
        ++report.enumerated_supports;
        if (deviation > report.delta_s) {
            report.delta_s = deviation;
            report.worst_support = support;
        }

        // Next s-subset in lexicographic order.
        std::size_t i = s;
        while (i-- > 0) {
            if (support[i] < N - s + i) {
                break;
            }
        }
        if (i == static_cast<std::size_t>(-1)) {
            break;
        }
        ++support[i];
        for (std::size_t k = i + 1; k < s; ++k) {
            support[k] = support[k - 1] + 1;
        }
    }
    report.delta_s = std::max(report.delta_s, 0.0);
    return report;
}

RipTrialSummary verify_rip_theorem(const DiffusionCoefficient& eta, int n, std::size_t s,
                                   std::size_t m, double delta_target, std::size_t trials,
                                   std::uint64_t seed, std::uint64_t support_cap) {
    const int d = eta.dim();
    const IndexSpace space(n, d);
    if (binomial(space.size(), s) > support_cap) {
        throw ResourceLimit("support enumeration for the requested (N, s) exceeds the cap");
    }
    const double sqrt_R = std::sqrt(spectral_bounds(eta).R);
    RipTrialSummary summary;
    summary.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const CompressiveSystem sys = build_compressive(eta, nullptr, n, d, draw_indices(m, n, d, seed + t));
        const RipReport rip = rip_constant(Eigen::MatrixXd(sys.A / sqrt_R), s, support_cap);
        summary.deltas.push_back(rip.delta_s);
        if (rip.delta_s <= delta_target) {
            ++summary.successes;
        }
    }
    return summary;
}

}  // namespace cscolloc
