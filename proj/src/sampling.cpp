#include "cscolloc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cscolloc/errors.hpp"
#include "cscolloc/random.hpp"

namespace cscolloc {

void compute_column_norms(CompressiveSystem& sys) {
    sys.M = Eigen::VectorXd::Zero(sys.A.cols());
    for (Eigen::Index i = 0; i < sys.A.rows(); ++i) {
        sys.M += sys.A.row(i).transpose().cwiseAbs2();
    }
    sys.M = sys.M.cwiseSqrt();
    sys.eligible.assign(static_cast<std::size_t>(sys.M.size()), true);
    for (Eigen::Index j = 0; j < sys.M.size(); ++j) {
        if (sys.M(j) == 0.0) {
            sys.M(j) = 1.0;
            sys.eligible[static_cast<std::size_t>(j)] = false;
        }
    }
}

Eigen::MatrixXd CompressiveSystem::normalized() const {
    return A * M.cwiseInverse().asDiagonal();
}

SampleDraw draw_indices(std::size_t m, int n, int d, std::uint64_t seed) {
    if (m == 0) {
        throw InvalidArgument("number of collocation samples m must be >= 1");
    }
    const IndexSpace space(n, d);
    SplitMix64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    SampleDraw draw{seed, n, d, {}};
    draw.tau.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        draw.tau.push_back(pick(rng));
    }
    return draw;
}

CompressiveSystem sample_rows(const DiffusionCoefficient& eta, const ScalarField& forcing, int n,
                              int d, SampleDraw draw) {
    if (draw.n != n || draw.d != d) {
        throw InvalidArgument("sample draw was made for a different index space");
    }
    if (eta.dim() != d) {
        throw InvalidArgument("coefficient dimension does not match d");
    }
    const IndexSpace space(n, d);
    const auto m = static_cast<Eigen::Index>(draw.m());
    const auto dofs = static_cast<Eigen::Index>(space.size());
    const double scale = std::sqrt(static_cast<double>(space.size()) / static_cast<double>(m));

    CompressiveSystem sys{RowMatrix(m, dofs), Eigen::VectorXd(m), {}, {}, {}};
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto t = grid_point(draw.label(static_cast<std::size_t>(i)));
        assemble_row(eta, n, t, std::span<double>(sys.A.row(i).data(), space.size()));
        sys.A.row(i) *= scale;
        sys.b(i) = scale * (forcing ? forcing(t) : 0.0);
    }
    sys.draw = std::move(draw);
    return sys;
}

CompressiveSystem build_compressive(const DiffusionCoefficient& eta, const ScalarField& forcing,
                                    int n, int d, SampleDraw draw) {
    CompressiveSystem sys = sample_rows(eta, forcing, n, d, std::move(draw));
    compute_column_norms(sys);
    return sys;
}

CompressiveSystem subsample_system(const CollocationSystem& full, SampleDraw draw) {
    if (draw.n != full.n || draw.d != full.d) {
        throw InvalidArgument("sample draw was made for a different index space");
    }
    const auto m = static_cast<Eigen::Index>(draw.m());
    const Eigen::Index dofs = full.B.cols();
    const double scale = std::sqrt(static_cast<double>(dofs) / static_cast<double>(m));
    CompressiveSystem sys{RowMatrix(m, dofs), Eigen::VectorXd(m), {}, {}, {}};
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto q = static_cast<Eigen::Index>(draw.tau[static_cast<std::size_t>(i)]);
        sys.A.row(i) = scale * full.B.row(q);
        sys.b(i) = scale * full.c(q);
    }
    sys.draw = std::move(draw);
    compute_column_norms(sys);
    return sys;
}

SampleSize default_m_K(std::size_t s, std::size_t N) {
    if (s < 1 || s > N) {
        throw InvalidArgument("sparsity s = " + std::to_string(s) + " must lie in [1, N = " +
                              std::to_string(N) + "]");
    }
    const double m = std::ceil(2.0 * static_cast<double>(s) * std::log(static_cast<double>(N)));
    return {static_cast<std::size_t>(std::max(1.0, m)), s};
}

}  // namespace cscolloc
