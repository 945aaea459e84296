#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cscolloc/errors.hpp"
#include "cscolloc/sampling.hpp"

using namespace cscolloc;

namespace {

DiffusionCoefficient affine_eta() { return DiffusionCoefficient::affine({0.25, 0.25}); }

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double sample_forcing(Point z) { return std::exp(z[0]) - z[1] * z[1]; }

}  // namespace

TEST_CASE("singleton sample space") {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const auto draw = draw_indices(17, 1, 2, seed);
        CHECK(draw.m() == 17);
        for (std::size_t i = 0; i < draw.m(); ++i) {
            CHECK(draw.tau[i] == 0);
            CHECK(draw.label(i) == MultiIndex({1, 1}, 1));
        }
    }
    CHECK_THROWS_AS((void)draw_indices(0, 4, 2, 1), InvalidArgument);
}

TEST_CASE("draws are uniform over the grid") {
    const std::size_t m = 100000;
    const auto draw = draw_indices(m, 4, 2, 7);
    std::vector<double> count(16, 0.0);
    for (auto t : draw.tau) {
        REQUIRE(t < 16);
        count[t] += 1;
    }
    const double p = 1.0 / 16;
    const double sigma = std::sqrt(p * (1 - p) / m);
    for (double c : count) {
        CHECK(std::abs(c / m - p) <= 5 * sigma);
    }
}

TEST_CASE("draws are deterministic per seed") {
    CHECK(draw_indices(500, 8, 3, 42).tau == draw_indices(500, 8, 3, 42).tau);
    CHECK(draw_indices(500, 8, 3, 42).tau != draw_indices(500, 8, 3, 43).tau);
    const auto eta = affine_eta();
    const auto a = build_compressive(eta, sample_forcing, 8, 2, draw_indices(30, 8, 2, 5));
    const auto b = build_compressive(eta, sample_forcing, 8, 2, draw_indices(30, 8, 2, 5));
    CHECK(a.A == b.A);
    CHECK(a.b == b.b);
    CHECK(a.M == b.M);
}

TEST_CASE("rows are scaled rows of the full system") {
    const auto eta = affine_eta();
    for (int n : {2, 5, 8}) {
        const auto full = assemble_full(eta, sample_forcing, n, 2);
        const auto draw = draw_indices(13, n, 2, 11);
        const auto sys = build_compressive(eta, sample_forcing, n, 2, draw);
        const double scale = std::sqrt(static_cast<double>(n * n) / 13);
        for (std::size_t i = 0; i < 13; ++i) {
            const auto q = static_cast<Eigen::Index>(draw.tau[i]);
            const auto ii = static_cast<Eigen::Index>(i);
            CHECK((sys.A.row(ii) - scale * full.B.row(q)).cwiseAbs().maxCoeff() < 1e-13);
            CHECK(sys.b(ii) == doctest::Approx(scale * full.c(q)).epsilon(1e-14));
        }
        const auto sub = subsample_system(full, draw);
        CHECK((sub.A - sys.A).cwiseAbs().maxCoeff() < 1e-13);
    }

    const auto one = DiffusionCoefficient::constant(1.0, 2);
    const Eigen::MatrixXd s8 = sine_matrix(8).values;
    const Eigen::MatrixXd ss = kron(s8, s8);
    const auto draw = draw_indices(20, 8, 2, 3);
    const auto sys = build_compressive(one, nullptr, 8, 2, draw);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto q = static_cast<Eigen::Index>(draw.tau[i]);
        CHECK((sys.A.row(static_cast<Eigen::Index>(i)) - std::sqrt(64.0 / 20) * ss.row(q)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("column norms and normalization") {
    const auto sys = build_compressive(affine_eta(), sample_forcing, 6, 2, draw_indices(15, 6, 2, 8));
    const Eigen::MatrixXd an = sys.normalized();
    for (Eigen::Index j = 0; j < an.cols(); ++j) {
        CHECK(sys.M(j) == doctest::Approx(sys.A.col(j).norm()).epsilon(1e-14));
        if (sys.eligible[static_cast<std::size_t>(j)]) {
            CHECK(an.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    // Rows at the centre node kill every column with an even index entry.
    SampleDraw centre{1, 3, 1, {1}};
    auto tiny = build_compressive(DiffusionCoefficient::constant(1.0, 1), nullptr, 3, 1, centre);
    CHECK(tiny.eligible == std::vector<bool>{true, false, true});
    CHECK(tiny.M(1) == 1.0);
}

TEST_CASE("enumerating every node once reproduces B") {
    const auto eta = affine_eta();
    const auto full = assemble_full(eta, sample_forcing, 4, 2);
    SampleDraw draw{0, 4, 2, {}};
    draw.tau.resize(16);
    std::iota(draw.tau.rbegin(), draw.tau.rend(), 0);
    const auto sys = build_compressive(eta, sample_forcing, 4, 2, draw);
    for (Eigen::Index i = 0; i < 16; ++i) {
        CHECK((sys.A.row(i) - full.B.row(15 - i)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("duplicate draws give duplicate rows") {
    SampleDraw draw{0, 8, 2, {19, 19}};
    const auto sys = build_compressive(affine_eta(), sample_forcing, 8, 2, draw);
    CHECK(sys.A.row(0) == sys.A.row(1));
    CHECK(sys.b(0) == sys.b(1));
}

TEST_CASE("default sample sizes") {
    CHECK(default_m_K(2, 1024).m == 28);
    CHECK(default_m_K(4, 1024).m == 56);
    CHECK(default_m_K(8, 1024).m == 111);
    CHECK(default_m_K(16, 1024).m == 222);
    CHECK(default_m_K(32, 1024).m == 444);
    CHECK(default_m_K(64, 1024).m == 888);
    CHECK(default_m_K(8, 1024).K == 8);
    CHECK(default_m_K(1, 1).m == 1);
    CHECK_THROWS_AS((void)default_m_K(0, 16), InvalidArgument);
    CHECK_THROWS_AS((void)default_m_K(17, 16), InvalidArgument);
}

TEST_CASE("sampled Gram matrix is unbiased") {
    const auto eta = affine_eta();
    const auto full = assemble_full(eta, nullptr, 4, 2);
    const Eigen::MatrixXd target = full.B.transpose() * full.B;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(16, 16);
    const int draws = 200;
    for (int k = 1; k <= draws; ++k) {
        const auto sys = build_compressive(eta, nullptr, 4, 2, draw_indices(8, 4, 2, static_cast<std::uint64_t>(k)));
        mean += sys.A.transpose() * sys.A;
    }
    mean /= draws;
    const double rel = (mean - target).norm() / target.norm();
    MESSAGE("relative Frobenius deviation " << rel);
    CHECK(rel < 0.1);
}
