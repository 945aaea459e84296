#include "cscolloc/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cscolloc/errors.hpp"

namespace cscolloc {

namespace {

using std::numbers::pi;

void require_point(const MultiIndex& j, Point z) {
    if (z.size() != j.dim()) {
        throw InvalidArgument("point dimension " + std::to_string(z.size()) +
                              " does not match multi-index dimension " +
                              std::to_string(j.dim()));
    }
}

double basis_scale(const MultiIndex& j) {
    const double d = static_cast<double>(j.dim());
    const double n1 = static_cast<double>(j.order() + 1);
    return std::pow(2.0 / n1, 0.5 * d) / (pi * pi * j.squared_norm());
}

}  // namespace

double sin_pi(double x) noexcept {
    // x - 2 round(x / 2) is exact for |x| < 2^52 and lies in [-1, 1].
    const double r = x - 2.0 * std::nearbyint(0.5 * x);
    if (r == 0.0 || r == 1.0 || r == -1.0) {
        return 0.0;
    }
    return std::sin(pi * r);
}

double cos_pi(double x) noexcept {
    const double r = x - 2.0 * std::nearbyint(0.5 * x);
    if (r == 0.5 || r == -0.5) {
        return 0.0;
    }
    return std::cos(pi * r);
}

IndexSpace::IndexSpace(int n, int d, std::size_t max_dofs) : n_(n), d_(d), size_(1) {
    if (n < 1) {
        throw InvalidArgument("order n must be >= 1, got " + std::to_string(n));
    }
    if (d < 1 || d > 3) {
        throw InvalidArgument("dimension d must be in {1,2,3}, got " + std::to_string(d));
    }
    for (int k = 0; k < d; ++k) {
        if (size_ > max_dofs / static_cast<std::size_t>(n)) {
            throw ResourceLimit("N = n^d exceeds the cap of " + std::to_string(max_dofs) +
                                " degrees of freedom");
        }
        size_ *= static_cast<std::size_t>(n);
    }
    if (size_ > max_dofs) {
        throw ResourceLimit("N = n^d exceeds the cap of " + std::to_string(max_dofs) +
                            " degrees of freedom");
    }
}

MultiIndex::MultiIndex(std::vector<int> entries, int n) : entries_(std::move(entries)), n_(n) {
    if (n < 1) {
        throw InvalidArgument("multi-index order must be >= 1");
    }
    if (entries_.empty()) {
        throw InvalidArgument("multi-index must have at least one entry");
    }
    for (int e : entries_) {
        if (e < 1 || e > n) {
            throw InvalidArgument("multi-index entry " + std::to_string(e) +
                                  " outside [1, " + std::to_string(n) + "]");
        }
    }
}

MultiIndex MultiIndex::from_rank(std::size_t rank, int n, int d) {
    const IndexSpace space(n, d);
    if (rank >= space.size()) {
        throw InvalidArgument("rank " + std::to_string(rank) + " outside [0, " +
                              std::to_string(space.size()) + ")");
    }
    std::vector<int> entries(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 0; --k) {
        entries[static_cast<std::size_t>(k)] = static_cast<int>(rank % static_cast<std::size_t>(n)) + 1;
        rank /= static_cast<std::size_t>(n);
    }
    return MultiIndex(std::move(entries), n);
}

double MultiIndex::squared_norm() const noexcept {
    double s = 0.0;
    for (int e : entries_) {
        s += static_cast<double>(e) * e;
    }
    return s;
}

std::size_t lex_rank(const MultiIndex& j) {
    std::size_t rank = 0;
    const auto n = static_cast<std::size_t>(j.order());
    for (int e : j.entries()) {
        rank = rank * n + static_cast<std::size_t>(e - 1);
    }
    return rank;
}

std::vector<double> grid_point(const MultiIndex& q) {
    std::vector<double> t(q.dim());
    const double n1 = static_cast<double>(q.order() + 1);
    for (std::size_t k = 0; k < q.dim(); ++k) {
        t[k] = static_cast<double>(q[k]) / n1;
    }
    return t;
}

double eval_xi(const MultiIndex& j, Point z) {
    require_point(j, z);
    const double d = static_cast<double>(j.dim());
    double value = std::pow(2.0, 0.5 * d) / (pi * pi * j.squared_norm());
    for (std::size_t k = 0; k < j.dim(); ++k) {
        value *= sin_pi(j[k] * z[k]);
    }
    return value;
}

double eval_psi(const MultiIndex& j, Point z) {
    require_point(j, z);
    double value = basis_scale(j);
    for (std::size_t k = 0; k < j.dim(); ++k) {
        value *= sin_pi(j[k] * z[k]);
    }
    return value;
}

std::vector<double> eval_grad_psi(const MultiIndex& j, Point z) {
    require_point(j, z);
    const std::size_t d = j.dim();
    const double scale = basis_scale(j);
    std::vector<double> grad(d, scale);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
            const double arg = j[l] * z[l];
            grad[k] *= (l == k) ? pi * j[l] * cos_pi(arg) : sin_pi(arg);
        }
    }
    return grad;
}

double eval_laplacian_psi(const MultiIndex& j, Point z) {
    return -pi * pi * j.squared_norm() * eval_psi(j, z);
}

TransformMatrix sine_matrix(int n) {
    if (n < 1) {
        throw InvalidArgument("transform size must be >= 1");
    }
    const double n1 = n + 1.0;
    const double scale = std::sqrt(2.0 / n1);
    Eigen::MatrixXd s(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            s(i - 1, j - 1) = scale * sin_pi(i * j / n1);
        }
    }
    return {TransformKind::Sine, n, std::move(s)};
}

TransformMatrix cosine_matrix(int n) {
    if (n < 1) {
        throw InvalidArgument("transform size must be >= 1");
    }
    const double n1 = n + 1.0;
    const double scale = std::sqrt(2.0 / n1);
    Eigen::MatrixXd c(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            c(i - 1, j - 1) = scale * cos_pi(i * j / n1);
        }
    }
    return {TransformKind::Cosine, n, std::move(c)};
}

TransformMatrix checkerboard(int n) {
    if (n < 1) {
        throw InvalidArgument("transform size must be >= 1");
    }
    Eigen::MatrixXd q(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            q(i - 1, j - 1) = ((i + j) % 2 == 0) ? 1.0 : 0.0;
        }
    }
    return {TransformKind::Checkerboard, n, std::move(q)};
}

}  // namespace cscolloc
