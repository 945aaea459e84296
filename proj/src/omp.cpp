#include "cscolloc/omp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cscolloc/errors.hpp"

namespace cscolloc {

Eigen::VectorXd SparseSolution::densify() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ambient_dim));
    for (std::size_t i = 0; i < support.size(); ++i) {
        x(static_cast<Eigen::Index>(support[i])) = values[i];
    }
    return x;
}

LeastSquaresResult least_squares(const Eigen::MatrixXd& a_s, const Eigen::VectorXd& b) {
    if (a_s.rows() != b.size()) {
        throw InvalidArgument("least squares: matrix has " + std::to_string(a_s.rows()) +
                              " rows but right-hand side has " + std::to_string(b.size()));
    }
    if (a_s.cols() == 0) {
        return {Eigen::VectorXd(0), false};
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a_s);
    return {cod.solve(b), cod.rank() < a_s.cols()};
}

SparseSolution omp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::size_t K,
                   const std::vector<bool>& eligible, const OmpOptions& options,
                   OmpTrace* trace) {
    const Eigen::Index m = a.rows();
    const Eigen::Index cols = a.cols();
    if (b.size() != m) {
        throw InvalidArgument("omp: matrix has " + std::to_string(m) +
                              " rows but measurements have length " + std::to_string(b.size()));
    }
    if (!eligible.empty() && eligible.size() != static_cast<std::size_t>(cols)) {
        throw InvalidArgument("omp: eligibility mask length does not match column count");
    }
    auto is_eligible = [&](Eigen::Index j) {
        return eligible.empty() || eligible[static_cast<std::size_t>(j)];
    };
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (is_eligible(j) && std::abs(a.col(j).norm() - 1.0) > 1e-8) {
            throw InvalidArgument("omp: column " + std::to_string(j) +
                                  " is not l2-normalized");
        }
    }

    SparseSolution sol;
    sol.ambient_dim = static_cast<std::size_t>(cols);
    sol.underdetermined = K > static_cast<std::size_t>(m);

    const double b_norm = b.norm();
    if (b_norm == 0.0 || K == 0) {
        return sol;
    }
    const double threshold = options.stop_tol * b_norm;

    std::vector<bool> chosen(static_cast<std::size_t>(cols), false);
    Eigen::VectorXd residual = b;
    Eigen::MatrixXd a_s(m, 0);
    Eigen::VectorXd coeffs;

    for (std::size_t k = 0; k < K; ++k) {
        const Eigen::VectorXd corr = a.transpose() * residual;
        Eigen::Index best = -1;
        double best_abs = -1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!is_eligible(j) || chosen[static_cast<std::size_t>(j)]) {
                continue;
            }
            const double v = std::abs(corr(j));
            if (v > best_abs) {
                best_abs = v;
                best = j;
            }
        }
        if (best < 0 || best_abs < threshold) {
            break;
        }

        chosen[static_cast<std::size_t>(best)] = true;
        sol.support.push_back(static_cast<std::size_t>(best));
        a_s.conservativeResize(Eigen::NoChange, a_s.cols() + 1);
        a_s.col(a_s.cols() - 1) = a.col(best);

        auto ls = least_squares(a_s, b);
        coeffs = std::move(ls.y);
        sol.rank_deficient = sol.rank_deficient || ls.rank_deficient;
        residual = b - a_s * coeffs;
        ++sol.iterations_run;

        if (trace != nullptr) {
            trace->residual_norms.push_back(residual.norm());
            trace->support_correlation.push_back(
                (a_s.transpose() * residual).cwiseAbs().maxCoeff());
            trace->selected_correlation.push_back(best_abs);
        }
    }

    sol.values.assign(coeffs.data(), coeffs.data() + coeffs.size());
    return sol;
}

double best_s_term_error(std::span<const double> x, std::size_t s, int p) {
    if (p != 1 && p != 2) {
        throw InvalidArgument("best s-term error supports p in {1, 2} only");
    }
    if (s >= x.size()) {
        return 0.0;
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(x[i]) > std::abs(x[j]);
    });
    double acc = 0.0;
    for (std::size_t i = s; i < order.size(); ++i) {
        const double v = std::abs(x[order[i]]);
        acc += (p == 1) ? v : v * v;
    }
    return (p == 1) ? acc : std::sqrt(acc);
}

}  // namespace cscolloc
