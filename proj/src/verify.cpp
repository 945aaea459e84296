#include "cscolloc/verify.hpp"

#include <algorithm>
#include <cstdio>

#include "cscolloc/errors.hpp"

namespace cscolloc {

namespace {

std::string interval_detail(double lo, double hi, const SpectralBounds& bounds) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "lambda in [%.6f, %.6f], r = %.6f, R = %.6f", lo, hi,
                  bounds.r, bounds.R);
    return buf;
}

CheckResult bounded(std::string name, double value, double threshold, std::string detail = {}) {
    return {std::move(name), value < threshold, value, threshold, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> verify_matrix_properties(const DiffusionCoefficient& eta,
                                                  const std::vector<int>& orders,
                                                  int max_transform_n) {
    if (eta.dim() != 2) {
        throw InvalidArgument("the verification suite runs on d = 2 coefficients");
    }
    std::vector<CheckResult> checks;

    double sine_dev = 0.0;
    double cosine_dev = 0.0;
    double psd_min = 0.0;
    for (int n = 1; n <= max_transform_n; ++n) {
        const Eigen::MatrixXd s = sine_matrix(n).values;
        const Eigen::MatrixXd c = cosine_matrix(n).values;
        const Eigen::MatrixXd q = checkerboard(n).values;
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        sine_dev = std::max(sine_dev, (s.transpose() * s - id).cwiseAbs().maxCoeff());
        cosine_dev = std::max(cosine_dev,
                              (c.transpose() * c - (id - (2.0 / (n + 1.0)) * q)).cwiseAbs().maxCoeff());
        if (n <= 32) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
            psd_min = std::min(psd_min, eig.eigenvalues().minCoeff());
        }
    }
    checks.push_back(bounded("sine transform orthogonality", sine_dev, 1e-12,
                             "max |S^T S - I| over n <= " + std::to_string(max_transform_n)));
    checks.push_back(bounded("cosine transform identity", cosine_dev, 1e-12,
                             "max |C^T C - (I - 2/(n+1) Q)| over n <= " + std::to_string(max_transform_n)));
    checks.push_back({"checkerboard positive semidefinite", psd_min >= -1e-10, psd_min, -1e-10,
                      "min eigenvalue of Q_n, n <= 32"});

    const DiffusionCoefficient poisson = DiffusionCoefficient::constant(1.0, 2);
    const SpectralBounds bounds = spectral_bounds(eta);
    for (int n : orders) {
        const std::string tag = " (n = " + std::to_string(n) + ")";
        const auto system = assemble_full(poisson, nullptr, n, 2);
        const Eigen::MatrixXd s = sine_matrix(n).values;
        Eigen::MatrixXd kron(n * n, n * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                kron.block(i * n, j * n, n, n) = s(i, j) * s;
            }
        }
        const Eigen::MatrixXd b = system.B;
        checks.push_back(bounded("Poisson matrix equals S (x) S" + tag,
                                 (b - kron).cwiseAbs().maxCoeff(), 1e-12));
        checks.push_back(bounded("Poisson matrix orthogonal" + tag,
                                 (b.transpose() * b - Eigen::MatrixXd::Identity(n * n, n * n)).cwiseAbs().maxCoeff(),
                                 1e-10));

        const auto general = assemble_full(eta, nullptr, n, 2);
        const Eigen::MatrixXd g = general.B;
        if (bounds.admissible) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.transpose() * g, Eigen::EigenvaluesOnly);
            const double lo = eig.eigenvalues().minCoeff();
            const double hi = eig.eigenvalues().maxCoeff();
            const bool inside = lo >= bounds.r - 1e-8 && hi <= bounds.R + 1e-8;
            checks.push_back({"spectrum of B^T B inside [r, R]" + tag, inside, lo, bounds.r,
                              interval_detail(lo, hi, bounds)});
        } else {
            checks.push_back({"spectrum of B^T B inside [r, R]" + tag, false, 0.0, 0.0,
                              "coefficient is not admissible"});
        }
        const auto coherence = coherence_bound(general, bounds);
        const double ratio = (coherence.local_coherence.array() / coherence.nu.array()).maxCoeff();
        checks.push_back({"local coherence below 2^d R / N" + tag, coherence.holds, ratio, 1.0,
                          "max_q max_j B_qj^2 / nu_q"});
        if (n <= 16) {
            const RowMatrix structured = assemble_structured(eta, n, 2);
            checks.push_back(bounded("Kronecker assembly matches direct assembly" + tag,
                                     (structured - general.B).cwiseAbs().maxCoeff(), 1e-10));
        }
    }
    return checks;
}

}  // namespace cscolloc
