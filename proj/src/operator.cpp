#include "cscolloc/operator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "cscolloc/errors.hpp"

namespace cscolloc {

namespace {

using std::numbers::pi;

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Advances a 0-based odometer over [n]^d, last coordinate fastest.
bool next_index(std::span<int> idx, int n) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < n) {
            return true;
        }
        idx[k] = 0;
    }
    return false;
}

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    auto bits = std::bit_cast<U>(value);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) {
        throw InvalidArgument("truncated system dump");
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bits |= static_cast<U>(bytes[i]) << (8 * i);
    }
    return std::bit_cast<T>(bits);
}

}  // namespace

DiffusionCoefficient DiffusionCoefficient::affine(std::vector<double> weights) {
    if (weights.empty() || weights.size() > 3) {
        throw InvalidArgument("affine coefficient needs 1 to 3 weights");
    }
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("affine coefficient weights must be finite and >= 0");
        }
    }
    DiffusionCoefficient eta;
    eta.d_ = static_cast<int>(weights.size());
    eta.eval_ = [w = weights](Point z) {
        double v = 1.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            v += w[k] * z[k];
        }
        return v;
    };
    eta.grad_ = [w = weights](Point) { return w; };
    eta.eta_min_ = 1.0;
    eta.sup_eta_ = 1.0 + std::accumulate(weights.begin(), weights.end(), 0.0);
    eta.sup_grad_ = weights;
    eta.affine_ = std::move(weights);
    return eta;
}

DiffusionCoefficient DiffusionCoefficient::constant(double value, int d) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument("constant coefficient must be finite and > 0");
    }
    if (d < 1 || d > 3) {
        throw InvalidArgument("dimension d must be in {1,2,3}");
    }
    if (value == 1.0) {
        return affine(std::vector<double>(static_cast<std::size_t>(d), 0.0));
    }
    const auto ud = static_cast<std::size_t>(d);
    return custom(
        d, [value](Point) { return value; },
        [ud](Point) { return std::vector<double>(ud, 0.0); }, value, value,
        std::vector<double>(ud, 0.0));
}

DiffusionCoefficient DiffusionCoefficient::custom(int d, ScalarField eval, VectorField grad,
                                                  double eta_min, double sup_eta,
                                                  std::vector<double> sup_grad) {
    if (d < 1 || d > 3) {
        throw InvalidArgument("dimension d must be in {1,2,3}");
    }
    if (!eval || !grad) {
        throw InvalidArgument("coefficient needs both a value and a gradient function");
    }
    if (sup_grad.size() != static_cast<std::size_t>(d)) {
        throw InvalidArgument("sup_grad must have d entries");
    }
    if (!(eta_min > 0.0) || sup_eta < eta_min) {
        throw InvalidArgument("coefficient bounds must satisfy 0 < eta_min <= sup_eta");
    }
    DiffusionCoefficient eta;
    eta.d_ = d;
    eta.eval_ = std::move(eval);
    eta.grad_ = std::move(grad);
    eta.eta_min_ = eta_min;
    eta.sup_eta_ = sup_eta;
    eta.sup_grad_ = std::move(sup_grad);
    return eta;
}

void assemble_row(const DiffusionCoefficient& eta, int n, Point z, std::span<double> row) {
    const auto d = static_cast<std::size_t>(eta.dim());
    if (z.size() != d) {
        throw InvalidArgument("point dimension does not match coefficient dimension");
    }
    const IndexSpace space(n, eta.dim());
    if (row.size() != space.size()) {
        throw InvalidArgument("row buffer must have n^d entries");
    }

    const auto un = static_cast<std::size_t>(n);
    std::vector<double> sines(d * un);
    std::vector<double> cosines(d * un);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < un; ++j) {
            const double arg = static_cast<double>(j + 1) * z[k];
            sines[k * un + j] = sin_pi(arg);
            cosines[k * un + j] = cos_pi(arg);
        }
    }

    const double eta_z = eta(z);
    const std::vector<double> grad_eta = eta.gradient(z);
    const double norm = std::pow(2.0 / (n + 1.0), 0.5 * static_cast<double>(d));

    std::array<int, 3> idx{};
    const std::span<int> odometer(idx.data(), d);
    std::size_t col = 0;
    do {
        double sinprod = 1.0;
        double jnorm2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const auto jk = static_cast<std::size_t>(idx[k]);
            sinprod *= sines[k * un + jk];
            jnorm2 += static_cast<double>((jk + 1) * (jk + 1));
        }
        double gradient_part = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            if (grad_eta[k] == 0.0) {
                continue;
            }
            const auto jk = static_cast<std::size_t>(idx[k]);
            double partial = static_cast<double>(jk + 1) * cosines[k * un + jk];
            for (std::size_t l = 0; l < d; ++l) {
                if (l != k) {
                    partial *= sines[l * un + static_cast<std::size_t>(idx[l])];
                }
            }
            gradient_part += grad_eta[k] * partial;
        }
        row[col++] = norm * (eta_z * sinprod - gradient_part / (pi * jnorm2));
    } while (next_index(odometer, n));
}

CollocationSystem assemble_full(const DiffusionCoefficient& eta, const ScalarField& forcing, int n,
                                int d, std::size_t max_dofs) {
    if (eta.dim() != d) {
        throw InvalidArgument("coefficient dimension does not match d");
    }
    const IndexSpace space(n, d, max_dofs);
    const auto dofs = static_cast<Eigen::Index>(space.size());
    CollocationSystem system{RowMatrix(dofs, dofs), Eigen::VectorXd(dofs), n, d};
    for (Eigen::Index q = 0; q < dofs; ++q) {
        const auto t = grid_point(MultiIndex::from_rank(static_cast<std::size_t>(q), n, d));
        assemble_row(eta, n, t, std::span<double>(system.B.row(q).data(), space.size()));
        system.c(q) = forcing ? forcing(t) : 0.0;
    }
    return system;
}

RowMatrix assemble_structured(const DiffusionCoefficient& eta, int n, int d,
                              std::size_t max_dofs) {
    if (eta.dim() != d) {
        throw InvalidArgument("coefficient dimension does not match d");
    }
    const IndexSpace space(n, d, max_dofs);
    const auto dofs = static_cast<Eigen::Index>(space.size());

    const Eigen::MatrixXd sine = sine_matrix(n).values;
    Eigen::VectorXd freq(n);
    for (int j = 0; j < n; ++j) {
        freq(j) = pi * (j + 1);
    }
    const Eigen::MatrixXd cosine_freq = cosine_matrix(n).values * freq.asDiagonal();

    Eigen::VectorXd d0(dofs);
    Eigen::MatrixXd dk(dofs, d);
    Eigen::VectorXd inv_eigen(dofs);
    for (Eigen::Index q = 0; q < dofs; ++q) {
        const auto index = MultiIndex::from_rank(static_cast<std::size_t>(q), n, d);
        const auto t = grid_point(index);
        d0(q) = eta(t);
        const auto g = eta.gradient(t);
        for (int k = 0; k < d; ++k) {
            dk(q, k) = g[static_cast<std::size_t>(k)];
        }
        // Row and column sets coincide, so J's diagonal is indexed the same way.
        inv_eigen(q) = 1.0 / (pi * pi * index.squared_norm());
    }

    auto kron_chain = [&](int special, const Eigen::MatrixXd& factor) {
        Eigen::MatrixXd acc = (special == 0) ? factor : sine;
        for (int k = 1; k < d; ++k) {
            acc = kron(acc, (k == special) ? factor : sine);
        }
        return acc;
    };

    Eigen::MatrixXd result = d0.asDiagonal() * kron_chain(-1, sine);
    for (int k = 0; k < d; ++k) {
        if (dk.col(k).isZero(0.0)) {
            continue;
        }
        result -= dk.col(k).asDiagonal() * kron_chain(k, cosine_freq) * inv_eigen.asDiagonal();
    }
    return RowMatrix(result);
}

SpectralBounds spectral_bounds(const DiffusionCoefficient& eta) {
    const auto& sg = eta.sup_grad();
    const double grad_sum = std::accumulate(sg.begin(), sg.end(), 0.0,
                                            [](double a, double b) { return a + std::abs(b); });
    const double emin = eta.eta_min();
    const double sup = eta.sup_eta();
    SpectralBounds bounds;
    bounds.r = emin * emin - (2.0 / pi) * sup * grad_sum;
    const double root = sup + grad_sum / pi;
    bounds.R = root * root;
    bounds.admissible = emin > 0.0 && sup * grad_sum < 0.5 * pi * emin * emin;
    return bounds;
}

CoherenceReport coherence_bound(const CollocationSystem& system, const SpectralBounds& bounds) {
    const Eigen::Index dofs = system.B.rows();
    CoherenceReport report;
    const double nu = std::pow(2.0, system.d) * bounds.R / static_cast<double>(dofs);
    report.nu = Eigen::VectorXd::Constant(dofs, nu);
    report.local_coherence = system.B.array().square().rowwise().maxCoeff();
    report.holds = (report.local_coherence.array() <= report.nu.array()).all();
    return report;
}

ScalarField forcing_from_manufactured(const ManufacturedSolution& u,
                                      const DiffusionCoefficient& eta) {
    if (!u.gradient || !u.laplacian) {
        throw InvalidArgument("manufactured solution needs gradient and laplacian");
    }
    return [u, eta](Point z) {
        const auto grad_u = u.gradient(z);
        const auto grad_eta = eta.gradient(z);
        double dot = 0.0;
        for (std::size_t k = 0; k < grad_u.size(); ++k) {
            dot += grad_eta[k] * grad_u[k];
        }
        return -eta(z) * u.laplacian(z) - dot;
    };
}

ScalarField forcing_from_expansion(const DiffusionCoefficient& eta, int n,
                                   std::vector<std::size_t> ranks, std::vector<double> values) {
    if (ranks.size() != values.size()) {
        throw InvalidArgument("expansion ranks and values differ in length");
    }
    const int d = eta.dim();
    std::vector<MultiIndex> indices;
    indices.reserve(ranks.size());
    for (std::size_t rank : ranks) {
        indices.push_back(MultiIndex::from_rank(rank, n, d));
    }
    return [eta, indices = std::move(indices), values = std::move(values)](Point z) {
        const double eta_z = eta(z);
        const auto grad_eta = eta.gradient(z);
        double sum = 0.0;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const auto grad_psi = eval_grad_psi(indices[i], z);
            double dot = 0.0;
            for (std::size_t k = 0; k < grad_psi.size(); ++k) {
                dot += grad_eta[k] * grad_psi[k];
            }
            sum += values[i] * (-eta_z * eval_laplacian_psi(indices[i], z) - dot);
        }
        return sum;
    };
}

void write_system(std::ostream& out, const CollocationSystem& system) {
    out.write("CSCB", 4);
    put_le(out, kSystemDumpVersion);
    put_le(out, static_cast<std::uint32_t>(system.n));
    put_le(out, static_cast<std::uint32_t>(system.d));
    for (Eigen::Index i = 0; i < system.B.rows(); ++i) {
        for (Eigen::Index j = 0; j < system.B.cols(); ++j) {
            put_le(out, system.B(i, j));
        }
    }
    for (Eigen::Index i = 0; i < system.c.size(); ++i) {
        put_le(out, system.c(i));
    }
    if (!out) {
        throw InvalidArgument("failed to write system dump");
    }
}

CollocationSystem read_system(std::istream& in, std::size_t max_dofs) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), "CSCB", 4) != 0) {
        throw InvalidArgument("not a CSCB system dump");
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kSystemDumpVersion) {
        throw InvalidArgument("unsupported system dump version " + std::to_string(version));
    }
    const auto n = static_cast<int>(get_le<std::uint32_t>(in));
    const auto d = static_cast<int>(get_le<std::uint32_t>(in));
    const IndexSpace space(n, d, max_dofs);
    const auto dofs = static_cast<Eigen::Index>(space.size());
    CollocationSystem system{RowMatrix(dofs, dofs), Eigen::VectorXd(dofs), n, d};
    for (Eigen::Index i = 0; i < dofs; ++i) {
        for (Eigen::Index j = 0; j < dofs; ++j) {
            system.B(i, j) = get_le<double>(in);
        }
    }
    for (Eigen::Index i = 0; i < dofs; ++i) {
        system.c(i) = get_le<double>(in);
    }
    return system;
}

}  // namespace cscolloc
