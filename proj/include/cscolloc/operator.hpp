#pragma once

// Collocation discretization of -div(eta grad u) = F in the sine basis:
// full matrix assembly, the Kronecker-structured cross-check, the spectral
// bounds r <= lambda(B^T B) <= R and the local coherence bound.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cscolloc/basis.hpp"

namespace cscolloc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ScalarField = std::function<double(Point)>;
using VectorField = std::function<std::vector<double>(Point)>;

/// Diffusion coefficient eta with its gradient and sup-norm bounds.
///
/// For general coefficients the bounds are supplied (and certified) by the
/// caller. The affine family eta(z) = 1 + w^T z, w >= 0, carries its weights
/// and gets exact bounds.
class DiffusionCoefficient {
public:
    static DiffusionCoefficient affine(std::vector<double> weights);
    static DiffusionCoefficient constant(double value, int d);
    static DiffusionCoefficient custom(int d, ScalarField eval, VectorField grad, double eta_min,
                                       double sup_eta, std::vector<double> sup_grad);

    [[nodiscard]] double operator()(Point z) const { return eval_(z); }
    [[nodiscard]] std::vector<double> gradient(Point z) const { return grad_(z); }

    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] double eta_min() const noexcept { return eta_min_; }
    [[nodiscard]] double sup_eta() const noexcept { return sup_eta_; }
    [[nodiscard]] const std::vector<double>& sup_grad() const noexcept { return sup_grad_; }
    /// Weights w when the coefficient is 1 + w^T z, otherwise empty.
    [[nodiscard]] const std::optional<std::vector<double>>& affine_weights() const noexcept {
        return affine_;
    }

private:
    DiffusionCoefficient() = default;

    int d_ = 0;
    ScalarField eval_;
    VectorField grad_;
    double eta_min_ = 0.0;
    double sup_eta_ = 0.0;
    std::vector<double> sup_grad_;
    std::optional<std::vector<double>> affine_;
};

/// Dense full system B x = c. Rows are indexed by lex_rank(q), columns by
/// lex_rank(j).
struct CollocationSystem {
    RowMatrix B;
    Eigen::VectorXd c;
    int n = 0;
    int d = 0;
};

struct SpectralBounds {
    double r = 0.0;
    double R = 0.0;
    bool admissible = false;
};

struct CoherenceReport {
    Eigen::VectorXd nu;               ///< nu_q = 2^d R / N
    Eigen::VectorXd local_coherence;  ///< max_j B_qj^2
    bool holds = false;
};

/// Exact u with analytic derivatives, used to manufacture a forcing term.
struct ManufacturedSolution {
    ScalarField value;
    VectorField gradient;
    ScalarField laplacian;
};

/// Entry [-div(eta grad psi_j)](z) for every j in [n]^d, written in lex order.
/// `row` must have n^d entries.
void assemble_row(const DiffusionCoefficient& eta, int n, Point z, std::span<double> row);

/// Full collocation system with B_qj = -eta(t_q) lap psi_j(t_q) - grad eta(t_q) . grad psi_j(t_q)
/// and c_q = F(t_q).
[[nodiscard]] CollocationSystem assemble_full(const DiffusionCoefficient& eta,
                                              const ScalarField& forcing, int n, int d,
                                              std::size_t max_dofs = kDefaultMaxDofs);

/// Same matrix built from Kronecker factors:
///   D0 (S x ... x S) - sum_k D_k (S x .. x (C E) x .. x S) J
/// with D0 = diag(eta(t_q)), D_k = diag(d_k eta(t_q)), E = diag(pi j),
/// J = diag(1 / (pi^2 |j|^2)).
[[nodiscard]] RowMatrix assemble_structured(const DiffusionCoefficient& eta, int n, int d,
                                            std::size_t max_dofs = kDefaultMaxDofs);

/// r = eta_min^2 - (2/pi) |eta|_inf sum_k |d_k eta|_inf,
/// R = (|eta|_inf + (1/pi) sum_k |d_k eta|_inf)^2.
[[nodiscard]] SpectralBounds spectral_bounds(const DiffusionCoefficient& eta);

[[nodiscard]] CoherenceReport coherence_bound(const CollocationSystem& system,
                                              const SpectralBounds& bounds);

/// F = -eta lap u - grad eta . grad u.
[[nodiscard]] ScalarField forcing_from_manufactured(const ManufacturedSolution& u,
                                                    const DiffusionCoefficient& eta);

/// Forcing whose exact solution is sum_j x_j psi_j, evaluated pointwise.
/// `ranks` are lex ranks into [n]^d.
[[nodiscard]] ScalarField forcing_from_expansion(const DiffusionCoefficient& eta, int n,
                                                 std::vector<std::size_t> ranks,
                                                 std::vector<double> values);

/// Binary layout, little-endian:
///   "CSCB" | version u32 | n u32 | d u32 | B row-major f64[N*N] | c f64[N]
inline constexpr std::uint32_t kSystemDumpVersion = 1;
void write_system(std::ostream& out, const CollocationSystem& system);
[[nodiscard]] CollocationSystem read_system(std::istream& in,
                                            std::size_t max_dofs = kDefaultMaxDofs);

}  // namespace cscolloc
