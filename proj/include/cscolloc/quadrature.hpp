#pragma once

#include <vector>

#include "cscolloc/operator.hpp"

namespace cscolloc {

/// Composite 5-point Gauss-Legendre rule on [0,1] split into equal cells.
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kDefaultQuadratureCells = 64;

[[nodiscard]] AxisRule composite_gauss_legendre(int cells = kDefaultQuadratureCells);

/// Tensor-product integral of f over (0,1)^d.
[[nodiscard]] double integrate(const ScalarField& f, int d, int cells = kDefaultQuadratureCells);

}  // namespace cscolloc
