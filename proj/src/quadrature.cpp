#include "cscolloc/quadrature.hpp"

#include <array>
#include <cmath>

#include "cscolloc/errors.hpp"

namespace cscolloc {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes = {
    -0.9061798459386639927976269,
    -0.5384693101056830910363144,
    0.0,
    0.5384693101056830910363144,
    0.9061798459386639927976269,
};
constexpr std::array<double, 5> kWeights = {
    0.2369268850561890875142640,
    0.4786286704993664680412915,
    0.5688888888888888888888889,
    0.4786286704993664680412915,
    0.2369268850561890875142640,
};

}  // namespace

AxisRule composite_gauss_legendre(int cells) {
    if (cells < 1) {
        throw InvalidArgument("quadrature needs at least one cell per axis");
    }
    AxisRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(cells) * kNodes.size());
    rule.weights.reserve(rule.nodes.capacity());
    const double h = 1.0 / cells;
    for (int c = 0; c < cells; ++c) {
        const double mid = (c + 0.5) * h;
        for (std::size_t i = 0; i < kNodes.size(); ++i) {
            rule.nodes.push_back(mid + 0.5 * h * kNodes[i]);
            rule.weights.push_back(0.5 * h * kWeights[i]);
        }
    }
    return rule;
}

double integrate(const ScalarField& f, int d, int cells) {
    if (d < 1 || d > 3) {
        throw InvalidArgument("quadrature dimension must be in {1,2,3}");
    }
    const AxisRule rule = composite_gauss_legendre(cells);
    const std::size_t p = rule.nodes.size();
    const auto ud = static_cast<std::size_t>(d);
    std::vector<std::size_t> idx(ud, 0);
    std::vector<double> z(ud);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t k = 0; k < ud; ++k) {
            z[k] = rule.nodes[idx[k]];
            w *= rule.weights[idx[k]];
        }
        total += w * f(z);
        std::size_t k = ud;
        while (k-- > 0) {
            if (++idx[k] < p) {
                break;
            }
            idx[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1)) {
            break;
        }
    }
    return total;
}

}  // namespace cscolloc
