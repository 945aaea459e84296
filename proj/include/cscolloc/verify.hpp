#pragma once

#include <string>
#include <vector>

#include "cscolloc/operator.hpp"

namespace cscolloc {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured quantity (max deviation, worst ratio, ...)
    double threshold = 0.0;  ///< bound it was compared against
    std::string detail;
};

/// Matrix-property suite on d = 2 instances: transform identities up to
/// `max_transform_n`, Kronecker/orthogonality identities for eta == 1,
/// spectrum containment, coherence bound and agreement of the two assembly
/// paths for `eta`, each for every n in `orders`.
[[nodiscard]] std::vector<CheckResult> verify_matrix_properties(const DiffusionCoefficient& eta,
                                                                const std::vector<int>& orders,
                                                                int max_transform_n = 64);

}  // namespace cscolloc
