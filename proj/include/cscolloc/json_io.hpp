#pragma once

#include <json.hpp>

#include "cscolloc/experiment.hpp"
#include "cscolloc/rip.hpp"
#include "cscolloc/solver.hpp"

namespace cscolloc {

/// Report fields; coefficients are stored sparse (OMP methods) or dense.
[[nodiscard]] nlohmann::json to_json(const SolveReport& report, bool include_coefficients = true);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);
[[nodiscard]] nlohmann::json to_json(const BoxStats& stats);
[[nodiscard]] nlohmann::json to_json(const Summary& summary);
[[nodiscard]] nlohmann::json to_json(const RipReport& report);

}  // namespace cscolloc
