#include "cscolloc/json_io.hpp"

namespace cscolloc {

nlohmann::json to_json(const SolveReport& report, bool include_coefficients) {
    nlohmann::json j;
    j["method"] = to_string(report.method);
    j["n"] = report.n;
    j["d"] = report.d;
    j["assembly_seconds"] = report.assembly_seconds;
    j["recovery_seconds"] = report.recovery_seconds;
    j["total_seconds"] = report.total_seconds;
    if (report.method != SolveMethod::FullDirect) {
        j["K"] = report.K;
    }
    if (report.method == SolveMethod::Compressive) {
        j["seed"] = report.seed.value_or(0);
        j["m"] = report.m;
        j["s"] = report.s;
        j["tau"] = report.tau;
    }
    if (report.condition_estimate) {
        j["condition_estimate"] = *report.condition_estimate;
    }
    if (report.sparse) {
        j["iterations_run"] = report.sparse->iterations_run;
        j["underdetermined"] = report.sparse->underdetermined;
        j["rank_deficient"] = report.sparse->rank_deficient;
    }
    if (include_coefficients) {
        if (report.sparse) {
            j["coefficients"] = {{"format", "sparse"},
                                 {"dimension", report.sparse->ambient_dim},
                                 {"support", report.sparse->support},
                                 {"values", report.sparse->values}};
        } else {
            const auto& x = report.coefficients;
            j["coefficients"] = {{"format", "dense"},
                                 {"dimension", x.size()},
                                 {"values", std::vector<double>(x.data(), x.data() + x.size())}};
        }
    }
    return j;
}

nlohmann::json to_json(const ExperimentConfig& config) {
    return {{"experiment", to_string(config.kind)},
            {"n", config.n},
            {"d", config.d},
            {"sparsity", config.sparsity},
            {"trials", config.trials},
            {"seed", config.seed_base},
            {"eta_affine", config.eta_affine},
            {"full_recovery", to_string(config.full_recovery)},
            {"compressive", config.compressive},
            {"warmup", config.warmup}};
}

nlohmann::json to_json(const BoxStats& st) {
    return {{"count", st.count}, {"min", st.min},       {"q1", st.q1},  {"median", st.median},
            {"q3", st.q3},       {"max", st.max},       {"mean", st.mean}};
}

nlohmann::json to_json(const Summary& summary) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : summary.groups) {
        groups.push_back({{"method", to_string(g.method)},
                          {"s", g.s},
                          {"error", to_json(g.error)},
                          {"assembly_seconds", to_json(g.assembly_seconds)},
                          {"recovery_seconds", to_json(g.recovery_seconds)}});
    }
    return {{"groups", groups}, {"warnings", summary.warnings}};
}

nlohmann::json to_json(const RipReport& report) {
    return {{"s", report.s},
            {"delta_s", report.delta_s},
            {"is_rip", report.is_rip()},
            {"worst_support", report.worst_support},
            {"enumerated_supports", report.enumerated_supports}};
}

}  // namespace cscolloc
