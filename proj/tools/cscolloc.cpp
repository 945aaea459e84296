// Command-line front end: single solves, the recovery experiments, RIP
// checks on small instances and the matrix-property verification suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cscolloc/errors.hpp"
#include "cscolloc/experiment.hpp"
#include "cscolloc/json_io.hpp"
#include "cscolloc/rip.hpp"
#include "cscolloc/sampling.hpp"
#include "cscolloc/solver.hpp"
#include "cscolloc/verify.hpp"

namespace fs = std::filesystem;
using namespace cscolloc;

namespace {

struct CommonFlags {
    int n = 32;
    int d = 2;
    std::vector<std::size_t> sparsity;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::vector<double> eta_affine;
    std::string full_recovery;
    std::string out_dir;
    std::string config_path;
    std::size_t threads = 0;
    bool no_warmup = false;
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot write '" + path.string() + "'");
    }
    out << text;
}

void emit_json(const nlohmann::json& j, const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    const fs::path path = fs::path(out_dir) / name;
    write_text(path, j.dump(2) + "\n");
    std::cerr << "wrote " << path.string() << '\n';
}

DiffusionCoefficient coefficient_from(const std::vector<double>& weights, int d) {
    if (weights.empty()) {
        return DiffusionCoefficient::affine(std::vector<double>(static_cast<std::size_t>(d), 0.25));
    }
    if (weights.size() != static_cast<std::size_t>(d)) {
        throw InvalidArgument("--eta-affine needs exactly d = " + std::to_string(d) + " weights");
    }
    return DiffusionCoefficient::affine(weights);
}

int run_solve(const CommonFlags& f, const std::string& method, std::optional<std::size_t> m,
              std::optional<std::size_t> K, bool with_coefficients) {
    const ProblemSpec problem = bubble_problem(coefficient_from(f.eta_affine, f.d), f.n);
    const std::size_t N = IndexSpace(f.n, f.d).size();
    const std::size_t s = f.sparsity.empty() ? 32 : f.sparsity.front();

    SolveReport report;
    if (method == "full") {
        report = solve_full(problem);
    } else if (method == "full-omp") {
        report = solve_full_omp(problem, K.value_or(s));
        report.s = s;
    } else if (method == "compressive") {
        SampleSize sizes = default_m_K(s, N);
        sizes.m = m.value_or(sizes.m);
        sizes.K = K.value_or(sizes.K);
        report = solve_compressive(problem, sizes, f.seed);
        report.s = s;
    } else {
        throw InvalidArgument("--method must be full, full-omp or compressive");
    }
    nlohmann::json j = to_json(report, with_coefficients);
    j["relative_L2_error"] =
        relative_L2_expansion_error(report.coefficients, f.n, f.d, problem.exact->value);
    emit_json(j, f.out_dir, "solve.json");
    return 0;
}

ExperimentConfig build_config(const CommonFlags& f, ExperimentKind kind, const CLI::App& app) {
    ExperimentConfig config;
    if (!f.config_path.empty()) {
        config = load_config(f.config_path, config);
    }
    config.kind = kind;
    if (app.count("--n") > 0) config.n = f.n;
    if (app.count("--d") > 0) config.d = f.d;
    if (app.count("--sparsity") > 0) config.sparsity = f.sparsity;
    if (app.count("--trials") > 0) config.trials = f.trials;
    if (app.count("--seed") > 0) config.seed_base = f.seed;
    if (app.count("--eta-affine") > 0) config.eta_affine = f.eta_affine;
    if (app.count("--full-recovery") > 0) config.full_recovery = parse_full_recovery(f.full_recovery);
    if (app.count("--out") > 0) config.out_dir = f.out_dir;
    if (app.count("--threads") > 0) config.threads = f.threads;
    if (f.no_warmup) config.warmup = false;
    if (config.eta_affine.size() != static_cast<std::size_t>(config.d) && app.count("--eta-affine") == 0) {
        config.eta_affine.assign(static_cast<std::size_t>(config.d), 0.25);
    }
    validate(config);
    return config;
}

int run_experiment(const ExperimentConfig& config) {
    const auto records = config.kind == ExperimentKind::Sparse ? run_sparse_experiment(config)
                                                               : run_compressible_experiment(config);
    const Summary summary = summarize(records, config.sparsity);
    for (const auto& w : summary.warnings) {
        std::cerr << "warning: " << w << '\n';
    }

    const std::string stem = to_string(config.kind);
    std::ostringstream csv;
    write_csv(csv, records);
    const fs::path dir(config.out_dir);
    write_text(dir / (stem + "_trials.csv"), csv.str());
    nlohmann::json j = {{"csv_version", kCsvVersion},
                        {"config", to_json(config)},
                        {"summary", to_json(summary)}};
    write_text(dir / (stem + "_summary.json"), j.dump(2) + "\n");

    std::printf("%-12s %4s %10s %10s %10s %12s %12s\n", "method", "s", "err_min", "err_med",
                "err_max", "assembly_med", "recovery_med");
    for (const auto& g : summary.groups) {
        std::printf("%-12s %4zu %10.3e %10.3e %10.3e %12.3e %12.3e\n", to_string(g.method), g.s,
                    g.error.min, g.error.median, g.error.max, g.assembly_seconds.median,
                    g.recovery_seconds.median);
    }
    std::cerr << "wrote " << (dir / (stem + "_trials.csv")).string() << " and "
              << (dir / (stem + "_summary.json")).string() << '\n';
    return 0;
}

int run_rip_check(const CommonFlags& f, std::optional<std::size_t> m, double delta) {
    const DiffusionCoefficient eta = coefficient_from(f.eta_affine, f.d);
    const std::size_t N = IndexSpace(f.n, f.d).size();
    const std::size_t rows = m.value_or(N);
    const std::size_t trials = f.trials == 0 ? 1 : f.trials;
    const std::vector<std::size_t> orders = f.sparsity.empty() ? std::vector<std::size_t>{1, 2, 3} : f.sparsity;
    const SpectralBounds bounds = spectral_bounds(eta);

    nlohmann::json j = {{"n", f.n}, {"d", f.d}, {"N", N}, {"m", rows}, {"seed", f.seed},
                        {"r", bounds.r}, {"R", bounds.R}, {"admissible", bounds.admissible},
                        {"delta_target", delta}, {"trials", trials}};
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t s : orders) {
        const auto summary = verify_rip_theorem(eta, f.n, s, rows, delta, trials, f.seed);
        nlohmann::json entry = {{"s", s},
                                {"success_rate", summary.success_rate()},
                                {"successes", summary.successes},
                                {"deltas", summary.deltas}};
        if (trials == 1) {
            const auto sys = build_compressive(eta, nullptr, f.n, f.d, draw_indices(rows, f.n, f.d, f.seed));
            entry["report"] = to_json(rip_constant(Eigen::MatrixXd(sys.A / std::sqrt(bounds.R)), s));
        }
        std::fprintf(stderr, "s = %zu: success rate %.3f (delta_s <= %.3f)\n", s,
                     summary.success_rate(), delta);
        results.push_back(entry);
    }
    j["results"] = results;
    emit_json(j, f.out_dir, "rip_check.json");
    return 0;
}

int run_verify(const CommonFlags& f, const std::vector<int>& orders) {
    const DiffusionCoefficient eta = coefficient_from(f.eta_affine, 2);
    const auto checks = verify_matrix_properties(eta, orders);
    bool all = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        std::printf("[%s] %s: %.3e (bound %.3e) %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.value, c.threshold, c.detail.c_str());
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value},
                       {"threshold", c.threshold}, {"detail", c.detail}});
    }
    if (!f.out_dir.empty()) {
        emit_json({{"checks", arr}, {"all_passed", all}}, f.out_dir, "verify.json");
    }
    return all ? 0 : 3;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--n", f.n, "order n of the index set [n]^d")->check(CLI::PositiveNumber);
    cmd->add_option("--d", f.d, "spatial dimension")->check(CLI::Range(1, 3));
    cmd->add_option("--sparsity", f.sparsity, "sparsity levels, comma separated")->delimiter(',');
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--eta-affine", f.eta_affine, "weights w of eta = 1 + w^T z")->delimiter(',');
    cmd->add_option("--out", f.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive spectral collocation for -div(eta grad u) = F on the unit cube"};
    app.require_subcommand(1);

    CommonFlags f;
    std::string method = "full";
    std::optional<std::size_t> m_override;
    std::optional<std::size_t> k_override;
    bool with_coefficients = false;
    double delta = 0.5;
    std::vector<int> verify_orders = {4, 8, 16};

    auto* solve = app.add_subcommand("solve", "solve the manufactured bubble problem, JSON report");
    add_common(solve, f);
    solve->add_option("--method", method, "full | full-omp | compressive");
    solve->add_option("--m", m_override, "number of collocation samples");
    solve->add_option("--K", k_override, "number of OMP iterations");
    solve->add_flag("--coefficients", with_coefficients, "include coefficients in the report");

    auto experiment_cmd = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, f);
        cmd->add_option("--trials", f.trials, "trials per sparsity level");
        cmd->add_option("--full-recovery", f.full_recovery, "direct | omp | both | none");
        cmd->add_option("--config", f.config_path, "key = value config file");
        cmd->add_option("--threads", f.threads, "worker threads (default CS_COLLOC_THREADS)");
        cmd->add_flag("--no-warmup", f.no_warmup, "skip the unrecorded warm-up trial");
        return cmd;
    };
    auto* sparse = experiment_cmd("sparse-exp", "recovery of random s-sparse solutions");
    auto* compressible = experiment_cmd("compressible-exp", "recovery of the bubble solution");

    auto* rip = app.add_subcommand("rip-check", "brute-force RIP constants of small compressive matrices");
    add_common(rip, f);
    rip->add_option("--m", m_override, "rows per draw (default N)");
    rip->add_option("--trials", f.trials, "number of independent draws");
    rip->add_option("--delta", delta, "target restricted isometry constant");

    auto* verify = app.add_subcommand("verify", "matrix-property verification suite (d = 2)");
    verify->add_option("--n", verify_orders, "orders to check, comma separated")->delimiter(',');
    verify->add_option("--eta-affine", f.eta_affine, "weights w of eta = 1 + w^T z")->delimiter(',');
    verify->add_option("--out", f.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            return run_solve(f, method, m_override, k_override, with_coefficients);
        }
        if (*sparse) {
            return run_experiment(build_config(f, ExperimentKind::Sparse, *sparse));
        }
        if (*compressible) {
            return run_experiment(build_config(f, ExperimentKind::Compressible, *compressible));
        }
        if (*rip) {
            if (rip->count("--n") == 0) f.n = 3;
            return run_rip_check(f, m_override, delta);
        }
        if (*verify) {
            return run_verify(f, verify_orders);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
