#pragma once

// Experiment harness: repeated sparse / compressible recovery studies with a
// two-way cost split, box-plot summaries and plot-ready CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cscolloc/solver.hpp"

namespace cscolloc {

enum class ExperimentKind { Sparse, Compressible, Rip, Verify };
enum class FullRecovery { Direct, Omp, Both, None };

[[nodiscard]] std::string to_string(ExperimentKind kind);
[[nodiscard]] std::string to_string(FullRecovery mode);
[[nodiscard]] ExperimentKind parse_experiment_kind(std::string_view text);
[[nodiscard]] FullRecovery parse_full_recovery(std::string_view text);

/// Stream ids for derive_seed() within one trial.
inline constexpr std::uint64_t kVectorStream = 0;
inline constexpr std::uint64_t kDrawStream = 1;

inline constexpr int kCsvVersion = 1;

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Sparse;
    int n = 32;
    int d = 2;
    std::vector<std::size_t> sparsity = {2, 4, 8, 16, 32, 64};
    std::size_t trials = 100;
    std::uint64_t seed_base = 1;
    /// Affine weights w of eta = 1 + w^T z; all zeros means eta == 1.
    std::vector<double> eta_affine = {0.25, 0.25};
    FullRecovery full_recovery = FullRecovery::Both;
    bool compressive = true;
    bool warmup = true;
    std::size_t threads = 0;  ///< 0: CS_COLLOC_THREADS or hardware concurrency
    std::string out_dir = ".";

    [[nodiscard]] DiffusionCoefficient coefficient() const;
};

/// Throws InvalidArgument describing the first problem found.
void validate(const ExperimentConfig& config);

/// Human-readable `key = value` form; parse_config(format_config(c)) == c.
[[nodiscard]] std::string format_config(const ExperimentConfig& config);
[[nodiscard]] ExperimentConfig parse_config(std::string_view text,
                                            ExperimentConfig defaults = {});
[[nodiscard]] ExperimentConfig load_config(const std::string& path,
                                           ExperimentConfig defaults = {});

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

struct TrialRecord {
    std::string experiment;
    SolveMethod method = SolveMethod::Compressive;
    int n = 0;
    int d = 0;
    std::size_t s = 0;
    std::size_t m = 0;
    std::size_t K = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double assembly_seconds = 0.0;
    double recovery_seconds = 0.0;
    double total_seconds = 0.0;  ///< not written to CSV
    double error = 0.0;
};

/// Random s-sparse vector: support uniform without replacement, N(0,1) values.
struct SparseVector {
    std::vector<std::size_t> support;
    std::vector<double> values;
};
[[nodiscard]] SparseVector random_sparse_vector(std::size_t N, std::size_t s, std::uint64_t seed);

/// Per trial: c = B x for a random s-sparse x; error is the relative l2
/// coefficient error.
[[nodiscard]] std::vector<TrialRecord> run_sparse_experiment(const ExperimentConfig& config);

/// Manufactured bubble solution; error is the relative L2(Omega) error.
[[nodiscard]] std::vector<TrialRecord> run_compressible_experiment(const ExperimentConfig& config);

struct BoxStats {
    std::size_t count = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Quartiles by linear interpolation between order statistics at (count-1)*p.
[[nodiscard]] BoxStats box_stats(std::vector<double> values);

struct GroupSummary {
    SolveMethod method;
    std::size_t s;
    BoxStats error;
    BoxStats assembly_seconds;
    BoxStats recovery_seconds;
};

struct Summary {
    std::vector<GroupSummary> groups;
    std::vector<std::string> warnings;
};

/// Groups by (method, s). When `expected_sparsity` is given, any
/// (method present, s expected) pair without records is reported in warnings.
[[nodiscard]] Summary summarize(const std::vector<TrialRecord>& records,
                                const std::vector<std::size_t>& expected_sparsity = {});

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Worker count: explicit value, else CS_COLLOC_THREADS, else hardware.
[[nodiscard]] std::size_t resolve_threads(std::size_t requested);

}  // namespace cscolloc
