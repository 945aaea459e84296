#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cscolloc/errors.hpp"
#include "cscolloc/experiment.hpp"

using namespace cscolloc;

namespace {

// CSV with the two timing columns removed.
std::string strip_timings(const std::vector<TrialRecord>& records) {
    std::ostringstream csv;
    write_csv(csv, records);
    std::istringstream in(csv.str());
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 12);
        cells.erase(cells.begin() + 9, cells.begin() + 11);
        for (const auto& c : cells) out += c + ",";
        out += "\n";
    }
    return out;
}

ExperimentConfig small_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.n = 8;
    c.sparsity = {2, 4};
    c.trials = 3;
    c.warmup = false;
    return c;
}

}  // namespace

TEST_CASE("config round trip") {
    const ExperimentConfig defaults;
    CHECK(parse_config(format_config(defaults)) == defaults);

    ExperimentConfig c;
    c.kind = ExperimentKind::Compressible;
    c.n = 12;
    c.d = 3;
    c.sparsity = {1, 5, 9};
    c.trials = 7;
    c.seed_base = 123456789012345ULL;
    c.eta_affine = {0.1, 0.2, 0.3};
    c.full_recovery = FullRecovery::Omp;
    c.compressive = false;
    c.warmup = false;
    c.threads = 2;
    c.out_dir = "results/run one";
    CHECK(parse_config(format_config(c)) == c);

    c.eta_affine = {0.0, 0.0, 0.0};
    CHECK(parse_config(format_config(c)) == c);

    const auto parsed = parse_config("# study\nexperiment = compressible\n\nn = 16\nsparsity = 2,4\neta = constant\n");
    CHECK(parsed.kind == ExperimentKind::Compressible);
    CHECK(parsed.n == 16);
    CHECK(parsed.sparsity == std::vector<std::size_t>{2, 4});
    CHECK(parsed.eta_affine == std::vector<double>{0.0, 0.0});
    CHECK(parsed.trials == 100);
}

TEST_CASE("invalid configs are rejected") {
    CHECK_NOTHROW(validate(parse_config(format_config(ExperimentConfig{}))));
    CHECK_THROWS_AS(validate(parse_config("n = -3\n")), InvalidArgument);
    CHECK_THROWS_AS(validate(parse_config("trials = 0\n")), InvalidArgument);
    CHECK_THROWS_AS(validate(parse_config("n = 4\nsparsity = 2,17\n")), InvalidArgument);
    CHECK_THROWS_AS((void)parse_config("colour = blue\n"), InvalidArgument);
    CHECK_THROWS_AS(validate(parse_config("eta = affine:0.5,-1\n")), InvalidArgument);
    CHECK_THROWS_AS(validate(parse_config("d = 2\neta = affine:0.5\n")), InvalidArgument);
    CHECK_THROWS_AS((void)parse_config("full_recovery = lu\n"), InvalidArgument);
    CHECK_THROWS_AS((void)parse_config("n 32\n"), InvalidArgument);
    CHECK_THROWS_AS((void)load_config("/nonexistent/config.txt"), InvalidArgument);
    ExperimentConfig c;
    c.d = 4;
    CHECK_THROWS_AS(validate(c), InvalidArgument);
}

TEST_CASE("box statistics") {
    auto b = box_stats({5, 1, 4, 2, 3});
    CHECK(b.count == 5);
    CHECK(b.min == 1);
    CHECK(b.q1 == 2);
    CHECK(b.median == 3);
    CHECK(b.q3 == 4);
    CHECK(b.max == 5);
    CHECK(b.mean == 3);
    b = box_stats({0.25});
    CHECK(b.min == 0.25);
    CHECK(b.q1 == 0.25);
    CHECK(b.median == 0.25);
    CHECK(b.q3 == 0.25);
    CHECK(b.max == 0.25);
    b = box_stats({1, 2, 3, 4});
    CHECK(b.median == 2.5);
    CHECK(b.q1 == doctest::Approx(1.75));
    CHECK_THROWS_AS((void)box_stats({}), InvalidArgument);
}

TEST_CASE("random sparse vectors") {
    const auto v = random_sparse_vector(1024, 16, 5);
    CHECK(v.support.size() == 16);
    CHECK(v.values.size() == 16);
    CHECK(std::set<std::size_t>(v.support.begin(), v.support.end()).size() == 16);
    CHECK(*std::max_element(v.support.begin(), v.support.end()) < 1024);
    CHECK(random_sparse_vector(1024, 16, 5).support == v.support);
    CHECK(random_sparse_vector(1024, 16, 5).values == v.values);
    CHECK(random_sparse_vector(1024, 16, 6).support != v.support);
    CHECK(random_sparse_vector(4, 4, 1).support.size() == 4);
}

TEST_CASE("sparse experiment at n = 32") {
    ExperimentConfig c;
    c.sparsity = {2};
    c.trials = 5;
    c.full_recovery = FullRecovery::Direct;
    const auto records = run_sparse_experiment(c);
    CHECK(records.size() == 10);
    for (const auto& r : records) {
        CHECK(r.experiment == "sparse");
        CHECK(r.error < 1e-10);
        CHECK(r.error >= 0.0);
        if (r.method == SolveMethod::Compressive) {
            CHECK(r.m == 28);
            CHECK(r.K == 2);
        }
    }

    c.sparsity = {32};
    c.trials = 1;
    c.full_recovery = FullRecovery::None;
    const auto big = run_sparse_experiment(c);
    REQUIRE(big.size() == 1);
    CHECK(big[0].m == 444);
    CHECK(big[0].K == 32);
}

TEST_CASE("experiments are deterministic") {
    auto c = small_config(ExperimentKind::Sparse);
    c.threads = 1;
    const auto a = strip_timings(run_sparse_experiment(c));
    c.threads = 3;
    const auto b = strip_timings(run_sparse_experiment(c));
    CHECK(a == b);

    auto cc = small_config(ExperimentKind::Compressible);
    CHECK(strip_timings(run_compressible_experiment(cc)) == strip_timings(run_compressible_experiment(cc)));

    c.n = 32;
    c.sparsity = {4};
    c.trials = 100;
    c.full_recovery = FullRecovery::None;
    const auto first = summarize(run_sparse_experiment(c));
    const auto second = summarize(run_sparse_experiment(c));
    REQUIRE(first.groups.size() == 1);
    REQUIRE(second.groups.size() == 1);
    CHECK(first.groups[0].error.count == 100);
    CHECK(first.groups[0].error.median == second.groups[0].error.median);
    CHECK(first.groups[0].error.q1 == second.groups[0].error.q1);
    CHECK(first.groups[0].error.q3 == second.groups[0].error.q3);
    CHECK(first.groups[0].error.max == second.groups[0].error.max);
}

TEST_CASE("records are ordered by method, sparsity and trial") {
    const auto records = run_sparse_experiment(small_config(ExperimentKind::Sparse));
    CHECK(records.size() == 18);
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& p = records[i - 1];
        const auto& q = records[i];
        CHECK(std::tuple(static_cast<int>(p.method), p.s, p.trial) < std::tuple(static_cast<int>(q.method), q.s, q.trial));
    }
    for (const auto& r : records) {
        CHECK(r.seed == 1 + r.trial);
    }
}

TEST_CASE("compressible experiment") {
    auto c = small_config(ExperimentKind::Compressible);
    c.full_recovery = FullRecovery::Direct;
    const auto records = run_compressible_experiment(c);
    CHECK(records.size() == 12);
    double full_error = -1.0;
    for (const auto& r : records) {
        CHECK(r.experiment == "compressible");
        CHECK(r.error >= 0.0);
        if (r.method == SolveMethod::FullDirect) {
            if (full_error >= 0.0) CHECK(r.error == full_error);
            full_error = r.error;
        }
    }
    CHECK(full_error > 0.0);
}

TEST_CASE("summaries and CSV output") {
    auto c = small_config(ExperimentKind::Sparse);
    c.full_recovery = FullRecovery::Omp;
    const auto records = run_sparse_experiment(c);
    auto summary = summarize(records, {2, 4, 8});
    CHECK(summary.groups.size() == 4);
    CHECK(summary.warnings.size() == 2);
    CHECK(summarize(records).warnings.empty());
    CHECK_THROWS_AS((void)summarize({}), InvalidArgument);

    std::ostringstream csv;
    write_csv(csv, records);
    const std::string text = csv.str();
    CHECK(text.rfind("experiment,method,n,d,s,m,K,trial,seed,assembly_s,recovery_s,error\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
}

TEST_CASE("compressive assembly is cheaper than full assembly") {
    ExperimentConfig c;
    c.sparsity = {2, 4, 8, 16, 32};
    c.trials = 3;
    c.full_recovery = FullRecovery::Direct;
    const auto summary = summarize(run_sparse_experiment(c));
    for (std::size_t s : c.sparsity) {
        double full = 0.0;
        double comp = 0.0;
        for (const auto& g : summary.groups) {
            if (g.s != s) continue;
            (g.method == SolveMethod::Compressive ? comp : full) = g.assembly_seconds.median;
        }
        CHECK(comp > 0.0);
        CHECK(comp < full);
    }
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_threads(3) == 3);
    ::setenv("CS_COLLOC_THREADS", "1", 1);
    CHECK(resolve_threads(0) == 1);
    ::unsetenv("CS_COLLOC_THREADS");
    CHECK(resolve_threads(0) >= 1);
}
