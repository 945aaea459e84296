#include "cscolloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "cscolloc/errors.hpp"
#include "cscolloc/random.hpp"

namespace cscolloc {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

template <typename T>
T parse_integer(std::string_view key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw InvalidArgument("config key '" + std::string(key) + "': '" + value +
                              "' is not a valid non-negative integer");
    }
    return out;
}

double parse_double(std::string_view key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("config key '" + std::string(key) + "': '" + value +
                              "' is not a number");
    }
}

bool parse_bool(std::string_view key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw InvalidArgument("config key '" + std::string(key) + "': expected true/false");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += fmt(items[i]);
    }
    return out;
}

// Runs tasks[i] for every i with up to `threads` workers. Results are written
// by index, so output order never depends on scheduling.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& worker : workers) {
        worker.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

TrialRecord make_record(const ExperimentConfig& config, const SolveReport& report, std::size_t s,
                        std::size_t trial, std::uint64_t seed, double error) {
    TrialRecord rec;
    rec.experiment = to_string(config.kind);
    rec.method = report.method;
    rec.n = config.n;
    rec.d = config.d;
    rec.s = s;
    rec.m = report.method == SolveMethod::Compressive ? report.m : IndexSpace(config.n, config.d).size();
    rec.K = report.method == SolveMethod::FullDirect ? 0 : report.K;
    rec.trial = trial;
    rec.seed = seed;
    rec.assembly_seconds = report.assembly_seconds;
    rec.recovery_seconds = report.recovery_seconds;
    rec.total_seconds = report.total_seconds;
    rec.error = error;
    return rec;
}

using TrialBody = std::function<std::vector<TrialRecord>(std::size_t s, std::size_t trial)>;

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, const TrialBody& body) {
    validate(config);
    const std::size_t per_s = config.trials;
    const std::size_t count = config.sparsity.size() * per_s;
    if (config.warmup && count > 0) {
        (void)body(config.sparsity.front(), 0);
    }
    std::vector<std::vector<TrialRecord>> slots(count);
    parallel_for(count, resolve_threads(config.threads), [&](std::size_t i) {
        slots[i] = body(config.sparsity[i / per_s], i % per_s);
    });
    std::vector<TrialRecord> records;
    for (auto& slot : slots) {
        records.insert(records.end(), std::make_move_iterator(slot.begin()),
                       std::make_move_iterator(slot.end()));
    }
    std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
        return std::tie(a.method, a.s, a.trial) < std::tie(b.method, b.s, b.trial);
    });
    return records;
}

bool wants_direct(FullRecovery mode) {
    return mode == FullRecovery::Direct || mode == FullRecovery::Both;
}
bool wants_omp(FullRecovery mode) {
    return mode == FullRecovery::Omp || mode == FullRecovery::Both;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sparse:
            return "sparse";
        case ExperimentKind::Compressible:
            return "compressible";
        case ExperimentKind::Rip:
            return "rip";
        case ExperimentKind::Verify:
            return "verify";
    }
    return "unknown";
}

std::string to_string(FullRecovery mode) {
    switch (mode) {
        case FullRecovery::Direct:
            return "direct";
        case FullRecovery::Omp:
            return "omp";
        case FullRecovery::Both:
            return "both";
        case FullRecovery::None:
            return "none";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    for (auto kind : {ExperimentKind::Sparse, ExperimentKind::Compressible, ExperimentKind::Rip,
                      ExperimentKind::Verify}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw InvalidArgument("unknown experiment kind '" + std::string(text) + "'");
}

FullRecovery parse_full_recovery(std::string_view text) {
    for (auto mode : {FullRecovery::Direct, FullRecovery::Omp, FullRecovery::Both, FullRecovery::None}) {
        if (text == to_string(mode)) {
            return mode;
        }
    }
    throw InvalidArgument("unknown full recovery mode '" + std::string(text) +
                          "' (expected direct, omp, both or none)");
}

DiffusionCoefficient ExperimentConfig::coefficient() const {
    return DiffusionCoefficient::affine(eta_affine);
}

void validate(const ExperimentConfig& config) {
    const IndexSpace space(config.n, config.d);
    if (config.trials < 1) {
        throw InvalidArgument("trials must be >= 1");
    }
    if (config.sparsity.empty()) {
        throw InvalidArgument("sparsity list must not be empty");
    }
    for (std::size_t s : config.sparsity) {
        if (s < 1 || s > space.size()) {
            throw InvalidArgument("sparsity " + std::to_string(s) + " outside [1, N = " +
                                  std::to_string(space.size()) + "]");
        }
    }
    if (config.eta_affine.size() != static_cast<std::size_t>(config.d)) {
        throw InvalidArgument("eta affine weights must have d = " + std::to_string(config.d) +
                              " entries");
    }
    (void)config.coefficient();
}

std::string format_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "experiment = " << to_string(c.kind) << '\n'
        << "n = " << c.n << '\n'
        << "d = " << c.d << '\n'
        << "sparsity = " << join(c.sparsity, [](std::size_t s) { return std::to_string(s); }) << '\n'
        << "trials = " << c.trials << '\n'
        << "seed = " << c.seed_base << '\n';
    const bool constant = std::all_of(c.eta_affine.begin(), c.eta_affine.end(), [](double w) { return w == 0.0; });
    if (constant) {
        out << "eta = constant\n";
    } else {
        out << "eta = affine:" << join(c.eta_affine, format_double) << '\n';
    }
    out << "full_recovery = " << to_string(c.full_recovery) << '\n'
        << "compressive = " << (c.compressive ? "true" : "false") << '\n'
        << "warmup = " << (c.warmup ? "true" : "false") << '\n'
        << "threads = " << c.threads << '\n'
        << "out = " << c.out_dir << '\n';
    return out.str();
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig c) {
    bool eta_constant = false;
    std::size_t line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "experiment") {
            c.kind = parse_experiment_kind(value);
        } else if (key == "n") {
            c.n = parse_integer<int>(key, value);
        } else if (key == "d") {
            c.d = parse_integer<int>(key, value);
        } else if (key == "sparsity") {
            c.sparsity.clear();
            for (const auto& part : split(value, ',')) {
                c.sparsity.push_back(parse_integer<std::size_t>(key, part));
            }
        } else if (key == "trials") {
            c.trials = parse_integer<std::size_t>(key, value);
        } else if (key == "seed") {
            c.seed_base = parse_integer<std::uint64_t>(key, value);
        } else if (key == "eta") {
            if (value == "constant") {
                eta_constant = true;
            } else if (value.rfind("affine:", 0) == 0) {
                eta_constant = false;
                c.eta_affine.clear();
                for (const auto& part : split(std::string_view(value).substr(7), ',')) {
                    c.eta_affine.push_back(parse_double(key, part));
                }
            } else {
                throw InvalidArgument("config key 'eta': expected 'constant' or 'affine:w1,w2,...'");
            }
        } else if (key == "full_recovery") {
            c.full_recovery = parse_full_recovery(value);
        } else if (key == "compressive") {
            c.compressive = parse_bool(key, value);
        } else if (key == "warmup") {
            c.warmup = parse_bool(key, value);
        } else if (key == "threads") {
            c.threads = parse_integer<std::size_t>(key, value);
        } else if (key == "out") {
            c.out_dir = value;
        } else {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (eta_constant) {
        c.eta_affine.assign(static_cast<std::size_t>(std::max(c.d, 0)), 0.0);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig defaults) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(defaults));
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.kind == b.kind && a.n == b.n && a.d == b.d && a.sparsity == b.sparsity &&
           a.trials == b.trials && a.seed_base == b.seed_base && a.eta_affine == b.eta_affine &&
           a.full_recovery == b.full_recovery && a.compressive == b.compressive &&
           a.warmup == b.warmup && a.threads == b.threads && a.out_dir == b.out_dir;
}

SparseVector random_sparse_vector(std::size_t N, std::size_t s, std::uint64_t seed) {
    if (s > N) {
        throw InvalidArgument("sparsity exceeds vector length");
    }
    SplitMix64 rng(seed);
    std::vector<std::size_t> pool(N);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    SparseVector x;
    // Partial Fisher-Yates: the first s slots form a uniform s-subset.
    for (std::size_t i = 0; i < s; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, N - 1);
        std::swap(pool[i], pool[pick(rng)]);
        x.support.push_back(pool[i]);
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < s; ++i) {
        x.values.push_back(gauss(rng));
    }
    return x;
}

std::vector<TrialRecord> run_sparse_experiment(const ExperimentConfig& config) {
    validate(config);
    const DiffusionCoefficient eta = config.coefficient();
    const std::size_t N = IndexSpace(config.n, config.d).size();
    return run_trials(config, [&](std::size_t s, std::size_t trial) {
        const std::uint64_t seed = config.seed_base + trial;
        const SparseVector x = random_sparse_vector(N, s, derive_seed(seed, kVectorStream));
        Eigen::VectorXd truth = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
        for (std::size_t i = 0; i < s; ++i) {
            truth(static_cast<Eigen::Index>(x.support[i])) = x.values[i];
        }
        const ProblemSpec problem{eta, forcing_from_expansion(eta, config.n, x.support, x.values),
                                  std::nullopt, config.n, config.d};
        std::vector<TrialRecord> out;
        if (wants_direct(config.full_recovery)) {
            const auto report = solve_full(problem);
            out.push_back(make_record(config, report, s, trial, seed,
                                      relative_l2_coeff_error(report.coefficients, truth)));
        }
        if (wants_omp(config.full_recovery)) {
            const auto report = solve_full_omp(problem, s);
            out.push_back(make_record(config, report, s, trial, seed,
                                      relative_l2_coeff_error(report.coefficients, truth)));
        }
        if (config.compressive) {
            const auto report = solve_compressive(problem, default_m_K(s, N), derive_seed(seed, kDrawStream));
            out.push_back(make_record(config, report, s, trial, seed,
                                      relative_l2_coeff_error(report.coefficients, truth)));
        }
        return out;
    });
}

std::vector<TrialRecord> run_compressible_experiment(const ExperimentConfig& config) {
    validate(config);
    const ProblemSpec problem = bubble_problem(config.coefficient(), config.n);
    const std::size_t N = IndexSpace(config.n, config.d).size();
    const ScalarField& exact = problem.exact->value;
    auto l2_error = [&](const SolveReport& report) {
        return relative_L2_expansion_error(report.coefficients, config.n, config.d, exact);
    };
    return run_trials(config, [&](std::size_t s, std::size_t trial) {
        const std::uint64_t seed = config.seed_base + trial;
        std::vector<TrialRecord> out;
        if (wants_direct(config.full_recovery)) {
            const auto report = solve_full(problem);
            out.push_back(make_record(config, report, s, trial, seed, l2_error(report)));
        }
        if (wants_omp(config.full_recovery)) {
            const auto report = solve_full_omp(problem, s);
            out.push_back(make_record(config, report, s, trial, seed, l2_error(report)));
        }
        if (config.compressive) {
            const auto report = solve_compressive(problem, default_m_K(s, N), derive_seed(seed, kDrawStream));
            out.push_back(make_record(config, report, s, trial, seed, l2_error(report)));
        }
        return out;
    });
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidArgument("box statistics need at least one value");
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    BoxStats st;
    st.count = values.size();
    st.min = values.front();
    st.max = values.back();
    st.q1 = quantile(0.25);
    st.median = quantile(0.5);
    st.q3 = quantile(0.75);
    st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return st;
}

Summary summarize(const std::vector<TrialRecord>& records,
                  const std::vector<std::size_t>& expected_sparsity) {
    if (records.empty()) {
        throw InvalidArgument("cannot summarize an empty record list");
    }
    struct Columns {
        std::vector<double> error, assembly, recovery;
    };
    std::map<std::pair<SolveMethod, std::size_t>, Columns> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.method, r.s}];
        g.error.push_back(r.error);
        g.assembly.push_back(r.assembly_seconds);
        g.recovery.push_back(r.recovery_seconds);
    }
    Summary summary;
    std::vector<SolveMethod> methods;
    for (const auto& [key, cols] : groups) {
        summary.groups.push_back({key.first, key.second, box_stats(cols.error),
                                  box_stats(cols.assembly), box_stats(cols.recovery)});
        if (std::find(methods.begin(), methods.end(), key.first) == methods.end()) {
            methods.push_back(key.first);
        }
    }
    for (SolveMethod method : methods) {
        for (std::size_t s : expected_sparsity) {
            if (groups.find({method, s}) == groups.end()) {
                summary.warnings.push_back(std::string("no records for method ") + to_string(method) +
                                           " at s = " + std::to_string(s) + "; group omitted");
            }
        }
    }
    return summary;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "experiment,method,n,d,s,m,K,trial,seed,assembly_s,recovery_s,error\n";
    char timing[64];
    for (const auto& r : records) {
        std::snprintf(timing, sizeof timing, "%.6e,%.6e", r.assembly_seconds, r.recovery_seconds);
        out << r.experiment << ',' << to_string(r.method) << ',' << r.n << ',' << r.d << ','
            << r.s << ',' << r.m << ',' << r.K << ',' << r.trial << ',' << r.seed << ','
            << timing << ',' << format_double(r.error) << '\n';
    }
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CS_COLLOC_THREADS"); env != nullptr && *env != '\0') {
        std::size_t cap = 0;
        const std::string text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec == std::errc() && ptr == text.data() + text.size() && cap > 0) {
            return std::min(hw, cap);
        }
        throw InvalidArgument("CS_COLLOC_THREADS must be a positive integer");
    }
    return hw;
}

}  // namespace cscolloc
