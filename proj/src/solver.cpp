#include "cscolloc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cscolloc/errors.hpp"

namespace cscolloc {

namespace {

using std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_coefficients(const Eigen::VectorXd& x, int n, int d) {
    const IndexSpace space(n, d);
    if (static_cast<std::size_t>(x.size()) != space.size()) {
        throw InvalidArgument("coefficient vector has " + std::to_string(x.size()) +
                              " entries, expected n^d = " + std::to_string(space.size()));
    }
}

// sum_j w_j prod_k sin(pi j_k z_k) for lex-ordered weights.
double sine_sum(const Eigen::VectorXd& w, int n, int d, Point z) {
    if (z.size() != static_cast<std::size_t>(d)) {
        throw InvalidArgument("point dimension does not match d");
    }
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> sines(static_cast<std::size_t>(d) * un);
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
        for (std::size_t j = 0; j < un; ++j) {
            sines[k * un + j] = sin_pi(static_cast<double>(j + 1) * z[k]);
        }
    }
    double total = 0.0;
    for (Eigen::Index r = 0; r < w.size(); ++r) {
        if (w(r) == 0.0) {
            continue;
        }
        auto rest = static_cast<std::size_t>(r);
        double prod = w(r);
        for (std::size_t k = static_cast<std::size_t>(d); k-- > 0;) {
            prod *= sines[k * un + rest % un];
            rest /= un;
        }
        total += prod;
    }
    return total;
}

// Weights turning sum_j w_j prod sin into the expansion or its Laplacian.
Eigen::VectorXd expansion_weights(const Eigen::VectorXd& x, int n, int d, bool laplacian) {
    const double norm = std::pow(2.0 / (n + 1.0), 0.5 * d);
    Eigen::VectorXd w(x.size());
    for (Eigen::Index r = 0; r < x.size(); ++r) {
        if (laplacian) {
            w(r) = -norm * x(r);
        } else {
            const auto j = MultiIndex::from_rank(static_cast<std::size_t>(r), n, d);
            w(r) = norm * x(r) / (pi * pi * j.squared_norm());
        }
    }
    return w;
}

// 16^d prod_k p(z_k) with p(t) = t^2 (1-t)^2, and its derivatives.
double bubble_p(double t) { return t * t * (1.0 - t) * (1.0 - t); }
double bubble_dp(double t) { return 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }
double bubble_ddp(double t) { return 2.0 * (1.0 - 6.0 * t + 6.0 * t * t); }

}  // namespace

const char* to_string(SolveMethod method) noexcept {
    switch (method) {
        case SolveMethod::FullDirect:
            return "full-direct";
        case SolveMethod::FullOmp:
            return "full-omp";
        case SolveMethod::Compressive:
            return "compressive";
    }
    return "unknown";
}

SolveReport solve_full(const ProblemSpec& problem, double max_condition) {
    const auto start = Clock::now();
    SolveReport report;
    report.method = SolveMethod::FullDirect;
    report.n = problem.n;
    report.d = problem.d;

    const CollocationSystem system = assemble_full(problem.eta, problem.forcing, problem.n, problem.d);
    report.assembly_seconds = seconds_since(start);

    const auto recovery_start = Clock::now();
    const Eigen::MatrixXd dense = system.B;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
    const double rcond = lu.rcond();
    report.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(rcond > 0.0) || *report.condition_estimate > max_condition) {
        throw NumericalFailure("collocation matrix is singular or ill-conditioned (condition "
                               "estimate " + std::to_string(*report.condition_estimate) + ")");
    }
    report.coefficients = lu.solve(system.c);
    report.recovery_seconds = seconds_since(recovery_start);
    report.total_seconds = seconds_since(start);
    return report;
}

SolveReport solve_full_omp(const ProblemSpec& problem, std::size_t K) {
    const auto start = Clock::now();
    SolveReport report;
    report.method = SolveMethod::FullOmp;
    report.n = problem.n;
    report.d = problem.d;
    report.K = K;

    const CollocationSystem system = assemble_full(problem.eta, problem.forcing, problem.n, problem.d);
    report.assembly_seconds = seconds_since(start);

    const auto recovery_start = Clock::now();
    Eigen::VectorXd norms = system.B.colwise().norm().transpose();
    std::vector<bool> eligible(static_cast<std::size_t>(norms.size()), true);
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (norms(j) == 0.0) {
            norms(j) = 1.0;
            eligible[static_cast<std::size_t>(j)] = false;
        }
    }
    const Eigen::MatrixXd normalized = system.B * norms.cwiseInverse().asDiagonal();
    SparseSolution sol = omp(normalized, system.c, K, eligible);
    for (std::size_t i = 0; i < sol.support.size(); ++i) {
        sol.values[i] /= norms(static_cast<Eigen::Index>(sol.support[i]));
    }
    report.coefficients = sol.densify();
    report.sparse = std::move(sol);
    report.recovery_seconds = seconds_since(recovery_start);
    report.total_seconds = seconds_since(start);
    return report;
}

SolveReport solve_compressive_with_draw(const ProblemSpec& problem, SampleDraw draw,
                                        std::size_t K) {
    const auto start = Clock::now();
    SolveReport report;
    report.method = SolveMethod::Compressive;
    report.n = problem.n;
    report.d = problem.d;
    report.seed = draw.seed;
    report.m = draw.m();
    report.K = K;
    report.tau = draw.tau;

    CompressiveSystem sys =
        sample_rows(problem.eta, problem.forcing, problem.n, problem.d, std::move(draw));
    report.assembly_seconds = seconds_since(start);

    const auto recovery_start = Clock::now();
    compute_column_norms(sys);
    const Eigen::MatrixXd normalized = sys.normalized();
    SparseSolution sol = omp(normalized, sys.b, K, sys.eligible);
    for (std::size_t i = 0; i < sol.support.size(); ++i) {
        sol.values[i] /= sys.M(static_cast<Eigen::Index>(sol.support[i]));
    }
    report.coefficients = sol.densify();
    report.sparse = std::move(sol);
    report.recovery_seconds = seconds_since(recovery_start);
    report.total_seconds = seconds_since(start);
    return report;
}

SolveReport solve_compressive(const ProblemSpec& problem, SampleSize sizes, std::uint64_t seed) {
    if (sizes.m == 0 || sizes.K == 0) {
        throw InvalidArgument("compressive solve needs m >= 1 and K >= 1");
    }
    const auto start = Clock::now();
    SampleDraw draw = draw_indices(sizes.m, problem.n, problem.d, seed);
    const double draw_seconds = seconds_since(start);
    SolveReport report = solve_compressive_with_draw(problem, std::move(draw), sizes.K);
    report.assembly_seconds += draw_seconds;
    report.total_seconds = seconds_since(start);
    return report;
}

SolveReport solve_compressive(const ProblemSpec& problem, std::size_t s, std::uint64_t seed) {
    const IndexSpace space(problem.n, problem.d);
    SolveReport report = solve_compressive(problem, default_m_K(s, space.size()), seed);
    report.s = s;
    return report;
}

double evaluate_solution(const Eigen::VectorXd& x, int n, int d, Point z) {
    require_coefficients(x, n, d);
    return sine_sum(expansion_weights(x, n, d, false), n, d, z);
}

double evaluate_laplacian(const Eigen::VectorXd& x, int n, int d, Point z) {
    require_coefficients(x, n, d);
    return sine_sum(expansion_weights(x, n, d, true), n, d, z);
}

Eigen::VectorXd expansion_on_grid(const Eigen::VectorXd& x, int n, int d,
                                  const std::vector<double>& axis_nodes, bool laplacian) {
    require_coefficients(x, n, d);
    const auto p = static_cast<Eigen::Index>(axis_nodes.size());
    Eigen::MatrixXd table(n, p);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index a = 0; a < p; ++a) {
            table(j, a) = sin_pi(static_cast<double>(j + 1) * axis_nodes[static_cast<std::size_t>(a)]);
        }
    }
    const Eigen::VectorXd w = expansion_weights(x, n, d, laplacian);

    if (d == 1) {
        return table.transpose() * w;
    }
    // Row-major views so that lex order (last axis fastest) maps onto rows.
    using RowMap = Eigen::Map<const RowMatrix>;
    if (d == 2) {
        const RowMatrix values = table.transpose() * RowMap(w.data(), n, n) * table;
        return Eigen::Map<const Eigen::VectorXd>(values.data(), p * p);
    }
    Eigen::VectorXd out(p * p * p);
    const RowMap slabs(w.data(), n, n * n);  // row j1 holds W(j1, j2, j3), j3 fastest
    for (Eigen::Index a1 = 0; a1 < p; ++a1) {
        const Eigen::RowVectorXd folded = table.col(a1).transpose() * slabs;
        const RowMatrix values = table.transpose() * RowMap(folded.data(), n, n) * table;
        out.segment(a1 * p * p, p * p) = Eigen::Map<const Eigen::VectorXd>(values.data(), p * p);
    }
    return out;
}

double relative_l2_coeff_error(const Eigen::VectorXd& x_hat, const Eigen::VectorXd& x_ref) {
    if (x_hat.size() != x_ref.size()) {
        throw InvalidArgument("coefficient vectors differ in length");
    }
    const double ref = x_ref.norm();
    if (ref == 0.0) {
        throw InvalidArgument("relative error against a zero reference vector");
    }
    return (x_hat - x_ref).norm() / ref;
}

double relative_L2_function_error(const ScalarField& u_hat, const ScalarField& u_exact, int d,
                                  int cells) {
    const double num = integrate(
        [&](Point z) {
            const double diff = u_hat(z) - u_exact(z);
            return diff * diff;
        },
        d, cells);
    const double den = integrate(
        [&](Point z) {
            const double v = u_exact(z);
            return v * v;
        },
        d, cells);
    if (den == 0.0) {
        throw InvalidArgument("relative L2 error against a zero exact solution");
    }
    return std::sqrt(num / den);
}

double relative_L2_expansion_error(const Eigen::VectorXd& x, int n, int d,
                                   const ScalarField& u_exact, int cells) {
    const AxisRule rule = composite_gauss_legendre(cells);
    const Eigen::VectorXd approx = expansion_on_grid(x, n, d, rule.nodes);
    const std::size_t p = rule.nodes.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> z(static_cast<std::size_t>(d));
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index flat = 0; flat < approx.size(); ++flat) {
        auto rest = static_cast<std::size_t>(flat);
        double w = 1.0;
        for (std::size_t k = static_cast<std::size_t>(d); k-- > 0;) {
            const std::size_t a = rest % p;
            rest /= p;
            z[k] = rule.nodes[a];
            w *= rule.weights[a];
        }
        const double exact = u_exact(z);
        const double diff = approx(flat) - exact;
        num += w * diff * diff;
        den += w * exact * exact;
    }
    if (den == 0.0) {
        throw InvalidArgument("relative L2 error against a zero exact solution");
    }
    return std::sqrt(num / den);
}

double laplacian_L2_norm(const Eigen::VectorXd& x, int n, int d, int cells) {
    const AxisRule rule = composite_gauss_legendre(cells);
    const Eigen::VectorXd lap = expansion_on_grid(x, n, d, rule.nodes, true);
    const std::size_t p = rule.nodes.size();
    double acc = 0.0;
    for (Eigen::Index flat = 0; flat < lap.size(); ++flat) {
        auto rest = static_cast<std::size_t>(flat);
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            w *= rule.weights[rest % p];
            rest /= p;
        }
        acc += w * lap(flat) * lap(flat);
    }
    return std::sqrt(acc);
}

double forcing_consistency_defect(const ProblemSpec& problem, std::size_t samples,
                                  std::uint64_t seed, double step) {
    if (!problem.exact) {
        throw InvalidArgument("problem has no exact solution to check against");
    }
    const auto& u = problem.exact->value;
    const auto d = static_cast<std::size_t>(problem.d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.05, 0.95);
    double worst = 0.0;
    std::vector<double> z(d);
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& c : z) {
            c = coord(rng);
        }
        double div = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            auto shifted = [&](double dz) {
                std::vector<double> y = z;
                y[k] += dz;
                return y;
            };
            const double u0 = u(z);
            const double flux_plus = problem.eta(shifted(0.5 * step)) * (u(shifted(step)) - u0) / step;
            const double flux_minus = problem.eta(shifted(-0.5 * step)) * (u0 - u(shifted(-step))) / step;
            div += (flux_plus - flux_minus) / step;
        }
        const double f = problem.forcing(z);
        worst = std::max(worst, std::abs(-div - f) / std::max(1.0, std::abs(f)));
    }
    return worst;
}

ManufacturedSolution polynomial_bubble(int d) {
    if (d < 1 || d > 3) {
        throw InvalidArgument("dimension d must be in {1,2,3}");
    }
    const double scale = std::pow(16.0, d);
    ManufacturedSolution u;
    u.value = [scale](Point z) {
        double v = scale;
        for (double t : z) {
            v *= bubble_p(t);
        }
        return v;
    };
    u.gradient = [scale](Point z) {
        std::vector<double> g(z.size(), scale);
        for (std::size_t k = 0; k < z.size(); ++k) {
            for (std::size_t l = 0; l < z.size(); ++l) {
                g[k] *= (l == k) ? bubble_dp(z[l]) : bubble_p(z[l]);
            }
        }
        return g;
    };
    u.laplacian = [scale](Point z) {
        double lap = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            double term = scale;
            for (std::size_t l = 0; l < z.size(); ++l) {
                term *= (l == k) ? bubble_ddp(z[l]) : bubble_p(z[l]);
            }
            lap += term;
        }
        return lap;
    };
    return u;
}

ProblemSpec bubble_problem(DiffusionCoefficient eta, int n) {
    const int d = eta.dim();
    ManufacturedSolution u = polynomial_bubble(d);
    ScalarField forcing = forcing_from_manufactured(u, eta);
    return ProblemSpec{std::move(eta), std::move(forcing), std::move(u), n, d};
}

}  // namespace cscolloc
