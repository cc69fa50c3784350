#include "bdrelay/lp_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bdrelay/error.hpp"

namespace bdrelay {

namespace {

// Dense tableau: rows hold [coefficients | rhs], `basis[i]` is the column
// basic in row i.
struct Tableau {
    std::size_t cols = 0;  // structural + slack + artificial, excluding rhs
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> basis;

    double rhs(std::size_t i) const { return rows[i][cols]; }

    void pivot(std::size_t r, std::size_t c)
    {
        auto& pr = rows[r];
        const double inv = 1.0 / pr[c];
        for (auto& v : pr) v *= inv;
        pr[c] = 1.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r) continue;
            const double f = rows[i][c];
            if (f == 0.0) continue;
            auto& row = rows[i];
            for (std::size_t j = 0; j <= cols; ++j) row[j] -= f * pr[j];
            row[c] = 0.0;
        }
        basis[r] = c;
    }
};

enum class PhaseResult { Optimal, Unbounded };

// Maximizes cost . x over the tableau using Bland's rule: the entering
// column is the lowest-index improving column, the leaving row the
// min-ratio row with the lowest basic index.
PhaseResult run_simplex(Tableau& t, const std::vector<double>& cost, std::size_t allowed_cols)
{
    const std::size_t max_iter = 50 * (t.cols + t.rows.size() + 10);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::size_t enter = allowed_cols;
        for (std::size_t j = 0; j < allowed_cols; ++j) {
            double reduced = cost[j];
            for (std::size_t i = 0; i < t.rows.size(); ++i) reduced -= cost[t.basis[i]] * t.rows[i][j];
            if (reduced > kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter == allowed_cols) return PhaseResult::Optimal;

        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double a = t.rows[i][enter];
            if (a > kPivotTol) best_ratio = std::min(best_ratio, t.rhs(i) / a);
        }
        if (!std::isfinite(best_ratio)) return PhaseResult::Unbounded;

        std::size_t leave = t.rows.size();
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double a = t.rows[i][enter];
            if (a <= kPivotTol || t.rhs(i) / a > best_ratio + 1e-12) continue;
            if (leave == t.rows.size() || t.basis[i] < t.basis[leave]) leave = i;
        }
        t.pivot(leave, enter);
    }
    throw Error("simplex: iteration limit reached");
}

void check_shape(const LinearProgram& lp)
{
    const std::size_t n = lp.objective.size();
    if (n == 0) throw InvalidArgument("lp: objective is empty");
    if (lp.a_ub.size() != lp.b_ub.size()) throw InvalidArgument("lp: a_ub and b_ub row counts differ");
    if (lp.a_eq.size() != lp.b_eq.size()) throw InvalidArgument("lp: a_eq and b_eq row counts differ");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(lp.objective.begin(), lp.objective.end(), finite))
        throw InvalidArgument("lp: objective is not finite");
    for (const auto* block : {&lp.a_ub, &lp.a_eq}) {
        for (const auto& row : *block) {
            if (row.size() != n) throw InvalidArgument("lp: constraint row width differs from objective");
            if (!std::all_of(row.begin(), row.end(), finite))
                throw InvalidArgument("lp: constraint row is not finite");
        }
    }
    for (const auto* rhs : {&lp.b_ub, &lp.b_eq}) {
        if (!std::all_of(rhs->begin(), rhs->end(), finite)) throw InvalidArgument("lp: rhs is not finite");
    }
}

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp)
{
    check_shape(lp);
    const std::size_t n = lp.objective.size();
    const std::size_t m_ub = lp.a_ub.size();
    const std::size_t m = m_ub + lp.a_eq.size();

    // Rows needing an artificial: <= rows with negative rhs and all equalities.
    std::size_t n_art = lp.a_eq.size();
    for (double b : lp.b_ub) n_art += b < 0.0 ? 1 : 0;

    Tableau t;
    t.cols = n + m_ub + n_art;
    t.rows.assign(m, std::vector<double>(t.cols + 1, 0.0));
    t.basis.assign(m, 0);

    std::size_t art = n + m_ub;
    for (std::size_t i = 0; i < m_ub; ++i) {
        auto& row = t.rows[i];
        const double sign = lp.b_ub[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) row[j] = sign * lp.a_ub[i][j];
        row[n + i] = sign;
        row[t.cols] = sign * lp.b_ub[i];
        if (sign > 0.0) {
            t.basis[i] = n + i;
        } else {
            row[art] = 1.0;
            t.basis[i] = art++;
        }
    }
    for (std::size_t e = 0; e < lp.a_eq.size(); ++e) {
        auto& row = t.rows[m_ub + e];
        const double sign = lp.b_eq[e] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) row[j] = sign * lp.a_eq[e][j];
        row[t.cols] = sign * lp.b_eq[e];
        row[art] = 1.0;
        t.basis[m_ub + e] = art++;
    }

    const std::size_t first_art = n + m_ub;
    if (n_art > 0) {
        std::vector<double> phase1(t.cols, 0.0);
        for (std::size_t j = first_art; j < t.cols; ++j) phase1[j] = -1.0;
        run_simplex(t, phase1, t.cols);

        double infeasibility = 0.0;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            if (t.basis[i] >= first_art) infeasibility += t.rhs(i);
        }
        if (infeasibility > 1e-9) return {LpStatus::Infeasible, 0.0, {}};

        // Pivot remaining zero-level artificials out, dropping redundant rows.
        for (std::size_t i = 0; i < t.rows.size();) {
            if (t.basis[i] < first_art) {
                ++i;
                continue;
            }
            std::size_t col = first_art;
            for (std::size_t j = 0; j < first_art; ++j) {
                if (std::abs(t.rows[i][j]) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col == first_art) {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                t.pivot(i, col);
                ++i;
            }
        }
    }

    std::vector<double> cost(t.cols, 0.0);
    std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
    if (run_simplex(t, cost, first_art) == PhaseResult::Unbounded) return {LpStatus::Unbounded, 0.0, {}};

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.point.assign(n, 0.0);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.basis[i] < n) sol.point[t.basis[i]] = t.rhs(i);
    }
    sol.value = std::inner_product(lp.objective.begin(), lp.objective.end(), sol.point.begin(), 0.0);
    return sol;
}

LinearProgram schedule_program(const ConstraintSet& set, double mu)
{
    if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("mu: must lie in [0, 1]");
    const auto k = static_cast<std::size_t>(phase_count(set.protocol));
    const std::size_t n = k + 2;

    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    lp.objective[k] = mu;
    lp.objective[k + 1] = 1.0 - mu;
    for (const auto& c : set.constraints) {
        std::vector<double> row(n, 0.0);
        for (std::size_t l = 0; l < k; ++l) row[l] = c.coef[l];
        row[k] = c.coef[kRateA];
        row[k + 1] = c.coef[kRateB];
        lp.a_ub.push_back(std::move(row));
        lp.b_ub.push_back(0.0);
    }
    std::vector<double> simplex_row(n, 0.0);
    std::fill(simplex_row.begin(), simplex_row.begin() + static_cast<std::ptrdiff_t>(k), 1.0);
    lp.a_eq.push_back(std::move(simplex_row));
    lp.b_eq.push_back(1.0);
    return lp;
}

namespace {

ScheduleOptimum solve_schedule(const ConstraintSet& set, const LinearProgram& lp, double mu)
{
    const auto sol = simplex_solve(lp);
    if (sol.status != LpStatus::Optimal)
        throw Error("lp: schedule program for " + std::string(to_string(set.protocol)) +
                    " did not reach an optimum");
    const auto k = static_cast<std::size_t>(phase_count(set.protocol));
    std::vector<double> durations(sol.point.begin(), sol.point.begin() + static_cast<std::ptrdiff_t>(k));
    for (auto& d : durations) d = std::max(d, 0.0);
    const double total = std::accumulate(durations.begin(), durations.end(), 0.0);
    for (auto& d : durations) d /= total;
    RatePair rates{std::max(sol.point[k], 0.0), std::max(sol.point[k + 1], 0.0)};
    return {PhaseSchedule(set.protocol, std::move(durations)), rates,
            mu * rates.r_a + (1.0 - mu) * rates.r_b};
}

}  // namespace

ScheduleOptimum optimize_schedule(Protocol protocol, BoundKind bound, const MITable& mi, double mu)
{
    const auto set = build_constraints(protocol, bound, mi);
    return solve_schedule(set, schedule_program(set, mu), mu);
}

double optimal_sum_rate(Protocol protocol, BoundKind bound, const MITable& mi)
{
    return 2.0 * optimize_schedule(protocol, bound, mi, 0.5).value;
}

namespace {

// Maximizes one rate, then the other with the first held at its optimum.
RatePair lexicographic_corner(const ConstraintSet& set, bool rate_a_first)
{
    const double mu = rate_a_first ? 1.0 : 0.0;
    auto lp = schedule_program(set, mu);
    const auto first = solve_schedule(set, lp, mu);
    const double best = rate_a_first ? first.rates.r_a : first.rates.r_b;

    const auto k = static_cast<std::size_t>(phase_count(set.protocol));
    std::vector<double> floor_row(k + 2, 0.0);
    floor_row[rate_a_first ? k : k + 1] = -1.0;
    lp.a_ub.push_back(std::move(floor_row));
    lp.b_ub.push_back(-(best - 1e-12 * std::max(1.0, best)));
    lp.objective.assign(k + 2, 0.0);
    lp.objective[rate_a_first ? k + 1 : k] = 1.0;
    const auto second = solve_schedule(set, lp, 1.0 - mu);
    return second.rates;
}

}  // namespace

RateRegion optimized_region(Protocol protocol, BoundKind bound, const MITable& mi, int mu_grid_size,
                            Execution exec)
{
    if (mu_grid_size < 2) throw InvalidArgument("mu_grid_size: must be at least 2");
    const auto set = build_constraints(protocol, bound, mi);

    const auto n = static_cast<std::size_t>(mu_grid_size);
    std::vector<RatePair> support(n);
    [[maybe_unused]] const bool parallel = exec == Execution::Parallel;
    ExceptionSink sink;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t i = 0; i < n; ++i) {
        sink.run([&] {
            const double mu = static_cast<double>(i) / static_cast<double>(n - 1);
            support[i] = solve_schedule(set, schedule_program(set, mu), mu).rates;
        });
    }
    sink.rethrow();

    const RatePair top = lexicographic_corner(set, false);
    const RatePair right = lexicographic_corner(set, true);
    std::vector<RatePair> points = support;
    points.push_back({0.0, 0.0});
    points.push_back({0.0, top.r_b});
    points.push_back(top);
    points.push_back(right);
    points.push_back({right.r_a, 0.0});

    // Probe every edge whose outward normal points strictly into the positive
    // quadrant; the other edges lie on the axes or at the exact corners.
    for (int round = 0; round < 1000; ++round) {
        const auto hull = RateRegion::hull_of(points);
        const auto edges = edge_halfplanes(hull);
        bool grew = false;
        for (const auto& e : edges) {
            if (e.coef_a <= 1e-12 || e.coef_b <= 1e-12) continue;
            const double mu = e.coef_a / (e.coef_a + e.coef_b);
            const auto opt = solve_schedule(set, schedule_program(set, mu), mu);
            const double edge_value = e.rhs / (e.coef_a + e.coef_b);
            if (opt.value > edge_value + kFeasibilityTol) {
                points.push_back(opt.rates);
                grew = true;
            }
        }
        if (!grew) return hull;
    }
    throw Error("optimized_region: boundary refinement did not converge");
}

}  // namespace bdrelay
