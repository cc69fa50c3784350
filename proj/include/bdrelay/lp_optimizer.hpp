#pragma once

#include <vector>

#include "bdrelay/channel_model.hpp"
#include "bdrelay/parallel.hpp"
#include "bdrelay/protocol_bounds.hpp"
#include "bdrelay/rate_region.hpp"

namespace bdrelay {

/// maximize objective . x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> a_ub;
    std::vector<double> b_ub;
    std::vector<std::vector<double>> a_eq;
    std::vector<double> b_eq;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> point;
};

/// Pivot threshold of the simplex tableau.
inline constexpr double kPivotTol = 1e-11;

/// Dense two-phase tableau simplex with Bland's rule. Infeasible and
/// unbounded programs are reported through the status; a malformed program
/// throws InvalidArgument.
LpSolution simplex_solve(const LinearProgram& lp);

/// Joint (Delta, R_a, R_b) program maximizing mu*R_a + (1-mu)*R_b.
/// Variables are Delta_1..Delta_k followed by R_a, R_b.
LinearProgram schedule_program(const ConstraintSet& set, double mu);

struct ScheduleOptimum {
    PhaseSchedule schedule;
    RatePair rates;
    double value;
};

ScheduleOptimum optimize_schedule(Protocol protocol, BoundKind bound, const MITable& mi, double mu);

/// R_a + R_b at the optimal schedule (twice the mu = 1/2 optimum).
double optimal_sum_rate(Protocol protocol, BoundKind bound, const MITable& mi);

inline constexpr int kDefaultMuGrid = 201;

/// Projection of the feasible (Delta, R) polytope onto the rate plane.
///
/// Support points are collected on a uniform mu grid, the two corners where
/// one rate is maximal are found lexicographically, and every Pareto edge of
/// the running hull is then probed along its normal until no probe moves
/// the boundary by more than the feasibility tolerance. The result is the
/// exact projection up to that tolerance for any grid size >= 2.
RateRegion optimized_region(Protocol protocol, BoundKind bound, const MITable& mi,
                            int mu_grid_size = kDefaultMuGrid,
                            Execution exec = Execution::Parallel);

}  // namespace bdrelay
