#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bdrelay/channel_model.hpp"
#include "bdrelay/rate_region.hpp"

namespace bdrelay {

/// Relative phase durations of one protocol. Nonnegative, summing to one.
class PhaseSchedule {
public:
    PhaseSchedule(Protocol protocol, std::vector<double> durations);

    Protocol protocol() const { return protocol_; }
    const std::vector<double>& durations() const { return durations_; }
    /// 1-based; phases beyond the protocol's count read as zero.
    double delta(int phase) const;

private:
    Protocol protocol_;
    std::vector<double> durations_;
};

enum class BoundKind { Inner, Outer, OuterRelayFree };

std::string_view to_string(BoundKind b);
/// Accepts inner, exact (alias of inner), outer and outer_relay_free.
BoundKind parse_bound(std::string_view name);

/// Throws UnsupportedBound when the pair has no evaluation.
void check_bound_supported(Protocol protocol, BoundKind bound);

/// Variable order of every constraint row.
enum Var : std::size_t { kDelta1, kDelta2, kDelta3, kDelta4, kRateA, kRateB, kVarCount };

/// coef . (D1, D2, D3, D4, R_a, R_b) <= 0
struct LinearConstraint {
    std::array<double, kVarCount> coef{};
    std::string label;
};

struct ConstraintSet {
    Protocol protocol;
    BoundKind bound;
    std::vector<LinearConstraint> constraints;
};

ConstraintSet build_constraints(Protocol protocol, BoundKind bound, const MITable& mi);

/// Substitutes the durations into the constraints.
std::vector<HalfPlane> substitute(const ConstraintSet& set, const PhaseSchedule& sched);

RateRegion fixed_delta_region(Protocol protocol, BoundKind bound, const MITable& mi,
                              const PhaseSchedule& sched);

}  // namespace bdrelay
