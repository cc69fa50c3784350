#include "bdrelay/protocol_bounds.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bdrelay/error.hpp"

namespace bdrelay {

PhaseSchedule::PhaseSchedule(Protocol protocol, std::vector<double> durations)
    : protocol_(protocol), durations_(std::move(durations))
{
    const auto expected = static_cast<std::size_t>(phase_count(protocol));
    if (durations_.size() != expected)
        throw InvalidArgument("delta: " + std::string(to_string(protocol)) + " needs " +
                              std::to_string(expected) + " phase durations, got " +
                              std::to_string(durations_.size()));
    for (std::size_t i = 0; i < durations_.size(); ++i) {
        if (!std::isfinite(durations_[i]) || durations_[i] < 0.0)
            throw InvalidArgument("delta: duration " + std::to_string(i + 1) +
                                  " must be finite and nonnegative");
    }
    const double sum = std::accumulate(durations_.begin(), durations_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidArgument("delta: durations must sum to 1 (sum is " + std::to_string(sum) + ")");
}

double PhaseSchedule::delta(int phase) const
{
    if (phase < 1) throw InvalidArgument("delta: phase index is 1-based");
    const auto idx = static_cast<std::size_t>(phase - 1);
    return idx < durations_.size() ? durations_[idx] : 0.0;
}

std::string_view to_string(BoundKind b)
{
    switch (b) {
    case BoundKind::Inner: return "inner";
    case BoundKind::Outer: return "outer";
    case BoundKind::OuterRelayFree: return "outer_relay_free";
    }
    return "?";
}

BoundKind parse_bound(std::string_view name)
{
    if (name == "inner" || name == "exact") return BoundKind::Inner;
    if (name == "outer") return BoundKind::Outer;
    if (name == "outer_relay_free") return BoundKind::OuterRelayFree;
    throw InvalidArgument("bound: unknown bound kind '" + std::string(name) + "'");
}

void check_bound_supported(Protocol protocol, BoundKind bound)
{
    if (bound == BoundKind::Inner) return;
    if (protocol == Protocol::DT)
        throw UnsupportedBound("bound: dt has an exact region; only 'inner' (alias 'exact') applies");
    if (protocol == Protocol::HBC)
        throw UnsupportedBound(
            "bound: Gaussian evaluation of the hbc outer bound is unsupported; its phase-3 "
            "inputs may be correlated and jointly Gaussian inputs are not known to be optimal");
}

namespace {

class RowBuilder {
public:
    RowBuilder(const MITable& mi, std::string label) : mi_(mi) { row_.label = std::move(label); }

    RowBuilder& rate_a()
    {
        row_.coef[kRateA] = 1.0;
        return *this;
    }
    RowBuilder& rate_b()
    {
        row_.coef[kRateB] = 1.0;
        return *this;
    }
    /// Moves Delta_phase * I(phase, link) to the left-hand side.
    RowBuilder& term(int phase, Link link)
    {
        row_.coef[static_cast<std::size_t>(phase - 1)] -= mi_.at(phase, link);
        return *this;
    }
    LinearConstraint done() { return std::move(row_); }

private:
    const MITable& mi_;
    LinearConstraint row_;
};

}  // namespace

ConstraintSet build_constraints(Protocol protocol, BoundKind bound, const MITable& mi)
{
    if (mi.protocol() != protocol)
        throw InvalidArgument("mi_table: table was built for " + std::string(to_string(mi.protocol())) +
                              ", not " + std::string(to_string(protocol)));
    mi.validate();
    check_bound_supported(protocol, bound);

    ConstraintSet set{protocol, bound, {}};
    auto& out = set.constraints;
    auto row = [&](std::string label) { return RowBuilder(mi, std::move(label)); };
    using L = Link;

    switch (protocol) {
    case Protocol::DT:
        out.push_back(row("R_a <= D1*I(Xa;Yb)").rate_a().term(1, L::Direct).done());
        out.push_back(row("R_b <= D2*I(Xb;Ya)").rate_b().term(2, L::Direct).done());
        break;

    case Protocol::MABC:
        out.push_back(row("R_a <= D1*I(Xa;Yr|Xb)").rate_a().term(1, L::UplinkA).done());
        out.push_back(row("R_a <= D2*I(Xr;Yb)").rate_a().term(2, L::DownlinkB).done());
        out.push_back(row("R_b <= D1*I(Xb;Yr|Xa)").rate_b().term(1, L::UplinkB).done());
        out.push_back(row("R_b <= D2*I(Xr;Ya)").rate_b().term(2, L::DownlinkA).done());
        if (bound != BoundKind::OuterRelayFree)
            out.push_back(row("R_a+R_b <= D1*I(Xa,Xb;Yr)").rate_a().rate_b().term(1, L::MacSum).done());
        break;

    case Protocol::TDBC:
        if (bound == BoundKind::Inner) {
            out.push_back(row("R_a <= D1*I(Xa;Yr)").rate_a().term(1, L::UplinkA).done());
        } else {
            out.push_back(row("R_a <= D1*I(Xa;Yr,Yb)").rate_a().term(1, L::JointA).done());
        }
        out.push_back(row("R_a <= D1*I(Xa;Yb)+D3*I(Xr;Yb)").rate_a().term(1, L::Direct).term(3, L::DownlinkB).done());
        if (bound == BoundKind::Inner) {
            out.push_back(row("R_b <= D2*I(Xb;Yr)").rate_b().term(2, L::UplinkB).done());
        } else {
            out.push_back(row("R_b <= D2*I(Xb;Yr,Ya)").rate_b().term(2, L::JointB).done());
        }
        out.push_back(row("R_b <= D2*I(Xb;Ya)+D3*I(Xr;Ya)").rate_b().term(2, L::Direct).term(3, L::DownlinkA).done());
        if (bound == BoundKind::Outer)
            out.push_back(row("R_a+R_b <= D1*I(Xa;Yr)+D2*I(Xb;Yr)")
                              .rate_a().rate_b().term(1, L::UplinkA).term(2, L::UplinkB).done());
        break;

    case Protocol::HBC:
        out.push_back(row("R_a <= D1*I(Xa;Yr)+D3*I(Xa;Yr|Xb)").rate_a().term(1, L::UplinkA).term(3, L::UplinkA).done());
        out.push_back(row("R_a <= D1*I(Xa;Yb)+D4*I(Xr;Yb)").rate_a().term(1, L::Direct).term(4, L::DownlinkB).done());
        out.push_back(row("R_b <= D2*I(Xb;Yr)+D3*I(Xb;Yr|Xa)").rate_b().term(2, L::UplinkB).term(3, L::UplinkB).done());
        out.push_back(row("R_b <= D2*I(Xb;Ya)+D4*I(Xr;Ya)").rate_b().term(2, L::Direct).term(4, L::DownlinkA).done());
        out.push_back(row("R_a+R_b <= D1*I(Xa;Yr)+D2*I(Xb;Yr)+D3*I(Xa,Xb;Yr)")
                          .rate_a().rate_b().term(1, L::UplinkA).term(2, L::UplinkB).term(3, L::MacSum).done());
        break;
    }
    return set;
}

std::vector<HalfPlane> substitute(const ConstraintSet& set, const PhaseSchedule& sched)
{
    if (sched.protocol() != set.protocol)
        throw InvalidArgument("delta: schedule is for " + std::string(to_string(sched.protocol())) +
                              ", constraints are for " + std::string(to_string(set.protocol)));
    std::vector<HalfPlane> planes;
    planes.reserve(set.constraints.size());
    for (const auto& c : set.constraints) {
        double rhs = 0.0;
        for (std::size_t l = 0; l < 4; ++l) rhs -= c.coef[l] * sched.delta(static_cast<int>(l) + 1);
        planes.push_back({c.coef[kRateA], c.coef[kRateB], rhs});
    }
    return planes;
}

RateRegion fixed_delta_region(Protocol protocol, BoundKind bound, const MITable& mi,
                              const PhaseSchedule& sched)
{
    const auto set = build_constraints(protocol, bound, mi);
    const auto planes = substitute(set, sched);
    return region_from_halfplanes(planes);
}

}  // namespace bdrelay
