#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bdrelay {

/// Feasibility tolerance used throughout region geometry.
inline constexpr double kFeasibilityTol = 1e-9;
/// Cross-product threshold below which three vertices count as collinear.
inline constexpr double kCollinearTol = 1e-12;

struct RatePair {
    double r_a = 0.0;
    double r_b = 0.0;

    friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// coef_a * R_a + coef_b * R_b <= rhs
struct HalfPlane {
    double coef_a;
    double coef_b;
    double rhs;
};

/// Convex polygon of rate pairs stored as counterclockwise vertices starting
/// at the lexicographically smallest one. Points and segments are legal
/// degenerate regions; an empty vertex list is the empty region.
class RateRegion {
public:
    RateRegion() = default;

    /// Takes the convex hull of the given points.
    static RateRegion hull_of(std::vector<RatePair> points);

    const std::vector<RatePair>& vertices() const { return vertices_; }
    bool empty() const { return vertices_.empty(); }
    std::size_t size() const { return vertices_.size(); }

    friend bool operator==(const RateRegion&, const RateRegion&) = default;

private:
    explicit RateRegion(std::vector<RatePair> v) : vertices_(std::move(v)) {}
    std::vector<RatePair> vertices_;
};

/// Intersects the half-planes with the first quadrant. Throws UnboundedRegion
/// if the result is unbounded; an infeasible system yields the empty region.
RateRegion region_from_halfplanes(std::span<const HalfPlane> planes);

bool contains(const RateRegion& region, RatePair p, double tol = kFeasibilityTol);

RateRegion hull_union(std::span<const RateRegion> regions);

struct WeightedOptimum {
    double value;
    RatePair argmax;
};

/// Maximizes mu * R_a + (1 - mu) * R_b over the vertices. Ties go to the
/// larger R_a, then the larger R_b. Throws EmptyRegion on an empty region.
WeightedOptimum max_weighted_rate(const RateRegion& region, double mu);

/// First vertex of `a` (in vertex order) that lies outside `b` by more than
/// `tol`, or nullopt when a is contained in b.
std::optional<RatePair> exists_point_outside(const RateRegion& a, const RateRegion& b,
                                             double tol = kFeasibilityTol);

/// Outward edge inequalities of a polygon with at least three vertices, with
/// unit-length normals.
std::vector<HalfPlane> edge_halfplanes(const RateRegion& region);

}  // namespace bdrelay
