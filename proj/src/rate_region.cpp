#include "bdrelay/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdrelay/error.hpp"

namespace bdrelay {

namespace {

double cross(RatePair o, RatePair a, RatePair b)
{
    return (a.r_a - o.r_a) * (b.r_b - o.r_b) - (a.r_b - o.r_b) * (b.r_a - o.r_a);
}

double distance_to_segment(RatePair p, RatePair s, RatePair e)
{
    const double dx = e.r_a - s.r_a;
    const double dy = e.r_b - s.r_b;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.r_a - s.r_a) * dx + (p.r_b - s.r_b) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.r_a - (s.r_a + t * dx), p.r_b - (s.r_b + t * dy));
}

// Removes vertices lying within kCollinearTol of the chord joining their
// neighbours, then restores the lexicographically smallest start.
void drop_collinear(std::vector<RatePair>& hull)
{
    bool changed = true;
    while (changed && hull.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < hull.size() && hull.size() >= 3; ++i) {
            const RatePair prev = hull[(i + hull.size() - 1) % hull.size()];
            const RatePair next = hull[(i + 1) % hull.size()];
            const double chord = std::hypot(next.r_a - prev.r_a, next.r_b - prev.r_b);
            if (cross(prev, hull[i], next) <= kCollinearTol * chord) {
                hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    const auto first = std::min_element(hull.begin(), hull.end(), [](RatePair x, RatePair y) {
        return x.r_a < y.r_a || (x.r_a == y.r_a && x.r_b < y.r_b);
    });
    std::rotate(hull.begin(), first, hull.end());
}

// Positive zero for anything inside (-tol, 0].
double snap_nonnegative(double v)
{
    if (v <= 0.0 && v > -kFeasibilityTol) return 0.0;
    return v;
}

struct UnitPlane {
    double a, b, rhs;
};

UnitPlane normalize(const HalfPlane& h)
{
    const double n = std::hypot(h.coef_a, h.coef_b);
    return {h.coef_a / n, h.coef_b / n, h.rhs / n};
}

}  // namespace

RateRegion RateRegion::hull_of(std::vector<RatePair> points)
{
    for (const auto& p : points) {
        if (!std::isfinite(p.r_a) || !std::isfinite(p.r_b))
            throw InvalidArgument("rate_region: vertex coordinates must be finite");
    }
    std::sort(points.begin(), points.end(), [](RatePair x, RatePair y) {
        return x.r_a < y.r_a || (x.r_a == y.r_a && x.r_b < y.r_b);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](RatePair x, RatePair y) {
                                 return std::abs(x.r_a - y.r_a) <= kCollinearTol &&
                                        std::abs(x.r_b - y.r_b) <= kCollinearTol;
                             }),
                 points.end());
    if (points.size() <= 1) return RateRegion(std::move(points));

    // Andrew's monotone chain on exact orientation signs. A tolerance here
    // would pop the far point of a near-vertical run whose abscissae differ
    // only by rounding.
    std::vector<RatePair> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = points.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() == 2 && hull[0] == hull[1]) hull.pop_back();
    drop_collinear(hull);
    return RateRegion(std::move(hull));
}

RateRegion region_from_halfplanes(std::span<const HalfPlane> planes)
{
    if (planes.empty()) throw InvalidArgument("planes: at least one half-plane is required");

    std::vector<HalfPlane> all(planes.begin(), planes.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& h = all[i];
        if (!std::isfinite(h.coef_a) || !std::isfinite(h.coef_b) || !std::isfinite(h.rhs))
            throw InvalidArgument("planes: half-plane " + std::to_string(i) + " is not finite");
        if (h.coef_a == 0.0 && h.coef_b == 0.0)
            throw InvalidArgument("planes: half-plane " + std::to_string(i) + " has a zero normal");
    }
    all.push_back({-1.0, 0.0, 0.0});
    all.push_back({0.0, -1.0, 0.0});

    std::vector<UnitPlane> unit;
    unit.reserve(all.size());
    for (const auto& h : all) unit.push_back(normalize(h));

    auto feasible = [&](RatePair p) {
        for (const auto& u : unit) {
            if (u.a * p.r_a + u.b * p.r_b - u.rhs > kFeasibilityTol) return false;
        }
        return true;
    };

    std::vector<RatePair> candidates;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto& p = all[i];
            const auto& q = all[j];
            const double det = p.coef_a * q.coef_b - p.coef_b * q.coef_a;
            if (std::abs(det) < 1e-15 * std::hypot(p.coef_a, p.coef_b) * std::hypot(q.coef_a, q.coef_b))
                continue;
            RatePair v{(p.rhs * q.coef_b - p.coef_b * q.rhs) / det,
                       (p.coef_a * q.rhs - p.rhs * q.coef_a) / det};
            v.r_a = snap_nonnegative(v.r_a) + 0.0;
            v.r_b = snap_nonnegative(v.r_b) + 0.0;
            if (feasible(v)) candidates.push_back(v);
        }
    }
    if (candidates.empty()) return RateRegion{};

    // A nonempty polyhedron in the quadrant is unbounded iff some nonnegative
    // direction is a recession direction. The recession cone is an angular
    // interval, so checking its possible endpoints suffices.
    std::vector<RatePair> directions{{1.0, 0.0}, {0.0, 1.0}};
    for (const auto& u : unit) {
        RatePair d{u.b, -u.a};
        if (d.r_a < 0.0 || d.r_b < 0.0) d = {-u.b, u.a};
        if (d.r_a >= 0.0 && d.r_b >= 0.0) directions.push_back(d);
    }
    for (const auto& d : directions) {
        bool recedes = true;
        for (const auto& u : unit) {
            if (u.a * d.r_a + u.b * d.r_b > 1e-12) {
                recedes = false;
                break;
            }
        }
        if (recedes)
            throw UnboundedRegion("planes: region is unbounded along direction (" +
                                  std::to_string(d.r_a) + ", " + std::to_string(d.r_b) + ")");
    }

    return RateRegion::hull_of(std::move(candidates));
}

std::vector<HalfPlane> edge_halfplanes(const RateRegion& region)
{
    const auto& v = region.vertices();
    std::vector<HalfPlane> out;
    if (v.size() < 3) return out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const RatePair s = v[i];
        const RatePair e = v[(i + 1) % v.size()];
        const double dx = e.r_a - s.r_a;
        const double dy = e.r_b - s.r_b;
        const double len = std::hypot(dx, dy);
        const double na = dy / len;
        const double nb = -dx / len;
        out.push_back({na, nb, na * s.r_a + nb * s.r_b});
    }
    return out;
}

bool contains(const RateRegion& region, RatePair p, double tol)
{
    const auto& v = region.vertices();
    switch (v.size()) {
    case 0: return false;
    case 1: return std::hypot(p.r_a - v[0].r_a, p.r_b - v[0].r_b) <= tol;
    case 2: return distance_to_segment(p, v[0], v[1]) <= tol;
    default: break;
    }
    for (const auto& h : edge_halfplanes(region)) {
        if (h.coef_a * p.r_a + h.coef_b * p.r_b - h.rhs > tol) return false;
    }
    return true;
}

RateRegion hull_union(std::span<const RateRegion> regions)
{
    if (regions.empty()) throw InvalidArgument("regions: at least one region is required");
    std::vector<RatePair> points;
    for (const auto& r : regions) points.insert(points.end(), r.vertices().begin(), r.vertices().end());
    return RateRegion::hull_of(std::move(points));
}

WeightedOptimum max_weighted_rate(const RateRegion& region, double mu)
{
    if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("mu: must lie in [0, 1]");
    if (region.empty()) throw EmptyRegion("max_weighted_rate: region is empty");

    auto weigh = [mu](RatePair p) { return mu * p.r_a + (1.0 - mu) * p.r_b; };
    WeightedOptimum best{weigh(region.vertices().front()), region.vertices().front()};
    for (const auto& p : region.vertices()) {
        const double val = weigh(p);
        const double tie = 1e-12 * std::max(1.0, std::abs(best.value));
        if (val > best.value + tie) {
            best = {val, p};
        } else if (val >= best.value - tie) {
            if (p.r_a > best.argmax.r_a || (p.r_a == best.argmax.r_a && p.r_b > best.argmax.r_b))
                best = {val, p};
        }
    }
    return best;
}

std::optional<RatePair> exists_point_outside(const RateRegion& a, const RateRegion& b, double tol)
{
    for (const auto& p : a.vertices()) {
        if (!contains(b, p, tol)) return p;
    }
    return std::nullopt;
}

}  // namespace bdrelay
