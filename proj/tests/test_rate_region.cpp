#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bdrelay/error.hpp"
#include "bdrelay/rate_region.hpp"
#include "bdrelay/region_io.hpp"
#include "oracles.hpp"

using namespace bdrelay;

namespace {

const double kHalfLog3 = 0.5 * std::log2(3.0);

void check_vertices(const RateRegion& r, const std::vector<RatePair>& expected, double tol = 1e-12)
{
    REQUIRE(r.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(r.vertices()[i].r_a - expected[i].r_a) <= tol);
        CHECK(std::abs(r.vertices()[i].r_b - expected[i].r_b) <= tol);
    }
}

RateRegion unit_square()
{
    const std::vector<HalfPlane> h{{1, 0, 1}, {0, 1, 1}};
    return region_from_halfplanes(h);
}

RateRegion pentagon()
{
    const std::vector<HalfPlane> h{{1, 0, 0.5}, {0, 1, 0.5}, {1, 1, kHalfLog3}};
    return region_from_halfplanes(h);
}

}  // namespace

TEST_CASE("half-plane intersection examples")
{
    check_vertices(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    check_vertices(pentagon(), {{0, 0}, {0.5, 0}, {0.5, kHalfLog3 - 0.5}, {kHalfLog3 - 0.5, 0.5}, {0, 0.5}});
    const std::vector<HalfPlane> zero{{1, 1, 0}};
    check_vertices(region_from_halfplanes(zero), {{0, 0}});
}

TEST_CASE("half-plane intersection edge cases")
{
    const std::vector<HalfPlane> open{{1, 0, 1}};
    CHECK_THROWS_AS(region_from_halfplanes(open), UnboundedRegion);
    const std::vector<HalfPlane> diag{{1, -1, 1}};
    CHECK_THROWS_AS(region_from_halfplanes(diag), UnboundedRegion);
    const std::vector<HalfPlane> infeasible{{1, 1, -1}};
    CHECK(region_from_halfplanes(infeasible).empty());
    const std::vector<HalfPlane> segment{{1, 0, 0}, {0, 1, 2}};
    check_vertices(region_from_halfplanes(segment), {{0, 0}, {0, 2}});
    const std::vector<HalfPlane> none;
    CHECK_THROWS_AS(region_from_halfplanes(none), InvalidArgument);
    const std::vector<HalfPlane> zero_normal{{0, 0, 1}};
    CHECK_THROWS_AS(region_from_halfplanes(zero_normal), InvalidArgument);
    const std::vector<HalfPlane> redundant{{1, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 2}, {1, 1, 5}};
    check_vertices(region_from_halfplanes(redundant), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("intersection output satisfies every input")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(0.05, 3.0), rhs(0.0, 4.0), neg(-1.0, 0.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<HalfPlane> h{{coef(rng), 0.0, rhs(rng)}, {0.0, coef(rng), rhs(rng)}};
        const int extra = trial % 6;
        for (int i = 0; i < extra; ++i) h.push_back({coef(rng), (i % 2 ? neg(rng) : coef(rng)), rhs(rng)});
        const auto r = region_from_halfplanes(h);
        REQUIRE_FALSE(r.empty());
        for (const auto& v : r.vertices()) {
            CHECK(v.r_a >= -1e-9);
            CHECK(v.r_b >= -1e-9);
            for (const auto& p : h) CHECK(p.coef_a * v.r_a + p.coef_b * v.r_b <= p.rhs + 1e-9);
        }
    }
}

TEST_CASE("vertex order is counterclockwise from the smallest vertex")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto poly = oracle::random_convex_polygon(rng);
        const auto r = RateRegion::hull_of(poly);
        const auto& v = r.vertices();
        for (std::size_t i = 1; i < v.size(); ++i)
            CHECK((v[0].r_a < v[i].r_a || (v[0].r_a == v[i].r_a && v[0].r_b < v[i].r_b)));
        for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            const auto& c = v[(i + 2) % v.size()];
            CHECK((b.r_a - a.r_a) * (c.r_b - a.r_b) - (b.r_b - a.r_b) * (c.r_a - a.r_a) > 0.0);
        }
    }
}

TEST_CASE("contains examples")
{
    const auto sq = unit_square();
    CHECK(contains(sq, {0.5, 0.5}, 1e-9));
    CHECK(contains(sq, {1.0 + 1e-12, 0}, 1e-9));
    CHECK_FALSE(contains(sq, {1.1, 0}, 1e-9));
    CHECK_FALSE(contains(RateRegion{}, {0, 0}));
    const auto point = RateRegion::hull_of({{0.3, 0.3}});
    CHECK(contains(point, {0.3, 0.3 + 1e-10}));
    CHECK_FALSE(contains(point, {0.3, 0.31}));
    const auto seg = RateRegion::hull_of({{0, 0}, {1, 1}});
    CHECK(contains(seg, {0.5, 0.5}));
    CHECK_FALSE(contains(seg, {0.5, 0.6}));
    CHECK_FALSE(contains(seg, {1.1, 1.1}));
}

TEST_CASE("contains agrees with a rasterized crossing-number oracle")
{
    std::mt19937_64 rng(23);
    const double tol = 1e-9;
    int misclassified = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto poly = oracle::random_convex_polygon(rng);
        const auto region = RateRegion::hull_of(poly);
        for (int i = 0; i < 200; ++i) {
            for (int j = 0; j < 200; ++j) {
                const RatePair p{-0.1 + 3.2 * i / 199.0, -0.1 + 3.2 * j / 199.0};
                if (oracle::distance_to_boundary(poly, p) <= tol) continue;
                if (contains(region, p, tol) != oracle::ray_cast_inside(poly, p)) ++misclassified;
            }
        }
    }
    CHECK(misclassified == 0);
}

TEST_CASE("hull union examples")
{
    const auto sq = unit_square();
    const std::vector<RateRegion> one{sq};
    CHECK(hull_union(one) == sq);
    const std::vector<RateRegion> tris{RateRegion::hull_of({{0, 0}, {1, 0}, {0, 0.2}}),
                                       RateRegion::hull_of({{0, 0}, {0.2, 0}, {0, 1}})};
    check_vertices(hull_union(tris), {{0, 0}, {1, 0}, {0, 1}});
    const std::vector<RateRegion> twins{pentagon(), pentagon()};
    CHECK(hull_union(twins) == pentagon());
    const std::vector<RateRegion> none;
    CHECK_THROWS_AS(hull_union(none), InvalidArgument);
}

TEST_CASE("hull union contains its inputs")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<RateRegion> parts{RateRegion::hull_of(oracle::random_convex_polygon(rng, 6)),
                                            RateRegion::hull_of(oracle::random_convex_polygon(rng, 6)),
                                            RateRegion::hull_of(oracle::random_convex_polygon(rng, 3))};
        const auto u = hull_union(parts);
        for (const auto& p : parts) CHECK_FALSE(exists_point_outside(p, u).has_value());
    }
}

TEST_CASE("max weighted rate examples")
{
    const auto sq = unit_square();
    auto r = max_weighted_rate(sq, 0.5);
    CHECK(r.value == 1.0);
    CHECK(r.argmax == RatePair{1, 1});
    r = max_weighted_rate(sq, 1.0);
    CHECK(r.value == 1.0);
    CHECK(r.argmax == RatePair{1, 1});
    r = max_weighted_rate(pentagon(), 0.5);
    CHECK(r.value == doctest::Approx(0.5 * kHalfLog3).epsilon(1e-14));
    CHECK(r.argmax.r_a == 0.5);
    CHECK(r.argmax.r_b == doctest::Approx(kHalfLog3 - 0.5).epsilon(1e-14));
    CHECK_THROWS_AS(max_weighted_rate(RateRegion{}, 0.5), EmptyRegion);
    CHECK_THROWS_AS(max_weighted_rate(sq, 1.5), InvalidArgument);
}

TEST_CASE("max weighted rate matches boundary sampling")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto poly = oracle::random_convex_polygon(rng);
        const double mu = mu_dist(rng);
        double brute = -1.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& s = poly[i];
            const auto& e = poly[(i + 1) % poly.size()];
            for (int k = 0; k <= 1000; ++k) {
                const double t = k / 1000.0;
                brute = std::max(brute, mu * (s.r_a + t * (e.r_a - s.r_a)) + (1 - mu) * (s.r_b + t * (e.r_b - s.r_b)));
            }
        }
        CHECK(std::abs(max_weighted_rate(RateRegion::hull_of(poly), mu).value - brute) <= 1e-9);
    }
}

TEST_CASE("exists_point_outside examples")
{
    const auto sq = unit_square();
    const std::vector<HalfPlane> big_h{{1, 0, 2}, {0, 1, 2}};
    const auto big = region_from_halfplanes(big_h);
    CHECK_FALSE(exists_point_outside(sq, big).has_value());
    const auto w = exists_point_outside(big, sq);
    REQUIRE(w.has_value());
    CHECK(*w == RatePair{2, 0});
    CHECK_FALSE(exists_point_outside(sq, sq).has_value());
}

TEST_CASE("edge half-planes have unit normals and hold every vertex")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = RateRegion::hull_of(oracle::random_convex_polygon(rng));
        const auto edges = edge_halfplanes(r);
        REQUIRE(edges.size() == r.size());
        for (const auto& h : edges) {
            CHECK(std::hypot(h.coef_a, h.coef_b) == doctest::Approx(1.0).epsilon(1e-14));
            for (const auto& v : r.vertices()) CHECK(h.coef_a * v.r_a + h.coef_b * v.r_b <= h.rhs + 1e-12);
        }
    }
}

TEST_CASE("non-finite points are rejected")
{
    CHECK_THROWS_AS(RateRegion::hull_of({{NAN, 0}}), InvalidArgument);
}

TEST_CASE("CSV and JSON round trips are bit exact")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = RateRegion::hull_of(oracle::random_convex_polygon(rng));
        CHECK(region_from_csv(region_to_csv(r)) == r);
        CHECK(region_from_json(nlohmann::json::parse(region_to_json(r).dump())) == r);
    }
    CHECK(region_to_csv(unit_square()) == "r_a,r_b\n0,0\n1,0\n1,1\n0,1\n");
    CHECK(region_to_json(unit_square()).dump() == "[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]");
}

TEST_CASE("malformed region text is rejected")
{
    CHECK_THROWS_AS(region_from_csv("x,y\n1,2\n"), InvalidArgument);
    CHECK_THROWS_AS(region_from_csv("r_a,r_b\n1;2\n"), InvalidArgument);
    CHECK_THROWS_AS(region_from_csv("r_a,r_b\n1,abc\n"), InvalidArgument);
    CHECK_THROWS_AS(region_from_json(nlohmann::json::parse("[[1,2,3]]")), InvalidArgument);
    CHECK_THROWS_AS(region_from_json(nlohmann::json::parse("{}")), InvalidArgument);
}

TEST_CASE("hull keeps extreme points on near-vertical runs")
{
    // Abscissae differ only in the last bits; the tallest point must survive.
    const double x0 = 0.27789452032153716, x1 = 0.27789452032153722, x2 = 0.27789452032153728;
    const auto h = RateRegion::hull_of({{0, 0}, {x0, 0}, {x0, 0.19266963617310051}, {x0, 0.21391494178496409},
                                        {x1, 0}, {x1, 0.21391494178496409}, {x2, 0}, {x2, 0.16500416037634991},
                                        {0.25, 0.21391494178496409}, {0, 0.21391494178496409}});
    CHECK(contains(h, {x0, 0.21391494178496409}, 1e-12));
    CHECK(max_weighted_rate(h, 0.5).value == doctest::Approx(0.5 * (x1 + 0.21391494178496409)).epsilon(1e-15));
    CHECK(h.size() == 4);
}
