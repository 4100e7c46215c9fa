#include "subtile/geometry.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace subtile;
using Catch::Matchers::WithinAbs;

namespace {

polygon unit_square() { return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }
polygon triangle_345() { return {{{0, 0}, {3, 0}, {0, 4}}}; }

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

isometry random_isometry(std::mt19937_64& rng) {
    isometry iso = rotation(2.0 * M_PI * u01(rng));
    iso.reflect = u01(rng) < 0.5;
    iso.t = {10.0 * u01(rng) - 5.0, 10.0 * u01(rng) - 5.0};
    return iso;
}

}  // namespace

TEST_CASE("vector basics", "[geometry]") {
    CHECK(dot({1, 2}, {3, 4}) == 11.0);
    CHECK(cross({1, 0}, {0, 1}) == 1.0);
    CHECK(cross({0, 1}, {1, 0}) == -1.0);
    CHECK_THAT(norm({3, 4}), WithinAbs(5.0, 1e-15));
    CHECK_THAT(dist({1, 1}, {4, 5}), WithinAbs(5.0, 1e-15));
}

TEST_CASE("rotation and translation act as expected", "[geometry]") {
    vec2 p = rotation(M_PI / 2.0)({1, 0});
    CHECK_THAT(p.x, WithinAbs(0.0, 1e-15));
    CHECK_THAT(p.y, WithinAbs(1.0, 1e-15));
    vec2 q = translation({2, 3})({1, 1});
    CHECK(q.x == 3.0);
    CHECK(q.y == 4.0);
}

TEST_CASE("mirror acts before the rotation", "[geometry]") {
    isometry iso = rotation(M_PI / 2.0);
    iso.reflect = true;
    // (0,1) -> mirror -> (0,-1) -> quarter turn -> (1,0)
    vec2 p = iso({0, 1});
    CHECK_THAT(p.x, WithinAbs(1.0, 1e-14));
    CHECK_THAT(p.y, WithinAbs(0.0, 1e-14));
}

TEST_CASE("compose applies the right factor first", "[geometry]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        isometry a = random_isometry(rng), b = random_isometry(rng);
        vec2 x{u01(rng), u01(rng)};
        vec2 lhs = compose(a, b)(x), rhs = a(b(x));
        CHECK_THAT(lhs.x, WithinAbs(rhs.x, 1e-12));
        CHECK_THAT(lhs.y, WithinAbs(rhs.y, 1e-12));
    }
}

TEST_CASE("inverse round trips", "[geometry]") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        isometry iso = random_isometry(rng);
        vec2 x{10.0 * u01(rng), 10.0 * u01(rng)};
        vec2 back = inverse(iso)(iso(x));
        CHECK_THAT(back.x, WithinAbs(x.x, 1e-12));
        CHECK_THAT(back.y, WithinAbs(x.y, 1e-12));
    }
}

TEST_CASE("rotation angle recovers theta", "[geometry]") {
    for (double theta : {-2.5, -1.0, 0.0, 0.7, 3.0}) {
        CHECK_THAT(rotation_angle(rotation(theta)), WithinAbs(theta, 1e-14));
    }
}

TEST_CASE("areas, centroid, diameter", "[geometry]") {
    CHECK_THAT(area(unit_square()), WithinAbs(1.0, 1e-15));
    CHECK_THAT(signed_area(unit_square()), WithinAbs(1.0, 1e-15));
    polygon cw{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
    CHECK(signed_area(cw) < 0.0);
    CHECK_THAT(area(cw), WithinAbs(1.0, 1e-15));
    vec2 c = centroid(unit_square());
    CHECK_THAT(c.x, WithinAbs(0.5, 1e-15));
    CHECK_THAT(c.y, WithinAbs(0.5, 1e-15));
    CHECK_THAT(diameter(triangle_345()), WithinAbs(5.0, 1e-15));
}

TEST_CASE("orientation, simplicity, convexity", "[geometry]") {
    CHECK(is_ccw(unit_square()));
    CHECK_FALSE(is_ccw({{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}));
    CHECK(is_simple(unit_square(), 1e-12));
    polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
    CHECK_FALSE(is_simple(bowtie, 1e-12));
    CHECK(is_convex(unit_square(), 1e-12));
    polygon ell{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    CHECK_FALSE(is_convex(ell, 1e-12));
    CHECK(is_simple(ell, 1e-12));
}

TEST_CASE("validate_polygon rejects degenerate input", "[geometry]") {
    CHECK_THROWS_AS(validate_polygon({{{0, 0}, {1, 0}}}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(validate_polygon({{{0, 0}, {1, 0}, {2, 0}}}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(validate_polygon({{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}, 1e-9),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_polygon(unit_square(), 1e-9));
    // clockwise input is the caller's business, not an error
    CHECK_NOTHROW(validate_polygon({{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}, 1e-9));
}

TEST_CASE("apply keeps counterclockwise order under reflection", "[geometry]") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
        isometry iso = random_isometry(rng);
        polygon moved = apply(iso, triangle_345());
        CHECK(is_ccw(moved));
        CHECK_THAT(area(moved), WithinAbs(6.0, 1e-9));
    }
}

TEST_CASE("point location against a closed square", "[geometry]") {
    polygon sq = unit_square();
    CHECK(locate_point(sq, {0.5, 0.5}, 1e-9) == point_class::inside);
    CHECK(locate_point(sq, {1.5, 0.5}, 1e-9) == point_class::outside);
    CHECK(locate_point(sq, {1.0, 0.5}, 1e-9) == point_class::boundary);
    CHECK(locate_point(sq, {0.0, 0.0}, 1e-9) == point_class::boundary);
    CHECK(locate_point(sq, {0.5, -1e-3}, 1e-9) == point_class::outside);
}

TEST_CASE("distances to a polygon", "[geometry]") {
    polygon sq = unit_square();
    CHECK(distance_to_polygon(sq, {0.5, 0.5}) == 0.0);
    CHECK_THAT(distance_to_polygon(sq, {2.0, 0.5}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(distance_to_polygon(sq, {2.0, 2.0}), WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(boundary_distance(sq, {0.5, 0.5}), WithinAbs(0.5, 1e-15));
    CHECK_THAT(boundary_distance(sq, {0.25, 0.5}), WithinAbs(0.25, 1e-15));
    CHECK_THAT(boundary_distance(sq, {2.0, 0.5}), WithinAbs(1.0, 1e-15));
}

TEST_CASE("segment predicates", "[geometry]") {
    CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}, 1e-12));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}, 1e-12));
    CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 5}, 1e-12));   // shared endpoint
    CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, -3}, 1e-12));  // T contact
    CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}, 1e-12));   // collinear overlap
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}, 1e-12));
    CHECK_THAT(point_segment_distance({0, 1}, {-1, 0}, {1, 0}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(point_segment_distance({3, 0}, {-1, 0}, {1, 0}), WithinAbs(2.0, 1e-15));
}

TEST_CASE("closed containment allows boundary contact", "[geometry]") {
    polygon outer{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
    polygon inner{{{1, 1}, {2, 1}, {2, 2}, {1, 2}}};
    polygon touching{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    polygon poking{{{3, 3}, {5, 3}, {5, 5}, {3, 5}}};
    CHECK(contains(outer, inner, 1e-9));
    CHECK(contains(outer, touching, 1e-9));
    CHECK_FALSE(contains(outer, poking, 1e-9));
    CHECK_FALSE(contains(inner, outer, 1e-9));
}

TEST_CASE("meets_curve semantics: touch counts, strict inside does not", "[geometry]") {
    polygon curve{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
    polygon strictly_inside{{{4, 4}, {6, 4}, {6, 6}, {4, 6}}};
    polygon crossing{{{9, 4}, {11, 4}, {11, 6}, {9, 6}}};
    polygon touching{{{10, 4}, {12, 4}, {12, 6}, {10, 6}}};
    polygon corner{{{10, 10}, {11, 10}, {11, 11}, {10, 11}}};
    polygon outside{{{20, 20}, {21, 20}, {21, 21}, {20, 21}}};
    polygon swallows{{{-1, -1}, {11, -1}, {11, 11}, {-1, 11}}};
    CHECK_FALSE(meets_curve(curve, strictly_inside, 1e-9));
    CHECK(meets_curve(curve, crossing, 1e-9));
    CHECK(meets_curve(curve, touching, 1e-9));
    CHECK(meets_curve(curve, corner, 1e-9));
    CHECK_FALSE(meets_curve(curve, outside, 1e-9));
    // the curve runs entirely inside this tile, so they meet
    CHECK(meets_curve(curve, swallows, 1e-9));
}

TEST_CASE("meets_curve is rigid motion invariant", "[geometry]") {
    std::mt19937_64 rng(17);
    polygon curve{{{0, 0}, {3, 0}, {3, 3}, {0, 3}}};
    for (int i = 0; i < 60; ++i) {
        polygon tile{{{2.0 + 4.0 * u01(rng), 2.0 + 4.0 * u01(rng)}, {0, 0}, {0, 0}}};
        vec2 base = tile.v[0];
        tile.v[1] = base + vec2{1.5, 0.2};
        tile.v[2] = base + vec2{0.4, 1.1};
        bool before = meets_curve(curve, tile, 1e-9);
        isometry iso = random_isometry(rng);
        bool after = meets_curve(apply(iso, curve), apply(iso, tile), 1e-9);
        CHECK(before == after);
    }
}

TEST_CASE("meets_polyline detects touch and containment", "[geometry]") {
    polygon tile = unit_square();
    std::vector<vec2> crossing{{-1, 0.5}, {2, 0.5}};
    std::vector<vec2> inside{{0.3, 0.3}, {0.7, 0.7}};
    std::vector<vec2> misses{{-1, 2}, {2, 2}};
    std::vector<vec2> touches{{1, 0.2}, {2, 0.8}};
    CHECK(meets_polyline(crossing, tile, 1e-9));
    CHECK(meets_polyline(inside, tile, 1e-9));
    CHECK_FALSE(meets_polyline(misses, tile, 1e-9));
    CHECK(meets_polyline(touches, tile, 1e-9));
}

TEST_CASE("chebyshev circle of simple convex shapes", "[geometry]") {
    inscribed_circle sq = chebyshev_circle(unit_square());
    CHECK_THAT(sq.radius, WithinAbs(0.5, 1e-9));
    CHECK_THAT(sq.center.x, WithinAbs(0.5, 1e-9));
    CHECK_THAT(sq.center.y, WithinAbs(0.5, 1e-9));
    // 3-4-5 right triangle has inradius (3 + 4 - 5) / 2 = 1 at (1,1)
    inscribed_circle tri = chebyshev_circle(triangle_345());
    CHECK_THAT(tri.radius, WithinAbs(1.0, 1e-9));
    CHECK_THAT(tri.center.x, WithinAbs(1.0, 1e-9));
    CHECK_THAT(tri.center.y, WithinAbs(1.0, 1e-9));
    CHECK_THAT(inradius(triangle_345()), WithinAbs(1.0, 1e-9));
    polygon ell{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    CHECK_THROWS_AS(chebyshev_circle(ell), std::domain_error);
}

TEST_CASE("enclosing radius and inradius bounds", "[geometry]") {
    CHECK_THAT(enclosing_radius(unit_square()), WithinAbs(std::sqrt(0.5), 1e-12));
    CHECK_THAT(enclosing_radius(triangle_345()), WithinAbs(2.5, 1e-12));
    double lb = inradius_lower_bound(unit_square());
    CHECK(lb > 0.4);
    CHECK(lb <= 0.5 + 1e-12);
    polygon ell{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    double ell_lb = inradius_lower_bound(ell, 96);
    CHECK(ell_lb > 0.5);  // true inradius is 2 - sqrt(2), center on the diagonal
    CHECK(ell_lb <= 2.0 - std::sqrt(2.0) + 1e-12);
}

TEST_CASE("convex intersection area", "[geometry]") {
    polygon a = unit_square();
    polygon b{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}}};
    polygon c{{{3, 3}, {4, 3}, {4, 4}, {3, 4}}};
    polygon inner{{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}};
    CHECK_THAT(convex_intersection_area(a, b), WithinAbs(0.25, 1e-12));
    CHECK_THAT(convex_intersection_area(a, c), WithinAbs(0.0, 1e-12));
    CHECK_THAT(convex_intersection_area(a, inner), WithinAbs(0.25, 1e-12));
    CHECK_THAT(convex_intersection_area(a, a), WithinAbs(1.0, 1e-12));
}

TEST_CASE("overlap estimate agrees with the exact value", "[geometry]") {
    polygon a = unit_square();
    polygon b{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}}};
    double est = overlap_area_estimate(a, b, 20000, 5);
    CHECK_THAT(est, WithinAbs(0.25, 0.02));
    CHECK(overlap_area_estimate(a, b, 20000, 5) == est);  // deterministic in seed
    polygon far{{{5, 5}, {6, 5}, {6, 6}, {5, 6}}};
    CHECK(overlap_area_estimate(a, far, 5000, 5) == 0.0);
}

TEST_CASE("bounding boxes", "[geometry]") {
    aabb box = bounds(triangle_345());
    CHECK(box.xmin == 0.0);
    CHECK(box.xmax == 3.0);
    CHECK(box.ymax == 4.0);
    aabb other{2.9, 3.9, 5.0, 5.0};
    CHECK(box.overlaps(other, 0.0));
    CHECK_FALSE(box.overlaps({3.1, 0.0, 4.0, 1.0}, 0.0));
    CHECK(box.overlaps({3.05, 0.0, 4.0, 1.0}, 0.1));
    CHECK(aabb{0, 0, 4, 4}.contains(box, 0.0));
    CHECK_FALSE(box.contains({0, 0, 4, 4}, 0.0));
}

TEST_CASE("scaled stretches about the origin", "[geometry]") {
    polygon p = scaled(triangle_345(), 2.0);
    CHECK(p.v[1].x == 6.0);
    CHECK(p.v[2].y == 8.0);
    CHECK_THAT(area(p), WithinAbs(24.0, 1e-12));
}
