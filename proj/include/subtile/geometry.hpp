#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Planar primitives shared by the whole engine. Polygons are simple,
// counterclockwise, and treated as closed point sets: a point on the
// boundary is inside, two shapes that only touch still meet. Every
// predicate takes an explicit tolerance in absolute length units so
// callers can scale it with the feature size they are working at.

namespace subtile {

struct vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline vec2 operator*(double s, vec2 a) { return {s * a.x, s * a.y}; }
double dot(vec2 a, vec2 b);
double cross(vec2 a, vec2 b);
double norm(vec2 a);
double dist(vec2 a, vec2 b);

// Rigid motion x -> R * F^f * x + t where F is the mirror across the
// x axis and R the rotation by the stored (c, s) pair. The mirror, when
// present, acts before the rotation.
struct isometry {
    double c = 1.0;
    double s = 0.0;
    bool reflect = false;
    vec2 t;

    vec2 operator()(vec2 p) const;
    vec2 linear(vec2 p) const;  // rotation and mirror only, no translation
};

isometry rotation(double angle);
isometry translation(vec2 t);
// compose(a, b) applies b first: compose(a, b)(x) == a(b(x)).
isometry compose(const isometry& a, const isometry& b);
isometry inverse(const isometry& iso);
double rotation_angle(const isometry& iso);  // in (-pi, pi]

struct polygon {
    std::vector<vec2> v;
};

struct aabb {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    bool overlaps(const aabb& o, double tol) const;
    bool contains(const aabb& o, double tol) const;
};

aabb bounds(const polygon& p);
aabb bounds(const std::vector<vec2>& pts);

double signed_area(const polygon& p);
double area(const polygon& p);
vec2 centroid(const polygon& p);
double diameter(const polygon& p);
double diameter(const std::vector<vec2>& pts);

bool is_ccw(const polygon& p);
bool is_simple(const polygon& p, double tol);
bool is_convex(const polygon& p, double tol);
// Throws std::invalid_argument on < 3 vertices, zero area, or
// self-intersection. Accepts either orientation (orientation is the
// caller's business; parse normalizes to counterclockwise).
void validate_polygon(const polygon& p, double tol);

// Applies the motion vertex by vertex; reverses the vertex order on a
// reflection so counterclockwise input stays counterclockwise.
polygon apply(const isometry& iso, const polygon& p);
polygon scaled(const polygon& p, double s);

enum class point_class { outside, boundary, inside };
point_class locate_point(const polygon& p, vec2 q, double tol);

// Distance from q to the boundary if outside, 0 if inside or on it.
double distance_to_polygon(const polygon& p, vec2 q);
// Distance from q to the boundary regardless of side.
double boundary_distance(const polygon& p, vec2 q);

bool segments_intersect(vec2 a1, vec2 a2, vec2 b1, vec2 b2, double tol);
double point_segment_distance(vec2 q, vec2 a, vec2 b);

// Closed containment: inner may touch outer's boundary from within.
bool contains(const polygon& outer, const polygon& inner, double tol);
// Does the tile meet the curve gamma (gamma's boundary as a point set)?
// True on any touch, crossing, or when the curve runs inside the tile.
bool meets_curve(const polygon& gamma, const polygon& tile, double tol);
// Same for an open polyline given by its vertex chain.
bool meets_polyline(const std::vector<vec2>& chain, const polygon& tile, double tol);

// Largest inscribed circle of a convex polygon, via the three-constraint
// vertices of the Chebyshev LP. Throws std::domain_error on non-convex
// input; use inradius_lower_bound there.
struct inscribed_circle {
    vec2 center;
    double radius = 0.0;
};
inscribed_circle chebyshev_circle(const polygon& p);
double inradius(const polygon& p);
// Radius of the smallest ball containing the polygon (its vertices
// suffice; a ball over the vertices covers their hull).
double enclosing_radius(const polygon& p);
// Grid-scan lower bound, works for any simple polygon.
double inradius_lower_bound(const polygon& p, int grid = 64);

// Area of intersection of two convex polygons (Sutherland-Hodgman clip).
double convex_intersection_area(const polygon& a, const polygon& b);
// Monte Carlo overlap estimate for the general case; deterministic in seed.
double overlap_area_estimate(const polygon& a, const polygon& b,
                             int samples, std::uint64_t seed);

}  // namespace subtile
