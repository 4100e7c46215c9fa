#include "subtile/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace subtile {

double dot(vec2 a, vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(vec2 a, vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(vec2 a) { return std::hypot(a.x, a.y); }
double dist(vec2 a, vec2 b) { return norm(a - b); }

vec2 isometry::linear(vec2 p) const {
    if (reflect) p.y = -p.y;
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

vec2 isometry::operator()(vec2 p) const { return linear(p) + t; }

isometry rotation(double angle) {
    return {std::cos(angle), std::sin(angle), false, {0.0, 0.0}};
}

isometry translation(vec2 t) { return {1.0, 0.0, false, t}; }

isometry compose(const isometry& a, const isometry& b) {
    isometry r;
    // a.R * F^a.f * b.R: conjugating a rotation through the mirror
    // negates its angle.
    double bc = b.c, bs = a.reflect ? -b.s : b.s;
    r.c = a.c * bc - a.s * bs;
    r.s = a.s * bc + a.c * bs;
    // Renormalize so long composition chains keep |(c, s)| == 1.
    double n = std::hypot(r.c, r.s);
    r.c /= n;
    r.s /= n;
    r.reflect = a.reflect != b.reflect;
    r.t = a(b.t);
    return r;
}

isometry inverse(const isometry& iso) {
    // (R F^f)^-1 = F^f R^-1; pull the mirror back in front by negating
    // the angle when f is set.
    isometry r;
    r.reflect = iso.reflect;
    r.c = iso.c;
    r.s = iso.reflect ? iso.s : -iso.s;
    vec2 u = {-iso.t.x, -iso.t.y};
    if (iso.reflect) {
        // inverse maps x to F R^-1 (x - t)
        vec2 w = {iso.c * u.x + iso.s * u.y, -iso.s * u.x + iso.c * u.y};
        r.t = {w.x, -w.y};
        // stored form applies F before R(c, s) with s already flipped
    } else {
        r.t = {iso.c * u.x + iso.s * u.y, -iso.s * u.x + iso.c * u.y};
    }
    return r;
}

double rotation_angle(const isometry& iso) { return std::atan2(iso.s, iso.c); }

bool aabb::overlaps(const aabb& o, double tol) const {
    return xmin <= o.xmax + tol && o.xmin <= xmax + tol &&
           ymin <= o.ymax + tol && o.ymin <= ymax + tol;
}

bool aabb::contains(const aabb& o, double tol) const {
    return o.xmin >= xmin - tol && o.xmax <= xmax + tol &&
           o.ymin >= ymin - tol && o.ymax <= ymax + tol;
}

aabb bounds(const std::vector<vec2>& pts) {
    aabb b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (vec2 p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

aabb bounds(const polygon& p) { return bounds(p.v); }

double signed_area(const polygon& p) {
    double a = 0.0;
    for (size_t i = 0, n = p.v.size(); i < n; ++i) {
        vec2 u = p.v[i], w = p.v[(i + 1) % n];
        a += cross(u, w);
    }
    return 0.5 * a;
}

double area(const polygon& p) { return std::fabs(signed_area(p)); }

vec2 centroid(const polygon& p) {
    double a = 0.0;
    vec2 c{0.0, 0.0};
    for (size_t i = 0, n = p.v.size(); i < n; ++i) {
        vec2 u = p.v[i], w = p.v[(i + 1) % n];
        double t = cross(u, w);
        a += t;
        c = c + t * (u + w);
    }
    return (1.0 / (3.0 * a)) * c;
}

double diameter(const std::vector<vec2>& pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, dist(pts[i], pts[j]));
    return d;
}

double diameter(const polygon& p) { return diameter(p.v); }

bool is_ccw(const polygon& p) { return signed_area(p) > 0.0; }

double point_segment_distance(vec2 q, vec2 a, vec2 b) {
    vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(q, a);
    double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
    return dist(q, a + t * ab);
}

namespace {

// Strict transversal crossing: both segments cut through the other's
// supporting line with clearance > tol. Touching does not count here.
bool segments_properly_cross(vec2 a1, vec2 a2, vec2 b1, vec2 b2, double tol) {
    vec2 da = a2 - a1, db = b2 - b1;
    double la = norm(da), lb = norm(db);
    if (la == 0.0 || lb == 0.0) return false;
    double d1 = cross(db, a1 - b1) / lb;  // signed distances to line b
    double d2 = cross(db, a2 - b1) / lb;
    double d3 = cross(da, b1 - a1) / la;  // signed distances to line a
    double d4 = cross(da, b2 - a1) / la;
    return ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
           ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
}

}  // namespace

bool segments_intersect(vec2 a1, vec2 a2, vec2 b1, vec2 b2, double tol) {
    if (segments_properly_cross(a1, a2, b1, b2, tol)) return true;
    // Remaining cases (touch, overlap, near miss) all put some endpoint
    // within tol of the other segment.
    return point_segment_distance(a1, b1, b2) <= tol ||
           point_segment_distance(a2, b1, b2) <= tol ||
           point_segment_distance(b1, a1, a2) <= tol ||
           point_segment_distance(b2, a1, a2) <= tol;
}

point_class locate_point(const polygon& p, vec2 q, double tol) {
    size_t n = p.v.size();
    for (size_t i = 0; i < n; ++i)
        if (point_segment_distance(q, p.v[i], p.v[(i + 1) % n]) <= tol)
            return point_class::boundary;
    bool in = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        vec2 a = p.v[i], b = p.v[j];
        if ((a.y > q.y) != (b.y > q.y) &&
            q.x < (b.x - a.x) * (q.y - a.y) / (b.y - a.y) + a.x)
            in = !in;
    }
    return in ? point_class::inside : point_class::outside;
}

double boundary_distance(const polygon& p, vec2 q) {
    double d = std::numeric_limits<double>::max();
    size_t n = p.v.size();
    for (size_t i = 0; i < n; ++i)
        d = std::min(d, point_segment_distance(q, p.v[i], p.v[(i + 1) % n]));
    return d;
}

double distance_to_polygon(const polygon& p, vec2 q) {
    if (locate_point(p, q, 0.0) != point_class::outside) return 0.0;
    return boundary_distance(p, q);
}

bool is_simple(const polygon& p, double tol) {
    size_t n = p.v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i)
        if (dist(p.v[i], p.v[(i + 1) % n]) <= tol) return false;
    for (size_t i = 0; i < n; ++i) {
        vec2 a1 = p.v[i], a2 = p.v[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            vec2 b1 = p.v[j], b2 = p.v[(j + 1) % n];
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Consecutive edges share one endpoint; a fold-back spike
                // puts a far endpoint on the other edge.
                vec2 shared = (j == i + 1) ? a2 : a1;
                vec2 afar = (j == i + 1) ? a1 : a2;
                vec2 bfar = (j == i + 1) ? b2 : b1;
                if (point_segment_distance(afar, b1, b2) <= tol &&
                    dist(afar, shared) > tol)
                    return false;
                if (point_segment_distance(bfar, a1, a2) <= tol &&
                    dist(bfar, shared) > tol)
                    return false;
            } else if (segments_intersect(a1, a2, b1, b2, tol)) {
                return false;
            }
        }
    }
    return true;
}

bool is_convex(const polygon& p, double tol) {
    size_t n = p.v.size();
    if (n < 3) return false;
    double sign = is_ccw(p) ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) {
        vec2 a = p.v[i], b = p.v[(i + 1) % n], c = p.v[(i + 2) % n];
        vec2 e1 = b - a, e2 = c - b;
        double l1 = norm(e1), l2 = norm(e2);
        if (l1 == 0.0 || l2 == 0.0) return false;
        if (sign * cross(e1, e2) / (l1 * l2) < -tol) return false;
    }
    return true;
}

void validate_polygon(const polygon& p, double tol) {
    if (p.v.size() < 3)
        throw std::invalid_argument("polygon needs at least 3 vertices");
    if (area(p) <= tol * tol)
        throw std::invalid_argument("polygon has (near) zero area");
    if (!is_simple(p, tol))
        throw std::invalid_argument("polygon is self-intersecting or degenerate");
}

polygon apply(const isometry& iso, const polygon& p) {
    polygon r;
    r.v.reserve(p.v.size());
    for (vec2 q : p.v) r.v.push_back(iso(q));
    if (iso.reflect) std::reverse(r.v.begin(), r.v.end());
    return r;
}

polygon scaled(const polygon& p, double s) {
    polygon r;
    r.v.reserve(p.v.size());
    for (vec2 q : p.v) r.v.push_back(s * q);
    return r;
}

bool contains(const polygon& outer, const polygon& inner, double tol) {
    if (!bounds(outer).contains(bounds(inner), tol)) return false;
    size_t ni = inner.v.size(), no = outer.v.size();
    for (vec2 q : inner.v)
        if (locate_point(outer, q, tol) == point_class::outside) return false;
    // Midpoints catch an edge that leaves through a notch and returns
    // without moving any vertex outside.
    for (size_t i = 0; i < ni; ++i) {
        vec2 mid = 0.5 * (inner.v[i] + inner.v[(i + 1) % ni]);
        if (locate_point(outer, mid, tol) == point_class::outside) return false;
    }
    for (size_t i = 0; i < ni; ++i)
        for (size_t j = 0; j < no; ++j)
            if (segments_properly_cross(inner.v[i], inner.v[(i + 1) % ni],
                                        outer.v[j], outer.v[(j + 1) % no], tol))
                return false;
    return true;
}

bool meets_curve(const polygon& gamma, const polygon& tile, double tol) {
    if (!bounds(gamma).overlaps(bounds(tile), tol)) return false;
    size_t ng = gamma.v.size(), nt = tile.v.size();
    for (size_t i = 0; i < ng; ++i)
        for (size_t j = 0; j < nt; ++j)
            if (segments_intersect(gamma.v[i], gamma.v[(i + 1) % ng],
                                   tile.v[j], tile.v[(j + 1) % nt], tol))
                return true;
    // The curve may run entirely inside the tile.
    for (vec2 q : gamma.v)
        if (locate_point(tile, q, tol) != point_class::outside) return true;
    return false;
}

bool meets_polyline(const std::vector<vec2>& chain, const polygon& tile, double tol) {
    if (chain.empty()) return false;
    if (!bounds(chain).overlaps(bounds(tile), tol)) return false;
    size_t nt = tile.v.size();
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        for (size_t j = 0; j < nt; ++j)
            if (segments_intersect(chain[i], chain[i + 1],
                                   tile.v[j], tile.v[(j + 1) % nt], tol))
                return true;
    for (vec2 q : chain)
        if (locate_point(tile, q, tol) != point_class::outside) return true;
    return false;
}

inscribed_circle chebyshev_circle(const polygon& p) {
    if (!is_convex(p, 1e-12))
        throw std::domain_error("chebyshev_circle needs a convex polygon");
    polygon q = p;
    if (!is_ccw(q)) std::reverse(q.v.begin(), q.v.end());
    size_t n = q.v.size();
    // Half-plane constraints u.x + r <= c with u the outward unit normal.
    std::vector<vec2> u(n);
    std::vector<double> cc(n);
    for (size_t i = 0; i < n; ++i) {
        vec2 a = q.v[i], b = q.v[(i + 1) % n];
        vec2 d = b - a;
        double l = norm(d);
        u[i] = {d.y / l, -d.x / l};
        cc[i] = dot(u[i], a);
    }
    double scale = std::max(1.0, diameter(q));
    double feas = 1e-9 * scale;
    inscribed_circle best;
    best.radius = -1.0;
    // The optimum of the 3-variable LP sits on three active constraints;
    // enumerate the triples (n is small everywhere we call this).
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                double m[3][4] = {
                    {u[i].x, u[i].y, 1.0, cc[i]},
                    {u[j].x, u[j].y, 1.0, cc[j]},
                    {u[k].x, u[k].y, 1.0, cc[k]},
                };
                // Gaussian elimination with partial pivoting on the 3x3.
                int perm[3] = {0, 1, 2};
                bool singular = false;
                for (int col = 0; col < 3 && !singular; ++col) {
                    int piv = col;
                    for (int row = col + 1; row < 3; ++row)
                        if (std::fabs(m[perm[row]][col]) > std::fabs(m[perm[piv]][col]))
                            piv = row;
                    std::swap(perm[col], perm[piv]);
                    double v = m[perm[col]][col];
                    if (std::fabs(v) < 1e-14) {
                        singular = true;
                        break;
                    }
                    for (int row = col + 1; row < 3; ++row) {
                        double f = m[perm[row]][col] / v;
                        for (int c2 = col; c2 < 4; ++c2)
                            m[perm[row]][c2] -= f * m[perm[col]][c2];
                    }
                }
                if (singular) continue;
                double sol[3];
                for (int row = 2; row >= 0; --row) {
                    double s = m[perm[row]][3];
                    for (int c2 = row + 1; c2 < 3; ++c2) s -= m[perm[row]][c2] * sol[c2];
                    sol[row] = s / m[perm[row]][row];
                }
                if (!(sol[2] > best.radius + 1e-15)) continue;
                bool ok = true;
                for (size_t e = 0; e < n && ok; ++e)
                    if (u[e].x * sol[0] + u[e].y * sol[1] + sol[2] > cc[e] + feas)
                        ok = false;
                if (ok) best = {{sol[0], sol[1]}, sol[2]};
            }
    if (best.radius <= 0.0)
        throw std::domain_error("degenerate polygon in chebyshev_circle");
    return best;
}

double inradius(const polygon& p) { return chebyshev_circle(p).radius; }

double enclosing_radius(const polygon& p) {
    const std::vector<vec2>& v = p.v;
    size_t n = v.size();
    double best = std::numeric_limits<double>::max();
    auto covers = [&](vec2 c, double r) {
        for (vec2 q : v)
            if (dist(c, q) > r + 1e-12) return false;
        return true;
    };
    // Minimum enclosing circle is determined by two or three points;
    // brute force is fine at prototile vertex counts.
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            vec2 c = 0.5 * (v[i] + v[j]);
            double r = 0.5 * dist(v[i], v[j]);
            if (r < best && covers(c, r)) best = r;
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                vec2 a = v[i], b = v[j], q = v[k];
                double d = 2.0 * (a.x * (b.y - q.y) + b.x * (q.y - a.y) + q.x * (a.y - b.y));
                if (std::fabs(d) < 1e-14) continue;
                double a2 = dot(a, a), b2 = dot(b, b), q2 = dot(q, q);
                vec2 c{(a2 * (b.y - q.y) + b2 * (q.y - a.y) + q2 * (a.y - b.y)) / d,
                       (a2 * (q.x - b.x) + b2 * (a.x - q.x) + q2 * (b.x - a.x)) / d};
                double r = dist(c, a);
                if (r < best && covers(c, r)) best = r;
            }
    return best;
}

double inradius_lower_bound(const polygon& p, int grid) {
    aabb b = bounds(p);
    double best = 0.0;
    vec2 at{b.xmin, b.ymin};
    double dx = (b.xmax - b.xmin) / grid, dy = (b.ymax - b.ymin) / grid;
    for (int i = 1; i < grid; ++i)
        for (int j = 1; j < grid; ++j) {
            vec2 q{b.xmin + dx * i, b.ymin + dy * j};
            if (locate_point(p, q, 0.0) != point_class::inside) continue;
            double d = boundary_distance(p, q);
            if (d > best) {
                best = d;
                at = q;
            }
        }
    // One refinement pass around the best cell.
    int fine = 20;
    for (int i = -fine; i <= fine; ++i)
        for (int j = -fine; j <= fine; ++j) {
            vec2 q{at.x + dx * i / fine, at.y + dy * j / fine};
            if (locate_point(p, q, 0.0) != point_class::inside) continue;
            best = std::max(best, boundary_distance(p, q));
        }
    return best;
}

double convex_intersection_area(const polygon& a, const polygon& b) {
    if (!is_convex(b, 1e-9))
        throw std::domain_error("clip polygon must be convex");
    polygon clip = b;
    if (!is_ccw(clip)) std::reverse(clip.v.begin(), clip.v.end());
    std::vector<vec2> subject = a.v;
    if (signed_area(a) < 0.0) std::reverse(subject.begin(), subject.end());
    for (size_t e = 0; e < clip.v.size() && !subject.empty(); ++e) {
        vec2 ca = clip.v[e], cb = clip.v[(e + 1) % clip.v.size()];
        vec2 dir = cb - ca;
        std::vector<vec2> out;
        size_t m = subject.size();
        for (size_t i = 0; i < m; ++i) {
            vec2 cur = subject[i], nxt = subject[(i + 1) % m];
            double dc = cross(dir, cur - ca);
            double dn = cross(dir, nxt - ca);
            bool cin = dc >= 0.0, nin = dn >= 0.0;
            if (cin) out.push_back(cur);
            if (cin != nin) {
                double t = dc / (dc - dn);
                out.push_back(cur + t * (nxt - cur));
            }
        }
        subject.swap(out);
    }
    if (subject.size() < 3) return 0.0;
    polygon r{std::move(subject)};
    return area(r);
}

double overlap_area_estimate(const polygon& a, const polygon& b,
                             int samples, std::uint64_t seed) {
    aabb ba = bounds(a), bb = bounds(b);
    double xmin = std::max(ba.xmin, bb.xmin), xmax = std::min(ba.xmax, bb.xmax);
    double ymin = std::max(ba.ymin, bb.ymin), ymax = std::min(ba.ymax, bb.ymax);
    if (xmin >= xmax || ymin >= ymax) return 0.0;
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    int hit = 0;
    for (int i = 0; i < samples; ++i) {
        vec2 q{xmin + (xmax - xmin) * u01(), ymin + (ymax - ymin) * u01()};
        if (locate_point(a, q, 0.0) == point_class::inside &&
            locate_point(b, q, 0.0) == point_class::inside)
            ++hit;
    }
    return (xmax - xmin) * (ymax - ymin) * hit / samples;
}

}  // namespace subtile
