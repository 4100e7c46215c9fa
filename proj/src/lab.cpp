#include "subtile/lab.hpp"

#include "subtile/perron.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace subtile {

namespace {

constexpr double kpi = 3.14159265358979323846;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

polygon ccw_copy(const polygon& gamma) {
    polygon g = gamma;
    if (signed_area(g) < 0.0) std::reverse(g.v.begin(), g.v.end());
    validate_polygon(g, 1e-9 * std::max(1.0, diameter(g)));
    return g;
}

void require_covered(const supertile_tree& t, const polygon& gamma) {
    if (!contains(t.realize(0), gamma, t.geometry_tol(t.depth())))
        throw std::domain_error("curve not covered by patch");
}

// counts[l][p][i]: level-0 tiles of type i in a fully subdivided level-l
// tile of type p; exact, so whole subtrees can be added in one step.
std::vector<std::vector<std::vector<bigint>>> subtree_counts(const substitution_rule& r,
                                                             int depth) {
    int n = static_cast<int>(r.prototiles.size());
    std::vector<std::vector<std::vector<bigint>>> full(
        depth + 1, std::vector<std::vector<bigint>>(n, std::vector<bigint>(n)));
    for (int p = 0; p < n; ++p) full[0][p][p] = 1;
    for (int l = 1; l <= depth; ++l)
        for (int p = 0; p < n; ++p)
            for (const child_placement& c : r.children[p])
                for (int i = 0; i < n; ++i) full[l][p][i] += full[l - 1][c.type][i];
    return full;
}

// Probe point owned by the tile, cheaper than realizing the polygon.
vec2 tile_probe(const supertile_tree& t, const tile_node& nd) {
    return nd.iso(t.lambda_pow(nd.level) * t.rule().prototiles[nd.proto].shape.v[0]);
}

double box_distance(vec2 p, const aabb& b) {
    double dx = std::max({b.xmin - p.x, 0.0, p.x - b.xmax});
    double dy = std::max({b.ymin - p.y, 0.0, p.y - b.ymax});
    return std::hypot(dx, dy);
}

}  // namespace

deep_point patch_center(const polygon& root) {
    double tol = 1e-9 * std::max(1.0, diameter(root));
    if (is_convex(root, tol)) {
        inscribed_circle c = chebyshev_circle(root);
        return {c.center, c.radius};
    }
    aabb b = bounds(root);
    deep_point best;
    double x0 = b.xmin, y0 = b.ymin, w = b.xmax - b.xmin, h = b.ymax - b.ymin;
    int grid = 96;
    for (int rep = 0; rep < 24; ++rep) {
        deep_point local;
        for (int i = 0; i <= grid; ++i)
            for (int j = 0; j <= grid; ++j) {
                vec2 q{x0 + w * i / grid, y0 + h * j / grid};
                if (locate_point(root, q, 0.0) != point_class::inside) continue;
                double d = boundary_distance(root, q);
                if (d > local.clearance) local = {q, d};
            }
        if (local.clearance > best.clearance) best = local;
        // shrink the window around the winner
        w *= 0.5;
        h *= 0.5;
        x0 = best.center.x - w / 2;
        y0 = best.center.y - h / 2;
        grid = 24;
    }
    return best;
}

curve_counts count_with_curve(const supertile_tree& t, const polygon& gamma) {
    polygon g = ccw_copy(gamma);
    require_covered(t, g);

    int depth = t.depth();
    int n = static_cast<int>(t.rule().prototiles.size());
    auto full = subtree_counts(t.rule(), depth);
    aabb gbox = bounds(g);

    curve_counts out;
    out.by_type.assign(n, 0);
    out.boundary_by_level.assign(depth + 1, 0);
    std::vector<bigint> inside(n);

    std::vector<int32_t> stack{0};
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        const tile_node& nd = t.node(id);
        double tol = t.geometry_tol(nd.level);
        bool met = false;
        if (gbox.overlaps(nd.box, tol)) met = meets_curve(g, t.realize(id), tol);
        if (!met) {
            // clear of the curve, so entirely inside or entirely outside
            if (locate_point(g, tile_probe(t, nd), 0.0) != point_class::outside) {
                const auto& cnt = full[nd.level][nd.proto];
                for (int i = 0; i < n; ++i) inside[i] += cnt[i];
            }
            continue;
        }
        out.boundary_by_level[nd.level] += 1;
        if (nd.level == 0) {
            if (contains(g, t.realize(id), t.geometry_tol(0))) inside[nd.proto] += 1;
        } else {
            for (int32_t c = 0; c < nd.nchild; ++c) stack.push_back(nd.first_child + c);
        }
    }

    for (int i = 0; i < n; ++i) {
        out.by_type[i] = inside[i].convert_to<long long>();
        out.total += out.by_type[i];
    }
    out.boundary = out.boundary_by_level[0];
    return out;
}

decomposition decompose_region(const supertile_tree& t, const polygon& gamma) {
    polygon g = ccw_copy(gamma);
    require_covered(t, g);

    aabb gbox = bounds(g);
    decomposition d;
    d.parts.assign(t.depth() + 1, {});

    std::vector<int32_t> stack{0};
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        const tile_node& nd = t.node(id);
        double tol = t.geometry_tol(nd.level);
        bool met = false;
        if (gbox.overlaps(nd.box, tol)) met = meets_curve(g, t.realize(id), tol);
        if (!met) {
            // strictly inside or strictly outside; inside means contained
            if (locate_point(g, tile_probe(t, nd), 0.0) != point_class::outside)
                d.parts[nd.level].push_back(id);
            continue;
        }
        if (contains(g, t.realize(id), tol)) {
            d.parts[nd.level].push_back(id);  // touches the curve from inside
        } else if (nd.level > 0) {
            for (int32_t c = 0; c < nd.nchild; ++c) stack.push_back(nd.first_child + c);
        }
    }

    int m = 0;
    for (int l = 0; l <= t.depth(); ++l)
        if (!d.parts[l].empty()) m = l + 1;
    d.m = m;
    d.parts.resize(m);
    for (auto& p : d.parts) std::sort(p.begin(), p.end());
    return d;
}

std::vector<bigint> reconstruct_type_counts(const supertile_tree& t, const decomposition& d,
                                            const intmatrix& m) {
    int n = m.size();
    if (n != static_cast<int>(t.rule().prototiles.size()))
        throw std::invalid_argument("matrix size does not match the rule");
    std::vector<bigint> total(n);
    intmatrix p = intmatrix::identity(n);
    for (int l = 0; l < d.m; ++l) {
        if (l > 0) p = p * m;
        for (int32_t id : d.parts[l]) {
            int type = t.node(id).proto;
            for (int i = 0; i < n; ++i) total[i] += p.at(i, type);
        }
    }
    return total;
}

bounds_report verify_decomposition_bounds(const supertile_tree& t, const decomposition& d,
                                          const curve_counts& c) {
    bounds_report rep;
    if (d.m == 0) return rep;  // nothing contained, nothing to bound
    double lambda = t.rule().lambda;
    auto base = t.level_metrics(0);
    double shape_ratio = base.big_r / base.small_r;
    long long max_children = 0;
    for (const auto& kids : t.rule().children)
        max_children = std::max(max_children, static_cast<long long>(kids.size()));

    for (int l = 0; l < d.m; ++l) {
        level_bound row;
        row.level = l;
        row.growth_lhs = std::pow(lambda, d.m - l - 1);
        row.growth_rhs = shape_ratio * static_cast<double>(c.boundary_by_level[l]);
        row.growth_ok = row.growth_lhs <= row.growth_rhs * (1.0 + 1e-9);
        row.part_count = static_cast<long long>(d.parts[l].size());
        row.parts_checked = l + 1 <= t.depth();
        if (row.parts_checked) {
            row.parts_rhs = max_children * c.boundary_by_level[l + 1];
            row.parts_ok = row.part_count <= row.parts_rhs;
        }
        rep.all_ok = rep.all_ok && row.growth_ok && (!row.parts_checked || row.parts_ok);
        rep.rows.push_back(row);
    }
    return rep;
}

curve_kind curve_kind_from_name(const std::string& s) {
    if (s == "ngon_circle") return curve_kind::ngon_circle;
    if (s == "square") return curve_kind::square;
    if (s == "star_blob") return curve_kind::star_blob;
    if (s == "rot_rect") return curve_kind::rot_rect;
    throw std::invalid_argument("unknown curve kind: " + s);
}

const char* curve_kind_name(curve_kind k) {
    switch (k) {
    case curve_kind::ngon_circle: return "ngon_circle";
    case curve_kind::square: return "square";
    case curve_kind::star_blob: return "star_blob";
    case curve_kind::rot_rect: return "rot_rect";
    }
    return "?";
}

polygon make_curve(curve_kind kind, double scale, std::uint64_t seed, vec2 center) {
    if (!(scale > 0.0)) throw std::invalid_argument("curve scale must be positive");
    polygon g;
    switch (kind) {
    case curve_kind::ngon_circle: {
        for (int i = 0; i < 64; ++i) {
            double a = 2.0 * kpi * i / 64;
            g.v.push_back(center + scale * vec2{std::cos(a), std::sin(a)});
        }
        break;
    }
    case curve_kind::square: {
        double h = scale / 2.0;
        g.v = {center + vec2{-h, -h}, center + vec2{h, -h}, center + vec2{h, h},
               center + vec2{-h, h}};
        break;
    }
    case curve_kind::star_blob: {
        std::mt19937_64 rng(seed);
        // integer harmonics keep the radius seamless around the loop;
        // amplitudes sum below 0.2, so radii stay in [0.55, 0.95]*scale
        double a1 = 0.10 * u01(rng), a2 = 0.06 * u01(rng), a3 = 0.04 * u01(rng);
        double p1 = 2 * kpi * u01(rng), p2 = 2 * kpi * u01(rng), p3 = 2 * kpi * u01(rng);
        int h1 = 2 + static_cast<int>(u01(rng) * 4.0);
        int h2 = 3 + static_cast<int>(u01(rng) * 3.0);
        int h3 = 5 + static_cast<int>(u01(rng) * 4.0);
        for (int i = 0; i < 24; ++i) {
            double a = 2.0 * kpi * i / 24;
            double r = scale * (0.75 + a1 * std::sin(h1 * a + p1) + a2 * std::sin(h2 * a + p2) +
                                a3 * std::sin(h3 * a + p3));
            g.v.push_back(center + r * vec2{std::cos(a), std::sin(a)});
        }
        break;
    }
    case curve_kind::rot_rect: {
        std::mt19937_64 rng(seed);
        double aspect = 0.35 + 0.45 * u01(rng);
        double ang = kpi * u01(rng);
        double cw = scale / 2.0, ch = scale * aspect / 2.0;
        double c = std::cos(ang), s = std::sin(ang);
        for (vec2 q : {vec2{-cw, -ch}, vec2{cw, -ch}, vec2{cw, ch}, vec2{-cw, ch}})
            g.v.push_back(center + vec2{c * q.x - s * q.y, s * q.x + c * q.y});
        break;
    }
    }
    return g;
}

namespace {

// Minimum clearance of the curve from the patch boundary; curve vertices
// suffice for convex patches, where boundary distance is concave along
// each curve edge.
double curve_clearance(const polygon& root, const polygon& curve) {
    double clear = std::numeric_limits<double>::infinity();
    for (vec2 v : curve.v) clear = std::min(clear, boundary_distance(root, v));
    return clear;
}

}  // namespace

std::vector<experiment_row> run_experiment(const substitution_rule& rule, int root_type,
                                           int depth, const std::vector<curve_kind>& kinds,
                                           const std::vector<double>& scales,
                                           const std::vector<std::uint64_t>& seeds, int jobs) {
    if (jobs < 1) throw std::invalid_argument("jobs must be positive");
    for (double s : scales)
        if (!(s > 0.0)) throw std::invalid_argument("curve scale must be positive");

    perron_data pd = analyze_matrix(substitution_matrix(rule));
    supertile_tree tree = supertile_tree::build(rule, root_type, depth, jobs);
    polygon root = tree.realize(0);
    deep_point at = patch_center(root);
    double margin = 2.0 * tree.level_metrics(0).big_r;
    double ctol = tree.geometry_tol(depth);

    std::vector<double> sorted_scales = scales;
    std::sort(sorted_scales.begin(), sorted_scales.end());
    struct task {
        curve_kind kind;
        double scale;
        std::uint64_t seed;
    };
    std::vector<task> tasks;
    for (double s : sorted_scales)
        for (curve_kind k : kinds)
            for (std::uint64_t sd : seeds) tasks.push_back({k, s, sd});

    std::vector<experiment_row> rows(tasks.size());
    int n = static_cast<int>(rule.prototiles.size());
    auto run_one = [&](size_t idx) {
        const task& tk = tasks[idx];
        polygon curve = make_curve(tk.kind, tk.scale, tk.seed, at.center);
        if (!contains(root, curve, ctol) || curve_clearance(root, curve) < margin * (1 - 1e-9))
            throw std::domain_error(std::string("curve (") + curve_kind_name(tk.kind) +
                                    ", scale " + std::to_string(tk.scale) +
                                    ") does not fit the depth-" + std::to_string(depth) +
                                    " patch with a clearance of " + std::to_string(margin) +
                                    "; reduce scale or increase depth");
        curve_counts c = count_with_curve(tree, curve);
        experiment_row& row = rows[idx];
        row.rule_name = rule.name;
        row.kind = tk.kind;
        row.seed = tk.seed;
        row.scale = tk.scale;
        row.boundary = c.boundary;
        row.total = c.total;
        row.deviation.resize(n);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            row.deviation[i] = std::fabs(static_cast<double>(c.by_type[i]) -
                                         pd.nu[i] * static_cast<double>(c.total));
            worst = std::max(worst, row.deviation[i]);
        }
        row.ratio_lin = worst / static_cast<double>(c.boundary);
        row.ratio_log = c.boundary >= 2
                            ? worst / (static_cast<double>(c.boundary) *
                                       std::log(static_cast<double>(c.boundary)))
                            : std::numeric_limits<double>::quiet_NaN();
    };

    int workers = std::min<int>(jobs, static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::mutex mu;
        std::exception_ptr err;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (size_t i = static_cast<size_t>(w); i < tasks.size(); i += workers) {
                    try {
                        run_one(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(mu);
                        if (!err) err = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    return rows;
}

std::vector<double> empirical_frequencies(const substitution_rule& rule, int depth,
                                          int root_type) {
    int n = static_cast<int>(rule.prototiles.size());
    if (root_type < 0 || root_type >= n) throw std::invalid_argument("root type out of range");
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    auto full = subtree_counts(rule, depth);
    const auto& counts = full[depth][root_type];
    bigint total = 0;
    for (const bigint& c : counts) total += c;
    std::vector<double> freq(n);
    double denom = total.convert_to<double>();
    for (int i = 0; i < n; ++i) freq[i] = counts[i].convert_to<double>() / denom;
    return freq;
}

namespace {

// Level-l tiles whose distance to x is at most rad, walking the tree
// with a bounding-box prune.
long long tiles_near_point(const supertile_tree& t, vec2 x, double rad, int level) {
    long long cnt = 0;
    std::vector<int32_t> stack{0};
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        const tile_node& nd = t.node(id);
        double tol = t.geometry_tol(nd.level);
        if (box_distance(x, nd.box) > rad + tol) continue;
        if (nd.level == level) {
            if (distance_to_polygon(t.realize(id), x) <= rad + tol) ++cnt;
        } else if (nd.level > level) {
            for (int32_t c = 0; c < nd.nchild; ++c) stack.push_back(nd.first_child + c);
        }
    }
    return cnt;
}

long long tiles_meeting_chain(const supertile_tree& t, const std::vector<vec2>& chain) {
    aabb cbox = bounds(chain);
    long long cnt = 0;
    std::vector<int32_t> stack{0};
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        const tile_node& nd = t.node(id);
        double tol = t.geometry_tol(nd.level);
        if (!cbox.overlaps(nd.box, tol)) continue;
        if (!meets_polyline(chain, t.realize(id), tol)) continue;
        if (nd.level == 0) {
            ++cnt;
        } else {
            for (int32_t c = 0; c < nd.nchild; ++c) stack.push_back(nd.first_child + c);
        }
    }
    return cnt;
}

void record(check_summary& s, double lhs, double rhs) {
    s.samples += 1;
    double margin = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    s.worst_margin = std::max(s.worst_margin, margin);
    if (lhs > rhs * (1.0 + 1e-9)) s.violations += 1;
}

}  // namespace

lemma_report verify_lemmas(const supertile_tree& t, int samples, std::uint64_t seed) {
    if (samples <= 0) throw std::invalid_argument("samples must be positive");
    if (t.depth() < 2) throw std::invalid_argument("lemma checks need depth >= 2");

    std::mt19937_64 rng(seed);
    lemma_report rep;
    polygon root = t.realize(0);
    aabb rbox = bounds(root);
    auto base = t.level_metrics(0);
    double lambda = t.rule().lambda;
    double bigr = base.big_r;
    auto k_bound = static_cast<double>(base.k_bound);
    deep_point at = patch_center(root);

    auto sample_point = [&](double clearance) -> std::pair<bool, vec2> {
        for (int tries = 0; tries < 200; ++tries) {
            vec2 q{rbox.xmin + u01(rng) * (rbox.xmax - rbox.xmin),
                   rbox.ymin + u01(rng) * (rbox.ymax - rbox.ymin)};
            if (locate_point(root, q, 0.0) != point_class::inside) continue;
            if (boundary_distance(root, q) < clearance) continue;
            return {true, q};
        }
        return {false, {}};
    };

    // ball complexity: a ball of radius 2R at level l meets at most K tiles
    int max_ball_level = std::max(0, t.depth() - 2);
    for (int s = 0; s < samples; ++s) {
        int level = max_ball_level > 0 ? s % (max_ball_level + 1) : 0;
        double rad = 2.0 * bigr * t.lambda_pow(level);
        auto [found, x] = sample_point(rad);
        if (!found) {
            rep.ball_complexity.skipped += 1;
            continue;
        }
        record(rep.ball_complexity, static_cast<double>(tiles_near_point(t, x, rad, level)),
               k_bound);
    }

    // arc diameter: an open polyline meets at least diam / 2R tiles
    for (int s = 0; s < samples; ++s) {
        std::vector<vec2> chain;
        bool ok = false;
        for (int tries = 0; tries < 200 && !ok; ++tries) {
            chain.clear();
            int npts = 3 + static_cast<int>(u01(rng) * 4.0);
            chain.push_back({rbox.xmin + u01(rng) * (rbox.xmax - rbox.xmin),
                             rbox.ymin + u01(rng) * (rbox.ymax - rbox.ymin)});
            for (int k = 1; k < npts; ++k) {
                double len = (0.5 + 2.5 * u01(rng)) * bigr;
                double ang = 2.0 * kpi * u01(rng);
                chain.push_back(chain.back() + len * vec2{std::cos(ang), std::sin(ang)});
            }
            ok = true;
            for (size_t k = 0; k + 1 < chain.size() && ok; ++k) {
                vec2 mid = 0.5 * (chain[k] + chain[k + 1]);
                ok = locate_point(root, chain[k], 0.0) == point_class::inside &&
                     locate_point(root, chain[k + 1], 0.0) == point_class::inside &&
                     locate_point(root, mid, 0.0) != point_class::outside;
            }
        }
        if (!ok) {
            rep.arc_diameter.skipped += 1;
            continue;
        }
        long long met = tiles_meeting_chain(t, chain);
        record(rep.arc_diameter, diameter(chain), 2.0 * bigr * static_cast<double>(met));
    }

    // random closed curves drive the per-level comparisons
    for (int s = 0; s < samples; ++s) {
        curve_kind kind = (s % 2 == 0) ? curve_kind::star_blob : curve_kind::ngon_circle;
        double scale = (0.15 + 0.30 * u01(rng)) * at.clearance;
        std::uint64_t cseed = rng();
        polygon curve = make_curve(kind, scale, cseed, at.center);
        if (!contains(root, curve, t.geometry_tol(t.depth()))) {
            rep.level_comparison.skipped += 1;
            rep.level_monotone.skipped += 1;
            continue;
        }
        curve_counts c = count_with_curve(t, curve);
        const auto& bbl = c.boundary_by_level;
        for (int l = 1; l <= t.depth(); ++l)
            record(rep.level_monotone, static_cast<double>(bbl[l]),
                   static_cast<double>(bbl[l - 1]));
        for (int l = 1; l <= t.depth(); ++l) {
            // hypotheses: coarse count above K and no larger than the fine count
            if (static_cast<double>(bbl[l]) <= k_bound || bbl[l] > bbl[0]) {
                rep.level_comparison.skipped += 1;
                continue;
            }
            double rhs =
                (2.0 * k_bound + 1.0) * std::pow(lambda, -l) * static_cast<double>(bbl[0]);
            record(rep.level_comparison, static_cast<double>(bbl[l]), rhs);
        }
    }
    return rep;
}

}  // namespace subtile
