#include "subtile/rule.hpp"
#include "subtile/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace subtile {

const char* group_name(isometry_group g) {
    switch (g) {
        case isometry_group::translations_only: return "translations";
        case isometry_group::direct: return "direct";
        default: return "all";
    }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : line) {
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

double eval_at(const std::string& tok, int line) {
    try {
        return eval_expr(tok);
    } catch (const expr_error& e) {
        throw rule_parse_error("bad expression '" + tok + "': " + e.what() +
                                   " (column " + std::to_string(e.column) + ")",
                               line);
    }
}

long parse_long(const std::string& tok, int line, const char* what) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty())
        throw rule_parse_error(std::string(what) + " must be an integer, got '" + tok + "'",
                               line);
    return v;
}

std::string fmtg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

substitution_rule parse_rule(const std::string& text, const std::string& name) {
    struct tile_acc {
        long id;
        std::string label;
        std::vector<vec2> verts;
        int line;
    };
    struct sub_acc {
        long parent;
        std::vector<child_placement> kids;
        int line;
    };
    std::optional<double> lambda;
    std::optional<isometry_group> group;
    std::optional<int> rot_order;
    std::vector<tile_acc> tiles;
    std::vector<sub_acc> subs;
    enum class section { head, tile, sub };
    section cur = section::head;
    bool body = false;

    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::vector<std::string> t = tokenize(line);
        if (t.empty()) continue;
        const std::string& key = t[0];
        if (key == "lambda" || key == "group" || key == "rotation_order") {
            if (body)
                throw rule_parse_error(key + " must precede the tile and sub sections", ln);
            if (t.size() != 2)
                throw rule_parse_error(key + " takes exactly one argument", ln);
            if (key == "lambda") {
                if (lambda) throw rule_parse_error("duplicate lambda", ln);
                double v = eval_at(t[1], ln);
                if (!(v > 1.0))
                    throw rule_parse_error("inflation factor must exceed 1", ln);
                lambda = v;
            } else if (key == "group") {
                if (group) throw rule_parse_error("duplicate group", ln);
                if (t[1] == "translations") group = isometry_group::translations_only;
                else if (t[1] == "direct") group = isometry_group::direct;
                else if (t[1] == "all") group = isometry_group::all;
                else throw rule_parse_error("group must be translations, direct, or all", ln);
            } else {
                if (rot_order) throw rule_parse_error("duplicate rotation_order", ln);
                long v = parse_long(t[1], ln, "rotation_order");
                if (v < 1) throw rule_parse_error("rotation_order must be at least 1", ln);
                rot_order = static_cast<int>(v);
            }
        } else if (key == "tile") {
            if (!lambda || !group)
                throw rule_parse_error("lambda and group must be declared before tile", ln);
            body = true;
            if (t.size() != 2 && t.size() != 3)
                throw rule_parse_error("tile takes an id and an optional label", ln);
            long id = parse_long(t[1], ln, "tile id");
            if (id < 0) throw rule_parse_error("tile id must be nonnegative", ln);
            for (const tile_acc& ta : tiles)
                if (ta.id == id) throw rule_parse_error("duplicate tile id " + t[1], ln);
            tiles.push_back({id, t.size() == 3 ? t[2] : "t" + std::to_string(id), {}, ln});
            cur = section::tile;
        } else if (key == "v") {
            if (cur != section::tile)
                throw rule_parse_error("vertex line outside a tile block", ln);
            if (t.size() != 3)
                throw rule_parse_error("v takes exactly two coordinates", ln);
            tiles.back().verts.push_back({eval_at(t[1], ln), eval_at(t[2], ln)});
        } else if (key == "sub") {
            if (!lambda || !group)
                throw rule_parse_error("lambda and group must be declared before sub", ln);
            body = true;
            if (t.size() != 2) throw rule_parse_error("sub takes a parent tile id", ln);
            long parent = parse_long(t[1], ln, "sub parent id");
            for (const sub_acc& sa : subs)
                if (sa.parent == parent)
                    throw rule_parse_error("duplicate sub block for tile " + t[1], ln);
            subs.push_back({parent, {}, ln});
            cur = section::sub;
        } else if (key == "child") {
            if (cur != section::sub)
                throw rule_parse_error("child line outside a sub block", ln);
            size_t i = 1;
            if (t.size() < 2) throw rule_parse_error("child needs a tile id", ln);
            long type = parse_long(t[i++], ln, "child tile id");
            if (i + 1 >= t.size() || t[i] != "rot")
                throw rule_parse_error("expected 'rot <angle>' after the child id", ln);
            ++i;
            std::string rot_tok = t[i++];
            bool refl = false;
            if (i < t.size() && t[i] == "reflect") {
                if (*group != isometry_group::all)
                    throw rule_parse_error("reflect requires group all", ln);
                refl = true;
                ++i;
            }
            if (i + 1 >= t.size() || t[i] != "dx")
                throw rule_parse_error("expected 'dx <expr>'", ln);
            ++i;
            double dx = eval_at(t[i++], ln);
            if (i + 1 >= t.size() || t[i] != "dy")
                throw rule_parse_error("expected 'dy <expr>'", ln);
            ++i;
            double dy = eval_at(t[i++], ln);
            if (i != t.size()) throw rule_parse_error("trailing tokens on child line", ln);

            child_placement c;
            c.type = static_cast<int>(type);
            if (rot_order) {
                long k = parse_long(rot_tok, ln, "rot (an index when rotation_order is set)");
                k %= *rot_order;
                if (k < 0) k += *rot_order;
                c.rot_index = static_cast<int>(k);
                double ang = 2.0 * M_PI * static_cast<double>(k) / *rot_order;
                c.iso = {std::cos(ang), std::sin(ang), refl, {dx, dy}};
            } else {
                double ang = eval_at(rot_tok, ln);
                c.iso = {std::cos(ang), std::sin(ang), refl, {dx, dy}};
            }
            subs.back().kids.push_back(c);
        } else {
            throw rule_parse_error("unknown directive '" + key + "'", ln);
        }
    }

    if (!lambda) throw rule_parse_error("missing required directive: lambda", ln + 1);
    if (!group) throw rule_parse_error("missing required directive: group", ln + 1);
    if (tiles.empty()) throw rule_parse_error("rule declares no prototiles", ln + 1);

    long n = static_cast<long>(tiles.size());
    std::sort(tiles.begin(), tiles.end(),
              [](const tile_acc& a, const tile_acc& b) { return a.id < b.id; });
    for (long i = 0; i < n; ++i)
        if (tiles[i].id != i)
            throw rule_parse_error("tile ids must be dense 0..n-1; missing id " +
                                       std::to_string(i),
                                   tiles.back().line);

    substitution_rule r;
    r.name = name;
    r.lambda = *lambda;
    r.group = *group;
    r.rotation_order = rot_order;
    r.prototiles.resize(n);
    r.children.resize(n);
    for (long i = 0; i < n; ++i) {
        tile_acc& ta = tiles[i];
        if (ta.verts.size() < 3)
            throw rule_parse_error("tile " + std::to_string(i) + " has fewer than 3 vertices",
                                   ta.line);
        polygon p{std::move(ta.verts)};
        if (!is_ccw(p)) std::reverse(p.v.begin(), p.v.end());
        try {
            validate_polygon(p, 1e-9 * std::max(1.0, diameter(p)));
        } catch (const std::invalid_argument& e) {
            throw rule_parse_error("tile " + std::to_string(i) + ": " + e.what(), ta.line);
        }
        r.prototiles[i] = {std::move(ta.label), std::move(p)};
    }
    for (sub_acc& sa : subs) {
        if (sa.parent < 0 || sa.parent >= n)
            throw rule_parse_error("sub references undeclared tile " + std::to_string(sa.parent),
                                   sa.line);
        for (const child_placement& c : sa.kids)
            if (c.type < 0 || c.type >= n)
                throw rule_parse_error("child references undeclared tile " +
                                           std::to_string(c.type),
                                       sa.line);
        r.children[sa.parent] = std::move(sa.kids);
    }
    return r;
}

substitution_rule parse_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rule file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string stem = path;
    size_t slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    try {
        return parse_rule(buf.str(), stem);
    } catch (const rule_parse_error& e) {
        throw rule_parse_error(path + ": " + e.what(), e.line);
    }
}

std::string serialize_rule(const substitution_rule& r) {
    std::ostringstream out;
    out << "lambda " << fmtg(r.lambda) << "\n";
    out << "group " << group_name(r.group) << "\n";
    if (r.rotation_order) out << "rotation_order " << *r.rotation_order << "\n";
    for (size_t i = 0; i < r.prototiles.size(); ++i) {
        out << "\ntile " << i << " " << r.prototiles[i].label << "\n";
        for (vec2 p : r.prototiles[i].shape.v)
            out << "v " << fmtg(p.x) << " " << fmtg(p.y) << "\n";
    }
    for (size_t j = 0; j < r.children.size(); ++j) {
        if (r.children[j].empty()) continue;
        out << "\nsub " << j << "\n";
        for (const child_placement& c : r.children[j]) {
            out << "child " << c.type << " rot ";
            if (c.rot_index) out << *c.rot_index;
            else out << fmtg(rotation_angle(c.iso));
            if (c.iso.reflect) out << " reflect";
            out << " dx " << fmtg(c.iso.t.x) << " dy " << fmtg(c.iso.t.y) << "\n";
        }
    }
    return out.str();
}

validation_report validate_rule(const substitution_rule& r, double tol) {
    validation_report rep;
    int n = static_cast<int>(r.prototiles.size());
    rep.tiles.resize(n);
    std::vector<char> convex(n);
    std::vector<double> parea(n);
    for (int i = 0; i < n; ++i) {
        convex[i] = is_convex(r.prototiles[i].shape, 1e-9) ? 1 : 0;
        parea[i] = area(r.prototiles[i].shape);
    }
    bool all_ok = true;
    for (int j = 0; j < n; ++j) {
        tile_check& tc = rep.tiles[j];
        tc.parent = j;
        polygon parent = scaled(r.prototiles[j].shape, r.lambda);
        double target = area(parent);
        const auto& kids = r.children[j];
        if (kids.empty()) {
            rep.notes.push_back("tile " + std::to_string(j) + " has no subdivision");
            tc.area_error = 1.0;
            all_ok = false;
            continue;
        }
        double asum = 0.0;
        for (const child_placement& c : kids) asum += parea[c.type];
        tc.area_error = std::fabs(asum - target) / target;
        tc.area_ok = tc.area_error <= tol;

        double ctol = tol * diameter(parent);
        std::vector<polygon> placed;
        placed.reserve(kids.size());
        for (const child_placement& c : kids)
            placed.push_back(apply(c.iso, r.prototiles[c.type].shape));
        tc.containment_ok = true;
        for (size_t a = 0; a < placed.size(); ++a)
            if (!contains(parent, placed[a], ctol)) {
                tc.containment_ok = false;
                rep.notes.push_back("tile " + std::to_string(j) + ": child " +
                                    std::to_string(a) + " is not inside the scaled parent");
            }
        tc.max_overlap = 0.0;
        // exact clipped area for convex pairs; sampled estimate otherwise,
        // which only resolves overlaps down to its own noise floor
        bool sampled = false;
        for (size_t a = 0; a < placed.size(); ++a)
            for (size_t b = a + 1; b < placed.size(); ++b) {
                if (!bounds(placed[a]).overlaps(bounds(placed[b]), ctol)) continue;
                double ov;
                if (convex[kids[a].type] && convex[kids[b].type]) {
                    ov = convex_intersection_area(placed[a], placed[b]);
                } else {
                    ov = overlap_area_estimate(placed[a], placed[b], 10000,
                                               1000003ull * j + 101ull * a + b);
                    sampled = true;
                }
                double rel = ov / std::min(parea[kids[a].type], parea[kids[b].type]);
                tc.max_overlap = std::max(tc.max_overlap, rel);
            }
        tc.overlap_ok = tc.max_overlap <= (sampled ? std::max(tol, 1e-4) : tol);
        if (!tc.area_ok)
            rep.notes.push_back("tile " + std::to_string(j) + ": child areas sum to " +
                                fmtg(asum) + ", expected " + fmtg(target));
        if (!tc.overlap_ok)
            rep.notes.push_back("tile " + std::to_string(j) + ": children overlap (relative area " +
                                fmtg(tc.max_overlap) + ")");
        all_ok = all_ok && tc.area_ok && tc.containment_ok && tc.overlap_ok;
    }
    rep.ok = all_ok;
    try {
        rep.primitive = substitution_matrix(r).is_primitive();
        if (!rep.primitive)
            rep.notes.push_back("substitution matrix is not primitive");
    } catch (const std::domain_error& e) {
        rep.primitive = false;
        rep.notes.push_back(e.what());
    }
    return rep;
}

intmatrix substitution_matrix(const substitution_rule& r) {
    int n = static_cast<int>(r.prototiles.size());
    intmatrix m(n);
    for (int j = 0; j < n; ++j)
        for (const child_placement& c : r.children[j]) {
            if (r.group == isometry_group::translations_only) {
                bool is_translation = !c.iso.reflect && std::fabs(c.iso.c - 1.0) <= 1e-12 &&
                                      std::fabs(c.iso.s) <= 1e-12;
                if (!is_translation)
                    throw std::domain_error(
                        "translations-only rule has a rotated or reflected child; "
                        "types are only well defined after expand-group");
            }
            m.at(c.type, j) += 1;
        }
    return m;
}

substitution_rule expand_group(const substitution_rule& r, int rotation_order) {
    if (rotation_order < 1)
        throw std::domain_error("rotation order must be at least 1");
    int R = rotation_order;
    double alpha = 2.0 * M_PI / R;
    int nbase = static_cast<int>(r.prototiles.size());

    // Quantize child rotations to steps of 2*pi/R up front.
    std::vector<std::vector<std::pair<int, bool>>> steps(nbase);  // (k, reflect)
    for (int j = 0; j < nbase; ++j)
        for (const child_placement& c : r.children[j]) {
            double th = rotation_angle(c.iso);
            long k = std::lround(th / alpha);
            double err = th - static_cast<double>(k) * alpha;
            if (std::fabs(err) > 1e-9)
                throw std::domain_error(
                    "child rotation " + fmtg(th) + " rad of tile " + std::to_string(j) +
                    " is not a multiple of 2*pi/" + std::to_string(R));
            k %= R;
            if (k < 0) k += R;
            steps[j].push_back({static_cast<int>(k), c.iso.reflect});
        }

    struct state {
        int base, k, f;
    };
    auto key_of = [R](int base, int k, int f) { return (base * R + k) * 2 + f; };
    std::unordered_map<int, int> id_of;
    std::vector<state> states;
    auto intern = [&](int base, int k, int f) {
        int key = key_of(base, k, f);
        auto it = id_of.find(key);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(states.size());
        id_of.emplace(key, id);
        states.push_back({base, k, f});
        return id;
    };
    for (int i = 0; i < nbase; ++i) intern(i, 0, 0);

    substitution_rule out;
    out.name = r.name;
    out.lambda = r.lambda;
    out.group = isometry_group::translations_only;
    out.rotation_order = R;

    // Breadth-first closure; states.size() grows while we scan it.
    for (size_t s = 0; s < states.size(); ++s) {
        state st = states[s];
        isometry lin{std::cos(st.k * alpha), std::sin(st.k * alpha), st.f != 0, {0.0, 0.0}};
        std::vector<child_placement> kids;
        const auto& base_kids = r.children[st.base];
        for (size_t c = 0; c < base_kids.size(); ++c) {
            auto [kc, fc] = steps[st.base][c];
            int k2 = st.f ? (st.k - kc) : (st.k + kc);
            k2 %= R;
            if (k2 < 0) k2 += R;
            int f2 = st.f ^ (fc ? 1 : 0);
            int target = intern(base_kids[c].type, k2, f2);
            child_placement nc;
            nc.type = target;
            nc.iso = translation(lin(base_kids[c].iso.t));
            nc.rot_index = 0;
            kids.push_back(nc);
        }
        out.children.push_back(std::move(kids));
    }

    out.prototiles.resize(states.size());
    for (size_t s = 0; s < states.size(); ++s) {
        state st = states[s];
        isometry lin{std::cos(st.k * alpha), std::sin(st.k * alpha), st.f != 0, {0.0, 0.0}};
        const prototile& base = r.prototiles[st.base];
        std::string label = base.label;
        if (st.k != 0 || st.f != 0) {
            label += "@r" + std::to_string(st.k);
            if (st.f) label += "m";
        }
        out.prototiles[s] = {std::move(label), apply(lin, base.shape)};
    }
    return out;
}

}  // namespace subtile
