#include "subtile/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace subtile {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g9(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// evenly spread hues, fixed saturation/lightness, as #rrggbb
std::string palette_color(int index, int count, double lightness) {
    double h = count > 0 ? 360.0 * index / count : 0.0;
    double s = 0.62, l = lightness;
    double c = (1.0 - std::fabs(2.0 * l - 1.0)) * s;
    double hp = h / 60.0;
    double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    double m = l - c / 2.0;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>((r + m) * 255 + 0.5),
                  static_cast<int>((g + m) * 255 + 0.5),
                  static_cast<int>((b + m) * 255 + 0.5));
    return buf;
}

void json_tile(std::ostream& out, const supertile_tree& t, int32_t id, bool first) {
    const tile_node& nd = t.node(id);
    if (!first) out << ",";
    out << "\n    {\"prototile\": " << nd.proto << ", \"level\": " << nd.level
        << ", \"address\": [";
    std::vector<int> addr = t.address(id);
    for (size_t i = 0; i < addr.size(); ++i) out << (i ? "," : "") << addr[i];
    out << "], \"vertices\": [";
    polygon p = t.realize(id);
    for (size_t i = 0; i < p.v.size(); ++i)
        out << (i ? "," : "") << "[" << g17(p.v[i].x) << "," << g17(p.v[i].y) << "]";
    out << "]}";
}

struct viewport {
    aabb box;
    double size;    // output long side in px
    double scale;
    double pad;
    double sx(double x) const { return (x - box.xmin) * scale + pad; }
    double sy(double y) const { return (box.ymax - y) * scale + pad; }  // y points up
    double width() const { return (box.xmax - box.xmin) * scale + 2 * pad; }
    double height() const { return (box.ymax - box.ymin) * scale + 2 * pad; }
};

viewport fit_view(const aabb& box) {
    viewport v;
    v.box = box;
    v.size = 1000.0;
    double span = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    v.scale = span > 0 ? v.size / span : 1.0;
    v.pad = 8.0;
    return v;
}

void svg_open(std::ostream& out, const viewport& v) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << g9(v.width()) << " "
        << g9(v.height()) << "\">\n";
}

void svg_polygon(std::ostream& out, const viewport& v, const polygon& p,
                 const std::string& fill, const std::string& stroke, double stroke_w) {
    out << "<polygon points=\"";
    for (size_t i = 0; i < p.v.size(); ++i)
        out << (i ? " " : "") << g9(v.sx(p.v[i].x)) << "," << g9(v.sy(p.v[i].y));
    out << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << g9(stroke_w) << "\"/>\n";
}

}  // namespace

void write_patch_json(std::ostream& out, const supertile_tree& t, bool all_levels) {
    out << "{\n  \"schema_version\": 1,\n  \"rule\": \"" << t.rule().name
        << "\",\n  \"lambda\": " << g17(t.rule().lambda) << ",\n  \"level\": " << t.depth()
        << ",\n  \"root\": " << t.root_type() << ",\n  \"tiles\": [";
    bool first = true;
    if (all_levels) {
        for (int l = t.depth(); l >= 0; --l)
            for (int32_t id : t.level_tiles(l)) {
                json_tile(out, t, id, first);
                first = false;
            }
    } else {
        for (int32_t id : t.level_tiles(0)) {
            json_tile(out, t, id, first);
            first = false;
        }
    }
    out << "\n  ]\n}\n";
}

void write_patch_svg(std::ostream& out, const supertile_tree& t) {
    viewport v = fit_view(t.node(0).box);
    int n = static_cast<int>(t.rule().prototiles.size());
    double w = v.size / 1000.0;
    svg_open(out, v);
    for (int32_t id : t.level_tiles(0))
        svg_polygon(out, v, t.realize(id), palette_color(t.node(id).proto, n, 0.62), "#333333",
                    w);
    out << "</svg>\n";
}

void write_decomposition_svg(std::ostream& out, const supertile_tree& t,
                             const decomposition& d, const polygon& curve) {
    viewport v = fit_view(t.node(0).box);
    double w = v.size / 1000.0;
    svg_open(out, v);
    for (int32_t id : t.level_tiles(0))
        svg_polygon(out, v, t.realize(id), "#f4f4f4", "#cccccc", w);
    int nlevels = std::max<int>(1, d.m);
    for (int l = 0; l < d.m; ++l)
        for (int32_t id : d.parts[l])
            svg_polygon(out, v, t.realize(id), palette_color(l, nlevels, 0.55), "#333333",
                        w * (l + 1));
    svg_polygon(out, v, curve, "none", "#000000", 2.5 * w);
    out << "</svg>\n";
}

void write_experiment_csv(std::ostream& out, const std::vector<experiment_row>& rows,
                          int ntypes) {
    out << "rule,kind,seed,scale,L_gamma,N,ratio_lin,ratio_log";
    for (int i = 0; i < ntypes; ++i) out << ",D_" << i;
    out << "\n";
    for (const experiment_row& r : rows) {
        out << r.rule_name << "," << curve_kind_name(r.kind) << "," << r.seed << ","
            << g9(r.scale) << "," << r.boundary << "," << r.total << "," << g9(r.ratio_lin)
            << "," << g9(r.ratio_log);
        for (int i = 0; i < ntypes; ++i)
            out << "," << g9(i < static_cast<int>(r.deviation.size()) ? r.deviation[i] : 0.0);
        out << "\n";
    }
}

}  // namespace subtile
