#include "subtile/export.hpp"
#include "subtile/lab.hpp"
#include "subtile/perron.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

// Exit codes: 0 success, 2 usage problems (bad flags, missing or
// malformed input files), 1 domain problems (non-primitive matrix,
// curve outside the patch, failed validation, cap exceeded).

namespace {

using ojson = nlohmann::ordered_json;
using namespace subtile;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

substitution_rule load_rule(const std::string& src) {
    if (is_builtin_rule(src)) return builtin_rule(src);
    if (!std::filesystem::exists(src))
        throw usage_error("file not found: " + src);
    try {
        return parse_rule_file(src);
    } catch (const std::exception& e) {
        throw usage_error(e.what());
    }
}

intmatrix load_matrix(const std::string& file, const std::string& name) {
    if (!name.empty()) {
        if (is_builtin_matrix(name)) return builtin_matrix(name);
        throw usage_error("unknown builtin matrix: " + name);
    }
    if (!std::filesystem::exists(file))
        throw usage_error("file not found: " + file);
    try {
        return intmatrix::parse_file(file);
    } catch (const std::exception& e) {
        throw usage_error(e.what());
    }
}

polygon load_curve_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw usage_error("file not found: " + path);
    std::ifstream in(path);
    polygon p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x)) continue;  // blank or comment-only line
        if (!(ss >> y))
            throw usage_error(path + " line " + std::to_string(lineno) + ": expected \"x y\"");
        std::string rest;
        if (ss >> rest)
            throw usage_error(path + " line " + std::to_string(lineno) + ": trailing input");
        p.v.push_back({x, y});
    }
    if (p.v.size() < 3) throw usage_error(path + ": a curve needs at least 3 vertices");
    try {
        validate_polygon(p, 1e-9 * std::max(1.0, diameter(p)));
    } catch (const std::exception& e) {
        throw usage_error(path + ": " + e.what());
    }
    return p;
}

// "A:B:N" = N geometric steps from A to B; otherwise a comma list.
std::vector<double> parse_scales(const std::string& text) {
    std::vector<double> out;
    try {
        if (text.find(':') != std::string::npos) {
            std::istringstream ss(text);
            std::string a, b, n;
            if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
                throw usage_error("");
            double lo = std::stod(a), hi = std::stod(b);
            int steps = std::stoi(n);
            if (!(lo > 0) || !(hi > 0) || steps < 1) throw usage_error("");
            if (steps == 1) return {lo};
            double ratio = std::pow(hi / lo, 1.0 / (steps - 1));
            double s = lo;
            for (int i = 0; i < steps; ++i, s *= ratio) out.push_back(s);
            return out;
        }
        std::istringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    } catch (...) {
        throw usage_error("bad --scales \"" + text + "\"; use A:B:N (geometric) or a,b,c");
    }
    if (out.empty())
        throw usage_error("bad --scales \"" + text + "\"; use A:B:N (geometric) or a,b,c");
    return out;
}

std::vector<curve_kind> parse_kinds(const std::string& text) {
    std::vector<curve_kind> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(curve_kind_from_name(item));
    if (out.empty()) throw usage_error("no curve kinds given");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw usage_error("cannot write file: " + path);
    return f;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

ojson perron_json(const perron_data& pd) {
    ojson spec_list = ojson::array();
    for (const eigen_cluster& c : pd.spectrum)
        spec_list.push_back({{"re", c.value.real()},
                             {"im", c.value.imag()},
                             {"modulus", std::abs(c.value)},
                             {"multiplicity", c.multiplicity}});
    return {{"mu", pd.mu},
            {"second_modulus", pd.second_modulus},
            {"nu", pd.nu},
            {"right", pd.right},
            {"left", pd.left},
            {"spectrum", spec_list}};
}

// curve options shared by count and decompose
struct curve_options {
    std::string file;
    std::string kind = "ngon_circle";
    double scale = 0.0;
    std::uint64_t seed = 1;
};

polygon resolve_curve(const curve_options& c, const supertile_tree& tree, ojson& desc) {
    if (!c.file.empty()) {
        if (c.scale > 0.0)
            throw usage_error("--curve and --scale are mutually exclusive");
        desc = {{"file", c.file}};
        return load_curve_file(c.file);
    }
    if (c.scale == 0.0) throw usage_error("need --curve FILE or --kind KIND --scale S");
    if (!(c.scale > 0.0)) throw usage_error("--scale must be positive");
    vec2 center = patch_center(tree.realize(0)).center;
    desc = {{"kind", c.kind},
            {"scale", c.scale},
            {"seed", c.seed},
            {"center", {center.x, center.y}}};
    return make_curve(curve_kind_from_name(c.kind), c.scale, c.seed, center);
}

ojson counts_json(const curve_counts& c) {
    return {{"N", c.total},
            {"N_i", c.by_type},
            {"L", c.boundary},
            {"L_levels", c.boundary_by_level}};
}

int run(int argc, char** argv) {
    CLI::App app{"substitution tilings: patches, counts, decompositions, experiments"};
    app.require_subcommand(1);

    // rules
    auto* rules = app.add_subcommand("rules", "list, print, or validate substitution rules");
    rules->require_subcommand(1);
    rules->add_subcommand("list", "names of the built-in rules")->callback([] {
        for (const std::string& n : builtin_rule_names()) std::cout << n << "\n";
    });
    struct {
        std::string src;
    } show_cfg;
    auto* show = rules->add_subcommand("show", "print a rule in the rule file format");
    show->add_option("rule", show_cfg.src, "builtin name or rule file")->required();
    show->callback([&] { std::cout << serialize_rule(load_rule(show_cfg.src)); });

    struct {
        std::string src;
        double tol = 1e-7;
    } val_cfg;
    auto* val = rules->add_subcommand("validate", "check areas, containment, overlaps");
    val->add_option("rule", val_cfg.src, "builtin name or rule file")->required();
    val->add_option("--tol", val_cfg.tol, "relative tolerance (default 1e-7)");
    val->callback([&] {
        substitution_rule r = load_rule(val_cfg.src);
        validation_report rep = validate_rule(r, val_cfg.tol);
        ojson tiles = ojson::array();
        for (const tile_check& tc : rep.tiles)
            tiles.push_back({{"parent", tc.parent},
                             {"area_error", tc.area_error},
                             {"area_ok", tc.area_ok},
                             {"containment_ok", tc.containment_ok},
                             {"max_overlap", tc.max_overlap},
                             {"overlap_ok", tc.overlap_ok}});
        emit({{"schema_version", 1},
              {"rule", r.name},
              {"ok", rep.ok},
              {"primitive", rep.primitive},
              {"tiles", tiles},
              {"notes", rep.notes}});
        if (!rep.ok) throw std::domain_error("rule failed validation");
    });

    // matrix
    struct {
        std::string file, rule;
        double lambda = 0.0;
        bool classify = false;
    } mx_cfg;
    auto* mx = app.add_subcommand("matrix", "Perron data of a substitution matrix");
    mx->add_option("file", mx_cfg.file, "matrix file: first line n, then n rows");
    mx->add_option("--rule", mx_cfg.rule, "builtin name (rules plus \"rauzy\")");
    mx->add_option("--lambda", mx_cfg.lambda,
                   "dilation for regime classification (default sqrt(mu))");
    mx->add_flag("--classify", mx_cfg.classify, "add the discrepancy regime");
    mx->callback([&] {
        if (mx_cfg.file.empty() == mx_cfg.rule.empty())
            throw usage_error("need exactly one of <file> or --rule NAME");
        intmatrix m = load_matrix(mx_cfg.file, mx_cfg.rule);
        perron_data pd = analyze_matrix(m);  // throws for non-primitive input
        ojson j{{"schema_version", 1},
                {"source", mx_cfg.rule.empty() ? mx_cfg.file : mx_cfg.rule},
                {"n", m.size()},
                {"primitive", true}};
        j.update(perron_json(pd));
        if (mx_cfg.classify) {
            double lambda = mx_cfg.lambda > 0.0 ? mx_cfg.lambda : std::sqrt(pd.mu);
            regime_report rr = classify_regime(m, lambda);
            j["lambda"] = lambda;
            j["regime"] = regime_name(rr.kind);
            j["semisimple"] = rr.semisimple;
            j["witness"] = rr.witness;
        }
        emit(j);
    });

    // generate
    struct {
        std::string rule, out;
        int root = 0, depth = 0, jobs = 1;
        bool all_levels = false;
    } gen_cfg;
    auto* gen = app.add_subcommand("generate", "expand a supertile patch to JSON or SVG");
    gen->add_option("--rule", gen_cfg.rule, "builtin name or rule file")->required();
    gen->add_option("--root", gen_cfg.root, "root prototile (default 0)");
    gen->add_option("--depth", gen_cfg.depth, "subdivision levels")->required();
    gen->add_option("--jobs", gen_cfg.jobs, "worker threads (default 1)");
    gen->add_option("--out", gen_cfg.out, "output file, .json or .svg")->required();
    gen->add_flag("--all-levels", gen_cfg.all_levels, "JSON: include every level, not just 0");
    gen->callback([&] {
        bool json = ends_with(gen_cfg.out, ".json"), svg = ends_with(gen_cfg.out, ".svg");
        if (!json && !svg) throw usage_error("--out must end in .json or .svg");
        if (gen_cfg.all_levels && !json)
            throw usage_error("--all-levels applies to JSON output only");
        supertile_tree t =
            supertile_tree::build(load_rule(gen_cfg.rule), gen_cfg.root, gen_cfg.depth,
                                  gen_cfg.jobs);
        {
            std::ofstream f = open_out(gen_cfg.out);
            if (json)
                write_patch_json(f, t, gen_cfg.all_levels);
            else
                write_patch_svg(f, t);
        }
        auto m = t.level_metrics(0);
        emit({{"schema_version", 1},
              {"rule", t.rule().name},
              {"root", t.root_type()},
              {"depth", t.depth()},
              {"nodes", t.node_count()},
              {"tiles", static_cast<long long>(t.level_tiles(0).size())},
              {"R", m.big_r},
              {"r", m.small_r},
              {"K", m.k_bound},
              {"out", gen_cfg.out}});
    });

    // count
    struct {
        std::string rule;
        int root = 0, depth = 0, jobs = 1;
        curve_options curve;
    } cnt_cfg;
    auto* cnt = app.add_subcommand("count", "count tiles against a Jordan curve");
    cnt->add_option("--rule", cnt_cfg.rule, "builtin name or rule file")->required();
    cnt->add_option("--root", cnt_cfg.root, "root prototile (default 0)");
    cnt->add_option("--depth", cnt_cfg.depth, "subdivision levels")->required();
    cnt->add_option("--jobs", cnt_cfg.jobs, "worker threads (default 1)");
    cnt->add_option("--curve", cnt_cfg.curve.file, "curve file, one \"x y\" per line");
    cnt->add_option("--kind", cnt_cfg.curve.kind,
                    "generated curve kind: ngon_circle|square|star_blob|rot_rect");
    cnt->add_option("--scale", cnt_cfg.curve.scale, "generated curve size");
    cnt->add_option("--seed", cnt_cfg.curve.seed, "generated curve seed (default 1)");
    cnt->callback([&] {
        supertile_tree t = supertile_tree::build(load_rule(cnt_cfg.rule), cnt_cfg.root,
                                                 cnt_cfg.depth, cnt_cfg.jobs);
        ojson desc;
        polygon curve = resolve_curve(cnt_cfg.curve, t, desc);
        curve_counts c = count_with_curve(t, curve);
        emit({{"schema_version", 1},
              {"rule", t.rule().name},
              {"root", t.root_type()},
              {"depth", t.depth()},
              {"curve", desc},
              {"counts", counts_json(c)}});
    });

    // decompose
    struct {
        std::string rule, out;
        int root = 0, depth = 0, jobs = 1;
        curve_options curve;
    } dec_cfg;
    auto* dec = app.add_subcommand("decompose",
                                   "split a curve's region into maximal supertiles");
    dec->add_option("--rule", dec_cfg.rule, "builtin name or rule file")->required();
    dec->add_option("--root", dec_cfg.root, "root prototile (default 0)");
    dec->add_option("--depth", dec_cfg.depth, "subdivision levels")->required();
    dec->add_option("--jobs", dec_cfg.jobs, "worker threads (default 1)");
    dec->add_option("--curve", dec_cfg.curve.file, "curve file, one \"x y\" per line");
    dec->add_option("--kind", dec_cfg.curve.kind,
                    "generated curve kind: ngon_circle|square|star_blob|rot_rect");
    dec->add_option("--scale", dec_cfg.curve.scale, "generated curve size");
    dec->add_option("--seed", dec_cfg.curve.seed, "generated curve seed (default 1)");
    dec->add_option("--out", dec_cfg.out, "optional rendering, .svg");
    dec->callback([&] {
        if (!dec_cfg.out.empty() && !ends_with(dec_cfg.out, ".svg"))
            throw usage_error("--out must end in .svg");
        supertile_tree t = supertile_tree::build(load_rule(dec_cfg.rule), dec_cfg.root,
                                                 dec_cfg.depth, dec_cfg.jobs);
        ojson desc;
        polygon curve = resolve_curve(dec_cfg.curve, t, desc);
        curve_counts c = count_with_curve(t, curve);
        decomposition d = decompose_region(t, curve);
        bounds_report br = verify_decomposition_bounds(t, d, c);
        ojson parts = ojson::array();
        for (const auto& p : d.parts) parts.push_back(p.size());
        ojson rows = ojson::array();
        for (const level_bound& rb : br.rows)
            rows.push_back({{"level", rb.level},
                            {"growth_lhs", rb.growth_lhs},
                            {"growth_rhs", rb.growth_rhs},
                            {"growth_ok", rb.growth_ok},
                            {"part_count", rb.part_count},
                            {"parts_rhs", rb.parts_rhs},
                            {"parts_ok", rb.parts_ok},
                            {"parts_checked", rb.parts_checked}});
        ojson j{{"schema_version", 1},
                {"rule", t.rule().name},
                {"root", t.root_type()},
                {"depth", t.depth()},
                {"curve", desc},
                {"counts", counts_json(c)},
                {"m", d.m},
                {"part_counts", parts},
                {"bounds", {{"all_ok", br.all_ok}, {"rows", rows}}}};
        try {
            std::vector<bigint> rec = reconstruct_type_counts(t, d, substitution_matrix(t.rule()));
            bool match = true;
            for (size_t i = 0; i < rec.size(); ++i)
                match = match && rec[i] == c.by_type[i];
            j["reconstruct_matches"] = match;
        } catch (const std::domain_error&) {
            j["reconstruct_matches"] = nullptr;  // rule has no translation-typed matrix
        }
        if (!dec_cfg.out.empty()) {
            std::ofstream f = open_out(dec_cfg.out);
            write_decomposition_svg(f, t, d, curve);
            j["out"] = dec_cfg.out;
        }
        emit(j);
    });

    // experiment
    struct {
        std::string rule, kinds = "ngon_circle,square,star_blob", scales, out;
        int root = 0, depth = 0, jobs = 1, seeds = 1;
    } exp_cfg;
    auto* exp = app.add_subcommand("experiment", "discrepancy sweep over generated curves");
    exp->add_option("--rule", exp_cfg.rule, "builtin name or rule file")->required();
    exp->add_option("--root", exp_cfg.root, "root prototile (default 0)");
    exp->add_option("--depth", exp_cfg.depth, "subdivision levels")->required();
    exp->add_option("--kinds", exp_cfg.kinds, "comma list (default ngon_circle,square,star_blob)");
    exp->add_option("--scales", exp_cfg.scales, "A:B:N geometric sweep, or comma list")
        ->required();
    exp->add_option("--seeds", exp_cfg.seeds, "number of seeds, used as 1..N (default 1)");
    exp->add_option("--jobs", exp_cfg.jobs, "worker threads (default 1)");
    exp->add_option("--out", exp_cfg.out, "CSV file (default: CSV to stdout)");
    exp->callback([&] {
        if (exp_cfg.seeds < 1) throw usage_error("--seeds must be at least 1");
        std::vector<std::uint64_t> seeds;
        for (int i = 1; i <= exp_cfg.seeds; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
        substitution_rule r = load_rule(exp_cfg.rule);
        std::vector<experiment_row> rows =
            run_experiment(r, exp_cfg.root, exp_cfg.depth, parse_kinds(exp_cfg.kinds),
                           parse_scales(exp_cfg.scales), seeds, exp_cfg.jobs);
        int n = static_cast<int>(r.prototiles.size());
        if (exp_cfg.out.empty()) {
            write_experiment_csv(std::cout, rows, n);
        } else {
            std::ofstream f = open_out(exp_cfg.out);
            write_experiment_csv(f, rows, n);
            emit({{"schema_version", 1},
                  {"rule", r.name},
                  {"depth", exp_cfg.depth},
                  {"rows", rows.size()},
                  {"out", exp_cfg.out}});
        }
    });

    // frequencies
    struct {
        std::string rule;
        int root = 0, depth = 0;
    } freq_cfg;
    auto* freq = app.add_subcommand("frequencies", "patch type frequencies vs the limit");
    freq->add_option("--rule", freq_cfg.rule, "builtin name or rule file")->required();
    freq->add_option("--root", freq_cfg.root, "root prototile (default 0)");
    freq->add_option("--depth", freq_cfg.depth, "subdivision levels")->required();
    freq->callback([&] {
        substitution_rule r = load_rule(freq_cfg.rule);
        std::vector<double> f = empirical_frequencies(r, freq_cfg.depth, freq_cfg.root);
        perron_data pd = analyze_matrix(substitution_matrix(r));
        double worst = 0.0;
        for (size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst, std::fabs(f[i] - pd.nu[i]));
        emit({{"schema_version", 1},
              {"rule", r.name},
              {"root", freq_cfg.root},
              {"depth", freq_cfg.depth},
              {"frequencies", f},
              {"nu", pd.nu},
              {"max_abs_diff", worst}});
    });

    // verify
    struct {
        std::string rule;
        int root = 0, depth = 0, jobs = 1, samples = 200, curves = 20;
        std::uint64_t seed = 12345;
    } ver_cfg;
    auto* ver = app.add_subcommand("verify", "randomized lemma and decomposition checks");
    ver->add_option("--rule", ver_cfg.rule, "builtin name or rule file")->required();
    ver->add_option("--root", ver_cfg.root, "root prototile (default 0)");
    ver->add_option("--depth", ver_cfg.depth, "subdivision levels (at least 2)")->required();
    ver->add_option("--samples", ver_cfg.samples, "rounds per randomized check (default 200)");
    ver->add_option("--curves", ver_cfg.curves, "decomposition sweep curves (default 20)");
    ver->add_option("--seed", ver_cfg.seed, "RNG seed (default 12345)");
    ver->add_option("--jobs", ver_cfg.jobs, "worker threads (default 1)");
    ver->callback([&] {
        substitution_rule r = load_rule(ver_cfg.rule);
        supertile_tree t =
            supertile_tree::build(r, ver_cfg.root, ver_cfg.depth, ver_cfg.jobs);
        lemma_report rep = verify_lemmas(t, ver_cfg.samples, ver_cfg.seed);
        auto check = [](const check_summary& s) {
            return ojson{{"samples", s.samples},
                         {"skipped", s.skipped},
                         {"violations", s.violations},
                         {"worst_margin", s.worst_margin}};
        };
        // decomposition sweep: reconstruction identity plus level bounds
        std::mt19937_64 rng(ver_cfg.seed ^ 0x9e3779b97f4a7c15ull);
        auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        deep_point at = patch_center(t.realize(0));
        intmatrix m = substitution_matrix(r);
        const curve_kind cycle[4] = {curve_kind::star_blob, curve_kind::ngon_circle,
                                     curve_kind::rot_rect, curve_kind::square};
        long long mismatches = 0, bound_violations = 0;
        for (int i = 0; i < ver_cfg.curves; ++i) {
            double scale = (0.10 + 0.30 * u01()) * at.clearance;
            polygon curve = make_curve(cycle[i % 4], scale, rng(), at.center);
            curve_counts c = count_with_curve(t, curve);
            decomposition d = decompose_region(t, curve);
            if (!verify_decomposition_bounds(t, d, c).all_ok) ++bound_violations;
            std::vector<bigint> rec = reconstruct_type_counts(t, d, m);
            for (size_t k = 0; k < rec.size(); ++k)
                if (rec[k] != c.by_type[k]) {
                    ++mismatches;
                    break;
                }
        }
        bool ok = rep.all_ok() && mismatches == 0 && bound_violations == 0;
        emit({{"schema_version", 1},
              {"rule", r.name},
              {"root", ver_cfg.root},
              {"depth", ver_cfg.depth},
              {"samples", ver_cfg.samples},
              {"seed", ver_cfg.seed},
              {"checks",
               {{"ball_complexity", check(rep.ball_complexity)},
                {"arc_diameter", check(rep.arc_diameter)},
                {"level_comparison", check(rep.level_comparison)},
                {"level_monotone", check(rep.level_monotone)}}},
              {"decomposition_sweep",
               {{"curves", ver_cfg.curves},
                {"reconstruct_mismatches", mismatches},
                {"bound_violations", bound_violations}}},
              {"ok", ok}});
        if (!ok) throw std::domain_error("verification found violations");
    });

    // curve-info
    struct {
        std::string file;
    } ci_cfg;
    auto* ci = app.add_subcommand("curve-info", "diameter and vertex count of a curve file");
    ci->add_option("file", ci_cfg.file, "curve file, one \"x y\" per line")->required();
    ci->callback([&] {
        polygon p = load_curve_file(ci_cfg.file);
        emit({{"schema_version", 1},
              {"file", ci_cfg.file},
              {"vertices", p.v.size()},
              {"diameter", diameter(p)},
              {"area", area(p)}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version exit 0; every real parse problem is a usage error
        return app.exit(e) == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const subtile::rule_parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
