#pragma once

#include "subtile/engine.hpp"
#include "subtile/intmatrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Measurement side of the engine: given a patch and a Jordan curve, count
// tiles against the curve, decompose the curve's region into maximal
// supertiles, and check the counting bounds that make frequency
// convergence work. Curves are simple closed polygons treated as closed
// sets, like everything else here.

namespace subtile {

struct curve_counts {
    long long total = 0;                      // tiles of the patch inside the curve
    std::vector<long long> by_type;           // the same, split by prototile
    long long boundary = 0;                   // level-0 tiles meeting the curve
    std::vector<long long> boundary_by_level; // meeting counts for every level
};

// Requires the curve to lie inside the root supertile (boundary contact
// allowed); throws std::domain_error otherwise. Either vertex orientation
// is accepted.
curve_counts count_with_curve(const supertile_tree& t, const polygon& gamma);

struct decomposition {
    // Smallest level with no fully contained supertile; parts[l] lists
    // the maximal contained supertiles of level l, for l below m.
    int m = 0;
    std::vector<std::vector<int32_t>> parts;
};

decomposition decompose_region(const supertile_tree& t, const polygon& gamma);

// Per-type tile count of the region, rebuilt from the parts alone via
// columns of powers of the substitution matrix; exact, and equal to
// count_with_curve's by_type.
std::vector<bigint> reconstruct_type_counts(const supertile_tree& t, const decomposition& d,
                                            const intmatrix& m);

struct level_bound {
    int level = 0;
    double growth_lhs = 0.0;  // lambda^(m-level-1)
    double growth_rhs = 0.0;  // (R/r) * boundary_by_level[level]
    bool growth_ok = false;
    long long part_count = 0;
    long long parts_rhs = 0;  // max children per tile * boundary_by_level[level+1]
    bool parts_ok = false;
    bool parts_checked = false;  // false when level+1 exceeds the tree depth
};

struct bounds_report {
    bool all_ok = true;
    std::vector<level_bound> rows;
};

bounds_report verify_decomposition_bounds(const supertile_tree& t, const decomposition& d,
                                          const curve_counts& c);

struct deep_point {
    vec2 center;
    double clearance = 0.0;  // distance to the polygon boundary
};

// Most interior point of a patch: exact Chebyshev center for convex
// outlines, clearance-maximizing grid scan otherwise. Curves are placed
// here so they stay away from the patch boundary.
deep_point patch_center(const polygon& root);

enum class curve_kind { ngon_circle, square, star_blob, rot_rect };

curve_kind curve_kind_from_name(const std::string& s);  // throws std::invalid_argument
const char* curve_kind_name(curve_kind k);

// ngon_circle: regular 64-gon of radius scale. square: axis-aligned
// square of side scale. star_blob: seeded 24-spoke star with radii in
// [0.55, 0.95] * scale. rot_rect: seeded rectangle, long side scale.
// All centered on center; deterministic in (kind, scale, seed).
polygon make_curve(curve_kind kind, double scale, std::uint64_t seed, vec2 center);

struct experiment_row {
    std::string rule_name;
    curve_kind kind = curve_kind::ngon_circle;
    std::uint64_t seed = 0;
    double scale = 0.0;
    long long boundary = 0;             // L
    long long total = 0;                // N
    std::vector<double> deviation;      // D_i = |N_i - nu_i * N|
    double ratio_lin = 0.0;             // max_i D_i / L
    double ratio_log = 0.0;             // max_i D_i / (L ln L); NaN when L < 2
};

// Builds the tree once, then one row per (scale, kind, seed), scales
// ascending. Curves are centered on the patch's deepest interior point
// and must clear the patch boundary by twice the tile outer radius.
std::vector<experiment_row> run_experiment(const substitution_rule& rule, int root_type,
                                           int depth, const std::vector<curve_kind>& kinds,
                                           const std::vector<double>& scales,
                                           const std::vector<std::uint64_t>& seeds, int jobs);

// Type frequencies of the depth-L patch, computed exactly, normalized.
std::vector<double> empirical_frequencies(const substitution_rule& rule, int depth,
                                          int root_type = 0);

struct check_summary {
    long long samples = 0;     // checks actually evaluated
    long long skipped = 0;     // samples whose hypotheses did not apply
    long long violations = 0;
    double worst_margin = 0.0;  // max lhs/rhs seen; <= 1 everywhere when clean
};

struct lemma_report {
    check_summary ball_complexity;    // tiles within 2R of a point, vs K
    check_summary arc_diameter;       // polyline diameter vs 2R * tiles met
    check_summary level_comparison;   // coarse meeting count vs (2K+1) lambda^-l * fine
    check_summary level_monotone;     // meeting counts never grow with level
    bool all_ok() const {
        return ball_complexity.violations == 0 && arc_diameter.violations == 0 &&
               level_comparison.violations == 0 && level_monotone.violations == 0;
    }
};

// Runs `samples` seeded rounds of each randomized check on the given
// patch. Requires depth >= 2.
lemma_report verify_lemmas(const supertile_tree& t, int samples, std::uint64_t seed);

}  // namespace subtile
