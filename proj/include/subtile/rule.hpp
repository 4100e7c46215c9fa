#pragma once

#include "subtile/geometry.hpp"
#include "subtile/intmatrix.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// A substitution rule: finitely many prototiles plus, for each, a way to
// cut its lambda-scaled copy into placed copies of prototiles. The rule
// file format is line oriented:
//
//   lambda <expr>                       required, value > 1
//   group  <translations|direct|all>    required
//   rotation_order <k>                  optional; child rot becomes an
//                                       integer index, angle 2*pi*rot/k
//   tile <id> [label]                   then one "v <expr> <expr>" per vertex
//   sub <parent-id>                     then one line per child:
//   child <id> rot <expr|index> [reflect] dx <expr> dy <expr>
//
// '#' starts a comment, blank lines are skipped, expressions contain no
// whitespace. Tile ids must be dense 0..n-1. Vertices are stored
// counterclockwise (input order may be either). reflect requires group
// all and mirrors across the x axis before the rotation is applied.

namespace subtile {

enum class isometry_group { translations_only, direct, all };

const char* group_name(isometry_group g);

struct prototile {
    std::string label;
    polygon shape;
};

struct child_placement {
    int type = 0;
    isometry iso;
    std::optional<int> rot_index;  // present iff the rule has rotation_order
};

struct substitution_rule {
    std::string name;
    double lambda = 0.0;
    isometry_group group = isometry_group::translations_only;
    std::optional<int> rotation_order;
    std::vector<prototile> prototiles;
    std::vector<std::vector<child_placement>> children;  // indexed by parent type
};

struct rule_parse_error : std::runtime_error {
    int line;  // 1-based
    rule_parse_error(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
          line(line_no) {}
};

substitution_rule parse_rule(const std::string& text, const std::string& name = "");
substitution_rule parse_rule_file(const std::string& path);
std::string serialize_rule(const substitution_rule& r);

struct tile_check {
    int parent = 0;
    double area_error = 0.0;  // relative to lambda^2 * parent area
    bool area_ok = false;
    bool containment_ok = false;
    double max_overlap = 0.0;  // relative to the smaller child's area
    bool overlap_ok = false;
};

struct validation_report {
    bool ok = false;         // all geometric checks passed
    bool primitive = false;  // informational, not part of ok
    std::vector<tile_check> tiles;
    std::vector<std::string> notes;
};

validation_report validate_rule(const substitution_rule& r, double tol = 1e-7);

// m[i][j] = copies of prototile i in the subdivision of prototile j.
// Throws std::domain_error for a translations-only rule whose children
// rotate or reflect; such a rule needs expand_group first.
intmatrix substitution_matrix(const substitution_rule& r);

// Closes the prototile set under the rotations (and reflections, for
// group all) that child placements use, quantized to multiples of
// 2*pi/rotation_order. The result types every placement by (base tile,
// rotation step, mirror) and its children are pure translations. Throws
// std::domain_error when a child rotation is not commensurate with the
// requested order.
substitution_rule expand_group(const substitution_rule& r, int rotation_order);

const std::vector<std::string>& builtin_rule_names();
bool is_builtin_rule(const std::string& name);
substitution_rule builtin_rule(const std::string& name);

// Matrices only; includes every builtin rule plus "rauzy", which has no
// planar geometry here.
const std::vector<std::string>& builtin_matrix_names();
bool is_builtin_matrix(const std::string& name);
intmatrix builtin_matrix(const std::string& name);

}  // namespace subtile
