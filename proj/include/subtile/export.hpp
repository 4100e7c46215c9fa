#pragma once

#include "subtile/engine.hpp"
#include "subtile/lab.hpp"

#include <iosfwd>
#include <vector>

// File writers. All output is deterministic: fixed field order, fixed
// float formatting (17 significant digits for geometry, 9 for measured
// ratios), no timestamps.

namespace subtile {

// {schema_version, rule, lambda, level, root, tiles: [{prototile, level,
// address, vertices}]}; level-0 tiles only unless all_levels, in address
// order (levels top-down when all_levels).
void write_patch_json(std::ostream& out, const supertile_tree& t, bool all_levels = false);

// Level-0 tiles filled by prototile color.
void write_patch_svg(std::ostream& out, const supertile_tree& t);

// Patch outline in gray, the parts filled by level color, the curve on top.
void write_decomposition_svg(std::ostream& out, const supertile_tree& t,
                             const decomposition& d, const polygon& curve);

// Header rule,kind,seed,scale,L_gamma,N,ratio_lin,ratio_log,D_0,...,D_{n-1}
// with one deviation column per prototile.
void write_experiment_csv(std::ostream& out, const std::vector<experiment_row>& rows,
                          int ntypes);

}  // namespace subtile
