#pragma once

#include "subtile/rule.hpp"

#include <cstdint>
#include <vector>

// Supertile hierarchy: level L is one inflated prototile, level 0 the
// finished patch. Every node's children occupy contiguous ids, each
// level list is in address order, and the layout is identical for any
// worker count.

namespace subtile {

struct tile_node {
    int32_t proto = 0;
    int32_t parent = -1;
    int32_t first_child = -1;
    int32_t nchild = 0;
    int32_t level = 0;
    isometry iso;  // maps the lambda^level-scaled prototile to the plane
    aabb box;
};

class supertile_tree {
  public:
    // Default generation cap; SUBTILE_TILE_CAP overrides it.
    static long long tile_cap();

    // Counts every node of the hierarchy against cap before allocating.
    // jobs > 1 builds the root's branches concurrently; the result is
    // bit-identical to a sequential build.
    static supertile_tree build(const substitution_rule& r, int root_type, int depth,
                                int jobs = 1, long long cap = tile_cap());

    const substitution_rule& rule() const { return rule_; }
    int depth() const { return depth_; }
    int root_type() const { return root_type_; }
    int64_t node_count() const { return static_cast<int64_t>(nodes_.size()); }
    const tile_node& node(int32_t id) const { return nodes_[id]; }
    const std::vector<int32_t>& level_tiles(int level) const { return levels_[level]; }
    double lambda_pow(int level) const { return pow_[level]; }
    double geometry_tol(int level) const { return 1e-9 * pow_[level]; }

    polygon realize(int32_t id) const;
    std::vector<int> address(int32_t id) const;
    std::vector<long long> type_counts(int level) const;

    struct metrics {
        double big_r = 0.0;    // min enclosing ball radius over the level's tiles
        double small_r = 0.0;  // min inscribed ball radius over the level's tiles
        long long k_bound = 0; // floor(16 big_r^2 / small_r^2), level invariant
    };
    metrics level_metrics(int level) const;

  private:
    substitution_rule rule_;
    int root_type_ = 0;
    int depth_ = 0;
    double base_big_r_ = 0.0;
    double base_small_r_ = 0.0;
    std::vector<tile_node> nodes_;
    std::vector<std::vector<int32_t>> levels_;
    std::vector<double> pow_;
};

}  // namespace subtile
