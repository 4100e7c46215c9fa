#include "subtile/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace subtile {

long long supertile_tree::tile_cap() {
    const char* env = std::getenv("SUBTILE_TILE_CAP");
    if (!env || !*env) return 5'000'000;
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (*end != '\0' || v <= 0)
        throw std::runtime_error("SUBTILE_TILE_CAP must be a positive integer");
    return v;
}

namespace {

struct branch_result {
    std::vector<tile_node> nodes;                 // local ids, 0 = branch root
    std::vector<std::vector<int32_t>> levels;     // by level, address order
};

// Expands one subtree depth-first into a local buffer. The root node of
// the branch must already sit at index 0 with its final iso and level.
void expand_branch(const substitution_rule& rule, const std::vector<double>& pow,
                   branch_result& out) {
    std::vector<int32_t> stack;
    out.levels[out.nodes[0].level].push_back(0);
    if (out.nodes[0].level > 0) stack.push_back(0);
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        tile_node parent = out.nodes[id];  // copy; the vector reallocates
        const auto& kids = rule.children[parent.proto];
        if (kids.empty())
            throw std::domain_error("prototile " + std::to_string(parent.proto) +
                                    " (" + rule.prototiles[parent.proto].label +
                                    ") has no subdivision");
        int32_t first = static_cast<int32_t>(out.nodes.size());
        out.nodes[id].first_child = first;
        out.nodes[id].nchild = static_cast<int32_t>(kids.size());
        int lvl = parent.level - 1;
        for (const child_placement& c : kids) {
            tile_node t;
            t.proto = c.type;
            t.parent = id;
            t.level = lvl;
            isometry scaled_iso = c.iso;
            scaled_iso.t = pow[lvl] * c.iso.t;
            t.iso = compose(parent.iso, scaled_iso);
            t.box = bounds(apply(t.iso, scaled(rule.prototiles[c.type].shape, pow[lvl])));
            out.levels[lvl].push_back(static_cast<int32_t>(out.nodes.size()));
            out.nodes.push_back(t);
        }
        if (lvl > 0)
            for (int32_t k = static_cast<int32_t>(kids.size()) - 1; k >= 0; --k)
                stack.push_back(first + k);
    }
}

}  // namespace

supertile_tree supertile_tree::build(const substitution_rule& r, int root_type, int depth,
                                     int jobs, long long cap) {
    int n = static_cast<int>(r.prototiles.size());
    if (root_type < 0 || root_type >= n)
        throw std::invalid_argument("root type out of range");
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");

    // Exact node count up front so the cap check cannot overflow.
    std::vector<bigint> level_count(n);
    level_count[root_type] = 1;
    bigint total = 1;
    for (int l = depth; l > 0; --l) {
        std::vector<bigint> next(n);
        for (int p = 0; p < n; ++p) {
            if (level_count[p] == 0) continue;
            for (const child_placement& c : r.children[p]) next[c.type] += level_count[p];
        }
        level_count.swap(next);
        for (int t = 0; t < n; ++t) total += level_count[t];
    }
    if (total > cap)
        throw std::domain_error("generation would produce " + total.str() +
                                " tiles, exceeding the cap " + std::to_string(cap) +
                                " (set SUBTILE_TILE_CAP to raise it)");

    supertile_tree tree;
    tree.rule_ = r;
    tree.root_type_ = root_type;
    tree.depth_ = depth;
    tree.pow_.resize(depth + 1);
    tree.pow_[0] = 1.0;
    for (int l = 1; l <= depth; ++l) tree.pow_[l] = tree.pow_[l - 1] * r.lambda;
    tree.levels_.assign(depth + 1, {});

    double big_r = 0.0, small_r = std::numeric_limits<double>::max();
    for (const prototile& p : r.prototiles) {
        big_r = std::max(big_r, enclosing_radius(p.shape));
        double ir = is_convex(p.shape, 1e-9) ? inradius(p.shape)
                                             : inradius_lower_bound(p.shape);
        small_r = std::min(small_r, ir);
    }
    tree.base_big_r_ = big_r;
    tree.base_small_r_ = small_r;

    tile_node root;
    root.proto = root_type;
    root.level = depth;
    root.box = bounds(apply(root.iso, scaled(r.prototiles[root_type].shape, tree.pow_[depth])));
    if (depth == 0) {
        tree.nodes_.push_back(root);
        tree.levels_[0].push_back(0);
        return tree;
    }

    const auto& kids = r.children[root_type];
    if (kids.empty())
        throw std::domain_error("prototile " + std::to_string(root_type) + " (" +
                                r.prototiles[root_type].label + ") has no subdivision");

    // One branch per root child; each is self-contained so threads never
    // share state and the merged layout is order-independent.
    size_t nb = kids.size();
    std::vector<branch_result> branches(nb);
    for (size_t b = 0; b < nb; ++b) {
        branches[b].levels.assign(depth, {});
        tile_node t;
        t.proto = kids[b].type;
        t.parent = -1;  // fixed up to the global root after the merge
        t.level = depth - 1;
        isometry scaled_iso = kids[b].iso;
        scaled_iso.t = tree.pow_[depth - 1] * kids[b].iso.t;
        t.iso = compose(root.iso, scaled_iso);
        t.box = bounds(apply(t.iso, scaled(r.prototiles[t.proto].shape, tree.pow_[depth - 1])));
        branches[b].nodes.push_back(t);
    }

    int workers = std::max(1, jobs);
    if (workers == 1) {
        for (branch_result& b : branches) expand_branch(r, tree.pow_, b);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                try {
                    for (size_t b = w; b < nb; b += workers)
                        expand_branch(r, tree.pow_, branches[b]);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errs)
            if (e) std::rethrow_exception(e);
    }

    // Layout: root, the root's children in contiguous slots 1..nb, then
    // each branch's remaining nodes as one block. Children of any node
    // stay contiguous, which address() relies on.
    tree.nodes_.reserve(total.convert_to<size_t>());
    tree.nodes_.push_back(root);
    tree.nodes_[0].first_child = 1;
    tree.nodes_[0].nchild = static_cast<int32_t>(nb);
    tree.levels_[depth].push_back(0);
    for (size_t b = 0; b < nb; ++b) {
        tile_node t = branches[b].nodes[0];
        t.parent = 0;
        tree.nodes_.push_back(t);
    }
    for (size_t b = 0; b < nb; ++b) {
        int32_t slot = static_cast<int32_t>(1 + b);
        int32_t off = static_cast<int32_t>(tree.nodes_.size());
        tile_node& broot = tree.nodes_[slot];
        if (broot.first_child >= 1) broot.first_child = off + broot.first_child - 1;
        for (size_t i = 1; i < branches[b].nodes.size(); ++i) {
            tile_node t = branches[b].nodes[i];
            t.parent = t.parent == 0 ? slot : off + t.parent - 1;
            if (t.first_child >= 1) t.first_child = off + t.first_child - 1;
            tree.nodes_.push_back(t);
        }
        for (int l = 0; l < depth; ++l)
            for (int32_t id : branches[b].levels[l])
                tree.levels_[l].push_back(id == 0 ? slot : off + id - 1);
    }
    return tree;
}

polygon supertile_tree::realize(int32_t id) const {
    const tile_node& t = nodes_[id];
    return apply(t.iso, scaled(rule_.prototiles[t.proto].shape, pow_[t.level]));
}

std::vector<int> supertile_tree::address(int32_t id) const {
    std::vector<int> addr;
    while (nodes_[id].parent >= 0) {
        int32_t p = nodes_[id].parent;
        addr.push_back(id - nodes_[p].first_child);
        id = p;
    }
    std::reverse(addr.begin(), addr.end());
    return addr;
}

std::vector<long long> supertile_tree::type_counts(int level) const {
    std::vector<long long> c(rule_.prototiles.size(), 0);
    for (int32_t id : levels_[level]) ++c[nodes_[id].proto];
    return c;
}

supertile_tree::metrics supertile_tree::level_metrics(int level) const {
    metrics m;
    m.big_r = base_big_r_ * pow_[level];
    m.small_r = base_small_r_ * pow_[level];
    double ratio = base_big_r_ / base_small_r_;
    m.k_bound = static_cast<long long>(16.0 * ratio * ratio + 1e-9);
    return m;
}

}  // namespace subtile
