#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"

namespace netinf {

inline Graph gen_erdos_renyi(NodeId n, double p, std::uint64_t seed)
{
    if (n < 1 || p < 0.0 || p > 1.0)
        throw std::invalid_argument("bad Erdos-Renyi parameters");
    Rng rng(derive_seed(seed, "er"));
    Graph::Builder b(false, n);
    for (NodeId i = 0; i < n; ++i) {
        b.ensure_node(i);
        for (NodeId j = i + 1; j < n; ++j)
            if (rng.next_bernoulli(p))
                b.add_edge(i, j);
    }
    return b.build();
}

// Preferential attachment: a 5-cycle seed, then each arrival wires to theta
// distinct existing nodes chosen proportionally to degree.
inline Graph gen_power_law(NodeId n, int theta, std::uint64_t seed)
{
    constexpr NodeId kSeedNodes = 5;
    if (n < kSeedNodes + 1 || theta < 1 || theta > kSeedNodes)
        throw std::invalid_argument("power-law generator needs n > 5 and 1 <= theta <= 5");
    Rng rng(derive_seed(seed, "pl"));
    Graph::Builder b(false, n);
    std::vector<NodeId> endpoint_pool; // one entry per edge endpoint; uniform draw = degree-biased node
    auto wire = [&](NodeId u, NodeId v) {
        b.add_edge(u, v);
        endpoint_pool.push_back(u);
        endpoint_pool.push_back(v);
    };
    for (NodeId i = 0; i < kSeedNodes; ++i)
        wire(i, (i + 1) % kSeedNodes);
    for (NodeId arrival = kSeedNodes; arrival < n; ++arrival) {
        std::vector<NodeId> chosen;
        while (static_cast<int>(chosen.size()) < theta) {
            const NodeId pick = endpoint_pool[rng.next_below(endpoint_pool.size())];
            bool seen = false;
            for (NodeId c : chosen)
                seen = seen || c == pick;
            if (!seen)
                chosen.push_back(pick);
        }
        for (NodeId c : chosen)
            wire(arrival, c);
    }
    return b.build();
}

struct GridLayout {
    NodeId rows = 0;
    NodeId cols = 0;
    NodeId center = 0;
};

inline GridLayout grid_layout(NodeId n)
{
    GridLayout layout;
    layout.cols = static_cast<NodeId>(std::lround(std::ceil(std::sqrt(static_cast<double>(n)))));
    layout.rows = static_cast<NodeId>((n + layout.cols - 1) / layout.cols);
    const NodeId r = layout.rows / 2;
    const NodeId c = layout.cols / 2;
    layout.center = std::min<NodeId>(r * layout.cols + c, n - 1);
    return layout;
}

// Square grid trimmed to exactly n nodes, row-major ids.
inline Graph gen_grid(NodeId n)
{
    if (n < 2)
        throw std::invalid_argument("grid needs n >= 2");
    const GridLayout layout = grid_layout(n);
    Graph::Builder b(false, n);
    for (NodeId v = 0; v < n; ++v) {
        b.ensure_node(v);
        const NodeId col = v % layout.cols;
        if (col + 1 < layout.cols && v + 1 < n)
            b.add_edge(v, v + 1);
        if (v + layout.cols < n)
            b.add_edge(v, v + layout.cols);
    }
    return b.build();
}

struct AsymGrid {
    Graph graph;
    NodeId center = 0;
    NodeId strip_length = 0;
    NodeId strip_width = 3;
    std::vector<NodeId> dense_entries;
    std::vector<NodeId> sparse_roots;
};

// Six branches around a degree-6 hub: three 3-wide grid strips whose entry
// nodes also form a chain (so strip nodes keep two edge-disjoint routes to the
// hub) and three tree branches with a single route each.
inline AsymGrid gen_asym_grid(NodeId n)
{
    if (n < 31)
        throw std::invalid_argument("asymmetric grid needs n >= 31");
    AsymGrid out;
    const NodeId strip_len = static_cast<NodeId>((n - 1 + 17) / 18); // ceil((n-1)/18)
    out.strip_length = strip_len;
    const NodeId dense_nodes = 3 * 3 * strip_len;
    const NodeId sparse_total = n - 1 - dense_nodes;
    if (sparse_total < 3)
        throw std::invalid_argument("asymmetric grid: n too small for the layout");

    Graph::Builder b(false, n);
    out.center = 0;
    NodeId next = 1;
    for (int branch = 0; branch < 3; ++branch) {
        // 3 x strip_len grid; cells id'd row-major from `first`
        const NodeId first = next;
        next += 3 * strip_len;
        auto cell = [&](NodeId row, NodeId col) { return first + row * strip_len + col; };
        for (NodeId row = 0; row < 3; ++row)
            for (NodeId col = 0; col < strip_len; ++col) {
                if (col + 1 < strip_len)
                    b.add_edge(cell(row, col), cell(row, col + 1));
                if (row + 1 < 3)
                    b.add_edge(cell(row, col), cell(row + 1, col));
            }
        const NodeId entry = cell(1, 0);
        out.dense_entries.push_back(entry);
        b.add_edge(out.center, entry);
    }
    // entry chain keeps the dense side 2-edge-connected to the hub
    b.add_edge(out.dense_entries[0], out.dense_entries[1]);
    b.add_edge(out.dense_entries[1], out.dense_entries[2]);

    for (int branch = 0; branch < 3; ++branch) {
        const NodeId count = branch < 2 ? sparse_total / 3 : sparse_total - 2 * (sparse_total / 3);
        const NodeId first = next;
        next += count;
        out.sparse_roots.push_back(first);
        b.add_edge(out.center, first);
        for (NodeId i = 1; i < count; ++i)
            b.add_edge(first + (i - 1) / 2, first + i); // heap-shaped binary tree
    }
    if (next != n)
        throw std::logic_error("asymmetric grid layout does not cover n nodes");
    out.graph = b.build();
    return out;
}

// Rooted tree where every internal node has `branching` children.
struct RegularTree {
    Graph graph;
    NodeId root = 0;
    int depth = 0;
};

inline RegularTree gen_regular_tree(int branching, int depth)
{
    if (branching < 1 || depth < 0)
        throw std::invalid_argument("bad regular tree parameters");
    RegularTree out;
    out.depth = depth;
    std::vector<NodeId> frontier{0};
    NodeId next = 1;
    Graph::Builder b(false);
    b.ensure_node(0);
    for (int level = 0; level < depth; ++level) {
        std::vector<NodeId> grown;
        for (NodeId parent : frontier)
            for (int c = 0; c < branching; ++c) {
                b.add_edge(parent, next);
                grown.push_back(next);
                ++next;
            }
        frontier = std::move(grown);
    }
    out.graph = b.build();
    return out;
}

inline Graph gen_line(NodeId n)
{
    if (n < 1)
        throw std::invalid_argument("line needs n >= 1");
    Graph::Builder b(false, n);
    b.ensure_node(0);
    for (NodeId i = 0; i + 1 < n; ++i)
        b.add_edge(i, i + 1);
    return b.build();
}

} // namespace netinf
