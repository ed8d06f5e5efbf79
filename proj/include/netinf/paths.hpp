#pragma once

#include <cstdint>
#include <deque>
#include <queue>
#include <span>
#include <unordered_set>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"
#include "netinf/util.hpp"

namespace netinf {

struct PathOptions {
    bool use_weights = false; // false: unit hop lengths; true: edge length 1/weight
    bool keep_edges = false;  // retain per-path edge lists (rate sequences, audits)
};

// Ordered lengths of up to k edge-disjoint shortest paths from one source to
// every target. Paths are selected iteratively: each round removes the edges
// of the target's previously chosen path and re-solves on that residual, so
// lengths are nondecreasing and the first entry is the true shortest-path
// distance. Ties among equal-length paths are broken by seeded uniform choice.
struct PathLengthProfile {
    NodeId source = -1;
    int k = 1;
    bool weighted = false;

    std::vector<std::int32_t> offset; // n+1; paths of target j live at [offset[j], offset[j+1])
    std::vector<double> length;       // flattened path lengths, nondecreasing per target

    // heterogeneous support: per flattened path, the edge rates in path order
    std::vector<std::int32_t> rate_offset; // size length.size()+1 when populated
    std::vector<double> rate;

    // audit support: per target, per round, the path's edge list
    std::vector<std::vector<std::vector<std::pair<NodeId, NodeId>>>> path_edges;

    NodeId n() const { return static_cast<NodeId>(offset.size()) - 1; }
    int num_paths(NodeId j) const { return offset[static_cast<std::size_t>(j) + 1] - offset[static_cast<std::size_t>(j)]; }
    std::span<const double> lengths_for(NodeId j) const
    {
        return {length.data() + offset[static_cast<std::size_t>(j)],
                static_cast<std::size_t>(num_paths(j))};
    }
    bool reachable(NodeId j) const { return num_paths(j) > 0; }
    std::span<const double> rates_for_path(std::int32_t flat_index) const
    {
        return {rate.data() + rate_offset[static_cast<std::size_t>(flat_index)],
                static_cast<std::size_t>(rate_offset[static_cast<std::size_t>(flat_index) + 1] -
                                         rate_offset[static_cast<std::size_t>(flat_index)])};
    }
};

namespace detail {

inline std::uint64_t directed_key(NodeId u, NodeId v)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
}

inline std::uint64_t path_edge_key(const Graph& g, NodeId u, NodeId v)
{
    if (!g.directed() && u > v)
        std::swap(u, v);
    return directed_key(u, v);
}

struct SearchState {
    std::vector<double> dist;  // -1 = unreachable
    std::vector<NodeId> pred;
    std::vector<std::uint32_t> tie_count;
};

// Single-source shortest paths with uniform random predecessor choice among
// ties (reservoir replacement). Unit lengths use BFS, weighted lengths use
// Dijkstra on 1/weight. `removed` filters edges; `stop_at` permits early exit.
inline SearchState shortest_path_search(const Graph& g, NodeId source, const PathOptions& opts,
                                        const std::unordered_set<std::uint64_t>* removed, Rng& rng,
                                        NodeId stop_at = -1)
{
    const std::size_t n = static_cast<std::size_t>(g.n());
    SearchState st;
    st.dist.assign(n, -1.0);
    st.pred.assign(n, -1);
    st.tie_count.assign(n, 0);

    auto edge_allowed = [&](NodeId u, NodeId v) {
        return removed == nullptr || removed->find(path_edge_key(g, u, v)) == removed->end();
    };

    if (!opts.use_weights) {
        st.dist[static_cast<std::size_t>(source)] = 0.0;
        std::deque<NodeId> queue{source};
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            if (u == stop_at)
                break;
            const double du = st.dist[static_cast<std::size_t>(u)];
            for (const Edge& e : g.neighbors(u)) {
                if (!edge_allowed(u, e.to))
                    continue;
                auto& dv = st.dist[static_cast<std::size_t>(e.to)];
                if (dv < 0.0) {
                    dv = du + 1.0;
                    st.pred[static_cast<std::size_t>(e.to)] = u;
                    st.tie_count[static_cast<std::size_t>(e.to)] = 1;
                    queue.push_back(e.to);
                } else if (dv == du + 1.0) {
                    auto& cnt = st.tie_count[static_cast<std::size_t>(e.to)];
                    ++cnt;
                    if (rng.next_below(cnt) == 0)
                        st.pred[static_cast<std::size_t>(e.to)] = u;
                }
            }
        }
        return st;
    }

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> done(n, 0);
    st.dist[static_cast<std::size_t>(source)] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)])
            continue;
        done[static_cast<std::size_t>(u)] = 1;
        if (u == stop_at)
            break;
        for (const Edge& e : g.neighbors(u)) {
            if (done[static_cast<std::size_t>(e.to)] || !edge_allowed(u, e.to))
                continue;
            const double cand = du + 1.0 / e.weight;
            auto& dv = st.dist[static_cast<std::size_t>(e.to)];
            if (dv < 0.0 || cand < dv) {
                dv = cand;
                st.pred[static_cast<std::size_t>(e.to)] = u;
                st.tie_count[static_cast<std::size_t>(e.to)] = 1;
                heap.push({cand, e.to});
            } else if (cand == dv) {
                auto& cnt = st.tie_count[static_cast<std::size_t>(e.to)];
                ++cnt;
                if (rng.next_below(cnt) == 0)
                    st.pred[static_cast<std::size_t>(e.to)] = u;
            }
        }
    }
    return st;
}

inline std::vector<std::pair<NodeId, NodeId>> reconstruct(const SearchState& st, NodeId source, NodeId target)
{
    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId v = target;
    while (v != source) {
        const NodeId u = st.pred[static_cast<std::size_t>(v)];
        edges.emplace_back(u, v);
        v = u;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
}

inline double edge_weight_of(const Graph& g, NodeId u, NodeId v)
{
    for (const Edge& e : g.neighbors(u))
        if (e.to == v)
            return e.weight;
    throw std::logic_error("reconstructed path uses a missing edge");
}

} // namespace detail

inline PathLengthProfile k_disjoint_shortest_paths(const Graph& g, NodeId source, int k,
                                                   std::uint64_t seed, PathOptions opts = {})
{
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    if (!g.valid_node(source))
        throw std::invalid_argument("invalid source node " + std::to_string(source));
    const std::size_t n = static_cast<std::size_t>(g.n());
    Rng rng(derive_seed(seed, "paths", static_cast<std::uint64_t>(source)));

    const bool record_edges = opts.keep_edges || (opts.use_weights /* rate sequences need edges */);
    std::vector<std::vector<double>> lengths(n);
    std::vector<std::vector<std::vector<std::pair<NodeId, NodeId>>>> edges(n);
    std::vector<std::unordered_set<std::uint64_t>> removed(k > 1 ? n : 0);
    std::vector<char> active(n, 0);

    // round 1: one shared search covers every target
    const auto first = detail::shortest_path_search(g, source, opts, nullptr, rng);
    for (std::size_t j = 0; j < n; ++j) {
        if (first.dist[j] < 0.0)
            continue;
        lengths[j].push_back(first.dist[j]);
        if (static_cast<NodeId>(j) != source) {
            if (k > 1 || record_edges) {
                auto path = detail::reconstruct(first, source, static_cast<NodeId>(j));
                if (k > 1)
                    for (const auto& [u, v] : path)
                        removed[j].insert(detail::path_edge_key(g, u, v));
                if (record_edges)
                    edges[j].push_back(std::move(path));
            }
            active[j] = 1;
        } else if (record_edges) {
            edges[j].emplace_back();
        }
    }

    // rounds 2..k: each target re-solved on its own residual graph
    for (int round = 2; round <= k; ++round) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!active[j])
                continue;
            const auto st = detail::shortest_path_search(g, source, opts, &removed[j], rng,
                                                         static_cast<NodeId>(j));
            if (st.dist[j] < 0.0) {
                active[j] = 0;
                continue;
            }
            lengths[j].push_back(st.dist[j]);
            auto path = detail::reconstruct(st, source, static_cast<NodeId>(j));
            for (const auto& [u, v] : path)
                removed[j].insert(detail::path_edge_key(g, u, v));
            if (record_edges)
                edges[j].push_back(std::move(path));
        }
    }

    PathLengthProfile profile;
    profile.source = source;
    profile.k = k;
    profile.weighted = opts.use_weights;
    profile.offset.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
        profile.offset[j + 1] = profile.offset[j] + static_cast<std::int32_t>(lengths[j].size());
    profile.length.reserve(static_cast<std::size_t>(profile.offset[n]));
    for (std::size_t j = 0; j < n; ++j)
        profile.length.insert(profile.length.end(), lengths[j].begin(), lengths[j].end());

    if (opts.use_weights) {
        profile.rate_offset.assign(static_cast<std::size_t>(profile.offset[n]) + 1, 0);
        std::int32_t flat = 0;
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& path : edges[j]) {
                for (const auto& [u, v] : path)
                    profile.rate.push_back(detail::edge_weight_of(g, u, v));
                profile.rate_offset[static_cast<std::size_t>(flat) + 1] =
                    static_cast<std::int32_t>(profile.rate.size());
                ++flat;
            }
        }
    }
    if (opts.keep_edges)
        profile.path_edges = std::move(edges);
    return profile;
}

inline std::vector<PathLengthProfile> all_pairs_profiles(const Graph& g, const std::vector<NodeId>& sources,
                                                         int k, std::uint64_t seed, PathOptions opts = {},
                                                         int jobs = 1)
{
    std::vector<PathLengthProfile> out(sources.size());
    parallel_for(sources.size(), jobs, [&](std::size_t i) {
        out[i] = k_disjoint_shortest_paths(g, sources[i], k, seed, opts);
    });
    return out;
}

} // namespace netinf
