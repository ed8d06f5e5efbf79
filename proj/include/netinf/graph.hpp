#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "netinf/util.hpp"

namespace netinf {

using NodeId = std::int32_t;

struct Edge {
    NodeId to;
    double weight; // transmission rate; 1.0 for unweighted graphs
};

// Immutable after construction; node ids are dense 0..n-1, no self-loops, no
// parallel edges, weights strictly positive. For undirected graphs both
// directions are stored with equal weight. For directed graphs the adjacency
// holds out-edges and all traversals follow edge direction.
class Graph {
  public:
    class Builder;

    Graph() = default;

    NodeId n() const { return static_cast<NodeId>(adj_.size()); }
    bool directed() const { return directed_; }
    bool weighted() const { return weighted_; }
    std::size_t edge_count() const { return edge_count_; } // undirected edges counted once

    const std::vector<Edge>& neighbors(NodeId i) const { return adj_[static_cast<std::size_t>(i)]; }
    std::size_t degree(NodeId i) const { return adj_[static_cast<std::size_t>(i)].size(); }

    bool has_edge(NodeId u, NodeId v) const
    {
        for (const Edge& e : neighbors(u))
            if (e.to == v)
                return true;
        return false;
    }

    bool valid_node(NodeId i) const { return i >= 0 && i < n(); }

  private:
    bool directed_ = false;
    bool weighted_ = false;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<Edge>> adj_;

    friend class Builder;
};

class Graph::Builder {
  public:
    explicit Builder(bool directed = false, NodeId declared_n = -1)
        : directed_(directed), declared_n_(declared_n) {}

    Builder& add_edge(NodeId u, NodeId v, double weight = 1.0)
    {
        if (u < 0 || v < 0)
            throw std::invalid_argument("negative node id");
        if (u == v)
            throw std::invalid_argument("self-loop on node " + std::to_string(u));
        if (!(weight > 0.0) || !std::isfinite(weight))
            throw std::invalid_argument("edge weight must be positive and finite, got " + format_double(weight));
        if (declared_n_ >= 0 && (u >= declared_n_ || v >= declared_n_))
            throw std::invalid_argument("node id " + std::to_string(std::max(u, v)) +
                                        " exceeds declared node count " + std::to_string(declared_n_));
        const std::uint64_t key = edge_key(u, v);
        if (!seen_.insert(key).second)
            throw std::invalid_argument("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
        edges_.push_back({u, v, weight});
        max_id_ = std::max(max_id_, std::max(u, v));
        return *this;
    }

    Builder& ensure_node(NodeId i)
    {
        if (i < 0)
            throw std::invalid_argument("negative node id");
        if (declared_n_ >= 0 && i >= declared_n_)
            throw std::invalid_argument("node id " + std::to_string(i) + " exceeds declared node count " +
                                        std::to_string(declared_n_));
        max_id_ = std::max(max_id_, i);
        return *this;
    }

    Graph build() const
    {
        Graph g;
        g.directed_ = directed_;
        const NodeId n = declared_n_ >= 0 ? declared_n_ : max_id_ + 1;
        g.adj_.assign(static_cast<std::size_t>(std::max<NodeId>(n, 0)), {});
        g.edge_count_ = edges_.size();
        for (const Rec& r : edges_) {
            g.adj_[static_cast<std::size_t>(r.u)].push_back({r.v, r.w});
            if (!directed_)
                g.adj_[static_cast<std::size_t>(r.v)].push_back({r.u, r.w});
            if (r.w != 1.0)
                g.weighted_ = true;
        }
        for (auto& list : g.adj_)
            std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
        return g;
    }

  private:
    struct Rec {
        NodeId u, v;
        double w;
    };

    std::uint64_t edge_key(NodeId u, NodeId v) const
    {
        NodeId a = u, b = v;
        if (!directed_ && a > b)
            std::swap(a, b);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
    }

    bool directed_;
    NodeId declared_n_;
    NodeId max_id_ = -1;
    std::vector<Rec> edges_;
    std::unordered_set<std::uint64_t> seen_;
};

// Observation: time label (absent when unknown) plus the infected set, kept
// sorted and unique for reproducible file output.
struct InfectionSnapshot {
    std::optional<double> t;
    std::vector<NodeId> infected;

    void normalize()
    {
        std::sort(infected.begin(), infected.end());
        infected.erase(std::unique(infected.begin(), infected.end()), infected.end());
    }

    std::vector<char> mask(NodeId n) const
    {
        std::vector<char> m(static_cast<std::size_t>(n), 0);
        for (NodeId i : infected)
            m[static_cast<std::size_t>(i)] = 1;
        return m;
    }

    void validate_against(const Graph& g) const
    {
        for (NodeId i : infected)
            if (!g.valid_node(i))
                throw std::runtime_error("snapshot references node " + std::to_string(i) +
                                         " outside graph with " + std::to_string(g.n()) + " nodes");
    }
};

// ---- edge-list file format ----
// Comment lines start with '#'; an optional header '# nodes=<n>' fixes the
// node count. Rows are 'src<TAB>dst[<TAB>weight]' with 0-based ids.

inline Graph load_edge_list(std::istream& in, bool directed, const std::string& name = "<stream>")
{
    std::optional<NodeId> declared;
    std::vector<std::tuple<NodeId, NodeId, double, std::size_t>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto pos = line.find("nodes=");
            if (pos != std::string::npos) {
                try {
                    declared = static_cast<NodeId>(std::stol(line.substr(pos + 6)));
                } catch (const std::exception&) {
                    throw std::runtime_error(name + ":" + std::to_string(lineno) + ": bad nodes= header");
                }
            }
            continue;
        }
        std::istringstream is(line);
        NodeId u, v;
        if (!(is >> u >> v))
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": expected 'src dst [weight]'");
        double w = 1.0;
        if (!(is >> w)) {
            is.clear();
            w = 1.0;
        }
        std::string trailing;
        if (is >> trailing)
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": trailing token '" + trailing + "'");
        rows.emplace_back(u, v, w, lineno);
    }
    Graph::Builder b(directed, declared.value_or(-1));
    for (const auto& [u, v, w, row_line] : rows) {
        try {
            b.add_edge(u, v, w);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(name + ":" + std::to_string(row_line) + ": " + e.what());
        }
    }
    return b.build();
}

inline Graph load_edge_list(const std::string& path, bool directed)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open graph file: " + path);
    return load_edge_list(in, directed, path);
}

inline void save_edge_list(std::ostream& out, const Graph& g)
{
    out << "# nodes=" << g.n() << "\n";
    out << "# directed=" << (g.directed() ? 1 : 0) << "\n";
    for (NodeId u = 0; u < g.n(); ++u) {
        for (const Edge& e : g.neighbors(u)) {
            if (!g.directed() && e.to < u)
                continue; // emit undirected edges once
            out << u << '\t' << e.to;
            if (e.weight != 1.0)
                out << '\t' << format_double(e.weight);
            out << '\n';
        }
    }
}

inline void save_edge_list(const std::string& path, const Graph& g)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write graph file: " + path);
    save_edge_list(out, g);
}

// ---- snapshot file format ----
// First line 't=<float|unknown>', then one infected node id per line.

inline InfectionSnapshot load_snapshot(std::istream& in, const std::string& name = "<stream>")
{
    InfectionSnapshot snap;
    std::string line;
    if (!std::getline(in, line) || line.rfind("t=", 0) != 0)
        throw std::runtime_error(name + ": snapshot must start with 't=<float|unknown>'");
    const std::string val = line.substr(2);
    if (val != "unknown") {
        try {
            snap.t = std::stod(val);
        } catch (const std::exception&) {
            throw std::runtime_error(name + ": bad snapshot time '" + val + "'");
        }
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        try {
            snap.infected.push_back(static_cast<NodeId>(std::stol(line)));
        } catch (const std::exception&) {
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": bad node id '" + line + "'");
        }
    }
    snap.normalize();
    return snap;
}

inline InfectionSnapshot load_snapshot(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open snapshot file: " + path);
    return load_snapshot(in, path);
}

inline void save_snapshot(std::ostream& out, const InfectionSnapshot& snap)
{
    if (snap.t)
        out << "t=" << format_double(*snap.t) << "\n";
    else
        out << "t=unknown\n";
    for (NodeId i : snap.infected)
        out << i << '\n';
}

inline void save_snapshot(const std::string& path, const InfectionSnapshot& snap)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write snapshot file: " + path);
    save_snapshot(out, snap);
}

// ---- derived structures ----

struct InducedSubgraph {
    Graph graph;
    std::vector<NodeId> to_original;  // new id -> original id
    std::vector<NodeId> from_original; // original id -> new id, -1 outside
};

// Subgraph over the infected set with original weights.
inline InducedSubgraph induced_infected_subgraph(const Graph& g, const InfectionSnapshot& snap)
{
    if (snap.infected.empty())
        throw std::invalid_argument("induced subgraph of empty infected set");
    snap.validate_against(g);
    InducedSubgraph out;
    out.from_original.assign(static_cast<std::size_t>(g.n()), -1);
    out.to_original = snap.infected; // sorted
    for (std::size_t i = 0; i < out.to_original.size(); ++i)
        out.from_original[static_cast<std::size_t>(out.to_original[i])] = static_cast<NodeId>(i);
    Graph::Builder b(g.directed(), static_cast<NodeId>(out.to_original.size()));
    for (NodeId u : out.to_original) {
        b.ensure_node(out.from_original[static_cast<std::size_t>(u)]);
        for (const Edge& e : g.neighbors(u)) {
            const NodeId v = out.from_original[static_cast<std::size_t>(e.to)];
            if (v < 0)
                continue;
            const NodeId nu = out.from_original[static_cast<std::size_t>(u)];
            if (!g.directed() && v < nu)
                continue; // count undirected edges once
            b.add_edge(nu, v, e.weight);
        }
    }
    out.graph = b.build();
    return out;
}

// Weakly connected components; partition of all nodes, each component sorted.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g)
{
    const NodeId n = g.n();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<NodeId>> reverse_adj;
    if (g.directed()) {
        reverse_adj.assign(static_cast<std::size_t>(n), {});
        for (NodeId u = 0; u < n; ++u)
            for (const Edge& e : g.neighbors(u))
                reverse_adj[static_cast<std::size_t>(e.to)].push_back(u);
    }
    std::vector<std::vector<NodeId>> comps;
    std::deque<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)])
            continue;
        comps.emplace_back();
        seen[static_cast<std::size_t>(s)] = 1;
        queue.push_back(s);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            comps.back().push_back(u);
            auto visit = [&](NodeId v) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    queue.push_back(v);
                }
            };
            for (const Edge& e : g.neighbors(u))
                visit(e.to);
            if (g.directed())
                for (NodeId v : reverse_adj[static_cast<std::size_t>(u)])
                    visit(v);
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
}

constexpr int kUnreachable = -1;

// Hop distances from `source` along edge direction, ignoring weights.
inline std::vector<int> hop_distances(const Graph& g, NodeId source)
{
    std::vector<int> dist(static_cast<std::size_t>(g.n()), kUnreachable);
    dist[static_cast<std::size_t>(source)] = 0;
    std::deque<NodeId> queue{source};
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (const Edge& e : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(e.to)] == kUnreachable) {
                dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return dist;
}

// Longest shortest-path hop count; on disconnected graphs, the max over
// (weakly) connected pairs.
inline int diameter(const Graph& g)
{
    int best = 0;
    for (NodeId s = 0; s < g.n(); ++s) {
        const auto dist = hop_distances(g, s);
        for (int d : dist)
            best = std::max(best, d);
    }
    return best;
}

} // namespace netinf
