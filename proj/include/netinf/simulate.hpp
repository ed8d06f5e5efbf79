#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"
#include "netinf/util.hpp"

namespace netinf {

struct SimulationConfig {
    std::vector<NodeId> sources;
    std::vector<double> snapshot_times; // strictly increasing, positive
    std::uint64_t seed = 0;

    void validate(const Graph& g) const
    {
        if (sources.empty())
            throw std::invalid_argument("simulation needs at least one source");
        for (NodeId s : sources)
            if (!g.valid_node(s))
                throw std::invalid_argument("source node " + std::to_string(s) + " outside graph");
        double prev = 0.0;
        for (double t : snapshot_times) {
            if (!(t >= 0.0) || !std::isfinite(t))
                throw std::invalid_argument("snapshot times must be nonnegative finite");
            if (t < prev)
                throw std::invalid_argument("snapshot times must be nondecreasing");
            prev = t;
        }
    }
};

// Infection arrival times for one run of the SI process. Each directed edge
// carries an independent exponential holding time with rate equal to its
// weight; arrival at a node is the min-plus recursion over its in-edges,
// realized as an earliest-arrival Dijkstra with lazily sampled edge times.
inline std::vector<double> si_arrival_times(const Graph& g, const std::vector<NodeId>& sources, Rng& rng)
{
    const std::size_t n = static_cast<std::size_t>(g.n());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> arrival(n, inf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (NodeId s : sources) {
        arrival[static_cast<std::size_t>(s)] = 0.0;
        heap.push({0.0, s});
    }
    while (!heap.empty()) {
        const auto [tu, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)])
            continue;
        done[static_cast<std::size_t>(u)] = 1;
        for (const Edge& e : g.neighbors(u)) {
            if (done[static_cast<std::size_t>(e.to)])
                continue;
            const double cand = tu + rng.next_exponential(e.weight);
            if (cand < arrival[static_cast<std::size_t>(e.to)]) {
                arrival[static_cast<std::size_t>(e.to)] = cand;
                heap.push({cand, e.to});
            }
        }
    }
    return arrival;
}

inline std::vector<InfectionSnapshot> simulate(const Graph& g, const SimulationConfig& cfg)
{
    cfg.validate(g);
    Rng rng(cfg.seed);
    const auto arrival = si_arrival_times(g, cfg.sources, rng);
    std::vector<InfectionSnapshot> out;
    out.reserve(cfg.snapshot_times.size());
    for (double t : cfg.snapshot_times) {
        InfectionSnapshot snap;
        snap.t = t;
        for (std::size_t i = 0; i < arrival.size(); ++i)
            if (arrival[i] <= t)
                snap.infected.push_back(static_cast<NodeId>(i));
        out.push_back(std::move(snap));
    }
    return out;
}

// Independent runs on substreams derived from (seed, run index).
inline std::vector<std::vector<InfectionSnapshot>> batch_simulate(const Graph& g, const SimulationConfig& cfg,
                                                                  std::size_t runs, int jobs = 1)
{
    std::vector<std::vector<InfectionSnapshot>> out(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
        SimulationConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, "sim", r);
        out[r] = simulate(g, run_cfg);
    });
    return out;
}

} // namespace netinf
