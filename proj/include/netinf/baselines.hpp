#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/infer.hpp"
#include "netinf/scores.hpp"

namespace netinf {

// Sum of hop distances to all infected nodes, ranked ascending. Unreachable
// pairs contribute M = 5 * diameter(g) so disconnected candidates sink to the
// bottom without blowing up the sum.
inline ScoreTable distance_centrality_scores(const Graph& g, const InfectionSnapshot& snap)
{
    const auto candidates = detail::infected_candidates(g, snap);
    const double big = 5.0 * static_cast<double>(std::max(diameter(g), 1));
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto dist = hop_distances(g, candidates[i]);
        double acc = 0.0;
        for (NodeId j : snap.infected)
            acc += dist[static_cast<std::size_t>(j)] == kUnreachable
                       ? big
                       : static_cast<double>(dist[static_cast<std::size_t>(j)]);
        scores[i] = acc;
    }
    return make_score_table("distance", candidates, scores, 0.0, /*higher_is_better=*/false);
}

// Count of direct connections to other infected nodes, ranked descending.
inline ScoreTable degree_centrality_scores(const Graph& g, const InfectionSnapshot& snap)
{
    const auto candidates = detail::infected_candidates(g, snap);
    const auto mask = snap.mask(g.n());
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double acc = 0.0;
        for (const Edge& e : g.neighbors(candidates[i]))
            if (mask[static_cast<std::size_t>(e.to)])
                acc += 1.0;
        scores[i] = acc;
    }
    return make_score_table("degree", candidates, scores, 0.0, /*higher_is_better=*/true);
}

// Mean of per-method fractional ranks, re-ranked ascending. Inputs must cover
// the same candidate set.
inline ScoreTable integrative_rank(const std::vector<ScoreTable>& tables)
{
    if (tables.size() < 2)
        throw std::invalid_argument("integrative ranking needs at least two tables");
    std::vector<NodeId> candidates;
    for (const ScoreRow& r : tables.front().rows)
        candidates.push_back(r.node);
    std::sort(candidates.begin(), candidates.end());
    for (const ScoreTable& table : tables) {
        if (table.rows.size() != candidates.size())
            throw std::invalid_argument("integrative ranking: candidate sets differ");
        for (const ScoreRow& r : table.rows)
            if (!std::binary_search(candidates.begin(), candidates.end(), r.node))
                throw std::invalid_argument("integrative ranking: candidate sets differ");
    }
    std::vector<double> mean_rank(candidates.size(), 0.0);
    for (const ScoreTable& table : tables)
        for (std::size_t i = 0; i < candidates.size(); ++i)
            mean_rank[i] += table.rank_of(candidates[i]);
    for (double& r : mean_rank)
        r /= static_cast<double>(tables.size());
    return make_score_table("integrative", candidates, mean_rank, 0.0, /*higher_is_better=*/false);
}

} // namespace netinf
