#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/util.hpp"

namespace netinf {

struct ScoreRow {
    NodeId node = -1;
    double score = 0.0;
    double t_used = 0.0;
    double rank = 0.0; // fractional, ties averaged; 1 is best
};

struct ScoreTable {
    std::string method;
    bool higher_is_better = true;
    std::vector<ScoreRow> rows; // sorted best-first

    double rank_of(NodeId node) const
    {
        for (const ScoreRow& r : rows)
            if (r.node == node)
                return r.rank;
        throw std::invalid_argument("node " + std::to_string(node) + " is not a candidate");
    }

    bool has(NodeId node) const
    {
        for (const ScoreRow& r : rows)
            if (r.node == node)
                return true;
        return false;
    }

    NodeId top() const
    {
        if (rows.empty())
            throw std::logic_error("empty score table");
        return rows.front().node;
    }
};

inline ScoreTable make_score_table(std::string method, const std::vector<NodeId>& candidates,
                                   const std::vector<double>& scores, const std::vector<double>& t_used,
                                   bool higher_is_better)
{
    if (candidates.size() != scores.size() || candidates.size() != t_used.size())
        throw std::logic_error("score table size mismatch");
    for (double s : scores)
        if (!std::isfinite(s))
            throw std::logic_error("non-finite score in " + method);
    ScoreTable table;
    table.method = std::move(method);
    table.higher_is_better = higher_is_better;
    const auto ranks = fractional_ranks(scores, higher_is_better);
    table.rows.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        table.rows[i] = {candidates[i], scores[i], t_used[i], ranks[i]};
    std::sort(table.rows.begin(), table.rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        if (a.rank != b.rank)
            return a.rank < b.rank;
        return a.node < b.node;
    });
    return table;
}

inline ScoreTable make_score_table(std::string method, const std::vector<NodeId>& candidates,
                                   const std::vector<double>& scores, double t_used, bool higher_is_better)
{
    return make_score_table(std::move(method), candidates, scores,
                            std::vector<double>(candidates.size(), t_used), higher_is_better);
}

} // namespace netinf
