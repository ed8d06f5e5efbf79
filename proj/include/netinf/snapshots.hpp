#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/infer.hpp"
#include "netinf/kernel.hpp"

namespace netinf {

// Base graph with the infected set merged into one super-node x; boundary
// weights aggregate over all edges into the infected set.
struct ContractionGraph {
    Graph graph;
    NodeId super_node = -1;
    std::vector<NodeId> to_original;   // contracted id -> original id, -1 for x
    std::vector<NodeId> from_original; // original id -> contracted id (infected -> x)
};

inline ContractionGraph contract(const Graph& g, const InfectionSnapshot& snap)
{
    if (snap.infected.empty())
        throw std::invalid_argument("contraction needs a nonempty infected set");
    snap.validate_against(g);
    const auto infected = snap.mask(g.n());

    ContractionGraph out;
    out.from_original.assign(static_cast<std::size_t>(g.n()), -1);
    NodeId next = 0;
    for (NodeId v = 0; v < g.n(); ++v) {
        if (!infected[static_cast<std::size_t>(v)]) {
            out.from_original[static_cast<std::size_t>(v)] = next++;
            out.to_original.push_back(v);
        }
    }
    out.super_node = next;
    out.to_original.push_back(-1);
    for (NodeId v = 0; v < g.n(); ++v)
        if (infected[static_cast<std::size_t>(v)])
            out.from_original[static_cast<std::size_t>(v)] = out.super_node;

    const NodeId nc = next + 1;
    Graph::Builder b(g.directed(), nc);
    b.ensure_node(out.super_node);
    std::vector<double> into_super(static_cast<std::size_t>(nc), 0.0);
    std::vector<double> from_super(static_cast<std::size_t>(nc), 0.0);
    for (NodeId u = 0; u < g.n(); ++u) {
        const bool u_in = infected[static_cast<std::size_t>(u)] != 0;
        for (const Edge& e : g.neighbors(u)) {
            const bool v_in = infected[static_cast<std::size_t>(e.to)] != 0;
            if (u_in && v_in)
                continue; // edges internal to the infected set vanish
            if (!u_in && !v_in) {
                if (!g.directed() && e.to < u)
                    continue;
                b.add_edge(out.from_original[static_cast<std::size_t>(u)],
                           out.from_original[static_cast<std::size_t>(e.to)], e.weight);
            } else if (!u_in) {
                into_super[static_cast<std::size_t>(out.from_original[static_cast<std::size_t>(u)])] += e.weight;
            } else {
                from_super[static_cast<std::size_t>(out.from_original[static_cast<std::size_t>(e.to)])] += e.weight;
            }
        }
    }
    if (!g.directed()) {
        // both orientations of each boundary edge were visited once
        for (NodeId c = 0; c < nc; ++c)
            if (into_super[static_cast<std::size_t>(c)] > 0.0)
                b.add_edge(c, out.super_node, into_super[static_cast<std::size_t>(c)]);
    } else {
        for (NodeId c = 0; c < nc; ++c) {
            if (into_super[static_cast<std::size_t>(c)] > 0.0)
                b.add_edge(c, out.super_node, into_super[static_cast<std::size_t>(c)]);
            if (from_super[static_cast<std::size_t>(c)] > 0.0)
                b.add_edge(out.super_node, c, from_super[static_cast<std::size_t>(c)]);
        }
    }
    out.graph = b.build();
    return out;
}

struct TwoSnapshotScores {
    ScoreTable combined;   // chain-rule score: term I plus the shared term II
    ScoreTable term1;      // single-snapshot table on the earlier snapshot
    double term2 = 0.0;    // contraction-graph term, identical for all candidates
    bool mixture_warning = false;
};

namespace detail {

inline void require_monotone(const InfectionSnapshot& earlier, const InfectionSnapshot& later)
{
    for (NodeId v : earlier.infected)
        if (!std::binary_search(later.infected.begin(), later.infected.end(), v))
            throw std::invalid_argument(
                "node " + std::to_string(v) +
                " is infected in the earlier snapshot but not the later one; the SI model has no recovery");
}

// Term II of the chain rule: the later increment explained by the contracted
// super-source at elapsed time t2-t1.
inline double contraction_term(const Graph& g, const InfectionSnapshot& snap1,
                               const InfectionSnapshot& snap2, double dt, int k,
                               const DiffusionLaw& law, std::uint64_t seed)
{
    const auto contraction = contract(g, snap1);
    const auto row =
        kernel_row(contraction.graph, contraction.super_node, dt, k, law, seed);
    const auto later = snap2.mask(g.n());
    double acc = 0.0;
    for (NodeId c = 0; c < contraction.graph.n(); ++c) {
        if (c == contraction.super_node)
            continue;
        const NodeId original = contraction.to_original[static_cast<std::size_t>(c)];
        const double p = row.p[static_cast<std::size_t>(c)];
        acc += later[static_cast<std::size_t>(original)] ? std::log(p) : std::log1p(-p);
    }
    return acc;
}

} // namespace detail

// Chain-rule decomposition over two snapshots: term I scores the candidate on
// the earlier snapshot, term II treats the earlier infected set as one source
// on the contraction graph. Term II does not depend on the candidate, so the
// combined ranking coincides with term I's.
inline TwoSnapshotScores two_snapshot_scores(const Graph& g, const InfectionSnapshot& snap1,
                                             const InfectionSnapshot& snap2, double t1, double t2, int k,
                                             const DiffusionLaw& law, std::uint64_t seed,
                                             NiMethod method = NiMethod::ml,
                                             std::optional<double> alpha = std::nullopt, int jobs = 1)
{
    if (!(t1 > 0.0) || !(t2 > t1))
        throw std::invalid_argument("two-snapshot scoring needs 0 < t1 < t2");
    detail::require_monotone(snap1, snap2);

    TwoSnapshotScores result;
    result.mixture_warning = law.has_mixtures(); // term II leans on memoryless edges
    const double a = alpha.value_or(default_alpha(snap1.infected.size(), g.n()));
    result.term1 = method == NiMethod::ml ? ni_ml_scores(g, snap1, t1, k, law, seed, jobs)
                                          : ni_me_scores(g, snap1, t1, a, k, law, seed, jobs);
    result.term2 = detail::contraction_term(g, snap1, snap2, t2 - t1, k, law, seed);

    result.combined = result.term1;
    result.combined.method = method == NiMethod::ml ? "two-snapshot-ni-ml" : "two-snapshot-ni-me";
    if (method == NiMethod::ml)
        for (ScoreRow& r : result.combined.rows)
            r.score += result.term2;
    return result;
}

struct MultiSnapshotScores {
    ScoreTable table;                  // mean of per-snapshot scores (default scoring path)
    std::vector<double> term2_chain;   // pairwise contraction terms, diagnostics
    bool mixture_warning = false;
};

// Default multi-snapshot path: average per-snapshot scores over the earliest
// snapshot's candidates; the pairwise contraction terms are reported but,
// being candidate-independent, never change the ranking.
inline MultiSnapshotScores multi_snapshot_scores(const Graph& g,
                                                 std::span<const InfectionSnapshot> snaps,
                                                 std::span<const double> ts, NiMethod method,
                                                 std::optional<double> alpha, int k,
                                                 const DiffusionLaw& law, std::uint64_t seed,
                                                 int jobs = 1)
{
    if (snaps.size() < 1 || snaps.size() != ts.size())
        throw std::invalid_argument("multi-snapshot scoring needs one time per snapshot");
    for (std::size_t r = 0; r + 1 < snaps.size(); ++r) {
        if (!(ts[r] < ts[r + 1]))
            throw std::invalid_argument("snapshot times must be strictly increasing");
        detail::require_monotone(snaps[r], snaps[r + 1]);
    }

    MultiSnapshotScores result;
    result.mixture_warning = law.has_mixtures() && snaps.size() > 1;

    // candidates: the earliest infected set (the source is always in it)
    const auto candidates = detail::infected_candidates(g, snaps[0]);
    CandidateScorer scorer(g, candidates, k, law, seed, jobs);
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t r = 0; r < snaps.size(); ++r) {
        const auto mask = snaps[r].mask(g.n());
        const double a = alpha.value_or(default_alpha(snaps[r].infected.size(), g.n()));
        parallel_for(candidates.size(), jobs, [&](std::size_t i) {
            scores[i] += method == NiMethod::ml ? scorer.log_likelihood(i, ts[r], mask)
                                                : scorer.expected_error(i, ts[r], a, mask);
        });
    }
    for (double& s : scores)
        s /= static_cast<double>(snaps.size());
    result.table = make_score_table(method == NiMethod::ml ? "ni-ml" : "ni-me", candidates, scores,
                                    ts[0], method == NiMethod::ml);

    for (std::size_t r = 0; r + 1 < snaps.size(); ++r)
        result.term2_chain.push_back(
            detail::contraction_term(g, snaps[r], snaps[r + 1], ts[r + 1] - ts[r], k, law,
                                     derive_seed(seed, "contract", r)));
    return result;
}

} // namespace netinf
