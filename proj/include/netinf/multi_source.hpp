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

// Localization radii: d0 is the largest hop distance whose path CDF still
// exceeds 1/2, d1 the smallest whose CDF falls below epsilon/(n*m). Disks use
// the strict inequality d < R throughout.
struct CoherenceRadii {
    int d0 = 1;
    int d1 = 1;
    double epsilon = 0.0;
    int m = 1;
    double t = 0.0;
};

inline CoherenceRadii compute_radii(double t, NodeId n, int m, double epsilon, double rate = 1.0)
{
    if (!(t > 0.0))
        throw std::invalid_argument("radii need t > 0");
    if (m < 1 || n < 1)
        throw std::invalid_argument("radii need n >= 1 and m >= 1");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("radii need epsilon in (0,1)");
    CoherenceRadii radii;
    radii.epsilon = epsilon;
    radii.m = m;
    radii.t = t;
    const double lo = epsilon / (static_cast<double>(n) * static_cast<double>(m));
    int d = 1;
    int d0 = 0;
    constexpr int kScanCap = 1 << 20;
    while (erlang_cdf(d, t, rate) > 0.5) {
        d0 = d;
        if (++d > kScanCap)
            throw std::logic_error("d0 scan failed to terminate");
    }
    radii.d0 = std::max(d0, 1); // keep the self term when even F(1,t) <= 1/2
    d = 1;
    while (erlang_cdf(d, t, rate) >= lo) {
        if (++d > kScanCap)
            throw std::logic_error("d1 scan failed to terminate");
    }
    radii.d1 = d;
    return radii;
}

namespace detail {

inline std::vector<NodeId> validated_source_set(const InfectionSnapshot& snap, std::vector<NodeId> sources)
{
    if (sources.empty())
        throw std::invalid_argument("source set must be nonempty");
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    const auto mask_end = snap.infected.end();
    for (NodeId s : sources)
        if (!std::binary_search(snap.infected.begin(), mask_end, s))
            throw std::invalid_argument("candidate source " + std::to_string(s) + " is not infected");
    return sources;
}

} // namespace detail

// Joint log-likelihood of a source set under the at-least-one-source kernel.
inline double multi_source_likelihood(const Graph& g, const InfectionSnapshot& snap,
                                      const std::vector<NodeId>& source_set, double t, int k,
                                      const DiffusionLaw& law, std::uint64_t seed, int jobs = 1)
{
    const auto sources = detail::validated_source_set(snap, source_set);
    CandidateScorer scorer(g, sources, k, law, seed, jobs);
    std::vector<KernelRow> rows;
    rows.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i)
        rows.push_back(scorer.row(i, t));
    const auto mask = snap.mask(g.n());
    double acc = 0.0;
    for (NodeId j = 0; j < g.n(); ++j) {
        const double p = multi_source_prob(rows, j);
        acc += mask[static_cast<std::size_t>(j)] ? std::log(p) : std::log1p(-p);
    }
    return acc;
}

// Expected weighted-Hamming error of a source set.
inline double multi_source_error(const Graph& g, const InfectionSnapshot& snap,
                                 const std::vector<NodeId>& source_set, double t, double alpha, int k,
                                 const DiffusionLaw& law, std::uint64_t seed, int jobs = 1)
{
    const auto sources = detail::validated_source_set(snap, source_set);
    CandidateScorer scorer(g, sources, k, law, seed, jobs);
    std::vector<KernelRow> rows;
    rows.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i)
        rows.push_back(scorer.row(i, t));
    const auto mask = snap.mask(g.n());
    double acc = 0.0;
    for (NodeId j = 0; j < g.n(); ++j) {
        const double p = multi_source_prob(rows, j);
        acc += mask[static_cast<std::size_t>(j)] ? (1.0 - alpha) * (1.0 - p) : alpha * p;
    }
    return acc;
}

// L restricted to the d0 hop disk around the candidate.
inline double localized_likelihood(const Graph& g, const InfectionSnapshot& snap, NodeId candidate,
                                   double t, int d0, int k, const DiffusionLaw& law, std::uint64_t seed)
{
    if (d0 < 1)
        throw std::invalid_argument("localized likelihood needs d0 >= 1");
    CandidateScorer scorer(g, {candidate}, k, law, seed, 1, /*with_hop_disks=*/true);
    return scorer.log_likelihood(0, t, snap.mask(g.n()), d0);
}

enum class GreedyObjective { localized_ml, localized_me };

struct GreedyResult {
    std::vector<NodeId> sources; // in pick order
    bool complete = true;        // false when the candidate pool emptied early
    CoherenceRadii radii;
};

// Iterative multi-source inference: each round picks the best localized score
// among infected candidates outside the d1 disks of prior picks.
inline GreedyResult greedy_multi_source(const Graph& g, const InfectionSnapshot& snap, int m, double t,
                                        double epsilon, int k, const DiffusionLaw& law, std::uint64_t seed,
                                        GreedyObjective objective = GreedyObjective::localized_ml,
                                        std::optional<double> alpha = std::nullopt, int jobs = 1)
{
    if (m < 1)
        throw std::invalid_argument("greedy needs m >= 1");
    const auto candidates = detail::infected_candidates(g, snap);
    GreedyResult result;
    result.radii = compute_radii(t, g.n(), m, epsilon, law.heterogeneous() ? 1.0 : law.rate());

    CandidateScorer scorer(g, candidates, k, law, seed, jobs, /*with_hop_disks=*/true);
    const auto mask = snap.mask(g.n());
    const double a = alpha.value_or(default_alpha(candidates.size(), g.n()));

    std::vector<double> local_score(candidates.size());
    parallel_for(candidates.size(), jobs, [&](std::size_t i) {
        local_score[i] = objective == GreedyObjective::localized_ml
                             ? scorer.log_likelihood(i, t, mask, result.radii.d0)
                             : scorer.expected_error(i, t, a, mask, result.radii.d0);
    });

    std::vector<char> excluded(candidates.size(), 0);
    for (int round = 0; round < m; ++round) {
        std::size_t best = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (excluded[i])
                continue;
            if (best == candidates.size())
                best = i;
            else if (objective == GreedyObjective::localized_ml ? local_score[i] > local_score[best]
                                                                : local_score[i] < local_score[best])
                best = i;
        }
        if (best == candidates.size()) {
            result.complete = false; // pool exhausted before m picks
            break;
        }
        result.sources.push_back(candidates[best]);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (excluded[i])
                continue;
            const int d = scorer.hop_distance(best, candidates[i]);
            if (d != kUnreachable && d < result.radii.d1)
                excluded[i] = 1;
        }
    }
    return result;
}

// Number of connected components of the infected subgraph.
inline int estimate_num_sources(const Graph& g, const InfectionSnapshot& snap)
{
    const auto induced = induced_infected_subgraph(g, snap);
    return static_cast<int>(connected_components(induced.graph).size());
}

} // namespace netinf
