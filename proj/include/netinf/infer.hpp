#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/kernel.hpp"
#include "netinf/paths.hpp"
#include "netinf/scores.hpp"
#include "netinf/util.hpp"

namespace netinf {

// ---- weighted Hamming premetric ----
// Charges 1-alpha per false negative (y=1, x=0) and alpha per false positive.
inline double weighted_hamming(std::span<const char> y, std::span<const char> x, double alpha)
{
    if (y.size() != x.size())
        throw std::invalid_argument("weighted_hamming: length mismatch");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("alpha must lie in [0,1]");
    double fn = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] && !x[i])
            fn += 1.0;
        else if (!y[i] && x[i])
            fp += 1.0;
    }
    return (1.0 - alpha) * fn + alpha * fp;
}

// Balance rule alpha = |V^t| / n, clamped away from the degenerate ends.
inline double default_alpha(std::size_t infected_count, NodeId n)
{
    const double a = static_cast<double>(infected_count) / static_cast<double>(n);
    return std::clamp(a, 1e-3, 1.0 - 1e-3);
}

// ---- candidate scoring core ----
// Holds one path profile per candidate so likelihood/error evaluations can be
// repeated across t without recomputing paths. All evaluators are const and
// safe to call concurrently.
class CandidateScorer {
  public:
    CandidateScorer(const Graph& g, std::vector<NodeId> candidates, int k, const DiffusionLaw& law,
                    std::uint64_t seed, int jobs = 1, bool with_hop_disks = false)
        : graph_(&g), law_(law), k_(k), candidates_(std::move(candidates))
    {
        search_graph_ = law_.search_graph(g);
        profiles_.resize(candidates_.size());
        const PathOptions opts = law_.path_options();
        parallel_for(candidates_.size(), jobs, [&](std::size_t i) {
            profiles_[i] = k_disjoint_shortest_paths(search_graph_, candidates_[i], k_, seed, opts);
        });
        if (with_hop_disks) {
            hops_.resize(candidates_.size());
            parallel_for(candidates_.size(), jobs, [&](std::size_t i) {
                hops_[i] = hop_distances(g, candidates_[i]);
            });
        }
        for (const auto& profile : profiles_)
            for (double len : profile.length)
                max_len_ = std::max(max_len_, static_cast<int>(std::lround(len)));
    }

    std::size_t size() const { return candidates_.size(); }
    const std::vector<NodeId>& candidates() const { return candidates_; }
    const PathLengthProfile& profile(std::size_t idx) const { return profiles_[idx]; }
    const Graph& graph() const { return *graph_; }
    const DiffusionLaw& law() const { return law_; }
    int k() const { return k_; }

    KernelRow row(std::size_t idx, double t) const
    {
        return kernel_row(profiles_[idx], t, law_, graph_);
    }

    // L(i,t) over all nodes; restricted to a hop disk when radius >= 0.
    double log_likelihood(std::size_t idx, double t, const std::vector<char>& infected,
                          int radius = -1) const
    {
        return accumulate(idx, t, [&](NodeId j, double p, double& acc) {
            acc += infected[static_cast<std::size_t>(j)] ? std::log(p) : std::log1p(-p);
        },
                          radius);
    }

    // H_alpha(i,t) over all nodes; restricted to a hop disk when radius >= 0.
    double expected_error(std::size_t idx, double t, double alpha, const std::vector<char>& infected,
                          int radius = -1) const
    {
        return accumulate(idx, t, [&](NodeId j, double p, double& acc) {
            acc += infected[static_cast<std::size_t>(j)] ? (1.0 - alpha) * (1.0 - p) : alpha * p;
        },
                          radius);
    }

    int hop_distance(std::size_t idx, NodeId j) const
    {
        if (hops_.empty())
            throw std::logic_error("scorer built without hop disks");
        return hops_[idx][static_cast<std::size_t>(j)];
    }

  private:
    template <typename Fn>
    double accumulate(std::size_t idx, double t, Fn&& per_node, int radius) const
    {
        const PathLengthProfile& profile = profiles_[idx];
        const NodeId n = profile.n();
        double acc = 0.0;
        if (!law_.heterogeneous()) {
            const ErlangCdfTable table(t, law_.rate(), max_len_);
            for (NodeId j = 0; j < n; ++j) {
                if (radius >= 0 && !within_disk(idx, j, radius))
                    continue;
                double p;
                if (j == profile.source) {
                    p = kProbCap;
                } else {
                    const int paths = profile.num_paths(j);
                    if (paths == 0) {
                        p = kProbFloor;
                    } else {
                        double survival = 1.0;
                        for (double len : profile.lengths_for(j))
                            survival *= table.sf(static_cast<int>(std::lround(len)));
                        p = clamp_prob(1.0 - survival);
                    }
                }
                per_node(j, p, acc);
            }
            return acc;
        }
        for (NodeId j = 0; j < n; ++j) {
            if (radius >= 0 && !within_disk(idx, j, radius))
                continue;
            const double p = j == profile.source ? kProbCap : kernel_value(profile, j, t, law_, graph_);
            per_node(j, p, acc);
        }
        return acc;
    }

    bool within_disk(std::size_t idx, NodeId j, int radius) const
    {
        const int d = hops_.empty() ? profile_hop(idx, j) : hops_[idx][static_cast<std::size_t>(j)];
        return d != kUnreachable && d < radius;
    }

    // shortest profile length doubles as the hop distance, unit lengths only
    int profile_hop(std::size_t idx, NodeId j) const
    {
        if (law_.heterogeneous())
            throw std::logic_error("disk restriction under a weighted law needs hop tables");
        const PathLengthProfile& profile = profiles_[idx];
        if (profile.num_paths(j) == 0)
            return kUnreachable;
        return static_cast<int>(std::lround(profile.lengths_for(j)[0]));
    }

    const Graph* graph_;
    Graph search_graph_;
    DiffusionLaw law_;
    int k_;
    std::vector<NodeId> candidates_;
    std::vector<PathLengthProfile> profiles_;
    std::vector<std::vector<int>> hops_;
    int max_len_ = 0;
};

namespace detail {

inline std::vector<NodeId> infected_candidates(const Graph& g, const InfectionSnapshot& snap)
{
    if (snap.infected.empty())
        throw std::invalid_argument("inference needs a nonempty infected set");
    snap.validate_against(g);
    return snap.infected;
}

} // namespace detail

// ---- NI-ML / NI-ME at a known observation time ----

inline ScoreTable ni_ml_scores(const Graph& g, const InfectionSnapshot& snap, double t, int k,
                               const DiffusionLaw& law, std::uint64_t seed, int jobs = 1)
{
    if (!(t > 0.0))
        throw std::invalid_argument("NI-ML needs t > 0");
    const auto candidates = detail::infected_candidates(g, snap);
    CandidateScorer scorer(g, candidates, k, law, seed, jobs);
    const auto mask = snap.mask(g.n());
    std::vector<double> scores(candidates.size());
    parallel_for(candidates.size(), jobs,
                 [&](std::size_t i) { scores[i] = scorer.log_likelihood(i, t, mask); });
    return make_score_table("ni-ml", candidates, scores, t, /*higher_is_better=*/true);
}

inline ScoreTable ni_me_scores(const Graph& g, const InfectionSnapshot& snap, double t, double alpha,
                               int k, const DiffusionLaw& law, std::uint64_t seed, int jobs = 1)
{
    if (!(t > 0.0))
        throw std::invalid_argument("NI-ME needs t > 0");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("NI-ME needs alpha in (0,1)");
    const auto candidates = detail::infected_candidates(g, snap);
    CandidateScorer scorer(g, candidates, k, law, seed, jobs);
    const auto mask = snap.mask(g.n());
    std::vector<double> scores(candidates.size());
    parallel_for(candidates.size(), jobs,
                 [&](std::size_t i) { scores[i] = scorer.expected_error(i, t, alpha, mask); });
    return make_score_table("ni-me", candidates, scores, t, /*higher_is_better=*/false);
}

// ---- observation-time estimation ----

enum class TimeMethod { grid, first_moment };
enum class NiMethod { ml, me };

struct TimeEstimate {
    double t = 0.0;
    TimeMethod method = TimeMethod::grid;
    int bins = 0;
    double t_max = 0.0;
};

struct TimeEstimateResult {
    TimeEstimate estimate;
    bool degenerate = false; // fell back to the first-moment rule
    std::vector<std::pair<NodeId, double>> per_candidate_t;
};

// First-moment rule t ~ -ln(1-mu) from the candidate's infected-neighbor
// fraction mu; mu=1 is pulled back to 1 - 1/(2 deg) before the log.
inline TimeEstimate estimate_t_first_moment(const Graph& g, const InfectionSnapshot& snap,
                                            NodeId candidate, double rate = 1.0, double t_floor = 1e-3)
{
    if (!g.valid_node(candidate))
        throw std::invalid_argument("invalid candidate node");
    const std::size_t deg = g.degree(candidate);
    if (deg == 0)
        throw std::invalid_argument("first-moment estimate needs a candidate with neighbors");
    const auto mask = snap.mask(g.n());
    std::size_t infected = 0;
    for (const Edge& e : g.neighbors(candidate))
        infected += mask[static_cast<std::size_t>(e.to)] ? 1 : 0;
    double mu = static_cast<double>(infected) / static_cast<double>(deg);
    if (mu >= 1.0)
        mu = 1.0 - 1.0 / (2.0 * static_cast<double>(deg));
    double t = mu <= 0.0 ? t_floor : -std::log1p(-mu) / rate;
    t = std::max(t, t_floor);
    return {t, TimeMethod::first_moment, 0, 0.0};
}

namespace detail {

// t_max: diameter of the infected subgraph (longest shortest path among
// infected nodes), in expected traversal time units.
inline double infected_t_max(const Graph& g, const InfectionSnapshot& snap, const DiffusionLaw& law)
{
    const auto induced = induced_infected_subgraph(g, snap);
    if (!law.heterogeneous())
        return static_cast<double>(diameter(induced.graph)) / law.rate();
    double best = 0.0;
    Rng rng(0);
    for (NodeId s = 0; s < induced.graph.n(); ++s) {
        PathOptions opts;
        opts.use_weights = true;
        const auto st = detail::shortest_path_search(induced.graph, s, opts, nullptr, rng);
        for (double d : st.dist)
            best = std::max(best, d);
    }
    return best;
}

inline double median(std::vector<double> v)
{
    if (v.empty())
        throw std::logic_error("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

inline std::vector<double> time_grid(double t_max, int bins)
{
    std::vector<double> grid(static_cast<std::size_t>(bins));
    for (int j = 1; j <= bins; ++j)
        grid[static_cast<std::size_t>(j - 1)] = t_max * static_cast<double>(j) / static_cast<double>(bins);
    return grid;
}

// Quantized search over (0, t_max]. ML: joint argmax over candidate and grid
// point. ME: per-candidate minimizing t, then the median over the 10 best
// candidates. Degenerate snapshots (single node, everything infected, or no
// infected edges) fall back to the median first-moment estimate.
inline TimeEstimateResult estimate_t_grid(const Graph& g, const InfectionSnapshot& snap, NiMethod method,
                                          int bins, int k, const DiffusionLaw& law, std::uint64_t seed,
                                          std::optional<double> alpha = std::nullopt, int jobs = 1)
{
    if (bins < 2)
        throw std::invalid_argument("grid estimation needs at least 2 bins");
    const auto candidates = detail::infected_candidates(g, snap);
    const double t_max =
        candidates.size() == 1 || static_cast<NodeId>(candidates.size()) == g.n()
            ? 0.0
            : detail::infected_t_max(g, snap, law);

    TimeEstimateResult result;
    if (t_max <= 0.0) {
        std::vector<double> moments;
        for (NodeId c : candidates)
            if (g.degree(c) > 0)
                moments.push_back(estimate_t_first_moment(g, snap, c, law.rate()).t);
        if (moments.empty())
            moments.push_back(1e-3);
        result.degenerate = true;
        result.estimate = {detail::median(std::move(moments)), TimeMethod::first_moment, bins, 0.0};
        return result;
    }

    const auto grid = time_grid(t_max, bins);
    CandidateScorer scorer(g, candidates, k, law, seed, jobs);
    const auto mask = snap.mask(g.n());
    const double a = alpha.value_or(default_alpha(candidates.size(), g.n()));

    std::vector<double> best_t(candidates.size());
    std::vector<double> best_score(candidates.size());
    parallel_for(candidates.size(), jobs, [&](std::size_t i) {
        double bt = grid[0];
        double bs = method == NiMethod::ml ? scorer.log_likelihood(i, grid[0], mask)
                                           : scorer.expected_error(i, grid[0], a, mask);
        for (std::size_t j = 1; j < grid.size(); ++j) {
            const double s = method == NiMethod::ml ? scorer.log_likelihood(i, grid[j], mask)
                                                    : scorer.expected_error(i, grid[j], a, mask);
            const bool better = method == NiMethod::ml ? s > bs : s < bs;
            if (better) {
                bs = s;
                bt = grid[j];
            }
        }
        best_t[i] = bt;
        best_score[i] = bs;
    });

    for (std::size_t i = 0; i < candidates.size(); ++i)
        result.per_candidate_t.emplace_back(candidates[i], best_t[i]);

    double t_hat;
    if (method == NiMethod::ml) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (best_score[i] > best_score[arg])
                arg = i;
        t_hat = best_t[arg];
    } else {
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (best_score[x] != best_score[y])
                return best_score[x] < best_score[y];
            return x < y;
        });
        std::vector<double> top;
        for (std::size_t i = 0; i < order.size() && i < 10; ++i)
            top.push_back(best_t[order[i]]);
        t_hat = detail::median(std::move(top));
    }
    result.estimate = {t_hat, TimeMethod::grid, bins, t_max};
    return result;
}

// ---- multi-sample scoring ----
// Mean of per-sample scores over the union candidate set; each sample is
// evaluated at its own time parameter.
inline ScoreTable ni_scores_multisample(const Graph& g, std::span<const InfectionSnapshot> snaps,
                                        std::span<const double> ts, NiMethod method,
                                        std::optional<double> alpha, int k, const DiffusionLaw& law,
                                        std::uint64_t seed, int jobs = 1)
{
    if (snaps.empty() || snaps.size() != ts.size())
        throw std::invalid_argument("multisample scoring needs one time per snapshot");
    std::vector<NodeId> candidates;
    for (const auto& snap : snaps) {
        const auto c = detail::infected_candidates(g, snap);
        candidates.insert(candidates.end(), c.begin(), c.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    CandidateScorer scorer(g, candidates, k, law, seed, jobs);
    std::vector<double> scores(candidates.size(), 0.0);
    std::vector<double> t_used(candidates.size(), 0.0);
    for (std::size_t r = 0; r < snaps.size(); ++r) {
        const auto mask = snaps[r].mask(g.n());
        const double a = alpha.value_or(default_alpha(snaps[r].infected.size(), g.n()));
        parallel_for(candidates.size(), jobs, [&](std::size_t i) {
            scores[i] += method == NiMethod::ml ? scorer.log_likelihood(i, ts[r], mask)
                                                : scorer.expected_error(i, ts[r], a, mask);
        });
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] /= static_cast<double>(snaps.size());
        t_used[i] = ts[0];
    }
    return make_score_table(method == NiMethod::ml ? "ni-ml" : "ni-me", candidates, scores, t_used,
                            method == NiMethod::ml);
}

} // namespace netinf
