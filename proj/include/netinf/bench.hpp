#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "netinf/baselines.hpp"
#include "netinf/generators.hpp"
#include "netinf/graph.hpp"
#include "netinf/infer.hpp"
#include "netinf/simulate.hpp"
#include "netinf/util.hpp"

namespace netinf {

enum class GeneratorKind { er, power_law, grid, asym_grid, regular_tree };
enum class SourceRule { random, center, fixed };

inline std::string to_string(GeneratorKind g)
{
    switch (g) {
    case GeneratorKind::er: return "er";
    case GeneratorKind::power_law: return "power-law";
    case GeneratorKind::grid: return "grid";
    case GeneratorKind::asym_grid: return "asym-grid";
    case GeneratorKind::regular_tree: return "regular-tree";
    }
    return "?";
}

struct ExperimentSpec {
    GeneratorKind generator = GeneratorKind::er;
    NodeId n = 250;
    double p = 0.01;   // er edge probability
    int theta = 2;     // power-law attachment count
    int tree_branching = 2;
    int tree_depth = 7;
    SourceRule source_rule = SourceRule::random;
    NodeId source_id = 0;
    std::vector<double> t_values = {2.0, 3.0, 4.0, 5.0};
    double band_lo = 0.0;  // infected-fraction band (exclusive low end when > 0)
    double band_hi = 0.75;
    int min_infected = 10;
    int samples = 1;
    int runs = 100;
    std::vector<std::string> methods = {"ni-ml", "ni-me", "distance", "degree"};
    int k = 0; // 0 = generator default
    int bins = 100;
    std::uint64_t seed = 0;

    int effective_k() const
    {
        if (k > 0)
            return k;
        switch (generator) {
        case GeneratorKind::grid: return 2;
        case GeneratorKind::asym_grid: return 10;
        default: return 1;
        }
    }

    static ExperimentSpec from_json(const nlohmann::json& j)
    {
        ExperimentSpec spec;
        const std::string gen = j.value("generator", "er");
        if (gen == "er")
            spec.generator = GeneratorKind::er;
        else if (gen == "power-law")
            spec.generator = GeneratorKind::power_law;
        else if (gen == "grid")
            spec.generator = GeneratorKind::grid;
        else if (gen == "asym-grid")
            spec.generator = GeneratorKind::asym_grid;
        else if (gen == "regular-tree")
            spec.generator = GeneratorKind::regular_tree;
        else
            throw std::runtime_error("unknown generator '" + gen + "'");
        spec.n = j.value("n", spec.n);
        spec.p = j.value("p", spec.p);
        spec.theta = j.value("theta", spec.theta);
        spec.tree_branching = j.value("tree_branching", spec.tree_branching);
        spec.tree_depth = j.value("tree_depth", spec.tree_depth);
        const std::string rule = j.value("source_rule", "random");
        if (rule == "random")
            spec.source_rule = SourceRule::random;
        else if (rule == "center")
            spec.source_rule = SourceRule::center;
        else if (rule == "fixed")
            spec.source_rule = SourceRule::fixed;
        else
            throw std::runtime_error("unknown source rule '" + rule + "'");
        spec.source_id = j.value("source_id", spec.source_id);
        if (j.contains("t_values"))
            spec.t_values = j.at("t_values").get<std::vector<double>>();
        if (j.contains("fraction_band")) {
            const auto band = j.at("fraction_band").get<std::vector<double>>();
            if (band.size() != 2)
                throw std::runtime_error("fraction_band must be [lo, hi]");
            spec.band_lo = band[0];
            spec.band_hi = band[1];
        }
        spec.min_infected = j.value("min_infected", spec.min_infected);
        spec.samples = j.value("samples", spec.samples);
        spec.runs = j.value("runs", spec.runs);
        if (j.contains("methods"))
            spec.methods = j.at("methods").get<std::vector<std::string>>();
        spec.k = j.value("k", spec.k);
        spec.bins = j.value("bins", spec.bins);
        spec.seed = j.value("seed", spec.seed);
        if (spec.runs < 1)
            throw std::runtime_error("runs must be >= 1");
        if (spec.band_hi > 0.75 + 1e-9)
            throw std::runtime_error("infected-fraction band must stay within (0, 0.75]");
        return spec;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["generator"] = to_string(generator);
        j["n"] = n;
        j["p"] = p;
        j["theta"] = theta;
        j["tree_branching"] = tree_branching;
        j["tree_depth"] = tree_depth;
        j["source_rule"] = source_rule == SourceRule::random   ? "random"
                           : source_rule == SourceRule::center ? "center"
                                                               : "fixed";
        j["source_id"] = source_id;
        j["t_values"] = t_values;
        j["fraction_band"] = {band_lo, band_hi};
        j["min_infected"] = min_infected;
        j["samples"] = samples;
        j["runs"] = runs;
        j["methods"] = methods;
        j["k"] = effective_k();
        j["bins"] = bins;
        j["seed"] = seed;
        if (generator == GeneratorKind::asym_grid)
            j["asym_layout"] = {{"strip_width", 3}, {"strip_length", (n - 1 + 17) / 18}};
        return j;
    }
};

struct RunRecord {
    int run = 0;
    double t = 0.0;
    double infected_fraction = 0.0;
    NodeId true_source = -1;
    int attempts = 1;
    std::map<std::string, double> rank; // fractional rank of the true source per method
};

struct RankResults {
    ExperimentSpec spec;
    std::vector<RunRecord> records;
    long redraws = 0;
};

namespace detail {

inline Graph bench_graph(const ExperimentSpec& spec, std::uint64_t run_seed, NodeId& center_out)
{
    switch (spec.generator) {
    case GeneratorKind::er:
        center_out = 0;
        return gen_erdos_renyi(spec.n, spec.p, derive_seed(run_seed, "graph"));
    case GeneratorKind::power_law:
        center_out = 0;
        return gen_power_law(spec.n, spec.theta, derive_seed(run_seed, "graph"));
    case GeneratorKind::grid: {
        center_out = grid_layout(spec.n).center;
        return gen_grid(spec.n);
    }
    case GeneratorKind::asym_grid: {
        auto asym = gen_asym_grid(spec.n);
        center_out = asym.center;
        return std::move(asym.graph);
    }
    case GeneratorKind::regular_tree: {
        auto tree = gen_regular_tree(spec.tree_branching, spec.tree_depth);
        center_out = tree.root;
        return std::move(tree.graph);
    }
    }
    throw std::logic_error("unhandled generator");
}

// Per-candidate baseline scores over an explicit candidate set (needed for
// multi-sample averaging where candidates may sit outside one sample).
inline std::vector<double> distance_scores_for(const Graph& g, const std::vector<NodeId>& candidates,
                                               const InfectionSnapshot& snap, double big)
{
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
    return scores;
}

inline std::vector<double> degree_scores_for(const Graph& g, const std::vector<NodeId>& candidates,
                                             const InfectionSnapshot& snap)
{
    const auto mask = snap.mask(g.n());
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double acc = 0.0;
        for (const Edge& e : g.neighbors(candidates[i]))
            if (mask[static_cast<std::size_t>(e.to)])
                acc += 1.0;
        scores[i] = acc;
    }
    return scores;
}

} // namespace detail

// Full rank-evaluation protocol: per run, simulate snapshots at one t value,
// redraw (fresh sub-seed) until every sample's infected count lands in the
// band, score all requested methods with t estimated from each sample, and
// record the fractional rank of the true source.
inline RankResults evaluate_rank(const ExperimentSpec& spec, int jobs = 1)
{
    static const std::vector<std::string> known = {"ni-ml",  "ni-me",   "distance", "degree",
                                                   "integrative", "_oracle", "_random"};
    for (const auto& m : spec.methods)
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw std::runtime_error("unknown bench method '" + m + "'");

    RankResults results;
    results.spec = spec;
    results.records.resize(static_cast<std::size_t>(spec.runs));
    const DiffusionLaw law = DiffusionLaw::erlang(1.0);
    const int k = spec.effective_k();

    parallel_for(static_cast<std::size_t>(spec.runs), jobs, [&](std::size_t r) {
        const std::uint64_t run_seed = derive_seed(spec.seed, "bench-run", r);
        NodeId center = 0;
        const Graph g = detail::bench_graph(spec, run_seed, center);
        const double t = spec.t_values[r % spec.t_values.size()];

        RunRecord rec;
        rec.run = static_cast<int>(r);
        rec.t = t;

        constexpr int kMaxAttempts = 500;
        std::vector<InfectionSnapshot> snaps;
        NodeId source = -1;
        int attempt = 0;
        for (; attempt < kMaxAttempts; ++attempt) {
            const std::uint64_t attempt_seed = derive_seed(run_seed, "attempt", attempt);
            switch (spec.source_rule) {
            case SourceRule::random: {
                Rng rng(derive_seed(attempt_seed, "src"));
                do {
                    source = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(g.n())));
                } while (g.degree(source) == 0);
                break;
            }
            case SourceRule::center:
                source = center;
                break;
            case SourceRule::fixed:
                source = spec.source_id;
                break;
            }
            snaps.clear();
            bool ok = true;
            for (int s = 0; s < spec.samples && ok; ++s) {
                SimulationConfig cfg;
                cfg.sources = {source};
                cfg.snapshot_times = {t};
                cfg.seed = derive_seed(attempt_seed, "sim", static_cast<std::uint64_t>(s));
                auto run_snaps = simulate(g, cfg);
                const auto& snap = run_snaps.front();
                const double frac = static_cast<double>(snap.infected.size()) / static_cast<double>(g.n());
                if (static_cast<int>(snap.infected.size()) < spec.min_infected || frac > spec.band_hi ||
                    (spec.band_lo > 0.0 && frac <= spec.band_lo))
                    ok = false;
                else
                    snaps.push_back(run_snaps.front());
            }
            if (ok)
                break;
        }
        if (attempt == kMaxAttempts)
            throw std::runtime_error("bench run " + std::to_string(r) +
                                     ": could not draw an in-band snapshot after 500 attempts");
        rec.attempts = attempt + 1;
        rec.true_source = source;
        double frac = 0.0;
        for (const auto& snap : snaps)
            frac += static_cast<double>(snap.infected.size()) / static_cast<double>(g.n());
        rec.infected_fraction = frac / static_cast<double>(snaps.size());

        // observation times are treated as unknown and estimated per sample
        std::vector<double> ml_ts, me_ts;
        const std::uint64_t score_seed = derive_seed(run_seed, "score");
        for (const auto& snap : snaps) {
            ml_ts.push_back(
                estimate_t_grid(g, snap, NiMethod::ml, spec.bins, k, law, score_seed).estimate.t);
            me_ts.push_back(
                estimate_t_grid(g, snap, NiMethod::me, spec.bins, k, law, score_seed).estimate.t);
        }

        std::vector<NodeId> candidates;
        for (const auto& snap : snaps)
            candidates.insert(candidates.end(), snap.infected.begin(), snap.infected.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        std::map<std::string, ScoreTable> tables;
        auto need = [&](const std::string& m) {
            for (const auto& method : spec.methods)
                if (method == m)
                    return true;
            return false;
        };
        const bool integrative = need("integrative");
        const double big = 5.0 * static_cast<double>(std::max(diameter(g), 1));

        if (need("ni-ml") || integrative)
            tables["ni-ml"] = ni_scores_multisample(g, snaps, ml_ts, NiMethod::ml, std::nullopt, k, law,
                                                    score_seed);
        if (need("ni-me") || integrative)
            tables["ni-me"] = ni_scores_multisample(g, snaps, me_ts, NiMethod::me, std::nullopt, k, law,
                                                    score_seed);
        if (need("distance") || integrative) {
            std::vector<double> acc(candidates.size(), 0.0);
            for (const auto& snap : snaps) {
                const auto s = detail::distance_scores_for(g, candidates, snap, big);
                for (std::size_t i = 0; i < acc.size(); ++i)
                    acc[i] += s[i];
            }
            tables["distance"] = make_score_table("distance", candidates, acc, 0.0, false);
        }
        if (need("degree")) {
            std::vector<double> acc(candidates.size(), 0.0);
            for (const auto& snap : snaps) {
                const auto s = detail::degree_scores_for(g, candidates, snap);
                for (std::size_t i = 0; i < acc.size(); ++i)
                    acc[i] += s[i];
            }
            tables["degree"] = make_score_table("degree", candidates, acc, 0.0, true);
        }
        if (integrative)
            tables["integrative"] =
                integrative_rank({tables.at("ni-ml"), tables.at("ni-me"), tables.at("distance")});
        if (need("_oracle")) {
            std::vector<double> s(candidates.size(), 0.0);
            for (std::size_t i = 0; i < candidates.size(); ++i)
                s[i] = candidates[i] == source ? 1.0 : 0.0;
            tables["_oracle"] = make_score_table("_oracle", candidates, s, 0.0, true);
        }
        if (need("_random")) {
            Rng rng(derive_seed(run_seed, "random-scorer"));
            std::vector<double> s(candidates.size(), 0.0);
            for (double& v : s)
                v = rng.next_unit();
            tables["_random"] = make_score_table("_random", candidates, s, 0.0, true);
        }

        for (const auto& method : spec.methods)
            rec.rank[method] = tables.at(method).rank_of(source);
        results.records[r] = std::move(rec);
    });

    for (const auto& rec : results.records)
        results.redraws += rec.attempts - 1;
    return results;
}

struct RankSummaryRow {
    std::string method;
    std::string band;
    double mean_rank = 0.0;
    double stddev = 0.0;
    int runs = 0;
};

inline std::vector<RankSummaryRow> summarize_ranks(const RankResults& results)
{
    // bands are infected-fraction deciles
    std::map<std::pair<std::string, int>, std::vector<double>> groups;
    for (const auto& rec : results.records) {
        int band = static_cast<int>(rec.infected_fraction * 10.0);
        band = std::clamp(band, 0, 9);
        for (const auto& [method, rank] : rec.rank)
            groups[{method, band}].push_back(rank);
    }
    std::vector<RankSummaryRow> rows;
    for (const auto& [key, ranks] : groups) {
        RankSummaryRow row;
        row.method = key.first;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f-%.1f", key.second / 10.0, (key.second + 1) / 10.0);
        row.band = buf;
        double mean = 0.0;
        for (double r : ranks)
            mean += r;
        mean /= static_cast<double>(ranks.size());
        double var = 0.0;
        for (double r : ranks)
            var += (r - mean) * (r - mean);
        row.mean_rank = mean;
        row.stddev = ranks.size() > 1 ? std::sqrt(var / static_cast<double>(ranks.size() - 1)) : 0.0;
        row.runs = static_cast<int>(ranks.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_rank_csv(std::ostream& out, const RankResults& results)
{
    out << "method,t_band,mean_rank,std,runs\n";
    for (const auto& row : summarize_ranks(results))
        out << row.method << ',' << row.band << ',' << format_double(row.mean_rank, "%.6g") << ','
            << format_double(row.stddev, "%.6g") << ',' << row.runs << '\n';
}

inline void write_run_csv(std::ostream& out, const RankResults& results)
{
    out << "run,t,infected_fraction,true_source,attempts";
    std::vector<std::string> methods = results.spec.methods;
    for (const auto& m : methods)
        out << ',' << m;
    out << '\n';
    for (const auto& rec : results.records) {
        out << rec.run << ',' << format_double(rec.t, "%.6g") << ','
            << format_double(rec.infected_fraction, "%.6g") << ',' << rec.true_source << ','
            << rec.attempts;
        for (const auto& m : methods)
            out << ',' << format_double(rec.rank.at(m), "%.6g");
        out << '\n';
    }
}

// Minimal mean-rank-per-band line chart, one polyline per method.
inline void write_rank_svg(std::ostream& out, const RankResults& results)
{
    const auto rows = summarize_ranks(results);
    std::vector<std::string> methods, bands;
    double max_rank = 1.0;
    for (const auto& row : rows) {
        if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
            methods.push_back(row.method);
        if (std::find(bands.begin(), bands.end(), row.band) == bands.end())
            bands.push_back(row.band);
        max_rank = std::max(max_rank, row.mean_rank);
    }
    std::sort(bands.begin(), bands.end());
    const double width = 640, height = 420, ml = 60, mb = 50, mt = 20, mr = 20;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w << "\" y2=\""
        << mt + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + plot_h
        << "\" stroke=\"black\"/>\n";
    for (std::size_t bi = 0; bi < bands.size(); ++bi) {
        const double x = ml + plot_w * (bands.size() == 1 ? 0.5 : static_cast<double>(bi) / (bands.size() - 1));
        out << "<text x=\"" << x << "\" y=\"" << mt + plot_h + 18
            << "\" font-size=\"10\" text-anchor=\"middle\">" << bands[bi] << "</text>\n";
    }
    out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">infected fraction band</text>\n";
    out << "<text x=\"14\" y=\"" << mt + plot_h / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << mt + plot_h / 2
        << ")\">mean rank of true source</text>\n";
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[mi % 6] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t bi = 0; bi < bands.size(); ++bi) {
            for (const auto& row : rows) {
                if (row.method != methods[mi] || row.band != bands[bi])
                    continue;
                const double x =
                    ml + plot_w * (bands.size() == 1 ? 0.5 : static_cast<double>(bi) / (bands.size() - 1));
                const double y = mt + plot_h * (1.0 - row.mean_rank / max_rank);
                out << x << ',' << y << ' ';
            }
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 14 + 14 * mi << "\" font-size=\"11\" fill=\""
            << palette[mi % 6] << "\">" << methods[mi] << "</text>\n";
    }
    out << "</svg>\n";
}

// ---- shortest-path overlap experiment ----

namespace detail {

struct BfsCounts {
    std::vector<int> dist;
    std::vector<double> paths; // shortest-path multiplicities (saturating via double)
};

inline BfsCounts bfs_with_counts(const Graph& g, NodeId source)
{
    BfsCounts out;
    out.dist.assign(static_cast<std::size_t>(g.n()), kUnreachable);
    out.paths.assign(static_cast<std::size_t>(g.n()), 0.0);
    out.dist[static_cast<std::size_t>(source)] = 0;
    out.paths[static_cast<std::size_t>(source)] = 1.0;
    std::deque<NodeId> queue{source};
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (const Edge& e : g.neighbors(u)) {
            auto& dv = out.dist[static_cast<std::size_t>(e.to)];
            if (dv == kUnreachable) {
                dv = out.dist[static_cast<std::size_t>(u)] + 1;
                out.paths[static_cast<std::size_t>(e.to)] = out.paths[static_cast<std::size_t>(u)];
                queue.push_back(e.to);
            } else if (dv == out.dist[static_cast<std::size_t>(u)] + 1) {
                out.paths[static_cast<std::size_t>(e.to)] += out.paths[static_cast<std::size_t>(u)];
            }
        }
    }
    return out;
}

} // namespace detail

// True when at least two distinct shortest i-j paths share an edge: some edge
// on the shortest-path DAG carries multiplicity >= 2.
inline bool has_overlapping_shortest_paths(const Graph& g, NodeId i, NodeId j)
{
    if (i == j)
        return false;
    const auto from_i = detail::bfs_with_counts(g, i);
    if (from_i.dist[static_cast<std::size_t>(j)] == kUnreachable)
        return false;
    if (from_i.paths[static_cast<std::size_t>(j)] < 2.0)
        return false;
    const auto from_j = detail::bfs_with_counts(g, j);
    const int total = from_i.dist[static_cast<std::size_t>(j)];
    for (NodeId u = 0; u < g.n(); ++u) {
        if (from_i.dist[static_cast<std::size_t>(u)] == kUnreachable)
            continue;
        for (const Edge& e : g.neighbors(u)) {
            const NodeId v = e.to;
            if (from_j.dist[static_cast<std::size_t>(v)] == kUnreachable)
                continue;
            if (from_i.dist[static_cast<std::size_t>(u)] + 1 + from_j.dist[static_cast<std::size_t>(v)] !=
                total)
                continue;
            if (from_i.paths[static_cast<std::size_t>(u)] * from_j.paths[static_cast<std::size_t>(v)] >= 2.0)
                return true;
        }
    }
    return false;
}

// Fraction of random connected node pairs with overlapping shortest paths on
// a fixed graph.
inline double overlap_frequency(const Graph& g, int trials, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, "overlap"));
    int counted = 0, overlapping = 0;
    for (int trial = 0; trial < trials; ++trial) {
        NodeId a = -1, b = -1;
        bool connected = false;
        for (int attempt = 0; attempt < 64 && !connected; ++attempt) {
            a = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(g.n())));
            do {
                b = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(g.n())));
            } while (b == a);
            const auto dist = hop_distances(g, a);
            connected = dist[static_cast<std::size_t>(b)] != kUnreachable;
        }
        if (!connected)
            continue;
        ++counted;
        if (has_overlapping_shortest_paths(g, a, b))
            ++overlapping;
    }
    if (counted == 0)
        throw std::runtime_error("overlap experiment found no connected pairs");
    return static_cast<double>(overlapping) / static_cast<double>(counted);
}

// Fresh Erdos-Renyi draw per trial.
inline double overlap_frequency(NodeId n, double p, int trials, std::uint64_t seed, int jobs = 1)
{
    std::vector<char> hit(static_cast<std::size_t>(trials), 0);
    std::vector<char> valid(static_cast<std::size_t>(trials), 0);
    parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t trial) {
        const Graph g = gen_erdos_renyi(n, p, derive_seed(seed, "overlap-graph", trial));
        Rng rng(derive_seed(seed, "overlap-pair", trial));
        for (int attempt = 0; attempt < 64; ++attempt) {
            const NodeId a = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
            NodeId b;
            do {
                b = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
            } while (b == a);
            const auto dist = hop_distances(g, a);
            if (dist[static_cast<std::size_t>(b)] == kUnreachable)
                continue;
            valid[trial] = 1;
            hit[trial] = has_overlapping_shortest_paths(g, a, b) ? 1 : 0;
            break;
        }
    });
    long counted = 0, overlapping = 0;
    for (int trial = 0; trial < trials; ++trial) {
        counted += valid[static_cast<std::size_t>(trial)];
        overlapping += valid[static_cast<std::size_t>(trial)] && hit[static_cast<std::size_t>(trial)];
    }
    if (counted == 0)
        throw std::runtime_error("overlap experiment found no connected pairs");
    return static_cast<double>(overlapping) / static_cast<double>(counted);
}

} // namespace netinf
