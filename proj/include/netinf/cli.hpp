#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netinf/baselines.hpp"
#include "netinf/bench.hpp"
#include "netinf/generators.hpp"
#include "netinf/graph.hpp"
#include "netinf/infer.hpp"
#include "netinf/kernel.hpp"
#include "netinf/multi_source.hpp"
#include "netinf/paths.hpp"
#include "netinf/simulate.hpp"
#include "netinf/snapshots.hpp"
#include "netinf/util.hpp"

namespace netinf::cli {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 success, 1 usage error, 2 data error
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

namespace detail {

inline std::string file_digest(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return hex;
}

inline Graph reversed(const Graph& g)
{
    Graph::Builder b(true, g.n());
    for (NodeId u = 0; u < g.n(); ++u) {
        b.ensure_node(u);
        for (const Edge& e : g.neighbors(u))
            b.add_edge(e.to, u, e.weight);
    }
    return b.build();
}

inline std::vector<std::string> split_csv(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

} // namespace detail

// One manifest line per invocation so any output can be reproduced: command,
// argv, the root seed actually used, and input digests. No timestamps; the
// manifest itself is byte-stable.
struct Manifest {
    nlohmann::json j;

    Manifest(const std::string& command, const std::vector<std::string>& argv, std::uint64_t seed)
    {
        j["command"] = command;
        j["argv"] = argv;
        j["seed"] = seed;
        j["version"] = kVersion;
        j["inputs"] = nlohmann::json::object();
        j["outputs"] = nlohmann::json::array();
    }

    void add_input(const std::string& role, const std::string& path)
    {
        j["inputs"][role] = {{"path", path}, {"digest", detail::file_digest(path)}};
    }

    void add_output(const std::string& path) { j["outputs"].push_back(path); }

    void write(const std::string& next_to_output) const
    {
        const std::string path = next_to_output + ".manifest.jsonl";
        std::ofstream out(path, std::ios::app);
        if (!out)
            throw std::runtime_error("cannot write manifest: " + path);
        out << j.dump() << '\n';
    }
};

struct CommonOptions {
    std::string graph_path;
    bool directed = false;
    bool reverse_direction = false;
    std::optional<std::uint64_t> seed;
    int jobs = 0;

    std::uint64_t resolve_seed() const
    {
        if (seed)
            return *seed;
        std::random_device rd; // recorded in the manifest either way
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    int resolve_jobs() const { return jobs > 0 ? jobs : default_jobs(); }

    Graph load() const
    {
        Graph g = load_edge_list(graph_path, directed);
        if (reverse_direction) {
            if (!directed)
                throw std::runtime_error("--reverse-direction requires --directed");
            g = detail::reversed(g);
        }
        return g;
    }
};

inline void write_scores_csv(const std::string& path, const ScoreTable& table)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scores file: " + path);
    out << "node,score,t_used,rank\n";
    for (const ScoreRow& r : table.rows)
        out << r.node << ',' << format_double(r.score, "%.12g") << ','
            << format_double(r.t_used, "%.12g") << ',' << format_double(r.rank, "%.12g") << '\n';
}

inline int run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"path-kernel source inference toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "run the SI model and write snapshot files");
    CommonOptions sim_opts;
    std::string sim_sources_arg = "0";
    std::string sim_times_arg = "1";
    int sim_runs = 1;
    std::string sim_out_prefix = "sim";
    sim->add_option("--graph", sim_opts.graph_path, "edge-list TSV")->required();
    sim->add_flag("--directed", sim_opts.directed, "treat the edge list as directed");
    sim->add_flag("--reverse-direction", sim_opts.reverse_direction, "flip every directed edge");
    sim->add_option("--sources", sim_sources_arg, "comma-separated source ids");
    sim->add_option("--times", sim_times_arg, "comma-separated snapshot times");
    sim->add_option("--runs", sim_runs, "independent runs")->check(CLI::PositiveNumber);
    sim->add_option("--seed", [&](const CLI::results_t& r) { sim_opts.seed = std::stoull(r[0]); return true; },
                    "root seed (drawn from entropy when omitted)");
    sim->add_option("--jobs", sim_opts.jobs, "worker threads (default: cores)");
    sim->add_option("--out-prefix", sim_out_prefix, "output path prefix");

    // ---- paths ----
    auto* paths_cmd = app.add_subcommand("paths", "emit k disjoint shortest path lengths as TSV");
    CommonOptions paths_opts;
    NodeId paths_source = 0;
    int paths_k = 1;
    bool paths_weighted = false;
    std::string paths_out = "paths.tsv";
    paths_cmd->add_option("--graph", paths_opts.graph_path, "edge-list TSV")->required();
    paths_cmd->add_flag("--directed", paths_opts.directed, "treat the edge list as directed");
    paths_cmd->add_flag("--reverse-direction", paths_opts.reverse_direction, "flip every directed edge");
    paths_cmd->add_option("--source", paths_source, "source node")->required();
    paths_cmd->add_option("--k", paths_k, "disjoint path rounds")->check(CLI::PositiveNumber);
    paths_cmd->add_flag("--weighted", paths_weighted, "use reciprocal-rate edge lengths");
    paths_cmd->add_option("--seed",
                          [&](const CLI::results_t& r) { paths_opts.seed = std::stoull(r[0]); return true; },
                          "root seed");
    paths_cmd->add_option("--out", paths_out, "output TSV path");

    // ---- kernel ----
    auto* kernel_cmd = app.add_subcommand("kernel", "dump one kernel row as CSV");
    CommonOptions kernel_opts;
    NodeId kernel_source = 0;
    double kernel_t = 1.0;
    int kernel_k = 1;
    std::string kernel_law = "erlang";
    double kernel_rate = 1.0;
    std::string kernel_out = "kernel.csv";
    kernel_cmd->add_option("--graph", kernel_opts.graph_path, "edge-list TSV")->required();
    kernel_cmd->add_flag("--directed", kernel_opts.directed, "treat the edge list as directed");
    kernel_cmd->add_flag("--reverse-direction", kernel_opts.reverse_direction, "flip every directed edge");
    kernel_cmd->add_option("--source", kernel_source, "source node")->required();
    kernel_cmd->add_option("--t", kernel_t, "observation time")->required();
    kernel_cmd->add_option("--k", kernel_k, "disjoint path rounds")->check(CLI::PositiveNumber);
    kernel_cmd->add_option("--law", kernel_law, "erlang | weighted")
        ->check(CLI::IsMember({"erlang", "weighted"}));
    kernel_cmd->add_option("--rate", kernel_rate, "erlang rate");
    kernel_cmd->add_option("--seed",
                           [&](const CLI::results_t& r) { kernel_opts.seed = std::stoull(r[0]); return true; },
                           "root seed");
    kernel_cmd->add_option("--out", kernel_out, "output CSV path");

    // ---- infer ----
    auto* infer_cmd = app.add_subcommand("infer", "rank source candidates for observed snapshots");
    CommonOptions infer_opts;
    std::string infer_snapshot;
    std::string infer_snapshots;
    std::string infer_method = "ni-ml";
    std::string infer_t = "auto";
    std::string infer_alpha = "auto";
    int infer_k = 1;
    int infer_bins = 100;
    std::string infer_m = "auto";
    double infer_epsilon = 0.05;
    std::string infer_law = "erlang";
    double infer_rate = 1.0;
    std::string infer_combine = "ni-ml,ni-me,distance";
    std::string infer_out = "scores.csv";
    infer_cmd->add_option("--graph", infer_opts.graph_path, "edge-list TSV")->required();
    infer_cmd->add_flag("--directed", infer_opts.directed, "treat the edge list as directed");
    infer_cmd->add_flag("--reverse-direction", infer_opts.reverse_direction, "flip every directed edge");
    infer_cmd->add_option("--snapshot", infer_snapshot, "snapshot file");
    infer_cmd->add_option("--snapshots", infer_snapshots, "comma-separated snapshot files, increasing t");
    infer_cmd->add_option("--method", infer_method, "ni-ml | ni-me | ni-multi | distance | degree | integrative")
        ->check(CLI::IsMember({"ni-ml", "ni-me", "ni-multi", "distance", "degree", "integrative"}));
    infer_cmd->add_option("--t", infer_t, "observation time or 'auto'");
    infer_cmd->add_option("--alpha", infer_alpha, "NI-ME weight or 'auto'");
    infer_cmd->add_option("--k", infer_k, "disjoint path rounds")->check(CLI::PositiveNumber);
    infer_cmd->add_option("--bins", infer_bins, "grid bins for t estimation");
    infer_cmd->add_option("--m", infer_m, "source count or 'auto' (ni-multi)");
    infer_cmd->add_option("--epsilon", infer_epsilon, "coherence epsilon (ni-multi)");
    infer_cmd->add_option("--law", infer_law, "erlang | weighted")
        ->check(CLI::IsMember({"erlang", "weighted"}));
    infer_cmd->add_option("--rate", infer_rate, "erlang rate");
    infer_cmd->add_option("--combine", infer_combine, "methods for --method integrative");
    infer_cmd->add_option("--seed",
                          [&](const CLI::results_t& r) { infer_opts.seed = std::stoull(r[0]); return true; },
                          "root seed");
    infer_cmd->add_option("--jobs", infer_opts.jobs, "worker threads (default: cores)");
    infer_cmd->add_option("--out", infer_out, "output CSV path");

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "run a synthetic rank-evaluation experiment");
    std::string bench_spec_path;
    std::string bench_out = "results.csv";
    std::string bench_plot;
    std::string bench_raw;
    std::optional<std::uint64_t> bench_seed;
    int bench_jobs = 0;
    bench_cmd->add_option("--spec", bench_spec_path, "experiment spec JSON")->required();
    bench_cmd->add_option("--out", bench_out, "summary CSV path");
    bench_cmd->add_option("--raw", bench_raw, "optional per-run CSV path");
    bench_cmd->add_option("--plot", bench_plot, "optional SVG chart path");
    bench_cmd->add_option("--seed",
                          [&](const CLI::results_t& r) { bench_seed = std::stoull(r[0]); return true; },
                          "override the spec seed");
    bench_cmd->add_option("--jobs", bench_jobs, "worker threads (default: cores)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("netinf");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            const std::uint64_t seed = sim_opts.resolve_seed();
            const Graph g = sim_opts.load();
            SimulationConfig cfg;
            for (const auto& tok : detail::split_csv(sim_sources_arg))
                cfg.sources.push_back(static_cast<NodeId>(std::stol(tok)));
            for (const auto& tok : detail::split_csv(sim_times_arg))
                cfg.snapshot_times.push_back(std::stod(tok));
            cfg.seed = seed;
            const auto runs = batch_simulate(g, cfg, static_cast<std::size_t>(sim_runs),
                                             sim_opts.resolve_jobs());
            Manifest manifest("simulate", args, seed);
            manifest.add_input("graph", sim_opts.graph_path);
            nlohmann::json true_sources = cfg.sources;
            manifest.j["true_sources"] = true_sources;
            for (std::size_t r = 0; r < runs.size(); ++r)
                for (std::size_t s = 0; s < runs[r].size(); ++s) {
                    const std::string path = sim_out_prefix + "_run" + std::to_string(r) + "_t" +
                                             std::to_string(s) + ".snap";
                    save_snapshot(path, runs[r][s]);
                    manifest.add_output(path);
                }
            manifest.write(sim_out_prefix);
            return kExitOk;
        }

        if (paths_cmd->parsed()) {
            const std::uint64_t seed = paths_opts.resolve_seed();
            const Graph g = paths_opts.load();
            if (!g.valid_node(paths_source))
                throw std::runtime_error("source node " + std::to_string(paths_source) +
                                         " outside graph with " + std::to_string(g.n()) + " nodes");
            PathOptions opts;
            opts.use_weights = paths_weighted;
            const auto profile = k_disjoint_shortest_paths(g, paths_source, paths_k, seed, opts);
            std::ofstream out(paths_out);
            if (!out)
                throw std::runtime_error("cannot write " + paths_out);
            out << "source\ttarget\tr\tlength\n";
            for (NodeId j = 0; j < profile.n(); ++j) {
                const auto lens = profile.lengths_for(j);
                for (std::size_t r = 0; r < lens.size(); ++r)
                    out << paths_source << '\t' << j << '\t' << r + 1 << '\t'
                        << format_double(lens[r], "%.12g") << '\n';
            }
            Manifest manifest("paths", args, seed);
            manifest.add_input("graph", paths_opts.graph_path);
            manifest.add_output(paths_out);
            manifest.write(paths_out);
            return kExitOk;
        }

        if (kernel_cmd->parsed()) {
            const std::uint64_t seed = kernel_opts.resolve_seed();
            const Graph g = kernel_opts.load();
            if (!g.valid_node(kernel_source))
                throw std::runtime_error("source node " + std::to_string(kernel_source) +
                                         " outside graph with " + std::to_string(g.n()) + " nodes");
            const DiffusionLaw law =
                kernel_law == "weighted" ? DiffusionLaw::weighted() : DiffusionLaw::erlang(kernel_rate);
            const auto row = kernel_row(g, kernel_source, kernel_t, kernel_k, law, seed);
            std::ofstream out(kernel_out);
            if (!out)
                throw std::runtime_error("cannot write " + kernel_out);
            out << "target,probability\n";
            for (NodeId j = 0; j < g.n(); ++j)
                out << j << ',' << format_double(row.p[static_cast<std::size_t>(j)], "%.12g") << '\n';
            Manifest manifest("kernel", args, seed);
            manifest.add_input("graph", kernel_opts.graph_path);
            manifest.add_output(kernel_out);
            manifest.write(kernel_out);
            return kExitOk;
        }

        if (infer_cmd->parsed()) {
            const std::uint64_t seed = infer_opts.resolve_seed();
            const Graph g = infer_opts.load();
            const int jobs = infer_opts.resolve_jobs();
            const DiffusionLaw law =
                infer_law == "weighted" ? DiffusionLaw::weighted() : DiffusionLaw::erlang(infer_rate);

            std::vector<std::string> snap_paths;
            if (!infer_snapshots.empty())
                snap_paths = detail::split_csv(infer_snapshots);
            else if (!infer_snapshot.empty())
                snap_paths = {infer_snapshot};
            else
                throw std::runtime_error("infer needs --snapshot or --snapshots");
            std::vector<InfectionSnapshot> snaps;
            for (const auto& path : snap_paths) {
                snaps.push_back(load_snapshot(path));
                snaps.back().validate_against(g);
                if (snaps.back().infected.empty())
                    throw std::runtime_error(path + ": empty infected set");
            }

            const std::optional<double> alpha_opt =
                infer_alpha == "auto" ? std::nullopt : std::optional<double>(std::stod(infer_alpha));

            // per-snapshot observation times: --t, then the file's t=, then grid estimation
            std::vector<double> ts(snaps.size(), 0.0);
            for (std::size_t i = 0; i < snaps.size(); ++i) {
                if (infer_t != "auto") {
                    ts[i] = std::stod(infer_t);
                } else if (snaps[i].t) {
                    ts[i] = *snaps[i].t;
                } else {
                    const NiMethod est_method = infer_method == "ni-me" ? NiMethod::me : NiMethod::ml;
                    ts[i] = estimate_t_grid(g, snaps[i], est_method, infer_bins, infer_k, law,
                                            derive_seed(seed, "estimate", i), alpha_opt, jobs)
                                .estimate.t;
                }
                if (!(ts[i] > 0.0))
                    throw std::runtime_error("snapshot time must be positive; use --t or t= headers");
            }

            ScoreTable table;
            if (infer_method == "ni-ml" || infer_method == "ni-me") {
                const NiMethod method = infer_method == "ni-ml" ? NiMethod::ml : NiMethod::me;
                if (snaps.size() == 1) {
                    table = method == NiMethod::ml
                                ? ni_ml_scores(g, snaps[0], ts[0], infer_k, law, seed, jobs)
                                : ni_me_scores(g, snaps[0], ts[0],
                                               alpha_opt.value_or(default_alpha(snaps[0].infected.size(),
                                                                                g.n())),
                                               infer_k, law, seed, jobs);
                } else {
                    const auto result = multi_snapshot_scores(g, snaps, ts, method, alpha_opt, infer_k,
                                                              law, seed, jobs);
                    if (result.mixture_warning)
                        std::cerr << "warning: mixture edge laws void the memoryless contraction "
                                     "approximation\n";
                    table = result.table;
                }
            } else if (infer_method == "ni-multi") {
                int m;
                if (infer_m == "auto") {
                    m = estimate_num_sources(g, snaps[0]);
                    if (m == static_cast<int>(snaps[0].infected.size()) && m > 1)
                        std::cerr << "warning: every infected node is isolated; source-count estimate "
                                     "degenerate\n";
                } else {
                    m = std::stoi(infer_m);
                }
                const auto result = greedy_multi_source(g, snaps[0], m, ts[0], infer_epsilon, infer_k,
                                                        law, seed, GreedyObjective::localized_ml,
                                                        alpha_opt, jobs);
                if (!result.complete)
                    std::cerr << "warning: candidate pool emptied after " << result.sources.size()
                              << " of " << m << " sources\n";
                std::vector<double> scores(result.sources.size());
                std::vector<double> t_used(result.sources.size(), ts[0]);
                for (std::size_t i = 0; i < result.sources.size(); ++i)
                    scores[i] = -static_cast<double>(i); // pick order
                table = make_score_table("ni-multi", result.sources, scores, t_used, true);
            } else if (infer_method == "distance") {
                table = distance_centrality_scores(g, snaps[0]);
            } else if (infer_method == "degree") {
                table = degree_centrality_scores(g, snaps[0]);
            } else { // integrative
                std::vector<ScoreTable> parts;
                for (const auto& m : detail::split_csv(infer_combine)) {
                    if (m == "ni-ml")
                        parts.push_back(ni_ml_scores(g, snaps[0], ts[0], infer_k, law, seed, jobs));
                    else if (m == "ni-me")
                        parts.push_back(ni_me_scores(
                            g, snaps[0], ts[0],
                            alpha_opt.value_or(default_alpha(snaps[0].infected.size(), g.n())), infer_k,
                            law, seed, jobs));
                    else if (m == "distance")
                        parts.push_back(distance_centrality_scores(g, snaps[0]));
                    else if (m == "degree")
                        parts.push_back(degree_centrality_scores(g, snaps[0]));
                    else
                        throw std::runtime_error("unknown --combine method '" + m + "'");
                }
                table = integrative_rank(parts);
            }

            write_scores_csv(infer_out, table);
            Manifest manifest("infer", args, seed);
            manifest.add_input("graph", infer_opts.graph_path);
            for (std::size_t i = 0; i < snap_paths.size(); ++i)
                manifest.add_input("snapshot" + std::to_string(i), snap_paths[i]);
            manifest.j["t_used"] = ts;
            manifest.add_output(infer_out);
            manifest.write(infer_out);
            return kExitOk;
        }

        if (bench_cmd->parsed()) {
            std::ifstream spec_in(bench_spec_path);
            if (!spec_in)
                throw std::runtime_error("cannot open spec: " + bench_spec_path);
            nlohmann::json spec_json;
            spec_in >> spec_json;
            ExperimentSpec spec = ExperimentSpec::from_json(spec_json);
            if (bench_seed)
                spec.seed = *bench_seed;
            const auto results = evaluate_rank(spec, bench_jobs > 0 ? bench_jobs : default_jobs());
            {
                std::ofstream out(bench_out);
                if (!out)
                    throw std::runtime_error("cannot write " + bench_out);
                write_rank_csv(out, results);
            }
            Manifest manifest("bench", args, spec.seed);
            manifest.add_input("spec", bench_spec_path);
            manifest.j["experiment"] = spec.to_json();
            manifest.j["redraws"] = results.redraws;
            manifest.add_output(bench_out);
            if (!bench_raw.empty()) {
                std::ofstream out(bench_raw);
                if (!out)
                    throw std::runtime_error("cannot write " + bench_raw);
                write_run_csv(out, results);
                manifest.add_output(bench_raw);
            }
            if (!bench_plot.empty()) {
                std::ofstream out(bench_plot);
                if (!out)
                    throw std::runtime_error("cannot write " + bench_plot);
                write_rank_svg(out, results);
                manifest.add_output(bench_plot);
            }
            manifest.write(bench_out);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace netinf::cli
