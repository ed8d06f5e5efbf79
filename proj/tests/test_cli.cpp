#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "netinf/cli.hpp"

using namespace netinf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
    {
        path = fs::temp_directory_path() / name;
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    REQUIRE(out);
    out << content;
}

const std::string kLineGraph = "# nodes=6\n0\t1\n1\t2\n2\t3\n3\t4\n4\t5\n";

} // namespace

TEST_CASE("simulate subcommand writes snapshots and a manifest")
{
    TempDir dir("netinf_cli_sim");
    write_file(dir.file("g.tsv"), kLineGraph);
    const int rc = cli::run_cli({"simulate", "--graph", dir.file("g.tsv"), "--sources", "0",
                                 "--times", "0,2", "--runs", "2", "--seed", "99", "--out-prefix",
                                 dir.file("sim")});
    CHECK(rc == 0);
    CHECK(fs::exists(dir.file("sim_run0_t0.snap")));
    CHECK(fs::exists(dir.file("sim_run1_t1.snap")));
    CHECK(fs::exists(dir.file("sim.manifest.jsonl")));
    const auto snap = load_snapshot(dir.file("sim_run0_t0.snap"));
    CHECK(snap.infected == std::vector<NodeId>{0}); // t=0 snapshot is the source set
    const auto manifest = nlohmann::json::parse(slurp(dir.file("sim.manifest.jsonl")));
    CHECK(manifest.at("seed") == 99);
    CHECK(manifest.at("command") == "simulate");
}

TEST_CASE("paths and kernel subcommands emit audit tables")
{
    TempDir dir("netinf_cli_paths");
    write_file(dir.file("g.tsv"), kLineGraph);
    CHECK(cli::run_cli({"paths", "--graph", dir.file("g.tsv"), "--source", "0", "--k", "2",
                        "--seed", "5", "--out", dir.file("p.tsv")}) == 0);
    const std::string tsv = slurp(dir.file("p.tsv"));
    CHECK(tsv.find("source\ttarget\tr\tlength") == 0);
    CHECK(tsv.find("0\t3\t1\t3") != std::string::npos);

    CHECK(cli::run_cli({"kernel", "--graph", dir.file("g.tsv"), "--source", "0", "--t", "1.0",
                        "--seed", "5", "--out", dir.file("k.csv")}) == 0);
    const std::string csv = slurp(dir.file("k.csv"));
    CHECK(csv.find("target,probability") == 0);
    CHECK(csv.find("1,0.632120558829") != std::string::npos);
}

TEST_CASE("infer subcommand: scores CSV, auto t, and data errors")
{
    TempDir dir("netinf_cli_infer");
    write_file(dir.file("g.tsv"), kLineGraph);
    write_file(dir.file("s.txt"), "t=1.0\n0\n1\n2\n");

    SUBCASE("explicit t")
    {
        const int rc = cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot",
                                     dir.file("s.txt"), "--method", "ni-ml", "--t", "1.0", "--seed",
                                     "7", "--out", dir.file("scores.csv")});
        CHECK(rc == 0);
        const std::string csv = slurp(dir.file("scores.csv"));
        CHECK(csv.find("node,score,t_used,rank") == 0);
        CHECK(csv.find("\n1,") != std::string::npos); // node 1 leads at t=1
    }

    SUBCASE("t from the snapshot header, then auto estimation")
    {
        CHECK(cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot", dir.file("s.txt"),
                            "--method", "ni-me", "--seed", "7", "--out", dir.file("auto.csv")}) == 0);
        write_file(dir.file("unknown.txt"), "t=unknown\n0\n1\n2\n");
        CHECK(cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot",
                            dir.file("unknown.txt"), "--method", "ni-ml", "--seed", "7", "--out",
                            dir.file("auto2.csv")}) == 0);
        const auto manifest = nlohmann::json::parse(slurp(dir.file("auto2.csv.manifest.jsonl")));
        CHECK(manifest.at("t_used").at(0).get<double>() > 0.0);
    }

    SUBCASE("every method runs end to end")
    {
        for (const std::string method : {"distance", "degree", "integrative", "ni-multi"})
            CHECK(cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot",
                                dir.file("s.txt"), "--method", method, "--seed", "7", "--out",
                                dir.file(method + ".csv")}) == 0);
    }

    SUBCASE("snapshot referencing a node beyond n exits with the data code")
    {
        write_file(dir.file("bad.txt"), "t=1.0\n0\n17\n");
        const int rc = cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot",
                                     dir.file("bad.txt"), "--method", "ni-ml", "--seed", "7",
                                     "--out", dir.file("bad.csv")});
        CHECK(rc == cli::kExitData);
    }

    SUBCASE("unknown flag exits with the usage code")
    {
        const int rc = cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshot",
                                     dir.file("s.txt"), "--frobnicate"});
        CHECK(rc == cli::kExitUsage);
    }
}

TEST_CASE("weighted law, explicit alpha, and direction-flag validation")
{
    TempDir dir("netinf_cli_misc");
    write_file(dir.file("w.tsv"), "# nodes=3\n0\t1\t2.0\n1\t2\t0.5\n");
    write_file(dir.file("s.txt"), "t=1.0\n0\n1\n");

    CHECK(cli::run_cli({"kernel", "--graph", dir.file("w.tsv"), "--source", "0", "--t", "1.0",
                        "--law", "weighted", "--seed", "3", "--out", dir.file("wk.csv")}) == 0);
    const std::string csv = slurp(dir.file("wk.csv"));
    CHECK(csv.find("target,probability") == 0);

    CHECK(cli::run_cli({"infer", "--graph", dir.file("w.tsv"), "--snapshot", dir.file("s.txt"),
                        "--method", "ni-me", "--alpha", "0.25", "--law", "weighted", "--seed", "3",
                        "--out", dir.file("me.csv")}) == 0);

    // reversing directions only makes sense for directed inputs
    CHECK(cli::run_cli({"paths", "--graph", dir.file("w.tsv"), "--reverse-direction", "--source",
                        "0", "--seed", "3", "--out", dir.file("p.tsv")}) == cli::kExitData);
    write_file(dir.file("d.tsv"), "# nodes=3\n0\t1\n1\t2\n");
    CHECK(cli::run_cli({"paths", "--graph", dir.file("d.tsv"), "--directed", "--reverse-direction",
                        "--source", "2", "--seed", "3", "--out", dir.file("rev.tsv")}) == 0);
    // with arcs flipped, node 0 is reachable from 2
    CHECK(slurp(dir.file("rev.tsv")).find("2\t0\t1\t2") != std::string::npos);
}

TEST_CASE("multi-snapshot inference via --snapshots")
{
    TempDir dir("netinf_cli_snaps");
    write_file(dir.file("g.tsv"), kLineGraph);
    write_file(dir.file("s1.txt"), "t=1.0\n2\n3\n");
    write_file(dir.file("s2.txt"), "t=2.0\n1\n2\n3\n4\n");
    CHECK(cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshots",
                        dir.file("s1.txt") + "," + dir.file("s2.txt"), "--method", "ni-ml", "--seed",
                        "7", "--out", dir.file("multi.csv")}) == 0);
    const std::string csv = slurp(dir.file("multi.csv"));
    // candidates come from the earlier snapshot only
    CHECK(csv.find("\n2,") != std::string::npos);
    CHECK(csv.find("\n4,") == std::string::npos);

    // recovery between snapshots is a data error
    write_file(dir.file("s3.txt"), "t=2.0\n3\n4\n");
    CHECK(cli::run_cli({"infer", "--graph", dir.file("g.tsv"), "--snapshots",
                        dir.file("s1.txt") + "," + dir.file("s3.txt"), "--method", "ni-ml", "--seed",
                        "7", "--out", dir.file("rec.csv")}) == cli::kExitData);
}

TEST_CASE("repeated invocations with one seed are byte-identical")
{
    TempDir a("netinf_cli_det_a");
    TempDir b("netinf_cli_det_b");
    for (const auto* dir : {&a, &b}) {
        write_file(dir->file("g.tsv"), kLineGraph);
        write_file(dir->file("s.txt"), "t=1.5\n0\n1\n2\n3\n");
        CHECK(cli::run_cli({"infer", "--graph", dir->file("g.tsv"), "--snapshot", dir->file("s.txt"),
                            "--method", "ni-me", "--alpha", "auto", "--k", "2", "--seed", "31415",
                            "--out", dir->file("scores.csv")}) == 0);
    }
    CHECK(slurp(a.file("scores.csv")) == slurp(b.file("scores.csv")));

    // seed omitted: still recorded in the manifest
    CHECK(cli::run_cli({"infer", "--graph", a.file("g.tsv"), "--snapshot", a.file("s.txt"),
                        "--method", "ni-ml", "--t", "1.5", "--out", a.file("noseed.csv")}) == 0);
    const auto manifest = nlohmann::json::parse(slurp(a.file("noseed.csv.manifest.jsonl")));
    CHECK(manifest.contains("seed"));
}

TEST_CASE("bench subcommand end to end with determinism")
{
    TempDir dir("netinf_cli_bench");
    const nlohmann::json spec = {{"generator", "er"},    {"n", 50},           {"p", 0.06},
                                 {"runs", 5},            {"t_values", {2.0}}, {"min_infected", 5},
                                 {"methods", {"ni-ml", "distance"}},          {"bins", 15},
                                 {"seed", 12}};
    write_file(dir.file("spec.json"), spec.dump());
    CHECK(cli::run_cli({"bench", "--spec", dir.file("spec.json"), "--out", dir.file("r1.csv"),
                        "--raw", dir.file("raw1.csv"), "--plot", dir.file("p1.svg")}) == 0);
    CHECK(cli::run_cli({"bench", "--spec", dir.file("spec.json"), "--out", dir.file("r2.csv"),
                        "--raw", dir.file("raw2.csv")}) == 0);
    CHECK(slurp(dir.file("r1.csv")) == slurp(dir.file("r2.csv")));
    CHECK(slurp(dir.file("raw1.csv")) == slurp(dir.file("raw2.csv")));
    CHECK(slurp(dir.file("p1.svg")).find("</svg>") != std::string::npos);
    CHECK(fs::exists(dir.file("r1.csv.manifest.jsonl")));
}
