#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netinf/generators.hpp"
#include "netinf/kernel.hpp"
#include "netinf/rng.hpp"

using namespace netinf;

namespace {

// Monte-Carlo oracle: empirical CDF of a sum of exponentials.
double mc_sum_of_exponentials(const std::vector<double>& rates, double t, std::size_t samples,
                              std::uint64_t seed)
{
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        double total = 0.0;
        for (double r : rates)
            total += rng.next_exponential(r);
        if (total <= t)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

// Quadrature oracle: Pr[X1 + X2 <= t] = int_0^t r1 e^{-r1 s} (1 - e^{-r2 (t-s)}) ds
// by Simpson's rule.
double convolution_two_rates(double r1, double r2, double t, int panels = 20000)
{
    auto f = [&](double s) { return r1 * std::exp(-r1 * s) * (1.0 - std::exp(-r2 * (t - s))); };
    const double h = t / (2.0 * panels);
    double acc = f(0.0) + f(t);
    for (int i = 1; i < 2 * panels; ++i)
        acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double binom_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

} // namespace

TEST_CASE("erlang_cdf matches closed forms")
{
    // frozen values verified against the Monte-Carlo oracle below
    CHECK(erlang_cdf(1, 1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-13));
    CHECK(erlang_cdf(2, 1.0) == doctest::Approx(0.26424111765711533).epsilon(1e-13));
    CHECK(erlang_cdf(3, 2.0) == doctest::Approx(0.3233235838169365).epsilon(1e-13));
    CHECK(erlang_cdf(1, 2.0, 0.5) == doctest::Approx(0.6321205588285577).epsilon(1e-13));
    CHECK(erlang_cdf(5, 0.0) == 0.0);
    CHECK(erlang_cdf(0, 0.5) == 1.0);
}

TEST_CASE("erlang_cdf agrees with the Monte-Carlo sum-of-exponentials oracle")
{
    const std::size_t samples = 200000;
    for (int l : {1, 2, 3, 5}) {
        const double t = 1.0;
        const double expected = erlang_cdf(l, t);
        const double mc = mc_sum_of_exponentials(std::vector<double>(static_cast<std::size_t>(l), 1.0),
                                                 t, samples, 900 + static_cast<std::uint64_t>(l));
        CHECK(std::abs(mc - expected) < 4.0 * binom_sigma(expected, static_cast<double>(samples)));
    }
}

TEST_CASE("erlang_cdf shape and limits")
{
    // nondecreasing in t, nonincreasing in l, bounded in [0,1]
    for (int l = 1; l <= 6; ++l) {
        double prev = -1.0;
        for (double t : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double f = erlang_cdf(l, t);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f >= prev);
            prev = f;
        }
    }
    for (double t : {0.5, 1.0, 3.0})
        for (int l = 2; l <= 8; ++l)
            CHECK(erlang_cdf(l, t) <= erlang_cdf(l - 1, t));

    // overflow-safe branches
    CHECK(erlang_cdf(3, 1000.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(erlang_cdf(5, 800.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(erlang_cdf(1000, 1.0) >= 0.0);
    CHECK(erlang_cdf(1000, 1.0) < 1e-12);
    CHECK(std::isfinite(erlang_cdf(40, 900.0)));
}

TEST_CASE("erlang_cdf agrees with direct quadrature of the density")
{
    // independent route: Simpson integration of t^{l-1} e^{-t} / (l-1)!
    const auto quad = [](int l, double upper) {
        const int panels = 20000;
        double lgfac = 0.0;
        for (int i = 2; i < l; ++i)
            lgfac += std::log(static_cast<double>(i));
        auto pdf = [&](double x) {
            return x <= 0.0 ? 0.0 : std::exp((l - 1) * std::log(x) - x - lgfac);
        };
        const double h = upper / (2.0 * panels);
        double acc = pdf(0.0) + pdf(upper);
        for (int i = 1; i < 2 * panels; ++i)
            acc += pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    CHECK(erlang_cdf(4, 2.3) == doctest::Approx(quad(4, 2.3)).epsilon(1e-10));
    CHECK(erlang_cdf(7, 5.1) == doctest::Approx(quad(7, 5.1)).epsilon(1e-10));
}

TEST_CASE("erlang table matches pointwise evaluation")
{
    for (double t : {0.3, 1.0, 5.0, 750.0}) {
        const ErlangCdfTable table(t, 1.0, 20);
        for (int l = 0; l <= 20; ++l) {
            CHECK(table.cdf(l) == doctest::Approx(erlang_cdf(l, t)).epsilon(1e-12));
            CHECK(table.sf(l) == doctest::Approx(erlang_sf(l, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("phase-type CDF")
{
    SUBCASE("single edge is exponential")
    {
        for (double lambda : {0.5, 1.0, 3.0})
            CHECK(phase_type_cdf(PhaseTypeLaw::chain({lambda}), 1.2) ==
                  doctest::Approx(1.0 - std::exp(-1.2 * lambda)).epsilon(1e-13));
    }

    SUBCASE("two rates match the quadrature oracle")
    {
        // frozen: convolution_two_rates(1, 2, 1) = 0.3995764008937...
        const double oracle = convolution_two_rates(1.0, 2.0, 1.0);
        CHECK(oracle == doctest::Approx(0.39957640089372804).epsilon(1e-9));
        CHECK(phase_type_cdf(PhaseTypeLaw::chain({1.0, 2.0}), 1.0) ==
              doctest::Approx(0.39957640089372804).epsilon(1e-12));
        const double oracle2 = convolution_two_rates(0.7, 2.9, 1.7);
        CHECK(phase_type_cdf(PhaseTypeLaw::chain({0.7, 2.9}), 1.7) ==
              doctest::Approx(oracle2).epsilon(1e-9));
    }

    SUBCASE("equal rates reduce to Erlang")
    {
        for (int l : {2, 3, 6})
            for (double t : {0.5, 2.0, 7.0})
                CHECK(phase_type_cdf(PhaseTypeLaw::chain(std::vector<double>(l, 1.0)), t) ==
                      doctest::Approx(erlang_cdf(l, t)).epsilon(1e-9));
        // near-equal rates stay on the uniformized path and behave
        CHECK(phase_type_cdf(PhaseTypeLaw::chain({1.0, 1.0 + 1e-9, 1.0 - 1e-9}), 2.0) ==
              doctest::Approx(erlang_cdf(3, 2.0)).epsilon(1e-7));
    }

    SUBCASE("long clustered chains stay stable")
    {
        // separated enough for partial fractions, but the expansion is
        // hopelessly ill-conditioned; the uniformization fallback must kick in
        std::vector<double> rates;
        for (int i = 0; i < 30; ++i)
            rates.push_back(1.0 + 0.001 * i);
        const double t = 28.0;
        const double f = phase_type_cdf(PhaseTypeLaw::chain(rates), t);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        const double mc = mc_sum_of_exponentials(rates, t, 100000, 41);
        CHECK(std::abs(f - mc) < 4.0 * binom_sigma(std::max(f, 0.05), 100000.0));
    }

    SUBCASE("permutation invariance")
    {
        const std::vector<std::vector<double>> permutations = {
            {0.5, 1.5, 4.0}, {1.5, 0.5, 4.0}, {4.0, 1.5, 0.5}, {1.5, 4.0, 0.5}};
        const double base = phase_type_cdf(PhaseTypeLaw::chain(permutations[0]), 1.3);
        for (const auto& rates : permutations)
            CHECK(phase_type_cdf(PhaseTypeLaw::chain(rates), 1.3) ==
                  doctest::Approx(base).epsilon(1e-9));
    }

    SUBCASE("mixtures combine component CDFs by weight")
    {
        PhaseTypeLaw mix;
        mix.components.push_back({0.3, {1.0, 2.0}});
        mix.components.push_back({0.7, {0.5}});
        const double expect = 0.3 * phase_type_cdf(PhaseTypeLaw::chain({1.0, 2.0}), 1.0) +
                              0.7 * phase_type_cdf(PhaseTypeLaw::chain({0.5}), 1.0);
        CHECK(phase_type_cdf(mix, 1.0) == doctest::Approx(expect).epsilon(1e-13));

        PhaseTypeLaw bad;
        bad.components.push_back({0.3, {1.0}});
        bad.components.push_back({0.6, {2.0}});
        CHECK_THROWS_AS(phase_type_cdf(bad, 1.0), std::invalid_argument);
    }
}

TEST_CASE("kernel_value")
{
    const Graph line = gen_line(4);
    const DiffusionLaw law = DiffusionLaw::erlang();

    SUBCASE("single path reduces to the shortest-path Erlang kernel")
    {
        const auto profile = k_disjoint_shortest_paths(line, 0, 1, 3);
        for (double t : {0.5, 1.0, 2.0})
            CHECK(kernel_value(profile, 3, t, law) == doctest::Approx(erlang_cdf(3, t)).epsilon(1e-12));
    }

    SUBCASE("two paths of lengths 1 and 2 at t=1")
    {
        // frozen: 1 - (1 - F(1,1)) (1 - F(2,1)); cross-checked by the MC
        // minimum of two independent path traversals below
        Graph::Builder b(false, 3);
        b.add_edge(0, 1).add_edge(1, 2).add_edge(0, 2);
        const auto profile = k_disjoint_shortest_paths(b.build(), 0, 2, 3);
        REQUIRE(profile.num_paths(2) == 2);
        CHECK(kernel_value(profile, 2, 1.0, law) ==
              doctest::Approx(0.7293294335267746).epsilon(1e-12));

        Rng rng(77);
        std::size_t hits = 0;
        const std::size_t samples = 200000;
        for (std::size_t i = 0; i < samples; ++i) {
            const double direct = rng.next_exponential(1.0);
            const double relay = rng.next_exponential(1.0) + rng.next_exponential(1.0);
            if (std::min(direct, relay) <= 1.0)
                ++hits;
        }
        const double mc = static_cast<double>(hits) / static_cast<double>(samples);
        CHECK(std::abs(mc - 0.7293294335267746) <
              4.0 * binom_sigma(0.7293294335267746, static_cast<double>(samples)));
    }

    SUBCASE("unreachable target sits at the floor")
    {
        Graph::Builder b(false, 3);
        b.add_edge(0, 1);
        b.ensure_node(2);
        const auto profile = k_disjoint_shortest_paths(b.build(), 0, 2, 3);
        CHECK(kernel_value(profile, 2, 5.0, law) == kProbFloor);
    }

    SUBCASE("monotone in t and in the number of paths")
    {
        Graph::Builder b(false, 4);
        b.add_edge(0, 1).add_edge(1, 3).add_edge(0, 2).add_edge(2, 3).add_edge(0, 3);
        const Graph g = b.build();
        double prev_t = 0.0;
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            const auto profile = k_disjoint_shortest_paths(g, 0, 3, 3);
            const double p = kernel_value(profile, 3, t, law);
            CHECK(p >= prev_t);
            prev_t = p;
        }
        double prev_k = 0.0;
        for (int k = 1; k <= 3; ++k) {
            const auto profile = k_disjoint_shortest_paths(g, 0, k, 3);
            const double p = kernel_value(profile, 3, 1.0, law);
            CHECK(p >= prev_k - 1e-15);
            prev_k = p;
        }
    }
}

TEST_CASE("kernel_row")
{
    const Graph line = gen_line(4);
    const DiffusionLaw law = DiffusionLaw::erlang();

    SUBCASE("line graph row carries the Erlang ladder")
    {
        for (double t : {0.5, 1.0, 2.0}) {
            const auto row = kernel_row(line, 0, t, 1, law, 5);
            CHECK(row.p[0] == kProbCap);
            CHECK(row.p[1] == doctest::Approx(erlang_cdf(1, t)).epsilon(1e-12));
            CHECK(row.p[2] == doctest::Approx(erlang_cdf(2, t)).epsilon(1e-12));
            CHECK(row.p[3] == doctest::Approx(erlang_cdf(3, t)).epsilon(1e-12));
        }
    }

    SUBCASE("t=0 floors every non-source entry")
    {
        const auto row = kernel_row(line, 0, 0.0, 1, law, 5);
        CHECK(row.p[0] == kProbCap);
        for (int j = 1; j < 4; ++j)
            CHECK(row.p[static_cast<std::size_t>(j)] == kProbFloor);
    }

    SUBCASE("large t saturates connected entries")
    {
        const auto row = kernel_row(line, 0, 1000.0, 1, law, 5);
        for (int j = 0; j < 4; ++j)
            CHECK(row.p[static_cast<std::size_t>(j)] >= 1.0 - 1e-6);
    }

    SUBCASE("clamp bounds hold on random graphs")
    {
        const Graph g = gen_erdos_renyi(40, 0.05, 9);
        for (double t : {0.0, 0.5, 3.0, 50.0}) {
            const auto row = kernel_row(g, 2, t, 2, law, 21);
            for (double p : row.p) {
                CHECK(p >= kProbFloor);
                CHECK(p <= kProbCap);
            }
        }
    }

    SUBCASE("line-network likelihood products reproduce the closed forms")
    {
        // independent symbolic evaluation of the three infection-pattern
        // probabilities for y = (1,1,1,0)
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            const double f1 = 1.0 - std::exp(-t);
            const double f2 = 1.0 - std::exp(-t) * (1.0 + t);
            const double f3 = 1.0 - std::exp(-t) * (1.0 + t + t * t / 2.0);
            const auto row0 = kernel_row(line, 0, t, 1, law, 5);
            const auto row1 = kernel_row(line, 1, t, 1, law, 5);
            const auto row2 = kernel_row(line, 2, t, 1, law, 5);
            const double p0 = row0.p[1] * row0.p[2] * (1.0 - row0.p[3]);
            const double p1 = row1.p[0] * row1.p[2] * (1.0 - row1.p[3]);
            const double p2 = row2.p[0] * row2.p[1] * (1.0 - row2.p[3]);
            CHECK(p0 == doctest::Approx(f1 * f2 * (1.0 - f3)).epsilon(1e-12));
            CHECK(p1 == doctest::Approx(f1 * f1 * (1.0 - f2)).epsilon(1e-12));
            CHECK(p2 == doctest::Approx(f1 * f2 * (1.0 - f1)).epsilon(1e-12));
        }
    }

    SUBCASE("weighted law uses hypoexponential path CDFs")
    {
        Graph::Builder b(false, 3);
        b.add_edge(0, 1, 1.0).add_edge(1, 2, 2.0);
        const auto row = kernel_row(b.build(), 0, 1.0, 1, DiffusionLaw::weighted(), 3);
        CHECK(row.p[2] == doctest::Approx(0.39957640089372804).epsilon(1e-12));
    }

    SUBCASE("edge mixture expands into a mixture of hypoexponentials")
    {
        Graph::Builder b(false, 3);
        b.add_edge(0, 1, 1.0).add_edge(1, 2, 2.0);
        DiffusionLaw law2 = DiffusionLaw::weighted();
        law2.add_edge_mixture(0, 1, 0.25, 1.0, 3.0);
        const auto row = kernel_row(b.build(), 0, 1.0, 1, law2, 3);
        const double expect = 0.25 * phase_type_cdf(PhaseTypeLaw::chain({1.0, 2.0}), 1.0) +
                              0.75 * phase_type_cdf(PhaseTypeLaw::chain({3.0, 2.0}), 1.0);
        CHECK(row.p[2] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("multi_source_prob")
{
    KernelRow a;
    a.source = 0;
    a.p = {kProbCap, 0.5, 0.2};
    KernelRow b;
    b.source = 1;
    b.p = {0.5, kProbCap, 0.3};

    SUBCASE("single source is the identity")
    {
        CHECK(multi_source_prob({a}, 2) == doctest::Approx(0.2));
    }

    SUBCASE("two p=0.5 sources give 0.75")
    {
        KernelRow c = a, d = b;
        c.p[2] = 0.5;
        d.p[2] = 0.5;
        CHECK(multi_source_prob({c, d}, 2) == doctest::Approx(0.75));
    }

    SUBCASE("bounded by the max and the union bound")
    {
        Rng rng(4);
        for (int trial = 0; trial < 200; ++trial) {
            KernelRow r1, r2, r3;
            for (int j = 0; j < 5; ++j) {
                r1.p.push_back(clamp_prob(rng.next_unit()));
                r2.p.push_back(clamp_prob(rng.next_unit()));
                r3.p.push_back(clamp_prob(rng.next_unit()));
            }
            for (NodeId j = 0; j < 5; ++j) {
                const double p = multi_source_prob({r1, r2, r3}, j);
                const double top = std::max({r1.p[static_cast<std::size_t>(j)],
                                             r2.p[static_cast<std::size_t>(j)],
                                             r3.p[static_cast<std::size_t>(j)]});
                const double sum = r1.p[static_cast<std::size_t>(j)] +
                                   r2.p[static_cast<std::size_t>(j)] +
                                   r3.p[static_cast<std::size_t>(j)];
                CHECK(p >= top - 1e-12);
                CHECK(p <= std::min(1.0, sum) + 1e-12);
            }
        }
    }
}
