#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/paths.hpp"

namespace netinf {

// Probability floor for unreachable/disconnected pairs and cap keeping
// log(1-p) finite.
constexpr double kProbFloor = 1e-6;
constexpr double kProbCap = 1.0 - 1e-12;

inline double clamp_prob(double p)
{
    if (p < kProbFloor)
        return kProbFloor;
    if (p > kProbCap)
        return kProbCap;
    return p;
}

// ---- Erlang (homogeneous) path law ----

struct ErlangLaw {
    double rate = 1.0;
};

namespace detail {

// Survival of an Erlang(l, rate) variable at t: the first l Poisson(rate*t)
// terms. Exact finite series; switches to per-term log evaluation with
// compensated summation once rate*t would overflow the running product.
inline double erlang_survival(int shape, double t, double rate)
{
    if (shape <= 0)
        return 0.0;
    if (t <= 0.0)
        return 1.0;
    const double x = rate * t;
    if (x <= 700.0) {
        double term = std::exp(-x);
        double sum = term;
        for (int k = 1; k < shape; ++k) {
            term *= x / k;
            sum += term;
        }
        return sum < 1.0 ? sum : 1.0;
    }
    double sum = 0.0, carry = 0.0;
    for (int k = 0; k < shape; ++k) {
        const double term = std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
        const double y = term - carry;
        const double s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    return sum < 1.0 ? sum : 1.0;
}

} // namespace detail

// F(l, t): probability that a sum of l iid exponential(rate) holding times is
// at most t. l = 0 is the degenerate instant arrival.
inline double erlang_cdf(int shape, double t, double rate = 1.0)
{
    if (shape < 0)
        throw std::invalid_argument("erlang shape must be >= 0");
    if (shape == 0)
        return 1.0;
    return 1.0 - detail::erlang_survival(shape, t, rate);
}

inline double erlang_sf(int shape, double t, double rate = 1.0)
{
    if (shape == 0)
        return 0.0;
    return detail::erlang_survival(shape, t, rate);
}

// F(l, t) and the survival for every l in 0..max_shape at a fixed (t, rate);
// the incremental series makes a whole table as cheap as one evaluation.
class ErlangCdfTable {
  public:
    ErlangCdfTable(double t, double rate, int max_shape)
    {
        sf_.resize(static_cast<std::size_t>(std::max(max_shape, 0)) + 1);
        sf_[0] = 0.0;
        if (max_shape < 1)
            return;
        const double x = rate * std::max(t, 0.0);
        if (x <= 700.0 && t > 0.0) {
            double term = std::exp(-x);
            double sum = term;
            sf_[1] = sum < 1.0 ? sum : 1.0;
            for (int l = 2; l <= max_shape; ++l) {
                term *= x / (l - 1);
                sum += term;
                sf_[static_cast<std::size_t>(l)] = sum < 1.0 ? sum : 1.0;
            }
        } else {
            for (int l = 1; l <= max_shape; ++l)
                sf_[static_cast<std::size_t>(l)] = detail::erlang_survival(l, t, rate);
        }
    }

    double sf(int shape) const { return sf_[static_cast<std::size_t>(shape)]; }
    double cdf(int shape) const { return 1.0 - sf_[static_cast<std::size_t>(shape)]; }
    int max_shape() const { return static_cast<int>(sf_.size()) - 1; }

  private:
    std::vector<double> sf_;
};

// ---- phase-type (heterogeneous) path law ----

// Absorption-time law of a bidiagonal transient chain: one state per edge,
// exit rate = that edge's rate. A mixture holds several rate sequences with
// probabilities summing to 1.
struct PhaseTypeLaw {
    struct Component {
        double weight = 1.0;
        std::vector<double> rates;
    };
    std::vector<Component> components;

    static PhaseTypeLaw chain(std::vector<double> rates)
    {
        PhaseTypeLaw law;
        law.components.push_back({1.0, std::move(rates)});
        return law;
    }

    bool is_mixture() const { return components.size() > 1; }

    void validate() const
    {
        if (components.empty())
            throw std::invalid_argument("phase-type law needs at least one component");
        double total = 0.0;
        for (const auto& c : components) {
            if (c.weight < 0.0 || c.weight > 1.0)
                throw std::invalid_argument("mixture weight outside [0,1]");
            total += c.weight;
            for (double r : c.rates)
                if (!(r > 0.0) || !std::isfinite(r))
                    throw std::invalid_argument("phase-type rates must be positive and finite");
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("mixture weights must sum to 1, off by " + format_double(total - 1.0));
    }
};

namespace detail {

// Closed-form hypoexponential CDF by partial fractions; valid for pairwise
// distinct rates only. Fails (returns NaN) when the expansion is too
// ill-conditioned to trust, e.g. long chains of clustered rates.
inline double hypoexp_cdf_distinct(std::span<const double> rates, double t)
{
    const int l = static_cast<int>(rates.size());
    double acc = 0.0;
    double magnitude = 0.0;
    for (int i = 0; i < l; ++i) {
        double coeff = 1.0;
        for (int j = 0; j < l; ++j)
            if (j != i)
                coeff *= rates[static_cast<std::size_t>(j)] /
                         (rates[static_cast<std::size_t>(j)] - rates[static_cast<std::size_t>(i)]);
        magnitude = std::max(magnitude, std::abs(coeff));
        acc += coeff * std::exp(-rates[static_cast<std::size_t>(i)] * t);
    }
    if (!(magnitude < 1e12))
        return std::numeric_limits<double>::quiet_NaN();
    double f = 1.0 - acc;
    if (f < 0.0)
        f = 0.0;
    if (f > 1.0)
        f = 1.0;
    return f;
}

// Uniformization fallback for repeated or near-equal rates. Truncation keeps
// the neglected Poisson tail below 1e-12.
inline double hypoexp_cdf_uniformized(std::span<const double> rates, double t)
{
    const int l = static_cast<int>(rates.size());
    double big = 0.0;
    for (double r : rates)
        big = std::max(big, r);
    const double x = big * t;

    std::vector<double> v(static_cast<std::size_t>(l), 0.0);
    v[0] = 1.0;
    double absorbed = 0.0;
    double cumw = 0.0;
    double result = 0.0;
    double w = x <= 700.0 ? std::exp(-x) : 0.0;
    const int m_max = static_cast<int>(x + 12.0 * std::sqrt(x + 1.0) + 60.0);
    for (int m = 0; m <= m_max; ++m) {
        if (x > 700.0)
            w = std::exp(-x + m * std::log(x) - std::lgamma(m + 1.0));
        result += w * absorbed;
        cumw += w;
        if (1.0 - cumw < 1e-13 && m >= static_cast<int>(x)) {
            result += (1.0 - cumw) * absorbed; // bound the tail from below
            break;
        }
        // one uniformized jump of the bidiagonal chain
        const double out_last =
            v[static_cast<std::size_t>(l - 1)] * (rates[static_cast<std::size_t>(l - 1)] / big);
        for (int i = l - 1; i >= 1; --i)
            v[static_cast<std::size_t>(i)] =
                v[static_cast<std::size_t>(i)] * (1.0 - rates[static_cast<std::size_t>(i)] / big) +
                v[static_cast<std::size_t>(i - 1)] * (rates[static_cast<std::size_t>(i - 1)] / big);
        v[0] *= 1.0 - rates[0] / big;
        absorbed += out_last;
        if (x <= 700.0)
            w *= x / (m + 1);
    }
    if (result < 0.0)
        result = 0.0;
    if (result > 1.0)
        result = 1.0;
    return result;
}

inline bool rates_well_separated(std::span<const double> rates)
{
    const int l = static_cast<int>(rates.size());
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j) {
            const double a = rates[static_cast<std::size_t>(i)];
            const double b = rates[static_cast<std::size_t>(j)];
            if (std::abs(a - b) < 1e-6 * std::max(a, b))
                return false;
        }
    return true;
}

inline double hypoexp_cdf(std::span<const double> rates, double t)
{
    if (rates.empty())
        return 1.0; // zero-length path: instant arrival
    if (t <= 0.0)
        return 0.0;
    if (rates.size() == 1)
        return -std::expm1(-rates[0] * t);
    if (rates_well_separated(rates)) {
        const double f = hypoexp_cdf_distinct(rates, t);
        if (!std::isnan(f))
            return f;
    }
    return hypoexp_cdf_uniformized(rates, t);
}

} // namespace detail

inline double phase_type_cdf(const PhaseTypeLaw& law, double t)
{
    law.validate();
    double f = 0.0;
    for (const auto& c : law.components)
        f += c.weight * detail::hypoexp_cdf(c.rates, t);
    return f;
}

// ---- kernel law selector ----

// Chooses the per-path traversal law: homogeneous Erlang over hop counts, or
// heterogeneous hypoexponential over per-edge rates (graph weights). Edge
// mixtures model edges whose rate is itself random with two outcomes.
class DiffusionLaw {
  public:
    struct EdgeMixture {
        double p0;
        double rate0;
        double rate1;
        double mean_length() const { return p0 / rate0 + (1.0 - p0) / rate1; }
    };

    static DiffusionLaw erlang(double rate = 1.0)
    {
        if (!(rate > 0.0))
            throw std::invalid_argument("erlang rate must be positive");
        DiffusionLaw law;
        law.heterogeneous_ = false;
        law.rate_ = rate;
        return law;
    }

    static DiffusionLaw weighted()
    {
        DiffusionLaw law;
        law.heterogeneous_ = true;
        return law;
    }

    bool heterogeneous() const { return heterogeneous_; }
    double rate() const { return rate_; }

    DiffusionLaw& add_edge_mixture(NodeId u, NodeId v, double p0, double rate0, double rate1)
    {
        if (!heterogeneous_)
            throw std::invalid_argument("edge mixtures require the weighted law");
        if (p0 < 0.0 || p0 > 1.0 || !(rate0 > 0.0) || !(rate1 > 0.0))
            throw std::invalid_argument("bad edge mixture parameters");
        mixtures_[{u, v}] = {p0, rate0, rate1};
        return *this;
    }

    bool has_mixtures() const { return !mixtures_.empty(); }

    const EdgeMixture* mixture_for(NodeId u, NodeId v) const
    {
        auto it = mixtures_.find({u, v});
        if (it != mixtures_.end())
            return &it->second;
        it = mixtures_.find({v, u});
        return it == mixtures_.end() ? nullptr : &it->second;
    }

    // Path searches for the weighted law use reciprocal rates as lengths;
    // mixture edges contribute their mean traversal time.
    Graph search_graph(const Graph& g) const
    {
        if (!heterogeneous_ || mixtures_.empty())
            return g;
        Graph::Builder b(g.directed(), g.n());
        for (NodeId u = 0; u < g.n(); ++u) {
            b.ensure_node(u);
            for (const Edge& e : g.neighbors(u)) {
                if (!g.directed() && e.to < u)
                    continue;
                const EdgeMixture* mix = mixture_for(u, e.to);
                const double w = mix ? 1.0 / mix->mean_length() : e.weight;
                b.add_edge(u, e.to, w);
            }
        }
        return b.build();
    }

    PathOptions path_options(bool keep_edges = false) const
    {
        PathOptions opts;
        opts.use_weights = heterogeneous_;
        opts.keep_edges = keep_edges || has_mixtures();
        return opts;
    }

  private:
    bool heterogeneous_ = false;
    double rate_ = 1.0;
    std::map<std::pair<NodeId, NodeId>, EdgeMixture> mixtures_;
};

namespace detail {

// Per-path CDF for the weighted law; expands edge mixtures into a mixture of
// hypoexponential components.
inline double weighted_path_cdf(const Graph& g, const DiffusionLaw& law,
                                const PathLengthProfile& profile, NodeId target, int round,
                                std::int32_t flat_index, double t)
{
    if (!law.has_mixtures()) {
        const auto rates = profile.rates_for_path(flat_index);
        return hypoexp_cdf(rates, t);
    }
    if (profile.path_edges.empty())
        throw std::logic_error("mixture law requires a profile built with edge retention");
    const auto& path = profile.path_edges[static_cast<std::size_t>(target)][static_cast<std::size_t>(round)];
    PhaseTypeLaw ph;
    ph.components.push_back({1.0, {}});
    for (const auto& [u, v] : path) {
        const DiffusionLaw::EdgeMixture* mix = law.mixture_for(u, v);
        if (mix == nullptr) {
            const double w = edge_weight_of(g, u, v);
            for (auto& c : ph.components)
                c.rates.push_back(w);
        } else {
            std::vector<PhaseTypeLaw::Component> expanded;
            expanded.reserve(ph.components.size() * 2);
            for (auto& c : ph.components) {
                PhaseTypeLaw::Component a = c, b = c;
                a.weight *= mix->p0;
                a.rates.push_back(mix->rate0);
                b.weight *= 1.0 - mix->p0;
                b.rates.push_back(mix->rate1);
                expanded.push_back(std::move(a));
                expanded.push_back(std::move(b));
            }
            ph.components = std::move(expanded);
        }
    }
    return phase_type_cdf(ph, t);
}

} // namespace detail

// ---- the path-based kernel ----

// p_{i,j}(t) for one profile entry: 1 minus the product of per-path survival
// probabilities; unreachable targets sit at the floor.
inline double kernel_value(const PathLengthProfile& profile, NodeId target, double t,
                           const DiffusionLaw& law, const Graph* g = nullptr)
{
    const int paths = profile.num_paths(target);
    if (paths == 0)
        return kProbFloor;
    double survival = 1.0;
    if (!law.heterogeneous()) {
        for (double len : profile.lengths_for(target))
            survival *= erlang_sf(static_cast<int>(std::lround(len)), t, law.rate());
    } else {
        const std::int32_t base = profile.offset[static_cast<std::size_t>(target)];
        for (int r = 0; r < paths; ++r) {
            double f;
            if (law.has_mixtures()) {
                if (g == nullptr)
                    throw std::logic_error("mixture law needs the graph to evaluate kernel values");
                f = detail::weighted_path_cdf(*g, law, profile, target, r, base + r, t);
            } else {
                f = detail::hypoexp_cdf(profile.rates_for_path(base + r), t);
            }
            survival *= 1.0 - f;
        }
    }
    return clamp_prob(1.0 - survival);
}

struct KernelRow {
    NodeId source = -1;
    double t = 0.0;
    std::vector<double> p; // clamped to [kProbFloor, kProbCap]
};

// Row of the kernel matrix from a precomputed profile; reusable across t.
inline KernelRow kernel_row(const PathLengthProfile& profile, double t, const DiffusionLaw& law,
                            const Graph* g = nullptr)
{
    const NodeId n = profile.n();
    KernelRow row;
    row.source = profile.source;
    row.t = t;
    row.p.assign(static_cast<std::size_t>(n), kProbFloor);
    if (!law.heterogeneous()) {
        int max_len = 0;
        for (double len : profile.length)
            max_len = std::max(max_len, static_cast<int>(std::lround(len)));
        const ErlangCdfTable table(t, law.rate(), max_len);
        for (NodeId j = 0; j < n; ++j) {
            if (j == profile.source) {
                row.p[static_cast<std::size_t>(j)] = kProbCap;
                continue;
            }
            const int paths = profile.num_paths(j);
            if (paths == 0)
                continue;
            double survival = 1.0;
            for (double len : profile.lengths_for(j))
                survival *= table.sf(static_cast<int>(std::lround(len)));
            row.p[static_cast<std::size_t>(j)] = clamp_prob(1.0 - survival);
        }
        return row;
    }
    for (NodeId j = 0; j < n; ++j)
        row.p[static_cast<std::size_t>(j)] =
            j == profile.source ? kProbCap : kernel_value(profile, j, t, law, g);
    return row;
}

// Convenience composition over the disjoint-paths computation.
inline KernelRow kernel_row(const Graph& g, NodeId source, double t, int k, const DiffusionLaw& law,
                            std::uint64_t seed)
{
    const Graph search = law.search_graph(g);
    const auto profile = k_disjoint_shortest_paths(search, source, k, seed, law.path_options());
    return kernel_row(profile, t, law, &g);
}

// Probability that node j is infected by at least one of several sources.
inline double multi_source_prob(const std::vector<KernelRow>& rows, NodeId j)
{
    if (rows.empty())
        throw std::invalid_argument("multi_source_prob needs at least one source row");
    double survival = 1.0;
    for (const KernelRow& row : rows)
        survival *= 1.0 - row.p[static_cast<std::size_t>(j)];
    return clamp_prob(1.0 - survival);
}

} // namespace netinf
