#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "multicascade/analytics.hpp"
#include "multicascade/coordination_game.hpp"
#include "multicascade/multiplex_graph.hpp"
#include "multicascade/rng.hpp"

namespace multicascade {

enum class SweptParam { seed_fraction, layer_count, edge_probability };

inline const char* swept_param_name(SweptParam p) {
    switch (p) {
    case SweptParam::seed_fraction: return "seed_fraction";
    case SweptParam::layer_count: return "layer_count";
    case SweptParam::edge_probability: return "edge_probability";
    }
    return "?";
}

/// Qualitative regime of the final adoption level as the swept parameter
/// grows: partial adoption, full epidemic of A, falling back toward the
/// seeds, and seeds-only.
enum class PhaseLabel { adopting, epidemic_a, backing_to_b, epidemic_b };

inline const char* phase_name(PhaseLabel p) {
    switch (p) {
    case PhaseLabel::adopting: return "adopting";
    case PhaseLabel::epidemic_a: return "epidemic_A";
    case PhaseLabel::backing_to_b: return "backing_to_B";
    case PhaseLabel::epidemic_b: return "epidemic_B";
    }
    return "?";
}

/// A parameter sweep with replication. Payoff lists may be given per layer
/// or as single scalars replicated across layers; layer-count sweeps
/// require scalars.
struct SweepSpec {
    std::uint32_t num_nodes = 500;
    double edge_prob = 0.1;
    std::uint32_t num_layers = 2;
    std::vector<double> payoff_a{2.0};
    std::vector<double> payoff_b{1.0};
    double seed_fraction = 0.25;
    Rule rule = Rule::sum;
    SweptParam swept = SweptParam::seed_fraction;
    std::vector<double> grid;
    std::uint32_t samples = 20;
    std::uint32_t max_steps = 50;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (grid.empty()) throw std::invalid_argument("grid must be non-empty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw std::invalid_argument("grid must be strictly increasing");
        if (samples < 1) throw std::invalid_argument("samples must be >= 1");
        if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    }
};

/// Aggregates for one grid point.
struct SweepPoint {
    double value = 0.0;
    double mean_final_fraction = 0.0;
    double std_final_fraction = 0.0;  // sample std, ddof = 1
    std::uint32_t samples = 0;
    double mean_steps = 0.0;
    // complete_cascade, fixed_point, step_limit
    std::array<std::uint32_t, 3> status_counts{0, 0, 0};
    std::optional<PhaseLabel> phase;
    std::optional<double> analytic_bound;
};

struct SweepResult {
    std::string param_name;
    std::vector<SweepPoint> points;
};

/// Worker count: hardware concurrency by default, capped by the
/// MULTICASCADE_THREADS environment variable when set (0 means auto).
inline unsigned resolve_thread_count() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MULTICASCADE_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && cap > 0)
            threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    return threads;
}

/// Run fn(0) .. fn(count-1) across a pool of workers. Each index must be an
/// independent work item; completion order is unspecified.
inline void parallel_for_index(std::size_t count,
                               const std::function<void(std::size_t)>& fn) {
    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count;
                 i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

namespace detail {

inline PayoffVector payoffs_for_layers(const SweepSpec& spec, std::uint32_t l) {
    PayoffVector pay;
    if (spec.payoff_a.size() == 1 && spec.payoff_b.size() == 1)
        pay = uniform_payoffs(spec.payoff_a[0], spec.payoff_b[0], l);
    else
        pay = {spec.payoff_a, spec.payoff_b};
    pay.validate();
    if (pay.num_layers() != l)
        throw std::invalid_argument("payoff lists do not match layer count");
    return pay;
}

struct ReplicateStats {
    double final_fraction = 0.0;
    std::uint32_t steps = 0;
    TerminalStatus status = TerminalStatus::step_limit;
};

// One (network, seed set, run) replicate. All randomness is derived from
// item_seed, which the sweeps key by (rng_seed, grid index, replicate
// index), so scheduling never changes results.
inline ReplicateStats one_replicate(std::uint32_t n, double p, std::uint32_t l,
                                    const PayoffVector& pay, double q0,
                                    Rule rule, std::uint32_t max_steps,
                                    std::uint64_t item_seed) {
    GenParams gp{n, l, p, rng::derive(item_seed, rng::kTagNet)};
    const auto net = generate_er_multiplex(gp);
    const auto seeds = select_seeds(n, q0, rng::derive(item_seed, rng::kTagSeeds));
    const auto trace = run(net, seeds, pay, rule, max_steps,
                           rng::derive(item_seed, rng::kTagRun));
    return {static_cast<double>(trace.adopters_per_step.back()) / n,
            trace.steps_run, trace.status};
}

inline SweepPoint aggregate(double value, const std::vector<ReplicateStats>& reps) {
    SweepPoint pt;
    pt.value = value;
    pt.samples = static_cast<std::uint32_t>(reps.size());
    double sum = 0.0, sum_steps = 0.0;
    for (const auto& r : reps) {
        sum += r.final_fraction;
        sum_steps += r.steps;
        pt.status_counts[static_cast<std::size_t>(r.status)] += 1;
    }
    pt.mean_final_fraction = sum / pt.samples;
    pt.mean_steps = sum_steps / pt.samples;
    if (pt.samples > 1) {
        double ss = 0.0;
        for (const auto& r : reps) {
            const double d = r.final_fraction - pt.mean_final_fraction;
            ss += d * d;
        }
        pt.std_final_fraction = std::sqrt(ss / (pt.samples - 1));
    }
    return pt;
}

// Shared sweep driver: per grid point g and replicate r, run one replicate
// with parameters chosen by `configure(g)`.
struct PointParams {
    std::uint32_t n;
    double p;
    std::uint32_t l;
    PayoffVector pay;
    double q0;
};

inline SweepResult run_sweep(const SweepSpec& spec,
                             const std::function<PointParams(double)>& configure) {
    spec.validate();
    const std::size_t points = spec.grid.size();
    const std::size_t total = points * spec.samples;
    std::vector<ReplicateStats> stats(total);
    std::vector<PointParams> params;
    params.reserve(points);
    for (double v : spec.grid) params.push_back(configure(v));
    parallel_for_index(total, [&](std::size_t idx) {
        const std::size_t g = idx / spec.samples;
        const std::size_t r = idx % spec.samples;
        const auto& pp = params[g];
        const std::uint64_t item_seed =
            rng::derive(spec.rng_seed, rng::kTagItem, g, r);
        stats[idx] = one_replicate(pp.n, pp.p, pp.l, pp.pay, pp.q0, spec.rule,
                                   spec.max_steps, item_seed);
    });
    SweepResult result;
    result.param_name = swept_param_name(spec.swept);
    result.points.reserve(points);
    for (std::size_t g = 0; g < points; ++g) {
        std::vector<ReplicateStats> reps(stats.begin() + g * spec.samples,
                                         stats.begin() + (g + 1) * spec.samples);
        result.points.push_back(aggregate(spec.grid[g], reps));
    }
    return result;
}

}  // namespace detail

/// Sweep the seed fraction; each grid point also carries the analytic
/// lower bound evaluated at the step budget with alpha = P(l, q0, u).
inline SweepResult sweep_seed_fraction(const SweepSpec& spec) {
    if (spec.swept != SweptParam::seed_fraction)
        throw std::invalid_argument("spec does not sweep seed_fraction");
    auto result = detail::run_sweep(spec, [&](double q0) {
        auto pay = detail::payoffs_for_layers(spec, spec.num_layers);
        if (!(q0 >= 0.0 && q0 <= 1.0))
            throw std::invalid_argument("seed-fraction grid must lie in [0, 1]");
        return detail::PointParams{spec.num_nodes, spec.edge_prob,
                                   spec.num_layers, std::move(pay), q0};
    });
    for (auto& pt : result.points) {
        AnalyticParams ap{spec.num_nodes, spec.edge_prob, spec.num_layers,
                          detail::payoffs_for_layers(spec, spec.num_layers),
                          pt.value};
        const double alpha = adoption_probability(ap, pt.value);
        pt.analytic_bound =
            lower_bound_curve(pt.value, alpha, spec.max_steps).values.back();
    }
    return result;
}

/// Sweep the layer count; scalar payoffs are replicated onto each layer
/// count on the grid.
inline SweepResult sweep_layers(const SweepSpec& spec) {
    if (spec.swept != SweptParam::layer_count)
        throw std::invalid_argument("spec does not sweep layer_count");
    if (spec.payoff_a.size() != 1 || spec.payoff_b.size() != 1)
        throw std::invalid_argument("layer-count sweeps need scalar payoffs");
    return detail::run_sweep(spec, [&](double lv) {
        const double rounded = std::floor(lv);
        if (lv != rounded || lv < 1.0)
            throw std::invalid_argument("layer grid values must be integers >= 1");
        const auto l = static_cast<std::uint32_t>(lv);
        return detail::PointParams{spec.num_nodes, spec.edge_prob, l,
                                   detail::payoffs_for_layers(spec, l),
                                   spec.seed_fraction};
    });
}

/// Classify one grid point's mean final adopter count. The two epidemic
/// regimes are recognized from the count alone; mixed points are split by
/// sweep position — before the first full-epidemic point they are rising
/// ("adopting"), after it they are falling ("backing_to_B").
inline PhaseLabel classify_phase(double mean_final_count,
                                 std::uint32_t seed_count, std::uint32_t n,
                                 bool after_first_epidemic_a) {
    if (!(mean_final_count >= static_cast<double>(seed_count) - 1e-9 &&
          mean_final_count <= static_cast<double>(n) + 1e-9))
        throw std::invalid_argument(
            "mean final count must lie in [seed_count, n]");
    if (mean_final_count >= 0.99 * n) return PhaseLabel::epidemic_a;
    if (mean_final_count <= seed_count + 0.01 * n) return PhaseLabel::epidemic_b;
    return after_first_epidemic_a ? PhaseLabel::backing_to_b
                                  : PhaseLabel::adopting;
}

/// Sweep the edge probability and attach a phase label per grid point.
inline SweepResult sweep_edge_probability(const SweepSpec& spec) {
    if (spec.swept != SweptParam::edge_probability)
        throw std::invalid_argument("spec does not sweep edge_probability");
    auto result = detail::run_sweep(spec, [&](double p) {
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("edge-probability grid must lie in (0, 1]");
        return detail::PointParams{spec.num_nodes, p, spec.num_layers,
                                   detail::payoffs_for_layers(spec, spec.num_layers),
                                   spec.seed_fraction};
    });
    const auto seed_count = static_cast<std::uint32_t>(
        std::floor(spec.seed_fraction * spec.num_nodes + 0.5));
    bool seen_epidemic_a = false;
    for (auto& pt : result.points) {
        const double mean_count = pt.mean_final_fraction * spec.num_nodes;
        pt.phase = classify_phase(mean_count, seed_count, spec.num_nodes,
                                  seen_epidemic_a);
        if (*pt.phase == PhaseLabel::epidemic_a) seen_epidemic_a = true;
    }
    return result;
}

/// Final-fraction curves for the three decision rules over a seed-fraction
/// grid, on identical networks and seed sets (paired replicates; only the
/// run stream differs per rule).
struct CompareResult {
    std::array<SweepResult, 3> by_rule;  // indexed by Rule

    SweepResult& for_rule(Rule r) { return by_rule[static_cast<std::size_t>(r)]; }
    const SweepResult& for_rule(Rule r) const {
        return by_rule[static_cast<std::size_t>(r)];
    }
};

inline CompareResult compare_strategies(const SweepSpec& spec) {
    if (spec.swept != SweptParam::seed_fraction)
        throw std::invalid_argument("compare sweeps the seed fraction");
    spec.validate();
    const auto pay = detail::payoffs_for_layers(spec, spec.num_layers);
    for (double q0 : spec.grid)
        if (!(q0 >= 0.0 && q0 <= 1.0))
            throw std::invalid_argument("seed-fraction grid must lie in [0, 1]");

    constexpr std::array<Rule, 3> kRules{Rule::sum, Rule::dominant, Rule::random};
    const std::size_t points = spec.grid.size();
    const std::size_t total = points * spec.samples;
    std::vector<std::array<detail::ReplicateStats, 3>> stats(total);
    parallel_for_index(total, [&](std::size_t idx) {
        const std::size_t g = idx / spec.samples;
        const std::size_t r = idx % spec.samples;
        const std::uint64_t item_seed =
            rng::derive(spec.rng_seed, rng::kTagItem, g, r);
        GenParams gp{spec.num_nodes, spec.num_layers, spec.edge_prob,
                     rng::derive(item_seed, rng::kTagNet)};
        const auto net = generate_er_multiplex(gp);
        const auto seeds = select_seeds(spec.num_nodes, spec.grid[g],
                                        rng::derive(item_seed, rng::kTagSeeds));
        for (std::size_t k = 0; k < kRules.size(); ++k) {
            const auto trace = run(net, seeds, pay, kRules[k], spec.max_steps,
                                   rng::derive(item_seed, rng::kTagRun, k));
            stats[idx][k] = {static_cast<double>(trace.adopters_per_step.back()) /
                                 spec.num_nodes,
                             trace.steps_run, trace.status};
        }
    });
    CompareResult result;
    for (std::size_t k = 0; k < kRules.size(); ++k) {
        auto& sr = result.by_rule[k];
        sr.param_name = rule_name(kRules[k]);
        for (std::size_t g = 0; g < points; ++g) {
            std::vector<detail::ReplicateStats> reps;
            reps.reserve(spec.samples);
            for (std::size_t r = 0; r < spec.samples; ++r)
                reps.push_back(stats[g * spec.samples + r][k]);
            sr.points.push_back(detail::aggregate(spec.grid[g], reps));
        }
    }
    return result;
}

/// Default grids used by the CLI.
inline std::vector<double> default_seed_fraction_grid() {
    return {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
}

inline std::vector<double> default_layer_grid() { return {1, 2, 3, 4}; }

/// 25 points over (0, 0.5], spaced to resolve all four adoption phases at
/// the default parameters (n=500, l=2, a=2, b=1, q0=0.25).
inline std::vector<double> default_edge_probability_grid() {
    return {0.001, 0.0015, 0.002, 0.003,
            0.008, 0.01,   0.02,  0.03, 0.04, 0.05, 0.06, 0.07, 0.09, 0.11,
            0.13,  0.14,   0.15,  0.16,
            0.20,  0.25,   0.30,  0.35, 0.40, 0.45, 0.50};
}

}  // namespace multicascade
