#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "multicascade/multiplex_graph.hpp"
#include "multicascade/rng.hpp"

namespace multicascade {

enum class Strategy : std::uint8_t { B = 0, A = 1 };

/// Decision rule applied by a node each round: total payoff across layers,
/// per-layer payoff in every layer, or payoff in one uniformly drawn layer.
enum class Rule { sum, dominant, random };

inline const char* rule_name(Rule r) {
    switch (r) {
    case Rule::sum: return "sum";
    case Rule::dominant: return "dominant";
    case Rule::random: return "random";
    }
    return "?";
}

/// Per-layer payoffs: a_i for an A–A edge, b_i for a B–B edge, 0 for a
/// mismatch. The sum a_i + b_i is the same on every layer.
struct PayoffVector {
    std::vector<double> a;
    std::vector<double> b;

    std::uint32_t num_layers() const {
        return static_cast<std::uint32_t>(a.size());
    }

    void validate() const {
        if (a.empty() || a.size() != b.size())
            throw std::invalid_argument("payoff lists must be non-empty and of equal length");
        const double total = a[0] + b[0];
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!(a[i] > 0.0) || !(b[i] > 0.0))
                throw std::invalid_argument("payoffs must be positive (layer " +
                                            std::to_string(i) + ")");
            if (std::abs(a[i] + b[i] - total) > 1e-12 * std::abs(total))
                throw std::invalid_argument(
                    "payoff sum must be constant across layers (layer " +
                    std::to_string(i) + ": " + std::to_string(a[i] + b[i]) +
                    " != " + std::to_string(total) + ")");
        }
    }

    bool operator==(const PayoffVector&) const = default;
};

/// Replicate scalar payoffs (a, b) over l layers.
inline PayoffVector uniform_payoffs(double a, double b, std::uint32_t l) {
    return {std::vector<double>(l, a), std::vector<double>(l, b)};
}

/// Per-node strategies plus immutable seed flags for one run.
struct StrategyState {
    std::vector<Strategy> strategy;
    std::vector<std::uint8_t> is_seed;

    std::uint32_t size() const {
        return static_cast<std::uint32_t>(strategy.size());
    }
};

inline std::uint32_t count_adopters(const StrategyState& state) {
    std::uint32_t c = 0;
    for (auto s : state.strategy) c += (s == Strategy::A);
    return c;
}

/// A- and B-strategy neighbor counts of one focal node, per layer.
struct NeighborTally {
    std::vector<std::uint32_t> count_a;
    std::vector<std::uint32_t> count_b;

    std::uint32_t num_layers() const {
        return static_cast<std::uint32_t>(count_a.size());
    }
    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (std::size_t i = 0; i < count_a.size(); ++i)
            d += count_a[i] + count_b[i];
        return d;
    }
};

/// Per-layer payoffs r_i = count_A_i * a_i (for playing A) and
/// s_i = count_B_i * b_i (for playing B), plus their totals.
struct PayoffTally {
    std::vector<double> r;
    std::vector<double> s;
    double r_total = 0.0;
    double s_total = 0.0;
};

inline void check_layer_match(const NeighborTally& tally, const PayoffVector& pay) {
    if (tally.num_layers() != pay.num_layers())
        throw std::invalid_argument("tally and payoff layer counts differ");
}

inline PayoffTally payoff_tally(const NeighborTally& tally, const PayoffVector& pay) {
    check_layer_match(tally, pay);
    PayoffTally out;
    const auto l = tally.num_layers();
    out.r.resize(l);
    out.s.resize(l);
    for (std::uint32_t i = 0; i < l; ++i) {
        out.r[i] = tally.count_a[i] * pay.a[i];
        out.s[i] = tally.count_b[i] * pay.b[i];
        out.r_total += out.r[i];
        out.s_total += out.s[i];
    }
    return out;
}

inline void tally_neighbors_into(const MultiplexNetwork& net,
                                 const StrategyState& state, NodeId u,
                                 NeighborTally& out) {
    if (u >= net.num_nodes) throw std::out_of_range("node index out of range");
    if (state.size() != net.num_nodes)
        throw std::invalid_argument("state not sized to network");
    const auto l = net.num_layers();
    out.count_a.assign(l, 0);
    out.count_b.assign(l, 0);
    for (LayerId i = 0; i < l; ++i) {
        std::uint32_t a = 0;
        for (NodeId v : net.adj[i][u]) a += (state.strategy[v] == Strategy::A);
        out.count_a[i] = a;
        out.count_b[i] = static_cast<std::uint32_t>(net.adj[i][u].size()) - a;
    }
}

/// Exact per-layer counts of A- and B-strategy neighbors of u.
inline NeighborTally tally_neighbors(const MultiplexNetwork& net,
                                     const StrategyState& state, NodeId u) {
    NeighborTally out;
    tally_neighbors_into(net, state, u, out);
    return out;
}

/// Sum rule: adopt A iff the total payoff for A across all layers is at
/// least the total for B. Nodes with no neighbors anywhere stay B: with no
/// interaction there is no payoff incentive.
inline Strategy decide_sum(const NeighborTally& tally, const PayoffVector& pay) {
    check_layer_match(tally, pay);
    double r = 0.0, s = 0.0;
    std::uint64_t degree = 0;
    for (std::uint32_t i = 0; i < tally.num_layers(); ++i) {
        r += tally.count_a[i] * pay.a[i];
        s += tally.count_b[i] * pay.b[i];
        degree += tally.count_a[i] + tally.count_b[i];
    }
    if (degree == 0) return Strategy::B;
    return r >= s ? Strategy::A : Strategy::B;
}

/// Dominant rule: adopt A iff A's payoff is at least B's in every single
/// layer (ties adopt, matching the sum rule's convention), and the node has
/// a neighbor somewhere.
inline Strategy decide_dominant(const NeighborTally& tally, const PayoffVector& pay) {
    check_layer_match(tally, pay);
    std::uint64_t degree = 0;
    for (std::uint32_t i = 0; i < tally.num_layers(); ++i) {
        if (tally.count_a[i] * pay.a[i] < tally.count_b[i] * pay.b[i])
            return Strategy::B;
        degree += tally.count_a[i] + tally.count_b[i];
    }
    return degree > 0 ? Strategy::A : Strategy::B;
}

/// Random rule: adopt A iff A's payoff is at least B's within the one
/// chosen layer, which must hold at least one neighbor.
inline Strategy decide_random(const NeighborTally& tally, const PayoffVector& pay,
                              LayerId chosen_layer) {
    check_layer_match(tally, pay);
    if (chosen_layer >= tally.num_layers())
        throw std::out_of_range("chosen layer out of range");
    const auto ca = tally.count_a[chosen_layer];
    const auto cb = tally.count_b[chosen_layer];
    if (ca + cb == 0) return Strategy::B;
    return ca * pay.a[chosen_layer] >= cb * pay.b[chosen_layer] ? Strategy::A
                                                                : Strategy::B;
}

/// Uniformly random seed set of size round(q0 * n), half-up; deterministic
/// in rng_seed. Returned sorted.
inline std::vector<NodeId> select_seeds(std::uint32_t n, double q0,
                                        std::uint64_t rng_seed) {
    if (!(q0 >= 0.0 && q0 <= 1.0))
        throw std::invalid_argument("seed fraction must be in [0, 1]");
    const auto k = static_cast<std::uint32_t>(std::floor(q0 * n + 0.5));
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    rng::Stream stream(rng_seed);
    for (std::uint32_t i = 0; i < k; ++i)
        std::swap(ids[i], ids[i + stream.below(n - i)]);
    ids.resize(k);
    std::sort(ids.begin(), ids.end());
    return ids;
}

/// Everyone starts at B except the seeds, which hold A for the whole run.
inline StrategyState make_initial_state(std::uint32_t n,
                                        std::span<const NodeId> seeds) {
    StrategyState state;
    state.strategy.assign(n, Strategy::B);
    state.is_seed.assign(n, 0);
    for (NodeId u : seeds) {
        if (u >= n) throw std::out_of_range("seed node out of range");
        state.strategy[u] = Strategy::A;
        state.is_seed[u] = 1;
    }
    return state;
}

enum class TerminalStatus { complete_cascade, fixed_point, step_limit };

inline const char* terminal_status_name(TerminalStatus s) {
    switch (s) {
    case TerminalStatus::complete_cascade: return "complete_cascade";
    case TerminalStatus::fixed_point: return "fixed_point";
    case TerminalStatus::step_limit: return "step_limit";
    }
    return "?";
}

/// Adopter counts per step (step 0 = seeds only) and how the run ended.
struct DiffusionTrace {
    std::vector<std::uint32_t> adopters_per_step;
    TerminalStatus status = TerminalStatus::step_limit;
    std::uint32_t steps_run = 0;

    bool operator==(const DiffusionTrace&) const = default;
};

struct StepResult {
    StrategyState state;
    std::uint32_t switches = 0;
};

/// One synchronous round: every B node is evaluated against the old state
/// (two buffers), switchers flip to A, and nobody reverts. The random
/// rule's layer pick for node u is a pure function of (run_seed,
/// step_index, u), so per-node evaluation order — or parallelism — cannot
/// change the outcome.
inline StepResult step(const MultiplexNetwork& net, const StrategyState& state,
                       const PayoffVector& pay, Rule rule,
                       std::uint64_t run_seed, std::uint32_t step_index) {
    if (state.size() != net.num_nodes)
        throw std::invalid_argument("state not sized to network");
    if (pay.num_layers() != net.num_layers())
        throw std::invalid_argument("payoff vector not sized to network layers");
    StepResult out{state, 0};
    const auto l = net.num_layers();
    if (l == 0) return out;
    NeighborTally scratch;
    for (NodeId u = 0; u < net.num_nodes; ++u) {
        if (state.strategy[u] == Strategy::A) continue;  // progressive: A is final
        tally_neighbors_into(net, state, u, scratch);
        Strategy decision = Strategy::B;
        switch (rule) {
        case Rule::sum:
            decision = decide_sum(scratch, pay);
            break;
        case Rule::dominant:
            decision = decide_dominant(scratch, pay);
            break;
        case Rule::random: {
            const LayerId pick = rng::bounded(
                rng::derive(run_seed, rng::kTagRuleLayer, step_index, u), l);
            decision = decide_random(scratch, pay, pick);
            break;
        }
        }
        if (decision == Strategy::A) {
            out.state.strategy[u] = Strategy::A;
            ++out.switches;
        }
    }
    return out;
}

/// Run synchronous rounds from the seed set until complete cascade, a
/// zero-switch round, or the step budget. Deterministic in
/// (net, seeds, pay, rule, run_seed).
inline DiffusionTrace run(const MultiplexNetwork& net,
                          std::span<const NodeId> seeds,
                          const PayoffVector& pay, Rule rule,
                          std::uint32_t max_steps, std::uint64_t run_seed) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    StrategyState state = make_initial_state(net.num_nodes, seeds);
    DiffusionTrace trace;
    std::uint32_t adopters = count_adopters(state);
    trace.adopters_per_step.push_back(adopters);
    if (adopters == net.num_nodes) {
        trace.status = TerminalStatus::complete_cascade;
        trace.steps_run = 0;
        return trace;
    }
    for (std::uint32_t t = 0; t < max_steps; ++t) {
        StepResult res = step(net, state, pay, rule, run_seed, t);
        adopters += res.switches;
        trace.adopters_per_step.push_back(adopters);
        trace.steps_run = t + 1;
        if (adopters == net.num_nodes) {
            trace.status = TerminalStatus::complete_cascade;
            return trace;
        }
        if (res.switches == 0) {
            trace.status = TerminalStatus::fixed_point;
            return trace;
        }
        state = std::move(res.state);
    }
    trace.status = TerminalStatus::step_limit;
    return trace;
}

/// Test-oracle twin of decide_sum: enumerate every incident edge in every
/// layer, accrue the pairwise payoff-matrix entries for the two hypothetical
/// choices, and pick the larger total (A on ties, B when both totals are
/// zero). Must agree with decide_sum on all inputs.
inline Strategy brute_force_decide(const MultiplexNetwork& net,
                                   const StrategyState& state,
                                   const PayoffVector& pay, NodeId u) {
    if (u >= net.num_nodes) throw std::out_of_range("node index out of range");
    if (pay.num_layers() != net.num_layers())
        throw std::invalid_argument("payoff vector not sized to network layers");
    double total_a = 0.0;
    double total_b = 0.0;
    for (LayerId i = 0; i < net.num_layers(); ++i) {
        for (NodeId v : net.adj[i][u]) {
            if (state.strategy[v] == Strategy::A)
                total_a += pay.a[i];  // u plays A against an A neighbor
            else
                total_b += pay.b[i];  // u plays B against a B neighbor
        }
    }
    if (total_a == 0.0 && total_b == 0.0) return Strategy::B;
    return total_a >= total_b ? Strategy::A : Strategy::B;
}

}  // namespace multicascade
