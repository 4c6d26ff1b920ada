#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multicascade/rng.hpp"

namespace multicascade {

using NodeId = std::uint32_t;
using LayerId = std::uint32_t;

/// Parameters for Erdős–Rényi multiplex generation.
struct GenParams {
    std::uint32_t num_nodes = 0;
    std::uint32_t num_layers = 0;
    double edge_prob = 0.0;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (num_nodes == 0)
            throw std::invalid_argument("node count must be >= 1");
        if (num_layers == 0)
            throw std::invalid_argument("layer count must be >= 1");
        if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
            throw std::invalid_argument("edge probability must be in [0, 1]");
    }
};

/// A multiplex network: the same node set 0..n-1 on every layer, one
/// independent undirected edge set per layer. adj[i][u] is the sorted
/// neighbor list of node u in layer i. Immutable once built; safe to read
/// from any number of threads.
struct MultiplexNetwork {
    std::uint32_t num_nodes = 0;
    std::vector<std::vector<std::vector<NodeId>>> adj;

    std::uint32_t num_layers() const {
        return static_cast<std::uint32_t>(adj.size());
    }

    std::uint32_t degree(NodeId u, LayerId i) const {
        return static_cast<std::uint32_t>(adj[i][u].size());
    }

    bool operator==(const MultiplexNetwork&) const = default;
};

inline MultiplexNetwork make_empty_network(std::uint32_t n, std::uint32_t l) {
    MultiplexNetwork net;
    net.num_nodes = n;
    net.adj.assign(l, std::vector<std::vector<NodeId>>(n));
    return net;
}

/// Sorted neighbor list of (u, i); read-only view into the network.
inline std::span<const NodeId> neighbors(const MultiplexNetwork& net, NodeId u,
                                         LayerId i) {
    if (i >= net.num_layers())
        throw std::out_of_range("layer index out of range");
    if (u >= net.num_nodes)
        throw std::out_of_range("node index out of range");
    return {net.adj[i][u].data(), net.adj[i][u].size()};
}

/// Insert the undirected edge (u, v) into layer i, keeping both neighbor
/// lists sorted. Rejects self-loops, duplicate edges, and out-of-range ids.
inline void add_edge(MultiplexNetwork& net, LayerId i, NodeId u, NodeId v) {
    if (i >= net.num_layers())
        throw std::out_of_range("layer index out of range");
    if (u >= net.num_nodes || v >= net.num_nodes)
        throw std::out_of_range("node index out of range");
    if (u == v)
        throw std::invalid_argument("self-loop (" + std::to_string(u) + "," +
                                    std::to_string(v) + ") rejected");
    auto& nu = net.adj[i][u];
    auto pos = std::lower_bound(nu.begin(), nu.end(), v);
    if (pos != nu.end() && *pos == v)
        throw std::invalid_argument("duplicate edge (" + std::to_string(u) +
                                    "," + std::to_string(v) + ") in layer " +
                                    std::to_string(i));
    nu.insert(pos, v);
    auto& nv = net.adj[i][v];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

inline std::size_t edge_count(const MultiplexNetwork& net, LayerId i) {
    std::size_t half_sum = 0;
    for (const auto& lst : net.adj[i]) half_sum += lst.size();
    return half_sum / 2;
}

inline double mean_degree(const MultiplexNetwork& net, LayerId i) {
    if (net.num_nodes == 0) return 0.0;
    return 2.0 * static_cast<double>(edge_count(net, i)) / net.num_nodes;
}

struct Violation {
    enum class Kind {
        layer_size,            // a layer does not carry exactly n node slots
        asymmetric,            // v lists u but u does not list v
        self_loop,
        unsorted_or_duplicate, // neighbor list not strictly increasing
        out_of_range,          // neighbor id >= n
    };
    Kind kind;
    LayerId layer = 0;
    NodeId u = 0;
    NodeId v = 0;

    std::string describe() const {
        auto at = " at layer " + std::to_string(layer) + ", node " +
                  std::to_string(u) + ", neighbor " + std::to_string(v);
        switch (kind) {
        case Kind::layer_size: return "layer " + std::to_string(layer) + " has wrong node-slot count";
        case Kind::asymmetric: return "asymmetric edge" + at;
        case Kind::self_loop: return "self-loop" + at;
        case Kind::unsorted_or_duplicate: return "unsorted or duplicate neighbor list" + at;
        case Kind::out_of_range: return "neighbor out of range" + at;
        }
        return "unknown violation";
    }
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Check every structural invariant; violations are reported, not thrown.
inline ValidationReport validate(const MultiplexNetwork& net) {
    ValidationReport report;
    const auto n = net.num_nodes;
    for (LayerId i = 0; i < net.num_layers(); ++i) {
        const auto& layer = net.adj[i];
        if (layer.size() != n) {
            report.violations.push_back({Violation::Kind::layer_size, i, 0, 0});
            continue;
        }
        for (NodeId u = 0; u < n; ++u) {
            const auto& lst = layer[u];
            for (std::size_t k = 0; k < lst.size(); ++k) {
                const NodeId v = lst[k];
                if (v >= n) {
                    report.violations.push_back({Violation::Kind::out_of_range, i, u, v});
                    continue;
                }
                if (v == u)
                    report.violations.push_back({Violation::Kind::self_loop, i, u, v});
                if (k > 0 && lst[k - 1] >= v)
                    report.violations.push_back(
                        {Violation::Kind::unsorted_or_duplicate, i, u, v});
                if (!std::binary_search(layer[v].begin(), layer[v].end(), u))
                    report.violations.push_back({Violation::Kind::asymmetric, i, u, v});
            }
        }
    }
    return report;
}

/// Generate a multiplex network whose layers are independent G(n, p) draws.
/// Pure function of params: the same params (including rng_seed) always
/// yield the same network, and layer i depends only on (rng_seed, i), so
/// raising the layer count never perturbs earlier layers.
inline MultiplexNetwork generate_er_multiplex(const GenParams& params) {
    params.validate();
    const auto n = params.num_nodes;
    const double p = params.edge_prob;
    auto net = make_empty_network(n, params.num_layers);

    for (LayerId i = 0; i < params.num_layers; ++i) {
        auto& layer = net.adj[i];
        if (p == 0.0 || n < 2) continue;
        if (p == 1.0) {
            for (NodeId u = 0; u < n; ++u) {
                layer[u].reserve(n - 1);
                for (NodeId v = 0; v < n; ++v)
                    if (v != u) layer[u].push_back(v);
            }
            continue;
        }
        // Batagelj–Brandes geometric skipping over the pair sequence
        // (1,0), (2,0), (2,1), (3,0), ...; O(edges) draws.
        rng::Stream stream(rng::derive(params.rng_seed, rng::kTagLayer, i));
        const double log_keep = std::log1p(-p);
        std::int64_t v = 1;
        std::int64_t w = -1;
        while (v < static_cast<std::int64_t>(n)) {
            const double r = stream.uniform01();
            w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_keep));
            while (w >= v && v < static_cast<std::int64_t>(n)) {
                w -= v;
                ++v;
            }
            if (v < static_cast<std::int64_t>(n)) {
                layer[static_cast<NodeId>(v)].push_back(static_cast<NodeId>(w));
                layer[static_cast<NodeId>(w)].push_back(static_cast<NodeId>(v));
            }
        }
        for (auto& lst : layer) std::sort(lst.begin(), lst.end());
    }
    return net;
}

}  // namespace multicascade
