#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "multicascade/coordination_game.hpp"
#include "multicascade/experiments.hpp"
#include "multicascade/multiplex_graph.hpp"

namespace multicascade {

/// Render a double with 17 significant digits; round-trips exactly.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Edge-list network format. First line "n l"; one line "i u v" per
// undirected edge with u < v, ordered by layer, then u, then v. Round-trips
// exactly through save/load.

inline std::string network_to_edge_list(const MultiplexNetwork& net) {
    std::ostringstream out;
    out << net.num_nodes << ' ' << net.num_layers() << '\n';
    for (LayerId i = 0; i < net.num_layers(); ++i)
        for (NodeId u = 0; u < net.num_nodes; ++u)
            for (NodeId v : net.adj[i][u])
                if (u < v) out << i << ' ' << u << ' ' << v << '\n';
    return out.str();
}

inline MultiplexNetwork network_from_edge_list(const std::string& text,
                                               const std::string& origin = "<edge list>") {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) -> std::runtime_error {
        return std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + msg);
    };

    if (!std::getline(in, line)) {
        line_no = 1;
        throw fail("missing header line 'n l'");
    }
    line_no = 1;
    std::uint32_t n = 0, l = 0;
    {
        std::istringstream hdr(line);
        std::string extra;
        if (!(hdr >> n >> l) || (hdr >> extra))
            throw fail("malformed header, expected 'n l'");
        if (n == 0 || l == 0) throw fail("node and layer counts must be >= 1");
    }
    auto net = make_empty_network(n, l);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::uint32_t layer = 0, u = 0, v = 0;
        std::string extra;
        if (!(row >> layer >> u >> v) || (row >> extra))
            throw fail("malformed edge line, expected 'layer u v'");
        if (layer >= l) throw fail("layer index " + std::to_string(layer) + " out of range");
        if (u >= n || v >= n) throw fail("node index out of range");
        if (u >= v) throw fail("edge endpoints must satisfy u < v");
        try {
            add_edge(net, layer, u, v);
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }
    const auto report = validate(net);
    if (!report.ok())
        throw std::runtime_error(origin + ": invalid network: " +
                                 report.violations.front().describe());
    return net;
}

inline void save_network(const std::string& path, const MultiplexNetwork& net) {
    write_text_file(path, network_to_edge_list(net));
}

inline MultiplexNetwork load_network(const std::string& path) {
    return network_from_edge_list(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// CSV renderers. All numeric cells use 17-significant-digit formatting, so
// re-emitting the same result is byte-identical.

inline std::string trace_to_csv(const DiffusionTrace& trace, std::uint32_t n) {
    std::ostringstream out;
    out << "step,adopters,fraction\n";
    for (std::size_t m = 0; m < trace.adopters_per_step.size(); ++m) {
        const auto count = trace.adopters_per_step[m];
        out << m << ',' << count << ','
            << format_g17(static_cast<double>(count) / n) << '\n';
    }
    out << "# terminal=" << terminal_status_name(trace.status) << '\n';
    return out.str();
}

inline std::string analytic_to_csv(const std::vector<double>& recurrence,
                                   const BoundCurve& bound) {
    if (recurrence.size() != bound.values.size())
        throw std::invalid_argument("recurrence and bound curves differ in length");
    std::ostringstream out;
    out << "m,q_m,bound_m\n";
    for (std::size_t m = 0; m < recurrence.size(); ++m)
        out << m << ',' << format_g17(recurrence[m]) << ','
            << format_g17(bound.values[m]) << '\n';
    return out.str();
}

inline void append_sweep_rows(std::ostringstream& out, const SweepResult& result) {
    for (const auto& pt : result.points) {
        out << result.param_name << ',' << format_g17(pt.value) << ','
            << format_g17(pt.mean_final_fraction) << ','
            << format_g17(pt.std_final_fraction) << ',' << pt.samples << ','
            << format_g17(pt.mean_steps) << ',' << pt.status_counts[0] << ',';
        if (pt.phase) out << phase_name(*pt.phase);
        out << '\n';
    }
}

inline constexpr const char* kSweepCsvHeader =
    "param,value,mean_final_fraction,std_final_fraction,samples,mean_steps,"
    "complete_cascades,phase\n";

inline std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << kSweepCsvHeader;
    append_sweep_rows(out, result);
    return out.str();
}

/// One CSV holding all three rules' curves; the param column carries the
/// rule name, the value column the seed fraction.
inline std::string compare_to_csv(const CompareResult& result) {
    std::ostringstream out;
    out << kSweepCsvHeader;
    for (const auto& sr : result.by_rule) append_sweep_rows(out, sr);
    return out.str();
}

}  // namespace multicascade
