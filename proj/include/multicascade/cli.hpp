#pragma once

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multicascade/analytics.hpp"
#include "multicascade/coordination_game.hpp"
#include "multicascade/experiments.hpp"
#include "multicascade/io.hpp"
#include "multicascade/multiplex_graph.hpp"

namespace multicascade {

/// Usage or configuration problem; maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when the user asked for help text; maps to exit code 0.
struct CliHelp {
    std::string text;
};

/// Fully validated invocation of one subcommand.
struct RunConfig {
    std::string subcommand;
    std::uint32_t nodes = 500;
    std::uint32_t layers = 2;
    double edge_prob = 0.1;
    std::vector<double> payoff_a{2.0, 2.0};
    std::vector<double> payoff_b{1.0, 1.0};
    double seed_fraction = 0.25;
    Rule rule = Rule::sum;
    std::uint32_t max_steps = 50;
    std::uint32_t samples = 20;
    std::uint32_t steps = 50;  // analytic-curve length
    SweptParam sweep_param = SweptParam::seed_fraction;
    std::vector<double> grid;  // empty = built-in default for the swept param
    std::string network_path;  // run: load this network instead of generating
    std::string output_path = "-";
    std::uint64_t rng_seed = 0;

    bool operator==(const RunConfig&) const = default;
};

namespace cli_detail {

inline std::vector<double> parse_double_list(const std::string& text,
                                             const std::string& flag) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(flag + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

inline std::string join_g17(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_g17(values[i]);
    }
    return out;
}

inline Rule parse_rule(const std::string& name) {
    if (name == "sum") return Rule::sum;
    if (name == "dominant") return Rule::dominant;
    if (name == "random") return Rule::random;
    throw ConfigError("--rule: expected sum, dominant, or random; got '" + name + "'");
}

inline SweptParam parse_swept(const std::string& name) {
    if (name == "seed_fraction") return SweptParam::seed_fraction;
    if (name == "layer_count") return SweptParam::layer_count;
    if (name == "edge_probability") return SweptParam::edge_probability;
    throw ConfigError("--sweep: expected seed_fraction, layer_count, or "
                      "edge_probability; got '" + name + "'");
}

// Raw flag values before validation; shared by all subcommands since
// exactly one of them parses.
struct RawFlags {
    std::uint64_t nodes = 500;
    std::uint64_t layers = 2;
    double edge_prob = 0.1;
    std::string payoff_a = "2";
    std::string payoff_b = "1";
    double seed_fraction = 0.25;
    std::string rule = "sum";
    std::uint64_t max_steps = 50;
    std::uint64_t samples = 20;
    std::uint64_t steps = 50;
    std::string sweep = "seed_fraction";
    std::string grid;
    std::string network;
    std::string output = "-";
    std::string config;
    std::uint64_t rng_seed = 0;
};

}  // namespace cli_detail

/// Parse argv (program name excluded) into a validated RunConfig. A JSON
/// config file given via --config supplies values for flags not present on
/// the command line; explicit flags always win. Throws ConfigError on any
/// usage problem and CliHelp when help was requested.
inline RunConfig parse_config(std::vector<std::string> args) {
    using cli_detail::RawFlags;
    namespace cd = cli_detail;

    CLI::App app{"Simulator and analytics for innovation diffusion on multiplex networks"};
    app.name("multicascade");
    app.require_subcommand(1);

    RawFlags raw;
    // json-config key -> option, per subcommand
    std::map<CLI::App*, std::map<std::string, CLI::Option*>> sub_opts;
    // json-config key -> setter writing into raw
    std::map<std::string, std::function<void(const nlohmann::json&)>> setters;

    auto reg = [&](CLI::App* sub, const std::string& key, CLI::Option* opt,
                   std::function<void(const nlohmann::json&)> setter) {
        sub_opts[sub][key] = opt;
        setters[key] = std::move(setter);
    };
    auto num_setter = [](auto& field) {
        return [&field](const nlohmann::json& v) { field = v.template get<std::decay_t<decltype(field)>>(); };
    };
    auto str_setter = [](std::string& field) {
        return [&field](const nlohmann::json& v) { field = v.get<std::string>(); };
    };
    auto list_setter = [](std::string& field) {
        return [&field](const nlohmann::json& v) {
            if (v.is_array()) {
                std::vector<double> values = v.get<std::vector<double>>();
                field = cd::join_g17(values);
            } else {
                field = cd::join_g17({v.get<double>()});
            }
        };
    };

    auto add_common = [&](CLI::App* sub) {
        reg(sub, "output", sub->add_option("--output,-o", raw.output, "output path, '-' for stdout"),
            str_setter(raw.output));
        reg(sub, "rng-seed", sub->add_option("--rng-seed", raw.rng_seed, "master seed; all streams derive from it"),
            num_setter(raw.rng_seed));
        sub->add_option("--config", raw.config, "JSON config file; explicit flags win");
    };
    auto add_graph = [&](CLI::App* sub) {
        reg(sub, "nodes", sub->add_option("--nodes", raw.nodes, "node count"), num_setter(raw.nodes));
        reg(sub, "layers", sub->add_option("--layers", raw.layers, "layer count"), num_setter(raw.layers));
        reg(sub, "edge-prob", sub->add_option("--edge-prob", raw.edge_prob, "per-layer edge probability"),
            num_setter(raw.edge_prob));
    };
    auto add_game = [&](CLI::App* sub) {
        reg(sub, "payoff-a", sub->add_option("--payoff-a", raw.payoff_a, "per-layer payoff(s) for A, comma-separated"),
            list_setter(raw.payoff_a));
        reg(sub, "payoff-b", sub->add_option("--payoff-b", raw.payoff_b, "per-layer payoff(s) for B, comma-separated"),
            list_setter(raw.payoff_b));
        reg(sub, "seed-fraction", sub->add_option("--seed-fraction", raw.seed_fraction, "initial adopter fraction"),
            num_setter(raw.seed_fraction));
    };
    auto add_rule = [&](CLI::App* sub) {
        reg(sub, "rule", sub->add_option("--rule", raw.rule, "decision rule: sum, dominant, random"),
            str_setter(raw.rule));
    };
    auto add_max_steps = [&](CLI::App* sub) {
        reg(sub, "max-steps", sub->add_option("--max-steps", raw.max_steps, "simulation step budget"),
            num_setter(raw.max_steps));
    };
    auto add_samples = [&](CLI::App* sub) {
        reg(sub, "samples", sub->add_option("--samples", raw.samples, "replicates per grid point"),
            num_setter(raw.samples));
    };
    auto add_grid = [&](CLI::App* sub) {
        reg(sub, "grid", sub->add_option("--grid", raw.grid, "grid values, comma-separated; empty = default"),
            list_setter(raw.grid));
    };

    CLI::App* generate = app.add_subcommand("generate", "generate a network and write its edge list");
    add_graph(generate);
    add_common(generate);

    CLI::App* run_cmd = app.add_subcommand("run", "run one diffusion and write its trace CSV");
    add_graph(run_cmd);
    add_game(run_cmd);
    add_rule(run_cmd);
    add_max_steps(run_cmd);
    reg(run_cmd, "network", run_cmd->add_option("--network", raw.network, "edge-list file to load instead of generating"),
        str_setter(raw.network));
    add_common(run_cmd);

    CLI::App* analytic = app.add_subcommand("analytic", "write the closed-form adoption curves CSV");
    add_graph(analytic);
    add_game(analytic);
    reg(analytic, "steps", analytic->add_option("--steps", raw.steps, "curve length in steps"),
        num_setter(raw.steps));
    add_common(analytic);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter and write aggregates CSV");
    reg(sweep, "sweep", sweep->add_option("--sweep", raw.sweep, "swept parameter: seed_fraction, layer_count, edge_probability"),
        str_setter(raw.sweep));
    add_grid(sweep);
    add_graph(sweep);
    add_game(sweep);
    add_rule(sweep);
    add_samples(sweep);
    add_max_steps(sweep);
    add_common(sweep);

    CLI::App* compare = app.add_subcommand("compare", "compare decision rules over a seed-fraction grid");
    add_grid(compare);
    add_graph(compare);
    add_game(compare);
    add_samples(compare);
    add_max_steps(compare);
    add_common(compare);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw CliHelp{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string(e.what()) + "\n\n" + app.help());
    }

    CLI::App* active = app.get_subcommands().front();
    const auto& opts = sub_opts[active];

    if (!raw.config.empty()) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_text_file(raw.config));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("--config: " + std::string(e.what()));
        }
        if (!doc.is_object()) throw ConfigError("--config: top level must be an object");
        for (const auto& [key, value] : doc.items()) {
            auto it = opts.find(key);
            if (it == opts.end())
                throw ConfigError("--config: key '" + key + "' is not valid for subcommand '" +
                                  active->get_name() + "'");
            if (it->second->count() > 0) continue;  // explicit flag wins
            try {
                setters.at(key)(value);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("--config: key '" + key + "': " + e.what());
            }
        }
    }

    // Validate and canonicalize.
    RunConfig cfg;
    cfg.subcommand = active->get_name();
    auto narrow_u32 = [](std::uint64_t v, const char* flag) {
        if (v > 0xffffffffULL) throw ConfigError(std::string(flag) + ": value too large");
        return static_cast<std::uint32_t>(v);
    };
    cfg.nodes = narrow_u32(raw.nodes, "--nodes");
    cfg.layers = narrow_u32(raw.layers, "--layers");
    cfg.edge_prob = raw.edge_prob;
    cfg.seed_fraction = raw.seed_fraction;
    cfg.rule = cd::parse_rule(raw.rule);
    cfg.max_steps = narrow_u32(raw.max_steps, "--max-steps");
    cfg.samples = narrow_u32(raw.samples, "--samples");
    cfg.steps = narrow_u32(raw.steps, "--steps");
    cfg.sweep_param = cd::parse_swept(raw.sweep);
    cfg.network_path = raw.network;
    cfg.output_path = raw.output;
    cfg.rng_seed = raw.rng_seed;

    if (cfg.nodes == 0) throw ConfigError("--nodes: must be >= 1");
    if (cfg.layers == 0) throw ConfigError("--layers: must be >= 1");
    if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0))
        throw ConfigError("--edge-prob: must be in [0, 1]");
    if (!(cfg.seed_fraction >= 0.0 && cfg.seed_fraction <= 1.0))
        throw ConfigError("--seed-fraction: must be in [0, 1]");
    if (cfg.max_steps == 0) throw ConfigError("--max-steps: must be >= 1");
    if (cfg.samples == 0) throw ConfigError("--samples: must be >= 1");

    cfg.payoff_a = cd::parse_double_list(raw.payoff_a, "--payoff-a");
    cfg.payoff_b = cd::parse_double_list(raw.payoff_b, "--payoff-b");
    if (cfg.payoff_a.size() != cfg.payoff_b.size())
        throw ConfigError("--payoff-a and --payoff-b must have the same length");
    const bool layer_sweep = cfg.subcommand == "sweep" &&
                             cfg.sweep_param == SweptParam::layer_count;
    if (layer_sweep) {
        if (cfg.payoff_a.size() != 1)
            throw ConfigError("--payoff-a: layer-count sweeps need scalar payoffs");
    } else if (cfg.network_path.empty()) {
        if (cfg.payoff_a.size() == 1 && cfg.layers > 1) {
            cfg.payoff_a.assign(cfg.layers, cfg.payoff_a[0]);
            cfg.payoff_b.assign(cfg.layers, cfg.payoff_b[0]);
        }
        if (cfg.payoff_a.size() != cfg.layers)
            throw ConfigError("--payoff-a: list length must match --layers");
    }
    try {
        PayoffVector{cfg.payoff_a, cfg.payoff_b}.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--payoff-a/--payoff-b: ") + e.what());
    }

    if (!raw.grid.empty()) {
        cfg.grid = cd::parse_double_list(raw.grid, "--grid");
        for (std::size_t i = 1; i < cfg.grid.size(); ++i)
            if (!(cfg.grid[i] > cfg.grid[i - 1]))
                throw ConfigError("--grid: values must be strictly increasing");
    }
    return cfg;
}

/// Emit cfg as a JSON config document accepted back by parse_config.
inline nlohmann::json render_config(const RunConfig& cfg) {
    nlohmann::json doc;
    doc["output"] = cfg.output_path;
    doc["rng-seed"] = cfg.rng_seed;
    doc["nodes"] = cfg.nodes;
    doc["layers"] = cfg.layers;
    doc["edge-prob"] = cfg.edge_prob;
    if (cfg.subcommand != "generate") {
        doc["payoff-a"] = cfg.payoff_a;
        doc["payoff-b"] = cfg.payoff_b;
        doc["seed-fraction"] = cfg.seed_fraction;
    }
    if (cfg.subcommand == "run" || cfg.subcommand == "sweep")
        doc["rule"] = rule_name(cfg.rule);
    if (cfg.subcommand == "run") doc["network"] = cfg.network_path;
    if (cfg.subcommand == "run" || cfg.subcommand == "sweep" ||
        cfg.subcommand == "compare")
        doc["max-steps"] = cfg.max_steps;
    if (cfg.subcommand == "sweep" || cfg.subcommand == "compare") {
        doc["samples"] = cfg.samples;
        doc["grid"] = cfg.grid;
    }
    if (cfg.subcommand == "sweep") doc["sweep"] = swept_param_name(cfg.sweep_param);
    if (cfg.subcommand == "analytic") doc["steps"] = cfg.steps;
    return doc;
}

/// Execute a validated config and return the rendered output text.
inline std::string execute(const RunConfig& cfg) {
    if (cfg.subcommand == "generate") {
        const auto net = generate_er_multiplex(
            {cfg.nodes, cfg.layers, cfg.edge_prob, cfg.rng_seed});
        return network_to_edge_list(net);
    }
    if (cfg.subcommand == "run") {
        MultiplexNetwork net;
        if (cfg.network_path.empty()) {
            net = generate_er_multiplex(
                {cfg.nodes, cfg.layers, cfg.edge_prob, cfg.rng_seed});
        } else {
            net = load_network(cfg.network_path);
        }
        PayoffVector pay{cfg.payoff_a, cfg.payoff_b};
        if (pay.num_layers() == 1 && net.num_layers() > 1)
            pay = uniform_payoffs(pay.a[0], pay.b[0], net.num_layers());
        if (pay.num_layers() != net.num_layers())
            throw ConfigError("--payoff-a: list length must match the network's layer count");
        const auto seeds = select_seeds(net.num_nodes, cfg.seed_fraction,
                                        rng::derive(cfg.rng_seed, rng::kTagSeeds));
        const auto trace = run(net, seeds, pay, cfg.rule, cfg.max_steps,
                               rng::derive(cfg.rng_seed, rng::kTagRun));
        return trace_to_csv(trace, net.num_nodes);
    }
    if (cfg.subcommand == "analytic") {
        AnalyticParams ap{cfg.nodes, cfg.edge_prob, cfg.layers,
                          PayoffVector{cfg.payoff_a, cfg.payoff_b},
                          cfg.seed_fraction};
        const auto curve = recurrence_curve(ap, cfg.steps);
        const double alpha = adoption_probability(ap, cfg.seed_fraction);
        const auto bound = lower_bound_curve(cfg.seed_fraction, alpha, cfg.steps);
        return analytic_to_csv(curve, bound);
    }
    if (cfg.subcommand == "sweep") {
        SweepSpec spec;
        spec.num_nodes = cfg.nodes;
        spec.edge_prob = cfg.edge_prob;
        spec.num_layers = cfg.layers;
        spec.payoff_a = cfg.payoff_a;
        spec.payoff_b = cfg.payoff_b;
        spec.seed_fraction = cfg.seed_fraction;
        spec.rule = cfg.rule;
        spec.swept = cfg.sweep_param;
        spec.samples = cfg.samples;
        spec.max_steps = cfg.max_steps;
        spec.rng_seed = cfg.rng_seed;
        spec.grid = cfg.grid;
        SweepResult result;
        switch (cfg.sweep_param) {
        case SweptParam::seed_fraction:
            if (spec.grid.empty()) spec.grid = default_seed_fraction_grid();
            result = sweep_seed_fraction(spec);
            break;
        case SweptParam::layer_count:
            if (spec.grid.empty()) spec.grid = default_layer_grid();
            result = sweep_layers(spec);
            break;
        case SweptParam::edge_probability:
            if (spec.grid.empty()) spec.grid = default_edge_probability_grid();
            result = sweep_edge_probability(spec);
            break;
        }
        return sweep_to_csv(result);
    }
    if (cfg.subcommand == "compare") {
        SweepSpec spec;
        spec.num_nodes = cfg.nodes;
        spec.edge_prob = cfg.edge_prob;
        spec.num_layers = cfg.layers;
        spec.payoff_a = cfg.payoff_a;
        spec.payoff_b = cfg.payoff_b;
        spec.swept = SweptParam::seed_fraction;
        spec.samples = cfg.samples;
        spec.max_steps = cfg.max_steps;
        spec.rng_seed = cfg.rng_seed;
        spec.grid = cfg.grid.empty() ? default_seed_fraction_grid() : cfg.grid;
        return compare_to_csv(compare_strategies(spec));
    }
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

inline void emit_output(const std::string& path, const std::string& content) {
    if (path == "-")
        std::cout << content;
    else
        write_text_file(path, content);
}

/// Entry point: 0 on success, 2 on usage or configuration errors, 1 on
/// runtime failures.
inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const CliHelp& help) {
        std::cout << help.text;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        emit_output(cfg.output_path, execute(cfg));
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace multicascade
