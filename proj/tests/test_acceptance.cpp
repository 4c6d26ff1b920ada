// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line, with sub-checks reported through Catch2. Statistical criteria run at
// the pinned parameters and tolerances; nothing here is calibrated at test
// time.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "multicascade/analytics.hpp"
#include "multicascade/cli.hpp"
#include "multicascade/coordination_game.hpp"
#include "multicascade/experiments.hpp"
#include "multicascade/io.hpp"
#include "multicascade/multiplex_graph.hpp"
#include "poisson_oracle.hpp"

using namespace multicascade;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::printf("[acceptance] criterion %d (%s): %s%s%s\n", criterion,
                name.c_str(), ok ? "PASS" : "FAIL", detail.empty() ? "" : " — ",
                detail.c_str());
    std::fflush(stdout);
    return ok;
}

SweepSpec figure_spec() {
    SweepSpec spec;
    spec.num_nodes = 500;
    spec.edge_prob = 0.1;
    spec.num_layers = 2;
    spec.payoff_a = {2.0, 2.0};
    spec.payoff_b = {1.0, 1.0};
    spec.seed_fraction = 0.25;
    spec.rule = Rule::sum;
    spec.samples = 20;
    spec.max_steps = 50;
    spec.rng_seed = 20240601;
    return spec;
}

}  // namespace

TEST_CASE("criterion 1: sum rule agrees with the brute-force payoff oracle") {
    const auto start = Clock::now();
    rng::Stream stream(271828);
    std::uint64_t mismatches = 0;
    for (int c = 0; c < 1000; ++c) {
        const std::uint32_t n = 1 + stream.below(8);
        const std::uint32_t l = 1 + stream.below(3);
        const auto net =
            generate_er_multiplex({n, l, stream.uniform01(), stream.next_word()});
        StrategyState state;
        state.strategy.assign(n, Strategy::B);
        state.is_seed.assign(n, 0);
        for (NodeId u = 0; u < n; ++u)
            if (stream.bernoulli(0.4)) state.strategy[u] = Strategy::A;
        PayoffVector pay;
        const double total = 0.5 + 3.0 * stream.uniform01();
        for (std::uint32_t i = 0; i < l; ++i) {
            const double a = total * (0.05 + 0.9 * stream.uniform01());
            pay.a.push_back(a);
            pay.b.push_back(total - a);
        }
        for (NodeId u = 0; u < n; ++u)
            mismatches += decide_sum(tally_neighbors(net, state, u), pay) !=
                          brute_force_decide(net, state, pay, u);
    }
    const double elapsed = seconds_since(start);
    const bool ok = mismatches == 0 && elapsed < 10.0;
    REQUIRE(report(1, "oracle equivalence on 1000 random instances", ok,
                   std::to_string(mismatches) + " mismatches, " +
                       std::to_string(elapsed) + " s"));
}

TEST_CASE("criterion 2: Poisson kernel matches arbitrary-precision evaluation") {
    double worst = 0.0;
    for (double rate : {0.1, 1.0, 10.0, 50.0}) {
        for (std::int64_t t = 0; t <= 200; ++t) {
            const double got = poisson_upper_tail(t, rate);
            const double want = oracle::poisson_upper_tail(t, rate);
            worst = std::max(worst, std::abs(got - want));
        }
    }
    const double anchor = poisson_upper_tail(3, 1.0);
    const bool anchor_ok = std::abs(anchor - 0.018988) <= 1e-6;
    const bool ok = worst <= 1e-12 && anchor_ok;
    REQUIRE(report(2, "Poisson tail within 1e-12 of the oracle grid", ok,
                   "max abs error " + format_g17(worst) + ", anchor " +
                       format_g17(anchor)));
}

TEST_CASE("criterion 3: seed-fraction sweep dominates the analytic bound") {
    const auto start = Clock::now();
    auto spec = figure_spec();
    spec.swept = SweptParam::seed_fraction;
    spec.grid = default_seed_fraction_grid();  // 0.05 .. 0.50
    const auto result = sweep_seed_fraction(spec);
    bool all_ok = true;
    std::string failures;
    for (const auto& pt : result.points) {
        const double bound = *pt.analytic_bound;
        const bool point_ok = pt.mean_final_fraction >= bound - 0.05;
        std::printf("  q0=%.2f  sim=%.4f  bound=%.4f  %s\n", pt.value,
                    pt.mean_final_fraction, bound, point_ok ? "ok" : "FAIL");
        CHECK(point_ok);
        if (!point_ok) {
            all_ok = false;
            failures += " q0=" + format_g17(pt.value);
        }
    }
    const double elapsed = seconds_since(start);
    const bool in_time = elapsed < 300.0;
    CHECK(in_time);
    const bool ok = all_ok && in_time;
    report(3, "simulated final fraction >= lower bound - 0.05 on the q0 grid", ok,
           ok ? std::to_string(elapsed) + " s"
              : "known deviation: the Poisson tail overestimates the quenched "
                "per-round switch probability near ignition; failing points:" +
                    failures);
    CHECK(ok);
}

TEST_CASE("criterion 4: more layers never help at equal payoffs") {
    const auto start = Clock::now();
    auto spec = figure_spec();
    spec.swept = SweptParam::layer_count;
    spec.payoff_a = {2.0};
    spec.payoff_b = {1.0};
    spec.grid = {1, 2, 3, 4};
    const auto result = sweep_layers(spec);
    bool ok = true;
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const auto& lo = result.points[i - 1];
        const auto& hi = result.points[i];
        const double pooled =
            std::sqrt((lo.std_final_fraction * lo.std_final_fraction +
                       hi.std_final_fraction * hi.std_final_fraction) /
                      2.0);
        const bool step_ok =
            hi.mean_final_fraction <= lo.mean_final_fraction + pooled;
        std::printf("  l=%.0f->%.0f  means %.4f -> %.4f  pooled std %.4f  %s\n",
                    lo.value, hi.value, lo.mean_final_fraction,
                    hi.mean_final_fraction, pooled, step_ok ? "ok" : "FAIL");
        CHECK(step_ok);
        ok = ok && step_ok;
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 300.0;
    REQUIRE(report(4, "mean final fraction non-increasing in layer count", ok,
                   std::to_string(elapsed) + " s"));
}

TEST_CASE("criterion 5: edge-probability sweep walks the four phases in order") {
    const auto start = Clock::now();
    auto spec = figure_spec();
    spec.swept = SweptParam::edge_probability;
    spec.grid = default_edge_probability_grid();  // 25 points over (0, 0.5]
    REQUIRE(spec.grid.size() == 25);
    const auto result = sweep_edge_probability(spec);

    auto rank = [](PhaseLabel p) {
        switch (p) {
        case PhaseLabel::adopting: return 0;
        case PhaseLabel::epidemic_a: return 1;
        case PhaseLabel::backing_to_b: return 2;
        case PhaseLabel::epidemic_b: return 3;
        }
        return -1;
    };
    bool ordered = true;
    int prev = -1;
    int count_a = 0, count_b = 0;
    double at_045 = -1.0;
    for (const auto& pt : result.points) {
        const int r = rank(*pt.phase);
        std::printf("  p=%.4f  mean_count=%8.2f  %s\n", pt.value,
                    pt.mean_final_fraction * spec.num_nodes, phase_name(*pt.phase));
        if (r < prev) ordered = false;
        prev = std::max(prev, r);
        count_a += *pt.phase == PhaseLabel::epidemic_a;
        count_b += *pt.phase == PhaseLabel::epidemic_b;
        if (pt.value == 0.45) at_045 = pt.mean_final_fraction * spec.num_nodes;
    }
    const bool concentration_ok = at_045 >= 0.0 && at_045 <= 0.30 * spec.num_nodes;
    const double elapsed = seconds_since(start);
    const bool ok = ordered && count_a > 0 && count_b > 0 && concentration_ok &&
                    elapsed < 600.0;
    CHECK(ordered);
    CHECK(count_a > 0);
    CHECK(count_b > 0);
    CHECK(concentration_ok);
    REQUIRE(report(5, "phase sequence ordered with both epidemics present", ok,
                   "epidemic_A points: " + std::to_string(count_a) +
                       ", epidemic_B points: " + std::to_string(count_b) +
                       ", mean count at p=0.45: " + std::to_string(at_045) +
                       ", " + std::to_string(elapsed) + " s"));
}

TEST_CASE("criterion 6: rule ordering across the seed-fraction grid") {
    auto spec = figure_spec();
    spec.swept = SweptParam::seed_fraction;
    spec.grid = default_seed_fraction_grid();
    const auto result = compare_strategies(spec);
    const auto& sum = result.for_rule(Rule::sum);
    const auto& dom = result.for_rule(Rule::dominant);
    const auto& rnd = result.for_rule(Rule::random);

    bool pointwise = true;
    double sum_avg = 0.0, dom_avg = 0.0, rnd_avg = 0.0;
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
        const double ms = sum.points[g].mean_final_fraction;
        const double md = dom.points[g].mean_final_fraction;
        const double mr = rnd.points[g].mean_final_fraction;
        std::printf("  q0=%.2f  dominant=%.4f  sum=%.4f  random=%.4f\n",
                    spec.grid[g], md, ms, mr);
        if (md > ms) pointwise = false;  // exact, paired replicates
        sum_avg += ms;
        dom_avg += md;
        rnd_avg += mr;
    }
    sum_avg /= spec.grid.size();
    dom_avg /= spec.grid.size();
    rnd_avg /= spec.grid.size();
    const bool between = dom_avg <= sum_avg && sum_avg <= rnd_avg;
    CHECK(pointwise);
    CHECK(between);
    REQUIRE(report(6, "dominant <= sum pointwise; sum average lies in between",
                   pointwise && between,
                   "grid averages dominant=" + std::to_string(dom_avg) +
                       " sum=" + std::to_string(sum_avg) +
                       " random=" + std::to_string(rnd_avg)));
}

TEST_CASE("criterion 7: layer-count ordering condition at the worked parameters") {
    const auto res = layer_ordering_threshold(300, 0.1, 100, 1, 9, 10);
    const bool floors_ok = res.floors_equal && res.floor_k == 2;
    const bool qstar_ok = std::abs(res.q_star - 0.003524) <= 1e-6;
    bool ordering_ok = true;
    for (double q : {0.005, 0.01, 0.05}) {
        const AnalyticParams nine{300, 0.1, 9, uniform_payoffs(100, 1, 9), q};
        const AnalyticParams ten{300, 0.1, 10, uniform_payoffs(100, 1, 10), q};
        ordering_ok = ordering_ok &&
                      adoption_probability(nine, q) < adoption_probability(ten, q);
    }
    const bool ok = floors_ok && qstar_ok && ordering_ok;
    REQUIRE(report(7, "equal floors, q_star value, and strict probability ordering",
                   ok, "q_star=" + format_g17(res.q_star)));
}

TEST_CASE("criterion 8: monotone traces and termination within n steps") {
    rng::Stream stream(314159);
    bool ok = true;
    for (int c = 0; c < 200; ++c) {
        const std::uint32_t n = 2 + stream.below(120);
        const std::uint32_t l = 1 + stream.below(3);
        const auto net = generate_er_multiplex(
            {n, l, stream.uniform01(), stream.next_word()});
        const auto seeds = select_seeds(n, stream.uniform01(), stream.next_word());
        const double total = 1.0 + 2.0 * stream.uniform01();
        const double a = total * (0.1 + 0.8 * stream.uniform01());
        const auto pay = uniform_payoffs(a, total - a, l);
        const Rule rule = c % 2 == 0 ? Rule::sum : Rule::dominant;
        const auto trace = run(net, seeds, pay, rule, n, stream.next_word());
        for (std::size_t m = 1; m < trace.adopters_per_step.size(); ++m)
            ok = ok && trace.adopters_per_step[m] >= trace.adopters_per_step[m - 1];
        ok = ok && trace.status != TerminalStatus::step_limit && trace.steps_run <= n;
    }
    REQUIRE(report(8, "200 random sum/dominant runs monotone, done in <= n steps", ok));
}

TEST_CASE("criterion 9: repeated CLI invocations are byte-identical") {
    const std::string cli = MULTICASCADE_CLI_PATH;
    const auto dir = std::filesystem::temp_directory_path() / "mc_acceptance";
    std::filesystem::create_directories(dir);
    auto invoke = [&](const std::string& args, const std::string& out) {
        const std::string cmd = "\"" + cli + "\" " + args + " --output " +
                                (dir / out).string();
        const int status = std::system(cmd.c_str());
        return status == 0;
    };
    const std::vector<std::string> commands{
        "run --nodes 300 --layers 2 --edge-prob 0.1 --payoff-a 2,2 --payoff-b 1,1 "
        "--seed-fraction 0.25 --rule random --max-steps 50 --rng-seed 42",
        "sweep --sweep seed_fraction --grid 0.1,0.25 --samples 3 --nodes 200 "
        "--rng-seed 7",
        "sweep --sweep edge_probability --grid 0.05,0.2 --samples 2 --nodes 150 "
        "--rng-seed 3",
        "analytic --nodes 500 --layers 2 --edge-prob 0.1 --payoff-a 2,2 "
        "--payoff-b 1,1 --seed-fraction 0.25 --steps 50 --rng-seed 1",
        "compare --grid 0.2,0.3 --samples 2 --nodes 150 --rng-seed 9",
    };
    bool ok = true;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const std::string f1 = "out_" + std::to_string(i) + "_a.csv";
        const std::string f2 = "out_" + std::to_string(i) + "_b.csv";
        const bool ran = invoke(commands[i], f1) && invoke(commands[i], f2);
        const bool same =
            ran && read_text_file((dir / f1).string()) ==
                       read_text_file((dir / f2).string());
        CHECK(ran);
        CHECK(same);
        ok = ok && ran && same;
    }
    std::filesystem::remove_all(dir);
    REQUIRE(report(9, "same --rng-seed reproduces output byte for byte", ok));
}
