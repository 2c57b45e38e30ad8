#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/optimizer.hpp"
#include "relaylab/queue_analytics.hpp"
#include "relaylab/scenario_io.hpp"
#include "relaylab/simulator.hpp"
#include "relaylab/sweep.hpp"
#include "relaylab/throughput.hpp"

namespace {

using nlohmann::json;
using namespace relaylab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitValidation = 4;

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

json queue_to_json(const QueueMetrics& q) {
    json j;
    j["lambda0"] = q.lambda0;
    j["lambda1"] = q.lambda1;
    j["lambda"] = q.lambda;
    j["mu"] = q.mu;
    j["p_empty"] = q.stable ? json(q.p_empty) : json(nullptr);
    j["q_bar"] = q.stable ? number_or_null(q.q_bar) : json(nullptr);
    j["q0_min"] = q.q0_min ? json(*q.q0_min) : json(nullptr);
    j["stable"] = q.stable;
    return j;
}

json throughput_to_json(const ThroughputReport& t) {
    json j;
    j["t_direct"] = t.t_direct;
    j["t_relayed"] = t.t_relayed;
    j["t_total"] = t.t_total;
    j["t_net"] = t.t_net;
    j["per_user_t"] = t.t_net / static_cast<double>(t.t_total.size());
    return j;
}

json estimate_to_json(const MetricEstimate& e) {
    return json{{"value", e.value}, {"se", e.se}};
}

json stats_to_json(const SimStats& st) {
    json j;
    j["slots"] = st.slots;
    j["warmup"] = st.warmup;
    j["measured"] = st.measured;
    j["seed"] = st.seed;
    j["batches"] = st.batches;
    j["lambda"] = estimate_to_json(st.lambda);
    j["mu"] = estimate_to_json(st.mu);
    j["mu_per_attempt"] = estimate_to_json(st.mu_per_attempt);
    j["departures_per_slot"] = estimate_to_json(st.departures_per_slot);
    j["p_empty"] = estimate_to_json(st.p_empty);
    j["q_bar"] = estimate_to_json(st.q_bar);
    j["t_net"] = estimate_to_json(st.t_net);
    j["t_per_user_avg"] = estimate_to_json(st.t_total_avg);
    json per_user = json::array();
    for (std::size_t u = 0; u < st.t_total.size(); ++u)
        per_user.push_back(json{{"t_direct", estimate_to_json(st.t_direct[u])},
                                {"t_relayed", estimate_to_json(st.t_relayed[u])},
                                {"t_total", estimate_to_json(st.t_total[u])}});
    j["per_user"] = per_user;
    j["queue_growth_slope"] = st.queue_growth_slope;
    j["queue_growth_se"] = st.queue_growth_se;
    j["diverging"] = st.diverging;
    j["flow"] = json{{"enqueued", st.enqueued},
                     {"dequeued", st.dequeued},
                     {"final_queue", st.final_queue}};
    return j;
}

void emit(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot write to " + out_path);
        out << text;
    }
}

std::string route_name(const Scenario& s) {
    if (s.n_users() == 1) return "one_user";
    if (s.symmetric_users()) return "symmetric";
    if (s.n_users() == 2) return "two_user";
    return "asymmetric_enumerated";
}

int cmd_analyze(const std::string& config, const std::string& out,
                bool allow_unstable, const std::string& dump_config) {
    const Scenario s = load_scenario(config);
    if (!dump_config.empty()) emit(scenario_to_json(s), dump_config);

    const std::string route = route_name(s);
    std::cerr << "route: " << route << "\n";

    const QueueMetrics queue = analyze_queue(s);
    json doc;
    doc["route"] = route;
    doc["queue"] = queue_to_json(queue);
    if (queue.stable) {
        doc["throughput"] = throughput_to_json(analyze_throughput(s, queue));
    } else {
        doc["throughput"] = nullptr;
    }
    emit(doc, out);

    if (!queue.stable && !allow_unstable) {
        std::cerr << "relay queue unstable (lambda1 = " << queue.lambda1
                  << " >= mu = " << queue.mu
                  << "); rerun with --allow-unstable to accept\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config, const std::string& out) {
    SweepSpec spec = load_sweep_spec(config);
    if (!out.empty()) spec.output = out;
    const auto rows = run_sweep(spec);
    if (spec.output.empty() || spec.output == "-") {
        write_sweep_csv(std::cout, rows);
    } else {
        std::ofstream f(spec.output);
        if (!f) throw ConfigError("cannot write to " + spec.output);
        write_sweep_csv(f, rows);
    }
    return kExitOk;
}

int cmd_optimize(const std::string& config, const std::string& out, int grid,
                 bool refine, const std::string& region_out) {
    const Scenario s = load_scenario(config);
    const OptimizationResult res = optimize(s, grid, refine);

    json doc;
    doc["feasible"] = res.feasible;
    doc["grid_resolution"] = res.grid_resolution;
    doc["refinement_steps"] = res.refinement_steps;
    if (res.feasible) {
        doc["p_rx_opt"] = res.p_rx;
        doc["p_tx_opt"] = res.p_tx;
        doc["t_net_opt"] = res.t_net;
        doc["energy_proxy"] = res.energy_proxy;
        doc["stability_margin"] = res.stability_margin;
    } else {
        doc["min_stability_gap"] = res.min_gap;
    }
    emit(doc, out);

    if (!region_out.empty()) {
        const StabilityRegion region = stability_region(s, grid);
        std::ofstream f(region_out);
        if (!f) throw ConfigError("cannot write to " + region_out);
        f << "p_rx,p_tx,feasible,lambda,mu\n";
        const double step = 1.0 / (grid - 1);
        char buf[128];
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i) *
                                            static_cast<std::size_t>(grid) +
                                        static_cast<std::size_t>(j);
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%d,%.12g,%.12g\n",
                              i * step, j * step,
                              region.feasible[idx] ? 1 : 0, region.lambda[idx],
                              region.mu[idx]);
                f << buf;
            }
    }
    return res.feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const std::string& config, const std::string& out,
                 std::uint64_t slots, std::uint64_t seed) {
    const Scenario s = load_scenario(config);
    const std::uint64_t warmup = std::min<std::uint64_t>(10000, slots / 10);
    const SimStats st = run(s, slots, seed, warmup);
    emit(stats_to_json(st), out);
    return kExitOk;
}

int cmd_validate(const std::string& config, const std::string& out,
                 std::uint64_t slots, std::uint64_t seed) {
    const Scenario s = load_scenario(config);
    if (slots < 100000)
        std::cerr << "warning: " << slots
                  << " slots gives low statistical power; 1e6 recommended\n";
    const ValidationReport rep = validate(s, slots, seed);

    std::printf("%-16s %14s %14s %12s %8s %s\n", "metric", "analytic",
                "empirical", "se", "z", "flag");
    for (const auto& r : rep.rows)
        std::printf("%-16s %14.8f %14.8f %12.6g %8.2f %s\n", r.metric.c_str(),
                    r.analytic, r.empirical, r.se, r.z,
                    r.flagged ? "FLAGGED" : "");
    if (!out.empty()) {
        json doc;
        doc["any_flagged"] = rep.any_flagged;
        json rows = json::array();
        for (const auto& r : rep.rows)
            rows.push_back(json{{"metric", r.metric},
                                {"analytic", r.analytic},
                                {"empirical", r.empirical},
                                {"se", r.se},
                                {"z", r.z},
                                {"flagged", r.flagged}});
        doc["rows"] = rows;
        doc["stats"] = stats_to_json(rep.stats);
        emit(doc, out);
    }
    return rep.any_flagged ? kExitValidation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaylab: throughput, queue analytics, optimization and "
                 "simulation for a random-access network with a "
                 "probabilistically activated full-duplex relay"};
    app.require_subcommand(1);

    std::string config, out, dump_config, region_out;
    std::uint64_t slots = 1000000, seed = 1;
    int grid = 41;
    bool refine = false, allow_unstable = false;

    auto* analyze = app.add_subcommand(
        "analyze", "Closed-form queue metrics and throughput");
    analyze->add_option("--config", config, "scenario JSON")->required();
    analyze->add_option("--out", out, "result JSON path ('-' for stdout)");
    analyze->add_flag("--allow-unstable", allow_unstable,
                      "exit 0 even when the relay queue is unstable");
    analyze->add_option("--dump-config", dump_config,
                        "write the normalized scenario JSON here");

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    sweep->add_option("--config", config, "sweep spec JSON")->required();
    sweep->add_option("--out", out, "CSV output path ('-' for stdout)");

    auto* opt = app.add_subcommand(
        "optimize", "Maximize T_net over the activation probabilities");
    opt->add_option("--config", config, "scenario JSON")->required();
    opt->add_option("--out", out, "result JSON path");
    opt->add_option("--grid", grid, "grid resolution per axis (>= 11)");
    opt->add_flag("--refine", refine, "golden-section refinement");
    opt->add_option("--region-out", region_out,
                    "also export the stability region as CSV");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation");
    sim->add_option("--config", config, "scenario JSON")->required();
    sim->add_option("--out", out, "stats JSON path");
    sim->add_option("--slots", slots, "slots to simulate");
    sim->add_option("--seed", seed, "RNG seed");

    auto* val = app.add_subcommand(
        "validate", "Compare simulation against the analytic predictions");
    val->add_option("--config", config, "scenario JSON")->required();
    val->add_option("--out", out, "report JSON path");
    val->add_option("--slots", slots, "slots to simulate");
    val->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(config, out, allow_unstable, dump_config);
        if (app.got_subcommand(sweep)) return cmd_sweep(config, out);
        if (app.got_subcommand(opt))
            return cmd_optimize(config, out, grid, refine, region_out);
        if (app.got_subcommand(sim)) return cmd_simulate(config, out, slots, seed);
        if (app.got_subcommand(val)) return cmd_validate(config, out, slots, seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EnumerationLimitError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InstabilityError& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
