#include "relaylab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "relaylab/errors.hpp"
#include "relaylab/optimizer.hpp"
#include "relaylab/parallel.hpp"
#include "relaylab/queue_analytics.hpp"
#include "relaylab/scenario_io.hpp"
#include "relaylab/throughput.hpp"

namespace relaylab {

namespace {

using nlohmann::json;

void require_probability(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(std::string("sweep: ") + what +
                          " values must lie in [0,1]");
}

}  // namespace

SweepSpec::Variable SweepSpec::variable_from_name(const std::string& name) {
    if (name == "n") return Variable::N;
    if (name == "gamma") return Variable::Gamma;
    if (name == "g") return Variable::G;
    if (name == "q0") return Variable::Q0;
    if (name == "q") return Variable::Q;
    if (name == "p_rx") return Variable::PRx;
    if (name == "p_tx") return Variable::PTx;
    throw ConfigError("sweep: unknown variable \"" + name +
                      "\" (expected n|gamma|g|q0|q|p_rx|p_tx)");
}

std::string SweepSpec::variable_name(Variable v) {
    switch (v) {
        case Variable::N: return "n";
        case Variable::Gamma: return "gamma";
        case Variable::G: return "g";
        case Variable::Q0: return "q0";
        case Variable::Q: return "q";
        case Variable::PRx: return "p_rx";
        case Variable::PTx: return "p_tx";
    }
    return "?";
}

SweepSpec sweep_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("sweep: expected an object");
    const std::set<std::string> allowed{"variable", "values",   "scenario",
                                        "optimize", "grid",     "refine",
                                        "output"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("sweep: unknown key \"" + it.key() + "\"");

    SweepSpec spec;
    if (!doc.contains("variable") || !doc["variable"].is_string())
        throw ConfigError("sweep: \"variable\" (string) is required");
    spec.variable = SweepSpec::variable_from_name(doc["variable"].get<std::string>());

    if (!doc.contains("values") || !doc["values"].is_array() ||
        doc["values"].empty())
        throw ConfigError("sweep: \"values\" (non-empty array) is required");
    for (const auto& v : doc["values"]) {
        if (!v.is_number())
            throw ConfigError("sweep: values must be numbers");
        spec.values.push_back(v.get<double>());
    }

    spec.base = doc.contains("scenario") ? scenario_from_json(doc["scenario"])
                                         : default_scenario(5);
    if (doc.contains("optimize")) {
        if (!doc["optimize"].is_boolean())
            throw ConfigError("sweep: \"optimize\" must be a boolean");
        spec.optimize = doc["optimize"].get<bool>();
    }
    if (doc.contains("grid")) {
        if (!doc["grid"].is_number_integer())
            throw ConfigError("sweep: \"grid\" must be an integer");
        spec.grid = doc["grid"].get<int>();
        if (spec.grid < 11) throw ConfigError("sweep: grid must be >= 11");
    }
    if (doc.contains("refine")) {
        if (!doc["refine"].is_boolean())
            throw ConfigError("sweep: \"refine\" must be a boolean");
        spec.refine = doc["refine"].get<bool>();
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string())
            throw ConfigError("sweep: \"output\" must be a string");
        spec.output = doc["output"].get<std::string>();
    }

    // every swept value must be in the variable's legal range
    for (double v : spec.values) apply_sweep_value(spec, v);
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep spec: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return sweep_spec_from_json(doc);
}

Scenario apply_sweep_value(const SweepSpec& spec, double value) {
    Scenario s = spec.base;
    switch (spec.variable) {
        case SweepSpec::Variable::N: {
            if (!(value >= 1.0) || value != std::floor(value))
                throw ConfigError("sweep: n values must be positive integers");
            if (!spec.base.symmetric_users())
                throw ConfigError(
                    "sweep: the user-count sweep needs a symmetric base "
                    "scenario");
            const int n = static_cast<int>(value);
            s.topology = Topology::symmetric(
                n, spec.base.topology.distance(1, kRelayNode),
                spec.base.topology.distance(1, kDestNode),
                spec.base.topology.distance(kRelayNode, kDestNode));
            s.phy.user_tx_power_w.assign(static_cast<std::size_t>(n),
                                         spec.base.phy.user_tx_power_w[0]);
            s.access.q.assign(static_cast<std::size_t>(n),
                              spec.base.access.q[0]);
            break;
        }
        case SweepSpec::Variable::Gamma:
            if (!(value >= 0.0))
                throw ConfigError("sweep: gamma values must be >= 0");
            s.phy.gamma_dest = value;
            s.phy.gamma_relay = value;
            break;
        case SweepSpec::Variable::G:
            require_probability(value, "g");
            s.phy.self_interference = value;
            break;
        case SweepSpec::Variable::Q0:
            require_probability(value, "q0");
            s.access.q0 = value;
            break;
        case SweepSpec::Variable::Q:
            require_probability(value, "q");
            s.access.q.assign(s.access.q.size(), value);
            break;
        case SweepSpec::Variable::PRx:
            require_probability(value, "p_rx");
            s.access.p_rx = value;
            break;
        case SweepSpec::Variable::PTx:
            require_probability(value, "p_tx");
            s.access.p_tx = value;
            break;
    }
    s.validate();
    return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows(spec.values.size());
    parallel_for(0, static_cast<std::int64_t>(spec.values.size()),
                 [&](std::int64_t i) {
        const double value = spec.values[static_cast<std::size_t>(i)];
        SweepRow& row = rows[static_cast<std::size_t>(i)];
        row.value = value;
        Scenario s = apply_sweep_value(spec, value);

        if (spec.optimize) {
            const OptimizationResult opt = optimize(s, spec.grid, spec.refine);
            if (!opt.feasible) {
                row.stable = false;
                return;
            }
            s.access.p_rx = opt.p_rx;
            s.access.p_tx = opt.p_tx;
            row.p_rx = opt.p_rx;
            row.p_tx = opt.p_tx;
        } else {
            row.p_rx = s.access.p_rx;
            row.p_tx = s.access.p_tx;
        }

        const QueueMetrics queue = analyze_queue(s);
        row.stable = queue.stable;
        if (!queue.stable) return;
        const ThroughputReport thr = analyze_throughput(s, queue);
        row.t = thr.t_net / s.n_users();
        row.t_net = thr.t_net;
        row.p_empty = queue.p_empty;
        row.q_bar = queue.q_bar;
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", *v);
        return std::string(buf);
    };
    out << "value,T,T_net,P_rx_opt,P_tx_opt,P_empty,Q_bar,stable\n";
    for (const SweepRow& r : rows) {
        out << cell(r.value) << ',' << cell(r.t) << ',' << cell(r.t_net) << ','
            << cell(r.p_rx) << ',' << cell(r.p_tx) << ',' << cell(r.p_empty)
            << ',' << cell(r.q_bar) << ',' << (r.stable ? "true" : "false")
            << '\n';
    }
}

}  // namespace relaylab
