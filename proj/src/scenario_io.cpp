#include "relaylab/scenario_io.hpp"

#include <fstream>
#include <set>
#include <vector>

#include "relaylab/errors.hpp"

namespace relaylab {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

double number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

std::vector<double> scalar_or_per_user(const json& v, int n,
                                       const std::string& where) {
    if (v.is_number())
        return std::vector<double>(static_cast<std::size_t>(n),
                                   v.get<double>());
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != n)
            throw ConfigError(where + ": array must have one entry per user");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& e : v) out.push_back(number(e, where));
        return out;
    }
    throw ConfigError(where + ": expected a number or per-user array");
}

// scalar when uniform, per-user array otherwise
json collapse(const std::vector<double>& v) {
    bool uniform = true;
    for (double x : v) uniform = uniform && x == v.front();
    if (uniform) return v.front();
    return json(v);
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    check_keys(doc, "scenario", {"users", "topology", "phy", "access"});
    if (!doc.contains("users") || !doc["users"].is_number_integer())
        throw ConfigError("scenario: \"users\" (integer) is required");
    const int n = doc["users"].get<int>();
    if (n < 1) throw ConfigError("scenario: need at least one user");

    Scenario s = default_scenario(n);

    if (doc.contains("topology")) {
        const json& t = doc["topology"];
        check_keys(t, "topology", {"relay_dest_m", "user_relay_m",
                                   "user_dest_m"});
        double relay_dest = s.topology.distance(kRelayNode, kDestNode);
        std::vector<double> user_relay(static_cast<std::size_t>(n), 60.0);
        std::vector<double> user_dest(static_cast<std::size_t>(n), 130.0);
        if (t.contains("relay_dest_m"))
            relay_dest = number(t["relay_dest_m"], "topology.relay_dest_m");
        if (t.contains("user_relay_m"))
            user_relay =
                scalar_or_per_user(t["user_relay_m"], n, "topology.user_relay_m");
        if (t.contains("user_dest_m"))
            user_dest =
                scalar_or_per_user(t["user_dest_m"], n, "topology.user_dest_m");
        Topology topo(n);
        topo.set_distance(kRelayNode, kDestNode, relay_dest);
        for (int u = 1; u <= n; ++u) {
            topo.set_distance(u, kRelayNode,
                              user_relay[static_cast<std::size_t>(u - 1)]);
            topo.set_distance(u, kDestNode,
                              user_dest[static_cast<std::size_t>(u - 1)]);
        }
        s.topology = topo;
    }

    if (doc.contains("phy")) {
        const json& p = doc["phy"];
        check_keys(p, "phy",
                   {"sinr_threshold", "path_loss_exponent",
                    "self_interference", "user_tx_power_w", "relay_tx_power_w",
                    "noise_w", "fading_v"});
        if (p.contains("sinr_threshold")) {
            const json& g = p["sinr_threshold"];
            if (g.is_object()) {
                check_keys(g, "phy.sinr_threshold", {"dest", "relay"});
                if (g.contains("dest"))
                    s.phy.gamma_dest = number(g["dest"], "phy.sinr_threshold.dest");
                if (g.contains("relay"))
                    s.phy.gamma_relay =
                        number(g["relay"], "phy.sinr_threshold.relay");
            } else {
                s.phy.gamma_dest = number(g, "phy.sinr_threshold");
                s.phy.gamma_relay = s.phy.gamma_dest;
            }
        }
        if (p.contains("path_loss_exponent"))
            s.phy.path_loss_exp =
                number(p["path_loss_exponent"], "phy.path_loss_exponent");
        if (p.contains("self_interference"))
            s.phy.self_interference =
                number(p["self_interference"], "phy.self_interference");
        if (p.contains("user_tx_power_w"))
            s.phy.user_tx_power_w = scalar_or_per_user(
                p["user_tx_power_w"], n, "phy.user_tx_power_w");
        if (p.contains("relay_tx_power_w"))
            s.phy.relay_tx_power_w =
                number(p["relay_tx_power_w"], "phy.relay_tx_power_w");
        if (p.contains("noise_w")) {
            const json& e = p["noise_w"];
            if (e.is_object()) {
                check_keys(e, "phy.noise_w", {"dest", "relay"});
                if (e.contains("dest"))
                    s.phy.noise_dest_w = number(e["dest"], "phy.noise_w.dest");
                if (e.contains("relay"))
                    s.phy.noise_relay_w = number(e["relay"], "phy.noise_w.relay");
            } else {
                s.phy.noise_dest_w = number(e, "phy.noise_w");
                s.phy.noise_relay_w = s.phy.noise_dest_w;
            }
        }
        if (p.contains("fading_v")) {
            const json& f = p["fading_v"];
            check_keys(f, "phy.fading_v",
                       {"user_relay", "user_dest", "relay_dest"});
            if (f.contains("user_relay")) {
                const auto v = scalar_or_per_user(f["user_relay"], n,
                                                  "phy.fading_v.user_relay");
                for (int u = 1; u <= n; ++u)
                    s.phy.set_fading(u, kRelayNode,
                                     v[static_cast<std::size_t>(u - 1)]);
            }
            if (f.contains("user_dest")) {
                const auto v = scalar_or_per_user(f["user_dest"], n,
                                                  "phy.fading_v.user_dest");
                for (int u = 1; u <= n; ++u)
                    s.phy.set_fading(u, kDestNode,
                                     v[static_cast<std::size_t>(u - 1)]);
            }
            if (f.contains("relay_dest"))
                s.phy.set_fading(kRelayNode, kDestNode,
                                 number(f["relay_dest"],
                                        "phy.fading_v.relay_dest"));
        }
    }

    if (doc.contains("access")) {
        const json& a = doc["access"];
        check_keys(a, "access", {"q", "q0", "p_rx", "p_tx"});
        if (a.contains("q"))
            s.access.q = scalar_or_per_user(a["q"], n, "access.q");
        if (a.contains("q0")) s.access.q0 = number(a["q0"], "access.q0");
        if (a.contains("p_rx")) s.access.p_rx = number(a["p_rx"], "access.p_rx");
        if (a.contains("p_tx")) s.access.p_tx = number(a["p_tx"], "access.p_tx");
    }

    try {
        s.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& s) {
    const int n = s.n_users();
    std::vector<double> user_relay, user_dest;
    for (int u = 1; u <= n; ++u) {
        user_relay.push_back(s.topology.distance(u, kRelayNode));
        user_dest.push_back(s.topology.distance(u, kDestNode));
    }

    json doc;
    doc["users"] = n;
    doc["topology"] = {
        {"relay_dest_m", s.topology.distance(kRelayNode, kDestNode)},
        {"user_relay_m", collapse(user_relay)},
        {"user_dest_m", collapse(user_dest)},
    };
    json gamma;
    if (s.phy.gamma_dest == s.phy.gamma_relay)
        gamma = s.phy.gamma_dest;
    else
        gamma = {{"dest", s.phy.gamma_dest}, {"relay", s.phy.gamma_relay}};
    json noise;
    if (s.phy.noise_dest_w == s.phy.noise_relay_w)
        noise = s.phy.noise_dest_w;
    else
        noise = {{"dest", s.phy.noise_dest_w}, {"relay", s.phy.noise_relay_w}};
    doc["phy"] = {
        {"sinr_threshold", gamma},
        {"path_loss_exponent", s.phy.path_loss_exp},
        {"self_interference", s.phy.self_interference},
        {"user_tx_power_w", collapse(s.phy.user_tx_power_w)},
        {"relay_tx_power_w", s.phy.relay_tx_power_w},
        {"noise_w", noise},
    };
    if (!s.phy.fading_v.empty()) {
        std::vector<double> v_ur, v_ud;
        for (int u = 1; u <= n; ++u) {
            v_ur.push_back(s.phy.fading(u, kRelayNode));
            v_ud.push_back(s.phy.fading(u, kDestNode));
        }
        doc["phy"]["fading_v"] = {
            {"user_relay", collapse(v_ur)},
            {"user_dest", collapse(v_ud)},
            {"relay_dest", s.phy.fading(kRelayNode, kDestNode)},
        };
    }
    doc["access"] = {
        {"q", collapse(s.access.q)},
        {"q0", s.access.q0},
        {"p_rx", s.access.p_rx},
        {"p_tx", s.access.p_tx},
    };
    return doc;
}

}  // namespace relaylab
