#include "relaylab/scenario.hpp"

#include <cmath>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab {

namespace {

std::pair<NodeId, NodeId> link_key(NodeId a, NodeId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string link_name(NodeId a, NodeId b) {
    auto name = [](NodeId n) {
        if (n == kDestNode) return std::string("d");
        return std::to_string(n);
    };
    return "(" + name(a) + "," + name(b) + ")";
}

}  // namespace

Topology::Topology(int n_users) : n_users_(n_users) {
    if (n_users < 0) throw InvalidTopologyError("negative user count");
}

Topology Topology::symmetric(int n_users, double user_relay_m,
                             double user_dest_m, double relay_dest_m) {
    Topology t(n_users);
    t.set_distance(kRelayNode, kDestNode, relay_dest_m);
    for (NodeId u = 1; u <= n_users; ++u) {
        t.set_distance(u, kRelayNode, user_relay_m);
        t.set_distance(u, kDestNode, user_dest_m);
    }
    return t;
}

void Topology::set_distance(NodeId a, NodeId b, double meters) {
    if (a == b) throw InvalidTopologyError("self-distance for node " +
                                           std::to_string(a));
    if (!(meters > 0.0))
        throw InvalidTopologyError("non-positive distance for link " +
                                   link_name(a, b));
    dist_[link_key(a, b)] = meters;
}

double Topology::distance(NodeId a, NodeId b) const {
    auto it = dist_.find(link_key(a, b));
    if (it == dist_.end())
        throw MissingLinkError("no distance for link " + link_name(a, b));
    return it->second;
}

bool Topology::has_distance(NodeId a, NodeId b) const {
    return dist_.count(link_key(a, b)) > 0;
}

double PhyConfig::gamma_at(NodeId receiver) const {
    if (receiver == kDestNode) return gamma_dest;
    if (receiver == kRelayNode) return gamma_relay;
    throw ConfigError("no SINR threshold configured for receiver " +
                      std::to_string(receiver));
}

double PhyConfig::noise_at(NodeId receiver) const {
    if (receiver == kDestNode) return noise_dest_w;
    if (receiver == kRelayNode) return noise_relay_w;
    throw ConfigError("no noise power configured for receiver " +
                      std::to_string(receiver));
}

double PhyConfig::tx_power(NodeId node) const {
    if (node == kRelayNode) return relay_tx_power_w;
    if (node >= 1 && node <= static_cast<NodeId>(user_tx_power_w.size()))
        return user_tx_power_w[static_cast<std::size_t>(node - 1)];
    throw ConfigError("no transmit power configured for node " +
                      std::to_string(node));
}

double PhyConfig::fading(NodeId i, NodeId j) const {
    auto it = fading_v.find(link_key(i, j));
    return it == fading_v.end() ? 1.0 : it->second;
}

void PhyConfig::set_fading(NodeId i, NodeId j, double v) {
    if (!(v > 0.0)) throw ConfigError("fading parameter must be positive");
    fading_v[link_key(i, j)] = v;
}

bool Scenario::symmetric_users() const {
    const int n = n_users();
    if (n <= 1) return true;
    auto same = [](double a, double b) { return a == b; };
    for (int u = 2; u <= n; ++u) {
        if (!same(topology.distance(u, kRelayNode),
                  topology.distance(1, kRelayNode)) ||
            !same(topology.distance(u, kDestNode),
                  topology.distance(1, kDestNode)) ||
            !same(phy.user_tx_power_w[static_cast<std::size_t>(u - 1)],
                  phy.user_tx_power_w[0]) ||
            !same(access.q[static_cast<std::size_t>(u - 1)], access.q[0]) ||
            !same(phy.fading(u, kRelayNode), phy.fading(1, kRelayNode)) ||
            !same(phy.fading(u, kDestNode), phy.fading(1, kDestNode)))
            return false;
    }
    return true;
}

void Scenario::validate() const {
    const int n = n_users();
    if (n < 1) throw ConfigError("scenario needs at least one user");
    if (topology.n_users() != n)
        throw ConfigError("topology/access user counts differ");
    if (static_cast<int>(phy.user_tx_power_w.size()) != n)
        throw ConfigError("user_tx_power_w size must equal the user count");

    auto prob = [](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError(std::string(what) + " must lie in [0,1]");
    };
    prob(access.q0, "q0");
    prob(access.p_rx, "p_rx");
    prob(access.p_tx, "p_tx");
    for (double qi : access.q) prob(qi, "q");

    if (!(phy.gamma_dest >= 0.0) || !(phy.gamma_relay >= 0.0))
        throw ConfigError("SINR thresholds must be >= 0");
    if (!(phy.path_loss_exp >= 2.0 && phy.path_loss_exp <= 7.0))
        throw ConfigError("path loss exponent must lie in [2,7]");
    prob(phy.self_interference, "self-interference coefficient g");
    if (!(phy.relay_tx_power_w > 0.0))
        throw ConfigError("relay transmit power must be positive");
    for (double p : phy.user_tx_power_w)
        if (!(p > 0.0)) throw ConfigError("user transmit power must be positive");
    if (!(phy.noise_dest_w > 0.0) || !(phy.noise_relay_w > 0.0))
        throw ConfigError("noise power must be positive");
    for (const auto& [key, v] : phy.fading_v)
        if (!(v > 0.0)) throw ConfigError("fading parameter must be positive");

    // Every link the model evaluates must be present and positive.
    topology.distance(kRelayNode, kDestNode);
    for (NodeId u = 1; u <= n; ++u) {
        topology.distance(u, kRelayNode);
        topology.distance(u, kDestNode);
    }
}

Scenario default_scenario(int n_users) {
    Scenario s;
    s.topology = Topology::symmetric(n_users, 60.0, 130.0, 80.0);
    s.phy.gamma_dest = 0.2;
    s.phy.gamma_relay = 0.2;
    s.phy.path_loss_exp = 4.0;
    s.phy.self_interference = 1.0;
    s.phy.user_tx_power_w.assign(static_cast<std::size_t>(n_users), 1e-3);
    s.phy.relay_tx_power_w = 1e-2;
    s.phy.noise_dest_w = 1e-11;
    s.phy.noise_relay_w = 1e-11;
    s.access.q.assign(static_cast<std::size_t>(n_users), 0.1);
    s.access.q0 = 0.95;
    s.access.p_rx = 1.0;
    s.access.p_tx = 1.0;
    return s;
}

}  // namespace relaylab
