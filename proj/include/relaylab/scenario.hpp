#pragma once

#include <map>
#include <utility>
#include <vector>

namespace relaylab {

/// Node numbering: 0 is the relay, 1..n are users, kDestNode the destination.
using NodeId = int;
inline constexpr NodeId kRelayNode = 0;
inline constexpr NodeId kDestNode = -1;

/// Pairwise node distances (meters). Distances are stored symmetrically;
/// only links that are ever used need to be present.
class Topology {
public:
    Topology() = default;
    explicit Topology(int n_users);

    /// Star layout: every user at the same distance from relay/destination.
    static Topology symmetric(int n_users, double user_relay_m,
                              double user_dest_m, double relay_dest_m);

    void set_distance(NodeId a, NodeId b, double meters);
    double distance(NodeId a, NodeId b) const;
    bool has_distance(NodeId a, NodeId b) const;

    int n_users() const { return n_users_; }

private:
    int n_users_ = 0;
    std::map<std::pair<NodeId, NodeId>, double> dist_;
};

/// Physical-layer parameters of the SINR-threshold Rayleigh model.
struct PhyConfig {
    double gamma_dest = 0.2;        // SINR threshold at the destination
    double gamma_relay = 0.2;       // SINR threshold at the relay
    double path_loss_exp = 4.0;     // alpha, in [2, 7]
    double self_interference = 1.0; // g, in [0, 1]; 0 = perfect cancellation
    std::vector<double> user_tx_power_w;  // per user, watts
    double relay_tx_power_w = 1e-2;
    double noise_dest_w = 1e-11;
    double noise_relay_w = 1e-11;
    // Rayleigh fading parameter v(i,j); defaults to 1 on every link.
    std::map<std::pair<NodeId, NodeId>, double> fading_v;

    double gamma_at(NodeId receiver) const;
    double noise_at(NodeId receiver) const;
    double tx_power(NodeId node) const;
    double fading(NodeId i, NodeId j) const;
    void set_fading(NodeId i, NodeId j, double v);
};

/// Random-access parameters: user attempt probabilities, relay attempt
/// probability, and the relay's receiver/transmitter activation gates.
struct AccessConfig {
    std::vector<double> q;  // per-user transmit probability
    double q0 = 0.95;       // relay attempt probability when backlogged
    double p_rx = 1.0;      // receiver activation probability
    double p_tx = 1.0;      // transmitter activation probability

    int n_users() const { return static_cast<int>(q.size()); }
};

/// The single input record: topology + physical layer + access layer.
struct Scenario {
    Topology topology;
    PhyConfig phy;
    AccessConfig access;

    int n_users() const { return access.n_users(); }
    /// True when every user shares distances, power, fading and q.
    bool symmetric_users() const;
    /// Checks all module-level invariants; throws ConfigError on violation.
    void validate() const;
};

/// Default scenario: Table-style parameters (users 60 m from the relay,
/// 130 m from the destination, relay 80 m from the destination, alpha = 4,
/// 1 mW users / 10 mW relay, 1e-11 W noise, q = 0.1, q0 = 0.95), with
/// gamma = 0.2, g = 1 and both activation gates on.
Scenario default_scenario(int n_users);

}  // namespace relaylab
