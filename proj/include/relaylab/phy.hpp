#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "relaylab/scenario.hpp"

namespace relaylab {

/// Received power factor h(i,j) = P_tx(i) * r(i,j)^(-alpha), watts.
double path_gain(NodeId i, NodeId j, const Topology& topo,
                 const PhyConfig& phy);

/// SINR-threshold success probability of link (i -> j) while the nodes in
/// transmit_set transmit simultaneously (i must be among them). Rayleigh
/// fading with per-link parameter v; when the receiver itself transmits,
/// residual self-interference attenuates reception by (1 + gamma r^alpha g)^-1.
double success_probability(NodeId i, NodeId j,
                           std::span<const NodeId> transmit_set,
                           const Topology& topo, const PhyConfig& phy);

/// Success probabilities of every link the star network uses, precomputed
/// from a scenario for bitmask-indexed transmit sets. Bit u-1 of user_mask
/// set means user u transmits.
class LinkModel {
public:
    explicit LinkModel(const Scenario& s);

    /// P^d_{u/T}: user u -> destination, T = mask users (+ relay if relay_on).
    double user_dest(int user, std::uint64_t user_mask, bool relay_on) const;
    /// P^0_{u/T}: user u -> relay; self-interference applies when relay_on.
    double user_relay(int user, std::uint64_t user_mask, bool relay_on) const;
    /// P^d_{0/T+0}: relay -> destination with mask users also transmitting.
    double relay_dest(std::uint64_t user_mask) const;

    int n_users() const { return n_; }

private:
    int n_;
    // exp(-gamma eta / (v h)) per user and for the relay->dest link
    std::vector<double> exp_user_dest_, exp_user_relay_;
    double exp_relay_dest_;
    // self-interference factor (1 + gamma_relay r(u,0)^alpha g)^-1 per user
    std::vector<double> si_user_relay_;
    // pairwise interference factors 1/(1 + gamma vh_k / vh_i) by receiver
    std::vector<std::vector<double>> f_dest_, f_relay_;  // [tx user][competitor user]
    std::vector<double> f_dest_relay_competitor_;  // relay interfering at dest
    std::vector<double> f_relay_dest_competitor_;  // users interfering with relay->dest
};

/// Success probabilities labeled the way the symmetric-user analysis
/// consumes them. Index k is the number of transmitting users, j is 1 when
/// the relay transmits in the same slot.
struct SymmetricLinkTable {
    int n = 0;
    std::vector<double> relay_dest;               // P_{0d,k}, k = 0..n
    std::array<std::vector<double>, 2> user_dest;  // P_{d,k,j}, k = 1..n at [k]
    std::array<std::vector<double>, 2> user_relay; // P_{0,k,j}, k = 1..n at [k]
};

/// Builds the symmetric-case label table; requires symmetric users.
SymmetricLinkTable labeled_success_probs(const Scenario& s);

}  // namespace relaylab
