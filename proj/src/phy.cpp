#include "relaylab/phy.hpp"
#include <bit>

#include <algorithm>
#include <cmath>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab {

double path_gain(NodeId i, NodeId j, const Topology& topo,
                 const PhyConfig& phy) {
    if (i == j) throw ContractError("path_gain: i == j");
    const double r = topo.distance(i, j);
    return phy.tx_power(i) * std::pow(r, -phy.path_loss_exp);
}

double success_probability(NodeId i, NodeId j,
                           std::span<const NodeId> transmit_set,
                           const Topology& topo, const PhyConfig& phy) {
    if (std::find(transmit_set.begin(), transmit_set.end(), i) ==
        transmit_set.end())
        throw ContractError("success_probability: transmitter not in set");
    if (i == j) throw ContractError("success_probability: i == j");

    const double gamma = phy.gamma_at(j);
    const double eta = phy.noise_at(j);
    const double vh_i = phy.fading(i, j) * path_gain(i, j, topo, phy);

    double p = std::exp(-gamma * eta / vh_i);

    const bool receiver_transmits =
        std::find(transmit_set.begin(), transmit_set.end(), j) !=
        transmit_set.end();
    if (receiver_transmits) {
        const double r_alpha = std::pow(topo.distance(i, j), phy.path_loss_exp);
        p /= 1.0 + gamma * r_alpha * phy.self_interference;
    }

    for (NodeId k : transmit_set) {
        if (k == i || k == j) continue;
        const double vh_k = phy.fading(k, j) * path_gain(k, j, topo, phy);
        p /= 1.0 + gamma * vh_k / vh_i;
    }
    return p;
}

LinkModel::LinkModel(const Scenario& s) : n_(s.n_users()) {
    if (n_ > 64)
        throw ContractError("LinkModel: transmit-set masks support up to 64 users");
    const auto& topo = s.topology;
    const auto& phy = s.phy;

    std::vector<double> vh_dest(static_cast<std::size_t>(n_));
    std::vector<double> vh_relay(static_cast<std::size_t>(n_));
    exp_user_dest_.resize(static_cast<std::size_t>(n_));
    exp_user_relay_.resize(static_cast<std::size_t>(n_));
    si_user_relay_.resize(static_cast<std::size_t>(n_));

    for (int u = 1; u <= n_; ++u) {
        const std::size_t idx = static_cast<std::size_t>(u - 1);
        vh_dest[idx] = phy.fading(u, kDestNode) * path_gain(u, kDestNode, topo, phy);
        vh_relay[idx] = phy.fading(u, kRelayNode) * path_gain(u, kRelayNode, topo, phy);
        exp_user_dest_[idx] =
            std::exp(-phy.gamma_dest * phy.noise_dest_w / vh_dest[idx]);
        exp_user_relay_[idx] =
            std::exp(-phy.gamma_relay * phy.noise_relay_w / vh_relay[idx]);
        si_user_relay_[idx] =
            1.0 / (1.0 + phy.gamma_relay *
                             std::pow(topo.distance(u, kRelayNode),
                                      phy.path_loss_exp) *
                             phy.self_interference);
    }

    const double vh_rd = phy.fading(kRelayNode, kDestNode) *
                         path_gain(kRelayNode, kDestNode, topo, phy);
    exp_relay_dest_ = std::exp(-phy.gamma_dest * phy.noise_dest_w / vh_rd);

    f_dest_.assign(static_cast<std::size_t>(n_),
                   std::vector<double>(static_cast<std::size_t>(n_), 1.0));
    f_relay_ = f_dest_;
    f_dest_relay_competitor_.resize(static_cast<std::size_t>(n_));
    f_relay_dest_competitor_.resize(static_cast<std::size_t>(n_));

    for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < n_; ++k) {
            if (k == i) continue;
            const std::size_t ii = static_cast<std::size_t>(i);
            const std::size_t kk = static_cast<std::size_t>(k);
            f_dest_[ii][kk] =
                1.0 / (1.0 + phy.gamma_dest * vh_dest[kk] / vh_dest[ii]);
            f_relay_[ii][kk] =
                1.0 / (1.0 + phy.gamma_relay * vh_relay[kk] / vh_relay[ii]);
        }
        const std::size_t ii = static_cast<std::size_t>(i);
        f_dest_relay_competitor_[ii] =
            1.0 / (1.0 + phy.gamma_dest * vh_rd / vh_dest[ii]);
        f_relay_dest_competitor_[ii] =
            1.0 / (1.0 + phy.gamma_dest * vh_dest[ii] / vh_rd);
    }
}

double LinkModel::user_dest(int user, std::uint64_t user_mask,
                            bool relay_on) const {
    const std::size_t u = static_cast<std::size_t>(user - 1);
    if (!(user_mask >> u & 1))
        throw ContractError("user_dest: transmitter not in set");
    double p = exp_user_dest_[u];
    std::uint64_t rest = user_mask & ~(1ull << u);
    while (rest) {
        const int k = std::countr_zero(rest);
        rest &= rest - 1;
        p *= f_dest_[u][static_cast<std::size_t>(k)];
    }
    if (relay_on) p *= f_dest_relay_competitor_[u];
    return p;
}

double LinkModel::user_relay(int user, std::uint64_t user_mask,
                             bool relay_on) const {
    const std::size_t u = static_cast<std::size_t>(user - 1);
    if (!(user_mask >> u & 1))
        throw ContractError("user_relay: transmitter not in set");
    double p = exp_user_relay_[u];
    std::uint64_t rest = user_mask & ~(1ull << u);
    while (rest) {
        const int k = std::countr_zero(rest);
        rest &= rest - 1;
        p *= f_relay_[u][static_cast<std::size_t>(k)];
    }
    if (relay_on) p *= si_user_relay_[u];  // receiver transmitting: m = 1
    return p;
}

double LinkModel::relay_dest(std::uint64_t user_mask) const {
    double p = exp_relay_dest_;
    while (user_mask) {
        const int k = std::countr_zero(user_mask);
        user_mask &= user_mask - 1;
        p *= f_relay_dest_competitor_[static_cast<std::size_t>(k)];
    }
    return p;
}

SymmetricLinkTable labeled_success_probs(const Scenario& s) {
    if (!s.symmetric_users())
        throw ContractError("labeled_success_probs: users are not symmetric");
    const int n = s.n_users();
    const auto& topo = s.topology;
    const auto& phy = s.phy;

    const double vh_ud = phy.fading(1, kDestNode) * path_gain(1, kDestNode, topo, phy);
    const double vh_u0 = phy.fading(1, kRelayNode) * path_gain(1, kRelayNode, topo, phy);
    const double vh_rd = phy.fading(kRelayNode, kDestNode) *
                         path_gain(kRelayNode, kDestNode, topo, phy);

    const double exp_ud = std::exp(-phy.gamma_dest * phy.noise_dest_w / vh_ud);
    const double exp_u0 = std::exp(-phy.gamma_relay * phy.noise_relay_w / vh_u0);
    const double exp_rd = std::exp(-phy.gamma_dest * phy.noise_dest_w / vh_rd);

    // peer-user interference factors (equal powers make the ratio 1)
    const double f_ud_peer = 1.0 / (1.0 + phy.gamma_dest);
    const double f_u0_peer = 1.0 / (1.0 + phy.gamma_relay);
    // relay interfering with a user's link to the destination, and vice versa
    const double f_ud_relay = 1.0 / (1.0 + phy.gamma_dest * vh_rd / vh_ud);
    const double f_rd_peer = 1.0 / (1.0 + phy.gamma_dest * vh_ud / vh_rd);
    // residual self-interference at the transmitting relay (m = 1)
    const double si = 1.0 / (1.0 + phy.gamma_relay *
                                       std::pow(topo.distance(1, kRelayNode),
                                                phy.path_loss_exp) *
                                       phy.self_interference);

    SymmetricLinkTable t;
    t.n = n;
    t.relay_dest.resize(static_cast<std::size_t>(n) + 1);
    for (auto& v : t.user_dest) v.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (auto& v : t.user_relay) v.assign(static_cast<std::size_t>(n) + 1, 0.0);

    t.relay_dest[0] = exp_rd;
    for (int k = 1; k <= n; ++k)
        t.relay_dest[static_cast<std::size_t>(k)] =
            t.relay_dest[static_cast<std::size_t>(k - 1)] * f_rd_peer;

    double ud = exp_ud, u0 = exp_u0;  // running products over k-1 peers
    for (int k = 1; k <= n; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        t.user_dest[0][kk] = ud;
        t.user_dest[1][kk] = ud * f_ud_relay;
        t.user_relay[0][kk] = u0;
        t.user_relay[1][kk] = u0 * si;
        ud *= f_ud_peer;
        u0 *= f_u0_peer;
    }
    return t;
}

}  // namespace relaylab
