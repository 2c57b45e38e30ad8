#include "relaylab/throughput.hpp"
#include <bit>

#include <cstdint>
#include <numeric>

#include "relaylab/discrete.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/phy.hpp"

namespace relaylab {

namespace {

void require_stable(const QueueMetrics& queue) {
    if (!queue.stable)
        throw InstabilityError(
            "throughput undefined for an unstable relay queue",
            queue.lambda1 - queue.mu);
}

ThroughputReport finalize(std::vector<double> td, std::vector<double> tr,
                          double p_empty) {
    ThroughputReport rep;
    rep.t_direct = std::move(td);
    rep.t_relayed = std::move(tr);
    rep.t_total.resize(rep.t_direct.size());
    for (std::size_t i = 0; i < rep.t_direct.size(); ++i)
        rep.t_total[i] = rep.t_direct[i] + rep.t_relayed[i];
    rep.t_net = std::accumulate(rep.t_total.begin(), rep.t_total.end(), 0.0);
    rep.p_empty_used = p_empty;
    return rep;
}

}  // namespace

ThroughputReport throughput_symmetric(const Scenario& s,
                                      const QueueMetrics& queue) {
    s.validate();
    if (!s.symmetric_users())
        throw ContractError("throughput_symmetric: users are not symmetric");
    require_stable(queue);

    const int n = s.n_users();
    const double q = s.access.q[0];
    const double p_rx = s.access.p_rx;
    // probability the relay transmits in a slot
    const double relay_tx =
        s.access.q0 * s.access.p_tx * (1.0 - queue.p_empty);

    const auto table = labeled_success_probs(s);
    const auto w = binomial_pmf(n - 1, q);  // other users transmitting

    double td = 0.0, tr = 0.0;
    for (int k = 0; k <= n - 1; ++k) {
        const std::size_t tot = static_cast<std::size_t>(k) + 1;
        const double wk = q * w[static_cast<std::size_t>(k)];
        const double d0 = table.user_dest[0][tot];
        const double d1 = table.user_dest[1][tot];
        td += wk * (relay_tx * d1 + (1.0 - relay_tx) * d0);
        tr += wk * (relay_tx * (1.0 - d1) * p_rx * table.user_relay[1][tot] +
                    (1.0 - relay_tx) * (1.0 - d0) * p_rx *
                        table.user_relay[0][tot]);
    }

    return finalize(std::vector<double>(static_cast<std::size_t>(n), td),
                    std::vector<double>(static_cast<std::size_t>(n), tr),
                    queue.p_empty);
}

ThroughputReport throughput_two_user(const Scenario& s,
                                     const QueueMetrics& queue) {
    s.validate();
    if (s.n_users() != 2)
        throw ContractError("throughput_two_user: scenario must have 2 users");
    require_stable(queue);

    const LinkModel model(s);
    const double p_rx = s.access.p_rx;
    const double relay_tx =
        s.access.q0 * s.access.p_tx * (1.0 - queue.p_empty);

    std::vector<double> td(2, 0.0), tr(2, 0.0);
    for (int i = 1; i <= 2; ++i) {
        const int j = 3 - i;
        const double qi = s.access.q[static_cast<std::size_t>(i - 1)];
        const double qj = s.access.q[static_cast<std::size_t>(j - 1)];
        const std::uint64_t solo = 1ull << (i - 1);
        const std::uint64_t both = 3u;

        const double d_solo_on = model.user_dest(i, solo, true);
        const double d_both_on = model.user_dest(i, both, true);
        const double d_solo_off = model.user_dest(i, solo, false);
        const double d_both_off = model.user_dest(i, both, false);
        const double l_solo_on = model.user_relay(i, solo, true);
        const double l_both_on = model.user_relay(i, both, true);
        const double l_solo_off = model.user_relay(i, solo, false);
        const double l_both_off = model.user_relay(i, both, false);

        td[static_cast<std::size_t>(i - 1)] =
            relay_tx * qi * ((1.0 - qj) * d_solo_on + qj * d_both_on) +
            (1.0 - relay_tx) * qi *
                ((1.0 - qj) * d_solo_off + qj * d_both_off);
        tr[static_cast<std::size_t>(i - 1)] =
            relay_tx * qi *
                ((1.0 - qj) * (1.0 - d_solo_on) * p_rx * l_solo_on +
                 qj * (1.0 - d_both_on) * p_rx * l_both_on) +
            (1.0 - relay_tx) * qi *
                ((1.0 - qj) * (1.0 - d_solo_off) * p_rx * l_solo_off +
                 qj * (1.0 - d_both_off) * p_rx * l_both_off);
    }
    return finalize(std::move(td), std::move(tr), queue.p_empty);
}

ThroughputReport throughput_one_user(const Scenario& s,
                                     const QueueMetrics& queue) {
    s.validate();
    if (s.n_users() != 1)
        throw ContractError("throughput_one_user: scenario must have 1 user");
    require_stable(queue);

    const LinkModel model(s);
    const double q1 = s.access.q[0];
    const double p_rx = s.access.p_rx;
    const double relay_tx =
        s.access.q0 * s.access.p_tx * (1.0 - queue.p_empty);

    const double d_on = model.user_dest(1, 1u, true);    // P^d_{1/0,1}
    const double d_off = model.user_dest(1, 1u, false);  // P^d_{1/1}
    const double l_on = model.user_relay(1, 1u, true);
    const double l_off = model.user_relay(1, 1u, false);

    const double td = relay_tx * q1 * d_on + (1.0 - relay_tx) * q1 * d_off;
    const double tr = relay_tx * q1 * (1.0 - d_on) * p_rx * l_on +
                      (1.0 - relay_tx) * q1 * (1.0 - d_off) * p_rx * l_off;
    return finalize({td}, {tr}, queue.p_empty);
}

ThroughputReport throughput_enumerated(const Scenario& s,
                                       const QueueMetrics& queue) {
    s.validate();
    const int n = s.n_users();
    if (n > kMaxEnumerationUsers)
        throw EnumerationLimitError(
            "throughput_enumerated: too many users for exact enumeration");
    require_stable(queue);

    const LinkModel model(s);
    const double p_rx = s.access.p_rx;
    const double relay_tx =
        s.access.q0 * s.access.p_tx * (1.0 - queue.p_empty);

    std::vector<double> td(static_cast<std::size_t>(n), 0.0);
    std::vector<double> tr(static_cast<std::size_t>(n), 0.0);
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        double p_set = 1.0;
        for (int u = 0; u < n; ++u) {
            const double qu = s.access.q[static_cast<std::size_t>(u)];
            p_set *= (mask >> u & 1) ? qu : 1.0 - qu;
        }
        if (p_set == 0.0) continue;

        std::uint64_t rest = mask;
        while (rest) {
            const int u = std::countr_zero(rest) + 1;
            rest &= rest - 1;
            const std::size_t ui = static_cast<std::size_t>(u - 1);
            const double d_on = model.user_dest(u, mask, true);
            const double d_off = model.user_dest(u, mask, false);
            td[ui] += p_set * (relay_tx * d_on + (1.0 - relay_tx) * d_off);
            tr[ui] += p_set *
                      (relay_tx * (1.0 - d_on) * p_rx *
                           model.user_relay(u, mask, true) +
                       (1.0 - relay_tx) * (1.0 - d_off) * p_rx *
                           model.user_relay(u, mask, false));
        }
    }
    return finalize(std::move(td), std::move(tr), queue.p_empty);
}

ThroughputReport analyze_throughput(const Scenario& s,
                                    const QueueMetrics& queue) {
    const int n = s.n_users();
    if (n == 1) return throughput_one_user(s, queue);
    if (s.symmetric_users()) return throughput_symmetric(s, queue);
    if (n == 2) return throughput_two_user(s, queue);
    return throughput_enumerated(s, queue);
}

}  // namespace relaylab
