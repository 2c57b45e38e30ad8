#include "relaylab/exact_oracle.hpp"
#include <bit>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "detail/family_assembly.hpp"
#include "relaylab/discrete.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/parallel.hpp"
#include "relaylab/phy.hpp"

namespace relaylab {

namespace {

// Raw per-slot event probabilities accumulated over user subsets, all
// conditioned on the receiver gate being ON (the gate is mixed in later).
struct Accumulator {
    std::vector<double> silent_arr;   // P(k arrivals | relay silent)
    std::vector<double> active_arr;   // P(k arrivals | relay transmitting)
    std::vector<double> active_growth;  // P(queue change = k | relay tx)
    double active_dec = 0.0;            // P(queue change = -1 | relay tx)
    double dep_avg = 0.0;               // E[P^d_{0/S+0}] over subsets

    explicit Accumulator(int n)
        : silent_arr(static_cast<std::size_t>(n) + 1, 0.0),
          active_arr(static_cast<std::size_t>(n) + 1, 0.0),
          active_growth(static_cast<std::size_t>(n) + 1, 0.0) {}

    void merge(const Accumulator& o) {
        for (std::size_t k = 0; k < silent_arr.size(); ++k) {
            silent_arr[k] += o.silent_arr[k];
            active_arr[k] += o.active_arr[k];
            active_growth[k] += o.active_growth[k];
        }
        active_dec += o.active_dec;
        dep_avg += o.dep_avg;
    }
};

Accumulator enumerate_masks(const Scenario& s) {
    const int n = s.n_users();
    const LinkModel model(s);
    const std::uint64_t total = 1ull << n;

    // Fixed-size blocks keep the merge order (and hence the floating-point
    // result) independent of the worker count.
    const std::uint64_t block = 4096;
    const std::int64_t n_blocks = (total + block - 1) / block;
    std::vector<Accumulator> partial(static_cast<std::size_t>(n_blocks),
                                     Accumulator(n));

    parallel_for(0, n_blocks, [&](std::int64_t bi) {
        Accumulator& acc = partial[static_cast<std::size_t>(bi)];
        std::vector<double> cap(static_cast<std::size_t>(n));
        const std::uint64_t lo = static_cast<std::uint64_t>(bi) * block;
        const std::uint64_t hi = std::min(total, lo + block);
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            double p_set = 1.0;
            for (int u = 0; u < n; ++u) {
                const double qu = s.access.q[static_cast<std::size_t>(u)];
                p_set *= (mask >> u & 1) ? qu : 1.0 - qu;
            }
            if (p_set == 0.0) continue;

            int size = 0;
            for (bool relay_on : {false, true}) {
                size = 0;
                std::uint64_t rest = mask;
                while (rest) {
                    const int u = std::countr_zero(rest) + 1;
                    rest &= rest - 1;
                    const double direct = model.user_dest(u, mask, relay_on);
                    cap[static_cast<std::size_t>(size++)] =
                        (1.0 - direct) * model.user_relay(u, mask, relay_on);
                }
                const auto conv = bernoulli_convolve(
                    std::span<const double>(cap.data(),
                                            static_cast<std::size_t>(size)));
                if (!relay_on) {
                    for (std::size_t k = 0; k < conv.size(); ++k)
                        acc.silent_arr[k] += p_set * conv[k];
                } else {
                    const double dep = model.relay_dest(mask);
                    acc.dep_avg += p_set * dep;
                    acc.active_dec += p_set * dep * conv[0];
                    for (std::size_t k = 0; k < conv.size(); ++k) {
                        acc.active_arr[k] += p_set * conv[k];
                        acc.active_growth[k] += p_set * (1.0 - dep) * conv[k];
                        if (k >= 1)
                            acc.active_growth[k - 1] += p_set * dep * conv[k];
                    }
                }
            }
        }
    });

    Accumulator acc(n);
    for (const auto& p : partial) acc.merge(p);
    return acc;
}

}  // namespace

EnumerationResult enumerate_full(const Scenario& s) {
    s.validate();
    const int n = s.n_users();
    if (n > kMaxEnumerationUsers)
        throw EnumerationLimitError(
            "exact enumeration limited to " +
            std::to_string(kMaxEnumerationUsers) + " users, got " +
            std::to_string(n));

    const Accumulator acc = enumerate_masks(s);
    detail::GateOnFamilies fam;
    fam.silent_arr = acc.silent_arr;
    fam.active_arr = acc.active_arr;
    fam.active_growth = acc.active_growth;
    fam.active_dec = acc.active_dec;
    fam.dep_avg = acc.dep_avg;
    return detail::assemble_families(n, fam, s.access.p_rx,
                                     s.access.q0 * s.access.p_tx);
}

SlotDistribution enumerate_slot(const Scenario& s) {
    return enumerate_full(s).dist;
}

StateRows enumerate_state(const Scenario& s, QueueStateKind state) {
    const SlotDistribution d = enumerate_slot(s);
    StateRows rows;
    if (state == QueueStateKind::Empty) {
        rows.growth = d.p0;
        rows.shrink = 0.0;
        rows.arrivals = d.r0;
    } else {
        rows.growth = d.p1;
        rows.shrink = d.p1_dec;
        rows.arrivals = d.r1;
    }
    return rows;
}

ConditionalComponents conditional_components(const Scenario& s) {
    return enumerate_full(s).components;
}

StationaryDistribution markov_stationary(const SlotDistribution& dist,
                                         int truncation) {
    if (truncation < 100)
        throw ContractError("markov_stationary: truncation must be >= 100");
    dist.validate(1e-9);

    const int n = dist.n;
    StationaryDistribution out;

    if (dist.lambda0() == 0.0) {  // queue never leaves 0
        out.pi.assign(static_cast<std::size_t>(truncation) + 1, 0.0);
        out.pi[0] = 1.0;
        out.p_empty = 1.0;
        return out;
    }

    const double drift = dist.drift();
    if (!(drift < 0.0))
        throw InstabilityError(
            "markov_stationary: chain diverges, drift = " +
                std::to_string(drift),
            drift);

    // a_k = p0[k]; b_0 = p1_dec, b_1 = p1[0], b_{k+1} = p1[k]
    std::vector<double> b(static_cast<std::size_t>(n) + 2);
    b[0] = dist.p1_dec;
    for (int k = 0; k <= n; ++k)
        b[static_cast<std::size_t>(k) + 1] = dist.p1[static_cast<std::size_t>(k)];

    // tail sums: a_tail[j] = sum_{k >= j} a_k, b_tail[t] = sum_{m >= t} b_m
    std::vector<double> a_tail(static_cast<std::size_t>(n) + 2, 0.0);
    for (int j = n; j >= 0; --j)
        a_tail[static_cast<std::size_t>(j)] =
            a_tail[static_cast<std::size_t>(j) + 1] +
            dist.p0[static_cast<std::size_t>(j)];
    std::vector<double> b_tail(static_cast<std::size_t>(n) + 3, 0.0);
    for (int t = n + 1; t >= 0; --t)
        b_tail[static_cast<std::size_t>(t)] =
            b_tail[static_cast<std::size_t>(t) + 1] +
            b[static_cast<std::size_t>(t)];

    const std::size_t size = static_cast<std::size_t>(truncation) + 1;
    std::vector<double> pi(size, 0.0);
    pi[0] = 1.0;
    // level-crossing balance: flow above level j equals the downward flow
    // from j+1, which is possible only via b_0
    for (int j = 0; j < truncation; ++j) {
        double up = (j + 1 <= n + 1)
                        ? pi[0] * a_tail[static_cast<std::size_t>(j + 1)]
                        : 0.0;
        const int i_lo = std::max(1, j + 1 - n);
        for (int i = i_lo; i <= j; ++i)
            up += pi[static_cast<std::size_t>(i)] *
                  b_tail[static_cast<std::size_t>(j - i + 2)];
        pi[static_cast<std::size_t>(j) + 1] = up / b[0];
    }

    double z = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
        z += pi[k];
        mean += static_cast<double>(k) * pi[k];
    }
    for (auto& v : pi) v /= z;

    out.pi = std::move(pi);
    out.p_empty = out.pi[0];
    out.mean = mean / z;
    const double last = out.pi[size - 1];
    const double prev = out.pi[size - 2];
    if (last > 0.0 && prev > 0.0 && last < prev) {
        const double ratio = last / prev;
        out.tail_mass = last * ratio / (1.0 - ratio);
    }
    out.tail_warning = out.tail_mass > 1e-9;
    return out;
}

}  // namespace relaylab
