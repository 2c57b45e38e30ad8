#include "relaylab/simulator.hpp"
#include <limits>
#include <bit>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <unordered_map>

#include "relaylab/errors.hpp"
#include "relaylab/phy.hpp"

namespace relaylab {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    // canonical 53-bit uniform in [0,1); identical across platforms
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    double exponential(double mean) {
        return -mean * std::log(1.0 - uniform());
    }

private:
    std::mt19937_64 eng_;
};

// success probabilities of one transmit-set signature
struct SetProbs {
    // per transmitting user, in mask bit order
    std::vector<double> direct;   // user -> destination
    std::vector<double> capture;  // user -> relay link
    double relay_dest = 0.0;
};

// Lazily filled per-(user mask, relay flag) probability cache for the
// asymmetric path; the symmetric path indexes by transmitter count instead.
// Beyond kMaxEnumerationUsers the mask space is too large to memoize, so
// probabilities are recomputed per slot.
class ProbCache {
public:
    ProbCache(const Scenario& s, bool symmetric)
        : symmetric_(symmetric),
          memoize_(s.n_users() <= kMaxEnumerationUsers), model_(s) {
        if (symmetric_) {
            const auto table = labeled_success_probs(s);
            const int n = s.n_users();
            by_count_.resize(2 * (static_cast<std::size_t>(n) + 1));
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k <= n; ++k) {
                    SetProbs& p = by_count_[slot(j, k)];
                    p.relay_dest = table.relay_dest[static_cast<std::size_t>(k)];
                    if (k >= 1) {
                        p.direct.assign(
                            static_cast<std::size_t>(k),
                            table.user_dest[static_cast<std::size_t>(j)]
                                           [static_cast<std::size_t>(k)]);
                        p.capture.assign(
                            static_cast<std::size_t>(k),
                            table.user_relay[static_cast<std::size_t>(j)]
                                            [static_cast<std::size_t>(k)]);
                    }
                }
        }
    }

    const SetProbs& get(std::uint64_t mask, bool relay_on) {
        if (symmetric_)
            return by_count_[slot(relay_on ? 1 : 0,
                                  std::popcount(mask))];
        const std::uint64_t key =
            (static_cast<std::uint64_t>(mask) << 1) | (relay_on ? 1u : 0u);
        auto it = by_mask_.find(key);
        if (it != by_mask_.end()) return it->second;
        SetProbs p;
        p.relay_dest = model_.relay_dest(mask);
        std::uint64_t rest = mask;
        while (rest) {
            const int u = std::countr_zero(rest) + 1;
            rest &= rest - 1;
            p.direct.push_back(model_.user_dest(u, mask, relay_on));
            p.capture.push_back(model_.user_relay(u, mask, relay_on));
        }
        return by_mask_.emplace(key, std::move(p)).first->second;
    }

private:
    std::size_t slot(int j, int k) const {
        return static_cast<std::size_t>(j) * by_count_.size() / 2 +
               static_cast<std::size_t>(k);
    }
    bool symmetric_;
    LinkModel model_;
    std::vector<SetProbs> by_count_;
    std::unordered_map<std::uint64_t, SetProbs> by_mask_;
};

MetricEstimate from_batches(double total, std::uint64_t denom_total,
                            const std::vector<double>& batch_values,
                            const std::vector<bool>& batch_ok) {
    MetricEstimate e;
    e.value = denom_total > 0 ? total / static_cast<double>(denom_total) : 0.0;
    double mean = 0.0;
    int used = 0;
    for (std::size_t b = 0; b < batch_values.size(); ++b)
        if (batch_ok[b]) {
            mean += batch_values[b];
            ++used;
        }
    if (used >= 2) {
        mean /= used;
        double var = 0.0;
        for (std::size_t b = 0; b < batch_values.size(); ++b)
            if (batch_ok[b]) {
                const double d = batch_values[b] - mean;
                var += d * d;
            }
        var /= (used - 1);
        e.se = std::sqrt(var / used);
    }
    return e;
}

}  // namespace

SimStats run(const Scenario& s, std::uint64_t slots, std::uint64_t seed,
             std::uint64_t warmup) {
    s.validate();
    if (slots == 0) throw ContractError("run: zero slots requested");
    if (warmup >= slots)
        throw ContractError("run: warmup must leave slots to measure");

    const int n = s.n_users();
    const bool symmetric = s.symmetric_users();
    if (!symmetric && n > kMaxEnumerationUsers)
        throw EnumerationLimitError(
            "simulator: asymmetric scenarios limited to mask-cacheable sizes");
    ProbCache cache(s, symmetric);

    const std::uint64_t measured_raw = slots - warmup;
    const int B = measured_raw >= 200 ? 100 : static_cast<int>(
                                                  std::max<std::uint64_t>(
                                                      1, measured_raw));
    const std::uint64_t batch_len = measured_raw / B;
    const std::uint64_t measured = batch_len * B;
    const std::uint64_t total_slots = warmup + measured;

    Rng rng(seed);
    std::deque<std::uint32_t> queue;

    // per-batch tallies
    struct Batch {
        double arrivals = 0, departures = 0, nonempty = 0, attempts = 0;
        double empty = 0, queue_sum = 0, deliveries = 0;
    };
    std::vector<Batch> batch(static_cast<std::size_t>(B));
    std::vector<std::vector<double>> bat_direct(
        static_cast<std::size_t>(B), std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> bat_relayed = bat_direct;
    std::vector<double> q_at_batch_start(static_cast<std::size_t>(B) + 1, 0.0);

    std::uint64_t enqueued = 0, dequeued = 0;
    std::vector<double> direct_tot(static_cast<std::size_t>(n), 0.0);
    std::vector<double> relayed_tot(static_cast<std::size_t>(n), 0.0);
    double arrivals_tot = 0, departures_tot = 0, nonempty_tot = 0,
           attempts_tot = 0, empty_tot = 0, queue_sum_tot = 0;

    std::vector<int> senders;
    senders.reserve(static_cast<std::size_t>(n));

    for (std::uint64_t t = 0; t < total_slots; ++t) {
        const bool measuring = t >= warmup;
        const std::size_t b =
            measuring ? static_cast<std::size_t>((t - warmup) / batch_len) : 0;
        const std::size_t qsize = queue.size();
        if (measuring) {
            if ((t - warmup) % batch_len == 0)
                q_at_batch_start[b] = static_cast<double>(qsize);
            Batch& bb = batch[b];
            bb.queue_sum += static_cast<double>(qsize);
            if (qsize == 0)
                bb.empty += 1;
            else
                bb.nonempty += 1;
        }

        const bool relay_tx = qsize > 0 && rng.bernoulli(s.access.q0) &&
                              rng.bernoulli(s.access.p_tx);
        const bool gate_rx = rng.bernoulli(s.access.p_rx);

        senders.clear();
        std::uint64_t mask = 0;
        for (int u = 0; u < n; ++u)
            if (rng.bernoulli(s.access.q[static_cast<std::size_t>(u)])) {
                senders.push_back(u);
                mask |= 1ull << u;
            }

        const SetProbs& probs = cache.get(mask, relay_tx);
        for (std::size_t si = 0; si < senders.size(); ++si) {
            const int u = senders[si];
            if (rng.bernoulli(probs.direct[si])) {
                if (measuring) {
                    bat_direct[b][static_cast<std::size_t>(u)] += 1;
                    direct_tot[static_cast<std::size_t>(u)] += 1;
                }
            } else if (gate_rx && rng.bernoulli(probs.capture[si])) {
                queue.push_back(static_cast<std::uint32_t>(u));
                ++enqueued;
                if (measuring) batch[b].arrivals += 1;
            }
        }

        if (relay_tx) {
            if (measuring) batch[b].attempts += 1;
            if (rng.bernoulli(probs.relay_dest)) {
                const std::uint32_t owner = queue.front();
                queue.pop_front();
                ++dequeued;
                if (measuring) {
                    batch[b].departures += 1;
                    bat_relayed[b][owner] += 1;
                    relayed_tot[owner] += 1;
                }
            }
        }
        // packets enqueued this slot became eligible only next slot: the
        // departure above used the start-of-slot head, so appending new
        // arrivals after it is equivalent.
    }
    q_at_batch_start[static_cast<std::size_t>(B)] =
        static_cast<double>(queue.size());

    for (const Batch& bb : batch) {
        arrivals_tot += bb.arrivals;
        departures_tot += bb.departures;
        nonempty_tot += bb.nonempty;
        attempts_tot += bb.attempts;
        empty_tot += bb.empty;
        queue_sum_tot += bb.queue_sum;
    }

    SimStats st;
    st.slots = total_slots;
    st.warmup = warmup;
    st.measured = measured;
    st.seed = seed;
    st.batches = B;
    st.enqueued = enqueued;
    st.dequeued = dequeued;
    st.final_queue = queue.size();

    const std::size_t nb = static_cast<std::size_t>(B);
    std::vector<bool> all_ok(nb, true);
    const double len = static_cast<double>(batch_len);

    auto per_slot = [&](auto getter, double total) {
        std::vector<double> v(nb);
        for (std::size_t bi = 0; bi < nb; ++bi) v[bi] = getter(batch[bi]) / len;
        return from_batches(total, measured, v, all_ok);
    };
    st.lambda = per_slot([](const Batch& bb) { return bb.arrivals; },
                         arrivals_tot);
    st.departures_per_slot =
        per_slot([](const Batch& bb) { return bb.departures; },
                 departures_tot);
    st.p_empty = per_slot([](const Batch& bb) { return bb.empty; }, empty_tot);
    st.q_bar = per_slot([](const Batch& bb) { return bb.queue_sum; },
                        queue_sum_tot);

    {  // ratio metrics: skip batches whose denominator is empty
        std::vector<double> v(nb, 0.0);
        std::vector<bool> ok(nb);
        for (std::size_t bi = 0; bi < nb; ++bi) {
            ok[bi] = batch[bi].nonempty > 0;
            if (ok[bi]) v[bi] = batch[bi].departures / batch[bi].nonempty;
        }
        st.mu = from_batches(departures_tot,
                             static_cast<std::uint64_t>(nonempty_tot), v, ok);
        for (std::size_t bi = 0; bi < nb; ++bi) {
            ok[bi] = batch[bi].attempts > 0;
            v[bi] = ok[bi] ? batch[bi].departures / batch[bi].attempts : 0.0;
        }
        st.mu_per_attempt = from_batches(
            departures_tot, static_cast<std::uint64_t>(attempts_tot), v, ok);
    }

    st.t_direct.resize(static_cast<std::size_t>(n));
    st.t_relayed.resize(static_cast<std::size_t>(n));
    st.t_total.resize(static_cast<std::size_t>(n));
    std::vector<double> v(nb);
    for (int u = 0; u < n; ++u) {
        const std::size_t uu = static_cast<std::size_t>(u);
        for (std::size_t bi = 0; bi < nb; ++bi) v[bi] = bat_direct[bi][uu] / len;
        st.t_direct[uu] = from_batches(direct_tot[uu], measured, v, all_ok);
        for (std::size_t bi = 0; bi < nb; ++bi)
            v[bi] = bat_relayed[bi][uu] / len;
        st.t_relayed[uu] = from_batches(relayed_tot[uu], measured, v, all_ok);
        for (std::size_t bi = 0; bi < nb; ++bi)
            v[bi] = (bat_direct[bi][uu] + bat_relayed[bi][uu]) / len;
        st.t_total[uu] = from_batches(direct_tot[uu] + relayed_tot[uu],
                                      measured, v, all_ok);
    }
    double deliveries_tot = 0.0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        double d = 0.0;
        for (int u = 0; u < n; ++u)
            d += bat_direct[bi][static_cast<std::size_t>(u)] +
                 bat_relayed[bi][static_cast<std::size_t>(u)];
        v[bi] = d / len;
    }
    for (int u = 0; u < n; ++u)
        deliveries_tot += direct_tot[static_cast<std::size_t>(u)] +
                          relayed_tot[static_cast<std::size_t>(u)];
    st.t_net = from_batches(deliveries_tot, measured, v, all_ok);
    st.t_total_avg = {st.t_net.value / n, st.t_net.se / n};

    {  // queue growth slope from per-batch increments
        std::vector<double> slopes(nb);
        for (std::size_t bi = 0; bi < nb; ++bi)
            slopes[bi] = (q_at_batch_start[bi + 1] - q_at_batch_start[bi]) / len;
        const auto est = from_batches(
            q_at_batch_start[nb] - q_at_batch_start[0], measured, slopes,
            all_ok);
        st.queue_growth_slope = est.value;
        st.queue_growth_se = est.se;
        st.diverging = st.queue_growth_se > 0.0 &&
                       st.queue_growth_slope - 3.0 * st.queue_growth_se > 0.0;
    }
    return st;
}

ValidationReport validate(const Scenario& s, std::uint64_t slots,
                          std::uint64_t seed) {
    const QueueMetrics queue = analyze_queue(s);
    if (!queue.stable)
        throw InstabilityError(
            "validate: scenario is unstable (lambda1 >= mu)",
            queue.lambda1 - queue.mu);
    const ThroughputReport thr = analyze_throughput(s, queue);

    const std::uint64_t warmup =
        std::min<std::uint64_t>(10000, slots / 10);
    SimStats st = run(s, slots, seed, warmup);

    ValidationReport rep;
    auto row = [&](const std::string& name, double analytic,
                   const MetricEstimate& emp) {
        ValidationRow r;
        r.metric = name;
        r.analytic = analytic;
        r.empirical = emp.value;
        r.se = emp.se;
        const double diff = emp.value - analytic;
        if (emp.se > 0.0)
            r.z = diff / emp.se;
        else
            r.z = std::abs(diff) < 1e-12
                      ? 0.0
                      : std::numeric_limits<double>::infinity() *
                            (diff < 0 ? -1.0 : 1.0);
        r.flagged = std::abs(r.z) > 3.0;
        rep.any_flagged = rep.any_flagged || r.flagged;
        rep.rows.push_back(r);
    };

    row("lambda", queue.lambda, st.lambda);
    row("mu", queue.mu, st.mu);
    const double attempt_prob = s.access.q0 * s.access.p_tx;
    if (attempt_prob > 0.0 && st.mu_per_attempt.se > 0.0)
        row("mu_per_attempt", queue.mu / attempt_prob, st.mu_per_attempt);
    row("p_empty", queue.p_empty, st.p_empty);
    row("q_bar", queue.q_bar, st.q_bar);
    if (s.symmetric_users()) {
        row("t_per_user", thr.t_total[0], st.t_total_avg);
    } else {
        for (int u = 0; u < s.n_users(); ++u)
            row("t_user" + std::to_string(u + 1),
                thr.t_total[static_cast<std::size_t>(u)],
                st.t_total[static_cast<std::size_t>(u)]);
    }
    row("t_net", thr.t_net, st.t_net);

    rep.stats = std::move(st);
    return rep;
}

double measure_link_success_sinr(const Scenario& s, NodeId tx, NodeId rx,
                                 std::uint64_t user_mask, bool relay_on,
                                 std::uint64_t trials, std::uint64_t seed) {
    s.validate();
    if (trials == 0)
        throw ContractError("measure_link_success_sinr: zero trials");
    if (rx != kRelayNode && rx != kDestNode)
        throw ContractError("measure_link_success_sinr: receiver must be the "
                            "relay or the destination");
    const bool tx_is_relay = tx == kRelayNode;
    if (!tx_is_relay &&
        !(tx >= 1 && (user_mask >> (tx - 1) & 1)))
        throw ContractError("measure_link_success_sinr: transmitter not in set");
    if (tx_is_relay && !relay_on)
        throw ContractError("measure_link_success_sinr: relay transmits only "
                            "when relay_on");

    const auto& topo = s.topology;
    const auto& phy = s.phy;
    const double gamma = phy.gamma_at(rx);
    const double eta = phy.noise_at(rx);

    const double vh_signal = phy.fading(tx, rx) * path_gain(tx, rx, topo, phy);

    std::vector<double> vh_interf;
    for (int u = 1; u <= s.n_users(); ++u) {
        if (!(user_mask >> (u - 1) & 1) || u == tx || u == rx) continue;
        vh_interf.push_back(phy.fading(u, rx) * path_gain(u, rx, topo, phy));
    }
    if (relay_on && !tx_is_relay && rx != kRelayNode)
        vh_interf.push_back(phy.fading(kRelayNode, rx) *
                            path_gain(kRelayNode, rx, topo, phy));

    // residual self-interference power when the receiver itself transmits;
    // exponential with the mean implied by the closed form
    const bool self_interf = relay_on && rx == kRelayNode;
    const double si_mean =
        self_interf ? phy.self_interference * vh_signal *
                          std::pow(topo.distance(tx, rx), phy.path_loss_exp)
                    : 0.0;

    Rng rng(seed);
    std::uint64_t ok = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const double signal = rng.exponential(vh_signal);
        double denom = eta;
        for (double vh : vh_interf) denom += rng.exponential(vh);
        if (self_interf) denom += rng.exponential(si_mean);
        if (signal >= gamma * denom) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(trials);
}

}  // namespace relaylab
