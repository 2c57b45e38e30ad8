#include "relaylab/queue_analytics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "detail/family_assembly.hpp"
#include "relaylab/discrete.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/phy.hpp"

namespace relaylab {

namespace {

// p1_dec - sum_i i p1[i]; positive iff the backlogged queue drifts down.
double down_drift(const SlotDistribution& d) { return -d.drift(); }

// b_0 = p1_dec, b_1 = p1[0], b_{k+1} = p1[k]
std::vector<double> b_family(const SlotDistribution& d) {
    std::vector<double> b(d.p1.size() + 1);
    b[0] = d.p1_dec;
    for (std::size_t k = 0; k < d.p1.size(); ++k) b[k + 1] = d.p1[k];
    return b;
}

void require_two_user(const SlotDistribution& d, const char* who) {
    if (d.n != 2)
        throw ContractError(std::string(who) + ": distribution is not two-user");
}

}  // namespace

double service_rate(int n, double q, double q0, double p_tx,
                    std::span<const double> relay_dest_success) {
    if (static_cast<int>(relay_dest_success.size()) != n + 1)
        throw ContractError("service_rate: need P_{0d,k} for k = 0..n");
    const auto w = binomial_pmf(n, q);
    double inner = 0.0;
    for (int k = 0; k <= n; ++k)
        inner += w[static_cast<std::size_t>(k)] *
                 relay_dest_success[static_cast<std::size_t>(k)];
    return q0 * p_tx * inner;
}

ArrivalRates arrival_rates(const SlotDistribution& dist, double p_empty) {
    ArrivalRates r;
    r.lambda0 = dist.lambda0();
    r.lambda1 = dist.lambda1();
    r.lambda = p_empty * r.lambda0 + (1.0 - p_empty) * r.lambda1;
    return r;
}

double empty_probability_two_user(const SlotDistribution& dist) {
    require_two_user(dist, "empty_probability_two_user");
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 1.0;
    const double d = dist.p1_dec - dist.p1[1] - 2.0 * dist.p1[2];
    if (!(d > 0.0))
        throw InstabilityError("empty probability undefined: drift = " +
                                   std::to_string(-d),
                               -d);
    return d / (d + lambda0);
}

double empty_probability_symmetric(const SlotDistribution& dist, int n) {
    if (n != dist.n)
        throw ContractError("empty_probability_symmetric: n mismatch");
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 1.0;
    const double d = down_drift(dist);
    if (!(d > 0.0))
        throw InstabilityError("empty probability undefined: drift = " +
                                   std::to_string(-d),
                               -d);
    return d / (d + lambda0);
}

double empty_probability_pgf(const SlotDistribution& dist) {
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 1.0;
    const auto b = b_family(dist);
    double b1 = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i)
        b1 -= static_cast<double>(i) * b[i];  // B'(1)
    const double a1 = -lambda0;               // A'(1), since p0 == r0
    if (!(1.0 + b1 > 0.0))
        throw InstabilityError("empty probability undefined: drift = " +
                                   std::to_string(-(1.0 + b1)),
                               -(1.0 + b1));
    return (1.0 + b1) / (1.0 + b1 - a1);
}

double mean_queue_two_user(const SlotDistribution& dist) {
    require_two_user(dist, "mean_queue_two_user");
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 0.0;
    const double d = dist.p1_dec - dist.p1[1] - 2.0 * dist.p1[2];
    if (!(d > 0.0))
        throw InstabilityError("mean queue size undefined: drift = " +
                                   std::to_string(-d),
                               -d);
    const double first = (4.0 * dist.p0[1] + 10.0 * dist.p0[2]) /
                         (2.0 * (d + lambda0));
    const double second =
        lambda0 * (2.0 * dist.p1_dec - 4.0 * dist.p1[1] - 10.0 * dist.p1[2]) /
        (2.0 * (dist.p1[1] + 2.0 * dist.p1[2] - dist.p1_dec) * (d + lambda0));
    return first + second;
}

double mean_queue_symmetric(const SlotDistribution& dist, int n) {
    if (n != dist.n)
        throw ContractError("mean_queue_symmetric: n mismatch");
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 0.0;
    const double d = down_drift(dist);
    if (!(d > 0.0))
        throw InstabilityError("mean queue size undefined: drift = " +
                                   std::to_string(-d),
                               -d);
    double s_p0 = 0.0, s_p1 = 0.0;  // sum i(i+3) p^0_i, sum i(i+3) p^1_i
    for (int i = 1; i <= n; ++i) {
        const double c = static_cast<double>(i) * static_cast<double>(i + 3);
        s_p0 += c * dist.p0[static_cast<std::size_t>(i)];
        s_p1 += c * dist.p1[static_cast<std::size_t>(i)];
    }
    return s_p0 / (2.0 * (d + lambda0)) +
           lambda0 * (2.0 * dist.p1_dec - s_p1) / (-2.0 * d * (d + lambda0));
}

double mean_queue_pgf(const SlotDistribution& dist) {
    const double lambda0 = dist.lambda0();
    if (lambda0 == 0.0) return 0.0;
    const auto& a = dist.p0;
    const auto b = b_family(dist);

    double a0 = 0.0, a1 = 0.0, a2 = 0.0;  // A(1), A'(1), A''(1)
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double di = static_cast<double>(i);
        a0 += a[i];
        a1 -= di * a[i];
        a2 += di * (di + 1.0) * a[i];
    }
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double di = static_cast<double>(i);
        b0 += b[i];
        b1 -= di * b[i];
        b2 += di * (di + 1.0) * b[i];
    }
    if (!(1.0 + b1 > 0.0))
        throw InstabilityError("mean queue size undefined: drift = " +
                                   std::to_string(-(1.0 + b1)),
                               -(1.0 + b1));
    const double s0 = (1.0 + b1) / (1.0 + b1 - a1);
    const double k2 = (2.0 * a0 - 2.0 * a1 + a2 - b2) * (-1.0 - b1) -
                      (2.0 - b2) * (-a0 + a1 - b1);
    const double l2 = 2.0 * (-1.0 - b1) * (-1.0 - b1);
    return -s0 * k2 / l2;
}

std::optional<double> q0_min(const ConditionalComponents& comp, double p_tx) {
    if (p_tx < 0.0) throw ContractError("q0_min: p_tx must be non-negative");
    const double arr_silent = pmf_mean(comp.silent_arrivals);
    const double arr_active = pmf_mean(comp.active_arrivals);
    if (arr_silent == 0.0) return 0.0;
    if (p_tx == 0.0) return std::nullopt;  // mu == 0 for every q0
    const double denom =
        p_tx * (comp.relay_dest_success + arr_silent - arr_active);
    if (!(denom > 0.0)) return std::nullopt;
    const double threshold = arr_silent / denom;
    if (threshold >= 1.0) return std::nullopt;
    return threshold;
}

std::optional<double> q0_min(const Scenario& s) {
    const auto comp = s.symmetric_users()
                          ? symmetric_closed_full(s).components
                          : conditional_components(s);
    return q0_min(comp, s.access.p_tx);
}

EnumerationResult symmetric_closed_full(const Scenario& s) {
    s.validate();
    if (!s.symmetric_users())
        throw ContractError("symmetric_closed_full: users are not symmetric");
    const int n = s.n_users();
    const auto table = labeled_success_probs(s);
    const auto w = binomial_pmf(n, s.access.q[0]);

    detail::GateOnFamilies fam;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    fam.silent_arr.assign(m, 0.0);
    fam.active_arr.assign(m, 0.0);
    fam.active_growth.assign(m, 0.0);

    for (int i = 0; i <= n; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const double cap0 =
            (i == 0) ? 0.0
                     : table.user_relay[0][ii] * (1.0 - table.user_dest[0][ii]);
        const double cap1 =
            (i == 0) ? 0.0
                     : table.user_relay[1][ii] * (1.0 - table.user_dest[1][ii]);
        const double dep = table.relay_dest[ii];
        fam.dep_avg += w[ii] * dep;

        const auto arr0 = binomial_pmf(i, cap0);
        const auto arr1 = binomial_pmf(i, cap1);
        fam.active_dec += w[ii] * dep * arr1[0];
        for (std::size_t k = 0; k <= ii; ++k) {
            fam.silent_arr[k] += w[ii] * arr0[k];
            fam.active_arr[k] += w[ii] * arr1[k];
            fam.active_growth[k] += w[ii] * (1.0 - dep) * arr1[k];
            if (k >= 1) fam.active_growth[k - 1] += w[ii] * dep * arr1[k];
        }
    }
    return detail::assemble_families(n, fam, s.access.p_rx,
                                     s.access.q0 * s.access.p_tx);
}

SlotDistribution symmetric_slot_distribution(const Scenario& s) {
    return symmetric_closed_full(s).dist;
}

namespace {

QueueMetrics metrics_from(const SlotDistribution& dist, double mu,
                          std::optional<double> q0min) {
    QueueMetrics qm;
    qm.lambda0 = dist.lambda0();
    qm.lambda1 = dist.lambda1();
    qm.mu = mu;
    qm.q0_min = q0min;
    qm.stable = (qm.lambda1 < mu) || qm.lambda1 == 0.0;
    if (!qm.stable) {
        qm.p_empty = 0.0;
        qm.q_bar = std::numeric_limits<double>::quiet_NaN();
        qm.lambda = qm.lambda1;
        return qm;
    }
    if (qm.lambda0 == 0.0) {
        qm.p_empty = 1.0;
        qm.q_bar = 0.0;
        qm.lambda = 0.0;
        return qm;
    }
    if (dist.n == 2) {
        qm.p_empty = empty_probability_two_user(dist);
        qm.q_bar = mean_queue_two_user(dist);
    } else {
        qm.p_empty = empty_probability_symmetric(dist, dist.n);
        qm.q_bar = mean_queue_symmetric(dist, dist.n);
    }
    qm.lambda = arrival_rates(dist, qm.p_empty).lambda;
    return qm;
}

}  // namespace

OneUserMetrics one_user_metrics(const Scenario& s) {
    s.validate();
    if (s.n_users() != 1)
        throw ContractError("one_user_metrics: scenario must have one user");
    const LinkModel model(s);
    const double q1 = s.access.q[0];
    const double p_rx = s.access.p_rx;
    const double t = s.access.q0 * s.access.p_tx;

    const double pd_1_1 = model.user_dest(1, 1u, false);    // P^d_{1/1}
    const double pd_1_01 = model.user_dest(1, 1u, true);    // P^d_{1/0,1}
    const double p0_1_1 = model.user_relay(1, 1u, false);   // P^0_{1/1}
    const double p0_1_01 = model.user_relay(1, 1u, true);   // P^0_{1/0,1}
    const double pd_0_0 = model.relay_dest(0u);             // P^d_{0/0}
    const double pd_0_01 = model.relay_dest(1u);            // P^d_{0/0,1}

    OneUserMetrics out;
    out.p0_1 = q1 * (1.0 - pd_1_1) * p_rx * p0_1_1;
    out.p1_1 = (1.0 - t) * q1 * (1.0 - pd_1_1) * p_rx * p0_1_1 +
               t * q1 * (1.0 - pd_1_01) * p_rx * p0_1_01 * (1.0 - pd_0_01);
    out.p1_dec = t * (1.0 - q1) * pd_0_0 + t * q1 * pd_0_01 * pd_1_01 +
                 t * q1 * (1.0 - pd_1_01) * (1.0 - p_rx * p0_1_01) * pd_0_01;

    SlotDistribution d;
    d.n = 1;
    d.p0 = {1.0 - out.p0_1, out.p0_1};
    d.p1 = {1.0 - out.p1_dec - out.p1_1, out.p1_1};
    d.p1_dec = out.p1_dec;
    d.r0 = d.p0;
    const double r1_1 = (1.0 - t) * q1 * (1.0 - pd_1_1) * p_rx * p0_1_1 +
                        t * q1 * (1.0 - pd_1_01) * p_rx * p0_1_01;
    d.r1 = {1.0 - r1_1, r1_1};

    const double mu = t * (q1 * pd_0_01 + (1.0 - q1) * pd_0_0);

    ConditionalComponents comp;
    comp.relay_dest_success = q1 * pd_0_01 + (1.0 - q1) * pd_0_0;
    comp.silent_arrivals = {1.0 - out.p0_1, out.p0_1};
    const double b1 = q1 * (1.0 - pd_1_01) * p_rx * p0_1_01;
    comp.active_arrivals = {1.0 - b1, b1};

    out.queue = metrics_from(d, mu, q0_min(comp, s.access.p_tx));
    return out;
}

QueueMetrics analyze_queue(const Scenario& s) {
    s.validate();
    if (s.n_users() == 1) return one_user_metrics(s).queue;
    if (s.symmetric_users()) {
        const auto full = symmetric_closed_full(s);
        const auto table = labeled_success_probs(s);
        const double mu =
            service_rate(s.n_users(), s.access.q[0], s.access.q0,
                         s.access.p_tx, table.relay_dest);
        return metrics_from(full.dist, mu,
                            q0_min(full.components, s.access.p_tx));
    }
    const auto full = enumerate_full(s);
    const double mu =
        s.access.q0 * s.access.p_tx * full.components.relay_dest_success;
    return metrics_from(full.dist, mu,
                        q0_min(full.components, s.access.p_tx));
}

}  // namespace relaylab
