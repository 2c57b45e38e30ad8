#pragma once

#include <optional>
#include <span>

#include "relaylab/exact_oracle.hpp"
#include "relaylab/scenario.hpp"
#include "relaylab/slot_dist.hpp"

namespace relaylab {

/// Closed-form relay-queue performance summary.
struct QueueMetrics {
    double lambda0 = 0.0;  // mean arrivals per slot, empty queue
    double lambda1 = 0.0;  // mean arrivals per slot, backlogged queue
    double lambda = 0.0;   // stationary arrival rate
    double mu = 0.0;       // service probability per backlogged slot
    double p_empty = 0.0;  // P(Q = 0); 0 when unstable
    double q_bar = 0.0;    // mean queue size; NaN when unstable
    std::optional<double> q0_min;  // stability threshold, empty if none exists
    bool stable = false;
};

/// Average service rate: mu = q0 p_tx sum_k C(n,k) q^k (1-q)^(n-k) P0d[k].
/// relay_dest_success must hold P_{0d,k} for k = 0..n.
double service_rate(int n, double q, double q0, double p_tx,
                    std::span<const double> relay_dest_success);

struct ArrivalRates {
    double lambda0 = 0.0, lambda1 = 0.0, lambda = 0.0;
};
/// lambda0/lambda1 from the arrival families and the stationary mix
/// lambda = P(Q=0) lambda0 + P(Q>0) lambda1.
ArrivalRates arrival_rates(const SlotDistribution& dist, double p_empty);

/// P(Q=0) for two users: (p1_dec - p1[1] - 2 p1[2]) /
/// (p1_dec - p1[1] - 2 p1[2] + lambda0). Throws InstabilityError when the
/// numerator is non-positive (and arrivals occur).
double empty_probability_two_user(const SlotDistribution& dist);

/// P(Q=0) for n symmetric users (also exact for any family of this chain):
/// (p1_dec - sum i p1[i]) / (p1_dec - sum i p1[i] + lambda0).
double empty_probability_symmetric(const SlotDistribution& dist, int n);

/// Same quantity through the generating-function route
/// (1 + B'(1)) / (1 + B'(1) - A'(1)).
double empty_probability_pgf(const SlotDistribution& dist);

/// Mean queue size for two users (closed form).
double mean_queue_two_user(const SlotDistribution& dist);

/// Mean queue size for n symmetric users (closed form).
double mean_queue_symmetric(const SlotDistribution& dist, int n);

/// Mean queue size through the generating-function route,
/// -s0 K''(1) / L''(1) with s0 = P(Q=0).
double mean_queue_pgf(const SlotDistribution& dist);

/// Smallest relay attempt probability that stabilizes the queue:
/// stable iff q0_min < q0 <= 1. Empty optional when no q0 in (0,1]
/// stabilizes the queue. Zero when the queue never receives packets.
std::optional<double> q0_min(const ConditionalComponents& comp, double p_tx);
std::optional<double> q0_min(const Scenario& s);

/// Closed-form slot distribution for n symmetric users
/// (with the per-slot receiver gate applied); equals enumerate_full for
/// any symmetric scenario and stays O(n^2) for large n.
EnumerationResult symmetric_closed_full(const Scenario& s);
SlotDistribution symmetric_slot_distribution(const Scenario& s);

/// One-user closed forms: p0_1, p1_1, p1_dec plus the full
/// metrics assembled from them.
struct OneUserMetrics {
    QueueMetrics queue;
    double p0_1 = 0.0, p1_1 = 0.0, p1_dec = 0.0;
};
OneUserMetrics one_user_metrics(const Scenario& s);

/// Dispatches to the matching analysis route: one-user closed forms,
/// symmetric closed forms, or exact enumeration for asymmetric users
/// (up to kMaxEnumerationUsers).
QueueMetrics analyze_queue(const Scenario& s);

}  // namespace relaylab
