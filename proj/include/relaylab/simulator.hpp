#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaylab/queue_analytics.hpp"
#include "relaylab/scenario.hpp"
#include "relaylab/throughput.hpp"

namespace relaylab {

struct MetricEstimate {
    double value = 0.0;
    double se = 0.0;  // batch-means standard error
};

/// Empirical counterparts of the analytic quantities, with standard errors
/// from the batch-means method. Values are totals over the measured window
/// divided by its length; reruns with the same seed and scenario are
/// bit-identical.
struct SimStats {
    std::uint64_t slots = 0;     // total slots simulated (incl. warmup)
    std::uint64_t warmup = 0;    // slots discarded before measuring
    std::uint64_t measured = 0;  // slots contributing to statistics
    std::uint64_t seed = 0;
    int batches = 0;

    MetricEstimate lambda;          // arrivals per slot
    MetricEstimate mu;              // departures per backlogged slot
    MetricEstimate mu_per_attempt;  // departures per relay transmission
    MetricEstimate departures_per_slot;
    MetricEstimate p_empty;
    MetricEstimate q_bar;
    MetricEstimate t_net;                               // network deliveries/slot
    std::vector<MetricEstimate> t_direct, t_relayed, t_total;  // per user
    MetricEstimate t_total_avg;                         // per-user average

    double queue_growth_slope = 0.0;  // packets per slot over the window
    double queue_growth_se = 0.0;
    bool diverging = false;  // growth slope positive at 3-SE confidence

    // whole-run flow accounting (includes warmup)
    std::uint64_t enqueued = 0, dequeued = 0, final_queue = 0;
};

/// Slot-by-slot Monte Carlo simulation of the full system. Per slot: users
/// transmit Bernoulli(q_i); a backlogged relay attempts with q0 gated by
/// Bernoulli(p_tx); the receiver gate is one Bernoulli(p_rx) for the slot;
/// each link succeeds independently with its closed-form probability given
/// the transmit set; a packet missed at the destination is enqueued iff the
/// gate is on and the user->relay link succeeded; a successful relay
/// transmission dequeues the FIFO head.
SimStats run(const Scenario& s, std::uint64_t slots, std::uint64_t seed,
             std::uint64_t warmup = 10000);

struct ValidationRow {
    std::string metric;
    double analytic = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool flagged = false;  // |z| > 3
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool any_flagged = false;
    SimStats stats;
};

/// Runs the simulator against the analytic predictions and reports a
/// z-score per metric. Throws InstabilityError for unstable scenarios.
ValidationReport validate(const Scenario& s, std::uint64_t slots,
                          std::uint64_t seed);

/// Debug path validating the physical layer itself: samples raw exponential
/// fading/interference/self-interference powers and thresholds the SINR,
/// instead of using the closed-form success probability. Returns the
/// success fraction of link (tx -> rx) over `trials` slots in which the
/// users in user_mask (bit u-1 for user u) and optionally the relay
/// transmit.
double measure_link_success_sinr(const Scenario& s, NodeId tx, NodeId rx,
                                 std::uint64_t user_mask, bool relay_on,
                                 std::uint64_t trials, std::uint64_t seed);

}  // namespace relaylab
