#pragma once

#include <vector>

#include "relaylab/queue_analytics.hpp"
#include "relaylab/scenario.hpp"

namespace relaylab {

/// Per-user and network-wide throughput split into the direct and the
/// relayed path. All rates are packets per slot.
struct ThroughputReport {
    std::vector<double> t_direct, t_relayed, t_total;  // per user
    double t_net = 0.0;
    double p_empty_used = 0.0;
};

/// n symmetric users; requires a stable queue (relayed throughput equals
/// the admission rate only then).
ThroughputReport throughput_symmetric(const Scenario& s,
                                      const QueueMetrics& queue);

/// Two (possibly asymmetric) users, per the two-user expressions.
ThroughputReport throughput_two_user(const Scenario& s,
                                     const QueueMetrics& queue);

/// Single user.
ThroughputReport throughput_one_user(const Scenario& s,
                                     const QueueMetrics& queue);

/// Arbitrary asymmetric users via exact subset enumeration (n <= 20).
ThroughputReport throughput_enumerated(const Scenario& s,
                                       const QueueMetrics& queue);

/// Dispatches on user count / symmetry.
ThroughputReport analyze_throughput(const Scenario& s,
                                    const QueueMetrics& queue);

}  // namespace relaylab
