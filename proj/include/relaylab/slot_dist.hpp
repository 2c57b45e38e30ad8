#pragma once

#include <vector>

namespace relaylab {

/// Exact one-slot transition/arrival probabilities of the relay queue.
/// p0[k]  : queue grows by k given it is empty          (k = 0..n)
/// p1[k]  : queue grows by k given it is backlogged     (k = 0..n)
/// p1_dec : queue shrinks by one given it is backlogged (p^1_{-1})
/// r0[k], r1[k] : k packets received given empty / backlogged queue.
/// An empty relay never transmits, so p0 == r0.
struct SlotDistribution {
    int n = 0;
    std::vector<double> p0, p1, r0, r1;
    double p1_dec = 0.0;

    double lambda0() const;  // mean arrivals, empty queue
    double lambda1() const;  // mean arrivals, backlogged queue
    /// Mean queue change from a backlogged state (= lambda1 - mu).
    double drift() const;

    /// Non-negativity, each family sums to 1, and p0 == r0, within tol.
    void validate(double tol = 1e-12) const;
};

enum class QueueStateKind { Empty, NonEmpty };

}  // namespace relaylab
