#pragma once

#include <vector>

#include "relaylab/scenario.hpp"
#include "relaylab/slot_dist.hpp"

namespace relaylab {

/// 2^n subset enumeration is used for exact results; beyond this use the
/// symmetric closed forms or the simulator.
inline constexpr int kMaxEnumerationUsers = 20;

/// Arrival distributions conditioned on the relay's transmitter state, and
/// the set-averaged relay->destination success probability:
///   relay_dest_success (A) : E over user sets of P^d_{0/S+0}
///   silent_arrivals (A_k)  : P(k arrivals | relay silent)
///   active_arrivals (B_k)  : P(k arrivals | relay transmitting)
/// Both arrival families include the per-slot receiver activation gate, so
/// r1[k] = (1 - q0 p_tx) A_k + q0 p_tx B_k and mu = q0 p_tx A hold exactly.
struct ConditionalComponents {
    double relay_dest_success = 0.0;
    std::vector<double> silent_arrivals;
    std::vector<double> active_arrivals;
};

/// Slot rows for one queue state, as produced by exact enumeration:
/// growth[k] (k = 0..n), shrink (P(change = -1), zero for the empty state)
/// and arrivals[k].
struct StateRows {
    std::vector<double> growth;
    double shrink = 0.0;
    std::vector<double> arrivals;
};

/// Everything a single enumeration pass yields.
struct EnumerationResult {
    SlotDistribution dist;
    ConditionalComponents components;
};

/// Exact per-slot event enumeration over all 2^n user transmit subsets,
/// valid for arbitrary (asymmetric) users. Per subset: each transmitting
/// user reaches the destination with its SINR-threshold success probability;
/// on direct failure the relay captures it iff the receiver gate is on and
/// the user->relay link succeeds; the backlogged relay transmits with
/// probability q0 p_tx and departs on relay->destination success. The
/// receiver gate is a single per-slot Bernoulli(p_rx) applying to all
/// arrivals of the slot.
EnumerationResult enumerate_full(const Scenario& s);

/// SlotDistribution view of enumerate_full.
SlotDistribution enumerate_slot(const Scenario& s);

/// Rows of one queue state only.
StateRows enumerate_state(const Scenario& s, QueueStateKind state);

/// Conditional-components view of enumerate_full.
ConditionalComponents conditional_components(const Scenario& s);

/// Stationary distribution of the queue-size chain, truncated at
/// `truncation` (inclusive), solved by the exact level-crossing recursion
///   pi[j+1] b0 = pi[0] A+(j) + sum_i pi[i] B+(j-i+2).
struct StationaryDistribution {
    std::vector<double> pi;  // states 0..truncation, normalized
    double p_empty = 0.0;
    double mean = 0.0;
    /// Geometric estimate of the probability mass beyond the truncation.
    double tail_mass = 0.0;
    /// Set when the estimated tail mass exceeds 1e-9: increase the
    /// truncation before trusting the moments.
    bool tail_warning = false;
};

StationaryDistribution markov_stationary(const SlotDistribution& dist,
                                         int truncation = 10000);

}  // namespace relaylab
