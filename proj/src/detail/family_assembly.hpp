#pragma once

#include <cstddef>
#include <vector>

#include "relaylab/exact_oracle.hpp"

namespace relaylab::detail {

// Per-slot event probabilities conditioned on the receiver gate being ON.
// silent_arr / active_arr: arrival counts given the relay is silent /
// transmitting; active_growth / active_dec: queue change given the relay
// transmits (arrivals and the departure success combined); dep_avg: the
// set-averaged relay->destination success probability.
struct GateOnFamilies {
    std::vector<double> silent_arr;
    std::vector<double> active_arr;
    std::vector<double> active_growth;
    double active_dec = 0.0;
    double dep_avg = 0.0;
};

// Mixes in the per-slot Bernoulli(p_rx) receiver gate (gate OFF pins the
// arrival count to zero, leaving the departure untouched) and weighs the
// relay's transmit attempt q0 * p_tx, producing the full slot distribution
// and the conditional components.
inline EnumerationResult assemble_families(int n, const GateOnFamilies& f,
                                           double p_rx, double q0_p_tx) {
    const double t = q0_p_tx;
    const std::size_t m = static_cast<std::size_t>(n) + 1;

    EnumerationResult out;
    auto& d = out.dist;
    d.n = n;
    d.p0.assign(m, 0.0);
    d.p1.assign(m, 0.0);
    d.r0.assign(m, 0.0);
    d.r1.assign(m, 0.0);

    auto& comp = out.components;
    comp.relay_dest_success = f.dep_avg;
    comp.silent_arrivals.assign(m, 0.0);
    comp.active_arrivals.assign(m, 0.0);

    for (std::size_t k = 0; k < m; ++k) {
        const double off = (k == 0) ? 1.0 - p_rx : 0.0;
        comp.silent_arrivals[k] = off + p_rx * f.silent_arr[k];
        comp.active_arrivals[k] = off + p_rx * f.active_arr[k];

        d.r0[k] = comp.silent_arrivals[k];
        d.p0[k] = comp.silent_arrivals[k];
        d.r1[k] = (1.0 - t) * comp.silent_arrivals[k] +
                  t * comp.active_arrivals[k];
        d.p1[k] = (1.0 - t) * comp.silent_arrivals[k] +
                  t * p_rx * f.active_growth[k];
    }
    d.p1[0] += t * (1.0 - p_rx) * (1.0 - f.dep_avg);
    d.p1_dec = t * ((1.0 - p_rx) * f.dep_avg + p_rx * f.active_dec);
    return out;
}

}  // namespace relaylab::detail
