#pragma once

#include <span>
#include <vector>

namespace relaylab {

/// Binomial(n, q) probability mass function, pmf[k] = C(n,k) q^k (1-q)^(n-k).
std::vector<double> binomial_pmf(int n, double q);

/// Distribution of the number of successes among independent Bernoulli
/// trials with the given per-trial probabilities (Poisson-binomial).
std::vector<double> bernoulli_convolve(std::span<const double> probs);

/// First moment of a pmf indexed from 0.
double pmf_mean(std::span<const double> pmf);

}  // namespace relaylab
