#include "relaylab/discrete.hpp"

#include <cmath>
#include <stdexcept>

namespace relaylab {

std::vector<double> binomial_pmf(int n, double q) {
    if (n < 0 || q < 0.0 || q > 1.0)
        throw std::invalid_argument("binomial_pmf: bad parameters");
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    if (q == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (q == 1.0) {
        pmf[static_cast<std::size_t>(n)] = 1.0;
        return pmf;
    }
    double coeff = 1.0;  // C(n, k), exact in double for n <= 56
    for (int k = 0; k <= n; ++k) {
        pmf[static_cast<std::size_t>(k)] =
            coeff * std::pow(q, k) * std::pow(1.0 - q, n - k);
        coeff *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return pmf;
}

std::vector<double> bernoulli_convolve(std::span<const double> probs) {
    std::vector<double> pmf{1.0};
    pmf.reserve(probs.size() + 1);
    for (double c : probs) {
        pmf.push_back(0.0);
        for (std::size_t k = pmf.size() - 1; k > 0; --k)
            pmf[k] = pmf[k] * (1.0 - c) + pmf[k - 1] * c;
        pmf[0] *= (1.0 - c);
    }
    return pmf;
}

double pmf_mean(std::span<const double> pmf) {
    double m = 0.0;
    for (std::size_t k = 1; k < pmf.size(); ++k)
        m += static_cast<double>(k) * pmf[k];
    return m;
}

}  // namespace relaylab
