#include "relaylab/slot_dist.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab {

namespace {

double weighted_index_sum(const std::vector<double>& pmf) {
    double s = 0.0;
    for (std::size_t k = 1; k < pmf.size(); ++k)
        s += static_cast<double>(k) * pmf[k];
    return s;
}

void check_family(const std::vector<double>& f, double extra, double tol,
                  const char* name) {
    double sum = extra;
    for (double v : f) {
        if (v < -tol)
            throw ContractError(std::string("slot distribution: negative ") +
                                name);
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw ContractError(std::string("slot distribution: ") + name +
                            " sums to " + std::to_string(sum));
}

}  // namespace

double SlotDistribution::lambda0() const { return weighted_index_sum(r0); }
double SlotDistribution::lambda1() const { return weighted_index_sum(r1); }

double SlotDistribution::drift() const {
    return weighted_index_sum(p1) - p1_dec;
}

void SlotDistribution::validate(double tol) const {
    const std::size_t want = static_cast<std::size_t>(n) + 1;
    if (p0.size() != want || p1.size() != want || r0.size() != want ||
        r1.size() != want)
        throw ContractError("slot distribution: family size != n+1");
    check_family(p0, 0.0, tol, "p0");
    check_family(r0, 0.0, tol, "r0");
    check_family(r1, 0.0, tol, "r1");
    if (p1_dec < -tol)
        throw ContractError("slot distribution: negative p1_dec");
    check_family(p1, p1_dec, tol, "p1");
    for (std::size_t k = 0; k < want; ++k)
        if (std::abs(p0[k] - r0[k]) > tol)
            throw ContractError(
                "slot distribution: p0 != r0 (empty relay cannot transmit)");
}

}  // namespace relaylab
