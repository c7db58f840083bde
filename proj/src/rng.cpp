#include "pstomo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pstomo::rng {

double normal(std::mt19937_64& g) {
    // u1 in (0,1] so the log is finite.
    const double u1 = (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::int64_t> multinomial(const std::vector<double>& probs,
                                      std::int64_t shots, std::mt19937_64& g) {
    if (shots < 1) throw std::invalid_argument("multinomial: shots must be >= 1");
    double total = 0.0;
    std::vector<double> cum(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i];
        if (p < -1e-12) throw std::invalid_argument("multinomial: negative probability");
        if (p < 0.0) p = 0.0;
        total += p;
        cum[i] = total;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("multinomial: probabilities must sum to 1");

    std::vector<std::int64_t> counts(probs.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = uniform01(g) * total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cum.begin());
        if (idx >= counts.size()) idx = counts.size() - 1;
        ++counts[idx];
    }
    return counts;
}

}  // namespace pstomo::rng
