#include "symdist/dissim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "symdist/common.hpp"

namespace symdist {

double peak_dissimilarity(const Peak& a, const Peak& b, double range, double v) {
    if (v <= 0.0) {
        throw PeaklessError("peak dissimilarity needs a positive strongest-peak size");
    }
    const double location_term = std::fabs(a.location - b.location) / range + 1.0;
    const double size_term = std::fabs(a.size - b.size) / v + 1.0;
    return location_term * size_term - 1.0;
}

double cross_peak_dissimilarity(const Peak& a, const Peak& b, double range, double v,
                                double v_bar) {
    const double smaller = std::min(v, v_bar);
    if (smaller <= 0.0) {
        throw PeaklessError("cross-peak dissimilarity needs positive strongest-peak sizes");
    }
    const double location_term = std::fabs(a.location - b.location) / range + 1.0;
    const double size_term = std::fabs(a.size - b.size) / smaller + 1.0;
    return location_term * size_term - 1.0;
}

Matching distribution_dissimilarity(const PeakSet& a, const PeakSet& b) {
    const std::size_t n = a.peaks.size();
    if (n == 0 || n != b.peaks.size()) {
        throw std::invalid_argument("peak sets must hold the same nonzero number of peaks");
    }
    if (n > DissimilarityParams::kMaxPeaks) {
        throw std::invalid_argument("peak matching is exhaustive; n must be <= 8");
    }
    if (a.range != b.range) {
        throw std::invalid_argument("peak sets must share one distance domain");
    }
    if (a.peakless() || b.peakless()) {
        throw PeaklessError("distribution dissimilarity is undefined for peakless input");
    }

    // Pairwise terms up front; the permutation scan then only sums.
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[i * n + j] = cross_peak_dissimilarity(a.peaks[i], b.peaks[j], a.range,
                                                       a.strongest, b.strongest);
        }
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Matching best;
    best.value = std::numeric_limits<double>::infinity();
    do {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += cost[i * n + static_cast<std::size_t>(perm[i])];
        }
        if (sum < best.value) {
            best.value = sum;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace symdist
