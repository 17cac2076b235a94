#pragma once

#include <vector>

#include "symdist/peaks.hpp"

namespace symdist {

struct DissimilarityParams {
    int h = 5;           // peak-search bandwidth
    int n = 3;           // number of peaks compared
    int domain_hi = 1000;

    static constexpr int kMaxPeaks = 8;  // exhaustive matching bound (8! permutations)
};

// Dissimilarity of two peaks of the same distribution:
// (|l1-l2|/R + 1)(|v1-v2|/v + 1) - 1, in [0, 3]. v is the distribution's
// strongest-peak size and must be positive.
double peak_dissimilarity(const Peak& a, const Peak& b, double range, double v);

// Dissimilarity of peaks from two distributions on a common domain; the
// size gap is normalized by min(v, v_bar).
double cross_peak_dissimilarity(const Peak& a, const Peak& b, double range, double v,
                                double v_bar);

struct Matching {
    double value = 0.0;
    std::vector<int> permutation;  // peak i of the first set matches permutation[i]
};

// Minimum over all n! permutations of the summed cross-peak dissimilarities.
// Both sets need the same peak count (n <= 8) and positive strongest peaks.
Matching distribution_dissimilarity(const PeakSet& a, const PeakSet& b);

}  // namespace symdist
