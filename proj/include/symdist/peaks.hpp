#pragma once

#include <vector>

#include "symdist/distributions.hpp"

namespace symdist {

// A width-h window of consecutive distances. The size is the mean absolute
// difference of successive frequencies inside the window; the location is
// the window midpoint (half-integral for even h).
struct Peak {
    int window_start = 0;
    int width = 0;
    double location = 0.0;
    double size = 0.0;

    int window_end() const { return window_start + width - 1; }

    bool operator==(const Peak&) const = default;
};

// The n strongest pairwise-disjoint peaks, strongest first.
struct PeakSet {
    word_code_t word = 0;
    std::vector<Peak> peaks;
    double strongest = 0.0;  // v, the first peak's size
    double range = 0.0;      // R, domain_hi - domain_lo

    bool peakless() const { return strongest <= 0.0; }
};

// Mean absolute successive-frequency difference over the h-wide window
// starting at `start`. The window must lie inside the domain; h >= 2.
double window_size(const DistanceDistribution& f, int start, int h);

// Greedy selection at stride 1: repeatedly take the highest-size window
// disjoint from all previously selected ones, ties to the smaller start.
PeakSet find_peaks(const DistanceDistribution& f, int h, int n);

}  // namespace symdist
