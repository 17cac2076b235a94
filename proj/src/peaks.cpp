#include "symdist/peaks.hpp"

#include <cmath>
#include <stdexcept>

namespace symdist {

double window_size(const DistanceDistribution& f, int start, int h) {
    if (h < 2) {
        throw std::invalid_argument("window width must be >= 2");
    }
    if (start < f.domain_lo || start + h - 1 > f.domain_hi) {
        throw std::invalid_argument("window out of domain");
    }
    const std::size_t base = static_cast<std::size_t>(start - f.domain_lo);
    double sum = 0.0;
    for (int i = 0; i + 1 < h; ++i) {
        sum += std::fabs(f.f[base + static_cast<std::size_t>(i) + 1] -
                         f.f[base + static_cast<std::size_t>(i)]);
    }
    return sum / static_cast<double>(h - 1);
}

PeakSet find_peaks(const DistanceDistribution& f, int h, int n) {
    if (h < 2 || n < 1) {
        throw std::invalid_argument("peak search needs h >= 2 and n >= 1");
    }
    if (f.length() < n * h) {
        throw std::invalid_argument("domain too short for " + std::to_string(n) +
                                    " disjoint windows of width " + std::to_string(h));
    }
    const int n_starts = f.length() - h + 1;
    std::vector<double> sizes(static_cast<std::size_t>(n_starts));
    for (int i = 0; i < n_starts; ++i) {
        sizes[static_cast<std::size_t>(i)] = window_size(f, f.domain_lo + i, h);
    }

    PeakSet set;
    set.word = f.word;
    set.range = f.range();
    std::vector<bool> covered(static_cast<std::size_t>(f.length()), false);
    for (int round = 0; round < n; ++round) {
        int best = -1;
        for (int i = 0; i < n_starts; ++i) {
            bool free = true;
            for (int j = i; j < i + h; ++j) {
                if (covered[static_cast<std::size_t>(j)]) {
                    free = false;
                    break;
                }
            }
            if (!free) {
                continue;
            }
            if (best < 0 || sizes[static_cast<std::size_t>(i)] >
                                sizes[static_cast<std::size_t>(best)]) {
                best = i;  // strict > keeps the smaller start on ties
            }
        }
        if (best < 0) {
            throw std::invalid_argument("domain cannot fit another disjoint window");
        }
        for (int j = best; j < best + h; ++j) {
            covered[static_cast<std::size_t>(j)] = true;
        }
        Peak peak;
        peak.window_start = f.domain_lo + best;
        peak.width = h;
        peak.location = static_cast<double>(peak.window_start) +
                        static_cast<double>(h - 1) / 2.0;
        peak.size = sizes[static_cast<std::size_t>(best)];
        set.peaks.push_back(peak);
    }
    set.strongest = set.peaks.front().size;
    return set;
}

}  // namespace symdist
