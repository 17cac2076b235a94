#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symdist/distances.hpp"
#include "symdist/words.hpp"

namespace symdist {

// Relative inter-word distance frequencies on the restricted domain
// [k+1, domain_hi]. All-zero with total == 0 when the word never repeats
// within the domain.
struct DistanceDistribution {
    word_code_t word = 0;
    int k = 0;
    int domain_lo = 0;
    int domain_hi = 0;
    std::vector<double> f;      // f[i] = frequency at distance domain_lo + i
    std::uint64_t total = 0;    // S^w, the absolute count on the domain

    int length() const { return domain_hi - domain_lo + 1; }
    double range() const { return static_cast<double>(domain_hi - domain_lo); }

    double at(int distance) const {
        return f[static_cast<std::size_t>(distance - domain_lo)];
    }
};

DistanceDistribution to_distribution(const HistogramTable& table, word_code_t w,
                                     int domain_hi);
DistanceDistribution to_distribution(std::span<const HistogramEntry> entries, int k,
                                     word_code_t w, int domain_hi);

// Order statistic with linear interpolation between neighbours: with N
// sorted values, position h = (N-1)p + 1 (1-based),
// result = x_floor(h) + (h - floor(h)) * (x_floor(h)+1 - x_floor(h)).
double quantile(std::vector<double> values, double p);
double quantile_sorted(std::span<const double> sorted, double p);

struct PairFilterResult {
    double threshold = 0.0;  // first quartile of S over all words
    std::vector<SymmetricPair> retained;
    std::vector<SymmetricPair> excluded;
};

// Drops every pair whose weaker member has S at or below the Q1 threshold.
// totals[w] = S^w, indexed by word code over all 4^k words.
PairFilterResult filter_pairs(std::span<const SymmetricPair> pairs,
                              std::span<const std::uint64_t> totals,
                              double quartile = 0.25);

}  // namespace symdist
