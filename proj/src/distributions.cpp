#include "symdist/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symdist {

DistanceDistribution to_distribution(std::span<const HistogramEntry> entries, int k,
                                     word_code_t w, int domain_hi) {
    if (domain_hi <= k + 1) {
        throw std::invalid_argument("distribution domain must extend beyond k+1");
    }
    DistanceDistribution dist;
    dist.word = w;
    dist.k = k;
    dist.domain_lo = k + 1;
    dist.domain_hi = domain_hi;
    dist.f.assign(static_cast<std::size_t>(dist.length()), 0.0);
    for (const HistogramEntry& e : entries) {
        if (e.distance >= static_cast<std::uint32_t>(dist.domain_lo) &&
            e.distance <= static_cast<std::uint32_t>(dist.domain_hi)) {
            dist.total += e.count;
        }
    }
    if (dist.total == 0) {
        return dist;
    }
    const auto denom = static_cast<double>(dist.total);
    for (const HistogramEntry& e : entries) {
        if (e.distance >= static_cast<std::uint32_t>(dist.domain_lo) &&
            e.distance <= static_cast<std::uint32_t>(dist.domain_hi)) {
            dist.f[e.distance - static_cast<std::uint32_t>(dist.domain_lo)] =
                static_cast<double>(e.count) / denom;
        }
    }
    return dist;
}

DistanceDistribution to_distribution(const HistogramTable& table, word_code_t w,
                                     int domain_hi) {
    return to_distribution(table.entries(w), table.k(), w, domain_hi);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty set");
    }
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("quantile level must be in [0, 1]");
    }
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n - 1) * p;  // 0-based position
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

PairFilterResult filter_pairs(std::span<const SymmetricPair> pairs,
                              std::span<const std::uint64_t> totals, double quartile) {
    std::vector<double> s;
    s.reserve(totals.size());
    for (std::uint64_t t : totals) {
        s.push_back(static_cast<double>(t));
    }
    PairFilterResult result;
    result.threshold = quantile(std::move(s), quartile);
    for (const SymmetricPair& pair : pairs) {
        const auto weaker =
            static_cast<double>(std::min(totals[pair.w], totals[pair.w_bar]));
        if (weaker > result.threshold) {
            result.retained.push_back(pair);
        } else {
            result.excluded.push_back(pair);
        }
    }
    return result;
}

}  // namespace symdist
