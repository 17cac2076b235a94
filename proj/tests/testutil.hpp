#pragma once

// Shared helpers and independent reference implementations (oracles) used
// by the unit and acceptance suites. Everything here recomputes results
// from first principles, without touching the streaming code paths.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "symdist/distances.hpp"
#include "symdist/distributions.hpp"
#include "symdist/peaks.hpp"
#include "symdist/seq_io.hpp"
#include "symdist/words.hpp"

namespace testutil {

// chromosome -> word text -> distance -> count
using NaiveCounts = std::map<std::string, std::map<std::string, std::map<std::uint32_t, std::uint64_t>>>;

// Rescans every word of length k across every segment independently.
inline NaiveCounts naive_count_distances(const std::vector<symdist::SequenceSegment>& segments,
                                         int k, std::uint64_t d_max) {
    NaiveCounts counts;
    const std::uint64_t n_words = symdist::word_space_size(k);
    for (std::uint64_t w = 0; w < n_words; ++w) {
        const std::string word = symdist::decode_word(static_cast<symdist::word_code_t>(w), k);
        for (const symdist::SequenceSegment& seg : segments) {
            long long last = -1;
            if (seg.bases.size() < static_cast<std::size_t>(k)) {
                continue;
            }
            for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= seg.bases.size(); ++i) {
                if (seg.bases.compare(i, static_cast<std::size_t>(k), word) != 0) {
                    continue;
                }
                const long long pos = static_cast<long long>(seg.start_offset + i);
                if (last >= 0) {
                    const auto gap = static_cast<std::uint64_t>(pos - last);
                    if (gap <= d_max) {
                        ++counts[seg.chromosome][word][static_cast<std::uint32_t>(gap)];
                    }
                }
                last = pos;
            }
        }
    }
    return counts;
}

// True when the archive holds exactly the naive counts (per chromosome and
// in aggregate).
inline bool archive_matches_naive(const symdist::CountArchive& archive,
                                  const NaiveCounts& naive) {
    const std::uint64_t n_words = symdist::word_space_size(archive.k);
    std::map<std::string, std::map<std::uint32_t, std::uint64_t>> aggregate;
    for (std::size_t c = 0; c < archive.chromosomes.size(); ++c) {
        const std::string& chrom = archive.chromosomes[c].id;
        auto chrom_it = naive.find(chrom);
        for (std::uint64_t w = 0; w < n_words; ++w) {
            const auto code = static_cast<symdist::word_code_t>(w);
            const std::string word = symdist::decode_word(code, archive.k);
            std::map<std::uint32_t, std::uint64_t> expected;
            if (chrom_it != naive.end()) {
                auto word_it = chrom_it->second.find(word);
                if (word_it != chrom_it->second.end()) {
                    expected = word_it->second;
                }
            }
            for (const auto& [d, n] : expected) {
                aggregate[word][d] += n;
            }
            auto span = archive.per_chromosome[c].entries(code);
            if (span.size() != expected.size()) {
                return false;
            }
            std::size_t i = 0;
            for (const auto& [d, n] : expected) {
                if (span[i].distance != d || span[i].count != n) {
                    return false;
                }
                ++i;
            }
        }
    }
    for (std::uint64_t w = 0; w < n_words; ++w) {
        const auto code = static_cast<symdist::word_code_t>(w);
        const std::string word = symdist::decode_word(code, archive.k);
        auto it = aggregate.find(word);
        const std::map<std::uint32_t, std::uint64_t> empty;
        const auto& expected = it == aggregate.end() ? empty : it->second;
        auto span = archive.aggregate.entries(code);
        if (span.size() != expected.size()) {
            return false;
        }
        std::size_t i = 0;
        for (const auto& [d, n] : expected) {
            if (span[i].distance != d || span[i].count != n) {
                return false;
            }
            ++i;
        }
    }
    return true;
}

// Exhaustive greedy peak selection, written directly from the definition.
inline symdist::PeakSet exhaustive_peaks(const symdist::DistanceDistribution& f, int h, int n) {
    struct Window {
        int start;
        double size;
    };
    std::vector<Window> windows;
    for (int start = f.domain_lo; start + h - 1 <= f.domain_hi; ++start) {
        double sum = 0.0;
        for (int d = start; d < start + h - 1; ++d) {
            sum += std::fabs(f.at(d + 1) - f.at(d));
        }
        windows.push_back({start, sum / (h - 1)});
    }
    symdist::PeakSet set;
    set.word = f.word;
    set.range = f.range();
    std::vector<std::pair<int, int>> taken;
    for (int round = 0; round < n; ++round) {
        const Window* best = nullptr;
        for (const Window& w : windows) {
            bool overlaps = false;
            for (const auto& [lo, hi] : taken) {
                if (w.start <= hi && w.start + h - 1 >= lo) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) {
                continue;
            }
            if (best == nullptr || w.size > best->size) {
                best = &w;
            }
        }
        if (best == nullptr) {
            throw std::runtime_error("oracle: no disjoint window left");
        }
        taken.emplace_back(best->start, best->start + h - 1);
        symdist::Peak peak;
        peak.window_start = best->start;
        peak.width = h;
        peak.location = best->start + (h - 1) / 2.0;
        peak.size = best->size;
        set.peaks.push_back(peak);
    }
    set.strongest = set.peaks.front().size;
    return set;
}

// Minimum-cost matching by explicit recursion over all assignments.
inline double matching_oracle(const symdist::PeakSet& a, const symdist::PeakSet& b) {
    const std::size_t n = a.peaks.size();
    std::vector<bool> used(n, false);
    double best = std::numeric_limits<double>::infinity();
    auto d2 = [&](const symdist::Peak& p, const symdist::Peak& q) {
        const double v = std::min(a.strongest, b.strongest);
        return (std::fabs(p.location - q.location) / a.range + 1.0) *
                   (std::fabs(p.size - q.size) / v + 1.0) -
               1.0;
    };
    std::function<void(std::size_t, double)> go = [&](std::size_t i, double acc) {
        if (i == n) {
            best = std::min(best, acc);
            return;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j]) {
                used[j] = true;
                go(i + 1, acc + d2(a.peaks[i], b.peaks[j]));
                used[j] = false;
            }
        }
    };
    go(0, 0.0);
    return best;
}

// Random FASTA text over a given alphabet, multiple records, mixed-width
// lines.
inline std::string random_fasta(std::mt19937_64& rng, int records, std::size_t max_len,
                                std::string_view alphabet) {
    std::string fasta;
    for (int r = 0; r < records; ++r) {
        fasta += ">chr" + std::to_string(r) + " synthetic\n";
        const std::size_t len = rng() % (max_len + 1);
        std::size_t width = 1 + rng() % 80;
        std::size_t col = 0;
        for (std::size_t i = 0; i < len; ++i) {
            fasta.push_back(alphabet[rng() % alphabet.size()]);
            if (++col == width) {
                fasta.push_back('\n');
                col = 0;
            }
        }
        if (col != 0 || len == 0) {
            fasta.push_back('\n');
        }
    }
    return fasta;
}

inline std::string random_bases(std::mt19937_64& rng, std::size_t len) {
    std::string s(len, 'A');
    for (auto& c : s) {
        c = "ACGT"[rng() % 4];
    }
    return s;
}

// Self-deleting temporary file.
class TempFile {
public:
    explicit TempFile(const std::string& tag, const std::string& contents = {}) {
        static std::atomic<unsigned> counter{0};
        path_ = (std::filesystem::temp_directory_path() /
                 ("symdist_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
        if (!contents.empty()) {
            std::ofstream out(path_, std::ios::binary);
            out << contents;
        }
    }
    ~TempFile() { std::filesystem::remove(path_); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

// Builds a distribution directly from explicit frequencies (domain_lo at
// index 0), bypassing histogram conversion.
inline symdist::DistanceDistribution make_distribution(int k, int domain_hi,
                                                       std::vector<double> f,
                                                       symdist::word_code_t word = 0) {
    symdist::DistanceDistribution dist;
    dist.word = word;
    dist.k = k;
    dist.domain_lo = k + 1;
    dist.domain_hi = domain_hi;
    dist.f = std::move(f);
    dist.total = 1;
    if (dist.f.size() != static_cast<std::size_t>(dist.length())) {
        throw std::runtime_error("make_distribution: wrong vector length");
    }
    return dist;
}

}  // namespace testutil
