#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "symdist/seq_io.hpp"
#include "symdist/words.hpp"

namespace symdist {

struct HistogramEntry {
    std::uint32_t distance;
    std::uint64_t count;

    bool operator==(const HistogramEntry&) const = default;
};

// Sparse inter-word distance histograms for every word of length k within
// one scope (a chromosome, or the aggregate). Entries are grouped by word,
// distances ascending.
class HistogramTable {
public:
    HistogramTable() = default;
    explicit HistogramTable(int k);

    int k() const { return k_; }
    std::span<const HistogramEntry> entries(word_code_t w) const;
    std::uint64_t total(word_code_t w) const;
    std::uint64_t total_in(word_code_t w, std::uint32_t lo, std::uint32_t hi) const;
    std::uint64_t entry_count() const { return entries_.size(); }

    bool operator==(const HistogramTable&) const = default;

    // Elementwise sum; parts must share k.
    static HistogramTable merge(std::span<const HistogramTable> parts);

    // rows must be grouped by word (word codes ascending) with distances
    // ascending within a word; duplicates are not allowed.
    static HistogramTable from_sorted(int k, std::vector<HistogramEntry> entries,
                                      std::vector<word_code_t> row_words,
                                      std::vector<std::uint32_t> row_sizes);

private:
    int k_ = 0;
    std::vector<std::uint64_t> offsets_;   // size 4^k + 1
    std::vector<HistogramEntry> entries_;
};

struct SourceInfo {
    std::string path;
    std::string digest;

    bool operator==(const SourceInfo&) const = default;
};

// All distance counts for one genome scan: per-chromosome tables plus their
// aggregate, with d_max applied at count time.
struct CountArchive {
    int k = 0;
    std::uint32_t d_max = 0;
    std::vector<ChromosomeSummary> chromosomes;
    std::vector<HistogramTable> per_chromosome;  // parallel to chromosomes
    HistogramTable aggregate;
    std::vector<SourceInfo> sources;

    // -1 when absent.
    int chromosome_index(std::string_view id) const;

    bool same_counts(const CountArchive& other) const;
};

// One-pass streaming counter over a segment stream. Keeps a last-occurrence
// table of size 4^k; a consecutive occurrence at gap <= d_max adds one count.
// Occurrence tracking resets at every segment boundary.
class DistanceCounter final : public SegmentSink {
public:
    enum class Layout { kAuto, kDense, kSparse };

    DistanceCounter(int k, std::uint32_t d_max, Layout layout = Layout::kAuto);
    ~DistanceCounter() override;

    void begin_chromosome(std::string_view id) override;
    void begin_segment(std::uint64_t start_offset) override;
    void bases(std::string_view chunk) override;
    void end_chromosome(std::uint64_t length) override;

    // Consumes the accumulated per-chromosome tables and builds the archive.
    CountArchive finish(std::vector<SourceInfo> sources = {});

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

CountArchive count_fasta(const std::string& path, int k, std::uint32_t d_max,
                         DistanceCounter::Layout layout = DistanceCounter::Layout::kAuto);

// Counts several files concurrently (one worker per file) and merges the
// results in input order.
CountArchive count_fasta_files(std::span<const std::string> paths, int k, std::uint32_t d_max,
                               int threads);

CountArchive count_segments(std::span<const SequenceSegment> segments, int k,
                            std::uint32_t d_max,
                            DistanceCounter::Layout layout = DistanceCounter::Layout::kAuto);

// Elementwise sum of archives (same k and d_max). Chromosomes are keyed by
// id in first-appearance order; summaries of repeated ids are added.
CountArchive merge_archives(std::span<const CountArchive> parts);

// 0-based half-open interval on one chromosome.
struct GenomicInterval {
    std::string chromosome;
    std::uint64_t start = 0;
    std::uint64_t end = 0;

    bool operator==(const GenomicInterval&) const = default;
};

// Coordinates of consecutive occurrences of w exactly target_d apart; the
// interval runs from the first occurrence's start to the second's start + k.
std::vector<GenomicInterval> positions_at_distance(std::span<const SequenceSegment> segments,
                                                   word_code_t w, int k, std::uint32_t target_d);

// Streaming variant; restricted to one chromosome when `chromosome` is
// non-empty.
std::vector<GenomicInterval> positions_at_distance_fasta(const std::string& path,
                                                         std::string_view chromosome,
                                                         word_code_t w, int k,
                                                         std::uint32_t target_d);

// Binary archive ("SYMD" magic, versioned, deflate-compressed payload with a
// checksum) and the plain-text TSV interchange format. load_archive sniffs
// which of the two it is given.
void save_archive(const CountArchive& archive, const std::string& path);
CountArchive load_archive(const std::string& path);

void write_archive_tsv(const CountArchive& archive, std::ostream& out);
CountArchive read_archive_tsv(std::istream& in);

}  // namespace symdist
