#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdist {

// One maximal run of A/C/G/T within a chromosome. Bases are uppercase;
// start_offset is 0-based and counts every symbol of the record,
// separators included.
struct SequenceSegment {
    std::string chromosome;
    std::uint64_t segment_index = 0;
    std::uint64_t start_offset = 0;
    std::string bases;

    bool operator==(const SequenceSegment&) const = default;
};

struct ChromosomeSummary {
    std::string id;
    std::uint64_t length = 0;  // all symbols, separators included
    std::uint64_t segments = 0;

    bool operator==(const ChromosomeSummary&) const = default;
};

struct GenomeSource {
    std::vector<ChromosomeSummary> records;
    std::string path;
    std::string digest;
};

// Push-style consumer of a segment stream. Bases arrive uppercased and
// ACGT-only, possibly split across several chunks per segment, so no
// whole-chromosome buffering is needed on either side.
class SegmentSink {
public:
    virtual ~SegmentSink() = default;
    virtual void begin_chromosome(std::string_view id) { (void)id; }
    virtual void begin_segment(std::uint64_t start_offset) { (void)start_offset; }
    virtual void bases(std::string_view chunk) = 0;
    virtual void end_segment() {}
    virtual void end_chromosome(std::uint64_t length) { (void)length; }
};

// Streams a FASTA file (plain or gzip, detected by magic bytes) into sink.
// Lowercase bases are uppercased before the ACGT test; every other symbol
// separates segments. Throws IoError / FormatError.
void scan_fasta(const std::string& path, SegmentSink& sink);

// Same scan over an in-memory FASTA text.
void scan_fasta_text(std::string_view text, SegmentSink& sink);

std::vector<SequenceSegment> read_fasta_segments(const std::string& path);
std::vector<SequenceSegment> read_fasta_segments_text(std::string_view text);

GenomeSource scan_summary(const std::string& path);
GenomeSource scan_summary_text(std::string_view text);

// Drives a sink from already-materialized segments. Chromosome lengths are
// reported as the extent covered by that chromosome's segments.
void replay_segments(std::span<const SequenceSegment> segments, SegmentSink& sink);

}  // namespace symdist
