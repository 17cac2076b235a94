#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "symdist/dissim.hpp"
#include "symdist/distances.hpp"
#include "symdist/distributions.hpp"

namespace symdist {

enum class PairStatus {
    kOk,          // dissimilarity defined
    kPalindrome,  // self-pair; dissimilarity is exactly 0
    kExcluded,    // weaker member at or below the S quartile threshold
    kPeakless,    // a retained member has no peak; dissimilarity undefined
};

const char* pair_status_name(PairStatus status);

struct PairRecord {
    SymmetricPair pair;
    std::uint64_t s_w = 0;
    std::uint64_t s_wbar = 0;
    double v_w = 0.0;     // strongest-peak sizes; NaN when not computed
    double v_wbar = 0.0;
    double value = 0.0;   // d(f^w, f^wbar); NaN when undefined
    std::vector<int> matching;
    PairStatus status = PairStatus::kExcluded;

    bool defined() const {
        return status == PairStatus::kOk || status == PairStatus::kPalindrome;
    }

    // The member with the stronger peaks (larger v; ties to w).
    word_code_t stronger_member() const;
};

struct FiveNumber {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

// NaN-filled on empty input.
FiveNumber five_number(std::vector<double> values);

struct SummaryStats {
    FiveNumber s_all;           // S^w over all words
    FiveNumber ratio_all;       // max(S^w/S^wbar, S^wbar/S^w) over all pairs
    FiveNumber ratio_retained;  // same ratio over retained pairs
    FiveNumber d_retained;      // d over retained pairs with defined values
    std::size_t retained = 0;
    std::size_t excluded = 0;
    std::size_t peakless = 0;
    double s_threshold = 0.0;
};

struct SelectionReport {
    double low_cut = 0.0;   // low percentile of D
    double high_cut = 0.0;  // high percentile of D
    std::vector<PairRecord> low;
    std::vector<PairRecord> high;
};

struct PipelineOptions {
    DissimilarityParams params;
    double s_quartile = 0.25;
    double low_percentile = 0.10;
    double high_percentile = 0.90;
    // When set, S^w sums every recorded distance instead of the restricted
    // domain.
    bool s_over_all_distances = false;
    int threads = 1;
};

struct PipelineResult {
    int k = 0;
    std::uint32_t d_max = 0;
    PipelineOptions options;
    SummaryStats summary;
    SelectionReport selection;
    std::vector<PairRecord> pairs;  // defined first (by d, then w), then
                                    // peakless, then excluded (by w)
    std::vector<double> defined_d;  // D, ascending
};

PipelineResult run_pipeline(const CountArchive& archive, const PipelineOptions& options = {});

struct ChromosomeLocalization {
    std::string chromosome;
    std::uint64_t favoured = 0;  // counts inside the favoured-distance windows
    std::uint64_t total = 0;     // domain counts for the word on that chromosome
    double ratio = 0.0;

    bool operator==(const ChromosomeLocalization&) const = default;
};

struct LocalizationReport {
    word_code_t word = 0;
    int k = 0;
    std::vector<double> favoured_distances;  // positive-size selected peak locations
    std::vector<ChromosomeLocalization> rows;
    std::string top_chromosome;
};

// Finds the favoured distances of `word` in the aggregate distribution and
// the chromosome where occurrences at those distances are most concentrated.
// Throws PeaklessError when the word has no peak.
LocalizationReport localize(const CountArchive& archive, word_code_t word,
                            const DissimilarityParams& params);

// BED: 0-based half-open `chrom<TAB>start<TAB>end`, no header lines.
void export_bed(std::span<const GenomicInterval> intervals, std::ostream& out);

// TSV writers share one shape: every `meta` line prefixed with "# ",
// a "#"-prefixed column header, then the rows.
void write_pairs_tsv(std::ostream& out, std::span<const PairRecord> records, int k,
                     std::span<const std::string> meta);
void write_summary_tsv(std::ostream& out, const SummaryStats& summary,
                       std::span<const std::string> meta);
void write_selection_tsv(std::ostream& out, const SelectionReport& selection, int k,
                         std::span<const std::string> meta);
void write_distribution_tsv(std::ostream& out, const DistanceDistribution& dist,
                            std::span<const std::string> meta);
void write_peaks_tsv(std::ostream& out, const PeakSet& set,
                     std::span<const std::string> meta);
void write_localization_tsv(std::ostream& out, const LocalizationReport& report,
                            std::span<const std::string> meta);

}  // namespace symdist
