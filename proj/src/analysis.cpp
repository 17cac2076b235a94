#include "symdist/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "symdist/common.hpp"
#include "symdist/peaks.hpp"

namespace symdist {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pair_ratio(std::uint64_t a, std::uint64_t b) {
    if (a == 0 && b == 0) {
        return 1.0;
    }
    const std::uint64_t hi = std::max(a, b);
    const std::uint64_t lo = std::min(a, b);
    if (lo == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(hi) / static_cast<double>(lo);
}

}  // namespace

const char* pair_status_name(PairStatus status) {
    switch (status) {
        case PairStatus::kOk:
            return "ok";
        case PairStatus::kPalindrome:
            return "palindrome";
        case PairStatus::kExcluded:
            return "excluded";
        case PairStatus::kPeakless:
            return "peakless";
    }
    return "?";
}

word_code_t PairRecord::stronger_member() const {
    if (std::isnan(v_w) || std::isnan(v_wbar)) {
        return pair.w;
    }
    return v_wbar > v_w ? pair.w_bar : pair.w;
}

FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) {
        return {kNaN, kNaN, kNaN, kNaN, kNaN};
    }
    std::sort(values.begin(), values.end());
    return {quantile_sorted(values, 0.0), quantile_sorted(values, 0.25),
            quantile_sorted(values, 0.5), quantile_sorted(values, 0.75),
            quantile_sorted(values, 1.0)};
}

PipelineResult run_pipeline(const CountArchive& archive, const PipelineOptions& options) {
    const int k = archive.k;
    const DissimilarityParams& params = options.params;
    if (params.n < 1 || params.n > DissimilarityParams::kMaxPeaks) {
        throw std::invalid_argument("peak count must be in [1, 8]");
    }
    const auto domain_hi = static_cast<std::uint32_t>(params.domain_hi);

    PipelineResult result;
    result.k = k;
    result.d_max = archive.d_max;
    result.options = options;

    // S^w for every word.
    const std::uint64_t n_words = word_space_size(k);
    std::vector<std::uint64_t> totals(static_cast<std::size_t>(n_words));
    for (std::uint64_t w = 0; w < n_words; ++w) {
        const auto code = static_cast<word_code_t>(w);
        totals[w] = options.s_over_all_distances
                        ? archive.aggregate.total(code)
                        : archive.aggregate.total_in(code, static_cast<std::uint32_t>(k + 1),
                                                     domain_hi);
    }

    const std::vector<SymmetricPair> pairs = enumerate_pairs(k);
    PairFilterResult filter = filter_pairs(pairs, totals, options.s_quartile);

    // Peak sets for every word that occurs in a retained pair.
    std::vector<word_code_t> needed;
    needed.reserve(filter.retained.size() * 2);
    for (const SymmetricPair& pair : filter.retained) {
        needed.push_back(pair.w);
        if (!pair.palindromic) {
            needed.push_back(pair.w_bar);
        }
    }
    std::vector<PeakSet> peak_sets(needed.size());
    parallel_for(needed.size(), options.threads, [&](std::size_t i) {
        const DistanceDistribution dist =
            to_distribution(archive.aggregate, needed[i], params.domain_hi);
        peak_sets[i] = find_peaks(dist, params.h, params.n);
    });
    std::unordered_map<word_code_t, const PeakSet*> peaks_by_word;
    peaks_by_word.reserve(needed.size());
    for (std::size_t i = 0; i < needed.size(); ++i) {
        peaks_by_word[needed[i]] = &peak_sets[i];
    }

    result.pairs.reserve(pairs.size());
    std::vector<PairRecord> records(filter.retained.size());
    parallel_for(filter.retained.size(), options.threads, [&](std::size_t i) {
        const SymmetricPair& pair = filter.retained[i];
        PairRecord& rec = records[i];
        rec.pair = pair;
        rec.s_w = totals[pair.w];
        rec.s_wbar = totals[pair.w_bar];
        const PeakSet& ps_w = *peaks_by_word.at(pair.w);
        const PeakSet& ps_wbar = *peaks_by_word.at(pair.w_bar);
        rec.v_w = ps_w.strongest;
        rec.v_wbar = ps_wbar.strongest;
        if (ps_w.peakless() || ps_wbar.peakless()) {
            rec.status = PairStatus::kPeakless;
            rec.value = kNaN;
            return;
        }
        Matching matching = distribution_dissimilarity(ps_w, ps_wbar);
        rec.value = matching.value;
        rec.matching = std::move(matching.permutation);
        rec.status = pair.palindromic ? PairStatus::kPalindrome : PairStatus::kOk;
    });

    for (PairRecord& rec : records) {
        if (rec.defined()) {
            result.defined_d.push_back(rec.value);
        }
        result.pairs.push_back(std::move(rec));
    }
    for (const SymmetricPair& pair : filter.excluded) {
        PairRecord rec;
        rec.pair = pair;
        rec.s_w = totals[pair.w];
        rec.s_wbar = totals[pair.w_bar];
        rec.v_w = kNaN;
        rec.v_wbar = kNaN;
        rec.value = kNaN;
        rec.status = PairStatus::kExcluded;
        result.pairs.push_back(std::move(rec));
    }

    // Defined values ascending by (d, w); then peakless, then excluded by w.
    auto rank = [](const PairRecord& r) {
        if (r.defined()) {
            return 0;
        }
        return r.status == PairStatus::kPeakless ? 1 : 2;
    };
    std::sort(result.pairs.begin(), result.pairs.end(),
              [&rank](const PairRecord& a, const PairRecord& b) {
                  const int ra = rank(a);
                  const int rb = rank(b);
                  if (ra != rb) {
                      return ra < rb;
                  }
                  if (ra == 0 && a.value != b.value) {
                      return a.value < b.value;
                  }
                  return a.pair.w < b.pair.w;
              });
    std::sort(result.defined_d.begin(), result.defined_d.end());

    // Table-style summaries.
    SummaryStats& summary = result.summary;
    summary.s_threshold = filter.threshold;
    summary.retained = filter.retained.size();
    summary.excluded = filter.excluded.size();
    {
        std::vector<double> s_values;
        s_values.reserve(totals.size());
        for (std::uint64_t t : totals) {
            s_values.push_back(static_cast<double>(t));
        }
        summary.s_all = five_number(std::move(s_values));
    }
    {
        std::vector<double> ratios;
        ratios.reserve(pairs.size());
        for (const SymmetricPair& pair : pairs) {
            ratios.push_back(pair_ratio(totals[pair.w], totals[pair.w_bar]));
        }
        summary.ratio_all = five_number(std::move(ratios));
    }
    {
        std::vector<double> ratios;
        ratios.reserve(filter.retained.size());
        for (const SymmetricPair& pair : filter.retained) {
            ratios.push_back(pair_ratio(totals[pair.w], totals[pair.w_bar]));
        }
        summary.ratio_retained = five_number(std::move(ratios));
    }
    summary.d_retained = five_number(result.defined_d);
    for (const PairRecord& rec : result.pairs) {
        if (rec.status == PairStatus::kPeakless) {
            ++summary.peakless;
        }
    }

    // Extreme-pair selection at the configured percentiles of D.
    SelectionReport& selection = result.selection;
    if (result.defined_d.empty()) {
        selection.low_cut = kNaN;
        selection.high_cut = kNaN;
    } else {
        selection.low_cut = quantile_sorted(result.defined_d, options.low_percentile);
        selection.high_cut = quantile_sorted(result.defined_d, options.high_percentile);
        for (const PairRecord& rec : result.pairs) {
            if (!rec.defined()) {
                continue;
            }
            if (rec.value <= selection.low_cut) {
                selection.low.push_back(rec);
            }
            if (rec.value >= selection.high_cut) {
                selection.high.push_back(rec);
            }
        }
    }
    return result;
}

LocalizationReport localize(const CountArchive& archive, word_code_t word,
                            const DissimilarityParams& params) {
    LocalizationReport report;
    report.word = word;
    report.k = archive.k;

    const DistanceDistribution dist =
        to_distribution(archive.aggregate, word, params.domain_hi);
    const PeakSet set = find_peaks(dist, params.h, params.n);
    if (set.peakless()) {
        throw PeaklessError("word " + decode_word(word, archive.k) +
                            " has no peak to localize");
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> windows;  // inclusive bounds
    const int half = params.h / 2;
    for (const Peak& peak : set.peaks) {
        if (peak.size <= 0.0) {
            continue;
        }
        report.favoured_distances.push_back(peak.location);
        const double lo = peak.location - half;
        const double hi = peak.location + half;
        const auto d_lo = static_cast<std::uint32_t>(
            std::max<double>(std::ceil(lo), dist.domain_lo));
        const auto d_hi = static_cast<std::uint32_t>(
            std::min<double>(std::floor(hi), dist.domain_hi));
        windows.emplace_back(d_lo, d_hi);
    }

    for (std::size_t c = 0; c < archive.chromosomes.size(); ++c) {
        const HistogramTable& table = archive.per_chromosome[c];
        ChromosomeLocalization row;
        row.chromosome = archive.chromosomes[c].id;
        row.total = table.total_in(word, static_cast<std::uint32_t>(dist.domain_lo),
                                   static_cast<std::uint32_t>(dist.domain_hi));
        for (const auto& [lo, hi] : windows) {
            row.favoured += table.total_in(word, lo, hi);
        }
        row.ratio = row.total == 0
                        ? 0.0
                        : static_cast<double>(row.favoured) / static_cast<double>(row.total);
        report.rows.push_back(std::move(row));
    }

    const ChromosomeLocalization* top = nullptr;
    for (const ChromosomeLocalization& row : report.rows) {
        if (top == nullptr || row.ratio > top->ratio ||
            (row.ratio == top->ratio && row.chromosome < top->chromosome)) {
            top = &row;
        }
    }
    if (top != nullptr) {
        report.top_chromosome = top->chromosome;
    }
    return report;
}

void export_bed(std::span<const GenomicInterval> intervals, std::ostream& out) {
    for (const GenomicInterval& iv : intervals) {
        out << iv.chromosome << '\t' << iv.start << '\t' << iv.end << '\n';
    }
}

namespace {

void write_meta(std::ostream& out, std::span<const std::string> meta) {
    for (const std::string& line : meta) {
        out << "# " << line << '\n';
    }
}

}  // namespace

void write_pairs_tsv(std::ostream& out, std::span<const PairRecord> records, int k,
                     std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "#w\twbar\tS_w\tS_wbar\td\tstatus\n";
    for (const PairRecord& rec : records) {
        out << decode_word(rec.pair.w, k) << '\t' << decode_word(rec.pair.w_bar, k) << '\t'
            << rec.s_w << '\t' << rec.s_wbar << '\t' << format_sig(rec.value) << '\t'
            << pair_status_name(rec.status) << '\n';
    }
}

void write_summary_tsv(std::ostream& out, const SummaryStats& summary,
                       std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "# s_threshold: " << format_sig(summary.s_threshold) << '\n';
    out << "# retained_pairs: " << summary.retained << '\n';
    out << "# excluded_pairs: " << summary.excluded << '\n';
    out << "# peakless_pairs: " << summary.peakless << '\n';
    out << "#statistic\tS_all_words\tratio_all_pairs\td_retained\tratio_retained\n";
    const char* names[5] = {"min", "q1", "median", "q3", "max"};
    const double cols[5][4] = {
        {summary.s_all.min, summary.ratio_all.min, summary.d_retained.min,
         summary.ratio_retained.min},
        {summary.s_all.q1, summary.ratio_all.q1, summary.d_retained.q1,
         summary.ratio_retained.q1},
        {summary.s_all.median, summary.ratio_all.median, summary.d_retained.median,
         summary.ratio_retained.median},
        {summary.s_all.q3, summary.ratio_all.q3, summary.d_retained.q3,
         summary.ratio_retained.q3},
        {summary.s_all.max, summary.ratio_all.max, summary.d_retained.max,
         summary.ratio_retained.max},
    };
    for (int i = 0; i < 5; ++i) {
        out << names[i];
        for (double v : cols[i]) {
            out << '\t' << format_sig(v);
        }
        out << '\n';
    }
}

void write_selection_tsv(std::ostream& out, const SelectionReport& selection, int k,
                         std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "# low_cut: " << format_sig(selection.low_cut) << '\n';
    out << "# high_cut: " << format_sig(selection.high_cut) << '\n';
    out << "#group\tw\twbar\tS_w\tS_wbar\td\tpeak_word\n";
    auto rows = [&](const char* group, std::span<const PairRecord> records) {
        for (const PairRecord& rec : records) {
            out << group << '\t' << decode_word(rec.pair.w, k) << '\t'
                << decode_word(rec.pair.w_bar, k) << '\t' << rec.s_w << '\t' << rec.s_wbar
                << '\t' << format_sig(rec.value) << '\t'
                << decode_word(rec.stronger_member(), k) << '\n';
        }
    };
    rows("low", selection.low);
    rows("high", selection.high);
}

void write_distribution_tsv(std::ostream& out, const DistanceDistribution& dist,
                            std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "# word: " << decode_word(dist.word, dist.k) << '\n';
    out << "# S: " << dist.total << '\n';
    out << "#distance\tfrequency\n";
    for (int d = dist.domain_lo; d <= dist.domain_hi; ++d) {
        out << d << '\t' << format_sig(dist.at(d)) << '\n';
    }
}

void write_peaks_tsv(std::ostream& out, const PeakSet& set,
                     std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "#rank\tlocation\tsize\n";
    for (std::size_t i = 0; i < set.peaks.size(); ++i) {
        out << (i + 1) << '\t' << format_sig(set.peaks[i].location) << '\t'
            << format_sig(set.peaks[i].size) << '\n';
    }
}

void write_localization_tsv(std::ostream& out, const LocalizationReport& report,
                            std::span<const std::string> meta) {
    write_meta(out, meta);
    out << "# word: " << decode_word(report.word, report.k) << '\n';
    out << "# favoured_distances:";
    for (double d : report.favoured_distances) {
        out << ' ' << format_sig(d);
    }
    out << '\n';
    out << "# top_chromosome: " << report.top_chromosome << '\n';
    out << "#chromosome\tfavoured_count\ttotal_count\tratio\n";
    for (const ChromosomeLocalization& row : report.rows) {
        out << row.chromosome << '\t' << row.favoured << '\t' << row.total << '\t'
            << format_sig(row.ratio) << '\n';
    }
}

}  // namespace symdist
