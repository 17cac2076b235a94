#include "symdist/distances.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>

#include "symdist/common.hpp"

namespace symdist {

namespace {

// Budgets that keep auto layout selection inside a few hundred MB.
constexpr std::uint64_t kDenseCountBudgetBytes = 512ull << 20;
constexpr std::uint64_t kDenseLastBudgetBytes = 256ull << 20;

}  // namespace

HistogramTable::HistogramTable(int k) : k_(k) {
    if (!valid_word_length(k)) {
        throw std::invalid_argument("histogram word length out of range: " + std::to_string(k));
    }
    offsets_.assign(static_cast<std::size_t>(word_space_size(k)) + 1, 0);
}

std::span<const HistogramEntry> HistogramTable::entries(word_code_t w) const {
    const std::size_t lo = offsets_[w];
    const std::size_t hi = offsets_[w + 1];
    return {entries_.data() + lo, hi - lo};
}

std::uint64_t HistogramTable::total(word_code_t w) const {
    std::uint64_t sum = 0;
    for (const HistogramEntry& e : entries(w)) {
        sum += e.count;
    }
    return sum;
}

std::uint64_t HistogramTable::total_in(word_code_t w, std::uint32_t lo, std::uint32_t hi) const {
    std::uint64_t sum = 0;
    for (const HistogramEntry& e : entries(w)) {
        if (e.distance >= lo && e.distance <= hi) {
            sum += e.count;
        }
    }
    return sum;
}

HistogramTable HistogramTable::from_sorted(int k, std::vector<HistogramEntry> entries,
                                           std::vector<word_code_t> row_words,
                                           std::vector<std::uint32_t> row_sizes) {
    HistogramTable table(k);
    const std::size_t n_words = static_cast<std::size_t>(word_space_size(k));
    std::uint64_t cursor = 0;
    std::size_t row = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
        table.offsets_[w] = cursor;
        if (row < row_words.size() && row_words[row] == w) {
            cursor += row_sizes[row];
            ++row;
        }
    }
    if (row != row_words.size() || cursor != entries.size()) {
        throw std::invalid_argument("histogram rows not sorted by word");
    }
    table.offsets_[n_words] = cursor;
    table.entries_ = std::move(entries);
    return table;
}

HistogramTable HistogramTable::merge(std::span<const HistogramTable> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("cannot merge zero histogram tables");
    }
    const int k = parts.front().k();
    for (const HistogramTable& t : parts) {
        if (t.k() != k) {
            throw std::invalid_argument("histogram tables with different k cannot be merged");
        }
    }
    HistogramTable out(k);
    const std::size_t n_words = static_cast<std::size_t>(word_space_size(k));
    std::uint64_t total_entries = 0;
    for (const HistogramTable& t : parts) {
        total_entries += t.entry_count();
    }
    out.entries_.reserve(static_cast<std::size_t>(total_entries));
    std::vector<HistogramEntry> scratch;
    for (std::size_t w = 0; w < n_words; ++w) {
        out.offsets_[w] = out.entries_.size();
        scratch.clear();
        for (const HistogramTable& t : parts) {
            auto span = t.entries(static_cast<word_code_t>(w));
            scratch.insert(scratch.end(), span.begin(), span.end());
        }
        std::sort(scratch.begin(), scratch.end(),
                  [](const HistogramEntry& a, const HistogramEntry& b) {
                      return a.distance < b.distance;
                  });
        for (const HistogramEntry& e : scratch) {
            if (!out.entries_.empty() && out.offsets_[w] < out.entries_.size() &&
                out.entries_.back().distance == e.distance) {
                out.entries_.back().count += e.count;
            } else {
                out.entries_.push_back(e);
            }
        }
    }
    out.offsets_[n_words] = out.entries_.size();
    return out;
}

int CountArchive::chromosome_index(std::string_view id) const {
    for (std::size_t i = 0; i < chromosomes.size(); ++i) {
        if (chromosomes[i].id == id) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

bool CountArchive::same_counts(const CountArchive& other) const {
    return k == other.k && d_max == other.d_max && chromosomes == other.chromosomes &&
           per_chromosome == other.per_chromosome && aggregate == other.aggregate;
}

struct DistanceCounter::Impl {
    int k;
    std::uint32_t d_max;
    std::uint64_t n_words;
    bool dense_counts;
    bool dense_last;
    RollingEncoder encoder;

    // Per-chromosome scan state. Epochs mark segment generations so the
    // last-occurrence table never needs a per-segment wipe.
    std::vector<std::int64_t> last_pos;
    std::vector<std::uint32_t> last_epoch;
    std::unordered_map<word_code_t, std::pair<std::int64_t, std::uint32_t>> last_map;
    std::uint32_t epoch = 0;
    std::uint64_t next_pos = 0;
    std::uint64_t max_pos = 0;
    std::uint64_t segment_count = 0;
    std::string chromosome;
    bool chromosome_open = false;

    std::vector<std::uint32_t> dense;                     // word * d_max + (distance - 1)
    std::unordered_map<std::uint64_t, std::uint64_t> sparse;  // word << 32 | distance

    std::vector<ChromosomeSummary> chromosomes;
    std::vector<HistogramTable> tables;

    Impl(int k_in, std::uint32_t d_max_in, Layout layout)
        : k(k_in), d_max(d_max_in), n_words(word_space_size(k_in)), encoder(k_in) {
        if (!valid_word_length(k)) {
            throw std::invalid_argument("word length out of range: " + std::to_string(k));
        }
        if (d_max < 1) {
            throw std::invalid_argument("d_max must be >= 1");
        }
        const std::uint64_t dense_bytes = n_words * d_max * sizeof(std::uint32_t);
        switch (layout) {
            case Layout::kDense:
                dense_counts = true;
                break;
            case Layout::kSparse:
                dense_counts = false;
                break;
            case Layout::kAuto:
                dense_counts = dense_bytes <= kDenseCountBudgetBytes;
                break;
        }
        dense_last = n_words * (sizeof(std::int64_t) + sizeof(std::uint32_t)) <=
                     kDenseLastBudgetBytes;
        if (dense_counts) {
            dense.assign(static_cast<std::size_t>(n_words * d_max), 0);
        }
        if (dense_last) {
            last_pos.assign(static_cast<std::size_t>(n_words), -1);
            last_epoch.assign(static_cast<std::size_t>(n_words), 0);
        }
    }

    void record(word_code_t code, std::uint64_t gap) {
        if (dense_counts) {
            ++dense[static_cast<std::size_t>(code) * d_max + (gap - 1)];
        } else {
            ++sparse[(static_cast<std::uint64_t>(code) << 32) | gap];
        }
    }

    void on_word(std::uint64_t start, word_code_t code) {
        if (dense_last) {
            const std::int64_t prev = last_pos[code];
            const bool live = last_epoch[code] == epoch && prev >= 0;
            last_pos[code] = static_cast<std::int64_t>(start);
            last_epoch[code] = epoch;
            if (live) {
                const std::uint64_t gap = start - static_cast<std::uint64_t>(prev);
                if (gap <= d_max) {
                    record(code, gap);
                }
            }
        } else {
            auto [it, inserted] = last_map.try_emplace(
                code, static_cast<std::int64_t>(start), epoch);
            if (!inserted) {
                const auto [prev, prev_epoch] = it->second;
                it->second = {static_cast<std::int64_t>(start), epoch};
                if (prev_epoch == epoch) {
                    const std::uint64_t gap = start - static_cast<std::uint64_t>(prev);
                    if (gap <= d_max) {
                        record(code, gap);
                    }
                }
            }
        }
    }

    void flush_chromosome(std::uint64_t length) {
        if (!chromosome_open) {
            return;
        }
        chromosomes.push_back({chromosome, length, segment_count});
        tables.push_back(build_table());
        chromosome_open = false;
    }

    HistogramTable build_table() {
        std::vector<HistogramEntry> entries;
        std::vector<word_code_t> row_words;
        std::vector<std::uint32_t> row_sizes;
        if (dense_counts) {
            for (std::uint64_t w = 0; w < n_words; ++w) {
                const std::uint32_t* row = dense.data() + w * d_max;
                std::uint32_t n = 0;
                for (std::uint32_t d = 0; d < d_max; ++d) {
                    if (row[d] != 0) {
                        entries.push_back({d + 1, row[d]});
                        ++n;
                    }
                }
                if (n > 0) {
                    row_words.push_back(static_cast<word_code_t>(w));
                    row_sizes.push_back(n);
                }
            }
            std::fill(dense.begin(), dense.end(), 0);
        } else {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> cells(sparse.begin(),
                                                                       sparse.end());
            std::sort(cells.begin(), cells.end());
            sparse.clear();
            word_code_t current = 0;
            std::uint32_t n = 0;
            for (const auto& [key, count] : cells) {
                const auto code = static_cast<word_code_t>(key >> 32);
                const auto distance = static_cast<std::uint32_t>(key & 0xffffffffu);
                if (n > 0 && code != current) {
                    row_words.push_back(current);
                    row_sizes.push_back(n);
                    n = 0;
                }
                current = code;
                entries.push_back({distance, count});
                ++n;
            }
            if (n > 0) {
                row_words.push_back(current);
                row_sizes.push_back(n);
            }
        }
        return HistogramTable::from_sorted(k, std::move(entries), std::move(row_words),
                                           std::move(row_sizes));
    }
};

DistanceCounter::DistanceCounter(int k, std::uint32_t d_max, Layout layout)
    : impl_(std::make_unique<Impl>(k, d_max, layout)) {}

DistanceCounter::~DistanceCounter() = default;

void DistanceCounter::begin_chromosome(std::string_view id) {
    Impl& im = *impl_;
    im.flush_chromosome(im.max_pos);
    im.chromosome.assign(id);
    im.chromosome_open = true;
    im.epoch = 0;
    im.next_pos = 0;
    im.max_pos = 0;
    im.segment_count = 0;
    if (im.dense_last) {
        std::fill(im.last_pos.begin(), im.last_pos.end(), -1);
        std::fill(im.last_epoch.begin(), im.last_epoch.end(), 0);
    } else {
        im.last_map.clear();
    }
}

void DistanceCounter::begin_segment(std::uint64_t start_offset) {
    Impl& im = *impl_;
    ++im.epoch;
    ++im.segment_count;
    im.next_pos = start_offset;
    im.encoder.reset();
}

void DistanceCounter::bases(std::string_view chunk) {
    Impl& im = *impl_;
    im.encoder.feed(chunk, im.next_pos,
                    [&im](std::uint64_t start, word_code_t code) { im.on_word(start, code); });
    im.next_pos += chunk.size();
    im.max_pos = std::max(im.max_pos, im.next_pos);
}

void DistanceCounter::end_chromosome(std::uint64_t length) {
    impl_->flush_chromosome(length);
}

CountArchive DistanceCounter::finish(std::vector<SourceInfo> sources) {
    Impl& im = *impl_;
    im.flush_chromosome(im.max_pos);
    CountArchive archive;
    archive.k = im.k;
    archive.d_max = im.d_max;
    archive.chromosomes = std::move(im.chromosomes);
    archive.per_chromosome = std::move(im.tables);
    if (archive.per_chromosome.empty()) {
        archive.aggregate = HistogramTable(im.k);
    } else {
        archive.aggregate = HistogramTable::merge(archive.per_chromosome);
    }
    archive.sources = std::move(sources);
    return archive;
}

CountArchive count_fasta(const std::string& path, int k, std::uint32_t d_max,
                         DistanceCounter::Layout layout) {
    DistanceCounter counter(k, d_max, layout);
    scan_fasta(path, counter);
    return counter.finish({{path, file_digest(path)}});
}

CountArchive count_fasta_files(std::span<const std::string> paths, int k, std::uint32_t d_max,
                               int threads) {
    std::vector<CountArchive> parts(paths.size());
    parallel_for(paths.size(), threads,
                 [&](std::size_t i) { parts[i] = count_fasta(paths[i], k, d_max); });
    return merge_archives(parts);
}

CountArchive count_segments(std::span<const SequenceSegment> segments, int k,
                            std::uint32_t d_max, DistanceCounter::Layout layout) {
    DistanceCounter counter(k, d_max, layout);
    replay_segments(segments, counter);
    return counter.finish();
}

CountArchive merge_archives(std::span<const CountArchive> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("cannot merge zero archives");
    }
    const int k = parts.front().k;
    const std::uint32_t d_max = parts.front().d_max;
    for (const CountArchive& a : parts) {
        if (a.k != k || a.d_max != d_max) {
            throw std::invalid_argument("archives disagree on k or d_max; cannot merge");
        }
    }
    CountArchive out;
    out.k = k;
    out.d_max = d_max;

    // First-appearance chromosome order.
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<const HistogramTable*>> groups;
    for (const CountArchive& a : parts) {
        for (std::size_t c = 0; c < a.chromosomes.size(); ++c) {
            const ChromosomeSummary& summary = a.chromosomes[c];
            auto [it, inserted] = index.try_emplace(summary.id, out.chromosomes.size());
            if (inserted) {
                out.chromosomes.push_back(summary);
                groups.emplace_back();
            } else {
                out.chromosomes[it->second].length += summary.length;
                out.chromosomes[it->second].segments += summary.segments;
            }
            groups[it->second].push_back(&a.per_chromosome[c]);
        }
        out.sources.insert(out.sources.end(), a.sources.begin(), a.sources.end());
    }
    out.per_chromosome.reserve(groups.size());
    for (const auto& group : groups) {
        if (group.size() == 1) {
            out.per_chromosome.push_back(*group.front());
        } else {
            std::vector<HistogramTable> tables;
            tables.reserve(group.size());
            for (const HistogramTable* t : group) {
                tables.push_back(*t);
            }
            out.per_chromosome.push_back(HistogramTable::merge(tables));
        }
    }
    if (out.per_chromosome.empty()) {
        out.aggregate = HistogramTable(k);
    } else {
        out.aggregate = HistogramTable::merge(out.per_chromosome);
    }
    return out;
}

namespace {

// Tracks just one word and reports consecutive occurrences at an exact gap.
class PositionSink final : public SegmentSink {
public:
    PositionSink(word_code_t w, int k, std::uint32_t target_d, std::string_view only_chromosome,
                 std::vector<GenomicInterval>& out)
        : word_(w),
          k_(k),
          target_(target_d),
          only_(only_chromosome),
          out_(out),
          encoder_(k) {}

    void begin_chromosome(std::string_view id) override {
        chromosome_.assign(id);
        active_ = only_.empty() || chromosome_ == only_;
    }

    void begin_segment(std::uint64_t start_offset) override {
        next_pos_ = start_offset;
        last_ = -1;
        encoder_.reset();
    }

    void bases(std::string_view chunk) override {
        if (!active_) {
            next_pos_ += chunk.size();
            return;
        }
        encoder_.feed(chunk, next_pos_, [this](std::uint64_t start, word_code_t code) {
            if (code != word_) {
                return;
            }
            if (last_ >= 0 && start - static_cast<std::uint64_t>(last_) == target_) {
                out_.push_back({chromosome_, static_cast<std::uint64_t>(last_),
                                start + static_cast<std::uint64_t>(k_)});
            }
            last_ = static_cast<std::int64_t>(start);
        });
        next_pos_ += chunk.size();
    }

private:
    word_code_t word_;
    int k_;
    std::uint32_t target_;
    std::string only_;
    std::vector<GenomicInterval>& out_;
    RollingEncoder encoder_;
    std::string chromosome_;
    bool active_ = false;
    std::uint64_t next_pos_ = 0;
    std::int64_t last_ = -1;
};

}  // namespace

std::vector<GenomicInterval> positions_at_distance(std::span<const SequenceSegment> segments,
                                                   word_code_t w, int k,
                                                   std::uint32_t target_d) {
    if (target_d < 1) {
        throw std::invalid_argument("target distance must be >= 1");
    }
    std::vector<GenomicInterval> out;
    PositionSink sink(w, k, target_d, {}, out);
    replay_segments(segments, sink);
    return out;
}

std::vector<GenomicInterval> positions_at_distance_fasta(const std::string& path,
                                                         std::string_view chromosome,
                                                         word_code_t w, int k,
                                                         std::uint32_t target_d) {
    if (target_d < 1) {
        throw std::invalid_argument("target distance must be >= 1");
    }
    std::vector<GenomicInterval> out;
    PositionSink sink(w, k, target_d, chromosome, out);
    scan_fasta(path, sink);
    return out;
}

}  // namespace symdist
