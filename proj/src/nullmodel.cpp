#include "symdist/nullmodel.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace symdist {

MarkovModel::MarkovModel(int order, bool symmetrized, std::vector<std::uint64_t> counts)
    : order_(order), symmetrized_(symmetrized), counts_(std::move(counts)) {
    if (order < 0 || order + 1 > kMaxWordLength) {
        throw std::invalid_argument("model order out of range: " + std::to_string(order));
    }
    if (counts_.size() != word_space_size(order + 1)) {
        throw std::invalid_argument("model count table has the wrong size");
    }
}

bool MarkovModel::empty() const {
    return std::all_of(counts_.begin(), counts_.end(),
                       [](std::uint64_t c) { return c == 0; });
}

namespace {

class UnitCountSink final : public SegmentSink {
public:
    UnitCountSink(int unit_length, std::vector<std::uint64_t>& counts)
        : encoder_(unit_length), counts_(counts) {}

    void begin_segment(std::uint64_t) override { encoder_.reset(); }
    void bases(std::string_view chunk) override {
        encoder_.feed(chunk, 0, [this](std::uint64_t, word_code_t code) { ++counts_[code]; });
    }

private:
    RollingEncoder encoder_;
    std::vector<std::uint64_t>& counts_;
};

std::vector<std::uint64_t> symmetrize_counts(std::vector<std::uint64_t> raw, int unit_length) {
    std::vector<std::uint64_t> out(raw.size());
    for (std::size_t u = 0; u < raw.size(); ++u) {
        out[u] = raw[u] + raw[reverse_complement(static_cast<word_code_t>(u),
                                                 unit_length)];
    }
    return out;
}

}  // namespace

MarkovModel MarkovModel::train(std::span<const SequenceSegment> segments, int order,
                               bool symmetrize) {
    if (order < 0 || order + 1 > kMaxWordLength) {
        throw std::invalid_argument("model order out of range: " + std::to_string(order));
    }
    const int unit = order + 1;
    std::vector<std::uint64_t> counts(word_space_size(unit), 0);
    UnitCountSink sink(unit, counts);
    replay_segments(segments, sink);
    if (symmetrize) {
        counts = symmetrize_counts(std::move(counts), unit);
    }
    return MarkovModel(order, symmetrize, std::move(counts));
}

MarkovModel MarkovModel::train_fasta(const std::string& path, int order, bool symmetrize) {
    if (order < 0 || order + 1 > kMaxWordLength) {
        throw std::invalid_argument("model order out of range: " + std::to_string(order));
    }
    const int unit = order + 1;
    std::vector<std::uint64_t> counts(word_space_size(unit), 0);
    UnitCountSink sink(unit, counts);
    scan_fasta(path, sink);
    if (symmetrize) {
        counts = symmetrize_counts(std::move(counts), unit);
    }
    return MarkovModel(order, symmetrize, std::move(counts));
}

namespace {

// Weighted draw; total must be positive. The modulo bias is far below any
// count resolution that matters here and keeps draws platform-stable.
std::size_t draw(std::mt19937_64& rng, std::span<const std::uint64_t> weights,
                 std::uint64_t total) {
    std::uint64_t r = rng() % total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (r < weights[i]) {
            return i;
        }
        r -= weights[i];
    }
    return weights.size() - 1;  // unreachable when total == sum(weights)
}

}  // namespace

std::string generate_sequence(const MarkovModel& model, std::uint64_t length,
                              std::uint64_t seed) {
    if (model.counts().empty() || model.empty()) {
        throw std::invalid_argument("cannot generate from an empty model");
    }
    const int m = model.order();
    if (length <= static_cast<std::uint64_t>(m)) {
        throw std::invalid_argument("generated length must exceed the model order");
    }

    // Marginal tables down to single bases back off empty transition rows:
    // tables[j] counts (j+1)-mers, tables[m] being the trained table.
    std::vector<std::vector<std::uint64_t>> tables(static_cast<std::size_t>(m) + 1);
    tables[static_cast<std::size_t>(m)] = model.counts();
    for (int j = m; j > 0; --j) {
        const auto& fine = tables[static_cast<std::size_t>(j)];
        auto& coarse = tables[static_cast<std::size_t>(j - 1)];
        coarse.assign(word_space_size(j), 0);
        for (std::size_t u = 0; u < coarse.size(); ++u) {
            for (std::size_t lead = 0; lead < 4; ++lead) {
                coarse[u] += fine[(lead << (2 * j)) | u];
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::string out;
    out.reserve(static_cast<std::size_t>(length));

    word_code_t context = 0;
    if (m > 0) {
        // Stationary seeding: contexts weighted by their total outgoing count.
        const auto& top = tables[static_cast<std::size_t>(m)];
        std::vector<std::uint64_t> context_totals(word_space_size(m), 0);
        std::uint64_t grand = 0;
        for (std::size_t c = 0; c < context_totals.size(); ++c) {
            for (std::size_t b = 0; b < 4; ++b) {
                context_totals[c] += top[(c << 2) | b];
            }
            grand += context_totals[c];
        }
        if (grand == 0) {
            throw std::invalid_argument("cannot generate from an empty model");
        }
        context = static_cast<word_code_t>(draw(rng, context_totals, grand));
        out = decode_word(context, m);
    }

    const word_code_t context_mask =
        m > 0 ? static_cast<word_code_t>(word_space_size(m) - 1) : 0;
    while (out.size() < length) {
        int b = -1;
        for (int j = m; j >= 0; --j) {
            const word_code_t ctx =
                j > 0 ? (context & static_cast<word_code_t>(word_space_size(j) - 1)) : 0;
            const auto& table = tables[static_cast<std::size_t>(j)];
            const std::uint64_t* row = table.data() + (static_cast<std::size_t>(ctx) << 2);
            const std::uint64_t total = row[0] + row[1] + row[2] + row[3];
            if (total > 0) {
                b = static_cast<int>(draw(rng, {row, 4}, total));
                break;
            }
        }
        if (b < 0) {
            throw std::invalid_argument("cannot generate from an empty model");
        }
        out.push_back(base_char(b));
        if (m > 0) {
            context = ((context << 2) | static_cast<word_code_t>(b)) & context_mask;
        }
    }
    return out;
}

}  // namespace symdist
