#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symdist/seq_io.hpp"
#include "symdist/words.hpp"

namespace symdist {

// Order-m Markov model over {A,C,G,T}, stored as (m+1)-mer counts. When
// symmetrized, every (m+1)-mer carries its own raw count plus the raw count
// of its reversed complement, which makes the model exactly strand-symmetric.
class MarkovModel {
public:
    MarkovModel() = default;
    MarkovModel(int order, bool symmetrized, std::vector<std::uint64_t> counts);

    int order() const { return order_; }
    bool symmetrized() const { return symmetrized_; }
    std::uint64_t count(word_code_t unit) const { return counts_[unit]; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    bool empty() const;

    static MarkovModel train(std::span<const SequenceSegment> segments, int order,
                             bool symmetrize);
    static MarkovModel train_fasta(const std::string& path, int order, bool symmetrize);

private:
    int order_ = 0;
    bool symmetrized_ = false;
    std::vector<std::uint64_t> counts_;  // size 4^(order+1)
};

inline constexpr const char* kGeneratorName = "mt19937_64";

// Seeds the first `order` bases from context totals, then extends one base
// at a time from the matching transition row, backing off to shorter
// contexts when a row is empty. Deterministic for a fixed seed.
std::string generate_sequence(const MarkovModel& model, std::uint64_t length,
                              std::uint64_t seed);

}  // namespace symdist
