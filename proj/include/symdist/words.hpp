#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace symdist {

// Packed 2-bit word code: A=0, C=1, G=2, T=3, first letter in the most
// significant digit. 4^15 fits a uint32_t, so k is capped at 15.
using word_code_t = std::uint32_t;

inline constexpr int kMaxWordLength = 15;

// 256-entry lookup, -1 for anything that is not A/C/G/T (either case).
inline constexpr signed char kBaseCodeTable[256] = {
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1,  0, -1,  1, -1, -1, -1,  2, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1,  3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1,  0, -1,  1, -1, -1, -1,  2, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1,  3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
};

inline int base_code(char c) {
    return kBaseCodeTable[static_cast<unsigned char>(c)];
}

inline char base_char(int code) {
    constexpr char bases[4] = {'A', 'C', 'G', 'T'};
    return bases[code & 3];
}

inline bool valid_word_length(int k) { return k >= 1 && k <= kMaxWordLength; }

// Number of distinct words of length k, i.e. 4^k.
inline std::uint64_t word_space_size(int k) { return std::uint64_t{1} << (2 * k); }

word_code_t encode_word(std::string_view text);
std::string decode_word(word_code_t code, int k);

// Reverses letter order and complements each letter (A<->T, C<->G).
word_code_t reverse_complement(word_code_t code, int k);

// A word paired with its reversed complement, canonically oriented (w <= w_bar).
struct SymmetricPair {
    word_code_t w = 0;
    word_code_t w_bar = 0;
    bool palindromic = false;

    bool operator==(const SymmetricPair&) const = default;
};

// All words of length k grouped into symmetric pairs, sorted by w.
// Palindromic words pair with themselves.
std::vector<SymmetricPair> enumerate_pairs(int k);

// Streams k-mer codes over chunks of ACGT bases. Positions are the
// chromosome-relative start of each complete word. reset() must be called
// at every segment boundary so no word straddles a separator.
class RollingEncoder {
public:
    explicit RollingEncoder(int k)
        : k_(k), mask_(static_cast<word_code_t>(word_space_size(k) - 1)) {}

    void reset() {
        run_ = 0;
        code_ = 0;
    }

    // on_word(start_position, code) fires once per complete k-mer.
    // chunk must contain only A/C/G/T (uppercase).
    template <class Fn>
    void feed(std::string_view chunk, std::uint64_t chunk_start, Fn&& on_word) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            code_ = ((code_ << 2) |
                     static_cast<word_code_t>(
                         kBaseCodeTable[static_cast<unsigned char>(chunk[i])])) &
                    mask_;
            if (++run_ >= k_) {
                on_word(chunk_start + i + 1 - static_cast<std::uint64_t>(k_), code_);
            }
        }
    }

    int k() const { return k_; }

private:
    int k_;
    word_code_t mask_;
    word_code_t code_ = 0;
    int run_ = 0;
};

}  // namespace symdist
