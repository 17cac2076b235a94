#include "symdist/words.hpp"

#include <stdexcept>

namespace symdist {

word_code_t encode_word(std::string_view text) {
    if (!valid_word_length(static_cast<int>(text.size()))) {
        throw std::invalid_argument("word length must be in [1, 15], got " +
                                    std::to_string(text.size()));
    }
    word_code_t code = 0;
    for (char c : text) {
        int b = base_code(c);
        if (b < 0) {
            throw std::invalid_argument("word contains a non-ACGT symbol: '" +
                                        std::string(1, c) + "'");
        }
        code = (code << 2) | static_cast<word_code_t>(b);
    }
    return code;
}

std::string decode_word(word_code_t code, int k) {
    if (!valid_word_length(k)) {
        throw std::invalid_argument("word length must be in [1, 15], got " + std::to_string(k));
    }
    std::string text(static_cast<std::size_t>(k), '\0');
    for (int i = k - 1; i >= 0; --i) {
        text[static_cast<std::size_t>(i)] = base_char(static_cast<int>(code & 3));
        code >>= 2;
    }
    return text;
}

word_code_t reverse_complement(word_code_t code, int k) {
    word_code_t out = 0;
    for (int i = 0; i < k; ++i) {
        out = (out << 2) | (3 - (code & 3));  // complement is 3 - digit
        code >>= 2;
    }
    return out;
}

std::vector<SymmetricPair> enumerate_pairs(int k) {
    if (!valid_word_length(k)) {
        throw std::invalid_argument("word length must be in [1, 15], got " + std::to_string(k));
    }
    std::vector<SymmetricPair> pairs;
    const std::uint64_t n = word_space_size(k);
    pairs.reserve(static_cast<std::size_t>(n / 2 + (k % 2 == 0 ? (n >> k) : 0)));
    for (std::uint64_t w = 0; w < n; ++w) {
        const auto code = static_cast<word_code_t>(w);
        const word_code_t bar = reverse_complement(code, k);
        if (code <= bar) {
            pairs.push_back({code, bar, code == bar});
        }
    }
    return pairs;
}

}  // namespace symdist
