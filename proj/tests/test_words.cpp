#include <doctest.h>

#include <random>
#include <stdexcept>
#include <set>

#include "symdist/words.hpp"

using namespace symdist;

TEST_CASE("encode/decode round-trips fixed words") {
    CHECK(encode_word("A") == 0);
    CHECK(encode_word("C") == 1);
    CHECK(encode_word("G") == 2);
    CHECK(encode_word("T") == 3);
    CHECK(encode_word("AC") == 1);
    CHECK(encode_word("CA") == 4);
    CHECK(decode_word(encode_word("ACGT"), 4) == "ACGT");
    CHECK(decode_word(encode_word("TTTTTTT"), 7) == "TTTTTTT");
    CHECK(encode_word("acgt") == encode_word("ACGT"));
}

TEST_CASE("encode rejects bad input") {
    CHECK_THROWS_AS(encode_word("ACGN"), std::invalid_argument);
    CHECK_THROWS_AS(encode_word(""), std::invalid_argument);
    CHECK_THROWS_AS(encode_word("ACGTACGTACGTACGT"), std::invalid_argument);  // 16 > 15
}

TEST_CASE("encode/decode round-trips random words") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 1 + static_cast<int>(rng() % kMaxWordLength);
        std::string word(static_cast<std::size_t>(k), 'A');
        for (auto& c : word) {
            c = "ACGT"[rng() % 4];
        }
        CHECK(decode_word(encode_word(word), k) == word);
    }
}

TEST_CASE("reverse complement of fixed words") {
    CHECK(decode_word(reverse_complement(encode_word("ACGT"), 4), 4) == "ACGT");
    CHECK(decode_word(reverse_complement(encode_word("AAAAAAA"), 7), 7) == "TTTTTTT");
    CHECK(decode_word(reverse_complement(encode_word("ACCATTC"), 7), 7) == "GAATGGT");
}

TEST_CASE("reverse complement is an involution for every word up to k=7") {
    for (int k = 1; k <= 7; ++k) {
        const std::uint64_t n = word_space_size(k);
        for (std::uint64_t w = 0; w < n; ++w) {
            const auto code = static_cast<word_code_t>(w);
            CHECK(reverse_complement(reverse_complement(code, k), k) == code);
        }
    }
}

TEST_CASE("pair enumeration covers every word exactly once") {
    for (int k = 1; k <= 6; ++k) {
        const auto pairs = enumerate_pairs(k);
        std::set<word_code_t> seen;
        std::size_t palindromes = 0;
        for (const SymmetricPair& p : pairs) {
            CHECK(p.w <= p.w_bar);
            CHECK(reverse_complement(p.w, k) == p.w_bar);
            CHECK(p.palindromic == (p.w == p.w_bar));
            seen.insert(p.w);
            seen.insert(p.w_bar);
            if (p.palindromic) {
                ++palindromes;
            }
        }
        CHECK(seen.size() == word_space_size(k));
        // Count of pairs is (4^k + p_k)/2 with p_k palindromic words.
        CHECK(pairs.size() == (word_space_size(k) + palindromes) / 2);
        if (k % 2 == 1) {
            CHECK(palindromes == 0);
        }
    }
}

TEST_CASE("pair counts at the lengths used in practice") {
    CHECK(enumerate_pairs(7).size() == 8192);
    const auto k1 = enumerate_pairs(1);
    REQUIRE(k1.size() == 2);
    CHECK(decode_word(k1[0].w, 1) == "A");
    CHECK(decode_word(k1[0].w_bar, 1) == "T");
    CHECK(decode_word(k1[1].w, 1) == "C");
    CHECK(decode_word(k1[1].w_bar, 1) == "G");

    // k=2 by brute force over all 16 words: 4 palindromes -> 10 pairs.
    const auto k2 = enumerate_pairs(2);
    std::size_t palindromes = 0;
    for (const SymmetricPair& p : k2) {
        palindromes += p.palindromic ? 1 : 0;
    }
    CHECK(palindromes == 4);
    CHECK(k2.size() == 10);

    CHECK_THROWS_AS(enumerate_pairs(0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_pairs(16), std::invalid_argument);
}

TEST_CASE("pairs are sorted by w") {
    const auto pairs = enumerate_pairs(5);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        CHECK(pairs[i - 1].w < pairs[i].w);
    }
}

TEST_CASE("rolling encoder emits every k-mer with its start position") {
    RollingEncoder enc(3);
    std::vector<std::pair<std::uint64_t, word_code_t>> seen;
    enc.reset();
    // Split the feed mid-word to cover the chunk boundary.
    enc.feed("ACG", 10, [&](std::uint64_t p, word_code_t c) { seen.emplace_back(p, c); });
    enc.feed("TAC", 13, [&](std::uint64_t p, word_code_t c) { seen.emplace_back(p, c); });
    REQUIRE(seen.size() == 4);
    CHECK(seen[0] == std::pair<std::uint64_t, word_code_t>{10, encode_word("ACG")});
    CHECK(seen[1] == std::pair<std::uint64_t, word_code_t>{11, encode_word("CGT")});
    CHECK(seen[2] == std::pair<std::uint64_t, word_code_t>{12, encode_word("GTA")});
    CHECK(seen[3] == std::pair<std::uint64_t, word_code_t>{13, encode_word("TAC")});
}
