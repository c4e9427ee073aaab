#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zipfcode/coding.hpp"

using namespace zipfcode;

namespace {

const Alphabet ab = Alphabet::from_utf8("ab");

CodeTable table_of(const std::vector<std::string>& codes, std::string_view alphabet = "ab") {
    std::vector<std::u32string> c;
    for (const auto& s : codes) c.push_back(utf8::decode(s));
    return CodeTable(Alphabet::from_utf8(alphabet), std::move(c));
}

const std::vector<std::string> kTable1 = {"aa", "ab", "a", "b", "ba", "bb"};
const std::vector<std::string> kTable2 = {"aa", "aa", "a", "b", "ba", "bb"};
const std::vector<std::string> kTable3 = {"b", "aba", "abb", "aabaa", "aabab", "aabba"};

}  // namespace

TEST(Alphabet, RejectsTooSmallOrRepeated) {
    EXPECT_THROW(Alphabet::from_utf8("a"), domain_error);
    EXPECT_THROW(Alphabet::from_utf8("aba"), domain_error);
    EXPECT_EQ(Alphabet::from_utf8("αβγ").size(), 3u);
}

TEST(CodeTable, RejectsEmptyAndForeignCodes) {
    EXPECT_THROW(table_of({"a", ""}), domain_error);
    EXPECT_THROW(table_of({"a", "c"}), domain_error);
    EXPECT_THROW(table_of({"a"}).code(2), domain_error);
}

TEST(NonsingularLengthHard, Examples) {
    EXPECT_EQ(nonsingular_length_hard(1, 2), 1u);
    EXPECT_EQ(nonsingular_length_hard(14, 2), 3u);
    EXPECT_EQ(nonsingular_length_hard(15, 2), 4u);
    EXPECT_EQ(nonsingular_length_hard(13, 3), 3u);
    EXPECT_THROW(nonsingular_length_hard(0, 2), domain_error);
    EXPECT_THROW(nonsingular_length_hard(1, 1), domain_error);
}

TEST(NonsingularLengthHard, HugeRanksDoNotOverflow) {
    EXPECT_EQ(nonsingular_length_hard(UINT64_MAX, 2), 64u);
    EXPECT_EQ(nonsingular_length_hard(UINT64_MAX, UINT64_MAX), 1u);
}

TEST(NonsingularLengthHard, MatchesEnumerationOracle) {
    for (std::size_t base : {2u, 3u, 4u, 5u}) {
        const auto strings = oracle::enumerate_strings(10000, base);
        for (std::size_t i = 1; i <= strings.size(); ++i)
            ASSERT_EQ(nonsingular_length_hard(i, base), strings[i - 1].size()) << "i=" << i << " N=" << base;
    }
}

TEST(NonsingularLengthHard, FloatFormAgreesAwayFromHugeRanks) {
    for (std::uint64_t base = 2; base <= 7; ++base)
        for (std::uint64_t i = 1; i <= 20000; ++i)
            ASSERT_EQ(nonsingular_length_hard(i, base), nonsingular_length_hard_float(i, base)) << i << " " << base;
}

TEST(NonsingularLengthHard, ShellCountsMonotonicityAndSoftProximity) {
    for (std::uint64_t base : {2u, 3u, 4u, 5u}) {
        std::map<std::uint64_t, std::uint64_t> shell;
        std::uint64_t prev = 0;
        const std::uint64_t top = 10000;
        for (std::uint64_t i = 1; i <= top; ++i) {
            const auto len = nonsingular_length_hard(i, base);
            ASSERT_GE(len, prev);
            prev = len;
            ++shell[len];
            ASSERT_LE(std::fabs(static_cast<double>(len) - nonsingular_length_soft(i, base)), 2.0);
        }
        for (const auto& [len, count] : shell)
            if (len < prev) EXPECT_EQ(count, static_cast<std::uint64_t>(std::pow(base, len))) << base << " " << len;
    }
}

TEST(NonsingularLengthSoft, Examples) {
    EXPECT_EQ(nonsingular_length_soft(1, 2), 0.0);
    for (std::uint64_t n = 2; n < 40; ++n) EXPECT_NEAR(nonsingular_length_soft(n, n), 1.0, 1e-15);
    EXPECT_EQ(nonsingular_length_soft(8, 2), 3.0);
}

TEST(UdLength, Examples) {
    EXPECT_EQ(ud_length_hard(1.0 / 8, 2), 3u);
    EXPECT_EQ(ud_length_hard(0.3, 2), 2u);
    EXPECT_EQ(ud_length_hard(1.0 / 9, 3), 2u);
    EXPECT_EQ(ud_length_hard(1.0, 2), 1u);
    EXPECT_EQ(ud_length_soft(1.0, 2), 0.0);
    EXPECT_EQ(ud_length_soft(0.25, 2), 2.0);
    EXPECT_NEAR(ud_length_soft(0.1, 10), 1.0, 1e-15);
    for (double p : {0.0, -0.1, 1.5, std::nan("")}) {
        EXPECT_THROW(ud_length_soft(p, 2), domain_error);
        EXPECT_THROW(ud_length_hard(p, 2), domain_error);
    }
}

TEST(UdLength, CeilingBound) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-12, 1.0);
    for (int k = 0; k < 20000; ++k) {
        const double p = u(rng);
        const std::uint64_t base = 2 + rng() % 30;
        if (p == 1.0) continue;
        const double gap = static_cast<double>(ud_length_hard(p, base)) - ud_length_soft(p, base);
        ASSERT_GE(gap, -1e-9) << p << " " << base;
        ASSERT_LT(gap, 1.0) << p << " " << base;
    }
}

TEST(Enumerate, Examples) {
    EXPECT_EQ(enumerate_nonsingular_codes(2, ab), table_of({"a", "b"}));
    EXPECT_EQ(enumerate_nonsingular_codes(6, ab), table_of({"a", "b", "aa", "ab", "ba", "bb"}));
    EXPECT_EQ(enumerate_nonsingular_codes(4, Alphabet::from_utf8("abc")), table_of({"a", "b", "c", "aa"}, "abc"));
    EXPECT_THROW(enumerate_nonsingular_codes(0, ab), domain_error);
}

TEST(Enumerate, MatchesOracleStrings) {
    for (std::size_t base : {2u, 3u, 5u}) {
        const std::string symbols = std::string("abcdefg").substr(0, base);
        const auto strings = oracle::enumerate_strings(3000, base);
        const auto table = enumerate_nonsingular_codes(3000, Alphabet::from_utf8(symbols));
        for (std::size_t i = 0; i < strings.size(); ++i) ASSERT_EQ(utf8::encode(table.codes()[i]), strings[i]);
    }
}

TEST(EliasGamma, Table) {
    for (std::size_t i = 0; i < kTable3.size(); ++i)
        EXPECT_EQ(utf8::encode(elias_gamma_encode(i + 1, ab)), kTable3[i]);
    EXPECT_THROW(elias_gamma_encode(1, Alphabet::from_utf8("abc")), domain_error);
    EXPECT_THROW(elias_gamma_encode(0, ab), domain_error);
}

TEST(EliasGamma, LengthIsTwiceFloorLogPlusOne) {
    for (std::uint64_t i = 1; i < 5000; ++i)
        ASSERT_EQ(elias_gamma_encode(i, ab).size(), 2 * static_cast<std::size_t>(std::floor(std::log2(i))) + 1);
    EXPECT_EQ(elias_gamma_encode(UINT64_MAX, ab).size(), 127u);
}

TEST(EliasGamma, DecodeExamples) {
    EXPECT_EQ(elias_gamma_decode(U"baba", ab), (std::vector<std::uint64_t>{1, 2}));
    EXPECT_EQ(elias_gamma_decode(U"b", ab), (std::vector<std::uint64_t>{1}));
    EXPECT_EQ(elias_gamma_decode(U"abbb", ab), (std::vector<std::uint64_t>{3, 1}));
    EXPECT_TRUE(elias_gamma_decode(U"", ab).empty());
}

TEST(EliasGamma, DecodeRejectsMalformed) {
    EXPECT_THROW(elias_gamma_decode(U"ab", ab), malformed_stream);
    EXPECT_THROW(elias_gamma_decode(U"baa", ab), malformed_stream);
    EXPECT_THROW(elias_gamma_decode(U"bc", ab), malformed_stream);
    try {
        elias_gamma_decode(U"babaab", ab);
        FAIL();
    } catch (const malformed_stream& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(EliasGamma, RandomRoundTrip) {
    std::mt19937_64 rng(3);
    const Alphabet bits = Alphabet::from_utf8("01");
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t k = 1 + rng() % 8;
        std::vector<std::uint64_t> ranks(k);
        std::u32string stream;
        for (auto& r : ranks) {
            r = 1 + rng() % 10000;
            stream += elias_gamma_encode(r, bits);
        }
        ASSERT_EQ(elias_gamma_decode(stream, bits), ranks);
    }
}

TEST(Decodability, Tables) {
    EXPECT_TRUE(is_nonsingular(table_of(kTable1)));
    EXPECT_FALSE(is_nonsingular(table_of(kTable2)));
    EXPECT_TRUE(is_nonsingular(table_of({"a"})));
    EXPECT_FALSE(is_uniquely_decodable(table_of(kTable1)));
    EXPECT_FALSE(is_uniquely_decodable(table_of(kTable2)));
    EXPECT_TRUE(is_uniquely_decodable(table_of(kTable3)));
    EXPECT_TRUE(is_uniquely_decodable(table_of({"a", "ba", "bb"})));
    // Uniquely decodable but not prefix-free.
    EXPECT_TRUE(is_uniquely_decodable(table_of({"a", "ab", "bb"})));
    EXPECT_FALSE(is_uniquely_decodable(table_of({"a", "ab", "ba"})));
}

TEST(Decodability, ResourceLimit) {
    EXPECT_THROW(is_uniquely_decodable(enumerate_nonsingular_codes(200, ab), 10), resource_exhausted);
}

TEST(Kraft, Examples) {
    EXPECT_DOUBLE_EQ(kraft_sum(table_of({"a", "b"})), 1.0);
    EXPECT_DOUBLE_EQ(kraft_sum(table_of(kTable3)), 0.84375);
    EXPECT_DOUBLE_EQ(kraft_sum(table_of(kTable1)), 2.0);
}

TEST(Decodability, SardinasPattersonAgreesWithBruteForce) {
    std::mt19937_64 rng(2024);
    int ud = 0, not_ud = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        std::vector<std::string> codes;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t len = 1 + rng() % 4;
            std::string c;
            for (std::size_t j = 0; j < len; ++j) c.push_back(rng() % 2 ? 'b' : 'a');
            codes.push_back(c);
        }
        const auto table = table_of(codes);
        const bool sp = is_uniquely_decodable(table);
        ASSERT_EQ(sp, !oracle::ambiguous(codes, 24)) << ::testing::PrintToString(codes);
        if (sp) {
            ++ud;
            ASSERT_LE(kraft_sum(table), 1.0 + 1e-12);
        } else {
            ++not_ud;
        }
    }
    EXPECT_GT(ud, 100);
    EXPECT_GT(not_ud, 100);
}

TEST(CodeTableText, WriteIsTwoColumnAndRoundTrips) {
    const auto table = elias_gamma_table(6, ab);
    std::ostringstream out;
    write_code_table(out, table);
    EXPECT_EQ(out.str(), "1\tb\n2\taba\n3\tabb\n4\taabaa\n5\taabab\n6\taabba\n");
    std::istringstream in("# header\n" + out.str());
    EXPECT_EQ(read_code_table(in, ab), table);
    std::istringstream again(out.str());
    EXPECT_EQ(read_code_table(again).alphabet(), Alphabet::from_utf8("ba"));
}

TEST(CodeTableText, UnicodeRoundTrip) {
    const auto table = enumerate_nonsingular_codes(50, Alphabet::from_utf8("αβ文"));
    std::stringstream io;
    write_code_table(io, table);
    EXPECT_EQ(read_code_table(io, table.alphabet()), table);
}

TEST(CodeTableText, ParseErrorsCarryLineNumbers) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_code_table(in, ab);
        } catch (const parse_error& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("1\ta\n2 b\n"), 2u);
    EXPECT_EQ(line_of("1\ta\n3\tb\n"), 2u);
    EXPECT_EQ(line_of("x\ta\n"), 1u);
    EXPECT_EQ(line_of("1\ta\n\n2\t\n"), 3u);
}
