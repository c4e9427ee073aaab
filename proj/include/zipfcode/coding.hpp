#pragma once

// Optimal code lengths under the non-singular and uniquely decodable schemes,
// code enumeration, Elias gamma coding and decodability checks.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "zipfcode/error.hpp"
#include "zipfcode/numeric.hpp"
#include "zipfcode/utf8.hpp"

namespace zipfcode {

enum class SchemeKind { NonSingular, UniquelyDecodable };

inline const char* to_string(SchemeKind s) noexcept {
    return s == SchemeKind::NonSingular ? "non_singular" : "uniquely_decodable";
}

// Ordered set of distinct symbols. Symbol order defines lexicographic order of codes.
class Alphabet {
public:
    explicit Alphabet(std::u32string symbols) : symbols_(std::move(symbols)) {
        if (symbols_.size() < 2)
            throw domain_error("alphabet needs at least 2 symbols, got " +
                               std::to_string(symbols_.size()));
        std::u32string sorted = symbols_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw domain_error("alphabet symbols must be pairwise distinct");
    }

    static Alphabet from_utf8(std::string_view symbols) { return Alphabet(utf8::decode(symbols)); }

    std::size_t size() const noexcept { return symbols_.size(); }
    char32_t operator[](std::size_t k) const { return symbols_.at(k); }
    const std::u32string& symbols() const noexcept { return symbols_; }
    std::string to_utf8() const { return utf8::encode(symbols_); }

    std::optional<std::size_t> index_of(char32_t c) const noexcept {
        const auto pos = symbols_.find(c);
        if (pos == std::u32string::npos) return std::nullopt;
        return pos;
    }

    bool spells(std::u32string_view code) const noexcept {
        return std::all_of(code.begin(), code.end(),
                           [&](char32_t c) { return symbols_.find(c) != std::u32string::npos; });
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::u32string symbols_;
};

// Codes indexed by unit rank; codes()[i - 1] is the code of rank i, so ranks are 1..n by construction.
class CodeTable {
public:
    CodeTable(Alphabet alphabet, std::vector<std::u32string> codes)
        : alphabet_(std::move(alphabet)), codes_(std::move(codes)) {
        for (std::size_t k = 0; k < codes_.size(); ++k) {
            if (codes_[k].empty())
                throw domain_error("code for rank " + std::to_string(k + 1) + " is empty");
            if (!alphabet_.spells(codes_[k]))
                throw domain_error("code for rank " + std::to_string(k + 1) +
                                   " uses a symbol outside the alphabet");
        }
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return codes_.size(); }
    bool empty() const noexcept { return codes_.empty(); }
    const std::vector<std::u32string>& codes() const noexcept { return codes_; }

    const std::u32string& code(std::uint64_t rank) const {
        if (rank < 1 || rank > codes_.size())
            throw domain_error("rank " + std::to_string(rank) + " outside table");
        return codes_[rank - 1];
    }

    std::vector<double> lengths() const {
        std::vector<double> out;
        out.reserve(codes_.size());
        for (const auto& c : codes_) out.push_back(static_cast<double>(c.size()));
        return out;
    }

    friend bool operator==(const CodeTable&, const CodeTable&) = default;

private:
    Alphabet alphabet_;
    std::vector<std::u32string> codes_;
};

// ---------------------------------------------------------------------------
// Code lengths

/// Length of the i-th shortest non-empty string over N symbols: the smallest L
/// with N + N^2 + ... + N^L >= i. Integer arithmetic, exact for every 64-bit rank.
inline std::uint64_t nonsingular_length_hard(std::uint64_t rank, std::uint64_t base) {
    if (rank < 1) throw domain_error("rank must be >= 1");
    require_base(base);
    using wide = unsigned __int128;
    wide shell = base;
    wide covered = base;
    std::uint64_t length = 1;
    while (covered < rank) {
        shell *= base;
        covered += shell;
        ++length;
    }
    return length;
}

// Floating-point form ceil(log_N((N-1)i/N + 1)), kept as a cross-check of the integer form.
// At exact powers the logarithm can land one ulp above an integer, so values within
// 1e-12 (relative) of an integer are taken as that integer. Reliable for ranks below ~1e11.
inline std::uint64_t nonsingular_length_hard_float(std::uint64_t rank, std::uint64_t base) {
    if (rank < 1) throw domain_error("rank must be >= 1");
    require_base(base);
    const double n = static_cast<double>(base);
    const double x = (n - 1.0) / n * static_cast<double>(rank) + 1.0;
    const double v = log_base(x, base);
    return static_cast<std::uint64_t>(std::ceil(v - 1e-12 * v));
}

inline double nonsingular_length_soft(std::uint64_t rank, std::uint64_t base) {
    if (rank < 1) throw domain_error("rank must be >= 1");
    require_base(base);
    return log_base(static_cast<double>(rank), base);
}

inline void require_probability(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw domain_error("probability must lie in (0, 1], got " + std::to_string(p));
}

inline double ud_length_soft(double p, std::uint64_t base) {
    require_probability(p);
    require_base(base);
    return p == 1.0 ? 0.0 : -log_base(p, base);
}

/// ceil(-log_N p), clamped to 1 because an empty code carries no information.
/// Values within 1e-12 (relative) above an integer are treated as that integer,
/// so exact powers such as p = 1/9, N = 3 are not pushed up by rounding.
inline std::uint64_t ud_length_hard(double p, std::uint64_t base) {
    const double x = ud_length_soft(p, base);
    const double len = std::ceil(x - 1e-12 * std::max(1.0, x));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(len));
}

// ---------------------------------------------------------------------------
// Constructions

/// First n non-empty strings in length-then-lexicographic order. Entry i has
/// length nonsingular_length_hard(i, N).
inline CodeTable enumerate_nonsingular_codes(std::uint64_t count, const Alphabet& alphabet) {
    if (count < 1) throw domain_error("code count must be >= 1");
    const std::size_t n = alphabet.size();
    std::vector<std::u32string> codes;
    codes.reserve(count);
    std::vector<std::size_t> digits{0};
    while (codes.size() < count) {
        std::u32string code;
        code.reserve(digits.size());
        for (std::size_t d : digits) code.push_back(alphabet[d]);
        codes.push_back(std::move(code));

        // Odometer increment; overflow of the leading digit starts the next length.
        std::size_t pos = digits.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < n) break;
            digits[pos] = 0;
            if (pos == 0) digits.insert(digits.begin(), 0);
        }
    }
    return CodeTable(alphabet, std::move(codes));
}

inline void require_binary(const Alphabet& alphabet) {
    if (alphabet.size() != 2)
        throw domain_error("Elias gamma needs a binary alphabet, got " +
                           std::to_string(alphabet.size()) + " symbols");
}

/// floor(log2 i) copies of alphabet[0] followed by i in binary (alphabet[0] = 0, alphabet[1] = 1).
inline std::u32string elias_gamma_encode(std::uint64_t rank, const Alphabet& alphabet) {
    if (rank < 1) throw domain_error("Elias gamma encodes ranks >= 1");
    require_binary(alphabet);
    const int width = std::bit_width(rank);
    std::u32string out(static_cast<std::size_t>(width - 1), alphabet[0]);
    for (int b = width - 1; b >= 0; --b) out.push_back(alphabet[(rank >> b) & 1u]);
    return out;
}

inline std::vector<std::uint64_t> elias_gamma_decode(std::u32string_view stream,
                                                     const Alphabet& alphabet) {
    require_binary(alphabet);
    std::vector<std::uint64_t> ranks;
    std::size_t pos = 0;
    auto bit_at = [&](std::size_t k) -> unsigned {
        const auto idx = alphabet.index_of(stream[k]);
        if (!idx) throw malformed_stream("symbol outside the alphabet", k);
        return static_cast<unsigned>(*idx);
    };
    while (pos < stream.size()) {
        const std::size_t start = pos;
        std::size_t zeros = 0;
        while (pos < stream.size() && bit_at(pos) == 0) {
            ++zeros;
            ++pos;
        }
        if (zeros >= 64) throw malformed_stream("codeword exceeds 64-bit range", start);
        if (pos + zeros + 1 > stream.size()) throw malformed_stream("truncated codeword", start);
        std::uint64_t value = 0;
        for (std::size_t k = 0; k <= zeros; ++k) value = (value << 1) | bit_at(pos++);
        ranks.push_back(value);
    }
    return ranks;
}

inline CodeTable elias_gamma_table(std::uint64_t count, const Alphabet& alphabet) {
    if (count < 1) throw domain_error("code count must be >= 1");
    std::vector<std::u32string> codes;
    codes.reserve(count);
    for (std::uint64_t i = 1; i <= count; ++i) codes.push_back(elias_gamma_encode(i, alphabet));
    return CodeTable(alphabet, std::move(codes));
}

// ---------------------------------------------------------------------------
// Decodability

inline bool is_nonsingular(const CodeTable& table) {
    std::unordered_set<std::u32string> seen;
    for (const auto& c : table.codes())
        if (!seen.insert(c).second) return false;
    return true;
}

inline constexpr std::size_t kMaxDanglingSuffixes = 10000;

/// Sardinas-Patterson test. Dangling suffixes are explored breadth-first with a
/// visited set; the code is uniquely decodable iff no dangling suffix is a codeword.
inline bool is_uniquely_decodable(const CodeTable& table,
                                  std::size_t max_suffixes = kMaxDanglingSuffixes) {
    if (!is_nonsingular(table)) return false;
    const auto& codes = table.codes();
    const std::unordered_set<std::u32string> codeset(codes.begin(), codes.end());

    std::unordered_set<std::u32string> visited;
    std::deque<std::u32string> frontier;
    auto push = [&](std::u32string suffix) {
        if (visited.insert(suffix).second) {
            if (visited.size() > max_suffixes)
                throw resource_exhausted("Sardinas-Patterson exceeded " +
                                         std::to_string(max_suffixes) + " dangling suffixes");
            frontier.push_back(std::move(suffix));
        }
    };
    auto proper_prefix = [](std::u32string_view a, std::u32string_view b) {
        return a.size() < b.size() && b.substr(0, a.size()) == a;
    };

    for (const auto& a : codes)
        for (const auto& b : codes)
            if (proper_prefix(a, b)) push(b.substr(a.size()));

    while (!frontier.empty()) {
        const std::u32string x = std::move(frontier.front());
        frontier.pop_front();
        if (codeset.contains(x)) return false;
        for (const auto& c : codes) {
            if (proper_prefix(c, x))
                push(x.substr(c.size()));
            else if (proper_prefix(x, c))
                push(c.substr(x.size()));
        }
    }
    return true;
}

inline double kraft_sum(const CodeTable& table) {
    const double n = static_cast<double>(table.alphabet().size());
    compensated_sum s;
    for (const auto& c : table.codes()) s += std::pow(n, -static_cast<double>(c.size()));
    return s.value();
}

// ---------------------------------------------------------------------------
// Two-column text format: "<rank>\t<code>\n", UTF-8. Lines starting with '#' are comments.

inline void write_code_table(std::ostream& out, const CodeTable& table) {
    for (std::size_t k = 0; k < table.size(); ++k)
        out << (k + 1) << '\t' << utf8::encode(table.codes()[k]) << '\n';
}

/// Reads the two-column format. Without an explicit alphabet, symbols are taken
/// in order of first appearance.
inline CodeTable read_code_table(std::istream& in, std::optional<Alphabet> alphabet = std::nullopt) {
    std::vector<std::u32string> codes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw parse_error("expected '<rank>\\t<code>'", line_no);
        const std::string rank_text = line.substr(0, tab);
        std::uint64_t rank = 0;
        try {
            std::size_t used = 0;
            rank = std::stoull(rank_text, &used);
            if (used != rank_text.size()) throw std::invalid_argument(rank_text);
        } catch (const std::exception&) {
            throw parse_error("bad rank '" + rank_text + "'", line_no);
        }
        if (rank != codes.size() + 1)
            throw parse_error("ranks must be 1..n without gaps, got " + rank_text, line_no);
        try {
            codes.push_back(utf8::decode(std::string_view(line).substr(tab + 1)));
        } catch (const encoding_error& e) {
            throw parse_error(e.what(), line_no);
        }
        if (codes.back().empty()) throw parse_error("empty code", line_no);
    }
    if (!alphabet) {
        std::u32string symbols;
        for (const auto& c : codes)
            for (char32_t s : c)
                if (symbols.find(s) == std::u32string::npos) symbols.push_back(s);
        alphabet.emplace(std::move(symbols));
    }
    return CodeTable(std::move(*alphabet), std::move(codes));
}

}  // namespace zipfcode
