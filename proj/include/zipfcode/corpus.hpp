#pragma once

// Text to (token, count, length) tables.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <ranges>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "zipfcode/csv.hpp"
#include "zipfcode/error.hpp"
#include "zipfcode/rank_stats.hpp"
#include "zipfcode/utf8.hpp"

namespace zipfcode {

enum class Splitter { UnicodeWords, Whitespace };
enum class LengthUnit { Graphemes, CodePoints, Bytes };

inline const char* to_string(Splitter s) noexcept {
    return s == Splitter::UnicodeWords ? "words" : "whitespace";
}

inline const char* to_string(LengthUnit u) noexcept {
    switch (u) {
        case LengthUnit::Graphemes: return "graphemes";
        case LengthUnit::CodePoints: return "codepoints";
        default: return "bytes";
    }
}

struct TokenizerOptions {
    bool lowercase = false;
    Splitter splitter = Splitter::UnicodeWords;
};

namespace detail {

inline std::unique_ptr<icu::BreakIterator> make_break_iterator(bool words) {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(
        words ? icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status)
              : icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !it) throw error(std::string("ICU break iterator: ") + u_errorName(status));
    return it;
}

inline std::string to_utf8(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

}  // namespace detail

/// Pull-based tokenizer over a UTF-8 stream. Input is consumed line by line;
/// both splitters treat line breaks as boundaries, so this loses nothing.
class TokenStream {
public:
    TokenStream(std::istream& in, TokenizerOptions options) : in_(in), options_(options) {
        if (options_.splitter == Splitter::UnicodeWords) words_ = detail::make_break_iterator(true);
    }

    /// Returns false at end of input. Throws encoding_error on invalid UTF-8.
    bool next(std::string& token) {
        while (pending_.empty()) {
            if (!refill()) return false;
        }
        token = std::move(pending_.front());
        pending_.pop_front();
        return true;
    }

private:
    bool refill() {
        std::string line;
        if (!std::getline(in_, line)) return false;
        utf8::validate(line, offset_);
        offset_ += line.size() + (in_.eof() ? 0 : 1);
        const auto text = icu::UnicodeString::fromUTF8(line);
        if (options_.splitter == Splitter::UnicodeWords)
            split_words(text);
        else
            split_whitespace(text);
        return true;
    }

    void emit(const icu::UnicodeString& text, int32_t start, int32_t end) {
        icu::UnicodeString piece(text, start, end - start);
        if (options_.lowercase) piece.toLower(icu::Locale::getRoot());
        pending_.push_back(detail::to_utf8(piece));
    }

    void split_words(const icu::UnicodeString& text) {
        words_->setText(text);
        int32_t start = words_->first();
        for (int32_t end = words_->next(); end != icu::BreakIterator::DONE; start = end, end = words_->next())
            if (words_->getRuleStatus() != UBRK_WORD_NONE) emit(text, start, end);
    }

    void split_whitespace(const icu::UnicodeString& text) {
        int32_t start = -1;
        int32_t k = 0;
        while (k < text.length()) {
            const UChar32 c = text.char32At(k);
            const int32_t width = U16_LENGTH(c);
            if (u_isUWhiteSpace(c)) {
                if (start >= 0) emit(text, start, k);
                start = -1;
            } else if (start < 0) {
                start = k;
            }
            k += width;
        }
        if (start >= 0) emit(text, start, text.length());
    }

    std::istream& in_;
    TokenizerOptions options_;
    std::unique_ptr<icu::BreakIterator> words_;
    std::deque<std::string> pending_;
    std::size_t offset_ = 0;
};

inline std::vector<std::string> tokenize_stream(std::istream& in, TokenizerOptions options = {}) {
    TokenStream stream(in, options);
    std::vector<std::string> out;
    std::string tok;
    while (stream.next(tok)) out.push_back(std::move(tok));
    return out;
}

inline std::vector<std::string> tokenize(std::string_view text, TokenizerOptions options = {}) {
    std::istringstream in{std::string(text)};
    return tokenize_stream(in, options);
}

/// Length of a valid UTF-8 token in the chosen unit.
inline std::uint64_t measure_length(std::string_view token, LengthUnit unit) {
    switch (unit) {
        case LengthUnit::Bytes: return token.size();
        case LengthUnit::CodePoints: return utf8::count_code_points(token);
        default: break;
    }
    thread_local auto chars = detail::make_break_iterator(false);
    const auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(token.data(), static_cast<int32_t>(token.size())));
    chars->setText(text);
    std::uint64_t n = 0;
    chars->first();
    while (chars->next() != icu::BreakIterator::DONE) ++n;
    return n;
}

// ---------------------------------------------------------------------------

struct TokenRow {
    std::string token;
    std::uint64_t count = 0;
    std::uint64_t length = 0;
    friend bool operator==(const TokenRow&, const TokenRow&) = default;
};

/// Rows sorted by count descending, ties by first occurrence.
struct TokenTable {
    std::vector<TokenRow> rows;
    std::uint64_t total_tokens = 0;
    LengthUnit length_unit = LengthUnit::Graphemes;
    friend bool operator==(const TokenTable&, const TokenTable&) = default;
};

/// Exact counter that remembers the global position of each token's first
/// occurrence. Shards built with the right starting positions merge into the
/// same result as a single pass; merge is associative and commutative.
class TokenCounter {
public:
    explicit TokenCounter(std::uint64_t first_position = 0) : position_(first_position) {}

    void add(std::string_view token) {
        auto [it, inserted] = entries_.try_emplace(std::string(token), Entry{0, position_});
        ++it->second.count;
        ++position_;
        ++total_;
    }

    void merge(const TokenCounter& other) {
        for (const auto& [tok, e] : other.entries_) {
            auto [it, inserted] = entries_.try_emplace(tok, e);
            if (!inserted) {
                it->second.count += e.count;
                it->second.first = std::min(it->second.first, e.first);
            }
        }
        total_ += other.total_;
        position_ = std::max(position_, other.position_);
    }

    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return entries_.size(); }

    TokenTable table(LengthUnit unit = LengthUnit::Graphemes) const {
        std::vector<std::pair<const std::string*, Entry>> items;
        items.reserve(entries_.size());
        for (const auto& [tok, e] : entries_) items.emplace_back(&tok, e);
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
            return a.second.count > b.second.count || (a.second.count == b.second.count && a.second.first < b.second.first);
        });
        TokenTable t;
        t.length_unit = unit;
        t.total_tokens = total_;
        t.rows.reserve(items.size());
        for (const auto& [tok, e] : items) t.rows.push_back({*tok, e.count, measure_length(*tok, unit)});
        return t;
    }

private:
    struct Entry {
        std::uint64_t count;
        std::uint64_t first;
    };
    std::unordered_map<std::string, Entry> entries_;
    std::uint64_t position_;
    std::uint64_t total_ = 0;
};

template <std::ranges::input_range R>
TokenTable count_tokens(R&& tokens, LengthUnit unit = LengthUnit::Graphemes) {
    TokenCounter counter;
    for (const auto& tok : tokens) counter.add(tok);
    return counter.table(unit);
}

inline TokenTable count_tokens(TokenStream& stream, LengthUnit unit = LengthUnit::Graphemes) {
    TokenCounter counter;
    std::string tok;
    while (stream.next(tok)) counter.add(tok);
    return counter.table(unit);
}

struct RankData {
    RankDistribution dist;
    LengthProfile profile;
};

inline RankData to_rank_data(const TokenTable& table) {
    if (table.rows.empty()) throw empty_input("empty token table");
    std::vector<std::uint64_t> counts;
    std::vector<double> lengths;
    counts.reserve(table.rows.size());
    lengths.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        counts.push_back(r.count);
        lengths.push_back(static_cast<double>(r.length));
    }
    return {RankDistribution::from_sorted_counts(std::move(counts)), LengthProfile(std::move(lengths))};
}

// ---------------------------------------------------------------------------
// CSV: token,count,length

inline void write_table(std::ostream& out, const TokenTable& table) {
    out << "token,count,length\n";
    for (const auto& r : table.rows) out << csv::quote(r.token) << ',' << r.count << ',' << r.length << '\n';
}

/// Lines starting with '#' are skipped. Rows must be sorted by count descending
/// and every length must match the token measured in `unit`.
inline TokenTable read_table(std::istream& in, LengthUnit unit = LengthUnit::Graphemes) {
    TokenTable table;
    table.length_unit = unit;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    auto parse_u64 = [&](const std::string& s, const char* what) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
            throw parse_error(std::string("bad ") + what + " '" + s + "'", line_no);
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            if (line != "token,count,length") throw parse_error("expected header 'token,count,length'", line_no);
            have_header = true;
            continue;
        }
        const auto fields = csv::split(line, line_no);
        if (fields.size() != 3) throw parse_error("expected 3 fields", line_no);
        try {
            utf8::validate(fields[0]);
        } catch (const encoding_error& e) {
            throw parse_error(e.what(), line_no);
        }
        TokenRow row{fields[0], parse_u64(fields[1], "count"), parse_u64(fields[2], "length")};
        if (row.token.empty()) throw parse_error("empty token", line_no);
        if (row.count == 0) throw parse_error("count must be >= 1", line_no);
        if (row.length != measure_length(row.token, unit))
            throw parse_error("length " + fields[2] + " does not match the token's " + to_string(unit), line_no);
        if (!table.rows.empty() && row.count > table.rows.back().count)
            throw parse_error("rows must be sorted by count descending", line_no);
        if (!seen.insert(row.token).second) throw duplicate_token(row.token, line_no);
        table.total_tokens += row.count;
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_table(const std::filesystem::path& path, const TokenTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path.string() + " for writing");
    write_table(out, table);
}

inline TokenTable read_table(const std::filesystem::path& path, LengthUnit unit = LengthUnit::Graphemes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path.string());
    return read_table(in, unit);
}

}  // namespace zipfcode
