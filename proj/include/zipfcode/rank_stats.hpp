#pragma once

// Rank distributions and their scalar statistics: mean length, mean log-rank,
// entropy, Kendall tau-b, coding efficiencies and the rank bound p(i) <= 1/i.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "zipfcode/coding.hpp"
#include "zipfcode/csv.hpp"
#include "zipfcode/error.hpp"
#include "zipfcode/numeric.hpp"

namespace zipfcode {

inline constexpr double kNormalizationTolerance = 1e-9;

/// Probabilities p(1) >= p(2) >= ... > 0 summing to 1, optionally with the
/// counts they were estimated from. Immutable after construction.
class RankDistribution {
public:
    /// Rejects unsorted, non-positive or unnormalized input (no silent renormalization).
    static RankDistribution from_probabilities(std::vector<double> probs) {
        validate(probs);
        return RankDistribution(std::move(probs), std::nullopt);
    }

    /// Zero counts are dropped; the rest are sorted descending, ties keep input order.
    static RankDistribution from_counts(std::span<const std::uint64_t> counts) {
        std::vector<std::uint64_t> kept;
        kept.reserve(counts.size());
        for (auto c : counts)
            if (c > 0) kept.push_back(c);
        if (kept.empty()) throw empty_input("all counts are zero");
        std::stable_sort(kept.begin(), kept.end(), std::greater<>{});
        return from_sorted_counts(std::move(kept));
    }

    static RankDistribution from_sorted_counts(std::vector<std::uint64_t> counts) {
        if (counts.empty()) throw empty_input("no counts");
        long double total = 0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] == 0) throw domain_error("counts must be positive");
            if (k > 0 && counts[k] > counts[k - 1])
                throw domain_error("counts must be sorted non-increasingly");
            total += counts[k];
        }
        std::vector<double> probs(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k)
            probs[k] = static_cast<double>(counts[k] / total);
        return RankDistribution(std::move(probs), std::move(counts));
    }

    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probabilities() const noexcept { return probs_; }

    /// p(rank), 1-based.
    double p(std::uint64_t rank) const {
        if (rank < 1 || rank > probs_.size()) throw domain_error("rank outside support");
        return probs_[rank - 1];
    }

    bool has_counts() const noexcept { return counts_.has_value(); }
    std::span<const std::uint64_t> counts() const {
        if (!counts_) throw domain_error("distribution carries no counts");
        return *counts_;
    }
    std::uint64_t total_count() const {
        return std::accumulate(counts().begin(), counts().end(), std::uint64_t{0});
    }

    /// The first `n` ranks, renormalized. Counts (if any) are kept as they are.
    RankDistribution head(std::size_t n) const {
        if (n < 1 || n > size()) throw domain_error("head size outside support");
        if (counts_) return from_sorted_counts({counts_->begin(), counts_->begin() + n});
        compensated_sum s;
        for (std::size_t k = 0; k < n; ++k) s += probs_[k];
        std::vector<double> p(probs_.begin(), probs_.begin() + n);
        for (auto& x : p) x /= s.value();
        return RankDistribution(std::move(p), std::nullopt);
    }

private:
    RankDistribution(std::vector<double> probs, std::optional<std::vector<std::uint64_t>> counts)
        : probs_(std::move(probs)), counts_(std::move(counts)) {}

    static void validate(const std::vector<double>& probs) {
        if (probs.empty()) throw empty_input("empty distribution");
        compensated_sum s;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            if (!(probs[k] > 0.0) || !std::isfinite(probs[k]))
                throw domain_error("p(" + std::to_string(k + 1) + ") must be positive and finite");
            if (k > 0 && probs[k] > probs[k - 1])
                throw domain_error("probabilities must be sorted non-increasingly (rank " +
                                   std::to_string(k + 1) + ")");
            s += probs[k];
        }
        if (std::fabs(s.value() - 1.0) > kNormalizationTolerance)
            throw domain_error("probabilities sum to " + std::to_string(s.value()) + ", not 1");
    }

    std::vector<double> probs_;
    std::optional<std::vector<std::uint64_t>> counts_;
};

/// Magnitudes l(1)..l(n) aligned by rank with a distribution.
class LengthProfile {
public:
    explicit LengthProfile(std::vector<double> lengths) : lengths_(std::move(lengths)) {
        for (std::size_t k = 0; k < lengths_.size(); ++k)
            if (!(lengths_[k] >= 0.0) || !std::isfinite(lengths_[k]))
                throw domain_error("length of rank " + std::to_string(k + 1) +
                                   " must be finite and >= 0");
    }

    std::size_t size() const noexcept { return lengths_.size(); }
    std::span<const double> lengths() const noexcept { return lengths_; }
    double l(std::uint64_t rank) const {
        if (rank < 1 || rank > lengths_.size()) throw domain_error("rank outside profile");
        return lengths_[rank - 1];
    }
    LengthProfile head(std::size_t n) const {
        if (n > size()) throw domain_error("head size outside profile");
        return LengthProfile({lengths_.begin(), lengths_.begin() + n});
    }

private:
    std::vector<double> lengths_;
};

inline void require_aligned(const RankDistribution& dist, const LengthProfile& profile) {
    if (dist.size() != profile.size())
        throw dimension_mismatch("distribution has " + std::to_string(dist.size()) +
                                 " ranks, profile has " + std::to_string(profile.size()));
}

/// <l> = sum_i p(i) l(i)
inline double mean_length(const RankDistribution& dist, const LengthProfile& profile) {
    require_aligned(dist, profile);
    compensated_sum s;
    const auto p = dist.probabilities();
    const auto l = profile.lengths();
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * l[k];
    return s.value();
}

/// <log_N i>, the minimum mean length under (soft) non-singular coding.
inline double mean_log_rank(const RankDistribution& dist, std::uint64_t base) {
    require_base(base);
    compensated_sum s;
    const auto p = dist.probabilities();
    for (std::size_t k = 1; k < p.size(); ++k) s += p[k] * std::log(static_cast<double>(k + 1));
    return s.value() / std::log(static_cast<double>(base));
}

/// Entropy in base-N units, the minimum mean length under (soft) unique decodability.
inline double entropy(const RankDistribution& dist, std::uint64_t base) {
    require_base(base);
    compensated_sum s;
    for (double p : dist.probabilities()) s += -p * std::log(p);
    return s.value() / std::log(static_cast<double>(base));
}

// ---------------------------------------------------------------------------
// Kendall tau-b, O(n log n) (Knight's merge-sort algorithm).

namespace detail {

inline std::uint64_t tied_pairs_in_runs(std::span<const double> sorted) {
    std::uint64_t pairs = 0;
    std::uint64_t run = 1;
    for (std::size_t k = 1; k <= sorted.size(); ++k) {
        if (k < sorted.size() && sorted[k] == sorted[k - 1]) {
            ++run;
        } else {
            pairs += run * (run - 1) / 2;
            run = 1;
        }
    }
    return pairs;
}

// Sorts v ascending and returns the number of strict inversions.
inline std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                                 std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += mid - i;
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

}  // namespace detail

inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw dimension_mismatch("tau needs equal-length sequences");
    const std::size_t n = x.size();
    if (n < 2) throw degenerate_input("tau needs at least 2 observations");
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(x[k]) || !std::isfinite(y[k]))
            throw domain_error("tau input must be finite");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = x[order[k]];
        ys[k] = y[order[k]];
    }
    const std::uint64_t ties_x = detail::tied_pairs_in_runs(xs);
    std::uint64_t ties_xy = 0;
    {
        std::uint64_t run = 1;
        for (std::size_t k = 1; k <= n; ++k) {
            if (k < n && xs[k] == xs[k - 1] && ys[k] == ys[k - 1]) {
                ++run;
            } else {
                ties_xy += run * (run - 1) / 2;
                run = 1;
            }
        }
    }
    std::vector<double> buf(n);
    const std::uint64_t swaps = detail::merge_count(ys, buf, 0, n);
    const std::uint64_t ties_y = detail::tied_pairs_in_runs(ys);

    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (ties_x == pairs || ties_y == pairs)
        throw degenerate_input("tau-b undefined: all values of one variable are tied");
    const auto num = static_cast<long double>(pairs) - ties_x - ties_y + ties_xy -
                     2.0L * static_cast<long double>(swaps);
    const auto den = std::sqrt(static_cast<long double>(pairs - ties_x) *
                               static_cast<long double>(pairs - ties_y));
    return static_cast<double>(std::clamp(num / den, -1.0L, 1.0L));
}

struct AbbreviationTest {
    double tau;
    bool holds;  // tau < 0
};

inline AbbreviationTest law_of_abbreviation_holds(const RankDistribution& dist,
                                                  const LengthProfile& profile) {
    require_aligned(dist, profile);
    const double tau = kendall_tau_b(dist.probabilities(), profile.lengths());
    return {tau, tau < 0.0};
}

// ---------------------------------------------------------------------------
// Coding efficiency

enum class Minimum { Soft, Hard };

/// <l>_min under a scheme. Soft: <log_N i> or H. Hard: mean of the integer optimal lengths.
inline double minimum_mean_length(const RankDistribution& dist, SchemeKind scheme,
                                  std::uint64_t base, Minimum minimum = Minimum::Soft) {
    if (minimum == Minimum::Soft)
        return scheme == SchemeKind::NonSingular ? mean_log_rank(dist, base) : entropy(dist, base);
    compensated_sum s;
    const auto p = dist.probabilities();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const auto len = scheme == SchemeKind::NonSingular ? nonsingular_length_hard(k + 1, base)
                                                           : ud_length_hard(p[k], base);
        s += p[k] * static_cast<double>(len);
    }
    return s.value();
}

inline double coding_efficiency(const RankDistribution& dist, const LengthProfile& profile,
                                SchemeKind scheme, std::uint64_t base,
                                Minimum minimum = Minimum::Soft) {
    const double mean = mean_length(dist, profile);
    if (!(mean > 0.0)) throw degenerate_input("efficiency undefined: mean length is 0");
    return minimum_mean_length(dist, scheme, base, minimum) / mean;
}

struct EfficiencyPair {
    double eta_ns;
    double eta_ud;
    double mean_length;
};

inline EfficiencyPair efficiencies(const RankDistribution& dist, const LengthProfile& profile,
                                   std::uint64_t base, Minimum minimum = Minimum::Soft) {
    const double mean = mean_length(dist, profile);
    if (!(mean > 0.0)) throw degenerate_input("efficiency undefined: mean length is 0");
    return {minimum_mean_length(dist, SchemeKind::NonSingular, base, minimum) / mean,
            minimum_mean_length(dist, SchemeKind::UniquelyDecodable, base, minimum) / mean, mean};
}

/// p(i) <= 1/i for every rank (within the normalization tolerance).
inline bool validate_rank_bound(const RankDistribution& dist) {
    const auto p = dist.probabilities();
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] * static_cast<double>(k + 1) > 1.0 + kNormalizationTolerance) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Rank table CSV: rank,token,count,probability,length (token, count and length optional).

inline std::string format_probability(double p) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", p);
    return std::string(buf, static_cast<std::size_t>(n));
}

inline std::string format_number(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

struct RankTable {
    RankDistribution dist;
    std::optional<std::vector<std::string>> tokens;
    std::optional<LengthProfile> profile;
};

inline void write_rank_table(std::ostream& out, const RankDistribution& dist,
                             const std::vector<std::string>* tokens = nullptr,
                             const LengthProfile* profile = nullptr) {
    if (tokens && tokens->size() != dist.size()) throw dimension_mismatch("token column length");
    if (profile) require_aligned(dist, *profile);
    out << "rank";
    if (tokens) out << ",token";
    if (dist.has_counts()) out << ",count";
    out << ",probability";
    if (profile) out << ",length";
    out << '\n';
    for (std::size_t k = 0; k < dist.size(); ++k) {
        out << (k + 1);
        if (tokens) out << ',' << csv::quote((*tokens)[k]);
        if (dist.has_counts()) out << ',' << dist.counts()[k];
        out << ',' << format_probability(dist.probabilities()[k]);
        if (profile) out << ',' << format_number(profile->lengths()[k]);
        out << '\n';
    }
}

/// Reads a rank table. Lines starting with '#' are skipped. Columns are located
/// by header name; `rank` and either `count` or `probability` are required. When
/// counts are present the distribution is rebuilt from them.
inline RankTable read_rank_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> col;
    std::vector<std::uint64_t> counts;
    std::vector<double> probs;
    std::vector<std::string> tokens;
    std::vector<double> lengths;
    bool have_header = false;

    auto parse_u64 = [&](const std::string& s, const char* what) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw parse_error(std::string("bad ") + what + " '" + s + "'", line_no);
        return v;
    };
    auto parse_double = [&](const std::string& s, const char* what) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw parse_error(std::string("bad ") + what + " '" + s + "'", line_no);
        return v;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = csv::split(line, line_no);
        if (!have_header) {
            for (std::size_t k = 0; k < fields.size(); ++k) col[fields[k]] = k;
            if (!col.contains("rank")) throw parse_error("rank table header needs 'rank'", line_no);
            if (!col.contains("count") && !col.contains("probability"))
                throw parse_error("rank table header needs 'count' or 'probability'", line_no);
            have_header = true;
            continue;
        }
        if (fields.size() != col.size())
            throw parse_error("expected " + std::to_string(col.size()) + " fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        const auto rank = parse_u64(fields[col["rank"]], "rank");
        const std::size_t expected = std::max(counts.size(), probs.size()) + 1;
        if (rank != expected)
            throw parse_error("ranks must be 1..n in order, got " + std::to_string(rank), line_no);
        if (col.contains("count")) counts.push_back(parse_u64(fields[col["count"]], "count"));
        if (col.contains("probability"))
            probs.push_back(parse_double(fields[col["probability"]], "probability"));
        if (col.contains("token")) tokens.push_back(fields[col["token"]]);
        if (col.contains("length")) lengths.push_back(parse_double(fields[col["length"]], "length"));
    }
    if (!have_header) throw empty_input("rank table has no header");
    if (counts.empty() && probs.empty()) throw empty_input("rank table has no rows");

    auto dist = col.contains("count") ? RankDistribution::from_sorted_counts(std::move(counts))
                                      : RankDistribution::from_probabilities(std::move(probs));
    RankTable table{std::move(dist), std::nullopt, std::nullopt};
    if (col.contains("token")) table.tokens = std::move(tokens);
    if (col.contains("length")) table.profile.emplace(std::move(lengths));
    return table;
}

}  // namespace zipfcode
