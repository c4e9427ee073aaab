#pragma once

// Miller's random typing: N equiprobable characters plus a space key pressed
// with probability p_s, no empty words. Generator and closed-form theory.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfcode/coding.hpp"
#include "zipfcode/error.hpp"
#include "zipfcode/law_fitting.hpp"
#include "zipfcode/numeric.hpp"

namespace zipfcode {

// Characters used for the N keys, in order.
inline constexpr std::string_view kKeyboard = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
inline constexpr std::string_view kGeneratorId = "mt19937_64";

struct RandomTypingParams {
    std::uint64_t alphabet_size = 26;
    double p_space = 0.18;
    std::uint64_t seed = 0;

    void validate() const {
        require_base(alphabet_size);
        if (alphabet_size > kKeyboard.size())
            throw domain_error("alphabet size above " + std::to_string(kKeyboard.size()) + " is not supported");
        if (!(p_space > 0.0 && p_space < 1.0))
            throw domain_error("space probability must lie in (0, 1), got " + std::to_string(p_space));
    }
};

/// Sequential token stream. Draws are mapped from raw 64-bit engine output, so
/// the stream for a given seed is identical on every platform.
class RandomTyper {
public:
    explicit RandomTyper(const RandomTypingParams& params) : params_(params), engine_(params.seed) {
        params_.validate();
    }

    std::string next() {
        std::string word;
        // Start of stream and the keystroke after a space cannot be a space.
        word.push_back(kKeyboard[uniform_index(params_.alphabet_size)]);
        while (uniform_real() >= params_.p_space) word.push_back(kKeyboard[uniform_index(params_.alphabet_size)]);
        return word;
    }

    const RandomTypingParams& params() const noexcept { return params_; }

private:
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Lemire's multiply-shift with rejection; exact uniform on [0, n).
    std::size_t uniform_index(std::uint64_t n) {
        using wide = unsigned __int128;
        wide m = static_cast<wide>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<wide>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    RandomTypingParams params_;
    std::mt19937_64 engine_;
};

inline std::vector<std::string> generate_tokens(const RandomTypingParams& params, std::uint64_t count) {
    if (count < 1) throw domain_error("token count must be >= 1");
    RandomTyper typer(params);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(typer.next());
    return out;
}

/// p(i) = (p_s / (1 - p_s)) ((1 - p_s) / N)^l(i), l(i) the optimal non-singular length of rank i.
inline double theoretical_rank_probability(const RandomTypingParams& params, std::uint64_t rank) {
    params.validate();
    const double ps = params.p_space;
    const auto len = nonsingular_length_hard(rank, params.alphabet_size);
    return ps / (1.0 - ps) *
           std::pow((1.0 - ps) / static_cast<double>(params.alphabet_size), static_cast<double>(len));
}

/// Total probability of the N^L words of length L: p_s (1 - p_s)^(L - 1).
inline double theoretical_length_probability(const RandomTypingParams& params, std::uint64_t length) {
    params.validate();
    if (length < 1) throw domain_error("word length must be >= 1");
    return params.p_space * std::pow(1.0 - params.p_space, static_cast<double>(length - 1));
}

/// alpha = -log_N((1 - p_s) / N), c = p_s / (1 - p_s).
inline ZipfParams theoretical_zipf_parameters(const RandomTypingParams& params) {
    params.validate();
    const double ps = params.p_space;
    return {-log_base((1.0 - ps) / static_cast<double>(params.alphabet_size), params.alphabet_size),
            ps / (1.0 - ps)};
}

struct AbbreviationParams {
    double a_rt;  // l(i) = a_rt log_N p(i) + b_rt
    double b_rt;
    double a_ud;  // = -a_rt
    double b_ud;  // = b_rt
};

inline AbbreviationParams theoretical_abbreviation_parameters(const RandomTypingParams& params) {
    params.validate();
    const double ps = params.p_space;
    const auto n = params.alphabet_size;
    const double a_rt = 1.0 / (log_base(1.0 - ps, n) - 1.0);
    const double b_rt = a_rt * log_base((1.0 - ps) / ps, n);
    return {a_rt, b_rt, -a_rt, b_rt};
}

// ---------------------------------------------------------------------------
// Shell-aware comparison of an observed corpus with the theory. All words of a
// length are equiprobable, so the order of ranks inside a shell is arbitrary;
// rank i is compared through the common value of its shell:
//     observed mass of words with length l(i) / N^l(i).

struct RankMassCheck {
    std::uint64_t rank;
    std::uint64_t shell;  // word length l(i)
    double theoretical;
    double empirical;
    double std_error;  // binomial standard error of the empirical value
    double z() const { return std_error > 0 ? (empirical - theoretical) / std_error : 0.0; }
};

inline std::vector<RankMassCheck> check_rank_masses(const RandomTypingParams& params,
                                                    std::span<const double> type_lengths,
                                                    std::span<const std::uint64_t> type_counts,
                                                    std::uint64_t top_ranks) {
    params.validate();
    if (type_lengths.size() != type_counts.size()) throw dimension_mismatch("lengths and counts differ in size");
    std::vector<std::uint64_t> mass_by_length;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < type_counts.size(); ++k) {
        const auto len = static_cast<std::size_t>(type_lengths[k]);
        if (len >= mass_by_length.size()) mass_by_length.resize(len + 1, 0);
        mass_by_length[len] += type_counts[k];
        total += type_counts[k];
    }
    if (total == 0) throw empty_input("empty corpus");
    std::vector<RankMassCheck> out;
    for (std::uint64_t i = 1; i <= top_ranks; ++i) {
        const auto len = nonsingular_length_hard(i, params.alphabet_size);
        const double words = std::pow(static_cast<double>(params.alphabet_size), static_cast<double>(len));
        const double shell_p = theoretical_length_probability(params, len);
        const double observed = len < mass_by_length.size() ? static_cast<double>(mass_by_length[len]) : 0.0;
        const double se = std::sqrt(shell_p * (1.0 - shell_p) / static_cast<double>(total)) / words;
        out.push_back({i, len, theoretical_rank_probability(params, i), observed / static_cast<double>(total) / words, se});
    }
    return out;
}

}  // namespace zipfcode
