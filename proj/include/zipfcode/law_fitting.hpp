#pragma once

// Zipf's law, the size-rank law and the size-probability law: fitting, class
// membership and conversions between the three parameter pairs.
//
// Naming convention. The size-rank law regresses length on log-rank,
//     l(i) = a_ns * log_N i + b_ns,
// and the size-probability law regresses length on minus log-probability,
//     l(i) = a_ud * (-log_N p(i)) + b_ud.
// Equating both gives Zipf's law p(i) = c * i^(-alpha) with alpha = a_ns / a_ud
// and c = N^((b_ud - b_ns) / a_ud).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "zipfcode/error.hpp"
#include "zipfcode/numeric.hpp"
#include "zipfcode/rank_stats.hpp"

namespace zipfcode {

inline constexpr std::uint64_t kMaxZipfSupport = 100'000'000;
inline constexpr double kMaxZipfExponent = 20.0;

/// Truncated Zipf distribution p(i) = c i^(-alpha), i = 1..n, c = 1 / sum_i i^(-alpha).
inline RankDistribution zipf_distribution(double alpha, std::uint64_t n) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw domain_error("alpha must be finite and >= 0");
    if (n < 1) throw domain_error("support must be >= 1");
    if (n > kMaxZipfSupport) throw domain_error("support above 1e8 is not supported");
    std::vector<double> p(n);
    compensated_sum z;
    for (std::uint64_t i = 1; i <= n; ++i) {
        p[i - 1] = std::pow(static_cast<double>(i), -alpha);
        z += p[i - 1];
    }
    const double norm = z.value();
    for (auto& x : p) x /= norm;
    return RankDistribution::from_probabilities(std::move(p));
}

// ---------------------------------------------------------------------------
// Maximum likelihood fits over ranks 1..n (counts given in rank order)

struct ZipfFit {
    double alpha = 0;
    double alpha_stderr = 0;
    double c = 1;     // 1 / sum_{i<=n} i^(-alpha)
    double beta = 0;  // -log_N c
    std::size_t support = 0;
    double log_likelihood = 0;
    std::uint64_t base = 2;
};

struct ExponentialFit {
    double lam = 0;  // p(i) proportional to exp(-lam * i)
    double log_likelihood = 0;
    std::size_t support = 0;
};

namespace detail {

inline void require_counts(std::span<const std::uint64_t> counts) {
    if (counts.size() < 2) throw degenerate_input("fit needs at least 2 ranks");
    for (auto c : counts)
        if (c == 0) throw domain_error("fit needs positive counts");
}

// Moments of log i under the truncated power law with exponent alpha.
struct LogRankMoments {
    double log_z;  // log sum_i i^-alpha
    double mean;   // E[log i]
    double var;    // Var[log i]
};

inline LogRankMoments log_rank_moments(std::span<const double> log_ranks, double alpha) {
    compensated_sum z, m1, m2;
    for (double lr : log_ranks) {
        const double w = std::exp(-alpha * lr);
        z += w;
        m1 += w * lr;
        m2 += w * lr * lr;
    }
    const double mean = m1.value() / z.value();
    return {std::log(z.value()), mean, std::max(0.0, m2.value() / z.value() - mean * mean)};
}

struct CountSummary {
    std::vector<double> log_ranks;
    double total = 0;
    double mean_log_rank = 0;
    double mean_rank = 0;
};

inline CountSummary summarize(std::span<const std::uint64_t> counts) {
    CountSummary s;
    s.log_ranks.resize(counts.size());
    compensated_sum total, lr, r;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        s.log_ranks[k] = std::log(static_cast<double>(k + 1));
        const double f = static_cast<double>(counts[k]);
        total += f;
        lr += f * s.log_ranks[k];
        r += f * static_cast<double>(k + 1);
    }
    s.total = total.value();
    s.mean_log_rank = lr.value() / s.total;
    s.mean_rank = r.value() / s.total;
    return s;
}

template <class F>
double solve_decreasing(F f, double lo, double hi, double f_lo, double f_hi) {
    boost::uintmax_t max_iter = 300;
    const auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
    if (max_iter >= 300) throw non_convergence("root search did not converge", hi);
    return 0.5 * (r.first + r.second);
}

}  // namespace detail

/// Derivative of the truncated power-law log-likelihood with respect to alpha.
inline double zipf_score(std::span<const std::uint64_t> counts, double alpha) {
    detail::require_counts(counts);
    const auto s = detail::summarize(counts);
    return s.total * (detail::log_rank_moments(s.log_ranks, alpha).mean - s.mean_log_rank);
}

inline double zipf_log_likelihood(std::span<const std::uint64_t> counts, double alpha) {
    detail::require_counts(counts);
    const auto s = detail::summarize(counts);
    const auto m = detail::log_rank_moments(s.log_ranks, alpha);
    return -alpha * s.total * s.mean_log_rank - s.total * m.log_z;
}

/// Discrete truncated power-law MLE over ranks 1..n. Counts must be in rank order.
///
/// The score is monotone in alpha, so the root is bracketed in [0, 20]. A score
/// of zero at alpha = 0 (flat counts) gives alpha = 0; any other root outside the
/// bracket raises non_convergence carrying the bracket end.
inline ZipfFit fit_zipf_mle(std::span<const std::uint64_t> counts, std::uint64_t base) {
    detail::require_counts(counts);
    require_base(base);
    const auto s = detail::summarize(counts);
    auto score = [&](double a) { return detail::log_rank_moments(s.log_ranks, a).mean - s.mean_log_rank; };

    const double tol = 1e-12 * std::max(1.0, s.mean_log_rank);
    const double at_zero = score(0.0);
    double alpha = 0.0;
    if (at_zero < -tol) {
        throw non_convergence("power-law exponent below 0 (counts increase with rank)", 0.0);
    } else if (at_zero > tol) {
        const double at_max = score(kMaxZipfExponent);
        if (at_max > 0.0)
            throw non_convergence("power-law exponent above the search bracket", kMaxZipfExponent);
        alpha = at_max == 0.0 ? kMaxZipfExponent
                              : detail::solve_decreasing(score, 0.0, kMaxZipfExponent, at_zero, at_max);
    }

    const auto m = detail::log_rank_moments(s.log_ranks, alpha);
    ZipfFit fit;
    fit.alpha = alpha;
    fit.alpha_stderr = m.var > 0 ? 1.0 / std::sqrt(s.total * m.var) : std::numeric_limits<double>::infinity();
    fit.c = std::exp(-m.log_z);
    fit.beta = m.log_z / std::log(static_cast<double>(base));
    fit.support = counts.size();
    fit.log_likelihood = -alpha * s.total * s.mean_log_rank - s.total * m.log_z;
    fit.base = base;
    return fit;
}

namespace detail {

// E[i] under p(i) proportional to exp(-lam * (i - 1)), i = 1..n.
inline double geometric_mean_rank(std::size_t n, double lam) {
    compensated_sum z, m;
    for (std::size_t i = 1; i <= n; ++i) {
        const double w = std::exp(-lam * static_cast<double>(i - 1));
        if (w == 0.0) break;
        z += w;
        m += w * static_cast<double>(i);
    }
    return m.value() / z.value();
}

inline double geometric_log_norm(std::size_t n, double lam) {
    // log of (1 - e^-lam) / (1 - e^-(lam n)), the normalization of exp(-lam (i - 1)).
    if (lam == 0.0) return -std::log(static_cast<double>(n));
    return std::log(-std::expm1(-lam)) - std::log(-std::expm1(-lam * static_cast<double>(n)));
}

}  // namespace detail

inline double exponential_log_likelihood(std::span<const std::uint64_t> counts, double lam) {
    detail::require_counts(counts);
    const auto s = detail::summarize(counts);
    return -lam * s.total * (s.mean_rank - 1.0) + s.total * detail::geometric_log_norm(counts.size(), lam);
}

/// Truncated geometric MLE over ranks 1..n: solves E_lam[i] = observed mean rank,
/// starting from the untruncated inversion lam0 = -log(1 - 1/mean), which bounds the root from above.
inline ExponentialFit fit_exponential_mle(std::span<const std::uint64_t> counts) {
    if (counts.size() < 2) throw degenerate_input("exponential fit needs at least 2 ranks");
    std::uint64_t tail = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) tail += counts[k];
    if (tail == 0) throw degenerate_input("all mass on rank 1: exponential rate is unbounded");
    const auto s = detail::summarize(counts);
    const std::size_t n = counts.size();
    auto score = [&](double lam) { return detail::geometric_mean_rank(n, lam) - s.mean_rank; };

    const double tol = 1e-12 * s.mean_rank;
    const double at_zero = 0.5 * static_cast<double>(n + 1) - s.mean_rank;
    double lam = 0.0;
    if (at_zero < -tol) {
        throw non_convergence("exponential rate below 0 (counts increase with rank)", 0.0);
    } else if (at_zero > tol) {
        const double lam0 = -std::log1p(-1.0 / s.mean_rank);
        const double at_lam0 = score(lam0);
        lam = at_lam0 >= 0.0 ? lam0 : detail::solve_decreasing(score, 0.0, lam0, at_zero, at_lam0);
    }
    ExponentialFit fit;
    fit.lam = lam;
    fit.support = n;
    fit.log_likelihood = -lam * s.total * (s.mean_rank - 1.0) + s.total * detail::geometric_log_norm(n, lam);
    return fit;
}

enum class ModelVerdict { PowerLaw, Exponential, Inconclusive };

inline const char* to_string(ModelVerdict v) noexcept {
    switch (v) {
        case ModelVerdict::PowerLaw: return "power_law";
        case ModelVerdict::Exponential: return "exponential";
        default: return "inconclusive";
    }
}

struct ModelSelection {
    ModelVerdict verdict;
    double delta_aic;  // AIC(exponential) - AIC(power law); positive favours the power law
    ZipfFit zipf;
    ExponentialFit exponential;
};

inline constexpr double kAicInconclusiveBand = 2.0;

inline ModelSelection select_model(std::span<const std::uint64_t> counts, std::uint64_t base) {
    if (counts.size() < 5) throw degenerate_input("model selection needs at least 5 ranks");
    const auto zipf = fit_zipf_mle(counts, base);
    const auto expo = fit_exponential_mle(counts);
    // One free parameter each.
    const double aic_pl = 2.0 - 2.0 * zipf.log_likelihood;
    const double aic_exp = 2.0 - 2.0 * expo.log_likelihood;
    const double delta = aic_exp - aic_pl;
    ModelVerdict v = ModelVerdict::Inconclusive;
    if (delta >= kAicInconclusiveBand)
        v = ModelVerdict::PowerLaw;
    else if (delta <= -kAicInconclusiveBand)
        v = ModelVerdict::Exponential;
    return {v, delta, zipf, expo};
}

// ---------------------------------------------------------------------------
// Linear laws

enum class LinearLaw { SizeRank, SizeProbability, LogLogZipf };

inline const char* to_string(LinearLaw law) noexcept {
    switch (law) {
        case LinearLaw::SizeRank: return "size_rank";
        case LinearLaw::SizeProbability: return "size_probability";
        default: return "log_log_zipf";
    }
}

struct LinearLawFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;  // 0 when the response is constant
    bool weighted = false;
    LinearLaw law = LinearLaw::SizeRank;
    std::size_t points = 0;
    double residual_lag1_autocorr = 0;  // residuals ordered by the regressor
};

namespace detail {

/// Least squares of y on x, with optional weights. x must be sorted for the
/// residual autocorrelation to be meaningful.
inline LinearLawFit least_squares(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> w, LinearLaw law) {
    const std::size_t n = x.size();
    const bool weighted = !w.empty();
    auto weight = [&](std::size_t k) { return weighted ? w[k] : 1.0; };
    compensated_sum sw, sx, sy;
    for (std::size_t k = 0; k < n; ++k) {
        sw += weight(k);
        sx += weight(k) * x[k];
        sy += weight(k) * y[k];
    }
    const double mx = sx.value() / sw.value();
    const double my = sy.value() / sw.value();
    compensated_sum sxx, sxy, syy;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = x[k] - mx, dy = y[k] - my;
        sxx += weight(k) * dx * dx;
        sxy += weight(k) * dx * dy;
        syy += weight(k) * dy * dy;
    }
    const double spread = std::max(std::fabs(mx), 1.0);
    if (!(sxx.value() > 1e-24 * spread * spread * sw.value()))
        throw degenerate_input(std::string(to_string(law)) + " fit: regressor is constant (collinear)");

    LinearLawFit fit;
    fit.law = law;
    fit.weighted = weighted;
    fit.points = n;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy.value() > 0 ? std::clamp(sxy.value() * sxy.value() / (sxx.value() * syy.value()), 0.0, 1.0)
                                    : 0.0;

    compensated_sum num, den;
    double prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        den += r * r;
        if (k > 0) num += r * prev;
        prev = r;
    }
    fit.residual_lag1_autocorr = den.value() > 0 ? num.value() / den.value() : 0.0;
    return fit;
}

inline std::vector<double> log_ranks(std::size_t n, std::uint64_t base) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = log_base(static_cast<double>(k + 1), base);
    return x;
}

inline std::vector<double> neg_log_probs(std::span<const double> p, std::uint64_t base) {
    std::vector<double> x(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) x[k] = -log_base(p[k], base);
    return x;
}

inline LinearLawFit size_rank_fit(std::span<const double> p, std::span<const double> l,
                                  std::uint64_t base, bool weighted) {
    if (l.size() < 3) throw degenerate_input("size-rank fit needs at least 3 ranks");
    const auto x = log_ranks(l.size(), base);
    return least_squares(x, l, weighted ? p : std::span<const double>{}, LinearLaw::SizeRank);
}

inline LinearLawFit size_probability_fit(std::span<const double> p, std::span<const double> l,
                                         std::uint64_t base, bool weighted) {
    if (l.size() < 3) throw degenerate_input("size-probability fit needs at least 3 ranks");
    const auto x = neg_log_probs(p, base);
    return least_squares(x, l, weighted ? p : std::span<const double>{}, LinearLaw::SizeProbability);
}

}  // namespace detail

/// l(i) on log_N i. Slope and intercept are a_ns and b_ns.
inline LinearLawFit fit_size_rank_law(const LengthProfile& profile, const RankDistribution& dist,
                                      std::uint64_t base, bool weighted = false) {
    require_base(base);
    require_aligned(dist, profile);
    return detail::size_rank_fit(dist.probabilities(), profile.lengths(), base, weighted);
}

/// l(i) on -log_N p(i). Slope and intercept are a_ud and b_ud.
inline LinearLawFit fit_size_probability_law(const LengthProfile& profile, const RankDistribution& dist,
                                             std::uint64_t base, bool weighted = false) {
    require_base(base);
    require_aligned(dist, profile);
    return detail::size_probability_fit(dist.probabilities(), profile.lengths(), base, weighted);
}

/// Diagnostic log-log regression of -log_N p(i) on log_N i: slope alpha, intercept beta.
inline LinearLawFit fit_loglog(const RankDistribution& dist, std::uint64_t base) {
    require_base(base);
    if (dist.size() < 2) throw degenerate_input("log-log fit needs at least 2 ranks");
    const auto x = detail::log_ranks(dist.size(), base);
    const auto y = detail::neg_log_probs(dist.probabilities(), base);
    return detail::least_squares(x, y, {}, LinearLaw::LogLogZipf);
}

// ---------------------------------------------------------------------------
// Group-like structure: any two laws determine the third.

struct ZipfParams {
    double alpha;
    double c;
};

struct LawParams {
    double slope;
    double intercept;
};

struct GroupParams {
    double alpha, c;    // Zipf
    double a_ns, b_ns;  // size-rank
    double a_ud, b_ud;  // size-probability
    std::uint64_t base;
};

/// Size-rank and size-probability laws give Zipf: alpha = a_ns / a_ud, c = N^((b_ud - b_ns) / a_ud).
inline ZipfParams zipf_from_laws(LawParams size_rank, LawParams size_prob, std::uint64_t base) {
    require_base(base);
    if (size_prob.slope == 0.0) throw degenerate_input("a_ud = 0: Zipf parameters undefined");
    return {size_rank.slope / size_prob.slope,
            std::pow(static_cast<double>(base), (size_prob.intercept - size_rank.intercept) / size_prob.slope)};
}

/// Zipf and the size-rank law give the size-probability law:
/// a_ud = a_ns / alpha, b_ud = b_ns + a_ns log_N c / alpha.
inline LawParams size_prob_law_from(ZipfParams zipf, LawParams size_rank, std::uint64_t base) {
    require_base(base);
    if (zipf.alpha == 0.0) throw degenerate_input("alpha = 0: size-probability law undefined");
    return {size_rank.slope / zipf.alpha,
            size_rank.intercept + size_rank.slope * log_base(zipf.c, base) / zipf.alpha};
}

/// Zipf and the size-probability law give the size-rank law:
/// a_ns = alpha a_ud, b_ns = b_ud - a_ud log_N c.
inline LawParams size_rank_law_from(ZipfParams zipf, LawParams size_prob, std::uint64_t base) {
    require_base(base);
    return {zipf.alpha * size_prob.slope, size_prob.intercept - size_prob.slope * log_base(zipf.c, base)};
}

// ---------------------------------------------------------------------------
// Linear separation of optima: H = alpha <log_N i> + beta and
// eta_ud = alpha eta_ns + beta / <l>. Both are exact under an exact Zipf law.

struct SeparationResiduals {
    double expectation;
    std::optional<double> efficiency;
};

inline SeparationResiduals check_linear_separation(const RankDistribution& dist, double alpha, double beta,
                                                   std::uint64_t base,
                                                   const LengthProfile* profile = nullptr) {
    const double h = entropy(dist, base);
    const double mlr = mean_log_rank(dist, base);
    SeparationResiduals out{std::fabs(h - (alpha * mlr + beta)), std::nullopt};
    if (profile) {
        const auto eff = efficiencies(dist, *profile, base);
        out.efficiency = std::fabs(eff.eta_ud - (alpha * eff.eta_ns + beta / eff.mean_length));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Class membership

struct ClassThresholds {
    double min_r2 = 0.95;
    double alpha_tolerance = 0.05;  // relative; reported, not part of the verdict
    std::uint64_t min_count = 1;    // ranks with fewer occurrences are left out of every fit
    bool weighted = false;
};

struct ClassMembershipReport {
    ClassThresholds thresholds;
    std::uint64_t base = 2;
    std::size_t support = 0;  // ranks used after the min_count cut

    std::optional<double> tau;
    bool tau_ok = false;  // tau <= 0
    std::optional<LinearLawFit> size_rank;
    std::optional<LinearLawFit> size_prob;
    bool slopes_nonnegative = false;
    bool r2_ok = false;
    std::optional<double> implied_alpha;
    std::optional<double> implied_c;

    std::optional<ZipfFit> direct_zipf;
    std::optional<double> alpha_discrepancy;  // |implied - direct| / direct
    std::optional<double> c_discrepancy;
    std::optional<bool> alpha_consistent;
    std::optional<LawParams> size_prob_from_zipf;  // from direct Zipf + fitted size-rank law
    std::optional<LawParams> size_rank_from_zipf;  // from direct Zipf + fitted size-probability law
    std::optional<SeparationResiduals> separation;

    bool degenerate = false;
    std::vector<std::string> diagnostics;
    bool verdict = false;
};

inline constexpr double kStructuredResidualAutocorr = 0.5;

/// Tests whether a system looks like a member of the quasi-optimal coding class:
/// tau(p, l) <= 0, both linear laws hold with r^2 >= min_r2 and non-negative slopes.
/// Degenerate inputs (e.g. uniform distributions) produce verdict false with a diagnostic.
inline ClassMembershipReport assess_class_membership(const RankDistribution& dist, const LengthProfile& profile,
                                                     std::uint64_t base, ClassThresholds thresholds = {}) {
    require_base(base);
    require_aligned(dist, profile);
    ClassMembershipReport rep;
    rep.thresholds = thresholds;
    rep.base = base;

    std::size_t n = dist.size();
    if (dist.has_counts() && thresholds.min_count > 1) {
        const auto counts = dist.counts();
        n = static_cast<std::size_t>(std::partition_point(counts.begin(), counts.end(),
                                                          [&](auto c) { return c >= thresholds.min_count; }) -
                                     counts.begin());
    }
    rep.support = n;
    if (n < 5) {
        rep.degenerate = true;
        rep.diagnostics.push_back("fewer than 5 ranks available (" + std::to_string(n) + ")");
        return rep;
    }
    const auto p = dist.probabilities().first(n);
    const auto l = profile.lengths().first(n);

    try {
        rep.tau = kendall_tau_b(p, l);
        rep.tau_ok = *rep.tau <= 0.0;
        if (!rep.tau_ok) rep.diagnostics.push_back("tau(p, l) > 0: lengths grow with probability");
    } catch (const degenerate_input& e) {
        rep.degenerate = true;
        rep.diagnostics.push_back(std::string("tau: ") + e.what());
    }
    try {
        rep.size_rank = detail::size_rank_fit(p, l, base, thresholds.weighted);
    } catch (const degenerate_input& e) {
        rep.degenerate = true;
        rep.diagnostics.push_back(e.what());
    }
    try {
        rep.size_prob = detail::size_probability_fit(p, l, base, thresholds.weighted);
    } catch (const degenerate_input& e) {
        rep.degenerate = true;
        rep.diagnostics.push_back(e.what());
    }

    if (rep.size_rank && rep.size_prob) {
        rep.slopes_nonnegative = rep.size_rank->slope >= 0.0 && rep.size_prob->slope >= 0.0;
        if (!rep.slopes_nonnegative) rep.diagnostics.push_back("negative slope in a linear law");
        rep.r2_ok = rep.size_rank->r_squared >= thresholds.min_r2 && rep.size_prob->r_squared >= thresholds.min_r2;
        if (!rep.r2_ok) rep.diagnostics.push_back("r^2 below threshold in a linear law");
        for (const auto* f : {&*rep.size_rank, &*rep.size_prob})
            if (std::fabs(f->residual_lag1_autocorr) > kStructuredResidualAutocorr)
                rep.diagnostics.push_back(std::string(to_string(f->law)) +
                                          " residuals are strongly structured (lag-1 autocorrelation " +
                                          format_number(f->residual_lag1_autocorr) + ")");
        if (rep.size_prob->slope > 0.0) {
            const auto z = zipf_from_laws({rep.size_rank->slope, rep.size_rank->intercept},
                                          {rep.size_prob->slope, rep.size_prob->intercept}, base);
            rep.implied_alpha = z.alpha;
            rep.implied_c = z.c;
        }
    }

    if (dist.has_counts()) {
        const auto counts = dist.counts().first(n);
        try {
            rep.direct_zipf = fit_zipf_mle(counts, base);
        } catch (const non_convergence& e) {
            rep.diagnostics.push_back(std::string("direct Zipf fit: ") + e.what());
        }
    }
    if (rep.direct_zipf) {
        const auto& z = *rep.direct_zipf;
        if (rep.implied_alpha && z.alpha > 0.0) {
            rep.alpha_discrepancy = std::fabs(*rep.implied_alpha - z.alpha) / z.alpha;
            rep.alpha_consistent = *rep.alpha_discrepancy <= thresholds.alpha_tolerance;
            rep.c_discrepancy = std::fabs(*rep.implied_c - z.c) / z.c;
        }
        if (rep.size_rank && z.alpha > 0.0)
            rep.size_prob_from_zipf =
                size_prob_law_from({z.alpha, z.c}, {rep.size_rank->slope, rep.size_rank->intercept}, base);
        if (rep.size_prob)
            rep.size_rank_from_zipf =
                size_rank_law_from({z.alpha, z.c}, {rep.size_prob->slope, rep.size_prob->intercept}, base);
        const auto head = dist.head(n);
        const auto head_profile = profile.head(n);
        try {
            rep.separation = check_linear_separation(head, z.alpha, z.beta, base, &head_profile);
        } catch (const degenerate_input&) {
            rep.separation = check_linear_separation(head, z.alpha, z.beta, base);
        }
    }

    rep.verdict = !rep.degenerate && rep.tau_ok && rep.slopes_nonnegative && rep.r2_ok;
    return rep;
}

}  // namespace zipfcode
