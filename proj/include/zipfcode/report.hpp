#pragma once

// JSON views of fit results. Field names here are the stable report interface
// documented in the README.

#include <optional>

#include <nlohmann/json.hpp>

#include "zipfcode/law_fitting.hpp"
#include "zipfcode/random_typing.hpp"
#include "zipfcode/rank_stats.hpp"

namespace zipfcode {

namespace detail {
template <class T>
nlohmann::json opt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
}  // namespace detail

inline void to_json(nlohmann::json& j, const ZipfFit& f) {
    j = {{"alpha", f.alpha}, {"alpha_stderr", f.alpha_stderr}, {"c", f.c},       {"beta", f.beta},
         {"support", f.support}, {"log_likelihood", f.log_likelihood}, {"base", f.base}};
}

inline void to_json(nlohmann::json& j, const ExponentialFit& f) {
    j = {{"lambda", f.lam}, {"log_likelihood", f.log_likelihood}, {"support", f.support}};
}

inline void to_json(nlohmann::json& j, const ModelSelection& m) {
    j = {{"verdict", to_string(m.verdict)}, {"delta_aic", m.delta_aic}, {"zipf", m.zipf}, {"exponential", m.exponential}};
}

inline void to_json(nlohmann::json& j, const LinearLawFit& f) {
    j = {{"law", to_string(f.law)},
         {"slope", f.slope},
         {"intercept", f.intercept},
         {"r_squared", f.r_squared},
         {"weighted", f.weighted},
         {"points", f.points},
         {"residual_lag1_autocorr", f.residual_lag1_autocorr}};
}

inline void to_json(nlohmann::json& j, const LawParams& p) { j = {{"slope", p.slope}, {"intercept", p.intercept}}; }

inline void to_json(nlohmann::json& j, const ZipfParams& p) { j = {{"alpha", p.alpha}, {"c", p.c}}; }

inline void to_json(nlohmann::json& j, const SeparationResiduals& r) {
    j = {{"expectation", r.expectation}, {"efficiency", detail::opt(r.efficiency)}};
}

inline void to_json(nlohmann::json& j, const ClassThresholds& t) {
    j = {{"min_r2", t.min_r2}, {"alpha_tolerance", t.alpha_tolerance}, {"min_count", t.min_count}, {"weighted", t.weighted}};
}

inline void to_json(nlohmann::json& j, const ClassMembershipReport& r) {
    j = {{"verdict", r.verdict},
         {"degenerate", r.degenerate},
         {"diagnostics", r.diagnostics},
         {"thresholds", r.thresholds},
         {"base", r.base},
         {"support", r.support},
         {"tau", detail::opt(r.tau)},
         {"tau_ok", r.tau_ok},
         {"size_rank", detail::opt(r.size_rank)},
         {"size_prob", detail::opt(r.size_prob)},
         {"slopes_nonnegative", r.slopes_nonnegative},
         {"r2_ok", r.r2_ok},
         {"implied_alpha", detail::opt(r.implied_alpha)},
         {"implied_c", detail::opt(r.implied_c)},
         {"direct_zipf", detail::opt(r.direct_zipf)},
         {"alpha_discrepancy", detail::opt(r.alpha_discrepancy)},
         {"c_discrepancy", detail::opt(r.c_discrepancy)},
         {"alpha_consistent", detail::opt(r.alpha_consistent)},
         {"size_prob_from_zipf", detail::opt(r.size_prob_from_zipf)},
         {"size_rank_from_zipf", detail::opt(r.size_rank_from_zipf)},
         {"separation_residuals", detail::opt(r.separation)}};
}

inline void to_json(nlohmann::json& j, const EfficiencyPair& e) {
    j = {{"eta_ns", e.eta_ns}, {"eta_ud", e.eta_ud}, {"mean_length", e.mean_length}};
}

inline void to_json(nlohmann::json& j, const RandomTypingParams& p) {
    j = {{"alphabet_size", p.alphabet_size}, {"p_space", p.p_space}, {"seed", p.seed}};
}

}  // namespace zipfcode
