// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to zipfcode executable>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "zipfcode/zipfcode.hpp"

using namespace zipfcode;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kTauTolerance = 1e-12;
constexpr double kSeparationTolerance = 1e-9;
constexpr double kGroupTolerance = 1e-10;
constexpr double kAlphaRelTolerance = 0.05;
constexpr double kSlopeTolerance = 0.05;
constexpr double kInterceptTolerance = 0.1;
constexpr double kMassSigmas = 3.0;
constexpr double kMleSigmas = 3.0;
constexpr double kSelectionRate = 0.95;

constexpr std::uint64_t kTypingSeed = 20240601;
constexpr std::uint64_t kTypingTokens = 1000000;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok: " : "FAILED: ") + what);
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string cli;
fs::path workdir;

int run_shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string without_comments(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

CodeTable table_of(const std::vector<std::string>& codes) {
    std::vector<std::u32string> c;
    for (const auto& s : codes) c.push_back(utf8::decode(s));
    return CodeTable(Alphabet::from_utf8("ab"), std::move(c));
}

// ---------------------------------------------------------------------------

Outcome table_fixtures() {
    Outcome o;
    const fs::path out = workdir / "table3.tsv";
    const int rc = run_shell("'" + cli + "' codes --scheme elias-gamma --upto 6 --alphabet ab -o '" + out.string() + "'");
    o.check(rc == 0, "codes exit status " + std::to_string(rc));
    const std::string body = without_comments(slurp(out));
    o.check(body == "1\tb\n2\taba\n3\tabb\n4\taabaa\n5\taabab\n6\taabba\n", "codes output equals the Elias gamma table");
    const auto t1 = table_of({"aa", "ab", "a", "b", "ba", "bb"});
    const auto t2 = table_of({"aa", "aa", "a", "b", "ba", "bb"});
    const auto t3 = table_of({"b", "aba", "abb", "aabaa", "aabab", "aabba"});
    o.check(is_nonsingular(t1), "table 1 is non-singular");
    o.check(!is_nonsingular(t2), "table 2 is singular");
    o.check(!is_uniquely_decodable(t1), "table 1 is not uniquely decodable");
    o.check(is_uniquely_decodable(t3), "table 3 is uniquely decodable");
    return o;
}

Outcome code_lengths() {
    Outcome o;
    std::size_t mismatches = 0, shell_errors = 0;
    for (std::size_t base : {2u, 3u, 4u, 5u}) {
        const auto strings = oracle::enumerate_strings(10000, base);
        std::map<std::size_t, std::uint64_t> shells;
        for (std::size_t i = 1; i <= strings.size(); ++i) {
            const auto len = nonsingular_length_hard(i, base);
            mismatches += len != strings[i - 1].size();
            ++shells[len];
        }
        // The last shell is cut off by the range; every complete one holds N^L ranks.
        const std::size_t last = shells.rbegin()->first;
        for (const auto& [len, count] : shells)
            if (len < last) shell_errors += count != static_cast<std::uint64_t>(std::pow(base, len));
    }
    o.check(mismatches == 0, std::to_string(mismatches) + " length mismatches over i <= 1e4, N = 2..5");
    o.check(shell_errors == 0, std::to_string(shell_errors) + " shells with a count other than N^L");
    return o;
}

Outcome tau_oracle() {
    Outcome o;
    std::mt19937_64 rng(3);
    double worst = 0;
    int instances = 0, tied = 0;
    while (instances < 500) {
        const std::size_t n = 2 + rng() % 49;
        const int levels = instances % 2 == 0 ? 4 : 1000;
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = static_cast<double>(rng() % levels);
        for (auto& v : y) v = static_cast<double>(rng() % levels);
        double value;
        try {
            value = kendall_tau_b(x, y);
        } catch (const degenerate_input&) {
            continue;
        }
        worst = std::max(worst, std::fabs(value - oracle::tau_b(x, y)));
        tied += levels == 4;
        ++instances;
    }
    o.check(worst <= kTauTolerance, "500 instances (" + std::to_string(tied) + " with ties), max |diff| " + fmt(worst));
    return o;
}

Outcome property_one() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 15);
    for (double alpha : {0.765, 1.0, 1.442}) {
        const std::size_t n = 100000;
        const auto d = zipf_distribution(alpha, n);
        std::vector<double> l(n);
        for (auto& x : l) x = u(rng);
        const LengthProfile profile(l);
        const double beta = -log_base(d.p(1), 2);
        const auto r = check_linear_separation(d, alpha, beta, 2, &profile);
        o.check(r.expectation <= kSeparationTolerance && *r.efficiency <= kSeparationTolerance,
                "alpha " + fmt(alpha) + ": expectation residual " + fmt(r.expectation) + ", efficiency residual " +
                    fmt(*r.efficiency));
    }
    return o;
}

Outcome group_structure() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0.1, 3), c(1e-3, 1), a(0.05, 4), b(0, 5);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const std::uint64_t base = 2 + rng() % 40;
        const ZipfParams z{alpha(rng), c(rng)};
        const LawParams ud{a(rng), b(rng)};
        const auto ns = size_rank_law_from(z, ud, base);
        const auto z2 = zipf_from_laws(ns, ud, base);
        const auto ud2 = size_prob_law_from(z2, ns, base);
        worst = std::max({worst, std::fabs(z2.alpha - z.alpha) / z.alpha, std::fabs(z2.c - z.c) / z.c,
                          std::fabs(ud2.slope - ud.slope) / ud.slope,
                          std::fabs(ud2.intercept - ud.intercept) / (1 + std::fabs(ud.intercept))});
    }
    o.check(worst <= kGroupTolerance, "10^4 round trips, worst relative error " + fmt(worst));

    bool exact = true;
    double alpha_err = 0;
    for (double alpha_0 : {0.6, 1.0, 1.9}) {
        const auto d = zipf_distribution(alpha_0, 3000);
        std::vector<double> l(d.size());
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = 0.7 * -std::log2(d.probabilities()[i]) + 2;
        const auto rep = assess_class_membership(d, LengthProfile(l), 2);
        exact = exact && rep.verdict && *rep.implied_alpha == rep.size_rank->slope / rep.size_prob->slope;
        alpha_err = std::max(alpha_err, std::fabs(*rep.implied_alpha - alpha_0));
    }
    o.check(exact && alpha_err <= 1e-9,
            "constructed members: implied alpha = a_ns / a_ud, max |alpha - alpha_0| " + fmt(alpha_err));
    return o;
}

Outcome random_typing_end_to_end() {
    Outcome o;
    const fs::path meta = workdir / "typing_meta.json";
    const fs::path table = workdir / "typing_table.csv";
    const fs::path report = workdir / "typing_report.json";
    const std::string q = "'" + cli + "'";
    const int rc1 = run_shell(q + " simulate --alphabet-size 26 --p-space 0.18 --tokens " + std::to_string(kTypingTokens) +
                              " --seed " + std::to_string(kTypingSeed) + " --metadata '" + meta.string() + "' | " + q +
                              " analyze - --splitter whitespace --base 26 -o '" + table.string() + "'");
    const int rc2 = run_shell(q + " classify '" + table.string() +
                              "' --base 26 --weighted --min-count 2 --format json -o '" + report.string() + "'");
    o.check(rc1 == 0 && rc2 == 0, "pipeline exit statuses " + std::to_string(rc1) + ", " + std::to_string(rc2));
    if (rc1 != 0 || rc2 != 0) return o;

    const RandomTypingParams params{26, 0.18, kTypingSeed};
    const double alpha = theoretical_zipf_parameters(params).alpha;
    const auto j = nlohmann::json::parse(slurp(report))["report"];
    o.check(j["verdict"].get<bool>(), "verdict (size-rank r2 " + fmt(j["size_rank"]["r_squared"].get<double>()) +
                                          ", size-probability r2 " +
                                          fmt(j["size_prob"]["r_squared"].get<double>()) + ", min_r2 0.95)");
    const double fitted = j["direct_zipf"]["alpha"].get<double>();
    const double implied = j["implied_alpha"].get<double>();
    o.check(std::fabs(fitted - alpha) <= kAlphaRelTolerance * alpha,
            "fitted alpha " + fmt(fitted) + " vs " + fmt(alpha) + " (implied alpha " + fmt(implied) + ")");
    const double slope = j["size_rank"]["slope"].get<double>();
    const double intercept = j["size_rank"]["intercept"].get<double>();
    o.check(std::fabs(slope - 1) <= kSlopeTolerance, "size-rank slope " + fmt(slope));
    o.check(std::fabs(intercept) <= kInterceptTolerance, "size-rank intercept " + fmt(intercept));

    std::ifstream in(table, std::ios::binary);
    const auto rt = read_rank_table(in);
    const auto masses = check_rank_masses(params, rt.profile->lengths(), rt.dist.counts(), 20);
    double worst = 0;
    for (const auto& m : masses) worst = std::max(worst, std::fabs(m.z()));
    o.check(worst <= kMassSigmas, "top 20 shell masses, worst |z| " + fmt(worst));
    return o;
}

// Counts indexed by generating rank, zeros kept.
std::vector<std::uint64_t> multinomial(const std::vector<double>& p, std::uint64_t samples, std::mt19937_64& rng) {
    std::vector<std::uint64_t> counts(p.size(), 0);
    std::uint64_t left = samples;
    double mass = 1.0;
    for (std::size_t i = 0; i < p.size() && left > 0; ++i) {
        const double q = i + 1 == p.size() ? 1.0 : std::clamp(p[i] / mass, 0.0, 1.0);
        counts[i] = std::binomial_distribution<std::uint64_t>(left, q)(rng);
        left -= counts[i];
        mass -= p[i];
    }
    return counts;
}

// What an observer sees: empirical ranks, unseen types dropped.
std::vector<std::uint64_t> multinomial_sorted(const std::vector<double>& p, std::uint64_t samples,
                                              std::mt19937_64& rng) {
    auto counts = multinomial(p, samples, rng);
    std::erase(counts, 0);
    std::sort(counts.begin(), counts.end(), std::greater<>{});
    return counts;
}

std::vector<double> geometric(double lam, std::size_t n) {
    std::vector<double> p(n);
    double z = 0;
    for (std::size_t i = 0; i < n; ++i) z += p[i] = std::exp(-lam * static_cast<double>(i + 1));
    for (auto& x : p) x /= z;
    return p;
}

Outcome model_discrimination() {
    Outcome o;
    std::mt19937_64 rng(7);
    const auto zd = zipf_distribution(1.1, 1000);
    const std::vector<double> pl(zd.probabilities().begin(), zd.probabilities().end());
    const auto ex = geometric(0.3, 1000);
    int pl_ok = 0, ex_ok = 0;
    for (int k = 0; k < 50; ++k) {
        pl_ok += select_model(multinomial_sorted(pl, 1000000, rng), 2).verdict == ModelVerdict::PowerLaw;
        ex_ok += select_model(multinomial_sorted(ex, 1000000, rng), 2).verdict == ModelVerdict::Exponential;
    }
    o.check(pl_ok >= kSelectionRate * 50, "power law (alpha 1.1) recognized in " + std::to_string(pl_ok) + "/50");
    o.check(ex_ok >= kSelectionRate * 50, "geometric (lambda 0.3) recognized in " + std::to_string(ex_ok) + "/50");
    return o;
}

Outcome desk_scale_substitutes() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::vector<std::pair<std::string, RankData>> cases;
    auto add_profiled = [&](std::string name, RankDistribution d) {
        std::vector<double> l(d.size());
        for (auto& x : l) x = 1 + static_cast<double>(rng() % 12);
        cases.emplace_back(std::move(name), RankData{std::move(d), LengthProfile(std::move(l))});
    };
    for (double a : {0.0, 0.765, 1.0, 1.442, 3.0}) add_profiled("zipf " + fmt(a), zipf_distribution(a, 5000));
    for (double lam : {0.01, 0.3, 2.0}) add_profiled("geometric " + fmt(lam), RankDistribution::from_probabilities(geometric(lam, 300)));
    for (auto [n, ps] : std::vector<std::pair<std::uint64_t, double>>{{2, 0.5}, {26, 0.18}, {4, 0.3}})
        cases.emplace_back("typing N=" + std::to_string(n),
                           to_rank_data(count_tokens(generate_tokens({n, ps, rng()}, 200000))));
    int bad = 0;
    for (const auto& [name, data] : cases) {
        const auto eff = efficiencies(data.dist, data.profile, 2);
        if (!(eff.eta_ud >= eff.eta_ns) || !validate_rank_bound(data.dist)) {
            ++bad;
            o.check(false, name + ": eta_ud >= eta_ns and p(i) <= 1/i");
        }
    }
    o.check(bad == 0, "eta_ud >= eta_ns and p(i) <= 1/i on " + std::to_string(cases.size()) + " distributions");

    for (double alpha : {0.765, 1.0, 1.442}) {
        const auto zd = zipf_distribution(alpha, 1000);
        const auto counts = multinomial({zd.probabilities().begin(), zd.probabilities().end()}, 1000000, rng);
        const auto fit = fit_zipf_mle(counts, 2);
        o.check(std::fabs(fit.alpha - alpha) <= kMleSigmas * fit.alpha_stderr,
                "MLE alpha " + fmt(fit.alpha) + " for " + fmt(alpha) + " (" +
                    fmt(std::fabs(fit.alpha - alpha) / fit.alpha_stderr) + " SE)");
    }
    return o;
}

Outcome round_trips() {
    Outcome o;
    std::mt19937_64 rng(9);
    const Alphabet ab = Alphabet::from_utf8("ab");
    int failures = 0;
    for (int k = 0; k < 10000; ++k) {
        std::vector<std::uint64_t> ranks(1 + rng() % 8);
        std::u32string stream;
        for (auto& r : ranks) {
            r = 1 + rng() % 10000;
            stream += elias_gamma_encode(r, ab);
        }
        failures += elias_gamma_decode(stream, ab) != ranks;
    }
    o.check(failures == 0, "Elias gamma: " + std::to_string(failures) + " failures in 10^4 sequences");

    const auto tokens = generate_tokens({5, 0.2, 11}, 50000);
    const auto single = count_tokens(tokens);
    std::stringstream io;
    write_table(io, single);
    o.check(read_table(io) == single, "token table write/read");

    const auto codes = enumerate_nonsingular_codes(500, Alphabet::from_utf8("xyz"));
    std::stringstream cio;
    write_code_table(cio, codes);
    o.check(read_code_table(cio, codes.alphabet()) == codes, "code table write/read");

    const auto data = to_rank_data(single);
    std::vector<std::string> names;
    for (const auto& r : single.rows) names.push_back(r.token);
    std::stringstream rio;
    write_rank_table(rio, data.dist, &names, &data.profile);
    const auto back = read_rank_table(rio);
    o.check(std::equal(back.dist.counts().begin(), back.dist.counts().end(), data.dist.counts().begin()) &&
                back.tokens == names,
            "rank table write/read");

    bool sharded = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> cuts{0, tokens.size()};
        for (std::size_t s = 1 + rng() % 7; s > 0; --s) cuts.push_back(rng() % tokens.size());
        std::sort(cuts.begin(), cuts.end());
        std::vector<TokenCounter> parts;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            TokenCounter c(cuts[k]);
            for (std::size_t j = cuts[k]; j < cuts[k + 1]; ++j) c.add(tokens[j]);
            parts.push_back(std::move(c));
        }
        std::shuffle(parts.begin(), parts.end(), rng);
        TokenCounter merged;
        for (const auto& p : parts) merged.merge(p);
        sharded = sharded && merged.table() == single;
    }
    o.check(sharded, "sharded counting equals single pass (20 random splits)");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <zipfcode executable>\n";
        return 2;
    }
    cli = fs::absolute(argv[1]).string();
    workdir = fs::temp_directory_path() / ("zipfcode_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(workdir);

    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0: no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "table fixtures", 1, table_fixtures},
        {2, "code lengths vs enumeration", 10, code_lengths},
        {3, "tau vs pair counting", 0, tau_oracle},
        {4, "exact linear separation", 5, property_one},
        {5, "group structure", 0, group_structure},
        {6, "random typing end to end", 60, random_typing_end_to_end},
        {7, "model discrimination", 300, model_discrimination},
        {8, "desk-scale substitutes", 0, desk_scale_substitutes},
        {9, "round trips", 0, round_trips},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0) o.check(secs < c.limit_s, "runtime " + fmt(secs) + " s < " + fmt(c.limit_s) + " s");
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ") [" << fmt(secs)
                  << " s]\n";
        for (const auto& n : o.notes) std::cout << "    " << n << '\n';
        std::cout.flush();
    }
    fs::remove_all(workdir);
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
