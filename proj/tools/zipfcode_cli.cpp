#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zipfcode/report.hpp"
#include "zipfcode/zipfcode.hpp"

namespace {

using nlohmann::json;
using namespace zipfcode;

enum ExitCode : int { kOk = 0, kUsage = 2, kEmpty = 3, kDegenerate = 4 };

struct Global {
    std::string output;
    std::string format = "csv";
    std::string base;  // integer, "auto" or empty
    std::string command_line;
};

struct AnalyzeArgs {
    std::string input;
    bool lowercase = false;
    std::string splitter = "words";
    std::string length_unit = "graphemes";
    std::string minimum = "soft";
    std::string plot_data;
};

struct FitArgs {
    std::string input;
    std::string model = "both";
};

struct ClassifyArgs {
    std::string input;
    ClassThresholds thresholds;
};

struct SimulateArgs {
    RandomTypingParams params;
    std::uint64_t tokens = 1000;
    std::string metadata;
};

struct CodesArgs {
    std::string scheme = "elias-gamma";
    std::uint64_t upto = 0;
    std::string alphabet = "01";
};

std::string shell_quote(const std::string& arg) {
    if (!arg.empty() && arg.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_./=:,+") ==
                            std::string::npos)
        return arg;
    std::string out = "'";
    for (char c : arg) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::string join_command(int argc, char** argv) {
    std::string out = "zipfcode";
    for (int k = 1; k < argc; ++k) out += ' ' + shell_quote(argv[k]);
    return out;
}

json metadata(const Global& g, const std::string& command) {
    return {{"tool", "zipfcode"}, {"version", kVersion}, {"command", command}, {"invocation", g.command_line}};
}

void write_metadata_lines(std::ostream& out, const json& meta) {
    for (const auto& [key, value] : meta.items())
        out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

void emit(const Global& g, const std::string& text) {
    if (g.output.empty() || g.output == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw error("failed writing to standard output");
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) throw error("cannot open " + g.output + " for writing");
    out << text;
    if (!out) throw error("failed writing " + g.output);
}

std::string read_input(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    buf << in.rdbuf();
    if (in.bad()) throw error("failed reading " + path);
    return buf.str();
}

std::optional<std::uint64_t> parse_base(const std::string& text) {
    if (text.empty() || text == "auto") return std::nullopt;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) throw domain_error("--base must be an integer or 'auto'");
    require_base(v);
    return v;
}

// Observed alphabet size: the number of distinct code points over all tokens.
std::uint64_t observed_alphabet_size(const std::vector<std::string>& tokens) {
    std::set<char32_t> symbols;
    for (const auto& t : tokens)
        for (char32_t c : utf8::decode(t)) symbols.insert(c);
    if (symbols.size() < 2) throw degenerate_input("fewer than 2 distinct symbols; cannot infer --base");
    return symbols.size();
}

std::uint64_t resolve_base(const Global& g, const std::vector<std::string>* tokens) {
    if (g.base.empty()) throw domain_error("--base N is required (or --base auto)");
    if (auto n = parse_base(g.base)) return *n;
    if (!tokens) throw domain_error("--base auto needs a token column");
    return observed_alphabet_size(*tokens);
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.is_null() ? "" : j.is_number_float() ? format_number(j.get<double>()) : j.dump());
    }
}

// Reports: JSON as is, or a two-column field,value CSV with dotted keys.
std::string render_report(const Global& g, const json& report) {
    if (g.format == "json") return report.dump(2) + "\n";
    std::ostringstream out;
    write_metadata_lines(out, report.at("metadata"));
    out << "field,value\n";
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [k, v] : report.items())
        if (k != "metadata") flatten(v, k, rows);
    for (const auto& [k, v] : rows) out << csv::quote(k) << ',' << csv::quote(v) << '\n';
    return out.str();
}

template <class F>
json or_null(F&& f) {
    try {
        return json(f());
    } catch (const degenerate_input&) {
        return nullptr;
    }
}

// ---------------------------------------------------------------------------

int run_analyze(const Global& g, const AnalyzeArgs& a) {
    TokenizerOptions opts;
    opts.lowercase = a.lowercase;
    opts.splitter = a.splitter == "whitespace" ? Splitter::Whitespace : Splitter::UnicodeWords;
    const LengthUnit unit = a.length_unit == "bytes"        ? LengthUnit::Bytes
                            : a.length_unit == "codepoints" ? LengthUnit::CodePoints
                                                            : LengthUnit::Graphemes;
    const Minimum minimum = a.minimum == "hard" ? Minimum::Hard : Minimum::Soft;
    if (g.base.empty()) throw domain_error("--base N is required (or --base auto)");

    const std::string text = read_input(a.input);
    std::istringstream in(text);
    TokenStream stream(in, opts);
    const TokenTable table = count_tokens(stream, unit);
    if (table.rows.empty()) throw empty_input("no tokens in " + a.input);

    std::vector<std::string> tokens;
    tokens.reserve(table.rows.size());
    for (const auto& r : table.rows) tokens.push_back(r.token);
    const std::uint64_t base = resolve_base(g, &tokens);
    const auto data = to_rank_data(table);
    const auto& dist = data.dist;
    const auto& profile = data.profile;

    const auto probs = dist.probabilities();
    const auto lens = profile.lengths();
    const json tau = or_null([&] { return kendall_tau_b(probs, lens); });
    const json eff = or_null([&] { return efficiencies(dist, profile, base, minimum); });

    json meta = metadata(g, "analyze");
    meta["input"] = a.input;
    meta["splitter"] = to_string(opts.splitter);
    meta["lowercase"] = opts.lowercase;
    meta["length_unit"] = to_string(unit);
    meta["minimum"] = a.minimum;
    meta["base"] = base;

    json summary = {{"n", dist.size()},
                    {"total_tokens", table.total_tokens},
                    {"entropy", entropy(dist, base)},
                    {"mean_log_rank", mean_log_rank(dist, base)},
                    {"mean_length", mean_length(dist, profile)},
                    {"tau", tau},
                    {"eta_ns", eff.is_null() ? json(nullptr) : json(eff.at("eta_ns"))},
                    {"eta_ud", eff.is_null() ? json(nullptr) : json(eff.at("eta_ud"))}};

    if (!a.plot_data.empty()) {
        std::ofstream plot(a.plot_data, std::ios::binary);
        if (!plot) throw error("cannot open " + a.plot_data + " for writing");
        write_metadata_lines(plot, meta);
        plot << "rank,log_rank,log_probability,neg_log_probability,length\n";
        for (std::size_t k = 0; k < dist.size(); ++k) {
            const double lp = log_base(probs[k], base);
            plot << (k + 1) << ',' << format_number(log_base(static_cast<double>(k + 1), base)) << ','
                 << format_number(lp) << ',' << format_number(-lp) << ',' << format_number(lens[k]) << '\n';
        }
        if (!plot) throw error("failed writing " + a.plot_data);
    }

    std::ostringstream out;
    if (g.format == "json") {
        json rows = json::array();
        for (std::size_t k = 0; k < dist.size(); ++k)
            rows.push_back({{"rank", k + 1},
                            {"token", tokens[k]},
                            {"count", dist.counts()[k]},
                            {"probability", probs[k]},
                            {"length", lens[k]}});
        out << json{{"metadata", meta}, {"summary", summary}, {"rows", rows}}.dump(2) << '\n';
    } else {
        write_metadata_lines(out, meta);
        write_rank_table(out, dist, &tokens, &profile);
        for (const auto& [k, v] : summary.items())
            out << "# " << k << ": " << (v.is_number_float() ? format_number(v.get<double>()) : v.dump()) << '\n';
    }
    emit(g, out.str());
    return kOk;
}

RankTable load_rank_table(const std::string& path) {
    std::istringstream in(read_input(path));
    return read_rank_table(in);
}

int run_fit(const Global& g, const FitArgs& a) {
    const auto table = load_rank_table(a.input);
    if (!table.dist.has_counts()) throw domain_error("fit needs a 'count' column");
    const std::uint64_t base = resolve_base(g, table.tokens ? &*table.tokens : nullptr);
    const auto counts = table.dist.counts();

    json meta = metadata(g, "fit");
    meta["input"] = a.input;
    meta["model"] = a.model;
    meta["base"] = base;
    json report = {{"metadata", meta}};
    if (a.model == "zipf") {
        report["zipf"] = fit_zipf_mle(counts, base);
    } else if (a.model == "exp") {
        report["exponential"] = fit_exponential_mle(counts);
    } else {
        const auto sel = select_model(counts, base);
        report["zipf"] = sel.zipf;
        report["exponential"] = sel.exponential;
        report["selection"] = {{"verdict", to_string(sel.verdict)}, {"delta_aic", sel.delta_aic}};
    }
    emit(g, render_report(g, report));
    return kOk;
}

int run_classify(const Global& g, const ClassifyArgs& a) {
    const auto table = load_rank_table(a.input);
    if (!table.profile) throw domain_error("classify needs a 'length' column");
    const std::uint64_t base = resolve_base(g, table.tokens ? &*table.tokens : nullptr);
    const auto rep = assess_class_membership(table.dist, *table.profile, base, a.thresholds);

    json meta = metadata(g, "classify");
    meta["input"] = a.input;
    meta["base"] = base;
    json report = {{"metadata", meta}, {"report", rep}};
    emit(g, render_report(g, report));
    if (rep.degenerate) {
        std::string why;
        for (const auto& d : rep.diagnostics) why += (why.empty() ? "" : "; ") + d;
        std::cerr << "zipfcode: degenerate input: " << why << '\n';
        return kDegenerate;
    }
    return kOk;
}

int run_simulate(const Global& g, const SimulateArgs& a) {
    a.params.validate();
    if (a.tokens < 1) throw domain_error("--tokens must be >= 1");
    json meta = metadata(g, "simulate");
    meta["generator"] = std::string(kGeneratorId);
    meta["params"] = a.params;
    meta["tokens"] = a.tokens;
    meta["seed"] = a.params.seed;

    RandomTyper typer(a.params);
    std::string body;
    if (g.format == "json") {
        json tokens = json::array();
        for (std::uint64_t k = 0; k < a.tokens; ++k) tokens.push_back(typer.next());
        body = json{{"metadata", meta}, {"tokens", tokens}}.dump(2) + "\n";
    } else {
        for (std::uint64_t k = 0; k < a.tokens; ++k) {
            body += typer.next();
            body += '\n';
        }
    }
    // The plain stream stays free of header lines so it can be piped into analyze.
    if (g.format != "json") {
        if (a.metadata.empty()) {
            std::cerr << meta.dump() << '\n';
        } else {
            std::ofstream m(a.metadata, std::ios::binary);
            if (!m) throw error("cannot open " + a.metadata + " for writing");
            m << meta.dump(2) << '\n';
        }
    }
    emit(g, body);
    return kOk;
}

int run_codes(const Global& g, const CodesArgs& a) {
    if (a.upto < 1) throw domain_error("--upto must be >= 1");
    const auto alphabet = Alphabet::from_utf8(a.alphabet);
    const CodeTable table =
        a.scheme == "nonsingular" ? enumerate_nonsingular_codes(a.upto, alphabet) : elias_gamma_table(a.upto, alphabet);

    json ud;
    try {
        ud = is_uniquely_decodable(table);
    } catch (const resource_exhausted&) {
        ud = "unknown";
    }
    json meta = metadata(g, "codes");
    meta["scheme"] = a.scheme;
    meta["upto"] = a.upto;
    meta["alphabet"] = a.alphabet;
    const double kraft = kraft_sum(table);
    const bool ns = is_nonsingular(table);

    std::ostringstream out;
    if (g.format == "json") {
        json codes = json::array();
        for (std::size_t k = 0; k < table.size(); ++k)
            codes.push_back({{"rank", k + 1}, {"code", utf8::encode(table.codes()[k])}});
        out << json{{"metadata", meta},
                    {"codes", codes},
                    {"kraft_sum", kraft},
                    {"nonsingular", ns},
                    {"uniquely_decodable", ud}}
                       .dump(2)
            << '\n';
    } else {
        write_metadata_lines(out, meta);
        write_code_table(out, table);
        out << "# kraft_sum: " << format_number(kraft) << '\n';
        out << "# nonsingular: " << (ns ? "true" : "false") << '\n';
        out << "# uniquely_decodable: " << (ud.is_string() ? ud.get<std::string>() : ud.dump()) << '\n';
    }
    emit(g, out.str());
    return kOk;
}

int fail(int code, const std::string& what) {
    std::cerr << "zipfcode: " << what << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    Global g;
    g.command_line = join_command(argc, argv);

    CLI::App app{"Word-length coding analysis: rank statistics, law fitting, class tests, random typing."};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-o,--output", g.output, "Output path (default: standard output)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--base", g.base, "Code alphabet size N (integer >= 2) or 'auto'");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Count tokens and write the rank table with a summary");
    analyze->add_option("input", an.input, "Text file, or - for standard input")->required();
    analyze->add_flag("--lowercase", an.lowercase, "Lowercase tokens (root locale)");
    analyze->add_option("--splitter", an.splitter, "Tokenizer")->check(CLI::IsMember({"words", "whitespace"}));
    analyze->add_option("--length-unit", an.length_unit, "Length unit")
        ->check(CLI::IsMember({"graphemes", "codepoints", "bytes"}));
    analyze->add_option("--minimum", an.minimum, "Minimum baseline for efficiencies")
        ->check(CLI::IsMember({"soft", "hard"}));
    analyze->add_option("--plot-data", an.plot_data, "Also write log-rank/log-probability/length CSV here");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit Zipf and truncated geometric laws to a rank table");
    fit->add_option("table", fa.input, "Rank table CSV, or -")->required();
    fit->add_option("--model", fa.model, "Model")->check(CLI::IsMember({"zipf", "exp", "both"}));

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "Test a rank table for quasi-optimal coding class membership");
    classify->add_option("table", ca.input, "Rank table CSV with a length column, or -")->required();
    classify->add_option("--min-r2", ca.thresholds.min_r2, "Minimum r^2 for both linear laws")
        ->check(CLI::Range(0.0, 1.0));
    classify->add_option("--alpha-tol", ca.thresholds.alpha_tolerance, "Relative tolerance implied vs fitted alpha")
        ->check(CLI::NonNegativeNumber);
    classify->add_option("--min-count", ca.thresholds.min_count, "Ignore ranks with fewer occurrences")
        ->check(CLI::PositiveNumber);
    classify->add_flag("--weighted", ca.thresholds.weighted, "Weight regressions by probability");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Generate a random typing token stream");
    simulate->add_option("--alphabet-size", sa.params.alphabet_size, "Number of non-space keys");
    simulate->add_option("--p-space", sa.params.p_space, "Probability of the space key");
    simulate->add_option("--tokens", sa.tokens, "Number of tokens");
    simulate->add_option("--seed", sa.params.seed, "Generator seed");
    simulate->add_option("--metadata", sa.metadata, "Write run metadata JSON here (default: standard error)");

    CodesArgs co;
    auto* codes = app.add_subcommand("codes", "Write a code table with Kraft sum and decodability checks");
    codes->add_option("--scheme", co.scheme, "Code construction")->check(CLI::IsMember({"elias-gamma", "nonsingular"}));
    codes->add_option("--upto", co.upto, "Number of ranks")->required();
    codes->add_option("--alphabet", co.alphabet, "Code symbols, in order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze) return run_analyze(g, an);
        if (*fit) return run_fit(g, fa);
        if (*classify) return run_classify(g, ca);
        if (*simulate) return run_simulate(g, sa);
        if (*codes) return run_codes(g, co);
    } catch (const empty_input& e) {
        return fail(kEmpty, e.what());
    } catch (const non_convergence& e) {
        return fail(kDegenerate, e.what());
    } catch (const degenerate_input& e) {
        return fail(kDegenerate, e.what());
    } catch (const std::exception& e) {
        return fail(kUsage, e.what());
    }
    return kUsage;
}
