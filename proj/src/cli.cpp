#include "climalens/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "climalens/corpus.hpp"
#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"
#include "climalens/fetch.hpp"
#include "climalens/hashing.hpp"
#include "climalens/indices.hpp"
#include "climalens/panel.hpp"
#include "climalens/report.hpp"
#include "climalens/synth.hpp"
#include "climalens/textkit.hpp"

namespace climalens::cli {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

corpus::SnippetFormat format_for(const std::string& path) {
    return path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0
               ? corpus::SnippetFormat::Jsonl
               : corpus::SnippetFormat::Csv;
}

corpus::ParseResult parse_snippet_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snippet file: " + path);
    return corpus::parse_snippets(in, format_for(path));
}

void write_snippet_csv(const std::string& path,
                       const std::vector<corpus::Snippet>& snippets) {
    std::ostringstream out;
    write_csv_row(out, {"station", "timestamp", "keyword", "text"});
    for (const auto& s : snippets)
        write_csv_row(out, {s.station, s.timestamp.str(), s.matched_keyword.value_or(""),
                            s.text});
    write_file(path, out.str());
}

// Reports collected record errors and decides the exit code under --strict.
int finish_with_record_errors(const std::vector<corpus::RecordError>& errors,
                              bool strict) {
    if (errors.empty()) return 0;
    size_t shown = std::min<size_t>(errors.size(), 10);
    for (size_t i = 0; i < shown; ++i)
        std::cerr << "record error at line " << errors[i].line << ": "
                  << errors[i].message << "\n";
    if (errors.size() > shown)
        std::cerr << "... and " << errors.size() - shown << " more\n";
    std::cerr << errors.size() << " record(s) rejected\n";
    return strict ? 1 : 0;
}

std::vector<textkit::ThemeVocabulary> load_vocabularies(const config::RunConfig& cfg) {
    config::require_file(cfg.vocab_cc_file, "vocab_cc");
    config::require_file(cfg.vocab_re_file, "vocab_re");
    config::require_file(cfg.vocab_ghi_file, "vocab_ghi");
    return {textkit::ThemeVocabulary::load_file(textkit::Theme::CC, cfg.vocab_cc_file),
            textkit::ThemeVocabulary::load_file(textkit::Theme::RE, cfg.vocab_re_file),
            textkit::ThemeVocabulary::load_file(textkit::Theme::GHI, cfg.vocab_ghi_file)};
}

std::string clean_corpus_path(const config::RunConfig& cfg) {
    return cfg.out_dir + "/corpus_clean.csv";
}

// The variables every battery may touch, for the missingness report.
std::vector<std::string> all_panel_variables() {
    std::vector<std::string> names = {"ln_volcov", "cov_cc",   "cov_re",
                                      "cov_ghi",   "pos_sent", "neg_sent"};
    for (const auto& c : panel::standard_controls()) names.push_back(c);
    names.push_back("cpu");
    names.push_back("chneg");
    names.push_back("mccc");
    return names;
}

struct BatteryPlan {
    std::string name;
    std::vector<panel::ModelSpec> specs;
};

std::vector<BatteryPlan> battery_plans(const config::RunConfig& cfg) {
    std::vector<BatteryPlan> plans;
    for (const auto& name : cfg.batteries) {
        if (name == "standard") {
            plans.push_back({name, panel::standard_battery(cfg.se_flavor, cfg.window)});
        } else if (name == "chneg") {
            plans.push_back({name, panel::chneg_battery(cfg.se_flavor, cfg.window)});
        } else if (name == "mccc") {
            plans.push_back({name, panel::mccc_battery(cfg.se_flavor, cfg.window)});
        } else if (name == "cpu") {
            plans.push_back({name, panel::cpu_battery(cfg.se_flavor, cfg.window)});
        } else if (name == "covid") {
            plans.push_back(
                {name, panel::standard_battery(cfg.se_flavor,
                                               MonthRange{{2020, 1}, {2021, 8}})});
        } else {
            throw ConfigError("unknown battery '" + name + "'");
        }
    }
    return plans;
}

std::string results_path(const config::RunConfig& cfg, const std::string& battery) {
    return cfg.out_dir + "/results_" + battery + ".csv";
}

std::string tables_path(const config::RunConfig& cfg, const std::string& battery) {
    return cfg.out_dir + "/tables_" + battery + ".txt";
}

}  // namespace

int cmd_fetch(const config::RunConfig& cfg) {
    config::require_file(cfg.keywords_file, "keywords");
    auto keywords = config::load_keywords(cfg.keywords_file);
    if (keywords.empty()) throw ConfigError("keywords file is empty");
    if (cfg.transport == fetch::Transport::Live && cfg.base_url.empty())
        throw ConfigError("live transport needs base_url");

    ensure_dir(cfg.out_dir + "/fetched");
    fetch::FetchOptions options;
    options.transport = cfg.transport;
    options.fixtures_dir = cfg.fixtures_dir;
    options.base_url = cfg.base_url;
    options.record = cfg.transport == fetch::Transport::Live;
    if (options.record) ensure_dir(cfg.fixtures_dir);

    std::vector<corpus::Snippet> all;
    for (const auto& keyword : keywords) {
        for (const auto& station : cfg.stations) {
            std::string jsonl =
                fetch::fetch_snippets(keyword, station, cfg.window, options);
            std::istringstream in(jsonl);
            auto parsed = corpus::parse_snippets(in, corpus::SnippetFormat::Jsonl);
            for (const auto& e : parsed.errors)
                std::cerr << "fetch record error (" << keyword << ", " << station
                          << ") line " << e.line << ": " << e.message << "\n";
            for (auto& s : parsed.snippets) {
                if (!s.matched_keyword) s.matched_keyword = keyword;
                all.push_back(std::move(s));
            }
            std::string key = fetch::fixture_key(keyword, station, cfg.window);
            write_snippet_csv(cfg.out_dir + "/fetched/" + key + ".csv",
                              parsed.snippets);
        }
    }
    auto unique = corpus::dedup(std::move(all));
    write_snippet_csv(cfg.out_dir + "/corpus.csv", unique);
    std::cout << "fetched " << unique.size() << " snippets ("
              << keywords.size() * cfg.stations.size() << " queries) -> "
              << cfg.out_dir << "/corpus.csv\n";
    return 0;
}

int cmd_ingest(const config::RunConfig& cfg) {
    config::require_file(cfg.snippets_file, "snippets");
    ensure_dir(cfg.out_dir);

    auto parsed = parse_snippet_file(cfg.snippets_file);
    size_t raw = parsed.snippets.size();
    auto unique = corpus::dedup(std::move(parsed.snippets));
    size_t deduped = unique.size();

    if (!cfg.keywords_file.empty()) {
        config::require_file(cfg.keywords_file, "keywords");
        auto keywords = config::load_keywords(cfg.keywords_file);
        unique = corpus::filter_by_keywords(unique, keywords);
    }

    write_snippet_csv(clean_corpus_path(cfg), unique);
    std::cout << "ingested " << raw << " snippets, " << raw - deduped
              << " duplicates dropped, " << unique.size() << " kept -> "
              << clean_corpus_path(cfg) << "\n";
    return finish_with_record_errors(parsed.errors, cfg.strict);
}

int cmd_build_indices(const config::RunConfig& cfg) {
    std::string corpus_path = clean_corpus_path(cfg);
    if (!fs::exists(corpus_path))
        throw ConfigError("no clean corpus at " + corpus_path + "; run ingest first");
    config::require_file(cfg.lexicon_file, "lexicon");

    auto vocabularies = load_vocabularies(cfg);
    auto lexicon = textkit::SentimentLexicon::load_file(cfg.lexicon_file);
    auto parsed = parse_snippet_file(corpus_path);
    if (!parsed.errors.empty())
        throw FormatError(parsed.errors.front().line,
                          "clean corpus is damaged: " + parsed.errors.front().message);

    auto buckets = corpus::aggregate_monthly(parsed.snippets, vocabularies, lexicon,
                                             cfg.window);
    auto rows = indices::build_index_table(buckets);
    {
        std::ostringstream out;
        indices::write_index_csv(out, rows);
        write_file(cfg.out_dir + "/indices.csv", out.str());
    }

    // Table-style summary over the defined months.
    {
        std::ostringstream out;
        write_csv_row(out, {"variable", "mean", "median", "std", "skew", "n"});
        auto emit = [&](const char* name, auto field) {
            std::vector<double> series;
            for (const auto& r : rows)
                if (r.defined) series.push_back(r.*field);
            auto s = indices::summarize(series);
            write_csv_row(out, {name, format_real(s.mean), format_real(s.median),
                                format_real(s.std), format_real(s.skew),
                                std::to_string(s.n)});
        };
        emit("ln_volcov", &indices::ClimateIndexRow::ln_volcov);
        emit("cov_cc", &indices::ClimateIndexRow::cov_cc);
        emit("cov_re", &indices::ClimateIndexRow::cov_re);
        emit("cov_ghi", &indices::ClimateIndexRow::cov_ghi);
        emit("pos_sent", &indices::ClimateIndexRow::pos_sent);
        emit("neg_sent", &indices::ClimateIndexRow::neg_sent);
        write_file(cfg.out_dir + "/index_summary.csv", out.str());
    }

    size_t defined = 0;
    for (const auto& r : rows) defined += r.defined;
    std::cout << "built indices for " << rows.size() << " months (" << defined
              << " defined) -> " << cfg.out_dir << "/indices.csv\n";
    return 0;
}

int cmd_estimate_risk(const config::RunConfig& cfg) {
    config::require_file(cfg.factors_file, "factors");
    config::require_file(cfg.returns_file, "returns");
    ensure_dir(cfg.out_dir);

    std::ifstream factors_in(cfg.factors_file, std::ios::binary);
    auto factors = factor_model::read_factor_csv(factors_in);
    std::ifstream returns_in(cfg.returns_file, std::ios::binary);
    auto returns = factor_model::read_returns_csv(returns_in);

    auto risks = factor_model::risk_panel(returns, factors, cfg.window, cfg.min_days);
    {
        std::ostringstream out;
        factor_model::write_risk_csv(out, risks);
        write_file(cfg.out_dir + "/risks.csv", out.str());
    }
    size_t insufficient = 0;
    for (const auto& r : risks)
        insufficient += r.quality == factor_model::RiskQuality::Insufficient;
    std::cout << "estimated " << risks.size() << " firm-months (" << insufficient
              << " insufficient) -> " << cfg.out_dir << "/risks.csv\n";
    return 0;
}

int cmd_regress(const config::RunConfig& cfg) {
    std::string indices_path = cfg.out_dir + "/indices.csv";
    std::string risks_path = cfg.out_dir + "/risks.csv";
    if (!fs::exists(indices_path))
        throw ConfigError("no index table at " + indices_path + "; run build-indices");
    if (!fs::exists(risks_path))
        throw ConfigError("no risk panel at " + risks_path + "; run estimate-risk");
    config::require_file(cfg.firm_file, "firm");
    config::require_file(cfg.macro_file, "macro");

    std::ifstream indices_in(indices_path, std::ios::binary);
    auto index_rows = indices::read_index_csv(indices_in);
    std::ifstream risks_in(risks_path, std::ios::binary);
    auto risks = factor_model::read_risk_csv(risks_in);
    std::ifstream firm_in(cfg.firm_file, std::ios::binary);
    auto firm_raw = datahub::read_firm_csv(firm_in);
    std::ifstream macro_in(cfg.macro_file, std::ios::binary);
    auto macro_raw = datahub::read_macro_csv(macro_in);

    auto firm_cov = datahub::transform_covariates(firm_raw);
    auto macro = datahub::transform_macro(macro_raw, cfg.ovx);
    auto merged = datahub::merge_all(risks, index_rows, firm_cov, macro);

    {
        auto missing = datahub::tally_missingness(merged, all_panel_variables(),
                                                  cfg.window);
        std::ostringstream out;
        datahub::write_missingness_csv(out, missing);
        write_file(cfg.out_dir + "/missingness.csv", out.str());
    }

    size_t produced = 0, failed = 0;
    for (const auto& plan : battery_plans(cfg)) {
        auto result = panel::run_model_battery(merged, plan.specs);
        for (const auto& [model, reason] : result.failures)
            std::cerr << "battery " << plan.name << ": model " << model
                      << " failed: " << reason << "\n";
        produced += result.estimates.size();
        failed += result.failures.size();

        {
            std::ostringstream out;
            panel::write_results_csv(out, plan.name, result);
            write_file(results_path(cfg, plan.name), out.str());
        }
        {
            std::vector<panel::FeEstimate> idio, sys;
            for (const auto& est : result.estimates) {
                (est.spec.dependent == panel::Dependent::Idio ? idio : sys)
                    .push_back(est);
            }
            std::string text;
            if (!idio.empty())
                text += panel::render_table("Idiosyncratic risk (sigma_eps), battery " +
                                                plan.name,
                                            idio) + "\n";
            if (!sys.empty())
                text += panel::render_table("Systematic risk (beta_er), battery " +
                                                plan.name,
                                            sys);
            write_file(tables_path(cfg, plan.name), text);
        }
        std::cout << "battery " << plan.name << ": " << result.estimates.size()
                  << " models estimated, " << result.failures.size() << " failed -> "
                  << results_path(cfg, plan.name) << "\n";
    }
    if (produced == 0 && failed > 0) {
        std::cerr << "all models failed\n";
        return 1;
    }
    return 0;
}

int cmd_report(const config::RunConfig& cfg) {
    std::vector<std::string> inputs;
    for (const auto& path :
         {cfg.keywords_file, cfg.vocab_cc_file, cfg.vocab_re_file, cfg.vocab_ghi_file,
          cfg.lexicon_file, cfg.snippets_file, cfg.factors_file, cfg.returns_file,
          cfg.firm_file, cfg.macro_file}) {
        if (!path.empty() && fs::exists(path)) inputs.push_back(path);
    }

    std::vector<std::string> outputs;
    std::vector<std::string> candidates = {
        cfg.out_dir + "/corpus.csv",        cfg.out_dir + "/corpus_clean.csv",
        cfg.out_dir + "/indices.csv",       cfg.out_dir + "/index_summary.csv",
        cfg.out_dir + "/risks.csv",         cfg.out_dir + "/missingness.csv"};
    for (const auto& b : cfg.batteries) {
        candidates.push_back(results_path(cfg, b));
        candidates.push_back(tables_path(cfg, b));
    }
    for (const auto& path : candidates)
        if (fs::exists(path)) outputs.push_back(path);
    if (outputs.empty())
        throw ConfigError("no artifacts under " + cfg.out_dir +
                          "; run the pipeline commands first");

    // Human-readable digest: the summary block plus every rendered table.
    std::ostringstream text;
    text << report::kVersion << " report\nwindow " << cfg.window.str() << "\n\n";
    for (const auto& path : outputs) {
        if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0) {
            text << read_file(path) << "\n";
        }
    }
    std::string summary_path = cfg.out_dir + "/index_summary.csv";
    if (fs::exists(summary_path))
        text << "index summary (" << summary_path << "):\n" << read_file(summary_path);
    write_file(cfg.out_dir + "/report.txt", text.str());

    std::string config_hash = sha256_hex(config::serialize(cfg));
    outputs.push_back(cfg.out_dir + "/report.txt");
    report::write_manifest(cfg.out_dir + "/manifest.json", config_hash, inputs, outputs);
    std::cout << "report -> " << cfg.out_dir << "/report.txt, manifest -> "
              << cfg.out_dir << "/manifest.json\n";
    return 0;
}

int cmd_selftest(const config::RunConfig& cfg) {
    std::string base = cfg.out_dir + "/selftest";
    std::string inputs = base + "/inputs";
    ensure_dir(inputs);

    synth::SynthOptions options;
    options.seed = cfg.seed;
    options.window = cfg.window;
    auto data = synth::generate(options);
    synth::write_inputs(data, inputs);
    synth::write_text_configs(inputs);

    config::RunConfig child;
    child.window = cfg.window;
    child.out_dir = base;
    child.seed = cfg.seed;
    child.min_days = cfg.min_days;
    child.se_flavor = cfg.se_flavor;
    child.batteries = {"standard"};
    child.keywords_file = inputs + "/keywords.txt";
    child.vocab_cc_file = inputs + "/vocab_cc.txt";
    child.vocab_re_file = inputs + "/vocab_re.txt";
    child.vocab_ghi_file = inputs + "/vocab_ghi.txt";
    child.lexicon_file = inputs + "/lexicon.tsv";
    child.snippets_file = inputs + "/snippets.csv";
    child.factors_file = inputs + "/factors.csv";
    child.returns_file = inputs + "/returns.csv";
    child.firm_file = inputs + "/firm.csv";
    child.macro_file = inputs + "/macro.csv";

    if (int rc = cmd_ingest(child); rc != 0) return rc;
    if (int rc = cmd_build_indices(child); rc != 0) return rc;
    if (int rc = cmd_estimate_risk(child); rc != 0) return rc;
    if (int rc = cmd_regress(child); rc != 0) return rc;
    if (int rc = cmd_report(child); rc != 0) return rc;

    // The generated data plants known news coefficients; the pipeline's M1
    // estimates must cover them at 95%.
    struct Check {
        const char* dependent;
        double target;
    };
    const Check checks[] = {{"idio", options.volcov_effect_idio},
                            {"sys", options.volcov_effect_sys}};
    std::ifstream results_in(base + "/results_standard.csv", std::ios::binary);
    CsvReader reader(results_in);
    auto header = reader.next();
    if (!header) throw ConfigError("empty results file");
    std::map<std::string, std::pair<double, double>> found;
    while (auto row = reader.next()) {
        if (row->size() != 10) continue;
        if ((*row)[1] == "M1" && (*row)[3] == "ln_volcov")
            found[(*row)[2]] = {parse_real((*row)[4], reader.record_line()),
                                parse_real((*row)[5], reader.record_line())};
    }

    bool all_ok = true;
    for (const auto& check : checks) {
        auto it = found.find(check.dependent);
        if (it == found.end()) {
            std::cout << "selftest " << check.dependent << ": M1 estimate missing FAIL\n";
            all_ok = false;
            continue;
        }
        auto [coef, se] = it->second;
        bool ok = std::abs(coef - check.target) <= 1.9600 * se;
        std::cout << "selftest " << check.dependent << ": ln_volcov coef "
                  << format_real(coef, 4) << " (se " << format_real(se, 4)
                  << ", planted " << format_real(check.target, 2) << ") "
                  << (ok ? "PASS" : "FAIL") << "\n";
        all_ok &= ok;
    }
    return all_ok ? 0 : 1;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"television climate news indices and firm risk pipeline"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path, window_str, se_str, out_dir;
    int min_days = -1;
    int64_t seed = -1;
    bool strict = false, replay = false, live = false;

    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--window", window_str, "sample window YYYY-MM:YYYY-MM");
    app.add_flag("--strict", strict, "record-level input errors become fatal");
    app.add_option("--se", se_str, "standard error flavor")
        ->check(CLI::IsMember({"cluster", "hc1"}));
    app.add_option("--min-days", min_days, "minimum trading days per firm-month");
    app.add_flag("--replay", replay, "serve fetches from recorded fixtures");
    app.add_flag("--live", live, "fetch over HTTP and record fixtures");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for synthetic data");

    auto* c_fetch = app.add_subcommand("fetch", "retrieve snippets per keyword and station");
    auto* c_ingest = app.add_subcommand("ingest", "parse, dedup and filter a snippet file");
    auto* c_indices = app.add_subcommand("build-indices", "compute the monthly climate variables");
    auto* c_risk = app.add_subcommand("estimate-risk", "estimate three-factor risks per firm-month");
    auto* c_regress = app.add_subcommand("regress", "run the fixed-effects model batteries");
    auto* c_report = app.add_subcommand("report", "consolidate artifacts and write a manifest");
    auto* c_selftest = app.add_subcommand("selftest", "run the pipeline on generated data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        config::RunConfig cfg = config_path.empty() ? config::default_config()
                                                    : config::load_config(config_path);
        if (!window_str.empty()) cfg.window = MonthRange::parse(window_str);
        if (strict) cfg.strict = true;
        if (se_str == "cluster") cfg.se_flavor = panel::SeFlavor::Cluster;
        if (se_str == "hc1") cfg.se_flavor = panel::SeFlavor::Hc1;
        if (min_days >= 0) cfg.min_days = min_days;
        if (replay && live) throw ConfigError("--replay and --live are exclusive");
        if (replay) cfg.transport = fetch::Transport::Replay;
        if (live) cfg.transport = fetch::Transport::Live;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);

        if (c_fetch->parsed()) return cmd_fetch(cfg);
        if (c_ingest->parsed()) return cmd_ingest(cfg);
        if (c_indices->parsed()) return cmd_build_indices(cfg);
        if (c_risk->parsed()) return cmd_estimate_risk(cfg);
        if (c_regress->parsed()) return cmd_regress(cfg);
        if (c_report->parsed()) return cmd_report(cfg);
        if (c_selftest->parsed()) return cmd_selftest(cfg);
        throw ConfigError("no command given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace climalens::cli
