#include "sentibt/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <memory>
#include <sstream>

#include "sentibt/config.hpp"
#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

namespace fs = std::filesystem;

namespace {

const char* const kDefaultsFooter =
    "Defaults: thresholds sell 40 / buy 60, initial capital $300,000, order value $10,000 per trade, "
    "commission 0.05% of notional, market open 09:30 America/New_York (override the zone with "
    "SENTIBT_DEFAULT_TZ).\nExit codes: 0 ok, 2 usage or config error, 3 data error.";

enum class Verbosity { Quiet, Normal, Verbose };

struct Context {
    std::ostream& out;
    std::ostream& err;
    Verbosity verbosity = Verbosity::Normal;

    void info(const std::string& msg) const {
        if (verbosity == Verbosity::Verbose) {
            err << msg << '\n';
        }
    }
    void warn(const std::string& msg) const {
        if (verbosity != Verbosity::Quiet) {
            err << "warning: " << msg << '\n';
        }
    }
};

struct LoadedRun {
    RunConfig config;
    MarketData market;
    std::vector<ArticleAssetScore> scores;
};

LoadedRun load_run(const fs::path& config_path, const Context& ctx) {
    RunConfig config = load_run_config(config_path);
    ctx.info("loading prices from " + config.inputs.prices.string());
    MarketData market = load_prices(config.inputs.prices);
    LoadedRun run{std::move(config), std::move(market), {}};
    if (run.config.inputs.income) {
        run.config.backtest.metrics.income = load_income(*run.config.inputs.income);
    }
    auto universe = resolve_universe(run.config.backtest, run.market.series);
    run.scores = load_scores(run.config, universe);
    ctx.info("loaded " + std::to_string(run.market.series.bar_count()) + " bars and " +
             std::to_string(run.scores.size()) + " scores");
    return run;
}

void report_warnings(const BacktestResult& result, const Context& ctx) {
    for (const auto& w : result.warnings) {
        ctx.warn(result.name + ": " + w);
    }
}

std::string series_csv(std::span<const SeriesPoint> points) {
    std::ostringstream s;
    s << "date,cumulative_return_pct\n";
    for (const auto& p : points) {
        s << format_date(p.date) << ',' << format_double(p.value) << '\n';
    }
    return s.str();
}

std::string periods_csv(std::span<const PeriodReturn> periods) {
    std::ostringstream s;
    s << "period,start,end,return_pct\n";
    for (const auto& p : periods) {
        s << p.label << ',' << format_date(p.start) << ',' << format_date(p.end) << ','
          << format_double(p.return_pct) << '\n';
    }
    return s.str();
}

// File-name-safe variant name.
std::string slug(const std::string& name) {
    std::string out;
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "variant" : out;
}

int cmd_run(const std::string& config_path, const fs::path& out, const Context& ctx) {
    LoadedRun run = load_run(config_path, ctx);
    BacktestResult result = run_backtest(run.config.backtest, run.market, run.scores);
    report_warnings(result, ctx);
    write_result_directory(result, out);
    ctx.info("wrote " + out.string());
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& config_paths, const fs::path& out,
                const std::optional<std::string>& benchmark, const Context& ctx) {
    if (config_paths.size() < 2) {
        throw ConfigError("compare needs at least two --config files");
    }
    std::vector<LoadedRun> runs;
    runs.reserve(config_paths.size());
    for (const auto& p : config_paths) {
        runs.push_back(load_run(p, ctx));
    }
    for (const auto& r : runs) {
        if (r.config.inputs.prices != runs.front().config.inputs.prices) {
            throw ContractError("variants '" + r.config.backtest.name + "' and '" + runs.front().config.backtest.name +
                                "' read different price files");
        }
    }
    std::vector<VariantInput> variants;
    for (const auto& r : runs) {
        variants.push_back(VariantInput{r.config.backtest, r.scores});
    }
    ComparisonResult comparison = run_comparison(variants, runs.front().market, benchmark);

    const fs::path staging = begin_staging(out);
    std::vector<std::pair<std::string, const MetricsReport*>> columns;
    nlohmann::ordered_json doc;
    doc["benchmark"] = comparison.benchmark ? nlohmann::ordered_json(*comparison.benchmark) : nlohmann::ordered_json(nullptr);
    doc["variants"] = nlohmann::ordered_json::array();
    for (const auto& r : comparison.results) {
        report_warnings(r, ctx);
        columns.emplace_back(r.name, &r.metrics);
        auto m = to_json(r.metrics);
        nlohmann::ordered_json v;
        v["name"] = r.name;
        v["fill_count"] = r.fills.size();
        v["metrics"] = m["metrics"];
        doc["variants"].push_back(std::move(v));
        if (!doc.contains("conventions")) {
            doc["conventions"] = m["conventions"];
        }
        auto cumulative = cumulative_return_series(r.equity_curve);
        write_text_file(staging / ("cumulative_" + slug(r.name) + ".csv"), series_csv(cumulative));
        auto monthly = periodic_compound_returns(r.equity_curve, Period::Month);
        write_text_file(staging / ("monthly_" + slug(r.name) + ".csv"), periods_csv(monthly));
    }
    std::ostringstream table;
    write_report_table_csv(table, columns);
    write_text_file(staging / "comparison.csv", table.str());
    write_text_file(staging / "comparison.json", doc.dump(2) + "\n");
    publish_staging(staging, out);
    ctx.info("wrote " + out.string());
    return kExitOk;
}

Thresholds parse_pair(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("threshold pair '" + text + "' must be SELL:BUY");
    }
    double sell = 0.0;
    double buy = 0.0;
    if (!parse_double(text.substr(0, colon), sell) || !parse_double(text.substr(colon + 1), buy)) {
        throw ConfigError("threshold pair '" + text + "' must be SELL:BUY with numbers");
    }
    try {
        return Thresholds(sell, buy);
    } catch (const ConfigError& e) {
        throw ConfigError("threshold pair '" + text + "': " + e.what());
    }
}

std::vector<Thresholds> parse_pairs(const std::string& list) {
    std::vector<Thresholds> out;
    std::string item;
    std::istringstream in(list);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(parse_pair(item));
        }
    }
    if (out.empty()) {
        throw ConfigError("--pairs needs at least one SELL:BUY pair");
    }
    return out;
}

int cmd_sweep(const std::string& config_path, const fs::path& out, const std::string& pairs, const Context& ctx) {
    auto thresholds = parse_pairs(pairs);
    LoadedRun run = load_run(config_path, ctx);
    BacktestConfig config = run.config.backtest;
    config.alpha_vs_benchmark = false;
    auto rows = threshold_sweep(config, run.market, run.scores, thresholds);

    std::ostringstream csv;
    csv << "sell,buy,fill_count";
    auto labels = report_rows(rows.front().metrics);
    for (const auto& [label, _] : labels) {
        csv << ',' << csv_field(label);
    }
    csv << '\n';
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        csv << format_double(row.thresholds.sell()) << ',' << format_double(row.thresholds.buy()) << ','
            << row.fill_count;
        for (const auto& [_, metric] : report_rows(row.metrics)) {
            csv << ',';
            if (metric.value) {
                csv << format_double(*metric.value);
            } else {
                csv << "null:" << to_string(*metric.reason);
            }
        }
        csv << '\n';
        nlohmann::ordered_json j;
        j["sell"] = row.thresholds.sell();
        j["buy"] = row.thresholds.buy();
        j["fill_count"] = row.fill_count;
        j["metrics"] = to_json(row.metrics)["metrics"];
        doc.push_back(std::move(j));
    }
    const fs::path staging = begin_staging(out);
    write_text_file(staging / "sweep.csv", csv.str());
    write_text_file(staging / "sweep.json", doc.dump(2) + "\n");
    publish_staging(staging, out);
    ctx.info("wrote " + out.string());
    return kExitOk;
}

int cmd_synth(const std::string& config_path, const fs::path& out, std::optional<std::uint64_t> seed,
              const Context& ctx) {
    SynthConfig sc = load_synthetic_spec(config_path);
    std::uint64_t s = seed.value_or(sc.seed.value_or(0));
    ctx.info("generating synthetic data with seed " + std::to_string(s));
    SyntheticDataset data = generate_synthetic_dataset(s, sc.spec);
    const fs::path staging = begin_staging(out);
    {
        std::ostringstream p;
        write_prices(p, data.market.series);
        write_text_file(staging / "prices.csv", p.str());
    }
    {
        std::ostringstream p;
        write_scores(p, data.scores);
        write_text_file(staging / "scores.csv", p.str());
    }
    publish_staging(staging, out);
    ctx.info("wrote " + out.string());
    return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sentiment-driven daily backtester", "sentibt"};
    app.footer(kDefaultsFooter);
    app.require_subcommand(1);
    bool quiet = false;
    bool verbose = false;
    app.add_flag("-q,--quiet", quiet, "Suppress warnings");
    app.add_flag("-v,--verbose", verbose, "Print progress to stderr");

    std::string config;
    std::vector<std::string> configs;
    std::string out_dir;
    std::string pairs = "45:55,40:60,35:65";
    std::optional<std::string> benchmark;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run one backtest and write its result directory");
    run->add_option("--config", config, "Run config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory (replaced atomically)")->required();

    auto* compare = app.add_subcommand("compare", "Run several variants and write a comparison table");
    compare->add_option("--config", configs, "Variant config; repeat for each variant (at least two)")->required();
    compare->add_option("--out", out_dir, "Output directory")->required();
    compare->add_option("--benchmark", benchmark,
                        "Variant name to measure alpha against (default: the single buy_and_hold variant)");

    auto* sweep = app.add_subcommand("sweep", "Re-run one config over several threshold pairs");
    sweep->add_option("--config", config, "Run config (JSON)")->required();
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--pairs", pairs, "Comma-separated SELL:BUY pairs")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic prices and scores dataset");
    synth->add_option("--config", config, "Synthetic spec (JSON)")->required();
    synth->add_option("--out", out_dir, "Output directory")->required();
    synth->add_option("--seed", seed, "Random seed (overrides the spec)");

    for (auto* sub : {run, compare, sweep, synth}) {
        sub->footer(kDefaultsFooter);
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Context ctx{out, err, quiet ? Verbosity::Quiet : (verbose ? Verbosity::Verbose : Verbosity::Normal)};
    try {
        if (run->parsed()) {
            return cmd_run(config, out_dir, ctx);
        }
        if (compare->parsed()) {
            return cmd_compare(configs, out_dir, benchmark, ctx);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config, out_dir, pairs, ctx);
        }
        return cmd_synth(config, out_dir, seed, ctx);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractError& e) {
        err << "contract error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DomainError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace sentibt
