#include "sentibt/engine.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <system_error>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

namespace fs = std::filesystem;

std::string_view to_string(StrategyKind kind) { return kind == StrategyKind::Sentiment ? "sentiment" : "buy_and_hold"; }

std::string_view to_string(ScorerKind kind) { return kind == ScorerKind::Precomputed ? "precomputed" : "lexicon"; }

void BacktestConfig::validate() const {
    if (name.empty()) {
        throw ConfigError("name must not be empty");
    }
    if (!(start_date < end_date)) {
        throw ConfigError("start_date must be before end_date");
    }
    std::set<std::string> seen;
    for (const auto& asset : universe) {
        if (asset.empty()) {
            throw ConfigError("universe contains an empty asset id");
        }
        if (!seen.insert(asset).second) {
            throw ConfigError("universe lists " + asset + " twice");
        }
    }
    execution.validate();
    if (!(metrics.periods_per_year > 0.0)) {
        throw ConfigError("metrics.periods_per_year must be > 0");
    }
    MarketClock clock(market.timezone, market.open);
}

nlohmann::ordered_json to_json(const BacktestConfig& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["strategy"] = to_string(c.strategy);
    j["start_date"] = format_date(c.start_date);
    j["end_date"] = format_date(c.end_date);
    j["universe"] = c.universe;
    j["thresholds"] = {{"sell", c.thresholds.sell()}, {"buy", c.thresholds.buy()}};
    j["no_data_policy"] = to_string(c.no_data_policy);
    j["execution"] = {{"initial_capital", c.execution.initial_capital},
                      {"order_value", c.execution.order_value},
                      {"commission_rate", c.execution.commission_rate},
                      {"fractional_shares", c.execution.fractional_shares},
                      {"insufficient_cash", "skip"},
                      {"benchmark_exit_commission", c.execution.benchmark_exit_commission}};
    j["scorer"] = to_string(c.scorer);
    j["benchmark_mode"] = to_string(c.benchmark_mode);
    j["metrics"] = {{"periods_per_year", c.metrics.periods_per_year},
                    {"risk_free_rate", c.metrics.risk_free_rate},
                    {"var_method", to_string(c.metrics.var_method)},
                    {"income_events", c.metrics.income.size()}};
    nlohmann::ordered_json market;
    market["timezone"] = c.market.timezone;
    market["open_time"] = format_local_time(c.market.open);
    market["backtest_start"] =
        c.market.backtest_start ? nlohmann::ordered_json(format_timestamp(*c.market.backtest_start)) : nlohmann::ordered_json(nullptr);
    j["market"] = std::move(market);
    j["seed"] = c.seed;
    j["alpha_vs_benchmark"] = c.alpha_vs_benchmark;
    j["short_accounting"] = "proceeds credited at entry, no margin, no borrow fee";
    j["final_day"] = c.strategy == StrategyKind::Sentiment ? "open positions marked at last close, not liquidated"
                                                           : "all holdings sold at the last open";
    return j;
}

std::vector<std::string> resolve_universe(const BacktestConfig& config, const PriceSeries& prices) {
    std::vector<std::string> universe = config.universe.empty() ? prices.assets() : config.universe;
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.empty()) {
        throw ConfigError("universe is empty");
    }
    for (const auto& asset : universe) {
        if (!prices.has_asset(asset)) {
            throw DataError("no price data for universe asset " + asset);
        }
    }
    return universe;
}

namespace {

void attach_benchmark_alpha(BacktestResult& result, const BacktestResult& benchmark) {
    if (result.equity_curve.front().date != benchmark.equity_curve.front().date ||
        result.equity_curve.back().date != benchmark.equity_curve.back().date) {
        throw ContractError("strategy and benchmark cover different date ranges");
    }
    result.metrics.alpha = Metric::of(alpha(*result.metrics.annual_cumulative_return.value,
                                            *benchmark.metrics.annual_cumulative_return.value));
}

}  // namespace

BacktestResult run_benchmark(const BacktestConfig& config, const MarketData& market) {
    config.validate();
    auto universe = resolve_universe(config, market.series);
    TradingCalendar horizon = market.calendar.between(config.start_date, config.end_date);
    BenchmarkPlan plan = benchmark_plan(universe, config.execution.initial_capital, config.benchmark_mode,
                                        market.series, horizon, config.execution.fractional_shares);
    BuyAndHoldRun run = run_buy_and_hold(plan, market.series, horizon, config.execution);

    BacktestResult result;
    result.name = config.name;
    result.equity_curve = run.portfolio.equity_curve();
    result.fills = std::move(run.fills);
    result.warnings = run.portfolio.warnings();
    result.metrics = compute_report(result.equity_curve, config.metrics, config.execution.initial_capital);
    if (config.alpha_vs_benchmark) {
        result.metrics.alpha = Metric::of(0.0);
    }
    result.config_echo = to_json(config);
    return result;
}

BacktestResult run_backtest(const BacktestConfig& config, const MarketData& market,
                            std::span<const ArticleAssetScore> scores) {
    if (config.strategy == StrategyKind::BuyAndHold) {
        return run_benchmark(config, market);
    }
    config.validate();
    auto universe = resolve_universe(config, market.series);
    TradingCalendar horizon = market.calendar.between(config.start_date, config.end_date);
    MarketClock clock(config.market.timezone, config.market.open);
    Timestamp first_start = config.market.backtest_start.value_or(clock.local_midnight(config.start_date));
    auto windows = build_day_windows(horizon, clock, first_start);
    SentimentIndex index(scores);

    BacktestResult result;
    result.name = config.name;
    result.signals.reserve(windows.size() * universe.size());
    result.sentiment.reserve(windows.size() * universe.size());

    Portfolio portfolio(config.execution.initial_capital);
    for (const auto& window : windows) {
        std::map<std::string, Signal> signals;
        for (const auto& asset : universe) {
            DailyAssetSentiment s = index.aggregate(asset, window);
            Signal signal = classify(s, config.thresholds);
            signals.emplace(asset, signal);
            result.signals.push_back(SignalRecord{window.trading_date, asset, s.score, s.article_count, signal,
                                                  window.start, window.end, s.latest_article});
            result.sentiment.push_back(std::move(s));
        }
        OrderLists lists = build_order_lists(window.trading_date, signals, config.no_data_policy);
        auto fills = portfolio.execute_day(lists, market.series, config.execution);
        result.fills.insert(result.fills.end(), std::make_move_iterator(fills.begin()),
                            std::make_move_iterator(fills.end()));
        portfolio.mark_to_market(window.trading_date, market.series);
    }
    std::stable_sort(result.sentiment.begin(), result.sentiment.end(),
                     [](const DailyAssetSentiment& a, const DailyAssetSentiment& b) {
                         return std::tie(a.asset_id, a.trading_date) < std::tie(b.asset_id, b.trading_date);
                     });

    result.equity_curve = portfolio.equity_curve();
    result.warnings = portfolio.warnings();
    result.metrics = compute_report(result.equity_curve, config.metrics, config.execution.initial_capital);
    if (config.alpha_vs_benchmark) {
        BacktestConfig bench_config = config;
        bench_config.strategy = StrategyKind::BuyAndHold;
        bench_config.alpha_vs_benchmark = false;
        attach_benchmark_alpha(result, run_benchmark(bench_config, market));
    }
    result.config_echo = to_json(config);
    return result;
}

namespace {

std::string signals_csv(std::span<const SignalRecord> records) {
    std::ostringstream out;
    out << "date,asset_id,score_0_100,article_count,signal,window_start,window_end,latest_article\n";
    for (const auto& r : records) {
        out << format_date(r.trading_date) << ',' << csv_field(r.asset_id) << ','
            << (r.score ? format_double(*r.score) : std::string()) << ',' << r.article_count << ','
            << to_string(r.signal) << ',' << format_timestamp(r.window_start) << ','
            << format_timestamp(r.window_end) << ','
            << (r.latest_article ? format_timestamp(*r.latest_article) : std::string()) << '\n';
    }
    return out.str();
}

}  // namespace

void write_result_directory(const BacktestResult& result, const fs::path& out) {
    const fs::path staging = begin_staging(out);
    write_text_file(staging / "config.json", result.config_echo.dump(2) + "\n");
    {
        std::ostringstream s;
        write_equity_csv(s, result.equity_curve);
        write_text_file(staging / "equity.csv", s.str());
    }
    {
        std::ostringstream s;
        write_fills_csv(s, result.fills);
        write_text_file(staging / "fills.csv", s.str());
    }
    write_text_file(staging / "signals.csv", signals_csv(result.signals));
    {
        std::ostringstream s;
        write_sentiment_csv(s, result.sentiment);
        write_text_file(staging / "sentiment.csv", s.str());
    }
    nlohmann::ordered_json metrics;
    metrics["name"] = result.name;
    auto report = to_json(result.metrics);
    metrics["metrics"] = report["metrics"];
    metrics["conventions"] = report["conventions"];
    write_text_file(staging / "metrics.json", metrics.dump(2) + "\n");

    publish_staging(staging, out);
}

ComparisonResult run_comparison(std::span<const VariantInput> variants, const MarketData& market,
                                std::optional<std::string> benchmark_name) {
    if (variants.size() < 2) {
        throw ConfigError("comparison needs at least two variants");
    }
    std::set<std::string> names;
    const auto& first = variants.front().config;
    const auto first_universe = resolve_universe(first, market.series);
    for (const auto& v : variants) {
        if (!names.insert(v.config.name).second) {
            throw ConfigError("duplicate variant name '" + v.config.name + "'");
        }
        if (v.config.start_date != first.start_date || v.config.end_date != first.end_date) {
            throw ContractError("variant '" + v.config.name + "' uses a different horizon than '" + first.name + "'");
        }
        if (resolve_universe(v.config, market.series) != first_universe) {
            throw ContractError("variant '" + v.config.name + "' uses a different universe than '" + first.name + "'");
        }
    }

    ComparisonResult comparison;
    if (benchmark_name) {
        if (!names.contains(*benchmark_name)) {
            throw ConfigError("benchmark variant '" + *benchmark_name + "' not found");
        }
        comparison.benchmark = benchmark_name;
    } else {
        for (const auto& v : variants) {
            if (v.config.strategy == StrategyKind::BuyAndHold) {
                if (comparison.benchmark) {
                    throw ConfigError("several Buy&Hold variants; name the benchmark explicitly");
                }
                comparison.benchmark = v.config.name;
            }
        }
    }

    std::vector<std::future<BacktestResult>> pending;
    pending.reserve(variants.size());
    for (const auto& v : variants) {
        pending.push_back(std::async(std::launch::async, [&market, v] {
            BacktestConfig config = v.config;
            config.alpha_vs_benchmark = false;
            return run_backtest(config, market, v.scores);
        }));
    }
    for (auto& f : pending) {
        comparison.results.push_back(f.get());
    }
    std::sort(comparison.results.begin(), comparison.results.end(),
              [](const BacktestResult& a, const BacktestResult& b) { return a.name < b.name; });

    if (comparison.benchmark) {
        auto bench = std::find_if(comparison.results.begin(), comparison.results.end(),
                                  [&](const BacktestResult& r) { return r.name == *comparison.benchmark; });
        const BacktestResult benchmark = *bench;
        for (auto& r : comparison.results) {
            attach_benchmark_alpha(r, benchmark);
        }
    }
    return comparison;
}

SweepRow sweep_point(const BacktestConfig& config, const MarketData& market,
                     std::span<const ArticleAssetScore> scores, const Thresholds& thresholds) {
    BacktestConfig c = config;
    c.thresholds = thresholds;
    BacktestResult result = run_backtest(c, market, scores);
    return SweepRow{thresholds, result.fills.size(), std::move(result.metrics)};
}

std::vector<SweepRow> threshold_sweep(const BacktestConfig& config, const MarketData& market,
                                      std::span<const ArticleAssetScore> scores,
                                      std::span<const Thresholds> thresholds) {
    if (thresholds.empty()) {
        throw ConfigError("threshold sweep needs at least one (sell, buy) pair");
    }
    std::vector<SweepRow> rows;
    rows.reserve(thresholds.size());
    for (const auto& t : thresholds) {
        rows.push_back(sweep_point(config, market, scores, t));
    }
    return rows;
}

}  // namespace sentibt
