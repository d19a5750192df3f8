#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentibt/aggregation.hpp"
#include "sentibt/execution.hpp"
#include "sentibt/metrics.hpp"
#include "sentibt/strategy.hpp"

namespace sentibt {

enum class StrategyKind { Sentiment, BuyAndHold };
enum class ScorerKind { Precomputed, Lexicon };

std::string_view to_string(StrategyKind kind);
std::string_view to_string(ScorerKind kind);

struct MarketSession {
    std::string timezone = std::string(kDefaultMarketTimezone);
    LocalTime open{9, 30};
    // Start of the first aggregation window. Defaults to local midnight of start_date.
    std::optional<Timestamp> backtest_start;
};

struct BacktestConfig {
    std::string name = "sentiment";
    StrategyKind strategy = StrategyKind::Sentiment;
    Date start_date{};
    Date end_date{};
    std::vector<std::string> universe;  // empty means every asset in the price data
    Thresholds thresholds;
    NoDataPolicy no_data_policy = NoDataPolicy::Hold;
    ExecutionConfig execution;
    ScorerKind scorer = ScorerKind::Precomputed;
    BenchmarkMode benchmark_mode = BenchmarkMode::EqualValue;
    MetricsSettings metrics;
    MarketSession market;
    std::uint64_t seed = 0;
    // Run Buy&Hold on the same inputs and report alpha against it.
    bool alpha_vs_benchmark = true;

    // Throws ConfigError.
    void validate() const;
};

nlohmann::ordered_json to_json(const BacktestConfig& config);

struct SignalRecord {
    Date trading_date{};
    std::string asset_id;
    std::optional<double> score;
    std::size_t article_count = 0;
    Signal signal = Signal::NoData;
    Timestamp window_start{};
    Timestamp window_end{};
    std::optional<Timestamp> latest_article;
};

struct BacktestResult {
    std::string name;
    EquityCurve equity_curve;
    std::vector<Fill> fills;
    std::vector<SignalRecord> signals;             // (date, asset) order
    std::vector<DailyAssetSentiment> sentiment;    // (asset, date) order
    MetricsReport metrics;
    nlohmann::ordered_json config_echo;
    std::vector<std::string> warnings;
};

// Resolves the configured universe against the price data (sorted, unique).
std::vector<std::string> resolve_universe(const BacktestConfig& config, const PriceSeries& prices);

// Daily loop over the horizon: aggregate the open-to-open window, classify, execute
// at the open, mark at the close. Open positions are marked, not liquidated, at the end.
BacktestResult run_backtest(const BacktestConfig& config, const MarketData& market,
                            std::span<const ArticleAssetScore> scores);

// Buy&Hold over the same horizon and universe.
BacktestResult run_benchmark(const BacktestConfig& config, const MarketData& market);

// Writes config.json, equity.csv, fills.csv, signals.csv, sentiment.csv and
// metrics.json into `out`, replacing any previous directory by rename.
void write_result_directory(const BacktestResult& result, const std::filesystem::path& out);

struct VariantInput {
    BacktestConfig config;
    std::span<const ArticleAssetScore> scores;
};

struct ComparisonResult {
    std::vector<BacktestResult> results;  // sorted by variant name
    std::optional<std::string> benchmark;
};

// Runs every variant concurrently. Alpha is taken against the variant named
// `benchmark_name`, or the single Buy&Hold variant when no name is given; with no
// benchmark, alpha stays undefined. Variants must share horizon and universe.
ComparisonResult run_comparison(std::span<const VariantInput> variants, const MarketData& market,
                                std::optional<std::string> benchmark_name = std::nullopt);

struct SweepRow {
    Thresholds thresholds;
    std::size_t fill_count = 0;
    MetricsReport metrics;
};

SweepRow sweep_point(const BacktestConfig& config, const MarketData& market,
                     std::span<const ArticleAssetScore> scores, const Thresholds& thresholds);
std::vector<SweepRow> threshold_sweep(const BacktestConfig& config, const MarketData& market,
                                      std::span<const ArticleAssetScore> scores,
                                      std::span<const Thresholds> thresholds);

}  // namespace sentibt
