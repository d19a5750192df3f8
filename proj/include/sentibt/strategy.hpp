#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentibt/aggregation.hpp"
#include "sentibt/marketdata.hpp"

namespace sentibt {

class Thresholds {
public:
    Thresholds() = default;
    // Requires 0 <= sell < buy <= 100; throws ConfigError otherwise.
    Thresholds(double sell_signal, double buy_signal);

    double sell() const noexcept { return sell_; }
    double buy() const noexcept { return buy_; }

    friend bool operator==(const Thresholds&, const Thresholds&) = default;

private:
    double sell_ = 40.0;
    double buy_ = 60.0;
};

enum class Signal { Buy, Neutral, Sell, NoData };

// What to do with an asset that had no articles in its window.
enum class NoDataPolicy { Hold, Neutral };

std::string_view to_string(Signal signal);
std::string_view to_string(NoDataPolicy policy);
NoDataPolicy parse_no_data_policy(std::string_view text);

// score > buy -> Buy, score < sell -> Sell, otherwise Neutral. No score -> NoData.
Signal classify(std::optional<double> score, const Thresholds& thresholds);
Signal classify(const DailyAssetSentiment& sentiment, const Thresholds& thresholds);

struct OrderLists {
    Date trading_date{};
    std::vector<std::string> buy;
    std::vector<std::string> neutral;
    std::vector<std::string> sell;
};

// Lists come out in ascending asset order.
OrderLists build_order_lists(Date trading_date, const std::map<std::string, Signal>& signals,
                             NoDataPolicy policy);

enum class BenchmarkMode { EqualValue, EqualShares };

std::string_view to_string(BenchmarkMode mode);
BenchmarkMode parse_benchmark_mode(std::string_view text);

struct BenchmarkOrder {
    std::string asset_id;
    double quantity = 0.0;
    double price = 0.0;
    double notional = 0.0;
};

struct BenchmarkPlan {
    Date entry_date{};
    Date exit_date{};
    BenchmarkMode mode = BenchmarkMode::EqualValue;
    std::vector<BenchmarkOrder> entries;
};

// Day-one purchase of every asset that spends `capital` in total, held to the last
// calendar day. Equal-value gives each asset capital / N; equal-shares buys the same
// share count n = capital / sum(open prices). Whole shares round down when
// `fractional_shares` is false. Missing day-one opens are a ConfigError.
BenchmarkPlan benchmark_plan(std::span<const std::string> universe, double capital, BenchmarkMode mode,
                             const PriceSeries& prices, const TradingCalendar& calendar,
                             bool fractional_shares = true);

}  // namespace sentibt
