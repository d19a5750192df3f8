#include "sentibt/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sentibt/errors.hpp"

namespace sentibt {

Thresholds::Thresholds(double sell_signal, double buy_signal) : sell_(sell_signal), buy_(buy_signal) {
    if (!(std::isfinite(sell_signal) && std::isfinite(buy_signal) && 0.0 <= sell_signal &&
          sell_signal < buy_signal && buy_signal <= 100.0)) {
        throw ConfigError("thresholds need 0 <= sell < buy <= 100 (got sell=" + std::to_string(sell_signal) +
                          ", buy=" + std::to_string(buy_signal) + ")");
    }
}

std::string_view to_string(Signal signal) {
    switch (signal) {
        case Signal::Buy:
            return "Buy";
        case Signal::Neutral:
            return "Neutral";
        case Signal::Sell:
            return "Sell";
        case Signal::NoData:
            return "NoData";
    }
    return "NoData";
}

std::string_view to_string(NoDataPolicy policy) { return policy == NoDataPolicy::Hold ? "hold" : "neutral"; }

NoDataPolicy parse_no_data_policy(std::string_view text) {
    if (text == "hold") {
        return NoDataPolicy::Hold;
    }
    if (text == "neutral") {
        return NoDataPolicy::Neutral;
    }
    throw ConfigError("no_data_policy must be 'hold' or 'neutral', got '" + std::string(text) + "'");
}

Signal classify(std::optional<double> score, const Thresholds& thresholds) {
    if (!score) {
        return Signal::NoData;
    }
    if (*score > thresholds.buy()) {
        return Signal::Buy;
    }
    if (*score < thresholds.sell()) {
        return Signal::Sell;
    }
    return Signal::Neutral;
}

Signal classify(const DailyAssetSentiment& sentiment, const Thresholds& thresholds) {
    return classify(sentiment.score, thresholds);
}

OrderLists build_order_lists(Date trading_date, const std::map<std::string, Signal>& signals, NoDataPolicy policy) {
    OrderLists lists{trading_date, {}, {}, {}};
    for (const auto& [asset, signal] : signals) {
        switch (signal) {
            case Signal::Buy:
                lists.buy.push_back(asset);
                break;
            case Signal::Neutral:
                lists.neutral.push_back(asset);
                break;
            case Signal::Sell:
                lists.sell.push_back(asset);
                break;
            case Signal::NoData:
                if (policy == NoDataPolicy::Neutral) {
                    lists.neutral.push_back(asset);
                }
                break;
        }
    }
    return lists;
}

std::string_view to_string(BenchmarkMode mode) {
    return mode == BenchmarkMode::EqualValue ? "equal_value" : "equal_shares";
}

BenchmarkMode parse_benchmark_mode(std::string_view text) {
    if (text == "equal_value") {
        return BenchmarkMode::EqualValue;
    }
    if (text == "equal_shares") {
        return BenchmarkMode::EqualShares;
    }
    throw ConfigError("benchmark_mode must be 'equal_value' or 'equal_shares', got '" + std::string(text) + "'");
}

BenchmarkPlan benchmark_plan(std::span<const std::string> universe, double capital, BenchmarkMode mode,
                             const PriceSeries& prices, const TradingCalendar& calendar, bool fractional_shares) {
    if (!(capital > 0.0)) {
        throw ConfigError("benchmark capital must be > 0");
    }
    if (universe.empty()) {
        throw ConfigError("benchmark universe is empty");
    }
    if (calendar.size() < 2) {
        throw ConfigError("benchmark needs at least two trading days");
    }
    BenchmarkPlan plan{calendar.front(), calendar.back(), mode, {}};

    std::vector<std::string> assets(universe.begin(), universe.end());
    std::sort(assets.begin(), assets.end());
    std::vector<double> opens;
    for (const auto& asset : assets) {
        const PriceBar* bar = prices.find(asset, plan.entry_date);
        if (bar == nullptr) {
            throw ConfigError("benchmark: no opening price for " + asset + " on " + format_date(plan.entry_date));
        }
        opens.push_back(bar->open);
    }

    double shares_each = 0.0;
    if (mode == BenchmarkMode::EqualShares) {
        shares_each = capital / std::accumulate(opens.begin(), opens.end(), 0.0);
        if (!fractional_shares) {
            shares_each = std::floor(shares_each);
        }
    }
    double per_asset = capital / static_cast<double>(assets.size());
    for (std::size_t i = 0; i < assets.size(); ++i) {
        double qty = mode == BenchmarkMode::EqualValue ? per_asset / opens[i] : shares_each;
        if (!fractional_shares) {
            qty = std::floor(qty);
        }
        double notional = mode == BenchmarkMode::EqualValue && fractional_shares ? per_asset : qty * opens[i];
        plan.entries.push_back(BenchmarkOrder{assets[i], qty, opens[i], notional});
    }
    return plan;
}

}  // namespace sentibt
