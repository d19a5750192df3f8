#include "sentibt/aggregation.hpp"

#include <algorithm>
#include <ostream>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"
#include "sentibt/numeric.hpp"

namespace sentibt {

std::vector<DayWindow> build_day_windows(const TradingCalendar& calendar, const MarketClock& clock,
                                         Timestamp first_window_start) {
    std::vector<DayWindow> windows;
    windows.reserve(calendar.size());
    Timestamp start = first_window_start;
    for (Date day : calendar.dates()) {
        Timestamp end = clock.open_at(day);
        if (!(start < end)) {
            throw ConfigError("aggregation window for " + format_date(day) + " is empty: start " +
                              format_timestamp(start) + " is not before the open " + format_timestamp(end));
        }
        windows.push_back(DayWindow{day, start, end});
        start = end;
    }
    return windows;
}

std::vector<AggregationWindow> build_windows(const TradingCalendar& calendar, const MarketClock& clock,
                                             Timestamp first_window_start, std::span<const std::string> universe) {
    auto days = build_day_windows(calendar, clock, first_window_start);
    std::vector<std::string> assets(universe.begin(), universe.end());
    std::sort(assets.begin(), assets.end());
    assets.erase(std::unique(assets.begin(), assets.end()), assets.end());
    std::vector<AggregationWindow> out;
    out.reserve(assets.size() * days.size());
    for (const auto& asset : assets) {
        for (const auto& d : days) {
            out.push_back(AggregationWindow{asset, d.start, d.end, d.trading_date});
        }
    }
    return out;
}

namespace {

DailyAssetSentiment summarize(std::string asset_id, Date day, std::vector<double> values,
                              std::optional<Timestamp> latest) {
    DailyAssetSentiment out{std::move(asset_id), day, std::nullopt, values.size(), latest};
    if (!values.empty()) {
        double mean = std::clamp(order_invariant_mean(std::move(values)), -1.0, 1.0);
        out.score = to_sentiment_scale(mean);
    }
    return out;
}

}  // namespace

DailyAssetSentiment aggregate(std::span<const ArticleAssetScore> scores, const AggregationWindow& window) {
    std::vector<double> values;
    std::optional<Timestamp> latest;
    for (const auto& s : scores) {
        if (s.asset_id != window.asset_id) {
            throw ContractError("score for " + s.asset_id + " passed to the " + window.asset_id + " window");
        }
        if (window.start <= s.timestamp && s.timestamp < window.end) {
            values.push_back(s.score);
            if (!latest || *latest < s.timestamp) {
                latest = s.timestamp;
            }
        }
    }
    return summarize(window.asset_id, window.trading_date, std::move(values), latest);
}

SentimentIndex::SentimentIndex(std::span<const ArticleAssetScore> scores) {
    for (const auto& s : scores) {
        auto it = by_asset_.find(s.asset_id);
        if (it == by_asset_.end()) {
            it = by_asset_.emplace(s.asset_id, std::vector<std::pair<Timestamp, double>>{}).first;
        }
        it->second.emplace_back(s.timestamp, s.score);
    }
    for (auto& [_, entries] : by_asset_) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }
}

DailyAssetSentiment SentimentIndex::aggregate(std::string_view asset_id, const DayWindow& window) const {
    std::vector<double> values;
    std::optional<Timestamp> latest;
    if (auto it = by_asset_.find(asset_id); it != by_asset_.end()) {
        const auto& entries = it->second;
        auto by_time = [](const std::pair<Timestamp, double>& e, Timestamp t) { return e.first < t; };
        auto lo = std::lower_bound(entries.begin(), entries.end(), window.start, by_time);
        auto hi = std::lower_bound(lo, entries.end(), window.end, by_time);
        values.reserve(static_cast<std::size_t>(hi - lo));
        for (auto e = lo; e != hi; ++e) {
            values.push_back(e->second);
        }
        if (lo != hi) {
            latest = std::prev(hi)->first;
        }
    }
    return summarize(std::string(asset_id), window.trading_date, std::move(values), latest);
}

std::size_t SentimentIndex::count(std::string_view asset_id) const {
    auto it = by_asset_.find(asset_id);
    return it == by_asset_.end() ? 0 : it->second.size();
}

void write_sentiment_csv(std::ostream& out, std::span<const DailyAssetSentiment> rows) {
    out << kSentimentCsvHeader << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.asset_id) << ',' << format_date(r.trading_date) << ','
            << (r.score ? format_double(*r.score) : std::string()) << ',' << r.article_count << '\n';
    }
}

}  // namespace sentibt
