#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sentibt/marketdata.hpp"
#include "sentibt/newsfeed.hpp"
#include "sentibt/time.hpp"

namespace sentibt::testing {

inline Date ymd(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

// `count` consecutive weekdays starting at `first` (which is moved forward off a weekend).
inline std::vector<Date> weekdays(Date first, std::size_t count) {
    std::vector<Date> out;
    Date d = first;
    while (out.size() < count) {
        std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
            out.push_back(d);
        }
        d += std::chrono::days{1};
    }
    return out;
}

using PriceFn = std::function<double(std::size_t asset, std::size_t day)>;

// Bars with open = open_fn and close = close_fn for every asset and date.
inline MarketData make_market(const std::vector<std::string>& assets, const std::vector<Date>& dates,
                              const PriceFn& open_fn, const PriceFn& close_fn) {
    PriceSeries series;
    for (std::size_t a = 0; a < assets.size(); ++a) {
        for (std::size_t d = 0; d < dates.size(); ++d) {
            double o = open_fn(a, d);
            double c = close_fn(a, d);
            series.insert(PriceBar{assets[a], dates[d], o, std::max(o, c), std::min(o, c), c, 1000.0});
        }
    }
    return MarketData{std::move(series), TradingCalendar(dates)};
}

inline MarketData flat_market(const std::vector<std::string>& assets, const std::vector<Date>& dates, double price) {
    auto f = [price](std::size_t, std::size_t) { return price; };
    return make_market(assets, dates, f, f);
}

inline ArticleAssetScore score_at(std::string article, std::string asset, std::string ts, double value) {
    return ArticleAssetScore{std::move(article), std::move(asset), parse_timestamp(ts), value};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("sentibt_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace sentibt::testing
