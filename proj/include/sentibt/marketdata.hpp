#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentibt/time.hpp"

namespace sentibt {

struct PriceBar {
    std::string asset_id;
    Date date{};
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

// Throws ValidationError naming asset and date when the OHLC invariants do not hold.
void validate(const PriceBar& bar);

class TradingCalendar {
public:
    // Dates must be non-empty and strictly ascending.
    explicit TradingCalendar(std::vector<Date> dates);

    std::span<const Date> dates() const noexcept { return dates_; }
    std::size_t size() const noexcept { return dates_.size(); }
    Date front() const { return dates_.front(); }
    Date back() const { return dates_.back(); }
    bool contains(Date date) const;
    std::optional<std::size_t> index_of(Date date) const;

    // Throws NoPredecessorError for the first entry, ValidationError for a non-trading day.
    Date previous_trading_day(Date date) const;

    // Sub-calendar of dates in [first, last]. Throws ConfigError if empty.
    TradingCalendar between(Date first, Date last) const;

    friend bool operator==(const TradingCalendar&, const TradingCalendar&) = default;

private:
    std::vector<Date> dates_;
};

class PriceSeries {
public:
    using AssetBars = std::map<Date, PriceBar>;

    // Validates the bar; a second bar for the same (asset, date) is a DuplicateRecordError.
    void insert(PriceBar bar);

    const PriceBar* find(std::string_view asset, Date date) const;
    // Throws DataGapError when the bar is missing.
    double open_price(std::string_view asset, Date date) const;
    double close_price(std::string_view asset, Date date) const;

    bool has_asset(std::string_view asset) const;
    std::vector<std::string> assets() const;
    const AssetBars& bars(std::string_view asset) const;
    std::size_t bar_count() const noexcept { return bar_count_; }
    // Sorted union of all bar dates.
    std::vector<Date> dates() const;

private:
    std::map<std::string, AssetBars, std::less<>> bars_;
    std::size_t bar_count_ = 0;
};

struct MarketData {
    PriceSeries series;
    TradingCalendar calendar;
};

inline constexpr std::string_view kPriceCsvHeader = "asset_id,date,open,high,low,close,volume";

MarketData parse_prices(std::istream& in, const std::string& source_name);
MarketData load_prices(const std::filesystem::path& path);
void write_prices(std::ostream& out, const PriceSeries& series);

}  // namespace sentibt
