#include "sentibt/marketdata.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

void validate(const PriceBar& bar) {
    auto fail = [&](const std::string& what) {
        throw ValidationError(bar.asset_id + " " + format_date(bar.date) + ": " + what);
    };
    if (bar.asset_id.empty()) {
        throw ValidationError("empty asset_id on " + format_date(bar.date));
    }
    if (!(bar.open > 0.0)) {
        fail("open must be > 0");
    }
    if (!(bar.low <= bar.open && bar.open <= bar.high)) {
        fail("open outside [low, high]");
    }
    if (!(bar.low <= bar.close && bar.close <= bar.high)) {
        fail("close outside [low, high]");
    }
    if (!(bar.volume >= 0.0)) {
        fail("negative volume");
    }
}

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
    if (dates_.empty()) {
        throw ValidationError("trading calendar is empty");
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw ValidationError("trading calendar not strictly ascending at " + format_date(dates_[i]));
        }
    }
}

bool TradingCalendar::contains(Date date) const { return std::binary_search(dates_.begin(), dates_.end(), date); }

std::optional<std::size_t> TradingCalendar::index_of(Date date) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), date);
    if (it == dates_.end() || *it != date) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - dates_.begin());
}

Date TradingCalendar::previous_trading_day(Date date) const {
    auto idx = index_of(date);
    if (!idx) {
        throw ValidationError(format_date(date) + " is not a trading day");
    }
    if (*idx == 0) {
        throw NoPredecessorError(format_date(date) + " is the first trading day");
    }
    return dates_[*idx - 1];
}

TradingCalendar TradingCalendar::between(Date first, Date last) const {
    auto lo = std::lower_bound(dates_.begin(), dates_.end(), first);
    auto hi = std::upper_bound(dates_.begin(), dates_.end(), last);
    if (lo >= hi) {
        throw ConfigError("no trading days between " + format_date(first) + " and " + format_date(last));
    }
    return TradingCalendar(std::vector<Date>(lo, hi));
}

void PriceSeries::insert(PriceBar bar) {
    validate(bar);
    auto& asset = bars_[bar.asset_id];
    if (asset.contains(bar.date)) {
        throw DuplicateRecordError("duplicate bar for " + bar.asset_id + " on " + format_date(bar.date));
    }
    Date d = bar.date;
    asset.emplace(d, std::move(bar));
    ++bar_count_;
}

const PriceBar* PriceSeries::find(std::string_view asset, Date date) const {
    auto a = bars_.find(asset);
    if (a == bars_.end()) {
        return nullptr;
    }
    auto b = a->second.find(date);
    return b == a->second.end() ? nullptr : &b->second;
}

double PriceSeries::open_price(std::string_view asset, Date date) const {
    if (const PriceBar* bar = find(asset, date)) {
        return bar->open;
    }
    throw DataGapError(std::string(asset), format_date(date));
}

double PriceSeries::close_price(std::string_view asset, Date date) const {
    if (const PriceBar* bar = find(asset, date)) {
        return bar->close;
    }
    throw DataGapError(std::string(asset), format_date(date));
}

bool PriceSeries::has_asset(std::string_view asset) const { return bars_.find(asset) != bars_.end(); }

std::vector<std::string> PriceSeries::assets() const {
    std::vector<std::string> out;
    out.reserve(bars_.size());
    for (const auto& [id, _] : bars_) {
        out.push_back(id);
    }
    return out;
}

const PriceSeries::AssetBars& PriceSeries::bars(std::string_view asset) const {
    auto it = bars_.find(asset);
    if (it == bars_.end()) {
        throw DataError("unknown asset " + std::string(asset));
    }
    return it->second;
}

std::vector<Date> PriceSeries::dates() const {
    std::set<Date> all;
    for (const auto& [_, bars] : bars_) {
        for (const auto& [d, __] : bars) {
            all.insert(d);
        }
    }
    return {all.begin(), all.end()};
}

MarketData parse_prices(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    reader.expect_header({"asset_id", "date", "open", "high", "low", "close", "volume"});
    PriceSeries series;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 7) {
            throw ParseError(source_name, reader.line(), "expected 7 fields, got " + std::to_string(f.size()));
        }
        PriceBar bar;
        bar.asset_id = f[0];
        auto date = try_parse_date(f[1]);
        if (!date) {
            throw ParseError(source_name, reader.line(), "invalid date '" + f[1] + "'");
        }
        bar.date = *date;
        double* targets[] = {&bar.open, &bar.high, &bar.low, &bar.close, &bar.volume};
        for (std::size_t i = 0; i < 5; ++i) {
            if (!parse_double(f[i + 2], *targets[i])) {
                throw ParseError(source_name, reader.line(), "invalid number '" + f[i + 2] + "'");
            }
        }
        series.insert(std::move(bar));
    }
    auto dates = series.dates();
    if (dates.empty()) {
        throw ValidationError(source_name + ": no price rows");
    }
    TradingCalendar calendar(std::move(dates));
    return MarketData{std::move(series), std::move(calendar)};
}

MarketData load_prices(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_prices(in, path.string());
}

void write_prices(std::ostream& out, const PriceSeries& series) {
    out << kPriceCsvHeader << '\n';
    for (const auto& asset : series.assets()) {
        for (const auto& [date, bar] : series.bars(asset)) {
            out << csv_field(bar.asset_id) << ',' << format_date(date) << ',' << format_double(bar.open) << ','
                << format_double(bar.high) << ',' << format_double(bar.low) << ',' << format_double(bar.close)
                << ',' << format_double(bar.volume) << '\n';
        }
    }
}

}  // namespace sentibt
