#include "sentibt/time.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

#include <absl/time/civil_time.h>

#include "sentibt/errors.hpp"

namespace sentibt {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) {
        return false;
    }
    for (char c : text) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Date> try_parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    int y = 0;
    int m = 0;
    int d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return Date{ymd};
}

Date parse_date(std::string_view text) {
    if (auto d = try_parse_date(text)) {
        return *d;
    }
    throw ValidationError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
}

std::string format_date(Date date) {
    std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Timestamp> try_parse_timestamp(std::string_view text) {
    absl::Time t;
    std::string err;
    if (!absl::ParseTime(absl::RFC3339_full, std::string(text), &t, &err)) {
        return std::nullopt;
    }
    return Timestamp{std::chrono::seconds{absl::ToUnixSeconds(t)}};
}

Timestamp parse_timestamp(std::string_view text) {
    if (auto ts = try_parse_timestamp(text)) {
        return *ts;
    }
    throw ValidationError("invalid timestamp '" + std::string(text) + "' (expected ISO-8601 with offset)");
}

std::string format_timestamp(Timestamp ts) {
    return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", absl::FromUnixSeconds(ts.time_since_epoch().count()),
                            absl::UTCTimeZone());
}

std::optional<LocalTime> try_parse_local_time(std::string_view text) {
    if (text.size() != 5 || text[2] != ':') {
        return std::nullopt;
    }
    LocalTime t;
    if (!parse_int(text.substr(0, 2), t.hour) || !parse_int(text.substr(3, 2), t.minute)) {
        return std::nullopt;
    }
    if (t.hour > 23 || t.minute > 59) {
        return std::nullopt;
    }
    return t;
}

std::string format_local_time(LocalTime t) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", t.hour, t.minute);
    return buf;
}

std::string default_market_timezone() {
    const char* env = std::getenv(std::string(kTimezoneEnvVar).c_str());
    if (env != nullptr && *env != '\0') {
        return env;
    }
    return std::string(kDefaultMarketTimezone);
}

MarketClock::MarketClock() : MarketClock(std::string(kDefaultMarketTimezone), LocalTime{}) {}

MarketClock::MarketClock(const std::string& timezone, LocalTime open) : name_(timezone), open_(open) {
    if (!absl::LoadTimeZone(timezone, &zone_)) {
        throw ConfigError("unknown timezone '" + timezone + "'");
    }
}

namespace {

absl::CivilSecond civil_at(Date date, int hour, int minute) {
    std::chrono::year_month_day ymd{date};
    return absl::CivilSecond(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                             static_cast<unsigned>(ymd.day()), hour, minute, 0);
}

}  // namespace

Timestamp MarketClock::open_at(Date date) const {
    absl::Time t = absl::FromCivil(civil_at(date, open_.hour, open_.minute), zone_);
    return Timestamp{std::chrono::seconds{absl::ToUnixSeconds(t)}};
}

Timestamp MarketClock::local_midnight(Date date) const {
    absl::Time t = absl::FromCivil(civil_at(date, 0, 0), zone_);
    return Timestamp{std::chrono::seconds{absl::ToUnixSeconds(t)}};
}

Date MarketClock::local_date(Timestamp ts) const {
    absl::CivilDay day = absl::ToCivilDay(absl::FromUnixSeconds(ts.time_since_epoch().count()), zone_);
    return Date{std::chrono::year{static_cast<int>(day.year())} / day.month() / day.day()};
}

}  // namespace sentibt
