#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include <absl/time/time.h>

namespace sentibt {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

std::optional<Date> try_parse_date(std::string_view text);
// Throws ValidationError on malformed input.
Date parse_date(std::string_view text);
std::string format_date(Date date);

// Accepts RFC 3339 / ISO-8601 with an explicit offset or 'Z'. Sub-second digits are truncated.
std::optional<Timestamp> try_parse_timestamp(std::string_view text);
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct LocalTime {
    int hour = 9;
    int minute = 30;

    friend bool operator==(const LocalTime&, const LocalTime&) = default;
};

std::optional<LocalTime> try_parse_local_time(std::string_view text);
std::string format_local_time(LocalTime t);

inline constexpr std::string_view kDefaultMarketTimezone = "America/New_York";
inline constexpr std::string_view kTimezoneEnvVar = "SENTIBT_DEFAULT_TZ";

// SENTIBT_DEFAULT_TZ when set and non-empty, else America/New_York.
std::string default_market_timezone();

// Converts trading dates to the UTC instant of the market open in the exchange's zone.
class MarketClock {
public:
    MarketClock();
    // Throws ConfigError for an unknown zone name.
    MarketClock(const std::string& timezone, LocalTime open);

    Timestamp open_at(Date date) const;
    Timestamp local_midnight(Date date) const;
    // Local calendar date of an instant.
    Date local_date(Timestamp ts) const;

    const std::string& timezone_name() const noexcept { return name_; }
    LocalTime open_time() const noexcept { return open_; }

private:
    std::string name_;
    LocalTime open_;
    absl::TimeZone zone_;
};

}  // namespace sentibt
