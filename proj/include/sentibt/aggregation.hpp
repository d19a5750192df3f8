#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentibt/marketdata.hpp"
#include "sentibt/newsfeed.hpp"
#include "sentibt/time.hpp"

namespace sentibt {

// Open-to-open interval [start, end) shared by every asset on one trading day.
struct DayWindow {
    Date trading_date{};
    Timestamp start{};
    Timestamp end{};
};

struct AggregationWindow {
    std::string asset_id;
    Timestamp start{};
    Timestamp end{};
    Date trading_date{};
};

// Each window runs from the previous trading day's open to this day's open, so
// weekend and holiday hours fold into the next session. The first window starts
// at `first_window_start`, which must precede the first open (ConfigError otherwise).
std::vector<DayWindow> build_day_windows(const TradingCalendar& calendar, const MarketClock& clock,
                                         Timestamp first_window_start);

// Per-(asset, day) windows ordered by (asset_id, trading_date).
std::vector<AggregationWindow> build_windows(const TradingCalendar& calendar, const MarketClock& clock,
                                             Timestamp first_window_start,
                                             std::span<const std::string> universe);

struct DailyAssetSentiment {
    std::string asset_id;
    Date trading_date{};
    std::optional<double> score;  // [0, 100]; empty when no article fell in the window
    std::size_t article_count = 0;
    std::optional<Timestamp> latest_article;  // audit only
};

// Affine map of a mean in [-1, 1] onto [0, 100].
inline double to_sentiment_scale(double mean) { return (mean + 1.0) * 50.0; }

// Scores must all belong to window.asset_id (ContractError otherwise).
DailyAssetSentiment aggregate(std::span<const ArticleAssetScore> scores, const AggregationWindow& window);

// Per-asset timestamp index so each daily window is a pair of binary searches.
class SentimentIndex {
public:
    explicit SentimentIndex(std::span<const ArticleAssetScore> scores);

    DailyAssetSentiment aggregate(std::string_view asset_id, const DayWindow& window) const;
    std::size_t count(std::string_view asset_id) const;

private:
    std::map<std::string, std::vector<std::pair<Timestamp, double>>, std::less<>> by_asset_;
};

inline constexpr std::string_view kSentimentCsvHeader = "asset_id,trading_date,score_0_100,article_count";

void write_sentiment_csv(std::ostream& out, std::span<const DailyAssetSentiment> rows);

}  // namespace sentibt
