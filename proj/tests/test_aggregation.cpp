#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sentibt/aggregation.hpp"
#include "sentibt/errors.hpp"
#include "support.hpp"

using namespace sentibt;
using sentibt::testing::score_at;
using sentibt::testing::ymd;

namespace {

AggregationWindow window_for(const std::string& asset) {
    return AggregationWindow{asset, parse_timestamp("2020-01-02T14:30:00Z"), parse_timestamp("2020-01-03T14:30:00Z"),
                             ymd(2020, 1, 3)};
}

std::vector<ArticleAssetScore> scores_inside(const std::vector<double>& values) {
    std::vector<ArticleAssetScore> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back(score_at("n" + std::to_string(i), "AAA", "2020-01-02T20:00:00Z", values[i]));
    }
    return out;
}

}  // namespace

TEST(Windows, AdjacentDays) {
    MarketClock clock("America/New_York", LocalTime{9, 30});
    TradingCalendar cal({ymd(2020, 1, 6), ymd(2020, 1, 7)});
    auto w = build_day_windows(cal, clock, parse_timestamp("2020-01-06T05:00:00Z"));
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w[1].start, parse_timestamp("2020-01-06T14:30:00Z"));
    EXPECT_EQ(w[1].end, parse_timestamp("2020-01-07T14:30:00Z"));
}

TEST(Windows, WeekendFoldsIntoMonday) {
    MarketClock clock("America/New_York", LocalTime{9, 30});
    TradingCalendar cal({ymd(2020, 1, 3), ymd(2020, 1, 6)});
    auto w = build_day_windows(cal, clock, parse_timestamp("2020-01-03T05:00:00Z"));
    EXPECT_EQ(w[1].start, clock.open_at(ymd(2020, 1, 3)));
    EXPECT_EQ(w[1].end, clock.open_at(ymd(2020, 1, 6)));
}

TEST(Windows, FirstDayUsesConfiguredStart) {
    MarketClock clock("America/New_York", LocalTime{9, 30});
    TradingCalendar cal({ymd(2020, 1, 2), ymd(2020, 1, 3)});
    auto start = parse_timestamp("2020-01-01T00:00:00-05:00");
    auto w = build_day_windows(cal, clock, start);
    EXPECT_EQ(w[0].start, start);
    EXPECT_EQ(w[0].end, clock.open_at(ymd(2020, 1, 2)));
    EXPECT_THROW(build_day_windows(cal, clock, clock.open_at(ymd(2020, 1, 2))), ConfigError);
}

TEST(Windows, ContiguousAndPerAsset) {
    MarketClock clock;
    TradingCalendar cal(sentibt::testing::weekdays(ymd(2020, 3, 2), 30));
    std::vector<std::string> universe = {"B", "A"};
    auto w = build_windows(cal, clock, clock.local_midnight(cal.front()), universe);
    ASSERT_EQ(w.size(), 60u);
    EXPECT_EQ(w.front().asset_id, "A");
    for (std::size_t i = 1; i < 30; ++i) {
        EXPECT_EQ(w[i].start, w[i - 1].end);
        EXPECT_LT(w[i].start, w[i].end);
    }
}

TEST(Aggregate, Endpoints) {
    EXPECT_EQ(aggregate(scores_inside({-1, -1}), window_for("AAA")).score, 0.0);
    EXPECT_EQ(aggregate(scores_inside({0}), window_for("AAA")).score, 50.0);
    EXPECT_EQ(aggregate(scores_inside({1, 1}), window_for("AAA")).score, 100.0);
    EXPECT_NEAR(*aggregate(scores_inside({1, 1, 0}), window_for("AAA")).score, 250.0 / 3.0, 1e-12);
}

TEST(Aggregate, EmptyWindowIsAbsent) {
    auto s = aggregate({}, window_for("AAA"));
    EXPECT_FALSE(s.score);
    EXPECT_EQ(s.article_count, 0u);
}

TEST(Aggregate, WindowBoundsHalfOpen) {
    std::vector<ArticleAssetScore> s = {
        score_at("early", "AAA", "2020-01-02T14:29:59Z", -1.0),
        score_at("start", "AAA", "2020-01-02T14:30:00Z", 1.0),
        score_at("end", "AAA", "2020-01-03T14:30:00Z", -1.0),
    };
    auto d = aggregate(s, window_for("AAA"));
    EXPECT_EQ(d.article_count, 1u);
    EXPECT_EQ(d.score, 100.0);
    EXPECT_EQ(d.latest_article, parse_timestamp("2020-01-02T14:30:00Z"));
}

TEST(Aggregate, AssetMismatchIsContractError) {
    EXPECT_THROW(aggregate(scores_inside({0.5}), window_for("BBB")), ContractError);
}

TEST(Aggregate, PermutationInvariantAndMonotone) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> v(1 + rng() % 12);
        for (auto& x : v) {
            x = u(rng);
        }
        double base = *aggregate(scores_inside(v), window_for("AAA")).score;
        EXPECT_GE(base, 0.0);
        EXPECT_LE(base, 100.0);

        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        ASSERT_EQ(*aggregate(scores_inside(shuffled), window_for("AAA")).score, base);

        auto raised = v;
        std::size_t i = rng() % raised.size();
        raised[i] = std::uniform_real_distribution<double>(raised[i], 1.0)(rng);
        ASSERT_GE(*aggregate(scores_inside(raised), window_for("AAA")).score, base);
    }
}

TEST(SentimentIndex, MatchesDirectAggregation) {
    std::mt19937_64 rng(23);
    MarketClock clock;
    TradingCalendar cal(sentibt::testing::weekdays(ymd(2020, 1, 2), 20));
    auto first = clock.local_midnight(cal.front());
    std::vector<ArticleAssetScore> scores;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        auto ts = first + std::chrono::seconds(rng() % (30LL * 86400));
        scores.push_back(ArticleAssetScore{"n" + std::to_string(i), (rng() % 2) ? "A" : "B", ts, u(rng)});
    }
    sort_scores(scores);
    SentimentIndex index(scores);
    std::vector<std::string> universe = {"A", "B"};
    for (const auto& w : build_windows(cal, clock, first, universe)) {
        std::vector<ArticleAssetScore> mine;
        std::copy_if(scores.begin(), scores.end(), std::back_inserter(mine),
                     [&](const ArticleAssetScore& s) { return s.asset_id == w.asset_id; });
        auto direct = aggregate(mine, w);
        auto fast = index.aggregate(w.asset_id, DayWindow{w.trading_date, w.start, w.end});
        EXPECT_EQ(direct.score, fast.score);
        EXPECT_EQ(direct.article_count, fast.article_count);
    }
}
