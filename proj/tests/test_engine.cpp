#include <gtest/gtest.h>

#include <sstream>

#include "sentibt/csv.hpp"
#include "sentibt/engine.hpp"
#include "sentibt/errors.hpp"
#include "sentibt/synthetic.hpp"
#include "support.hpp"

using namespace sentibt;
using sentibt::testing::score_at;
using sentibt::testing::ymd;

namespace {

BacktestConfig config_for(const MarketData& m) {
    BacktestConfig c;
    c.start_date = m.calendar.front();
    c.end_date = m.calendar.back();
    return c;
}

std::string read_dir(const std::filesystem::path& dir) {
    std::string all;
    for (const char* f : {"config.json", "equity.csv", "fills.csv", "signals.csv", "sentiment.csv", "metrics.json"}) {
        all += f;
        all += '\n';
        all += read_file(dir / f);
    }
    return all;
}

}  // namespace

TEST(Engine, NoArticlesMeansNoTrades) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 20);
    auto m = sentibt::testing::flat_market({"A", "B"}, dates, 50.0);
    auto c = config_for(m);
    auto r = run_backtest(c, m, {});
    EXPECT_TRUE(r.fills.empty());
    ASSERT_EQ(r.equity_curve.size(), dates.size());
    for (const auto& p : r.equity_curve) {
        EXPECT_EQ(p.equity, 300000.0);
    }
    EXPECT_EQ(r.signals.size(), 40u);
}

TEST(Engine, BuyThenNeutralRoundTrip) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 6), 3);
    auto m = sentibt::testing::flat_market({"A"}, dates, 25.0);
    auto c = config_for(m);
    c.execution.commission_rate = 0.0;
    c.alpha_vs_benchmark = false;
    // Positive before Monday's open, neutral before Tuesday's open.
    std::vector<ArticleAssetScore> s = {score_at("n1", "A", "2020-01-06T12:00:00Z", 1.0),
                                        score_at("n2", "A", "2020-01-06T20:00:00Z", 0.0)};
    auto r = run_backtest(c, m, s);
    ASSERT_EQ(r.fills.size(), 2u);
    EXPECT_EQ(r.fills[0].action, FillAction::OpenLong);
    EXPECT_EQ(r.fills[0].trading_date, dates[0]);
    EXPECT_EQ(r.fills[1].action, FillAction::CloseLong);
    EXPECT_EQ(r.fills[1].trading_date, dates[1]);
    EXPECT_EQ(r.equity_curve.back().equity, 300000.0);
}

TEST(Engine, ArticleAtOpenCountsForNextDay) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 6), 2);
    auto m = sentibt::testing::flat_market({"A"}, dates, 25.0);
    auto c = config_for(m);
    MarketClock clock;
    auto at_open = clock.open_at(dates[0]);
    std::vector<ArticleAssetScore> s = {ArticleAssetScore{"n1", "A", at_open, 1.0}};
    auto r = run_backtest(c, m, s);
    ASSERT_EQ(r.fills.size(), 1u);
    EXPECT_EQ(r.fills[0].trading_date, dates[1]);
}

TEST(Engine, StrategyEqualToBenchmarkHasZeroAlpha) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 30);
    auto m = sentibt::testing::make_market(
        {"A", "B"}, dates, [](std::size_t a, std::size_t d) { return 10.0 + a + 0.1 * d; },
        [](std::size_t a, std::size_t d) { return 10.05 + a + 0.1 * d; });
    auto c = config_for(m);
    c.strategy = StrategyKind::BuyAndHold;
    auto r = run_backtest(c, m, {});
    EXPECT_EQ(*r.metrics.alpha.value, 0.0);
}

TEST(Engine, ComparisonStructure) {
    SyntheticSpec spec;
    spec.trading_days = 80;
    spec.universe_size = 5;
    auto data = generate_synthetic_dataset(3, spec);
    std::vector<BacktestConfig> configs(4, config_for(data.market));
    configs[0].name = "bench";
    configs[0].strategy = StrategyKind::BuyAndHold;
    configs[1].name = "wide";
    configs[1].thresholds = Thresholds(35, 65);
    configs[2].name = "default";
    configs[3].name = "narrow";
    configs[3].thresholds = Thresholds(45, 55);
    std::vector<VariantInput> variants;
    for (const auto& c : configs) {
        variants.push_back({c, data.scores});
    }
    auto cmp = run_comparison(variants, data.market);
    ASSERT_EQ(cmp.results.size(), 4u);
    EXPECT_EQ(cmp.results[0].name, "bench");
    EXPECT_EQ(cmp.benchmark, "bench");
    const auto& bench = cmp.results[0];
    for (const auto& r : cmp.results) {
        ASSERT_TRUE(r.metrics.alpha.defined());
        EXPECT_EQ(*r.metrics.alpha.value, alpha(*r.metrics.annual_cumulative_return.value,
                                                  *bench.metrics.annual_cumulative_return.value));
    }
    EXPECT_EQ(*bench.metrics.alpha.value, 0.0);

    // Without a benchmark alpha stays undefined.
    std::vector<VariantInput> no_bench(variants.begin() + 1, variants.end());
    auto cmp2 = run_comparison(no_bench, data.market);
    EXPECT_FALSE(cmp2.benchmark);
    EXPECT_EQ(cmp2.results[0].metrics.alpha.reason, UndefinedReason::NoBenchmark);
}

TEST(Engine, ComparisonGuards) {
    SyntheticSpec spec;
    spec.trading_days = 30;
    spec.universe_size = 3;
    auto data = generate_synthetic_dataset(1, spec);
    auto c = config_for(data.market);
    std::vector<VariantInput> one = {{c, data.scores}};
    EXPECT_THROW(run_comparison(one, data.market), ConfigError);

    auto other = c;
    other.name = "other";
    other.universe = {"S001"};
    std::vector<VariantInput> mismatch = {{c, data.scores}, {other, data.scores}};
    EXPECT_THROW(run_comparison(mismatch, data.market), ContractError);

    auto shorter = c;
    shorter.name = "short";
    shorter.end_date = data.market.calendar.dates()[10];
    std::vector<VariantInput> horizon = {{c, data.scores}, {shorter, data.scores}};
    EXPECT_THROW(run_comparison(horizon, data.market), ContractError);
}

TEST(Engine, SweepDegenerateBand) {
    SyntheticSpec spec;
    spec.trading_days = 40;
    spec.universe_size = 4;
    auto data = generate_synthetic_dataset(5, spec);
    auto c = config_for(data.market);
    std::vector<Thresholds> t = {Thresholds(0, 100)};
    auto rows = threshold_sweep(c, data.market, data.scores, t);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].fill_count, 0u);
    EXPECT_THROW(threshold_sweep(c, data.market, data.scores, {}), ConfigError);
}

TEST(Engine, MissingUniverseAssetIsDataError) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 5);
    auto m = sentibt::testing::flat_market({"A"}, dates, 5.0);
    auto c = config_for(m);
    c.universe = {"A", "Q"};
    EXPECT_THROW(run_backtest(c, m, {}), DataError);
}

TEST(Engine, ResultDirectoryDeterministic) {
    SyntheticSpec spec;
    spec.trading_days = 60;
    spec.universe_size = 6;
    spec.correlation = 0.5;
    auto data = generate_synthetic_dataset(21, spec);
    auto c = config_for(data.market);
    auto root = sentibt::testing::temp_dir("engine_dir");
    write_result_directory(run_backtest(c, data.market, data.scores), root / "a");
    write_result_directory(run_backtest(c, data.market, data.scores), root / "b");
    EXPECT_EQ(read_dir(root / "a"), read_dir(root / "b"));
    auto fills = read_file(root / "a" / "fills.csv");
    EXPECT_EQ(fills.substr(0, kFillCsvHeader.size()), kFillCsvHeader);
}

TEST(Engine, ConfigValidation) {
    BacktestConfig c;
    c.start_date = ymd(2020, 2, 1);
    c.end_date = ymd(2020, 1, 1);
    EXPECT_THROW(c.validate(), ConfigError);
    c.end_date = ymd(2020, 3, 1);
    c.universe = {"A", "A"};
    EXPECT_THROW(c.validate(), ConfigError);
}
