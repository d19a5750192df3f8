#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sentibt/errors.hpp"
#include "sentibt/execution.hpp"
#include "support.hpp"

using namespace sentibt;
using sentibt::testing::ymd;

namespace {

OrderLists lists(Date d, std::vector<std::string> buy, std::vector<std::string> neutral, std::vector<std::string> sell) {
    return OrderLists{d, std::move(buy), std::move(neutral), std::move(sell)};
}

}  // namespace

TEST(Execution, BuyOpensLongWithCommission) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 2);
    auto m = sentibt::testing::flat_market({"A"}, dates, 100.0);
    Portfolio p(300000.0);
    ExecutionConfig cfg;
    auto fills = p.execute_day(lists(dates[0], {"A"}, {}, {}), m.series, cfg);
    ASSERT_EQ(fills.size(), 1u);
    EXPECT_EQ(fills[0].action, FillAction::OpenLong);
    EXPECT_EQ(fills[0].quantity, 100.0);
    EXPECT_EQ(fills[0].commission, 5.0);
    EXPECT_EQ(p.cash(), 300000.0 - 10005.0);
}

TEST(Execution, ExistingPositionSkipsBuyAndSell) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 3);
    auto m = sentibt::testing::flat_market({"A"}, dates, 100.0);
    Portfolio p(300000.0);
    ExecutionConfig cfg;
    p.execute_day(lists(dates[0], {"A"}, {}, {}), m.series, cfg);
    EXPECT_TRUE(p.execute_day(lists(dates[1], {"A"}, {}, {}), m.series, cfg).empty());
    EXPECT_TRUE(p.execute_day(lists(dates[2], {}, {}, {"A"}), m.series, cfg).empty());
    EXPECT_EQ(p.positions().at("A").side, Side::Long);
}

TEST(Execution, NeutralClosesLong) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 2);
    auto m = sentibt::testing::make_market(
        {"A"}, dates, [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 110.0; },
        [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 110.0; });
    Portfolio p(300000.0);
    ExecutionConfig cfg;
    p.execute_day(lists(dates[0], {"A"}, {}, {}), m.series, cfg);
    double before = p.cash();
    auto fills = p.execute_day(lists(dates[1], {}, {"A"}, {}), m.series, cfg);
    ASSERT_EQ(fills.size(), 1u);
    EXPECT_EQ(fills[0].action, FillAction::CloseLong);
    EXPECT_DOUBLE_EQ(fills[0].commission, 5.5);
    EXPECT_DOUBLE_EQ(p.cash() - before, 11000.0 - 5.5);
    EXPECT_TRUE(p.positions().empty());
}

TEST(Execution, SellOpensShortAndNeutralCovers) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 2);
    auto m = sentibt::testing::make_market(
        {"A"}, dates, [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 90.0; },
        [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 90.0; });
    Portfolio p(1000.0);
    ExecutionConfig cfg;
    cfg.commission_rate = 0.0;
    auto open = p.execute_day(lists(dates[0], {}, {}, {"A"}), m.series, cfg);
    ASSERT_EQ(open.size(), 1u);
    EXPECT_EQ(open[0].action, FillAction::OpenShort);
    EXPECT_EQ(p.cash(), 11000.0);
    p.execute_day(lists(dates[1], {}, {"A"}, {}), m.series, cfg);
    EXPECT_EQ(p.cash(), 2000.0);
}

TEST(Execution, InsufficientCashSkipsWithWarning) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 1);
    auto m = sentibt::testing::flat_market({"A", "B"}, dates, 100.0);
    Portfolio p(15000.0);
    ExecutionConfig cfg;
    cfg.initial_capital = 15000.0;
    auto fills = p.execute_day(lists(dates[0], {"A", "B"}, {}, {}), m.series, cfg);
    EXPECT_EQ(fills.size(), 1u);
    EXPECT_GE(p.cash(), 0.0);
    EXPECT_EQ(p.warnings().size(), 1u);
}

TEST(Execution, MissingOpenSkipsOrder) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 1);
    auto m = sentibt::testing::flat_market({"A"}, dates, 100.0);
    Portfolio p(300000.0);
    auto fills = p.execute_day(lists(dates[0], {"A", "ZZZ"}, {}, {}), m.series, ExecutionConfig{});
    EXPECT_EQ(fills.size(), 1u);
    EXPECT_EQ(p.warnings().size(), 1u);
}

TEST(Execution, WholeSharesRoundDown) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 1);
    auto m = sentibt::testing::flat_market({"A"}, dates, 300.0);
    Portfolio p(300000.0);
    ExecutionConfig cfg;
    cfg.fractional_shares = false;
    auto fills = p.execute_day(lists(dates[0], {"A"}, {}, {}), m.series, cfg);
    ASSERT_EQ(fills.size(), 1u);
    EXPECT_EQ(fills[0].quantity, 33.0);
    EXPECT_DOUBLE_EQ(fills[0].residual, 100.0);
}

TEST(MarkToMarket, Examples) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 2);
    auto m = sentibt::testing::make_market(
        {"A"}, dates, [](std::size_t, std::size_t) { return 100.0; },
        [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 110.0; });
    Portfolio empty(300000.0);
    EXPECT_EQ(empty.mark_to_market(dates[0], m.series), 300000.0);

    Portfolio p(300000.0);
    p.execute_day(lists(dates[0], {"A"}, {}, {}), m.series, ExecutionConfig{});
    EXPECT_EQ(p.cash(), 289995.0);
    EXPECT_EQ(p.mark_to_market(dates[1], m.series), 289995.0 + 11000.0);
}

TEST(MarkToMarket, ShortProfitOverProceeds) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 2);
    auto m = sentibt::testing::make_market(
        {"A"}, dates, [](std::size_t, std::size_t) { return 100.0; },
        [](std::size_t, std::size_t d) { return d == 0 ? 100.0 : 90.0; });
    Portfolio p(300000.0);
    p.execute_day(lists(dates[0], {}, {}, {"A"}), m.series, ExecutionConfig{});
    EXPECT_EQ(p.cash(), 300000.0 + 10000.0 - 5.0);
    EXPECT_EQ(p.mark_to_market(dates[1], m.series), 300000.0 - 5.0 + 1000.0);
}

TEST(MarkToMarket, GapCarriesLastMark) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 3);
    PriceSeries s;
    s.insert(PriceBar{"A", dates[0], 100, 100, 100, 100, 1});
    s.insert(PriceBar{"A", dates[2], 120, 120, 120, 120, 1});
    Portfolio p(100000.0);
    ExecutionConfig cfg;
    cfg.commission_rate = 0.0;
    p.execute_day(lists(dates[0], {"A"}, {}, {}), s, cfg);
    p.mark_to_market(dates[0], s);
    EXPECT_EQ(p.mark_to_market(dates[1], s), 100000.0);
    EXPECT_EQ(p.mark_to_market(dates[2], s), 102000.0);
    EXPECT_THROW(p.mark_to_market(dates[1], s), ContractError);
}

TEST(Execution, IdempotentSkips) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 1);
    auto m = sentibt::testing::flat_market({"A", "B"}, dates, 50.0);
    Portfolio p(300000.0);
    auto l = lists(dates[0], {"A"}, {}, {"B"});
    EXPECT_EQ(p.execute_day(l, m.series, ExecutionConfig{}).size(), 2u);
    EXPECT_TRUE(p.execute_day(l, m.series, ExecutionConfig{}).empty());
}

// Replays random fills against an independent cash ledger.
TEST(Execution, LedgerReplay) {
    std::mt19937_64 rng(99);
    std::vector<std::string> assets = {"A", "B", "C", "D"};
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 250);
    std::normal_distribution<double> n(0.0, 0.02);
    std::vector<std::vector<double>> px(assets.size(), std::vector<double>(dates.size()));
    for (auto& row : px) {
        double v = 50.0;
        for (auto& x : row) {
            v *= std::exp(n(rng));
            x = v;
        }
    }
    auto m = sentibt::testing::make_market(
        assets, dates, [&](std::size_t a, std::size_t d) { return px[a][d]; },
        [&](std::size_t a, std::size_t d) { return px[a][d] * 1.001; });
    Portfolio p(300000.0);
    ExecutionConfig cfg;
    double cash = 300000.0;
    double commissions = 0.0;
    for (std::size_t d = 0; d < dates.size(); ++d) {
        OrderLists l{dates[d], {}, {}, {}};
        for (const auto& a : assets) {
            switch (rng() % 4) {
                case 0: l.buy.push_back(a); break;
                case 1: l.neutral.push_back(a); break;
                case 2: l.sell.push_back(a); break;
                default: break;
            }
        }
        for (const auto& f : p.execute_day(l, m.series, cfg)) {
            EXPECT_DOUBLE_EQ(f.commission, cfg.commission_rate * f.notional);
            EXPECT_DOUBLE_EQ(f.notional, f.quantity * f.price);
            double sign = (f.action == FillAction::OpenLong || f.action == FillAction::CloseShort) ? -1.0 : 1.0;
            cash += sign * f.notional - f.commission;
            commissions += f.commission;
            EXPECT_DOUBLE_EQ(cash_flow(f), sign * f.notional - f.commission);
        }
        double equity = p.mark_to_market(dates[d], m.series);
        double positions = 0.0;
        for (const auto& [id, pos] : p.positions()) {
            double v = pos.quantity * m.series.close_price(id, dates[d]);
            positions += pos.side == Side::Long ? v : -v;
        }
        EXPECT_NEAR(p.cash(), cash, 1e-6);
        EXPECT_NEAR(equity, cash + positions, 1e-6);
    }
    EXPECT_GT(commissions, 0.0);
}

TEST(BuyAndHold, FlatPricesLoseTwoCommissions) {
    std::vector<std::string> assets = {"A", "B", "C"};
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 10);
    auto m = sentibt::testing::flat_market(assets, dates, 42.0);
    ExecutionConfig cfg;
    cfg.initial_capital = 300000.0;
    auto plan = benchmark_plan(assets, cfg.initial_capital, BenchmarkMode::EqualValue, m.series, m.calendar);
    auto run = run_buy_and_hold(plan, m.series, m.calendar, cfg);
    EXPECT_EQ(run.fills.size(), 6u);
    EXPECT_EQ(run.portfolio.equity_curve().size(), 10u);
    EXPECT_NEAR(run.portfolio.equity_curve().back().equity, 300000.0 - 2 * 0.0005 * 300000.0, 1e-6);
}

TEST(BuyAndHold, RisingAssetZeroCommission) {
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 5);
    auto m = sentibt::testing::make_market(
        {"A"}, dates, [](std::size_t, std::size_t d) { return d == 4 ? 110.0 : 100.0; },
        [](std::size_t, std::size_t d) { return d == 4 ? 110.0 : 100.0; });
    ExecutionConfig cfg;
    cfg.commission_rate = 0.0;
    std::vector<std::string> assets = {"A"};
    auto plan = benchmark_plan(assets, 300000.0, BenchmarkMode::EqualValue, m.series, m.calendar);
    auto run = run_buy_and_hold(plan, m.series, m.calendar, cfg);
    EXPECT_NEAR(run.portfolio.equity_curve().back().equity, 330000.0, 1e-6);
}

TEST(BuyAndHold, ThirtyAssetsTenThousandEach) {
    std::vector<std::string> assets;
    for (int i = 0; i < 30; ++i) {
        assets.push_back("S" + std::to_string(i + 10));
    }
    auto dates = sentibt::testing::weekdays(ymd(2020, 1, 2), 3);
    auto m = sentibt::testing::make_market(
        assets, dates, [](std::size_t a, std::size_t) { return 5.0 + a; },
        [](std::size_t a, std::size_t) { return 5.0 + a; });
    auto plan = benchmark_plan(assets, 300000.0, BenchmarkMode::EqualValue, m.series, m.calendar);
    auto run = run_buy_and_hold(plan, m.series, m.calendar, ExecutionConfig{});
    for (std::size_t i = 0; i < 30; ++i) {
        EXPECT_EQ(run.fills[i].notional, 10000.0);
        EXPECT_EQ(run.fills[i].commission, 5.0);
    }
}

TEST(ExecutionConfig, Validation) {
    ExecutionConfig c;
    EXPECT_NO_THROW(c.validate());
    c.order_value = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExecutionConfig{};
    c.commission_rate = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
}
