#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentibt/marketdata.hpp"
#include "sentibt/strategy.hpp"

namespace sentibt {

enum class Side { Long, Short };

struct Position {
    std::string asset_id;
    Side side = Side::Long;
    double quantity = 0.0;
    double entry_price = 0.0;
    Date entry_date{};
    double last_mark = 0.0;  // last close used for valuation; carried across gaps
};

enum class FillAction { OpenLong, CloseLong, OpenShort, CloseShort };

std::string_view to_string(FillAction action);

struct Fill {
    Date trading_date{};
    std::string asset_id;
    FillAction action = FillAction::OpenLong;
    double quantity = 0.0;
    double price = 0.0;
    double notional = 0.0;
    double commission = 0.0;
    // Order value left undeployed when whole-share rounding is on. Not serialized.
    double residual = 0.0;
};

// Cash change caused by a fill, commission included.
double cash_flow(const Fill& fill);

struct EquityPoint {
    Date date{};
    double equity = 0.0;
};

using EquityCurve = std::vector<EquityPoint>;

enum class InsufficientCashPolicy { Skip };

struct ExecutionConfig {
    double initial_capital = 300000.0;
    double order_value = 10000.0;
    double commission_rate = 0.0005;
    bool fractional_shares = true;
    InsufficientCashPolicy insufficient_cash = InsufficientCashPolicy::Skip;
    // Charge commission on the benchmark's final liquidation.
    bool benchmark_exit_commission = true;

    // Throws ConfigError.
    void validate() const;
};

// Single-owner portfolio state. Short sale proceeds are credited to cash at entry
// and the open short is carried as a liability of quantity x current price, so
// equity = cash + sum(long q * p) - sum(short q * p).
class Portfolio {
public:
    explicit Portfolio(double initial_cash);

    // Buy list, then Neutral list, then Sell list, each in the given order.
    // Orders that hit a missing open or insufficient cash are skipped with a warning.
    std::vector<Fill> execute_day(const OrderLists& lists, const PriceSeries& prices, const ExecutionConfig& cfg);

    // Appends (date, equity) using closes; a missing close carries the last mark.
    double mark_to_market(Date date, const PriceSeries& prices);

    // Applies a fill unconditionally. Used by the benchmark and by execute_day.
    // Commission is commission_rate * notional.
    Fill apply(Date date, const std::string& asset_id, FillAction action, double quantity, double price,
               double notional, double commission_rate);

    double cash() const noexcept { return cash_; }
    double equity(const std::map<std::string, double>& prices) const;
    const std::map<std::string, Position>& positions() const noexcept { return positions_; }
    const EquityCurve& equity_curve() const noexcept { return curve_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    void warn(Date date, std::string_view asset, std::string_view message);

private:
    double cash_;
    std::map<std::string, Position> positions_;
    EquityCurve curve_;
    std::vector<std::string> warnings_;
};

struct BuyAndHoldRun {
    Portfolio portfolio;
    std::vector<Fill> fills;
};

// Entry fills on the plan's first day at the open, a close mark every day, and
// liquidation at the exit day's open. Entry commission is paid on top of the
// deployed capital, so cash can dip slightly below zero.
BuyAndHoldRun run_buy_and_hold(const BenchmarkPlan& plan, const PriceSeries& prices,
                               const TradingCalendar& calendar, const ExecutionConfig& cfg);

inline constexpr std::string_view kFillCsvHeader = "date,asset,action,quantity,price,notional,commission";
inline constexpr std::string_view kEquityCsvHeader = "date,equity";

void write_fills_csv(std::ostream& out, std::span<const Fill> fills);
void write_equity_csv(std::ostream& out, const EquityCurve& curve);

}  // namespace sentibt
