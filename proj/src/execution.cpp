#include "sentibt/execution.hpp"

#include <cmath>
#include <ostream>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

std::string_view to_string(FillAction action) {
    switch (action) {
        case FillAction::OpenLong:
            return "OpenLong";
        case FillAction::CloseLong:
            return "CloseLong";
        case FillAction::OpenShort:
            return "OpenShort";
        case FillAction::CloseShort:
            return "CloseShort";
    }
    return "OpenLong";
}

double cash_flow(const Fill& fill) {
    switch (fill.action) {
        case FillAction::OpenLong:
        case FillAction::CloseShort:
            return -fill.notional - fill.commission;
        case FillAction::CloseLong:
        case FillAction::OpenShort:
            return fill.notional - fill.commission;
    }
    return 0.0;
}

void ExecutionConfig::validate() const {
    if (!(initial_capital > 0.0) || !std::isfinite(initial_capital)) {
        throw ConfigError("execution.initial_capital must be > 0");
    }
    if (!(order_value > 0.0) || !std::isfinite(order_value)) {
        throw ConfigError("execution.order_value must be > 0");
    }
    if (!(commission_rate >= 0.0 && commission_rate < 1.0)) {
        throw ConfigError("execution.commission_rate must be in [0, 1)");
    }
}

Portfolio::Portfolio(double initial_cash) : cash_(initial_cash) {}

void Portfolio::warn(Date date, std::string_view asset, std::string_view message) {
    warnings_.push_back(format_date(date) + " " + std::string(asset) + ": " + std::string(message));
}

Fill Portfolio::apply(Date date, const std::string& asset_id, FillAction action, double quantity, double price,
                      double notional, double commission_rate) {
    Fill fill{date, asset_id, action, quantity, price, notional, commission_rate * notional, 0.0};
    cash_ += cash_flow(fill);
    switch (action) {
        case FillAction::OpenLong:
        case FillAction::OpenShort:
            positions_[asset_id] = Position{asset_id, action == FillAction::OpenLong ? Side::Long : Side::Short,
                                            quantity, price, date, price};
            break;
        case FillAction::CloseLong:
        case FillAction::CloseShort:
            positions_.erase(asset_id);
            break;
    }
    return fill;
}

std::vector<Fill> Portfolio::execute_day(const OrderLists& lists, const PriceSeries& prices,
                                         const ExecutionConfig& cfg) {
    std::vector<Fill> fills;
    const Date day = lists.trading_date;

    auto open_of = [&](const std::string& asset) -> std::optional<double> {
        if (const PriceBar* bar = prices.find(asset, day)) {
            return bar->open;
        }
        warn(day, asset, "no open price, order skipped");
        return std::nullopt;
    };

    auto open_position = [&](const std::string& asset, FillAction action) {
        if (positions_.contains(asset)) {
            return;
        }
        auto price = open_of(asset);
        if (!price) {
            return;
        }
        double quantity = cfg.order_value / *price;
        double notional = cfg.order_value;
        double residual = 0.0;
        if (!cfg.fractional_shares) {
            quantity = std::floor(quantity);
            notional = quantity * *price;
            residual = cfg.order_value - notional;
            if (quantity <= 0.0) {
                warn(day, asset, "order value buys no whole share, order skipped");
                return;
            }
        }
        double commission = cfg.commission_rate * notional;
        if (action == FillAction::OpenLong && cash_ < notional + commission) {
            warn(day, asset, "insufficient cash, buy skipped");
            return;
        }
        if (action == FillAction::OpenShort && cash_ + notional < commission) {
            warn(day, asset, "insufficient cash for commission, short skipped");
            return;
        }
        Fill fill = apply(day, asset, action, quantity, *price, notional, cfg.commission_rate);
        fill.residual = residual;
        fills.push_back(std::move(fill));
    };

    for (const auto& asset : lists.buy) {
        open_position(asset, FillAction::OpenLong);
    }
    for (const auto& asset : lists.neutral) {
        auto it = positions_.find(asset);
        if (it == positions_.end()) {
            continue;
        }
        auto price = open_of(asset);
        if (!price) {
            continue;
        }
        const Position pos = it->second;
        FillAction action = pos.side == Side::Long ? FillAction::CloseLong : FillAction::CloseShort;
        fills.push_back(apply(day, asset, action, pos.quantity, *price, pos.quantity * *price, cfg.commission_rate));
    }
    for (const auto& asset : lists.sell) {
        open_position(asset, FillAction::OpenShort);
    }
    return fills;
}

double Portfolio::mark_to_market(Date date, const PriceSeries& prices) {
    double equity = cash_;
    for (auto& [asset, pos] : positions_) {
        if (const PriceBar* bar = prices.find(asset, date)) {
            pos.last_mark = bar->close;
        } else {
            warn(date, asset, "no close price, carried " + format_double(pos.last_mark));
        }
        double value = pos.quantity * pos.last_mark;
        equity += pos.side == Side::Long ? value : -value;
    }
    if (!curve_.empty() && !(curve_.back().date < date)) {
        throw ContractError("equity curve dates must be strictly ascending (" + format_date(date) + ")");
    }
    curve_.push_back(EquityPoint{date, equity});
    return equity;
}

double Portfolio::equity(const std::map<std::string, double>& prices) const {
    double equity = cash_;
    for (const auto& [asset, pos] : positions_) {
        auto it = prices.find(asset);
        double p = it == prices.end() ? pos.last_mark : it->second;
        equity += pos.side == Side::Long ? pos.quantity * p : -pos.quantity * p;
    }
    return equity;
}

BuyAndHoldRun run_buy_and_hold(const BenchmarkPlan& plan, const PriceSeries& prices, const TradingCalendar& calendar,
                               const ExecutionConfig& cfg) {
    cfg.validate();
    if (!(plan.entry_date < plan.exit_date)) {
        throw ConfigError("benchmark entry date must precede exit date");
    }
    BuyAndHoldRun run{Portfolio(cfg.initial_capital), {}};
    const double exit_rate = cfg.benchmark_exit_commission ? cfg.commission_rate : 0.0;
    for (Date day : calendar.dates()) {
        if (day < plan.entry_date || plan.exit_date < day) {
            continue;
        }
        if (day == plan.entry_date) {
            for (const auto& order : plan.entries) {
                if (order.quantity <= 0.0) {
                    continue;
                }
                run.fills.push_back(run.portfolio.apply(day, order.asset_id, FillAction::OpenLong, order.quantity,
                                                        order.price, order.notional, cfg.commission_rate));
            }
        }
        if (day == plan.exit_date) {
            auto held = run.portfolio.positions();
            for (const auto& [asset, pos] : held) {
                const PriceBar* bar = prices.find(asset, day);
                if (bar == nullptr) {
                    run.portfolio.warn(day, asset, "no open price on exit day, position left open");
                    continue;
                }
                run.fills.push_back(run.portfolio.apply(day, asset, FillAction::CloseLong, pos.quantity, bar->open,
                                                        pos.quantity * bar->open, exit_rate));
            }
        }
        run.portfolio.mark_to_market(day, prices);
    }
    return run;
}

void write_fills_csv(std::ostream& out, std::span<const Fill> fills) {
    out << kFillCsvHeader << '\n';
    for (const auto& f : fills) {
        out << format_date(f.trading_date) << ',' << csv_field(f.asset_id) << ',' << to_string(f.action) << ','
            << format_double(f.quantity) << ',' << format_double(f.price) << ',' << format_double(f.notional) << ','
            << format_double(f.commission) << '\n';
    }
}

void write_equity_csv(std::ostream& out, const EquityCurve& curve) {
    out << kEquityCsvHeader << '\n';
    for (const auto& p : curve) {
        out << format_date(p.date) << ',' << format_double(p.equity) << '\n';
    }
}

}  // namespace sentibt
