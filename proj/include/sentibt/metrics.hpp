#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentibt/execution.hpp"
#include "sentibt/time.hpp"

namespace sentibt {

enum class UndefinedReason { NoDrawdown, ZeroVolatility, NoDownside, InsufficientData, NoBenchmark };

std::string_view to_string(UndefinedReason reason);

// A metric value, or the reason it is undefined. Undefined never collapses to 0.
struct Metric {
    std::optional<double> value;
    std::optional<UndefinedReason> reason;

    static Metric of(double v) { return {v, std::nullopt}; }
    static Metric undefined(UndefinedReason r) { return {std::nullopt, r}; }
    bool defined() const noexcept { return value.has_value(); }
};

struct ReturnSeries {
    std::vector<Date> dates;      // date of the later equity point
    std::vector<double> returns;  // equity_i / equity_{i-1} - 1
    double periods_per_year = 252.0;
};

ReturnSeries daily_returns(const EquityCurve& curve, double periods_per_year = 252.0);

// Simple return with income, in percent. Throws DomainError when begin <= 0.
double annual_return(double end_value, double begin_value, double income = 0.0);

struct IncomeEvent {
    Date date{};
    double amount = 0.0;
};

// Multi-year annual return in percent: simple return of each calendar year (income
// included), weighted by the fraction of the year covered:
//   sum(r_y) / sum(fraction_y)
// A year's start value is the last equity point of the prior year (or the first point).
double calendar_annual_return(const EquityCurve& curve, std::span<const IncomeEvent> income = {});

// ((end / begin)^(1 / years) - 1) * 100. Throws DomainError for begin <= 0, end <= 0 or years <= 0.
double annual_compound_return(double end_value, double begin_value, double years);
double years_elapsed(Date first, Date last);

// (end - begin) / begin * 100.
double cumulative_return(double end_value, double begin_value);

// Worst peak-to-trough decline in percent (<= 0). Evaluated as value / running_peak - 1.
double max_drawdown(std::span<const double> equity);
double max_drawdown(const EquityCurve& curve);

// (R_p - R_f) / |MDD| with percent inputs. Undefined when MDD is 0.
Metric calmar(double return_pct, double risk_free_pct, double mdd_pct);

// (mean * T - R_f) / (sample stdev * sqrt(T)); R_f is an annual fraction.
Metric sharpe(const ReturnSeries& returns, double risk_free_annual = 0.0);
// (mean * T - r_f) / (downside dev * sqrt(T)), downside dev over all N periods
// relative to a per-period target of r_f / T.
Metric sortino(const ReturnSeries& returns, double risk_free_annual = 0.0);
// Sample stdev * sqrt(T) * 100.
Metric annual_volatility(const ReturnSeries& returns);

enum class VarMethod { Historical, ParametricNormal };

std::string_view to_string(VarMethod method);
VarMethod parse_var_method(std::string_view text);

// One-day 95% VaR as a non-negative percent. Historical uses the 5% empirical
// quantile interpolated linearly on the empirical CDF (h = 0.05 * N over 1-based
// order statistics). Needs at least 20 returns.
Metric var_95_daily(std::span<const double> returns, VarMethod method = VarMethod::Historical);

inline constexpr std::size_t kMinVarObservations = 20;

// Strategy cumulative return minus benchmark cumulative return, both in percent.
double alpha(double strategy_cumulative_pct, double benchmark_cumulative_pct);
// Same, from two equity curves. Throws ContractError unless both span the same dates.
double alpha(const EquityCurve& strategy, const EquityCurve& benchmark);

enum class Period { Month, Year };

struct PeriodReturn {
    std::string label;  // YYYY-MM or YYYY
    Date start{};       // date of the equity point used as the period's start value
    Date end{};
    double return_pct = 0.0;
};

// Compound return of each calendar period, chained on the last equity point on or
// before each boundary. A leading period containing only the first point is skipped.
std::vector<PeriodReturn> periodic_compound_returns(const EquityCurve& curve, Period period);

struct SeriesPoint {
    Date date{};
    double value = 0.0;
};

// Cumulative return in percent at every point, relative to the first point.
std::vector<SeriesPoint> cumulative_return_series(const EquityCurve& curve);

struct MetricsSettings {
    double periods_per_year = 252.0;
    double risk_free_rate = 0.0;  // annual, as a fraction
    VarMethod var_method = VarMethod::Historical;
    std::vector<IncomeEvent> income;
};

struct MetricsReport {
    Metric annual_return;
    Metric annual_compound_return;
    Metric annual_cumulative_return;
    Metric calmar;
    Metric sharpe;
    Metric sortino;
    Metric mdd;
    Metric annual_volatility;
    Metric var_95_daily;
    Metric alpha = Metric::undefined(UndefinedReason::NoBenchmark);
    MetricsSettings settings;
};

// `opening_equity`, when given, is the capital held before the first point (e.g.
// the pre-open cash of day one); it becomes the beginning value V_b and the first
// return and drawdown peak are measured from it, dated one day before the first point.
MetricsReport compute_report(const EquityCurve& curve, const MetricsSettings& settings,
                             std::optional<double> opening_equity = std::nullopt);

// Table row order: label and accessor.
std::vector<std::pair<std::string, Metric>> report_rows(const MetricsReport& report);

nlohmann::ordered_json to_json(const Metric& metric);
nlohmann::ordered_json to_json(const MetricsReport& report);

// Rows in table order (nine metrics then Alpha), one column per named report.
void write_report_table_csv(std::ostream& out,
                            std::span<const std::pair<std::string, const MetricsReport*>> columns);

}  // namespace sentibt
