#include "sentibt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

namespace {

constexpr double kVolatilityEpsilon = 1e-14;
// Standard normal quantile at 0.95.
constexpr double kZ95 = 1.6448536269514722;

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stdev(std::span<const double> xs, double mean) {
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

int year_of(Date d) { return static_cast<int>(std::chrono::year_month_day{d}.year()); }

unsigned month_of(Date d) { return static_cast<unsigned>(std::chrono::year_month_day{d}.month()); }

double days_in_year(int year) { return std::chrono::year{year}.is_leap() ? 366.0 : 365.0; }

}  // namespace

std::string_view to_string(UndefinedReason reason) {
    switch (reason) {
        case UndefinedReason::NoDrawdown:
            return "no-drawdown";
        case UndefinedReason::ZeroVolatility:
            return "zero-volatility";
        case UndefinedReason::NoDownside:
            return "no-downside";
        case UndefinedReason::InsufficientData:
            return "insufficient-data";
        case UndefinedReason::NoBenchmark:
            return "no-benchmark";
    }
    return "undefined";
}

ReturnSeries daily_returns(const EquityCurve& curve, double periods_per_year) {
    if (!(periods_per_year > 0.0)) {
        throw DomainError("periods_per_year must be > 0");
    }
    ReturnSeries out;
    out.periods_per_year = periods_per_year;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (!(curve[i - 1].equity > 0.0)) {
            throw DomainError("equity must stay positive to form returns (" + format_date(curve[i - 1].date) + ")");
        }
        out.dates.push_back(curve[i].date);
        out.returns.push_back(curve[i].equity / curve[i - 1].equity - 1.0);
    }
    return out;
}

double annual_return(double end_value, double begin_value, double income) {
    if (!(begin_value > 0.0)) {
        throw DomainError("annual return needs a positive beginning value");
    }
    return (end_value - begin_value + income) / begin_value * 100.0;
}

double calendar_annual_return(const EquityCurve& curve, std::span<const IncomeEvent> income) {
    if (curve.size() < 2) {
        throw DomainError("annual return needs at least two equity points");
    }
    double sum_returns = 0.0;
    double sum_fractions = 0.0;
    EquityPoint start = curve.front();
    std::size_t i = 0;
    while (i < curve.size()) {
        int year = year_of(curve[i].date);
        std::size_t j = i;
        while (j + 1 < curve.size() && year_of(curve[j + 1].date) == year) {
            ++j;
        }
        const EquityPoint& end = curve[j];
        double days = static_cast<double>((end.date - start.date).count());
        if (days > 0.0) {
            double earned = 0.0;
            for (const auto& ev : income) {
                if (start.date < ev.date && ev.date <= end.date) {
                    earned += ev.amount;
                }
            }
            sum_returns += annual_return(end.equity, start.equity, earned);
            sum_fractions += std::min(1.0, days / days_in_year(year));
        }
        start = end;
        i = j + 1;
    }
    return sum_returns / sum_fractions;
}

double annual_compound_return(double end_value, double begin_value, double years) {
    if (!(begin_value > 0.0)) {
        throw DomainError("compound return needs a positive beginning value");
    }
    if (!(end_value > 0.0)) {
        throw DomainError("compound return needs a positive ending value");
    }
    if (!(years > 0.0)) {
        throw DomainError("compound return needs a positive number of years");
    }
    return (std::pow(end_value / begin_value, 1.0 / years) - 1.0) * 100.0;
}

double years_elapsed(Date first, Date last) { return static_cast<double>((last - first).count()) / 365.25; }

double cumulative_return(double end_value, double begin_value) {
    if (!(begin_value > 0.0)) {
        throw DomainError("cumulative return needs a positive beginning value");
    }
    return (end_value - begin_value) / begin_value * 100.0;
}

double max_drawdown(std::span<const double> equity) {
    if (equity.empty()) {
        throw DomainError("max drawdown of an empty curve");
    }
    double peak = equity.front();
    double worst = 0.0;
    for (double v : equity) {
        if (!(v > 0.0)) {
            throw DomainError("max drawdown needs positive equity values");
        }
        peak = std::max(peak, v);
        worst = std::min(worst, v / peak - 1.0);
    }
    return worst * 100.0;
}

double max_drawdown(const EquityCurve& curve) {
    std::vector<double> values;
    values.reserve(curve.size());
    for (const auto& p : curve) {
        values.push_back(p.equity);
    }
    return max_drawdown(values);
}

Metric calmar(double return_pct, double risk_free_pct, double mdd_pct) {
    if (mdd_pct == 0.0) {
        return Metric::undefined(UndefinedReason::NoDrawdown);
    }
    return Metric::of((return_pct - risk_free_pct) / std::abs(mdd_pct));
}

Metric sharpe(const ReturnSeries& returns, double risk_free_annual) {
    const auto& r = returns.returns;
    if (r.size() < 2) {
        return Metric::undefined(UndefinedReason::InsufficientData);
    }
    double mean = mean_of(r);
    double sd = sample_stdev(r, mean);
    if (sd <= kVolatilityEpsilon) {
        return Metric::undefined(UndefinedReason::ZeroVolatility);
    }
    double t = returns.periods_per_year;
    return Metric::of((mean * t - risk_free_annual) / (sd * std::sqrt(t)));
}

Metric sortino(const ReturnSeries& returns, double risk_free_annual) {
    const auto& r = returns.returns;
    if (r.size() < 2) {
        return Metric::undefined(UndefinedReason::InsufficientData);
    }
    double t = returns.periods_per_year;
    double target = risk_free_annual / t;
    double ss = 0.0;
    bool any_below = false;
    for (double x : r) {
        double shortfall = std::min(x - target, 0.0);
        if (shortfall < 0.0) {
            any_below = true;
        }
        ss += shortfall * shortfall;
    }
    if (!any_below) {
        return Metric::undefined(UndefinedReason::NoDownside);
    }
    double downside = std::sqrt(ss / static_cast<double>(r.size()));
    if (downside <= kVolatilityEpsilon) {
        return Metric::undefined(UndefinedReason::NoDownside);
    }
    return Metric::of((mean_of(r) * t - risk_free_annual) / (downside * std::sqrt(t)));
}

Metric annual_volatility(const ReturnSeries& returns) {
    const auto& r = returns.returns;
    if (r.size() < 2) {
        return Metric::undefined(UndefinedReason::InsufficientData);
    }
    return Metric::of(sample_stdev(r, mean_of(r)) * std::sqrt(returns.periods_per_year) * 100.0);
}

std::string_view to_string(VarMethod method) {
    return method == VarMethod::Historical ? "historical" : "parametric_normal";
}

VarMethod parse_var_method(std::string_view text) {
    if (text == "historical") {
        return VarMethod::Historical;
    }
    if (text == "parametric_normal") {
        return VarMethod::ParametricNormal;
    }
    throw ConfigError("var_method must be 'historical' or 'parametric_normal', got '" + std::string(text) + "'");
}

Metric var_95_daily(std::span<const double> returns, VarMethod method) {
    const std::size_t n = returns.size();
    if (n < kMinVarObservations) {
        return Metric::undefined(UndefinedReason::InsufficientData);
    }
    double quantile = 0.0;
    if (method == VarMethod::ParametricNormal) {
        double mean = mean_of(returns);
        quantile = mean - kZ95 * sample_stdev(returns, mean);
    } else {
        // h is a 1-based position on the order statistics.
        double h = 0.05 * static_cast<double>(n);
        std::vector<double> xs(returns.begin(), returns.end());
        if (h <= 1.0) {
            quantile = *std::min_element(xs.begin(), xs.end());
        } else {
            auto k = static_cast<std::size_t>(std::floor(h));
            double frac = h - static_cast<double>(k);
            auto kth = xs.begin() + static_cast<std::ptrdiff_t>(k - 1);
            std::nth_element(xs.begin(), kth, xs.end());
            double lower = *kth;
            double upper = k < n ? *std::min_element(kth + 1, xs.end()) : lower;
            quantile = frac == 0.0 ? lower : lower + frac * (upper - lower);
        }
    }
    return Metric::of(std::max(0.0, -quantile) * 100.0);
}

double alpha(double strategy_cumulative_pct, double benchmark_cumulative_pct) {
    return strategy_cumulative_pct - benchmark_cumulative_pct;
}

double alpha(const EquityCurve& strategy, const EquityCurve& benchmark) {
    if (strategy.empty() || benchmark.empty() || strategy.front().date != benchmark.front().date ||
        strategy.back().date != benchmark.back().date) {
        throw ContractError("alpha needs strategy and benchmark over the same date range");
    }
    return alpha(cumulative_return(strategy.back().equity, strategy.front().equity),
                 cumulative_return(benchmark.back().equity, benchmark.front().equity));
}

std::vector<PeriodReturn> periodic_compound_returns(const EquityCurve& curve, Period period) {
    std::vector<PeriodReturn> out;
    if (curve.empty()) {
        return out;
    }
    auto key = [period](Date d) {
        int y = year_of(d);
        return period == Period::Year ? y * 100 : y * 100 + static_cast<int>(month_of(d));
    };
    auto label = [period](Date d) {
        std::string s = format_date(d);
        return period == Period::Year ? s.substr(0, 4) : s.substr(0, 7);
    };
    EquityPoint start = curve.front();
    std::size_t i = 0;
    while (i < curve.size()) {
        int k = key(curve[i].date);
        std::size_t j = i;
        while (j + 1 < curve.size() && key(curve[j + 1].date) == k) {
            ++j;
        }
        const EquityPoint& end = curve[j];
        if (!(i == 0 && j == 0)) {
            out.push_back(PeriodReturn{label(end.date), start.date, end.date, (end.equity / start.equity - 1.0) * 100.0});
        }
        start = end;
        i = j + 1;
    }
    return out;
}

std::vector<SeriesPoint> cumulative_return_series(const EquityCurve& curve) {
    std::vector<SeriesPoint> out;
    if (curve.empty()) {
        return out;
    }
    out.reserve(curve.size());
    double base = curve.front().equity;
    for (const auto& p : curve) {
        out.push_back(SeriesPoint{p.date, cumulative_return(p.equity, base)});
    }
    return out;
}

MetricsReport compute_report(const EquityCurve& input, const MetricsSettings& settings,
                             std::optional<double> opening_equity) {
    if (input.empty()) {
        throw DomainError("metrics need a non-empty equity curve");
    }
    EquityCurve with_opening;
    if (opening_equity) {
        with_opening.reserve(input.size() + 1);
        with_opening.push_back(EquityPoint{input.front().date - std::chrono::days{1}, *opening_equity});
        with_opening.insert(with_opening.end(), input.begin(), input.end());
    }
    const EquityCurve& curve = opening_equity ? with_opening : input;
    MetricsReport report;
    report.settings = settings;
    const double vb = curve.front().equity;
    const double ve = curve.back().equity;
    report.annual_cumulative_return = Metric::of(cumulative_return(ve, vb));
    report.mdd = Metric::of(max_drawdown(curve));

    const auto insufficient = Metric::undefined(UndefinedReason::InsufficientData);
    if (curve.size() < 2) {
        report.annual_return = insufficient;
        report.annual_compound_return = insufficient;
        report.calmar = insufficient;
        report.sharpe = insufficient;
        report.sortino = insufficient;
        report.annual_volatility = insufficient;
        report.var_95_daily = insufficient;
        return report;
    }
    report.annual_return = Metric::of(calendar_annual_return(curve, settings.income));
    double years = years_elapsed(curve.front().date, curve.back().date);
    report.annual_compound_return = Metric::of(annual_compound_return(ve, vb, years));
    report.calmar = calmar(*report.annual_return.value, settings.risk_free_rate * 100.0, *report.mdd.value);

    ReturnSeries returns = daily_returns(curve, settings.periods_per_year);
    report.sharpe = sharpe(returns, settings.risk_free_rate);
    report.sortino = sortino(returns, settings.risk_free_rate);
    report.annual_volatility = annual_volatility(returns);
    report.var_95_daily = var_95_daily(returns.returns, settings.var_method);
    return report;
}

std::vector<std::pair<std::string, Metric>> report_rows(const MetricsReport& r) {
    return {
        {"Annual Return", r.annual_return},
        {"Annual Compound Return", r.annual_compound_return},
        {"Annual Cumulative Return", r.annual_cumulative_return},
        {"Calmar Ratio", r.calmar},
        {"Sharpe Ratio", r.sharpe},
        {"Sortino Ratio", r.sortino},
        {"MDD", r.mdd},
        {"Annual Volatility", r.annual_volatility},
        {"95% Daily VaR", r.var_95_daily},
        {"Alpha", r.alpha},
    };
}

nlohmann::ordered_json to_json(const Metric& metric) {
    nlohmann::ordered_json j;
    if (metric.value) {
        j["value"] = *metric.value;
    } else {
        j["value"] = nullptr;
        j["reason"] = metric.reason ? to_string(*metric.reason) : "undefined";
    }
    return j;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
    nlohmann::ordered_json metrics;
    metrics["annual_return_pct"] = to_json(r.annual_return);
    metrics["annual_compound_return_pct"] = to_json(r.annual_compound_return);
    metrics["annual_cumulative_return_pct"] = to_json(r.annual_cumulative_return);
    metrics["calmar"] = to_json(r.calmar);
    metrics["sharpe"] = to_json(r.sharpe);
    metrics["sortino"] = to_json(r.sortino);
    metrics["mdd_pct"] = to_json(r.mdd);
    metrics["annual_volatility_pct"] = to_json(r.annual_volatility);
    metrics["var_95_daily_pct"] = to_json(r.var_95_daily);
    metrics["alpha_pct"] = to_json(r.alpha);

    nlohmann::ordered_json conventions;
    conventions["periods_per_year"] = r.settings.periods_per_year;
    conventions["risk_free_rate_annual"] = r.settings.risk_free_rate;
    conventions["annual_return"] = "calendar-year simple returns, summed and divided by covered year fractions";
    conventions["compound_years"] = "elapsed calendar days / 365.25";
    conventions["calmar_numerator"] = "annual_return";
    conventions["stdev"] = "sample (N-1)";
    conventions["downside_deviation"] = "population (N), target r_f / T";
    conventions["var_method"] = to_string(r.settings.var_method);
    conventions["var_quantile"] = "5% empirical quantile, h = 0.05 N on 1-based order statistics";
    conventions["income_events"] = r.settings.income.size();

    nlohmann::ordered_json j;
    j["metrics"] = std::move(metrics);
    j["conventions"] = std::move(conventions);
    return j;
}

void write_report_table_csv(std::ostream& out,
                            std::span<const std::pair<std::string, const MetricsReport*>> columns) {
    out << "metric";
    for (const auto& [name, _] : columns) {
        out << ',' << csv_field(name);
    }
    out << '\n';
    std::vector<std::vector<std::pair<std::string, Metric>>> rows;
    for (const auto& [_, report] : columns) {
        rows.push_back(report_rows(*report));
    }
    const auto labels = report_rows(MetricsReport{});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << csv_field(labels[i].first);
        for (const auto& col : rows) {
            const Metric& m = col[i].second;
            out << ',' << (m.value ? format_double(*m.value) : "null:" + std::string(to_string(*m.reason)));
        }
        out << '\n';
    }
}

}  // namespace sentibt
