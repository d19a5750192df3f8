#include "sentibt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "sentibt/errors.hpp"

namespace sentibt {

void SyntheticSpec::validate() const {
    if (trading_days < 2) {
        throw ConfigError("synthetic trading_days must be >= 2");
    }
    if (universe_size < 1 || universe_size > 9999) {
        throw ConfigError("synthetic universe_size must be in [1, 9999]");
    }
    if (!(initial_price > 0.0) || !std::isfinite(initial_price)) {
        throw ConfigError("synthetic initial_price must be > 0");
    }
    if (!(drift > -1.0) || !std::isfinite(drift)) {
        throw ConfigError("synthetic drift must be > -1");
    }
    if (!(volatility >= 0.0) || !std::isfinite(volatility)) {
        throw ConfigError("synthetic volatility must be >= 0");
    }
    if (!(article_rate >= 0.0) || !std::isfinite(article_rate)) {
        throw ConfigError("synthetic article_rate must be >= 0");
    }
    if (!(correlation >= -1.0 && correlation <= 1.0)) {
        throw ConfigError("synthetic correlation must be in [-1, 1]");
    }
    if (!(article_noise >= 0.0) || !std::isfinite(article_noise)) {
        throw ConfigError("synthetic article_noise must be >= 0");
    }
    MarketClock clock(timezone, open);
}

std::string synthetic_asset_id(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%03zu", index + 1);
    return buf;
}

namespace {

std::vector<Date> weekday_calendar(Date start, std::size_t count) {
    std::vector<Date> days;
    days.reserve(count);
    for (Date d = start; days.size() < count; d += std::chrono::days{1}) {
        std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
            days.push_back(d);
        }
    }
    return days;
}

}  // namespace

SyntheticDataset generate_synthetic_dataset(std::uint64_t seed, const SyntheticSpec& spec) {
    spec.validate();
    const MarketClock clock(spec.timezone, spec.open);
    const auto days = weekday_calendar(spec.start_date, spec.trading_days);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double rho = spec.correlation;
    const double idio = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const double sigma = spec.volatility;
    const double log_drift = std::log1p(spec.drift) - 0.5 * sigma * sigma;
    const double close_sigma = 0.5 * sigma;

    std::vector<Timestamp> window_start(days.size());
    std::vector<Timestamp> window_end(days.size());
    for (std::size_t t = 0; t < days.size(); ++t) {
        window_end[t] = clock.open_at(days[t]);
        window_start[t] = t == 0 ? clock.local_midnight(days[0]) : window_end[t - 1];
    }

    PriceSeries series;
    std::vector<ArticleAssetScore> scores;
    for (std::size_t a = 0; a < spec.universe_size; ++a) {
        const std::string asset = synthetic_asset_id(a);
        double open = spec.initial_price;
        for (std::size_t t = 0; t < days.size(); ++t) {
            // Latent news signal published before today's open.
            const double signal = normal(rng);
            const auto articles = spec.article_rate > 0.0
                                      ? std::poisson_distribution<int>(spec.article_rate)(rng)
                                      : 0;
            const auto span_seconds = (window_end[t] - window_start[t]).count();
            for (int k = 0; k < articles; ++k) {
                double score = std::clamp(0.5 * signal + spec.article_noise * normal(rng), -1.0, 1.0);
                auto offset = static_cast<long long>(unit(rng) * static_cast<double>(span_seconds));
                offset = std::clamp<long long>(offset, 0, span_seconds - 1);
                char id[64];
                std::snprintf(id, sizeof(id), "%s-%04zu-%d", asset.c_str(), t, k);
                scores.push_back(ArticleAssetScore{id, asset, window_start[t] + std::chrono::seconds{offset}, score});
            }

            const double close = open * std::exp(close_sigma * normal(rng) - 0.5 * close_sigma * close_sigma);
            const double wick = std::abs(normal(rng)) * sigma * 0.25;
            PriceBar bar;
            bar.asset_id = asset;
            bar.date = days[t];
            bar.open = open;
            bar.close = close;
            bar.high = std::max(open, close) * (1.0 + wick);
            bar.low = std::min(open, close) * (1.0 - std::min(0.5, wick));
            bar.volume = std::floor(1e5 + unit(rng) * 9e5);
            series.insert(std::move(bar));

            // Open-to-open return into the next session; loads on today's signal with weight rho.
            const double shock = rho * signal + idio * normal(rng);
            open *= std::exp(log_drift + sigma * shock);
        }
    }
    sort_scores(scores);
    TradingCalendar calendar(series.dates());
    return SyntheticDataset{MarketData{std::move(series), std::move(calendar)}, std::move(scores)};
}

}  // namespace sentibt
