#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sentibt/marketdata.hpp"
#include "sentibt/newsfeed.hpp"
#include "sentibt/time.hpp"

namespace sentibt {

// Parameters of the synthetic market. Every asset follows a geometric random walk
// on weekday sessions; each day carries a latent signal x ~ N(0, 1) that drives the
// sentiment of articles published in the window before that day's open and, with
// weight `correlation`, the open-to-open log return that follows it.
struct SyntheticSpec {
    Date start_date = Date{std::chrono::year{2020} / 1 / 2};
    std::size_t trading_days = 600;
    std::size_t universe_size = 30;
    double initial_price = 100.0;
    double drift = 0.0;          // expected daily simple return
    double volatility = 0.02;    // daily log-return stdev
    double article_rate = 3.0;   // mean articles per asset per day (Poisson)
    double correlation = 0.0;    // in [-1, 1]
    double article_noise = 0.3;  // stdev of per-article deviation from the day's sentiment
    std::string timezone = std::string(kDefaultMarketTimezone);
    LocalTime open{9, 30};

    // Throws ConfigError.
    void validate() const;
};

struct SyntheticDataset {
    MarketData market;
    std::vector<ArticleAssetScore> scores;
};

std::string synthetic_asset_id(std::size_t index);

SyntheticDataset generate_synthetic_dataset(std::uint64_t seed, const SyntheticSpec& spec);

}  // namespace sentibt
