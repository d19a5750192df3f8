#include "sentibt/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"

namespace sentibt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads keys from one JSON object and rejects any key that was never asked for.
class Fields {
public:
    Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(where() + " must be a JSON object");
        }
    }

    const json* raw(const std::string& key) {
        used_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) {
            return nullptr;
        }
        return &*it;
    }

    std::optional<std::string> str(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_string()) {
            throw ConfigError(field(key) + " must be a string");
        }
        return v->get<std::string>();
    }

    std::optional<double> number(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            throw ConfigError(field(key) + " must be a number");
        }
        return v->get<double>();
    }

    std::optional<std::uint64_t> count(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0)) {
            throw ConfigError(field(key) + " must be a non-negative integer");
        }
        return v->get<std::uint64_t>();
    }

    std::optional<bool> boolean(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_boolean()) {
            throw ConfigError(field(key) + " must be true or false");
        }
        return v->get<bool>();
    }

    std::optional<std::vector<std::string>> strings(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_array()) {
            throw ConfigError(field(key) + " must be an array of strings");
        }
        std::vector<std::string> out;
        for (const auto& e : *v) {
            if (!e.is_string()) {
                throw ConfigError(field(key) + " must be an array of strings");
            }
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    std::optional<Fields> object(const std::string& key) {
        const json* v = raw(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        return Fields(*v, field(key));
    }

    std::optional<Date> date(const std::string& key) {
        auto s = str(key);
        if (!s) {
            return std::nullopt;
        }
        auto d = try_parse_date(*s);
        if (!d) {
            throw ConfigError(field(key) + ": invalid date '" + *s + "' (expected YYYY-MM-DD)");
        }
        return d;
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    // Call after all reads.
    void finish() const {
        for (const auto& [key, _] : obj_.items()) {
            if (!used_.contains(key)) {
                throw ConfigError("unknown key '" + field(key) + "'");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <typename Fn>
auto rethrow_as_config(const std::string& field, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

}  // namespace

json parse_json_document(std::string_view text, const std::string& source_name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t limit = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i + 1 < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
            }
        }
        throw ConfigError(source_name + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
    RunConfig rc;
    BacktestConfig& c = rc.backtest;
    c.market.timezone = default_market_timezone();

    Fields root(doc, "");
    if (auto v = root.str("name")) {
        c.name = *v;
    }
    if (auto v = root.str("strategy")) {
        if (*v == "sentiment") {
            c.strategy = StrategyKind::Sentiment;
        } else if (*v == "buy_and_hold") {
            c.strategy = StrategyKind::BuyAndHold;
        } else {
            throw ConfigError("strategy must be 'sentiment' or 'buy_and_hold', got '" + *v + "'");
        }
    }
    auto start = root.date("start_date");
    auto end = root.date("end_date");
    if (!start || !end) {
        throw ConfigError("start_date and end_date are required");
    }
    c.start_date = *start;
    c.end_date = *end;
    if (auto v = root.strings("universe")) {
        c.universe = *v;
    }

    auto inputs = root.object("inputs");
    if (!inputs) {
        throw ConfigError("inputs.prices is required");
    }
    auto prices = inputs->str("prices");
    if (!prices) {
        throw ConfigError("inputs.prices is required");
    }
    rc.inputs.prices = resolve(base_dir, *prices);
    if (auto v = inputs->str("scores")) {
        rc.inputs.scores = resolve(base_dir, *v);
    }
    if (auto v = inputs->str("articles")) {
        rc.inputs.articles = resolve(base_dir, *v);
    }
    if (auto v = inputs->str("aliases")) {
        rc.inputs.aliases = resolve(base_dir, *v);
    }
    if (auto v = inputs->str("income")) {
        rc.inputs.income = resolve(base_dir, *v);
    }
    inputs->finish();

    if (auto v = root.str("scorer")) {
        if (*v == "precomputed") {
            c.scorer = ScorerKind::Precomputed;
        } else if (*v == "lexicon") {
            c.scorer = ScorerKind::Lexicon;
        } else {
            throw ConfigError("scorer must be 'precomputed' or 'lexicon', got '" + *v + "'");
        }
    }
    if (auto lex = root.object("lexicon")) {
        if (auto v = lex->strings("positive")) {
            rc.lexicon.positive = std::set<std::string>(v->begin(), v->end());
        }
        if (auto v = lex->strings("negative")) {
            rc.lexicon.negative = std::set<std::string>(v->begin(), v->end());
        }
        lex->finish();
    }

    if (auto t = root.object("thresholds")) {
        double sell = t->number("sell").value_or(40.0);
        double buy = t->number("buy").value_or(60.0);
        t->finish();
        c.thresholds = rethrow_as_config("thresholds", [&] { return Thresholds(sell, buy); });
    }
    if (auto v = root.str("no_data_policy")) {
        c.no_data_policy = parse_no_data_policy(*v);
    }
    if (auto e = root.object("execution")) {
        auto& x = c.execution;
        x.initial_capital = e->number("initial_capital").value_or(x.initial_capital);
        x.order_value = e->number("order_value").value_or(x.order_value);
        x.commission_rate = e->number("commission_rate").value_or(x.commission_rate);
        x.fractional_shares = e->boolean("fractional_shares").value_or(x.fractional_shares);
        if (auto v = e->str("insufficient_cash"); v && *v != "skip") {
            throw ConfigError("execution.insufficient_cash must be 'skip'");
        }
        x.benchmark_exit_commission = e->boolean("benchmark_exit_commission").value_or(x.benchmark_exit_commission);
        e->finish();
    }
    if (auto v = root.str("benchmark_mode")) {
        c.benchmark_mode = parse_benchmark_mode(*v);
    }
    if (auto m = root.object("metrics")) {
        c.metrics.periods_per_year = m->number("periods_per_year").value_or(c.metrics.periods_per_year);
        c.metrics.risk_free_rate = m->number("risk_free_rate").value_or(c.metrics.risk_free_rate);
        if (auto v = m->str("var_method")) {
            c.metrics.var_method = parse_var_method(*v);
        }
        m->finish();
    }
    if (auto m = root.object("market")) {
        if (auto v = m->str("timezone")) {
            c.market.timezone = *v;
        }
        if (auto v = m->str("open_time")) {
            auto t = try_parse_local_time(*v);
            if (!t) {
                throw ConfigError("market.open_time must be HH:MM, got '" + *v + "'");
            }
            c.market.open = *t;
        }
        if (auto v = m->str("backtest_start")) {
            auto ts = try_parse_timestamp(*v);
            if (!ts) {
                throw ConfigError("market.backtest_start must be an ISO-8601 timestamp with offset, got '" + *v + "'");
            }
            c.market.backtest_start = ts;
        }
        m->finish();
    }
    if (auto v = root.count("seed")) {
        c.seed = *v;
    }
    if (auto v = root.boolean("alpha_vs_benchmark")) {
        c.alpha_vs_benchmark = *v;
    }
    root.finish();

    if (c.strategy == StrategyKind::Sentiment) {
        if (c.scorer == ScorerKind::Precomputed && !rc.inputs.scores) {
            throw ConfigError("inputs.scores is required with scorer 'precomputed'");
        }
        if (c.scorer == ScorerKind::Lexicon && (!rc.inputs.articles || !rc.inputs.aliases)) {
            throw ConfigError("inputs.articles and inputs.aliases are required with scorer 'lexicon'");
        }
    }
    c.validate();
    return rc;
}

RunConfig load_run_config(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const DataError&) {
        throw ConfigError("cannot read config " + path.string());
    }
    return parse_run_config(parse_json_document(text, path.string()), path.parent_path());
}

SynthConfig parse_synthetic_spec(const json& doc) {
    SynthConfig sc;
    SyntheticSpec& s = sc.spec;
    s.timezone = default_market_timezone();
    Fields f(doc, "");
    if (auto v = f.date("start_date")) {
        s.start_date = *v;
    }
    if (auto v = f.count("trading_days")) {
        s.trading_days = static_cast<std::size_t>(*v);
    }
    if (auto v = f.count("universe_size")) {
        s.universe_size = static_cast<std::size_t>(*v);
    }
    s.initial_price = f.number("initial_price").value_or(s.initial_price);
    s.drift = f.number("drift").value_or(s.drift);
    s.volatility = f.number("volatility").value_or(s.volatility);
    s.article_rate = f.number("article_rate").value_or(s.article_rate);
    s.correlation = f.number("correlation").value_or(s.correlation);
    s.article_noise = f.number("article_noise").value_or(s.article_noise);
    if (auto v = f.str("timezone")) {
        s.timezone = *v;
    }
    if (auto v = f.str("open_time")) {
        auto t = try_parse_local_time(*v);
        if (!t) {
            throw ConfigError("open_time must be HH:MM, got '" + *v + "'");
        }
        s.open = *t;
    }
    sc.seed = f.count("seed");
    f.finish();
    s.validate();
    return sc;
}

SynthConfig load_synthetic_spec(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const DataError&) {
        throw ConfigError("cannot read synthetic spec " + path.string());
    }
    return parse_synthetic_spec(parse_json_document(text, path.string()));
}

std::vector<ArticleAssetScore> load_scores(const RunConfig& config, std::span<const std::string> universe) {
    const BacktestConfig& c = config.backtest;
    if (c.strategy == StrategyKind::BuyAndHold) {
        return {};
    }
    if (c.scorer == ScorerKind::Precomputed) {
        return load_precomputed_scores(*config.inputs.scores);
    }
    AliasTable aliases = load_aliases(*config.inputs.aliases);
    aliases.require_coverage(universe);
    auto articles = load_articles(*config.inputs.articles);
    LexiconScorer scorer(config.lexicon.positive.value_or(LexiconScorer::default_positive_words()),
                         config.lexicon.negative.value_or(LexiconScorer::default_negative_words()));
    return score_articles(articles, aliases, scorer);
}

std::vector<IncomeEvent> load_income(const fs::path& path) {
    auto in = open_input(path);
    CsvReader reader(in, path.string());
    reader.expect_header({"date", "amount"});
    std::vector<IncomeEvent> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 2) {
            throw ParseError(path.string(), reader.line(), "expected 2 fields");
        }
        auto d = try_parse_date(f[0]);
        double amount = 0.0;
        if (!d || !parse_double(f[1], amount)) {
            throw ParseError(path.string(), reader.line(), "invalid income row");
        }
        out.push_back(IncomeEvent{*d, amount});
    }
    std::sort(out.begin(), out.end(), [](const IncomeEvent& a, const IncomeEvent& b) { return a.date < b.date; });
    return out;
}

}  // namespace sentibt
