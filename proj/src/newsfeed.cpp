#include "sentibt/newsfeed.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <type_traits>
#include <utility>

#include <nlohmann/json.hpp>

#include "sentibt/csv.hpp"
#include "sentibt/errors.hpp"
#include "sentibt/numeric.hpp"

namespace sentibt {

namespace {

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '_';
}

bool contains_whole_word(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) {
        return false;
    }
    for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
         pos = haystack.find(needle, pos + 1)) {
        bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
        std::size_t end = pos + needle.size();
        bool right_ok = end == haystack.size() || !is_word_char(haystack[end]);
        if (left_ok && right_ok) {
            return true;
        }
    }
    return false;
}

std::string trim(std::string_view text) {
    auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(b, e - b + 1));
}

}  // namespace

void AliasTable::add(const std::string& asset_id, const std::string& alias) {
    std::string a = trim(alias);
    if (asset_id.empty() || a.empty()) {
        throw ConfigError("alias table entries need a non-empty asset_id and alias");
    }
    aliases_[asset_id].insert(to_lower(a));
}

std::vector<std::string> AliasTable::missing_assets(std::span<const std::string> universe) const {
    std::vector<std::string> missing;
    for (const auto& asset : universe) {
        auto it = aliases_.find(asset);
        if (it == aliases_.end() || it->second.empty()) {
            missing.push_back(asset);
        }
    }
    return missing;
}

void AliasTable::require_coverage(std::span<const std::string> universe) const {
    auto missing = missing_assets(universe);
    if (!missing.empty()) {
        throw ConfigError("no alias for asset " + missing.front() + " (" + std::to_string(missing.size()) +
                          " asset(s) uncovered)");
    }
}

AliasTable parse_aliases(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    reader.expect_header({"asset_id", "alias"});
    AliasTable table;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 2) {
            throw ParseError(source_name, reader.line(), "expected 2 fields");
        }
        if (trim(f[0]).empty() || trim(f[1]).empty()) {
            throw ParseError(source_name, reader.line(), "empty asset_id or alias");
        }
        table.add(trim(f[0]), f[1]);
    }
    return table;
}

AliasTable load_aliases(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_aliases(in, path.string());
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            continue;
        }
        bool at_end = i + 1 == text.size();
        if (at_end || std::isspace(static_cast<unsigned char>(text[i + 1])) != 0) {
            std::string s = trim(text.substr(begin, i + 1 - begin));
            if (!s.empty()) {
                out.push_back(std::move(s));
            }
            begin = i + 1;
        }
    }
    if (begin < text.size()) {
        std::string s = trim(text.substr(begin));
        if (!s.empty()) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<AssetMention> match_assets(const NewsArticle& article, const AliasTable& aliases) {
    std::vector<std::pair<int, std::string>> texts;
    texts.reserve(article.sentences.size() + 1);
    if (!article.title.empty()) {
        texts.emplace_back(kTitleSentence, to_lower(article.title));
    }
    for (std::size_t i = 0; i < article.sentences.size(); ++i) {
        texts.emplace_back(static_cast<int>(i), to_lower(article.sentences[i]));
    }

    std::vector<AssetMention> mentions;
    for (const auto& [asset, forms] : aliases.entries()) {
        AssetMention mention{article.id, asset, {}};
        for (const auto& [index, text] : texts) {
            bool hit = std::any_of(forms.begin(), forms.end(),
                                   [&](const std::string& alias) { return contains_whole_word(text, alias); });
            if (hit) {
                mention.sentence_indices.push_back(index);
            }
        }
        if (!mention.sentence_indices.empty()) {
            mentions.push_back(std::move(mention));
        }
    }
    return mentions;
}

double label_to_value(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Negative:
            return -1.0;
        case SentimentLabel::Neutral:
            return 0.0;
        case SentimentLabel::Positive:
            return 1.0;
    }
    return 0.0;
}

SentimentLabel parse_label(std::string_view text) {
    std::string lower = to_lower(trim(text));
    if (lower == "negative") {
        return SentimentLabel::Negative;
    }
    if (lower == "neutral") {
        return SentimentLabel::Neutral;
    }
    if (lower == "positive") {
        return SentimentLabel::Positive;
    }
    throw ConfigError("unknown sentiment label '" + std::string(text) + "'");
}

std::string_view to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Negative:
            return "negative";
        case SentimentLabel::Neutral:
            return "neutral";
        case SentimentLabel::Positive:
            return "positive";
    }
    return "neutral";
}

LexiconScorer::LexiconScorer() : LexiconScorer(default_positive_words(), default_negative_words()) {}

LexiconScorer::LexiconScorer(std::set<std::string> positive, std::set<std::string> negative) {
    for (const auto& w : positive) {
        positive_.insert(to_lower(w));
    }
    for (const auto& w : negative) {
        negative_.insert(to_lower(w));
    }
}

SentenceSentiment LexiconScorer::score(std::string_view sentence) const {
    int pos = 0;
    int neg = 0;
    std::string word;
    auto flush = [&] {
        if (word.empty()) {
            return;
        }
        if (positive_.contains(word)) {
            ++pos;
        } else if (negative_.contains(word)) {
            ++neg;
        }
        word.clear();
    };
    for (char c : sentence) {
        if (is_word_char(c) || c == '\'') {
            word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();
    return static_cast<double>(pos - neg) / static_cast<double>(std::max(1, pos + neg));
}

std::set<std::string> LexiconScorer::default_positive_words() {
    return {"beat",    "beats",     "bullish", "gain",    "gains",   "growth",  "high",     "higher",
            "jump",    "jumps",     "outperform", "profit", "profits", "rally",  "record",   "rise",
            "rises",   "rose",      "soar",    "soars",   "strong",  "surge",   "surged",   "upgrade",
            "upgraded"};
}

std::set<std::string> LexiconScorer::default_negative_words() {
    return {"bearish", "cut",     "cuts",    "decline", "declines", "downgrade", "downgraded", "drop",
            "drops",   "fall",    "falls",   "fell",    "lawsuit",  "loss",      "losses",     "lower",
            "miss",    "misses",  "plunge",  "plunges", "slump",    "underperform", "warning", "weak"};
}

ArticleAssetScore score_article_asset(const AssetMention& mention, const NewsArticle& article,
                                      const SentenceScorer& scorer) {
    if (mention.sentence_indices.empty()) {
        throw ContractError("mention of " + mention.asset_id + " in " + article.id + " has no sentences");
    }
    std::vector<double> values;
    values.reserve(mention.sentence_indices.size());
    for (int index : mention.sentence_indices) {
        const std::string* text = nullptr;
        if (index == kTitleSentence) {
            text = &article.title;
        } else if (index >= 0 && static_cast<std::size_t>(index) < article.sentences.size()) {
            text = &article.sentences[static_cast<std::size_t>(index)];
        } else {
            throw ContractError("sentence index " + std::to_string(index) + " out of range in " + article.id);
        }
        SentenceSentiment s;
        try {
            s = scorer.score(*text);
        } catch (const std::exception& e) {
            throw ScoringError(article.id, e.what());
        }
        double v = std::visit(
            [](auto x) {
                if constexpr (std::is_same_v<decltype(x), SentimentLabel>) {
                    return label_to_value(x);
                } else {
                    return x;
                }
            },
            s);
        if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
            throw ScoringError(article.id, "scorer returned " + format_double(v) + " outside [-1, 1]");
        }
        values.push_back(v);
    }
    double mean = std::clamp(order_invariant_mean(std::move(values)), -1.0, 1.0);
    return ArticleAssetScore{article.id, mention.asset_id, article.timestamp, mean};
}

void sort_scores(std::vector<ArticleAssetScore>& scores) {
    std::sort(scores.begin(), scores.end(), [](const ArticleAssetScore& a, const ArticleAssetScore& b) {
        return std::tie(a.timestamp, a.article_id, a.asset_id) < std::tie(b.timestamp, b.article_id, b.asset_id);
    });
}

std::vector<ArticleAssetScore> score_articles(std::span<const NewsArticle> articles, const AliasTable& aliases,
                                              const SentenceScorer& scorer) {
    std::vector<ArticleAssetScore> out;
    for (const auto& article : articles) {
        for (const auto& mention : match_assets(article, aliases)) {
            out.push_back(score_article_asset(mention, article, scorer));
        }
    }
    sort_scores(out);
    return out;
}

std::vector<NewsArticle> parse_articles(std::istream& in, const std::string& source_name) {
    std::vector<NewsArticle> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source_name, line_no, std::string("invalid JSON: ") + e.what());
        }
        auto fail = [&](const std::string& what) { throw ParseError(source_name, line_no, what); };
        if (!obj.is_object()) {
            fail("expected a JSON object");
        }
        auto get_string = [&](const char* key, bool required) -> std::string {
            auto it = obj.find(key);
            if (it == obj.end() || it->is_null()) {
                if (required) {
                    fail(std::string("missing key '") + key + "'");
                }
                return {};
            }
            if (!it->is_string()) {
                fail(std::string("key '") + key + "' must be a string");
            }
            return it->get<std::string>();
        };
        NewsArticle article;
        article.id = get_string("id", true);
        if (article.id.empty()) {
            fail("empty article id");
        }
        article.source = get_string("source", false);
        auto ts = try_parse_timestamp(get_string("timestamp", true));
        if (!ts) {
            fail("unparseable timestamp");
        }
        article.timestamp = *ts;
        article.title = get_string("title", false);
        if (auto it = obj.find("sentences"); it != obj.end()) {
            if (!it->is_array()) {
                fail("'sentences' must be an array of strings");
            }
            for (const auto& s : *it) {
                if (!s.is_string()) {
                    fail("'sentences' must be an array of strings");
                }
                article.sentences.push_back(s.get<std::string>());
            }
        } else {
            article.sentences = split_sentences(get_string("body", false));
        }
        if (article.sentences.empty() && article.title.empty()) {
            fail("article " + article.id + " has neither title nor body");
        }
        if (!seen.insert(article.id).second) {
            throw DuplicateRecordError(source_name + ":" + std::to_string(line_no) + ": duplicate article id " +
                                       article.id);
        }
        out.push_back(std::move(article));
    }
    return out;
}

std::vector<NewsArticle> load_articles(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_articles(in, path.string());
}

std::vector<ArticleAssetScore> parse_precomputed_scores(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    reader.expect_header({"article_id", "asset_id", "timestamp", "score"});
    std::vector<ArticleAssetScore> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != 4) {
            throw ParseError(source_name, reader.line(), "expected 4 fields, got " + std::to_string(f.size()));
        }
        ArticleAssetScore rec;
        rec.article_id = f[0];
        rec.asset_id = f[1];
        if (rec.article_id.empty() || rec.asset_id.empty()) {
            throw ParseError(source_name, reader.line(), "empty article_id or asset_id");
        }
        auto ts = try_parse_timestamp(f[2]);
        if (!ts) {
            throw ParseError(source_name, reader.line(), "invalid timestamp '" + f[2] + "'");
        }
        rec.timestamp = *ts;
        if (!parse_double(f[3], rec.score)) {
            throw ParseError(source_name, reader.line(), "invalid score '" + f[3] + "'");
        }
        if (rec.score < -1.0 || rec.score > 1.0) {
            throw ValidationError(source_name + ":" + std::to_string(reader.line()) + ": score " + f[3] +
                                  " outside [-1, 1]");
        }
        if (!seen.emplace(rec.article_id, rec.asset_id).second) {
            throw DuplicateRecordError(source_name + ":" + std::to_string(reader.line()) + ": duplicate record (" +
                                       rec.article_id + ", " + rec.asset_id + ")");
        }
        out.push_back(std::move(rec));
    }
    sort_scores(out);
    return out;
}

std::vector<ArticleAssetScore> load_precomputed_scores(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_precomputed_scores(in, path.string());
}

void write_scores(std::ostream& out, std::span<const ArticleAssetScore> scores) {
    out << kScoreCsvHeader << '\n';
    for (const auto& s : scores) {
        out << csv_field(s.article_id) << ',' << csv_field(s.asset_id) << ',' << format_timestamp(s.timestamp) << ','
            << format_double(s.score) << '\n';
    }
}

}  // namespace sentibt
