#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sentibt/time.hpp"

namespace sentibt {

struct NewsArticle {
    std::string id;
    std::string source;
    Timestamp timestamp{};
    std::string title;
    std::vector<std::string> sentences;
};

// Sentence index used for the article title in AssetMention::sentence_indices.
inline constexpr int kTitleSentence = -1;

// Case-insensitive surface forms per asset. Stored lower-cased.
class AliasTable {
public:
    // Throws ConfigError for an empty asset id or alias.
    void add(const std::string& asset_id, const std::string& alias);

    const std::map<std::string, std::set<std::string>>& entries() const noexcept { return aliases_; }
    std::vector<std::string> missing_assets(std::span<const std::string> universe) const;
    // Throws ConfigError listing the first asset without an alias.
    void require_coverage(std::span<const std::string> universe) const;

private:
    std::map<std::string, std::set<std::string>> aliases_;
};

AliasTable parse_aliases(std::istream& in, const std::string& source_name);
AliasTable load_aliases(const std::filesystem::path& path);

struct AssetMention {
    std::string article_id;
    std::string asset_id;
    std::vector<int> sentence_indices;  // sorted, unique; kTitleSentence for the title
};

// Splits after '.', '!' or '?' when followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

// Whole-word, case-insensitive alias matching. One mention per matched asset, ordered by asset id.
std::vector<AssetMention> match_assets(const NewsArticle& article, const AliasTable& aliases);

enum class SentimentLabel { Negative, Neutral, Positive };

double label_to_value(SentimentLabel label);
// Throws ConfigError for anything other than negative/neutral/positive (case-insensitive).
SentimentLabel parse_label(std::string_view text);
std::string_view to_string(SentimentLabel label);

// A scorer returns either a class label or a real value in [-1, 1].
using SentenceSentiment = std::variant<SentimentLabel, double>;

class SentenceScorer {
public:
    virtual ~SentenceScorer() = default;
    virtual SentenceSentiment score(std::string_view sentence) const = 0;
};

// Word-count lexicon baseline: (pos - neg) / max(1, pos + neg).
class LexiconScorer final : public SentenceScorer {
public:
    LexiconScorer();
    LexiconScorer(std::set<std::string> positive, std::set<std::string> negative);

    SentenceSentiment score(std::string_view sentence) const override;

    static std::set<std::string> default_positive_words();
    static std::set<std::string> default_negative_words();

private:
    std::set<std::string, std::less<>> positive_;
    std::set<std::string, std::less<>> negative_;
};

struct ArticleAssetScore {
    std::string article_id;
    std::string asset_id;
    Timestamp timestamp{};
    double score = 0.0;  // [-1, 1]
};

ArticleAssetScore score_article_asset(const AssetMention& mention, const NewsArticle& article,
                                      const SentenceScorer& scorer);

// Scores every mention of every article, sorted by (timestamp, article_id, asset_id).
std::vector<ArticleAssetScore> score_articles(std::span<const NewsArticle> articles,
                                              const AliasTable& aliases, const SentenceScorer& scorer);

void sort_scores(std::vector<ArticleAssetScore>& scores);

// JSON Lines: {id, source, timestamp, title, body | sentences}.
std::vector<NewsArticle> parse_articles(std::istream& in, const std::string& source_name);
std::vector<NewsArticle> load_articles(const std::filesystem::path& path);

inline constexpr std::string_view kScoreCsvHeader = "article_id,asset_id,timestamp,score";

std::vector<ArticleAssetScore> parse_precomputed_scores(std::istream& in, const std::string& source_name);
std::vector<ArticleAssetScore> load_precomputed_scores(const std::filesystem::path& path);
void write_scores(std::ostream& out, std::span<const ArticleAssetScore> scores);

}  // namespace sentibt
