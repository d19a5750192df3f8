#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sentibt/engine.hpp"
#include "sentibt/newsfeed.hpp"
#include "sentibt/synthetic.hpp"

namespace sentibt {

// Input files named by a run config; relative paths resolve against the config's directory.
struct InputPaths {
    std::filesystem::path prices;
    std::optional<std::filesystem::path> scores;
    std::optional<std::filesystem::path> articles;
    std::optional<std::filesystem::path> aliases;
    std::optional<std::filesystem::path> income;
};

struct LexiconWords {
    std::optional<std::set<std::string>> positive;
    std::optional<std::set<std::string>> negative;
};

struct RunConfig {
    BacktestConfig backtest;
    InputPaths inputs;
    LexiconWords lexicon;
};

// Strict parsing: unknown keys and wrong types are ConfigErrors naming the field.
// JSON syntax errors report the line.
nlohmann::json parse_json_document(std::string_view text, const std::string& source_name);
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

struct SynthConfig {
    SyntheticSpec spec;
    std::optional<std::uint64_t> seed;
};

SynthConfig parse_synthetic_spec(const nlohmann::json& doc);
SynthConfig load_synthetic_spec(const std::filesystem::path& path);

// Precomputed scores, or articles scored with the lexicon baseline. Aliases must
// cover `universe`. Buy&Hold configs need no scores.
std::vector<ArticleAssetScore> load_scores(const RunConfig& config, std::span<const std::string> universe);
std::vector<IncomeEvent> load_income(const std::filesystem::path& path);

}  // namespace sentibt
