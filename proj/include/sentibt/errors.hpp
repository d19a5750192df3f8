#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sentibt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration, usage, or parameter values. The CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Two inputs that must agree (horizon, universe, date range) do not.
class ContractError : public Error {
public:
    using Error::Error;
};

// Anything wrong with input data. The CLI maps these to exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public DataError {
public:
    using DataError::DataError;
};

class DuplicateRecordError : public DataError {
public:
    using DataError::DataError;
};

class DataGapError : public DataError {
public:
    DataGapError(std::string asset, std::string date)
        : DataError("no price bar for " + asset + " on " + date),
          asset_(std::move(asset)),
          date_(std::move(date)) {}

    const std::string& asset() const noexcept { return asset_; }
    const std::string& date() const noexcept { return date_; }

private:
    std::string asset_;
    std::string date_;
};

class NoPredecessorError : public DataError {
public:
    using DataError::DataError;
};

class ScoringError : public DataError {
public:
    ScoringError(std::string article_id, const std::string& what)
        : DataError("scoring article " + article_id + ": " + what), article_id_(std::move(article_id)) {}

    const std::string& article_id() const noexcept { return article_id_; }

private:
    std::string article_id_;
};

// A metric was asked to evaluate outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace sentibt
