#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace sentibt {

// Minimal RFC 4180 reader: comma separated, optional double quotes, no embedded newlines.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name);

    // Reads the next non-blank record. Returns false at end of input.
    bool next(std::vector<std::string>& fields);
    // Reads the header and checks it matches `expected` exactly.
    void expect_header(const std::vector<std::string>& expected);

    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

// Shortest representation that round-trips to the same double.
std::string format_double(double value);
// Strict full-string parse; returns false on trailing garbage or non-finite values.
bool parse_double(std::string_view text, double& out);

std::string read_file(const std::filesystem::path& path);
// Opens a file for reading; throws DataError naming the path when it cannot be opened.
std::ifstream open_input(const std::filesystem::path& path);

// Writes `content` to `path`, truncating. Throws DataError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Output directories are built in a sibling staging directory and then renamed
// over the target, so readers never observe a half-written result.
std::filesystem::path begin_staging(const std::filesystem::path& target);
void publish_staging(const std::filesystem::path& staging, const std::filesystem::path& target);

}  // namespace sentibt
