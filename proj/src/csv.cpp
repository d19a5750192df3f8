#include "sentibt/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "sentibt/errors.hpp"

namespace sentibt {

CsvReader::CsvReader(std::istream& in, std::string source_name) : in_(in), source_(std::move(source_name)) {}

bool CsvReader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_ == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        fields = split_csv_line(line);
        return true;
    }
    return false;
}

void CsvReader::expect_header(const std::vector<std::string>& expected) {
    std::vector<std::string> fields;
    if (!next(fields)) {
        throw ParseError(source_, line_ == 0 ? 1 : line_, "missing header row");
    }
    if (fields != expected) {
        std::string want;
        for (const auto& f : expected) {
            want += (want.empty() ? "" : ",") + f;
        }
        throw ParseError(source_, line_, "expected header '" + want + "'");
    }
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return std::to_string(value);
    }
    return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return false;
    }
    out = value;
    return true;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

std::string read_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw DataError("write failed for " + path.string());
    }
}

namespace {

std::filesystem::path normalized(const std::filesystem::path& target) {
    return target.has_filename() ? target : target.parent_path();
}

std::filesystem::path with_suffix(const std::filesystem::path& target, const char* suffix) {
    std::filesystem::path p = normalized(target);
    p += suffix;
    return p;
}

}  // namespace

std::filesystem::path begin_staging(const std::filesystem::path& target) {
    auto staging = with_suffix(target, ".staging");
    std::error_code ec;
    std::filesystem::remove_all(staging, ec);
    std::filesystem::create_directories(staging);
    return staging;
}

void publish_staging(const std::filesystem::path& staging, const std::filesystem::path& target) {
    auto final_path = normalized(target);
    auto previous = with_suffix(target, ".previous");
    std::error_code ec;
    std::filesystem::remove_all(previous, ec);
    if (std::filesystem::exists(final_path)) {
        std::filesystem::rename(final_path, previous);
    }
    std::filesystem::rename(staging, final_path);
    std::filesystem::remove_all(previous, ec);
}

}  // namespace sentibt
