#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trustconnect {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict parse: the whole token must be consumed. Throws std::invalid_argument.
double parse_double(std::string_view token);
std::uint64_t parse_u64(std::string_view token);

/// 64-bit FNV-1a, used to pin canonical documents.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

namespace detail {

/// One significant line of a record-oriented document: comment stripped and
/// split on whitespace.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits text into records, skipping blank and comment-only lines.
std::vector<Record> tokenize_records(std::string_view text);

/// Checks that the first record is exactly `header` (e.g. "trustconnect-graph v1").
void expect_header(const std::vector<Record>& records, std::string_view header,
                   const std::string& source);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace detail
}  // namespace trustconnect
