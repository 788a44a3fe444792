#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plp/process.hpp"

namespace plp::cli {

//! Malformed input data or configuration; maps to exit code 2.
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ParseOptions
{
  //! Accept unsorted input and sort it; duplicates are still rejected.
  bool sorted_ok = false;
};

struct ParsedTimes
{
  FailureTimes times;
  std::vector<std::string> warnings;
};

//! One positive decimal per line; blank lines and lines whose first
//! non-blank character is '#' are skipped. `source` names the input in
//! error messages.
ParsedTimes parse_failure_text(std::string_view text, std::string_view source, const ParseOptions& opts = {});
ParsedTimes parse_failure_file(const std::filesystem::path& path, const ParseOptions& opts = {});

//! Positive numbers in the same line format, in any order and with repeats
//! allowed (a sample of shape estimates rather than failure times).
std::vector<double> parse_value_text(std::string_view text, std::string_view source);
std::vector<double> parse_value_file(const std::filesystem::path& path);

//! Same format, values at 17 significant digits so that parsing the text
//! back yields identical doubles.
std::string format_failure_file(const FailureTimes& data, std::string_view header = {});

std::string read_text_file(const std::filesystem::path& path);

} // namespace plp::cli
