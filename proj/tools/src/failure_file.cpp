#include "plp/cli/failure_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace plp::cli {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what)
{
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw InputError(msg.str());
}

} // namespace

ParsedTimes parse_failure_text(std::string_view text, std::string_view source, const ParseOptions& opts)
{
  std::vector<std::pair<double, std::size_t>> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      fail(source, line_no, "not a number: '" + std::string(line) + "'");
    }
    if (!std::isfinite(v) || !(v > 0.0)) {
      fail(source, line_no, "failure times must be positive and finite, got " + std::string(line));
    }
    if (!opts.sorted_ok && !values.empty()) {
      if (v == values.back().first) {
        fail(source, line_no, "duplicate failure time " + std::string(line) + " (first seen on line " +
                                std::to_string(values.back().second) + ")");
      }
      if (v < values.back().first) {
        fail(source, line_no, "failure times must be strictly increasing (use --sorted-ok to sort)");
      }
    }
    values.emplace_back(v, line_no);
  }
  if (values.empty()) {
    throw InputError(std::string(source) + ": no failure times found");
  }

  std::vector<std::string> warnings;
  if (opts.sorted_ok && !std::is_sorted(values.begin(), values.end())) {
    std::stable_sort(values.begin(), values.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    warnings.push_back(std::string(source) + ": input was not sorted; sorted ascending");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].first == values[i - 1].first) {
      const auto line = std::max(values[i].second, values[i - 1].second);
      const auto other = std::min(values[i].second, values[i - 1].second);
      fail(source, line, "duplicate failure time (first seen on line " + std::to_string(other) + ")");
    }
  }

  std::vector<double> times;
  times.reserve(values.size());
  for (const auto& [v, line] : values) {
    times.push_back(v);
  }
  return ParsedTimes{FailureTimes(std::move(times)), std::move(warnings)};
}

std::vector<double> parse_value_text(std::string_view text, std::string_view source)
{
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      fail(source, line_no, "not a number: '" + std::string(line) + "'");
    }
    if (!std::isfinite(v) || !(v > 0.0)) {
      fail(source, line_no, "values must be positive and finite, got " + std::string(line));
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw InputError(std::string(source) + ": no values found");
  }
  return values;
}

std::vector<double> parse_value_file(const std::filesystem::path& path)
{
  return parse_value_text(read_text_file(path), path.string());
}

std::string read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParsedTimes parse_failure_file(const std::filesystem::path& path, const ParseOptions& opts)
{
  return parse_failure_text(read_text_file(path), path.string(), opts);
}

std::string format_failure_file(const FailureTimes& data, std::string_view header)
{
  std::string out;
  if (!header.empty()) {
    out += "# ";
    out += header;
    out += '\n';
  }
  char buf[32];
  for (double t : data.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", t);
    out += buf;
  }
  return out;
}

} // namespace plp::cli
