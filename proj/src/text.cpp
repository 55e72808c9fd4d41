#include "integrity/common.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace integrity {

FormatError::FormatError(std::string source, std::size_t line,
                         std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) +
                         (column ? ":" + std::to_string(column) : "") + ": " +
                         message),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

FormatError::FormatError(const std::string& message)
    : std::runtime_error(message) {}

Window::Window(int start, int end) : start_year(start), end_year(end) {
  if (start > end) {
    throw ValidationError("window start " + std::to_string(start) +
                          " is after end " + std::to_string(end));
  }
}

Window Window::parse(std::string_view raw) {
  const std::string s = text::trim(raw);
  try {
    // Skip a leading sign so "-" is only treated as the range separator.
    const auto dash = s.find('-', 1);
    if (dash == std::string::npos) {
      const int y = static_cast<int>(text::parse_int(s));
      return Window(y, y);
    }
    const int a = static_cast<int>(text::parse_int(s.substr(0, dash)));
    const int b = static_cast<int>(text::parse_int(s.substr(dash + 1)));
    return Window(a, b);
  } catch (const std::invalid_argument&) {
    throw FormatError("invalid year window '" + s + "'");
  }
}

std::string Window::to_string() const {
  return std::to_string(start_year) + "-" + std::to_string(end_year);
}

namespace text {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  for (auto& piece : split(s, sep)) {
    auto t = trim(piece);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

long long parse_int(std::string_view raw) {
  const std::string s = trim(raw);
  long long value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return value;
}

double parse_double(std::string_view raw) {
  const std::string s = trim(raw);
  double value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return value;
}

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so values printed as x.xx5 round up as displayed.
  const double scaled = value * scale;
  return std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, std::abs(scaled))) /
         scale;
}

std::string format_fixed(double value, int decimals) {
  double r = round_half_up(value, decimals);
  if (r == 0.0) r = 0.0;  // drop negative zero
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), r,
                                 std::chars_format::fixed, decimals);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string format_measure(const Measure& m) {
  return m ? format_exact(*m) : std::string(kUndefined);
}

Measure parse_measure(std::string_view s) {
  const auto t = trim(s);
  if (t == kUndefined) return std::nullopt;
  return parse_double(t);
}

}  // namespace text
}  // namespace integrity
