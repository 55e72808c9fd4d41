#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace integrity {

// Input could not be read or does not follow the expected file layout.
// The CLI maps this to exit code 2.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, std::size_t line, std::size_t column,
              const std::string& message);
  explicit FormatError(const std::string& message);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string source_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

// Input parsed but violates a domain invariant (duplicate ids, dangling
// references, bad parameters). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inclusive range of calendar years.
struct Window {
  int start_year = 0;
  int end_year = 0;

  constexpr Window() = default;
  Window(int start, int end);

  constexpr bool contains(int year) const {
    return year >= start_year && year <= end_year;
  }
  constexpr int length() const { return end_year - start_year + 1; }
  constexpr bool overlaps(const Window& other) const {
    return start_year <= other.end_year && other.start_year <= end_year;
  }

  // Accepts "2018-2019" or a single year "2020".
  static Window parse(std::string_view text);
  std::string to_string() const;

  friend constexpr bool operator==(const Window&, const Window&) = default;
  friend constexpr auto operator<=>(const Window&, const Window&) = default;
};

// Value used for indicators whose denominator is zero. Rendered as "n/a".
using Measure = std::optional<double>;

inline constexpr std::string_view kUndefined = "n/a";

// Writes `content` to `path` through a sibling temporary file and renames it
// into place, so readers never observe a partial file.
void write_file_atomically(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

namespace text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// Split, trim each piece and drop empty pieces.
std::vector<std::string> split_list(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Locale-independent numeric parsing. Throw std::invalid_argument.
long long parse_int(std::string_view s);
double parse_double(std::string_view s);

// Shortest representation that parses back to the same double.
std::string format_exact(double value);
// Fixed-point with half-up rounding at the given number of decimals.
std::string format_fixed(double value, int decimals);
std::string format_measure(const Measure& m);
Measure parse_measure(std::string_view s);

double round_half_up(double value, int decimals = 0);

}  // namespace text

}  // namespace integrity
