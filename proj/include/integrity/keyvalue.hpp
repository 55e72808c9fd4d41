#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace integrity {

// Ordered key=value document. Lines starting with '#' and blank lines are
// ignored; keys and values are trimmed; a repeated key is a format error.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::istream& in, const std::string& source);
  static KeyValueDoc load(const std::string& path);

  void set(std::string key, std::string value);
  bool has(const std::string& key) const;
  const std::string* find(const std::string& key) const;
  // Throws FormatError naming the source when the key is missing.
  const std::string& require(const std::string& key) const;
  double require_double(const std::string& key) const;
  long long require_int(const std::string& key) const;

  // Throws FormatError for any key not in `allowed`.
  void reject_unknown(const std::vector<std::string>& allowed) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  std::string render() const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::size_t> lines_;
};

}  // namespace integrity
