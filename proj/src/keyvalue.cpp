#include "integrity/keyvalue.hpp"

#include <algorithm>
#include <fstream>

#include "integrity/common.hpp"

namespace integrity {

KeyValueDoc KeyValueDoc::parse(std::istream& in, const std::string& source) {
  KeyValueDoc doc;
  doc.source_ = source;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError(source, number, 0, "expected key=value");
    }
    auto key = text::trim(t.substr(0, eq));
    if (key.empty()) throw FormatError(source, number, 1, "empty key");
    if (doc.has(key)) {
      throw FormatError(source, number, 1, "duplicate key '" + key + "'");
    }
    doc.entries_.emplace_back(std::move(key), text::trim(t.substr(eq + 1)));
    doc.lines_.push_back(number);
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse(in, path);
}

void KeyValueDoc::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
  lines_.push_back(0);
}

bool KeyValueDoc::has(const std::string& key) const {
  return find(key) != nullptr;
}

const std::string* KeyValueDoc::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& KeyValueDoc::require(const std::string& key) const {
  if (const auto* v = find(key)) return *v;
  throw FormatError(source_ + ": missing key '" + key + "'");
}

double KeyValueDoc::require_double(const std::string& key) const {
  try {
    return text::parse_double(require(key));
  } catch (const std::invalid_argument& e) {
    throw FormatError(source_ + ": key '" + key + "': " + e.what());
  }
}

long long KeyValueDoc::require_int(const std::string& key) const {
  try {
    return text::parse_int(require(key));
  } catch (const std::invalid_argument& e) {
    throw FormatError(source_ + ": key '" + key + "': " + e.what());
  }
}

void KeyValueDoc::reject_unknown(const std::vector<std::string>& allowed) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& key = entries_[i].first;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw FormatError(source_, lines_[i], 1, "unknown key '" + key + "'");
    }
  }
}

std::string KeyValueDoc::render() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace integrity
