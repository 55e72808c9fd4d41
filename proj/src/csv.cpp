#include "integrity/csv.hpp"

#include "integrity/common.hpp"

namespace integrity::csv {

Reader::Reader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

void Reader::expect_header(const std::vector<std::string>& columns) {
  Row row;
  if (!read_record(row)) {
    throw FormatError(source_, 1, 0, "missing header row");
  }
  if (!row.fields.empty() && row.fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    row.fields[0].erase(0, 3);
  }
  for (auto& f : row.fields) f = text::trim(f);
  if (row.fields != columns) {
    throw FormatError(source_, row.line, 0,
                      "header mismatch: expected '" + text::join(columns, ",") +
                          "', found '" + text::join(row.fields, ",") + "'");
  }
  header_ = columns;
}

bool Reader::next(Row& row) {
  if (!read_record(row)) return false;
  if (!header_.empty() && row.fields.size() != header_.size()) {
    throw FormatError(source_, row.line, 0,
                      "expected " + std::to_string(header_.size()) +
                          " fields, found " + std::to_string(row.fields.size()));
  }
  return true;
}

void Reader::fail(const Row& row, std::size_t column,
                  const std::string& message) const {
  std::string name =
      column < header_.size() ? " (" + header_[column] + ")" : std::string();
  throw FormatError(source_, row.line, column + 1, message + name);
}

bool Reader::read_record(Row& row) {
  row.fields.clear();
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  row.line = line_;

  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        // Quoted field continues on the next physical line.
        if (!std::getline(in_, line)) {
          throw FormatError(source_, row.line, row.fields.size() + 1,
                            "unterminated quoted field");
        }
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        field += '\n';
        i = 0;
        continue;
      }
      row.fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty() || was_quoted) {
        throw FormatError(source_, row.line, row.fields.size() + 1,
                          "stray quote inside unquoted field");
      }
      quoted = true;
      was_quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
      ++i;
      continue;
    }
    if (was_quoted) {
      throw FormatError(source_, row.line, row.fields.size() + 1,
                        "characters after closing quote");
    }
    field += c;
    ++i;
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace integrity::csv
