#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace integrity::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// RFC-4180 reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines, CRLF or LF line ends. Blank lines are skipped.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  // Reads the header row and checks it against `columns` exactly.
  void expect_header(const std::vector<std::string>& columns);

  // Returns false at end of input. Throws FormatError on malformed quoting
  // or when the field count differs from the header.
  bool next(Row& row);

  const std::string& source() const { return source_; }

  // Throws FormatError pointing at `column` (0-based) of `row`.
  [[noreturn]] void fail(const Row& row, std::size_t column,
                         const std::string& message) const;

 private:
  bool read_record(Row& row);

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

std::string escape(std::string_view field);
// One record terminated by '\n'.
std::string format_row(const std::vector<std::string>& fields);

}  // namespace integrity::csv
