#include <sstream>

#include "integrity/csv.hpp"
#include "integrity/indicators.hpp"

namespace integrity::indicators {

std::vector<std::string> indicator_row(const InstitutionIndicators& r) {
  return {
      r.institution_id,
      r.base_window.to_string(),
      r.current_window.to_string(),
      std::to_string(r.article_count_base),
      std::to_string(r.article_count_current),
      text::format_measure(r.growth_pct),
      text::format_measure(r.first_auth_rate_base),
      text::format_measure(r.first_auth_rate_current),
      text::format_measure(r.corr_auth_rate_base),
      text::format_measure(r.corr_auth_rate_current),
      text::format_measure(r.first_auth_delta_pct),
      text::format_measure(r.corr_auth_delta_pct),
      std::to_string(r.hpa_count_base),
      std::to_string(r.hpa_count_current),
      text::format_measure(r.delisted_share),
      text::format_measure(r.retraction_rate),
      text::format_measure(r.top2_share),
      text::format_measure(r.self_citation_rate),
  };
}

std::string format_indicator_table(const std::vector<InstitutionIndicators>& rows) {
  std::string out = csv::format_row(kIndicatorColumns);
  for (const auto& r : rows) out += csv::format_row(indicator_row(r));
  return out;
}

namespace {

struct FieldError {
  std::size_t column;
  std::string message;
};

std::size_t parse_count(const std::vector<std::string>& f, std::size_t col) {
  long long v = 0;
  try {
    v = text::parse_int(f[col]);
  } catch (const std::invalid_argument&) {
    throw FieldError{col, "expected a non-negative integer, got '" + f[col] + "'"};
  }
  if (v < 0) throw FieldError{col, "count must be >= 0"};
  return static_cast<std::size_t>(v);
}

Measure parse_value(const std::vector<std::string>& f, std::size_t col) {
  try {
    return text::parse_measure(f[col]);
  } catch (const std::invalid_argument&) {
    throw FieldError{col, "expected a number or n/a, got '" + f[col] + "'"};
  }
}

Window parse_window(const std::vector<std::string>& f, std::size_t col) {
  try {
    return Window::parse(f[col]);
  } catch (const std::exception& e) {
    throw FieldError{col, e.what()};
  }
}

InstitutionIndicators parse_fields(const std::vector<std::string>& f) {
  if (f.size() != kIndicatorColumns.size()) {
    throw FieldError{0, "expected " + std::to_string(kIndicatorColumns.size()) + " fields"};
  }
  InstitutionIndicators r;
  r.institution_id = text::trim(f[0]);
  if (r.institution_id.empty()) throw FieldError{0, "empty institution_id"};
  r.base_window = parse_window(f, 1);
  r.current_window = parse_window(f, 2);
  r.article_count_base = parse_count(f, 3);
  r.article_count_current = parse_count(f, 4);
  r.growth_pct = parse_value(f, 5);
  r.first_auth_rate_base = parse_value(f, 6);
  r.first_auth_rate_current = parse_value(f, 7);
  r.corr_auth_rate_base = parse_value(f, 8);
  r.corr_auth_rate_current = parse_value(f, 9);
  r.first_auth_delta_pct = parse_value(f, 10);
  r.corr_auth_delta_pct = parse_value(f, 11);
  r.hpa_count_base = parse_count(f, 12);
  r.hpa_count_current = parse_count(f, 13);
  r.delisted_share = parse_value(f, 14);
  r.retraction_rate = parse_value(f, 15);
  r.top2_share = parse_value(f, 16);
  r.self_citation_rate = parse_value(f, 17);
  return r;
}

}  // namespace

InstitutionIndicators parse_indicator_row(const std::vector<std::string>& fields) {
  try {
    return parse_fields(fields);
  } catch (const FieldError& e) {
    throw ValidationError(kIndicatorColumns[e.column] + ": " + e.message);
  }
}

std::vector<InstitutionIndicators> parse_indicator_table(std::istream& in,
                                                         const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kIndicatorColumns);
  std::vector<InstitutionIndicators> out;
  csv::Row row;
  while (reader.next(row)) {
    try {
      out.push_back(parse_fields(row.fields));
    } catch (const FieldError& e) {
      reader.fail(row, e.column, e.message);
    }
  }
  return out;
}

}  // namespace integrity::indicators
