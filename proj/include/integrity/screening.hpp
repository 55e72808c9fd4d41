#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "integrity/indicators.hpp"
#include "integrity/keyvalue.hpp"
#include "integrity/ri2.hpp"

namespace integrity::screening {

enum class CombineMode { Both, Either };

std::string_view to_string(CombineMode m);

struct ScreeningConfig {
  std::size_t top_k_by_output = 1000;
  double growth_threshold_pct = 140.0;
  double first_auth_decline_pct = 35.0;
  double corr_auth_decline_pct = 15.0;
  CombineMode combine_mode = CombineMode::Both;
  std::size_t hpa_threshold = 40;
  std::size_t max_coauthors = 100;
  double citation_contrib_threshold = 0.01;
  double collab_threshold = 0.02;
  double intensify_factor = 5.0;
  // Flag predicates.
  double delisted_flag_share = 0.03;
  double retraction_flag_rate = 5.0;
  std::size_t partner_flag_count = 3;
  std::size_t ring_flag_count = 3;

  void validate() const;
  friend bool operator==(const ScreeningConfig&, const ScreeningConfig&) = default;
};

// Every key is optional; unknown keys are a format error.
ScreeningConfig parse_config(const KeyValueDoc& doc);
ScreeningConfig load_config(const std::string& path);
std::string format_config(const ScreeningConfig& config);

// Funnel position: survivors carry Passed.
enum class Stage { Passed = 0, TopK = 1, Growth = 2, Authorship = 3 };

std::string_view to_string(Stage s);

// Result-section families, in reporting order.
enum class Flag { HpaSurge, DelistedReliance, RetractionSurge, DenseCitation, NewPartners };

inline constexpr std::size_t kFlagCount = 5;

std::string_view to_string(Flag f);
Flag parse_flag(std::string_view s);

struct ScreeningReport {
  std::string institution_id;
  Stage exit_stage = Stage::Passed;
  bool passed_growth = false;
  bool passed_authorship = false;
  std::vector<Flag> flags;
  indicators::InstitutionIndicators values;
  // Institutions (other than itself) that contribute at least the citation
  // threshold and receive at least that share back; n/a without citations.
  std::optional<std::size_t> reciprocal_contributors;
  std::size_t new_partners = 0;
  std::optional<ri2::RI2Score> ri2;

  bool has(Flag f) const;
  friend bool operator==(const ScreeningReport&, const ScreeningReport&) = default;
};

// Stage predicates on stored values.
bool passes_growth(const indicators::InstitutionIndicators& v, const ScreeningConfig& config);
bool passes_authorship(const indicators::InstitutionIndicators& v, const ScreeningConfig& config);
// Flags re-derived from a report's stored values.
std::vector<Flag> derive_flags(const ScreeningReport& report, const ScreeningConfig& config);

struct ScreeningInputs {
  const CorpusSnapshot* snapshot = nullptr;
  const indicators::CitationGraph* citations = nullptr;  // optional
  const ri2::Edition* edition = nullptr;                 // optional
};

// Reports for every institution in the snapshot: survivors first, then by exit
// stage and institution id.
std::vector<ScreeningReport> screen(const ScreeningInputs& inputs, const Window& base_window,
                                    const Window& current_window, const ScreeningConfig& config);

enum class RenderFormat { Text, CsvRow };

extern const std::vector<std::string> kReportColumns;

std::string render_report(const ScreeningReport& report, RenderFormat format);
std::string render_reports(const std::vector<ScreeningReport>& reports, RenderFormat format);
ScreeningReport parse_report_row(const std::vector<std::string>& fields);
std::vector<ScreeningReport> parse_reports(std::istream& in, const std::string& source);

}  // namespace integrity::screening
