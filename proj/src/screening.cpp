#include "integrity/screening.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"
#include "integrity/networks.hpp"

namespace integrity::screening {

using indicators::InstitutionIndicators;

std::string_view to_string(CombineMode m) { return m == CombineMode::Both ? "both" : "either"; }

namespace {

constexpr std::array<std::string_view, kFlagCount> kFlagNames = {
    "hpa_surge", "delisted_reliance", "retraction_surge", "dense_internal_citation",
    "new_partners"};

constexpr std::array<std::string_view, kFlagCount> kFlagFamilies = {
    "hyper-prolific authorship", "delisted journals", "retractions", "citation network",
    "collaboration network"};

constexpr std::array<std::string_view, 4> kStageNames = {"passed", "top_k", "growth",
                                                         "authorship"};

const std::vector<std::string> kConfigKeys = {
    "top_k_by_output",      "growth_threshold_pct", "first_auth_decline_pct",
    "corr_auth_decline_pct", "combine_mode",        "hpa_threshold",
    "max_coauthors",         "citation_contrib_threshold", "collab_threshold",
    "intensify_factor",      "delisted_flag_share", "retraction_flag_rate",
    "partner_flag_count",    "ring_flag_count"};

}  // namespace

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::string_view to_string(Flag f) { return kFlagNames[static_cast<std::size_t>(f)]; }

Flag parse_flag(std::string_view s) {
  const auto t = text::trim(s);
  for (std::size_t i = 0; i < kFlagNames.size(); ++i) {
    if (t == kFlagNames[i]) return static_cast<Flag>(i);
  }
  throw ValidationError("unknown flag '" + t + "'");
}

void ScreeningConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ValidationError(std::string(name) + " must be positive");
  };
  if (top_k_by_output == 0) throw ValidationError("top_k_by_output must be positive");
  if (hpa_threshold == 0) throw ValidationError("hpa_threshold must be positive");
  if (max_coauthors == 0) throw ValidationError("max_coauthors must be positive");
  if (partner_flag_count == 0) throw ValidationError("partner_flag_count must be positive");
  if (ring_flag_count == 0) throw ValidationError("ring_flag_count must be positive");
  positive(growth_threshold_pct, "growth_threshold_pct");
  positive(first_auth_decline_pct, "first_auth_decline_pct");
  positive(corr_auth_decline_pct, "corr_auth_decline_pct");
  positive(citation_contrib_threshold, "citation_contrib_threshold");
  positive(collab_threshold, "collab_threshold");
  positive(intensify_factor, "intensify_factor");
  positive(delisted_flag_share, "delisted_flag_share");
  positive(retraction_flag_rate, "retraction_flag_rate");
  if (citation_contrib_threshold > 1.0 || collab_threshold > 1.0 || delisted_flag_share > 1.0) {
    throw ValidationError("share thresholds must not exceed 1");
  }
}

ScreeningConfig parse_config(const KeyValueDoc& doc) {
  doc.reject_unknown(kConfigKeys);
  ScreeningConfig c;
  auto count = [&](const char* key, std::size_t& field) {
    if (!doc.has(key)) return;
    const auto v = doc.require_int(key);
    if (v < 0) throw ValidationError(doc.source() + ": " + key + " must be >= 0");
    field = static_cast<std::size_t>(v);
  };
  auto real = [&](const char* key, double& field) {
    if (doc.has(key)) field = doc.require_double(key);
  };
  count("top_k_by_output", c.top_k_by_output);
  real("growth_threshold_pct", c.growth_threshold_pct);
  real("first_auth_decline_pct", c.first_auth_decline_pct);
  real("corr_auth_decline_pct", c.corr_auth_decline_pct);
  if (const auto* mode = doc.find("combine_mode")) {
    const auto m = text::to_lower(*mode);
    if (m == "both") {
      c.combine_mode = CombineMode::Both;
    } else if (m == "either") {
      c.combine_mode = CombineMode::Either;
    } else {
      throw FormatError(doc.source() + ": combine_mode must be both or either, got '" + *mode +
                        "'");
    }
  }
  count("hpa_threshold", c.hpa_threshold);
  count("max_coauthors", c.max_coauthors);
  real("citation_contrib_threshold", c.citation_contrib_threshold);
  real("collab_threshold", c.collab_threshold);
  real("intensify_factor", c.intensify_factor);
  real("delisted_flag_share", c.delisted_flag_share);
  real("retraction_flag_rate", c.retraction_flag_rate);
  count("partner_flag_count", c.partner_flag_count);
  count("ring_flag_count", c.ring_flag_count);
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(doc.source() + ": " + e.what());
  }
  return c;
}

ScreeningConfig load_config(const std::string& path) {
  return parse_config(KeyValueDoc::load(path));
}

std::string format_config(const ScreeningConfig& c) {
  KeyValueDoc doc;
  doc.set("top_k_by_output", std::to_string(c.top_k_by_output));
  doc.set("growth_threshold_pct", text::format_exact(c.growth_threshold_pct));
  doc.set("first_auth_decline_pct", text::format_exact(c.first_auth_decline_pct));
  doc.set("corr_auth_decline_pct", text::format_exact(c.corr_auth_decline_pct));
  doc.set("combine_mode", std::string(to_string(c.combine_mode)));
  doc.set("hpa_threshold", std::to_string(c.hpa_threshold));
  doc.set("max_coauthors", std::to_string(c.max_coauthors));
  doc.set("citation_contrib_threshold", text::format_exact(c.citation_contrib_threshold));
  doc.set("collab_threshold", text::format_exact(c.collab_threshold));
  doc.set("intensify_factor", text::format_exact(c.intensify_factor));
  doc.set("delisted_flag_share", text::format_exact(c.delisted_flag_share));
  doc.set("retraction_flag_rate", text::format_exact(c.retraction_flag_rate));
  doc.set("partner_flag_count", std::to_string(c.partner_flag_count));
  doc.set("ring_flag_count", std::to_string(c.ring_flag_count));
  return doc.render();
}

bool ScreeningReport::has(Flag f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

bool passes_growth(const InstitutionIndicators& v, const ScreeningConfig& config) {
  return v.growth_pct && *v.growth_pct > config.growth_threshold_pct;
}

bool passes_authorship(const InstitutionIndicators& v, const ScreeningConfig& config) {
  const bool first = v.first_auth_delta_pct && *v.first_auth_delta_pct < -config.first_auth_decline_pct;
  const bool corr = v.corr_auth_delta_pct && *v.corr_auth_delta_pct < -config.corr_auth_decline_pct;
  return config.combine_mode == CombineMode::Both ? first && corr : first || corr;
}

std::vector<Flag> derive_flags(const ScreeningReport& r, const ScreeningConfig& config) {
  const auto& v = r.values;
  std::vector<Flag> out;
  if (v.hpa_count_current > v.hpa_count_base && v.hpa_count_current >= 1) {
    out.push_back(Flag::HpaSurge);
  }
  if (v.delisted_share && *v.delisted_share >= config.delisted_flag_share) {
    out.push_back(Flag::DelistedReliance);
  }
  if (v.retraction_rate && *v.retraction_rate >= config.retraction_flag_rate) {
    out.push_back(Flag::RetractionSurge);
  }
  if (r.reciprocal_contributors && *r.reciprocal_contributors >= config.ring_flag_count) {
    out.push_back(Flag::DenseCitation);
  }
  if (r.new_partners >= config.partner_flag_count) out.push_back(Flag::NewPartners);
  return out;
}

namespace {

using ContributorSets = std::map<std::string, std::set<std::string>, std::less<>>;

ContributorSets contributor_sets(const indicators::CitationGraph& graph,
                                 const std::vector<std::string>& institutions,
                                 const Window& window, double threshold) {
  ContributorSets out;
  for (const auto& inst : institutions) {
    const auto tally =
        indicators::tally_citations(graph, inst, window, indicators::Basis::Top2);
    if (tally.total == 0) continue;
    auto& set = out[inst];
    for (const auto& [other, count] : tally.by_institution) {
      if (other == inst) continue;
      if (static_cast<double>(count) / static_cast<double>(tally.total) >= threshold) {
        set.insert(other);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ScreeningReport> screen(const ScreeningInputs& inputs, const Window& base_window,
                                    const Window& current_window,
                                    const ScreeningConfig& config) {
  if (!inputs.snapshot) throw ValidationError("screening needs a corpus snapshot");
  config.validate();
  if (base_window.overlaps(current_window) || base_window.end_year >= current_window.start_year) {
    throw ValidationError("base window " + base_window.to_string() +
                          " must end before current window " + current_window.to_string());
  }
  const auto& snapshot = *inputs.snapshot;
  indicators::IndicatorOptions options;
  options.scope.max_coauthors = config.max_coauthors;
  options.hpa_threshold = config.hpa_threshold;
  const indicators::IndicatorEngine engine(snapshot, base_window, current_window, options,
                                           inputs.citations);
  const auto& institutions = snapshot.institutions();

  std::vector<ScreeningReport> reports;
  reports.reserve(institutions.size());
  for (const auto& inst : institutions) {
    ScreeningReport r;
    r.institution_id = inst;
    r.values = engine.compute(inst);
    r.passed_growth = passes_growth(r.values, config);
    r.passed_authorship = passes_authorship(r.values, config);
    r.new_partners = networks::new_or_intensified(snapshot, inst, base_window, current_window,
                                                  config.intensify_factor,
                                                  config.collab_threshold, options.scope)
                         .size();
    reports.push_back(std::move(r));
  }

  if (inputs.citations) {
    const auto sets = contributor_sets(*inputs.citations, institutions, current_window,
                                       config.citation_contrib_threshold);
    for (auto& r : reports) {
      std::size_t reciprocal = 0;
      auto it = sets.find(r.institution_id);
      if (it != sets.end()) {
        for (const auto& other : it->second) {
          auto back = sets.find(other);
          if (back != sets.end() && back->second.count(r.institution_id)) ++reciprocal;
        }
      }
      r.reciprocal_contributors = reciprocal;
    }
  }

  if (inputs.edition) {
    std::vector<ri2::RI2Score> scores;
    for (const auto& r : reports) {
      if (r.values.retraction_rate && r.values.delisted_share) {
        scores.push_back(ri2::compute_score(r.institution_id, *r.values.retraction_rate,
                                            *r.values.delisted_share, *inputs.edition));
      }
    }
    std::map<std::string, ri2::RI2Score> by_id;
    for (auto& s : ri2::rank(std::move(scores))) by_id.emplace(s.institution_id, s);
    for (auto& r : reports) {
      auto it = by_id.find(r.institution_id);
      if (it != by_id.end()) r.ri2 = it->second;
    }
  }

  // Stage 1: top_k by current-window output.
  if (institutions.size() < config.top_k_by_output) {
    warn("only " + std::to_string(institutions.size()) + " institutions in the corpus; top_k " +
         std::to_string(config.top_k_by_output) + " keeps all of them");
  }
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ca = reports[a].values.article_count_current;
    const auto cb = reports[b].values.article_count_current;
    if (ca != cb) return ca > cb;
    return reports[a].institution_id < reports[b].institution_id;
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    auto& r = reports[order[rank]];
    if (rank >= config.top_k_by_output) {
      r.exit_stage = Stage::TopK;
    } else if (!r.passed_growth) {
      r.exit_stage = Stage::Growth;
    } else if (!r.passed_authorship) {
      r.exit_stage = Stage::Authorship;
    } else {
      r.exit_stage = Stage::Passed;
    }
  }

  for (auto& r : reports) r.flags = derive_flags(r, config);

  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.exit_stage != b.exit_stage) return a.exit_stage < b.exit_stage;
    return a.institution_id < b.institution_id;
  });
  return reports;
}

namespace {

std::vector<std::string> indicator_columns() {
  std::vector<std::string> cols(indicators::kIndicatorColumns.begin() + 1,
                                indicators::kIndicatorColumns.end());
  return cols;
}

std::string optional_count(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string(kUndefined);
}

}  // namespace

const std::vector<std::string> kReportColumns = [] {
  std::vector<std::string> cols = {"institution_id", "exit_stage", "passed_growth",
                                   "passed_authorship", "flags"};
  for (auto& c : indicator_columns()) cols.push_back(c);
  for (const char* c : {"reciprocal_contributors", "new_partners", "ri2_normalized_retraction",
                        "ri2_normalized_delisted", "ri2_score", "ri2_tier", "ri2_rank"}) {
    cols.emplace_back(c);
  }
  return cols;
}();

namespace {

std::vector<std::string> report_fields(const ScreeningReport& r) {
  std::vector<std::string> flag_names;
  for (auto f : r.flags) flag_names.emplace_back(to_string(f));
  std::vector<std::string> fields = {r.institution_id, std::string(to_string(r.exit_stage)),
                                     r.passed_growth ? "true" : "false",
                                     r.passed_authorship ? "true" : "false",
                                     text::join(flag_names, ";")};
  const auto values = indicators::indicator_row(r.values);
  fields.insert(fields.end(), values.begin() + 1, values.end());
  fields.push_back(optional_count(r.reciprocal_contributors));
  fields.push_back(std::to_string(r.new_partners));
  if (r.ri2) {
    fields.push_back(text::format_exact(r.ri2->normalized_retraction));
    fields.push_back(text::format_exact(r.ri2->normalized_delisted));
    fields.push_back(text::format_exact(r.ri2->score));
    fields.emplace_back(to_string(r.ri2->tier));
    fields.push_back(std::to_string(r.ri2->rank));
  } else {
    for (int i = 0; i < 5; ++i) fields.emplace_back(kUndefined);
  }
  return fields;
}

std::string describe(const ScreeningReport& r, Flag f) {
  const auto& v = r.values;
  switch (f) {
    case Flag::HpaSurge:
      return "hyper-prolific authors rose from " + std::to_string(v.hpa_count_base) + " to " +
             std::to_string(v.hpa_count_current);
    case Flag::DelistedReliance:
      return indicators::display_share(v.delisted_share) +
             " of current output in delisted journals";
    case Flag::RetractionSurge:
      return indicators::display_rate(v.retraction_rate) + " retractions per 1,000 articles";
    case Flag::DenseCitation:
      return optional_count(r.reciprocal_contributors) +
             " reciprocal major citation contributors";
    case Flag::NewPartners:
      return std::to_string(r.new_partners) + " new or intensified major collaborators";
  }
  return {};
}

}  // namespace

std::string render_report(const ScreeningReport& r, RenderFormat format) {
  if (format == RenderFormat::CsvRow) return csv::format_row(report_fields(r));
  const auto& v = r.values;
  std::string out = "== " + r.institution_id + "\n";
  out += "stage: " + std::string(to_string(r.exit_stage)) + "\n";
  out += "growth: " + indicators::display_percent(v.growth_pct) + " (" +
         std::to_string(v.article_count_base) + " -> " + std::to_string(v.article_count_current) +
         " articles, " + v.base_window.to_string() + " -> " + v.current_window.to_string() + ")\n";
  out += "first authorship: " + indicators::display_share(v.first_auth_rate_base) + " -> " +
         indicators::display_share(v.first_auth_rate_current) + " (" +
         indicators::display_percent(v.first_auth_delta_pct) + ")\n";
  out += "corresponding authorship: " + indicators::display_share(v.corr_auth_rate_base) +
         " -> " + indicators::display_share(v.corr_auth_rate_current) + " (" +
         indicators::display_percent(v.corr_auth_delta_pct) + ")\n";
  if (r.ri2) {
    out += "ri2: " + text::format_fixed(r.ri2->score, 3) + " " +
           std::string(to_string(r.ri2->tier)) + " (rank " + std::to_string(r.ri2->rank) + ")\n";
  } else {
    out += "ri2: n/a\n";
  }
  if (r.flags.empty()) return out + "no flags\n";
  out += "findings:\n";
  for (std::size_t i = 0; i < kFlagCount; ++i) {
    const auto f = static_cast<Flag>(i);
    if (!r.has(f)) continue;
    out += "  [" + std::string(kFlagFamilies[i]) + "] " + describe(r, f) + "\n";
  }
  return out;
}

std::string render_reports(const std::vector<ScreeningReport>& reports, RenderFormat format) {
  std::string out;
  if (format == RenderFormat::CsvRow) {
    out = csv::format_row(kReportColumns);
    for (const auto& r : reports) out += render_report(r, format);
    return out;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += "\n";
    out += render_report(reports[i], format);
  }
  return out;
}

namespace {

Stage parse_stage(std::string_view s) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (s == kStageNames[i]) return static_cast<Stage>(i);
  }
  throw ValidationError("unknown exit stage '" + std::string(s) + "'");
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValidationError("expected true or false, got '" + std::string(s) + "'");
}

std::size_t parse_size(std::string_view s) {
  const auto v = text::parse_int(s);
  if (v < 0) throw ValidationError("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

ScreeningReport parse_report_row(const std::vector<std::string>& fields) {
  if (fields.size() != kReportColumns.size()) {
    throw ValidationError("report row has " + std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(kReportColumns.size()));
  }
  ScreeningReport r;
  r.institution_id = fields[0];
  r.exit_stage = parse_stage(fields[1]);
  r.passed_growth = parse_bool(fields[2]);
  r.passed_authorship = parse_bool(fields[3]);
  for (const auto& name : text::split_list(fields[4], ';')) r.flags.push_back(parse_flag(name));

  std::vector<std::string> value_fields = {fields[0]};
  const std::size_t n_values = indicators::kIndicatorColumns.size() - 1;
  value_fields.insert(value_fields.end(), fields.begin() + 5, fields.begin() + 5 + static_cast<std::ptrdiff_t>(n_values));
  r.values = indicators::parse_indicator_row(value_fields);

  std::size_t i = 5 + n_values;
  if (fields[i] != kUndefined) r.reciprocal_contributors = parse_size(fields[i]);
  r.new_partners = parse_size(fields[i + 1]);
  if (fields[i + 2] != kUndefined) {
    ri2::RI2Score s;
    s.institution_id = r.institution_id;
    s.normalized_retraction = text::parse_double(fields[i + 2]);
    s.normalized_delisted = text::parse_double(fields[i + 3]);
    s.score = text::parse_double(fields[i + 4]);
    s.tier = ri2::parse_tier(fields[i + 5]);
    s.rank = parse_size(fields[i + 6]);
    r.ri2 = s;
  }
  return r;
}

std::vector<ScreeningReport> parse_reports(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kReportColumns);
  std::vector<ScreeningReport> out;
  csv::Row row;
  while (reader.next(row)) {
    try {
      out.push_back(parse_report_row(row.fields));
    } catch (const std::exception& e) {
      reader.fail(row, 0, e.what());
    }
  }
  return out;
}

}  // namespace integrity::screening
