#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "integrity/corpus.hpp"

namespace integrity::indicators {

inline constexpr std::size_t kHpaThreshold = 40;

// ratio of counts; undefined when the denominator is zero.
Measure fraction(std::size_t numerator, std::size_t denominator);
// Events per 1,000 articles; undefined for zero articles.
Measure per_thousand(std::size_t events, std::size_t articles);

std::size_t output_count(const CorpusSnapshot& snapshot, std::string_view institution,
                         const Window& window, const Scope& scope = {});

// 100 * (current - base) / base; undefined for base == 0.
Measure growth(std::size_t base_count, std::size_t current_count);

struct AuthorshipRates {
  Measure first;
  Measure corresponding;
};

AuthorshipRates authorship_rates(const CorpusSnapshot& snapshot,
                                 std::string_view institution, const Window& window,
                                 const Scope& scope = {});

// Relative change in percent; undefined when the base rate is zero or either
// side is undefined.
Measure authorship_decline(double rate_base, double rate_current);
Measure authorship_decline(const Measure& rate_base, const Measure& rate_current);

// author_id -> qualifying publication count for one calendar year,
// restricted to counts >= threshold.
using AuthorCounts = std::map<std::string, std::size_t, std::less<>>;
AuthorCounts hyper_prolific_authors(const CorpusSnapshot& snapshot, int year,
                                    std::size_t threshold = kHpaThreshold,
                                    std::size_t max_coauthors = 100);

// Per-year hyper-prolific author index over a window. An author counts for an
// institution when they reach the threshold in some year of the window and
// list the institution on at least one of that year's qualifying articles.
class HpaIndex {
 public:
  HpaIndex(const CorpusSnapshot& snapshot, const Window& window,
           std::size_t threshold = kHpaThreshold, const Scope& scope = {});

  std::size_t count(std::string_view institution) const;
  // Sorted distinct author ids counted for the institution.
  std::vector<std::string> authors(std::string_view institution) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> by_institution_;
};

std::size_t hpa_count(const CorpusSnapshot& snapshot, std::string_view institution,
                      const Window& window, std::size_t threshold = kHpaThreshold,
                      const Scope& scope = {});

struct Share {
  std::size_t count = 0;
  Measure fraction;  // count / output_count
};

Share delisted_share(const CorpusSnapshot& snapshot, std::string_view institution,
                     const Window& window, const Scope& scope = {});

struct RetractionTally {
  std::size_t retractions = 0;  // retracted publications, not retraction notices
  std::size_t articles = 0;
  Measure rate;  // per 1,000 articles
};

// Retracted publications are placed by publication year, not retraction year.
RetractionTally retraction_rate(const CorpusSnapshot& snapshot, std::string_view institution,
                                const Window& window, const Scope& scope = {});

// (analysis_year - 3, analysis_year - 2)
Window default_retraction_window(int analysis_year);

// Highly cited flags: within each publication-year cohort of in-scope
// publications, the floor(2% * n) most cited, ties by pub_id ascending.
class Top2Flags {
 public:
  Top2Flags() = default;
  Top2Flags(const CorpusSnapshot& snapshot, const Scope& scope);

  bool contains(std::size_t pub_index) const {
    return pub_index < flags_.size() && flags_[pub_index];
  }
  std::size_t size() const { return count_; }
  // Sorted pub ids.
  std::vector<std::string> ids(const CorpusSnapshot& snapshot) const;

 private:
  std::vector<bool> flags_;
  std::size_t count_ = 0;
};

// Number of publications flagged in a cohort of n.
constexpr std::size_t top2_cohort_quota(std::size_t n) { return n * 2 / 100; }

Top2Flags top2_flags(const CorpusSnapshot& snapshot, const Scope& scope = {});

Share top2_share(const CorpusSnapshot& snapshot, std::string_view institution,
                 const Window& window, const Scope& scope = {});
Share top2_share(const CorpusSnapshot& snapshot, const Top2Flags& flags,
                 std::string_view institution, const Window& window, const Scope& scope = {});

enum class Basis { Top2, All };

std::string_view to_string(Basis b);
Basis parse_basis(std::string_view s);

// Citation links resolved against a snapshot. Edges whose ids are not in the
// snapshot are rejected; self pairs and duplicates are dropped.
class CitationGraph {
 public:
  CitationGraph(const CorpusSnapshot& snapshot, const CitationEdgeTable& edges,
                const Scope& scope = {});

  const CorpusSnapshot& snapshot() const { return *snapshot_; }
  const Scope& scope() const { return scope_; }
  const Top2Flags& top2() const { return top2_; }
  std::size_t edge_count() const { return edge_count_; }
  // Indices of publications citing publication `cited`.
  const std::vector<std::size_t>& citing(std::size_t cited) const { return citing_[cited]; }

 private:
  const CorpusSnapshot* snapshot_;
  Scope scope_;
  Top2Flags top2_;
  std::vector<std::vector<std::size_t>> citing_;
  std::size_t edge_count_ = 0;
};

// Basis articles of an institution: its in-scope window publications,
// intersected with the top-2% flags for Basis::Top2.
PublicationView basis_set(const CitationGraph& graph, std::string_view institution,
                          const Window& window, Basis basis);

// Citations received by the basis set from publications dated inside the
// window. Each citing publication credits every institution it lists once;
// the total counts each citation once.
struct CitationTally {
  std::size_t total = 0;
  std::map<std::string, std::size_t, std::less<>> by_institution;
};

CitationTally tally_citations(const CitationGraph& graph, std::string_view institution,
                              const Window& window, Basis basis);

Measure self_citation_rate(const CitationGraph& graph, std::string_view institution,
                           const Window& window, Basis basis = Basis::Top2);

struct GroupRate {
  std::string group;
  std::size_t articles = 0;
  std::size_t retractions = 0;
  Measure rate;  // per 1,000
};

// Retraction rates per subject label over in-scope publications in the
// window. A publication with several subjects counts once under each.
std::vector<GroupRate> grouped_rates(const CorpusSnapshot& snapshot, const Window& window,
                                     const Scope& scope = {});

struct InstitutionIndicators {
  std::string institution_id;
  Window base_window;
  Window current_window;
  std::size_t article_count_base = 0;
  std::size_t article_count_current = 0;
  Measure growth_pct;
  Measure first_auth_rate_base;
  Measure first_auth_rate_current;
  Measure corr_auth_rate_base;
  Measure corr_auth_rate_current;
  Measure first_auth_delta_pct;
  Measure corr_auth_delta_pct;
  std::size_t hpa_count_base = 0;
  std::size_t hpa_count_current = 0;
  Measure delisted_share;     // current window
  Measure retraction_rate;    // lagged retraction window, per 1,000
  Measure top2_share;         // current window
  Measure self_citation_rate; // current window, top-2% basis; n/a without citations

  friend bool operator==(const InstitutionIndicators&, const InstitutionIndicators&) = default;
};

struct IndicatorOptions {
  Scope scope;
  std::size_t hpa_threshold = kHpaThreshold;
  // Defaults to default_retraction_window(current.end_year + 1).
  std::optional<Window> retraction_window;
};

// Batch evaluation over one snapshot and window pair; caches the cohort flags
// and hyper-prolific indexes shared by every institution.
class IndicatorEngine {
 public:
  IndicatorEngine(const CorpusSnapshot& snapshot, const Window& base, const Window& current,
                  IndicatorOptions options = {}, const CitationGraph* citations = nullptr);

  InstitutionIndicators compute(std::string_view institution) const;
  std::vector<InstitutionIndicators> compute_all() const;

  const Window& base_window() const { return base_; }
  const Window& current_window() const { return current_; }
  const Window& retraction_window() const { return retraction_window_; }
  const IndicatorOptions& options() const { return options_; }
  const Top2Flags& top2() const { return top2_; }

 private:
  const CorpusSnapshot* snapshot_;
  Window base_;
  Window current_;
  IndicatorOptions options_;
  Window retraction_window_;
  const CitationGraph* citations_;
  Top2Flags top2_;
  HpaIndex hpa_base_;
  HpaIndex hpa_current_;
};

// Indicator table file: one row per institution, columns in field order.
inline const std::vector<std::string> kIndicatorColumns = {
    "institution_id",        "base_window",           "current_window",
    "article_count_base",    "article_count_current", "growth_pct",
    "first_auth_rate_base",  "first_auth_rate_current", "corr_auth_rate_base",
    "corr_auth_rate_current", "first_auth_delta_pct", "corr_auth_delta_pct",
    "hpa_count_base",        "hpa_count_current",     "delisted_share",
    "retraction_rate",       "top2_share",            "self_citation_rate"};

std::vector<std::string> indicator_row(const InstitutionIndicators& r);
// Throws ValidationError naming the offending column.
InstitutionIndicators parse_indicator_row(const std::vector<std::string>& fields);
std::string format_indicator_table(const std::vector<InstitutionIndicators>& rows);
std::vector<InstitutionIndicators> parse_indicator_table(std::istream& in,
                                                         const std::string& source);

// Display helpers: percent half-up to integer ("243%"), one decimal ("79.7%",
// "27.6"), "n/a" when undefined.
std::string display_percent(const Measure& pct);
std::string display_share(const Measure& fraction);
std::string display_rate(const Measure& per_thousand);

}  // namespace integrity::indicators
