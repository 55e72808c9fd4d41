#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "integrity/common.hpp"

namespace integrity::ri2 {

enum class Tier { RedFlag, HighRisk, WatchList, NormalVariation, LowRisk };

std::string_view to_string(Tier t);
Tier parse_tier(std::string_view s);

// Frozen normalization extrema and tier cutoffs of a reference group.
struct Edition {
  std::string edition_id;
  std::size_t reference_size = 1000;
  double retraction_min = 0.0;  // per 1,000 articles
  double retraction_max = 0.0;
  double delisted_min = 0.0;  // fractions
  double delisted_max = 0.0;
  std::array<double, 4> cutoffs{};  // c50, c75, c90, c95

  double c50() const { return cutoffs[0]; }
  double c75() const { return cutoffs[1]; }
  double c90() const { return cutoffs[2]; }
  double c95() const { return cutoffs[3]; }

  // Throws ValidationError: min > max, cutoffs outside [0, 1] or decreasing.
  void validate() const;
  // Equal neighbouring cutoffs collapse a tier.
  bool degenerate() const;

  friend bool operator==(const Edition&, const Edition&) = default;
};

// Constants of the June 2025 edition.
Edition june2025();

Edition parse_edition(std::istream& in, const std::string& source);
Edition load_edition(const std::string& path);
std::string format_edition(const Edition& e);

// (value - min) / (max - min) clamped to [0, 1]; 0 when max == min.
double normalize(double value, double min, double max);

struct RI2Score {
  std::string institution_id;
  double normalized_retraction = 0.0;
  double normalized_delisted = 0.0;
  double score = 0.0;
  Tier tier = Tier::LowRisk;
  std::size_t rank = 0;  // 0 until ranked

  friend bool operator==(const RI2Score&, const RI2Score&) = default;
};

// Scores and classifies one institution. Rates are per 1,000 articles,
// delisted shares are fractions.
RI2Score compute_score(std::string institution_id, double retraction_rate,
                       double delisted_share, const Edition& edition);

Tier classify(double score, const Edition& edition);

struct ScoreInput {
  std::string institution_id;
  Measure retraction_rate;
  Measure delisted_share;
};

// Extrema from the inputs; cutoff for percentile P is the ascending-sorted
// composite score at 0-based index floor(P * N / 100).
Edition compute_edition(const std::vector<ScoreInput>& reference, std::string edition_id);

// Descending by score, ties by institution id; assigns ranks 1..N.
std::vector<RI2Score> rank(std::vector<RI2Score> scores);

struct Unscored {
  std::string institution_id;
  std::string reason;
};

struct ScoreSet {
  std::vector<RI2Score> scored;  // ranked
  std::vector<Unscored> unscored;
};

// Institutions with an undefined input are listed as unscored with a warning.
ScoreSet score_all(const std::vector<ScoreInput>& inputs, const Edition& edition);

// institution_id,normalized_retraction,normalized_delisted,score,tier,rank
extern const std::vector<std::string> kScoreColumns;

std::string format_scores(const std::vector<RI2Score>& ranked);
// Checks that each printed score agrees with the normalized components and
// keeps the components at full precision.
std::vector<RI2Score> parse_scores(std::istream& in, const std::string& source);

// Ranked table with per-component ranks.
struct RankRow {
  std::size_t ri2_rank = 0;
  std::string institution_id;
  std::size_t delisted_rank = 0;
  std::size_t retraction_rank = 0;
  double score = 0.0;
  Tier tier = Tier::LowRisk;
};

std::vector<RankRow> rank_table(const std::vector<RI2Score>& scores);
std::string format_rank_table(const std::vector<RankRow>& rows);

}  // namespace integrity::ri2
