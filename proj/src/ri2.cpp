#include "integrity/ri2.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"
#include "integrity/keyvalue.hpp"

namespace integrity::ri2 {

namespace {

constexpr std::array<std::string_view, 5> kTierNames = {"RedFlag", "HighRisk", "WatchList",
                                                        "NormalVariation", "LowRisk"};

const std::vector<std::string> kEditionKeys = {
    "edition_id",   "reference_size", "retraction_min", "retraction_max", "delisted_min",
    "delisted_max", "c50",            "c75",            "c90",            "c95"};

}  // namespace

std::string_view to_string(Tier t) { return kTierNames[static_cast<std::size_t>(t)]; }

Tier parse_tier(std::string_view s) {
  const auto t = text::trim(s);
  for (std::size_t i = 0; i < kTierNames.size(); ++i) {
    if (t == kTierNames[i]) return static_cast<Tier>(i);
  }
  throw ValidationError("unknown tier '" + t + "'");
}

void Edition::validate() const {
  if (edition_id.empty()) throw ValidationError("edition_id is empty");
  if (reference_size < 2) throw ValidationError("edition reference_size must be >= 2");
  for (double v : {retraction_min, retraction_max, delisted_min, delisted_max}) {
    if (!std::isfinite(v)) throw ValidationError("edition extrema must be finite");
  }
  if (retraction_min > retraction_max) {
    throw ValidationError("edition retraction_min exceeds retraction_max");
  }
  if (delisted_min > delisted_max) {
    throw ValidationError("edition delisted_min exceeds delisted_max");
  }
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] >= 0.0 && cutoffs[i] <= 1.0)) {
      throw ValidationError("edition cutoffs must lie in [0, 1]");
    }
    if (i > 0 && cutoffs[i] < cutoffs[i - 1]) {
      throw ValidationError("edition cutoffs must be ascending (c50 <= c75 <= c90 <= c95)");
    }
  }
}

bool Edition::degenerate() const {
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] == cutoffs[i - 1]) return true;
  }
  return false;
}

Edition june2025() {
  Edition e;
  e.edition_id = "june2025";
  e.reference_size = 1000;
  e.retraction_min = 0.0;
  e.retraction_max = 26.82;
  e.delisted_min = 0.0;
  e.delisted_max = 0.1535;
  e.cutoffs = {0.049, 0.099, 0.174, 0.252};
  return e;
}

Edition parse_edition(std::istream& in, const std::string& source) {
  const auto doc = KeyValueDoc::parse(in, source);
  doc.reject_unknown(kEditionKeys);
  Edition e;
  e.edition_id = doc.require("edition_id");
  const auto size = doc.require_int("reference_size");
  if (size < 2) throw ValidationError(source + ": reference_size must be >= 2");
  e.reference_size = static_cast<std::size_t>(size);
  e.retraction_min = doc.require_double("retraction_min");
  e.retraction_max = doc.require_double("retraction_max");
  e.delisted_min = doc.require_double("delisted_min");
  e.delisted_max = doc.require_double("delisted_max");
  e.cutoffs = {doc.require_double("c50"), doc.require_double("c75"), doc.require_double("c90"),
               doc.require_double("c95")};
  try {
    e.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(source + ": " + err.what());
  }
  if (e.degenerate()) warn(source + ": edition has equal tier cutoffs; some tiers are empty");
  return e;
}

Edition load_edition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, 0, "cannot open edition file");
  return parse_edition(in, path);
}

std::string format_edition(const Edition& e) {
  KeyValueDoc doc;
  doc.set("edition_id", e.edition_id);
  doc.set("reference_size", std::to_string(e.reference_size));
  doc.set("retraction_min", text::format_exact(e.retraction_min));
  doc.set("retraction_max", text::format_exact(e.retraction_max));
  doc.set("delisted_min", text::format_exact(e.delisted_min));
  doc.set("delisted_max", text::format_exact(e.delisted_max));
  doc.set("c50", text::format_exact(e.c50()));
  doc.set("c75", text::format_exact(e.c75()));
  doc.set("c90", text::format_exact(e.c90()));
  doc.set("c95", text::format_exact(e.c95()));
  return doc.render();
}

double normalize(double value, double min, double max) {
  if (min > max) {
    throw ValidationError("normalize: min " + text::format_exact(min) + " exceeds max " +
                          text::format_exact(max));
  }
  if (max == min) return 0.0;
  return std::clamp((value - min) / (max - min), 0.0, 1.0);
}

Tier classify(double score, const Edition& edition) {
  if (score >= edition.c95()) return Tier::RedFlag;
  if (score >= edition.c90()) return Tier::HighRisk;
  if (score >= edition.c75()) return Tier::WatchList;
  if (score >= edition.c50()) return Tier::NormalVariation;
  return Tier::LowRisk;
}

RI2Score compute_score(std::string institution_id, double retraction_rate,
                       double delisted_share, const Edition& edition) {
  RI2Score s;
  s.institution_id = std::move(institution_id);
  s.normalized_retraction =
      normalize(retraction_rate, edition.retraction_min, edition.retraction_max);
  s.normalized_delisted = normalize(delisted_share, edition.delisted_min, edition.delisted_max);
  s.score = (s.normalized_retraction + s.normalized_delisted) / 2.0;
  s.tier = classify(s.score, edition);
  return s;
}

Edition compute_edition(const std::vector<ScoreInput>& reference, std::string edition_id) {
  const std::size_t n = reference.size();
  if (n < 2) throw ValidationError("a reference edition needs at least 2 institutions");
  Edition e;
  e.edition_id = std::move(edition_id);
  e.reference_size = n;
  bool first = true;
  for (const auto& r : reference) {
    if (!r.retraction_rate || !r.delisted_share) {
      throw ValidationError("reference institution '" + r.institution_id +
                            "' has an undefined input");
    }
    if (first) {
      e.retraction_min = e.retraction_max = *r.retraction_rate;
      e.delisted_min = e.delisted_max = *r.delisted_share;
      first = false;
    }
    e.retraction_min = std::min(e.retraction_min, *r.retraction_rate);
    e.retraction_max = std::max(e.retraction_max, *r.retraction_rate);
    e.delisted_min = std::min(e.delisted_min, *r.delisted_share);
    e.delisted_max = std::max(e.delisted_max, *r.delisted_share);
  }
  std::vector<double> scores;
  scores.reserve(n);
  for (const auto& r : reference) {
    scores.push_back(compute_score(r.institution_id, *r.retraction_rate, *r.delisted_share, e).score);
  }
  std::sort(scores.begin(), scores.end());
  constexpr std::array<std::size_t, 4> kPercentiles = {50, 75, 90, 95};
  for (std::size_t i = 0; i < kPercentiles.size(); ++i) {
    e.cutoffs[i] = scores[kPercentiles[i] * n / 100];
  }
  if (e.degenerate()) {
    warn("edition '" + e.edition_id + "' is degenerate: tier cutoffs coincide");
  }
  return e;
}

std::vector<RI2Score> rank(std::vector<RI2Score> scores) {
  std::sort(scores.begin(), scores.end(), [](const RI2Score& a, const RI2Score& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.institution_id < b.institution_id;
  });
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].rank = i + 1;
  return scores;
}

ScoreSet score_all(const std::vector<ScoreInput>& inputs, const Edition& edition) {
  ScoreSet out;
  for (const auto& in : inputs) {
    if (!in.retraction_rate || !in.delisted_share) {
      std::string reason = !in.retraction_rate ? "retraction rate undefined (no articles in "
                                                 "the retraction window)"
                                               : "delisted share undefined (no articles in the "
                                                 "current window)";
      warn("institution '" + in.institution_id + "' not scored: " + reason);
      out.unscored.push_back({in.institution_id, std::move(reason)});
      continue;
    }
    out.scored.push_back(
        compute_score(in.institution_id, *in.retraction_rate, *in.delisted_share, edition));
  }
  out.scored = rank(std::move(out.scored));
  return out;
}

const std::vector<std::string> kScoreColumns = {"institution_id", "normalized_retraction",
                                                "normalized_delisted", "score", "tier", "rank"};

std::string format_scores(const std::vector<RI2Score>& ranked) {
  std::string out = csv::format_row(kScoreColumns);
  for (const auto& s : ranked) {
    out += csv::format_row({s.institution_id, text::format_exact(s.normalized_retraction),
                            text::format_exact(s.normalized_delisted),
                            text::format_fixed(s.score, 3), std::string(to_string(s.tier)),
                            std::to_string(s.rank)});
  }
  return out;
}

std::vector<RI2Score> parse_scores(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kScoreColumns);
  std::vector<RI2Score> out;
  std::set<std::string> ids;
  csv::Row row;
  auto unit = [&](std::size_t col) {
    double v = 0.0;
    try {
      v = text::parse_double(row.fields[col]);
    } catch (const std::invalid_argument&) {
      reader.fail(row, col, "expected a number, got '" + row.fields[col] + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) reader.fail(row, col, "value outside [0, 1]");
    return v;
  };
  while (reader.next(row)) {
    RI2Score s;
    s.institution_id = text::trim(row.fields[0]);
    if (s.institution_id.empty()) reader.fail(row, 0, "empty institution_id");
    if (!ids.insert(s.institution_id).second) reader.fail(row, 0, "duplicate institution_id");
    s.normalized_retraction = unit(1);
    s.normalized_delisted = unit(2);
    const double printed = unit(3);
    s.score = (s.normalized_retraction + s.normalized_delisted) / 2.0;
    if (std::abs(printed - s.score) > 0.0005 + 1e-9) {
      reader.fail(row, 3, "score does not match the normalized components");
    }
    try {
      s.tier = parse_tier(row.fields[4]);
    } catch (const ValidationError& e) {
      reader.fail(row, 4, e.what());
    }
    try {
      const auto r = text::parse_int(row.fields[5]);
      if (r < 1) reader.fail(row, 5, "rank must be >= 1");
      s.rank = static_cast<std::size_t>(r);
    } catch (const std::invalid_argument&) {
      reader.fail(row, 5, "expected an integer rank");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RankRow> rank_table(const std::vector<RI2Score>& scores) {
  const auto ranked = rank(scores);
  auto component_ranks = [&](auto key) {
    std::vector<std::size_t> order(ranked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (key(ranked[a]) != key(ranked[b])) return key(ranked[a]) > key(ranked[b]);
      return ranked[a].institution_id < ranked[b].institution_id;
    });
    std::vector<std::size_t> r(ranked.size());
    for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = i + 1;
    return r;
  };
  const auto delisted = component_ranks([](const RI2Score& s) { return s.normalized_delisted; });
  const auto retraction =
      component_ranks([](const RI2Score& s) { return s.normalized_retraction; });
  std::vector<RankRow> out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out.push_back({ranked[i].rank, ranked[i].institution_id, delisted[i], retraction[i],
                   ranked[i].score, ranked[i].tier});
  }
  return out;
}

std::string format_rank_table(const std::vector<RankRow>& rows) {
  std::string out = csv::format_row(
      {"ri2_rank", "institution_id", "delisted_rank", "retraction_rank", "score", "tier"});
  for (const auto& r : rows) {
    out += csv::format_row({std::to_string(r.ri2_rank), r.institution_id,
                            std::to_string(r.delisted_rank), std::to_string(r.retraction_rank),
                            text::format_fixed(r.score, 3), std::string(to_string(r.tier))});
  }
  return out;
}

}  // namespace integrity::ri2
