#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "integrity/ingest.hpp"
#include "integrity/keyvalue.hpp"

namespace integrity::synth {

// Generator knobs. Per-author yearly output is uniform on
// [0, 2 * pubs_per_author_year_mean] and capped; citation counts are uniform
// on [0, 2 * citation_mean].
struct SynthParams {
  std::size_t n_institutions = 6;
  std::size_t n_authors_per_institution = 20;
  std::size_t n_years = 6;
  int start_year = 2019;
  std::size_t pubs_per_author_year_mean = 3;
  std::size_t max_author_yearly_output = 12;
  std::size_t citation_mean = 8;
  std::uint64_t seed = 1;
  double collaboration_probability = 0.35;
  std::size_t journal_pool_size = 40;
  // Single-author citing publications spread over many small institutions.
  std::size_t background_institutions = 300;
  std::size_t background_pubs_per_year = 1500;

  int end_year() const { return start_year + static_cast<int>(n_years) - 1; }
  void validate() const;
  friend bool operator==(const SynthParams&, const SynthParams&) = default;
};

SynthParams parse_params(const KeyValueDoc& doc);
SynthParams load_params(const std::string& path);
// key=value lines in field order.
std::string format_params(const SynthParams& params);

// Seeded stream: mt19937_64 keyed by splitmix64(seed ^ stream id), with
// integer-only sampling so outputs match across standard libraries.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  // Uniform on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  // True with probability per_million / 1e6.
  bool chance(std::uint64_t per_million);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

std::string study_institution_id(std::size_t i);       // U001, U002, ...
std::string background_institution_id(std::size_t i);  // B001, ...

ingest::CorpusFiles generate_null(const SynthParams& params);

// Every injector is a pure function of its inputs. Windows default to the
// last two corpus years (retractions: the lagged window of the year after
// the last corpus year; HPA: the last corpus year).
ingest::CorpusFiles inject_delisted_dumping(ingest::CorpusFiles files,
                                            const std::string& institution, double target_share,
                                            std::optional<Window> window = std::nullopt);

ingest::CorpusFiles inject_citation_ring(ingest::CorpusFiles files,
                                         const std::vector<std::string>& institutions,
                                         double intensity,
                                         std::optional<Window> window = std::nullopt);

ingest::CorpusFiles inject_hpa(ingest::CorpusFiles files, const std::string& institution,
                               std::size_t n_authors, std::size_t yearly_output,
                               std::size_t extra_coauthors = 0,
                               std::optional<int> year = std::nullopt);

ingest::CorpusFiles inject_retractions(ingest::CorpusFiles files, const std::string& institution,
                                       double rate_per_1000,
                                       std::optional<Window> window = std::nullopt,
                                       const std::string& reason = "Paper Mill");

enum class InjectionKind { DelistedDumping, CitationRing, Hpa, Retractions };

// One line of an injections file:
//   delisted U001 share=0.08 [window=2023-2024]
//   ring U002,U003,U004,U005 intensity=0.02 [window=...]
//   hpa U006 authors=5 output=40 [coauthors=0] [year=2024]
//   retractions U001 rate=27 [window=...] [reason=Paper Mill]
struct Injection {
  InjectionKind kind = InjectionKind::DelistedDumping;
  std::vector<std::string> institutions;
  double value = 0.0;  // share, intensity or rate
  std::size_t n_authors = 0;
  std::size_t yearly_output = 0;
  std::size_t extra_coauthors = 0;
  std::optional<int> year;
  std::optional<Window> window;
  std::string reason = "Paper Mill";

  std::string to_line() const;
  friend bool operator==(const Injection&, const Injection&) = default;
};

Injection parse_injection(const std::string& line, const std::string& source,
                          std::size_t line_number);
std::vector<Injection> parse_injections(std::istream& in, const std::string& source);
std::vector<Injection> load_injections(const std::string& path);

ingest::CorpusFiles apply(ingest::CorpusFiles files, const Injection& injection);

// key=value record of the generator, its seed and the injections applied.
std::string scenario_manifest(const SynthParams& params,
                              const std::vector<Injection>& injections);

}  // namespace integrity::synth
