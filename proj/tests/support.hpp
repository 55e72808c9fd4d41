#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "integrity/corpus.hpp"
#include "integrity/ingest.hpp"
#include "integrity/synth.hpp"

namespace testkit {

using namespace integrity;

inline AuthorshipEntry author(std::string id, std::vector<std::string> institutions,
                              bool corresponding = false) {
  AuthorshipEntry a;
  a.author_id = std::move(id);
  a.institution_ids = std::move(institutions);
  a.is_corresponding = corresponding;
  return a;
}

inline PublicationRecord pub(std::string id, int year, std::vector<AuthorshipEntry> authors,
                             std::int64_t citations = 0, std::string journal = "J1",
                             DocType type = DocType::Article) {
  PublicationRecord p;
  p.pub_id = std::move(id);
  p.year = year;
  p.authors = std::move(authors);
  p.citation_count = citations;
  p.journal_id = std::move(journal);
  p.doc_type = type;
  return p;
}

inline JournalRecord journal(std::string id, bool delisted = false) {
  JournalRecord j;
  j.journal_id = std::move(id);
  j.title = "Journal " + j.journal_id;
  if (delisted) {
    j.delisted_scopus = true;
    j.delist_year_scopus = 2025;
    j.coverage_scopus = {Window(2000, 2024)};
  }
  return j;
}

// Publication ids with a fixed width so lexical and numeric order agree.
inline std::string numbered(const std::string& prefix, std::size_t n, int width = 6) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

struct CorpusData {
  std::vector<PublicationRecord> pubs;
  std::vector<JournalRecord> journals{journal("J1"), journal("JD", true)};
  std::vector<RetractionRecord> retractions;
  CitationEdgeTable edges;

  PublicationRecord& add(PublicationRecord p) {
    pubs.push_back(std::move(p));
    return pubs.back();
  }

  void retract(PublicationRecord& p, int year = 2024, std::string reason = "Paper Mill") {
    if (!p.doi) p.doi = "10.1000/" + p.pub_id;
    RetractionRecord r;
    r.doi = p.doi;
    r.retraction_year = year;
    r.nature = "Retraction";
    r.reasons = {std::move(reason)};
    retractions.push_back(std::move(r));
  }

  CorpusSnapshot snapshot() const { return build_snapshot(pubs, journals, retractions); }

  ingest::CorpusFiles files() const {
    ingest::CorpusFiles f;
    f.publications = pubs;
    f.journals = journals;
    f.retractions = retractions;
    f.citations = edges;
    return f;
  }
};

// Small random corpora: at most `max_pubs` publications over institutions
// I1..I6 and a handful of authors, with many citation ties.
struct RandomSpec {
  std::size_t max_pubs = 50;
  std::size_t institutions = 6;
  std::size_t authors = 8;
  int first_year = 2018;
  int years = 4;
  std::int64_t max_citations = 5;
  bool exact_size = false;  // always max_pubs publications
};

inline CorpusData random_corpus(std::uint64_t seed, const RandomSpec& spec = {}) {
  synth::Stream rng(seed, 99);
  CorpusData c;
  const std::size_t n = spec.exact_size ? spec.max_pubs : 1 + rng.below(spec.max_pubs);
  const int years = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.years)));
  const std::size_t n_inst = 1 + rng.below(spec.institutions);
  for (std::size_t i = 0; i < n; ++i) {
    PublicationRecord p;
    p.pub_id = numbered("R", rng.below(1000) * 1000 + i);
    p.year = spec.first_year + static_cast<int>(rng.below(static_cast<std::uint64_t>(years)));
    p.journal_id = rng.chance(200000) ? "JD" : "J1";
    const auto t = rng.below(10);
    p.doc_type = t < 6 ? DocType::Article : t < 8 ? DocType::Review : DocType::Other;
    p.citation_count = static_cast<std::int64_t>(
        rng.below(static_cast<std::uint64_t>(spec.max_citations) + 1));
    const std::size_t n_auth = 1 + rng.below(4);
    std::set<std::string> used;
    for (std::size_t k = 0; k < n_auth; ++k) {
      auto id = "A" + std::to_string(1 + rng.below(spec.authors));
      if (!used.insert(id).second) continue;
      std::vector<std::string> insts;
      const std::size_t n_aff = 1 + rng.below(2);
      for (std::size_t m = 0; m < n_aff; ++m) {
        auto inst = "I" + std::to_string(1 + rng.below(n_inst));
        if (std::find(insts.begin(), insts.end(), inst) == insts.end()) insts.push_back(inst);
      }
      p.authors.push_back(author(id, insts, rng.chance(300000)));
    }
    c.pubs.push_back(std::move(p));
  }
  const std::size_t n_edges = c.pubs.empty() ? 0 : rng.below(3 * c.pubs.size() + 1);
  for (std::size_t e = 0; e < n_edges; ++e) {
    const auto& a = c.pubs[rng.below(c.pubs.size())];
    const auto& b = c.pubs[rng.below(c.pubs.size())];
    c.edges.push_back({a.pub_id, b.pub_id});
  }
  return c;
}

// Per-test scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testkit
