#include "integrity/corpus.hpp"

#include <algorithm>
#include <ctime>
#include <set>

namespace integrity {
namespace {

int current_calendar_year() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  return utc.tm_year + 1900;
}

void check_coverage(const JournalRecord& j, const std::vector<Window>& windows,
                    std::string_view index) {
  auto sorted = windows;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].start_year > sorted[i].end_year) {
      throw ValidationError("journal '" + j.journal_id + "': inverted " +
                            std::string(index) + " coverage window");
    }
    if (i > 0 && sorted[i - 1].overlaps(sorted[i])) {
      throw ValidationError("journal '" + j.journal_id + "': overlapping " +
                            std::string(index) + " coverage windows");
    }
  }
}

void validate_journal(const JournalRecord& j) {
  if (j.journal_id.empty()) throw ValidationError("journal with empty journal_id");
  if (j.delisted_scopus != j.delist_year_scopus.has_value()) {
    throw ValidationError("journal '" + j.journal_id +
                          "': scopus delist year must be present iff delisted by scopus");
  }
  if (j.delisted_wos != j.delist_year_wos.has_value()) {
    throw ValidationError("journal '" + j.journal_id +
                          "': wos delist year must be present iff delisted by wos");
  }
  check_coverage(j, j.coverage_scopus, "scopus");
  check_coverage(j, j.coverage_wos, "wos");
}

void validate_publication(PublicationRecord& p, int max_year) {
  if (p.pub_id.empty()) throw ValidationError("publication with empty pub_id");
  const std::string who = "publication '" + p.pub_id + "': ";
  if (p.authors.empty()) throw ValidationError(who + "no authors");
  if (p.citation_count < 0) throw ValidationError(who + "negative citation_count");
  if (p.year < 1900 || p.year > max_year) {
    throw ValidationError(who + "year " + std::to_string(p.year) + " out of range");
  }
  for (const auto& a : p.authors) {
    if (a.author_id.empty()) throw ValidationError(who + "author with empty author_id");
    if (a.institution_ids.empty()) {
      throw ValidationError(who + "author '" + a.author_id + "' has no institution");
    }
  }
  if (p.doi) {
    p.doi = normalize_doi(*p.doi);
    if (p.doi->empty()) p.doi.reset();
  }
}

}  // namespace

std::string_view to_string(DocType t) {
  switch (t) {
    case DocType::Article: return "article";
    case DocType::Review: return "review";
    case DocType::Other: return "other";
  }
  return "other";
}

DocType parse_doc_type(std::string_view s, bool* known) {
  const auto t = text::to_lower(text::trim(s));
  if (known) *known = true;
  if (t == "article") return DocType::Article;
  if (t == "review") return DocType::Review;
  if (t == "other") return DocType::Other;
  if (known) *known = false;
  return DocType::Other;
}

bool AuthorshipEntry::lists(std::string_view institution) const {
  return std::find(institution_ids.begin(), institution_ids.end(), institution) !=
         institution_ids.end();
}

bool PublicationRecord::lists(std::string_view institution) const {
  return std::any_of(authors.begin(), authors.end(),
                     [&](const AuthorshipEntry& a) { return a.lists(institution); });
}

bool PublicationRecord::first_author_at(std::string_view institution) const {
  return !authors.empty() && authors.front().lists(institution);
}

bool PublicationRecord::corresponding_at(std::string_view institution) const {
  return std::any_of(authors.begin(), authors.end(), [&](const AuthorshipEntry& a) {
    return a.is_corresponding && a.lists(institution);
  });
}

bool JournalRecord::delisted_content(int year) const {
  auto covered = [year](const std::vector<Window>& ws) {
    return std::any_of(ws.begin(), ws.end(),
                       [year](const Window& w) { return w.contains(year); });
  };
  return (delisted_scopus || delisted_wos) &&
         (covered(coverage_scopus) || covered(coverage_wos));
}

CitationEdgeTable normalize_edges(CitationEdgeTable edges) {
  std::erase_if(edges, [](const CitationPair& e) { return e.citing_pub_id == e.cited_pub_id; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::string normalize_doi(std::string_view doi) {
  std::string s = text::to_lower(text::trim(doi));
  for (std::string_view prefix :
       {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
        "http://dx.doi.org/", "doi:"}) {
    if (s.rfind(prefix, 0) == 0) {
      s.erase(0, prefix.size());
      break;
    }
  }
  return text::trim(s);
}

std::optional<std::size_t> CorpusSnapshot::find(std::string_view pub_id) const {
  auto it = pub_index_.find(pub_id);
  if (it == pub_index_.end()) return std::nullopt;
  return it->second;
}

const JournalRecord& CorpusSnapshot::journal_of(const PublicationRecord& pub) const {
  return journals_[pub_journal_[index_of(pub)]];
}

const JournalRecord* CorpusSnapshot::find_journal(std::string_view journal_id) const {
  auto it = journal_index_.find(journal_id);
  return it == journal_index_.end() ? nullptr : &journals_[it->second];
}

std::size_t CorpusSnapshot::matched_retractions() const {
  return static_cast<std::size_t>(
      std::count_if(retraction_matches_.begin(), retraction_matches_.end(),
                    [](const auto& m) { return m.has_value(); }));
}

std::vector<std::size_t> CorpusSnapshot::unmatched_retractions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < retraction_matches_.size(); ++i) {
    if (!retraction_matches_[i]) out.push_back(i);
  }
  return out;
}

bool CorpusSnapshot::has_institution(std::string_view institution) const {
  return by_institution_.find(institution) != by_institution_.end();
}

const std::vector<std::size_t>& CorpusSnapshot::publications_of(
    std::string_view institution) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = by_institution_.find(institution);
  return it == by_institution_.end() ? kEmpty : it->second;
}

std::vector<int> CorpusSnapshot::years() const {
  std::set<int> ys;
  for (const auto& p : pubs_) ys.insert(p.year);
  return {ys.begin(), ys.end()};
}

CorpusSnapshot build_snapshot(std::vector<PublicationRecord> publications,
                              std::vector<JournalRecord> journals,
                              std::vector<RetractionRecord> retractions) {
  CorpusSnapshot s;
  const int max_year = current_calendar_year();

  for (auto& j : journals) validate_journal(j);
  std::sort(journals.begin(), journals.end(),
            [](const auto& a, const auto& b) { return a.journal_id < b.journal_id; });
  for (std::size_t i = 0; i < journals.size(); ++i) {
    if (!s.journal_index_.emplace(journals[i].journal_id, i).second) {
      throw ValidationError("duplicate journal_id '" + journals[i].journal_id + "'");
    }
  }
  s.journals_ = std::move(journals);

  for (auto& p : publications) validate_publication(p, max_year);
  std::sort(publications.begin(), publications.end(),
            [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
  for (std::size_t i = 1; i < publications.size(); ++i) {
    if (publications[i].pub_id == publications[i - 1].pub_id) {
      throw ValidationError("duplicate pub_id '" + publications[i].pub_id + "'");
    }
  }

  std::set<std::string> unknown;
  s.pub_journal_.reserve(publications.size());
  for (const auto& p : publications) {
    auto it = s.journal_index_.find(p.journal_id);
    if (it == s.journal_index_.end()) {
      unknown.insert(p.journal_id);
      s.pub_journal_.push_back(0);
    } else {
      s.pub_journal_.push_back(it->second);
    }
  }
  if (!unknown.empty()) {
    throw ValidationError("publications reference unknown journal_id(s): " +
                          text::join({unknown.begin(), unknown.end()}, ", "));
  }

  s.pubs_ = std::move(publications);
  s.pub_institutions_.resize(s.pubs_.size());
  std::multimap<std::string, std::size_t, std::less<>> by_doi;
  std::multimap<std::string, std::size_t, std::less<>> by_pmid;
  for (std::size_t i = 0; i < s.pubs_.size(); ++i) {
    const auto& p = s.pubs_[i];
    s.pub_index_.emplace(p.pub_id, i);
    if (p.doi) by_doi.emplace(*p.doi, i);
    if (p.pmid && !p.pmid->empty()) by_pmid.emplace(*p.pmid, i);
    std::set<std::string> insts;
    for (const auto& a : p.authors) insts.insert(a.institution_ids.begin(), a.institution_ids.end());
    s.pub_institutions_[i].assign(insts.begin(), insts.end());
    for (const auto& inst : s.pub_institutions_[i]) s.by_institution_[inst].push_back(i);
  }
  for (const auto& [inst, _] : s.by_institution_) s.institutions_.push_back(inst);

  // Retractions: unique keys per identifier type, DOI before PMID.
  std::set<std::string> seen_doi;
  std::set<std::string> seen_pmid;
  auto unique_hit = [](const auto& index, const std::string& key,
                       const std::string& kind) -> std::optional<std::size_t> {
    auto [lo, hi] = index.equal_range(key);
    if (lo == hi) return std::nullopt;
    if (std::next(lo) != hi) {
      throw ValidationError("retraction " + kind + " '" + key +
                            "' matches more than one publication");
    }
    return lo->second;
  };
  s.retracted_.assign(s.pubs_.size(), false);
  for (auto& r : retractions) {
    if (r.doi) {
      r.doi = normalize_doi(*r.doi);
      if (r.doi->empty()) r.doi.reset();
    }
    if (r.pmid) {
      r.pmid = text::trim(*r.pmid);
      if (r.pmid->empty()) r.pmid.reset();
    }
    if (!r.doi && !r.pmid) throw ValidationError("retraction without DOI or PMID");
    if (r.doi && !seen_doi.insert(*r.doi).second) {
      throw ValidationError("duplicate retraction DOI '" + *r.doi + "'");
    }
    if (r.pmid && !seen_pmid.insert(*r.pmid).second) {
      throw ValidationError("duplicate retraction PMID '" + *r.pmid + "'");
    }
    std::optional<std::size_t> via_doi = r.doi ? unique_hit(by_doi, *r.doi, "DOI") : std::nullopt;
    std::optional<std::size_t> via_pmid =
        r.pmid ? unique_hit(by_pmid, *r.pmid, "PMID") : std::nullopt;
    if (via_doi && via_pmid && *via_doi != *via_pmid) {
      throw ValidationError("retraction matches publication '" + s.pubs_[*via_doi].pub_id +
                            "' by DOI but '" + s.pubs_[*via_pmid].pub_id + "' by PMID");
    }
    auto match = via_doi ? via_doi : via_pmid;
    if (match) {
      if (r.retraction_year < s.pubs_[*match].year) {
        throw ValidationError("retraction of '" + s.pubs_[*match].pub_id +
                              "' predates its publication year");
      }
      s.retracted_[*match] = true;
    }
    s.retraction_matches_.push_back(match);
  }
  s.retractions_ = std::move(retractions);
  return s;
}

PublicationView window_view(const CorpusSnapshot& snapshot, const Window& window,
                            DocTypeSet doc_types, std::size_t max_coauthors) {
  return window_view(snapshot, window, Scope{doc_types, max_coauthors});
}

PublicationView window_view(const CorpusSnapshot& snapshot, const Window& window,
                            const Scope& scope) {
  PublicationView out;
  for (const auto& p : snapshot.publications()) {
    if (window.contains(p.year) && scope.admits(p)) out.push_back(&p);
  }
  return out;
}

PublicationView window_view(const PublicationView& view, const Window& window,
                            DocTypeSet doc_types, std::size_t max_coauthors) {
  const Scope scope{doc_types, max_coauthors};
  PublicationView out;
  for (const auto* p : view) {
    if (window.contains(p->year) && scope.admits(*p)) out.push_back(p);
  }
  return out;
}

PublicationView institution_view(const CorpusSnapshot& snapshot,
                                 std::string_view institution, const Window& window,
                                 const Scope& scope) {
  PublicationView out;
  for (auto i : snapshot.publications_of(institution)) {
    const auto& p = snapshot.publication(i);
    if (window.contains(p.year) && scope.admits(p)) out.push_back(&p);
  }
  return out;
}

}  // namespace integrity
