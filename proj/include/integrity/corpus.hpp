#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "integrity/common.hpp"

namespace integrity {

enum class DocType : std::uint8_t { Article = 1, Review = 2, Other = 4 };

std::string_view to_string(DocType t);
// Unknown strings map to Other; `known` reports whether the label matched.
DocType parse_doc_type(std::string_view s, bool* known = nullptr);

class DocTypeSet {
 public:
  constexpr DocTypeSet() = default;
  constexpr DocTypeSet(std::initializer_list<DocType> types) {
    for (auto t : types) bits_ |= static_cast<std::uint8_t>(t);
  }
  static constexpr DocTypeSet all() {
    return {DocType::Article, DocType::Review, DocType::Other};
  }
  constexpr bool contains(DocType t) const {
    return (bits_ & static_cast<std::uint8_t>(t)) != 0;
  }
  friend constexpr bool operator==(DocTypeSet, DocTypeSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class CitationDb : std::uint8_t { Scopus, WebOfScience };

struct AuthorshipEntry {
  std::string author_id;
  std::vector<std::string> institution_ids;
  bool is_corresponding = false;

  bool lists(std::string_view institution) const;
  friend bool operator==(const AuthorshipEntry&, const AuthorshipEntry&) = default;
};

struct PublicationRecord {
  std::string pub_id;
  std::optional<std::string> doi;
  std::optional<std::string> pmid;
  int year = 0;
  std::string journal_id;
  DocType doc_type = DocType::Article;
  // Subject categories; several labels are allowed per publication.
  std::vector<std::string> subjects;
  std::int64_t citation_count = 0;
  std::vector<AuthorshipEntry> authors;  // position 1 first

  bool lists(std::string_view institution) const;
  bool first_author_at(std::string_view institution) const;
  bool corresponding_at(std::string_view institution) const;

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct JournalRecord {
  std::string journal_id;
  std::string title;
  bool delisted_scopus = false;
  bool delisted_wos = false;
  std::optional<int> delist_year_scopus;
  std::optional<int> delist_year_wos;
  std::vector<Window> coverage_scopus;
  std::vector<Window> coverage_wos;

  bool delisted() const { return delisted_scopus || delisted_wos; }
  // True when the journal is delisted and `year` lies inside one of its
  // coverage windows for any index.
  bool delisted_content(int year) const;

  friend bool operator==(const JournalRecord&, const JournalRecord&) = default;
};

struct RetractionRecord {
  std::optional<std::string> doi;
  std::optional<std::string> pmid;
  int retraction_year = 0;
  std::string nature;
  std::vector<std::string> reasons;

  friend bool operator==(const RetractionRecord&, const RetractionRecord&) = default;
};

// One citation link between two publications of the corpus.
struct CitationPair {
  std::string citing_pub_id;
  std::string cited_pub_id;

  friend auto operator<=>(const CitationPair&, const CitationPair&) = default;
};

// Citation links; self pairs dropped and pairs unique once normalized.
using CitationEdgeTable = std::vector<CitationPair>;
CitationEdgeTable normalize_edges(CitationEdgeTable edges);

// Lowercase, strip resolver prefixes and surrounding whitespace.
std::string normalize_doi(std::string_view doi);

// Publication filter shared by every indicator: document types and the
// mass-collaboration cutoff (publications with more authors are dropped).
struct Scope {
  static constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

  DocTypeSet doc_types{DocType::Article, DocType::Review};
  std::size_t max_coauthors = 100;

  bool admits(const PublicationRecord& pub) const {
    return doc_types.contains(pub.doc_type) && pub.authors.size() <= max_coauthors;
  }
};

using PublicationView = std::vector<const PublicationRecord*>;

// Immutable, validated corpus. Publications are stored sorted by pub_id and
// addressed by their index in that order.
class CorpusSnapshot {
 public:
  CorpusSnapshot() = default;

  std::span<const PublicationRecord> publications() const { return pubs_; }
  std::size_t size() const { return pubs_.size(); }
  const PublicationRecord& publication(std::size_t index) const { return pubs_[index]; }
  std::size_t index_of(const PublicationRecord& pub) const {
    return static_cast<std::size_t>(&pub - pubs_.data());
  }
  std::optional<std::size_t> find(std::string_view pub_id) const;

  const std::vector<JournalRecord>& journals() const { return journals_; }
  const JournalRecord& journal_of(const PublicationRecord& pub) const;
  const JournalRecord* find_journal(std::string_view journal_id) const;

  const std::vector<RetractionRecord>& retractions() const { return retractions_; }
  // Publication index matched by retraction `i`, if any.
  std::optional<std::size_t> retraction_match(std::size_t i) const {
    return retraction_matches_[i];
  }
  std::size_t matched_retractions() const;
  std::vector<std::size_t> unmatched_retractions() const;
  bool is_retracted(std::size_t pub_index) const { return retracted_[pub_index]; }
  bool is_retracted(const PublicationRecord& pub) const {
    return retracted_[index_of(pub)];
  }

  // Sorted, unique institution ids seen in authorship lists.
  const std::vector<std::string>& institutions() const { return institutions_; }
  bool has_institution(std::string_view institution) const;
  // Indices of publications listing the institution, ascending. Empty for
  // unknown institutions.
  const std::vector<std::size_t>& publications_of(std::string_view institution) const;
  // Sorted unique institutions listed on publication `index`.
  const std::vector<std::string>& institutions_of(std::size_t index) const {
    return pub_institutions_[index];
  }
  std::vector<int> years() const;

  friend CorpusSnapshot build_snapshot(std::vector<PublicationRecord> publications,
                                       std::vector<JournalRecord> journals,
                                       std::vector<RetractionRecord> retractions);

 private:
  std::vector<PublicationRecord> pubs_;
  std::map<std::string, std::size_t, std::less<>> pub_index_;
  std::vector<JournalRecord> journals_;
  std::map<std::string, std::size_t, std::less<>> journal_index_;
  std::vector<std::size_t> pub_journal_;
  std::vector<RetractionRecord> retractions_;
  std::vector<std::optional<std::size_t>> retraction_matches_;
  std::vector<bool> retracted_;
  std::vector<std::string> institutions_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_institution_;
  std::vector<std::vector<std::string>> pub_institutions_;
};

// Validates records, resolves journals and matches retractions to
// publications (DOI first, then PMID). Throws ValidationError on duplicate
// pub_id, unknown journal ids, ambiguous retraction matches or broken record
// invariants.
CorpusSnapshot build_snapshot(std::vector<PublicationRecord> publications,
                              std::vector<JournalRecord> journals,
                              std::vector<RetractionRecord> retractions);

PublicationView window_view(const CorpusSnapshot& snapshot, const Window& window,
                            DocTypeSet doc_types, std::size_t max_coauthors);
PublicationView window_view(const CorpusSnapshot& snapshot, const Window& window,
                            const Scope& scope = {});
// Same filter applied to an existing view; keeps pub_id order.
PublicationView window_view(const PublicationView& view, const Window& window,
                            DocTypeSet doc_types, std::size_t max_coauthors);

// Publications of one institution inside a window and scope, ordered by pub_id.
PublicationView institution_view(const CorpusSnapshot& snapshot,
                                 std::string_view institution, const Window& window,
                                 const Scope& scope = {});

}  // namespace integrity
