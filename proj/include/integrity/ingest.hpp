#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "integrity/corpus.hpp"

namespace integrity::ingest {

// Column layouts of the flat-file corpus. Multi-valued cells use '|' for
// identifiers and ';' for retraction reasons and coverage windows.
inline const std::vector<std::string> kPublicationColumns = {
    "pub_id", "doi", "pmid", "year", "journal_id", "doc_type", "subject", "citation_count"};
inline const std::vector<std::string> kAuthorshipColumns = {
    "pub_id", "position", "author_id", "is_corresponding", "institution_ids"};
inline const std::vector<std::string> kJournalColumns = {
    "journal_id", "title", "delisted_by", "delist_year_scopus", "delist_year_wos",
    "coverage_scopus", "coverage_wos"};
inline const std::vector<std::string> kRetractionColumns = {
    "doi", "pmid", "retraction_year", "nature", "reasons"};
inline const std::vector<std::string> kCitationColumns = {"citing_pub_id", "cited_pub_id"};

// Retraction reasons that are not attributable to authors. Matching is exact
// after trimming and case folding, never by substring.
class ReasonExclusionPolicy {
 public:
  ReasonExclusionPolicy();  // "Retract and Replace", "Error by Journal/Publisher"
  explicit ReasonExclusionPolicy(std::vector<std::string> excluded_reasons);

  bool excludes_reason(std::string_view reason) const;
  bool excludes(const RetractionRecord& record) const;
  const std::vector<std::string>& reasons() const { return reasons_; }

 private:
  std::vector<std::string> reasons_;
  std::vector<std::string> folded_;
};

struct RetractionPartition {
  std::vector<RetractionRecord> kept;
  std::vector<RetractionRecord> excluded;
};

RetractionPartition partition_retractions(std::vector<RetractionRecord> records,
                                          const ReasonExclusionPolicy& policy);

std::vector<PublicationRecord> read_publications(std::istream& publications,
                                                 const std::string& publications_source,
                                                 std::istream& authorships,
                                                 const std::string& authorships_source);
std::vector<PublicationRecord> load_publications(const std::string& path,
                                                 const std::string& authorship_path);

std::vector<JournalRecord> read_journals(std::istream& in, const std::string& source);
std::vector<JournalRecord> load_journals(const std::string& path);

std::vector<RetractionRecord> read_retractions(std::istream& in, const std::string& source);
RetractionPartition load_retractions(const std::string& path,
                                     const ReasonExclusionPolicy& policy = {});

CitationEdgeTable read_citations(std::istream& in, const std::string& source);
CitationEdgeTable load_citations(const std::string& path);

void write_publications(std::ostream& out, const std::vector<PublicationRecord>& pubs);
void write_authorships(std::ostream& out, const std::vector<PublicationRecord>& pubs);
void write_journals(std::ostream& out, const std::vector<JournalRecord>& journals);
void write_retractions(std::ostream& out, const std::vector<RetractionRecord>& records);
void write_citations(std::ostream& out, const CitationEdgeTable& edges);

// All record files of one corpus directory, before policy filtering.
struct CorpusFiles {
  std::vector<PublicationRecord> publications;
  std::vector<JournalRecord> journals;
  std::vector<RetractionRecord> retractions;
  std::optional<CitationEdgeTable> citations;
};

// File names inside a corpus directory.
inline constexpr const char* kPublicationsFile = "publications.csv";
inline constexpr const char* kAuthorshipsFile = "authorships.csv";
inline constexpr const char* kJournalsFile = "journals.csv";
inline constexpr const char* kRetractionsFile = "retractions.csv";
inline constexpr const char* kCitationsFile = "citations.csv";

// citations.csv is optional; the other four files are required.
CorpusFiles read_corpus_dir(const std::string& dir);
// Writes every file through a temporary name and renames it into place.
void write_corpus_dir(const std::string& dir, const CorpusFiles& files);
// Paths of the files present in a corpus directory, in fixed order.
std::vector<std::string> corpus_file_paths(const std::string& dir);

struct LoadedCorpus {
  CorpusSnapshot snapshot;
  std::optional<CitationEdgeTable> citations;
  std::vector<RetractionRecord> excluded_retractions;
};

LoadedCorpus load_corpus(const CorpusFiles& files, const ReasonExclusionPolicy& policy = {});
LoadedCorpus load_corpus_dir(const std::string& dir, const ReasonExclusionPolicy& policy = {});

}  // namespace integrity::ingest
