#include "integrity/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"

namespace integrity::ingest {
namespace {

namespace fs = std::filesystem;

std::optional<std::string> optional_field(const std::string& s) {
  auto t = text::trim(s);
  if (t.empty()) return std::nullopt;
  return t;
}

long long int_field(const csv::Reader& reader, const csv::Row& row, std::size_t col) {
  try {
    return text::parse_int(row.fields[col]);
  } catch (const std::invalid_argument& e) {
    reader.fail(row, col, e.what());
  }
}

std::optional<int> optional_year(const csv::Reader& reader, const csv::Row& row,
                                 std::size_t col) {
  if (text::trim(row.fields[col]).empty()) return std::nullopt;
  return static_cast<int>(int_field(reader, row, col));
}

std::optional<std::string> pmid_field(const csv::Reader& reader, const csv::Row& row,
                                      std::size_t col) {
  auto v = optional_field(row.fields[col]);
  if (v && !std::all_of(v->begin(), v->end(),
                        [](unsigned char c) { return c >= '0' && c <= '9'; })) {
    reader.fail(row, col, "PMID must be numeric");
  }
  return v;
}

std::vector<Window> coverage_field(const csv::Reader& reader, const csv::Row& row,
                                   std::size_t col) {
  std::vector<Window> out;
  for (const auto& piece : text::split_list(row.fields[col], ';')) {
    try {
      out.push_back(Window::parse(piece));
    } catch (const FormatError& e) {
      reader.fail(row, col, e.what());
    } catch (const ValidationError& e) {
      reader.fail(row, col, e.what());
    }
  }
  return out;
}

std::string coverage_text(const std::vector<Window>& windows) {
  std::vector<std::string> parts;
  for (const auto& w : windows) parts.push_back(w.to_string());
  return text::join(parts, ";");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

}  // namespace

ReasonExclusionPolicy::ReasonExclusionPolicy()
    : ReasonExclusionPolicy({"Retract and Replace", "Error by Journal/Publisher"}) {}

ReasonExclusionPolicy::ReasonExclusionPolicy(std::vector<std::string> excluded_reasons)
    : reasons_(std::move(excluded_reasons)) {
  for (const auto& r : reasons_) folded_.push_back(text::to_lower(text::trim(r)));
}

bool ReasonExclusionPolicy::excludes_reason(std::string_view reason) const {
  const auto folded = text::to_lower(text::trim(reason));
  return std::find(folded_.begin(), folded_.end(), folded) != folded_.end();
}

bool ReasonExclusionPolicy::excludes(const RetractionRecord& record) const {
  return std::any_of(record.reasons.begin(), record.reasons.end(),
                     [this](const std::string& r) { return excludes_reason(r); });
}

RetractionPartition partition_retractions(std::vector<RetractionRecord> records,
                                          const ReasonExclusionPolicy& policy) {
  RetractionPartition out;
  for (auto& r : records) {
    (policy.excludes(r) ? out.excluded : out.kept).push_back(std::move(r));
  }
  return out;
}

std::vector<PublicationRecord> read_publications(std::istream& publications,
                                                 const std::string& publications_source,
                                                 std::istream& authorships,
                                                 const std::string& authorships_source) {
  std::vector<PublicationRecord> pubs;
  std::map<std::string, std::size_t, std::less<>> index;

  csv::Reader pr(publications, publications_source);
  pr.expect_header(kPublicationColumns);
  csv::Row row;
  while (pr.next(row)) {
    PublicationRecord p;
    p.pub_id = text::trim(row.fields[0]);
    if (p.pub_id.empty()) pr.fail(row, 0, "empty pub_id");
    p.doi = optional_field(row.fields[1]);
    p.pmid = pmid_field(pr, row, 2);
    p.year = static_cast<int>(int_field(pr, row, 3));
    p.journal_id = text::trim(row.fields[4]);
    if (p.journal_id.empty()) pr.fail(row, 4, "empty journal_id");
    bool known = true;
    p.doc_type = parse_doc_type(row.fields[5], &known);
    if (!known) {
      warn(publications_source + ":" + std::to_string(row.line) + ": unknown doc_type '" +
           text::trim(row.fields[5]) + "' mapped to other");
    }
    p.subjects = text::split_list(row.fields[6], '|');
    p.citation_count = int_field(pr, row, 7);
    if (p.citation_count < 0) pr.fail(row, 7, "negative citation_count");
    if (!index.emplace(p.pub_id, pubs.size()).second) {
      pr.fail(row, 0, "duplicate pub_id '" + p.pub_id + "'");
    }
    pubs.push_back(std::move(p));
  }

  // position -> entry, per publication
  std::vector<std::map<long long, AuthorshipEntry>> positioned(pubs.size());
  csv::Reader ar(authorships, authorships_source);
  ar.expect_header(kAuthorshipColumns);
  while (ar.next(row)) {
    const auto pub_id = text::trim(row.fields[0]);
    auto it = index.find(pub_id);
    if (it == index.end()) ar.fail(row, 0, "unknown pub_id '" + pub_id + "'");
    const long long position = int_field(ar, row, 1);
    if (position < 1) ar.fail(row, 1, "position must be >= 1");
    AuthorshipEntry a;
    a.author_id = text::trim(row.fields[2]);
    if (a.author_id.empty()) ar.fail(row, 2, "empty author_id");
    const auto corr = text::trim(row.fields[3]);
    if (corr == "1") {
      a.is_corresponding = true;
    } else if (corr != "0") {
      ar.fail(row, 3, "is_corresponding must be 0 or 1");
    }
    a.institution_ids = text::split_list(row.fields[4], '|');
    if (a.institution_ids.empty()) ar.fail(row, 4, "no institution ids");
    if (!positioned[it->second].emplace(position, std::move(a)).second) {
      ar.fail(row, 1, "duplicate position for '" + pub_id + "'");
    }
  }
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    for (auto& [pos, entry] : positioned[i]) pubs[i].authors.push_back(std::move(entry));
  }
  return pubs;
}

std::vector<PublicationRecord> load_publications(const std::string& path,
                                                 const std::string& authorship_path) {
  auto pubs = open_input(path);
  auto auths = open_input(authorship_path);
  return read_publications(pubs, path, auths, authorship_path);
}

std::vector<JournalRecord> read_journals(std::istream& in, const std::string& source) {
  std::vector<JournalRecord> out;
  csv::Reader reader(in, source);
  reader.expect_header(kJournalColumns);
  csv::Row row;
  while (reader.next(row)) {
    JournalRecord j;
    j.journal_id = text::trim(row.fields[0]);
    if (j.journal_id.empty()) reader.fail(row, 0, "empty journal_id");
    j.title = row.fields[1];
    const auto by = text::to_lower(text::trim(row.fields[2]));
    if (by == "scopus") {
      j.delisted_scopus = true;
    } else if (by == "wos") {
      j.delisted_wos = true;
    } else if (by == "both") {
      j.delisted_scopus = j.delisted_wos = true;
    } else if (by != "none" && !by.empty()) {
      reader.fail(row, 2, "delisted_by must be none, scopus, wos or both");
    }
    j.delist_year_scopus = optional_year(reader, row, 3);
    j.delist_year_wos = optional_year(reader, row, 4);
    if (j.delisted_scopus != j.delist_year_scopus.has_value()) {
      reader.fail(row, 3, "delist year must be present iff delisted by scopus");
    }
    if (j.delisted_wos != j.delist_year_wos.has_value()) {
      reader.fail(row, 4, "delist year must be present iff delisted by wos");
    }
    j.coverage_scopus = coverage_field(reader, row, 5);
    j.coverage_wos = coverage_field(reader, row, 6);
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<JournalRecord> load_journals(const std::string& path) {
  auto in = open_input(path);
  return read_journals(in, path);
}

std::vector<RetractionRecord> read_retractions(std::istream& in, const std::string& source) {
  std::vector<RetractionRecord> out;
  csv::Reader reader(in, source);
  reader.expect_header(kRetractionColumns);
  csv::Row row;
  while (reader.next(row)) {
    RetractionRecord r;
    r.doi = optional_field(row.fields[0]);
    r.pmid = pmid_field(reader, row, 1);
    if (!r.doi && !r.pmid) reader.fail(row, 0, "retraction has neither DOI nor PMID");
    r.retraction_year = static_cast<int>(int_field(reader, row, 2));
    r.nature = row.fields[3];
    r.reasons = text::split_list(row.fields[4], ';');
    out.push_back(std::move(r));
  }
  return out;
}

RetractionPartition load_retractions(const std::string& path,
                                     const ReasonExclusionPolicy& policy) {
  auto in = open_input(path);
  return partition_retractions(read_retractions(in, path), policy);
}

CitationEdgeTable read_citations(std::istream& in, const std::string& source) {
  CitationEdgeTable out;
  csv::Reader reader(in, source);
  reader.expect_header(kCitationColumns);
  csv::Row row;
  while (reader.next(row)) {
    CitationPair e{text::trim(row.fields[0]), text::trim(row.fields[1])};
    if (e.citing_pub_id.empty()) reader.fail(row, 0, "empty citing_pub_id");
    if (e.cited_pub_id.empty()) reader.fail(row, 1, "empty cited_pub_id");
    out.push_back(std::move(e));
  }
  return out;
}

CitationEdgeTable load_citations(const std::string& path) {
  auto in = open_input(path);
  return read_citations(in, path);
}

void write_publications(std::ostream& out, const std::vector<PublicationRecord>& pubs) {
  out << csv::format_row(kPublicationColumns);
  for (const auto& p : pubs) {
    out << csv::format_row({p.pub_id, p.doi.value_or(""), p.pmid.value_or(""),
                            std::to_string(p.year), p.journal_id,
                            std::string(to_string(p.doc_type)), text::join(p.subjects, "|"),
                            std::to_string(p.citation_count)});
  }
}

void write_authorships(std::ostream& out, const std::vector<PublicationRecord>& pubs) {
  out << csv::format_row(kAuthorshipColumns);
  for (const auto& p : pubs) {
    for (std::size_t i = 0; i < p.authors.size(); ++i) {
      const auto& a = p.authors[i];
      out << csv::format_row({p.pub_id, std::to_string(i + 1), a.author_id,
                              a.is_corresponding ? "1" : "0",
                              text::join(a.institution_ids, "|")});
    }
  }
}

void write_journals(std::ostream& out, const std::vector<JournalRecord>& journals) {
  out << csv::format_row(kJournalColumns);
  for (const auto& j : journals) {
    std::string by = j.delisted_scopus && j.delisted_wos ? "both"
                     : j.delisted_scopus                 ? "scopus"
                     : j.delisted_wos                    ? "wos"
                                                         : "none";
    auto year = [](const std::optional<int>& y) { return y ? std::to_string(*y) : ""; };
    out << csv::format_row({j.journal_id, j.title, by, year(j.delist_year_scopus),
                            year(j.delist_year_wos), coverage_text(j.coverage_scopus),
                            coverage_text(j.coverage_wos)});
  }
}

void write_retractions(std::ostream& out, const std::vector<RetractionRecord>& records) {
  out << csv::format_row(kRetractionColumns);
  for (const auto& r : records) {
    out << csv::format_row({r.doi.value_or(""), r.pmid.value_or(""),
                            std::to_string(r.retraction_year), r.nature,
                            text::join(r.reasons, ";")});
  }
}

void write_citations(std::ostream& out, const CitationEdgeTable& edges) {
  out << csv::format_row(kCitationColumns);
  for (const auto& e : edges) out << csv::format_row({e.citing_pub_id, e.cited_pub_id});
}

CorpusFiles read_corpus_dir(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw FormatError("corpus directory '" + dir + "' not found");
  CorpusFiles files;
  files.publications = load_publications((root / kPublicationsFile).string(),
                                         (root / kAuthorshipsFile).string());
  files.journals = load_journals((root / kJournalsFile).string());
  {
    const auto path = (root / kRetractionsFile).string();
    auto in = open_input(path);
    files.retractions = read_retractions(in, path);
  }
  const auto citations = root / kCitationsFile;
  if (fs::exists(citations)) files.citations = load_citations(citations.string());
  return files;
}

void write_corpus_dir(const std::string& dir, const CorpusFiles& files) {
  const fs::path root(dir);
  fs::create_directories(root);
  auto emit = [&](const char* name, auto&& writer) {
    std::ostringstream out;
    writer(out);
    write_file_atomically((root / name).string(), out.str());
  };
  emit(kPublicationsFile, [&](std::ostream& o) { write_publications(o, files.publications); });
  emit(kAuthorshipsFile, [&](std::ostream& o) { write_authorships(o, files.publications); });
  emit(kJournalsFile, [&](std::ostream& o) { write_journals(o, files.journals); });
  emit(kRetractionsFile, [&](std::ostream& o) { write_retractions(o, files.retractions); });
  if (files.citations) {
    emit(kCitationsFile, [&](std::ostream& o) { write_citations(o, *files.citations); });
  } else {
    fs::remove(root / kCitationsFile);
  }
}

std::vector<std::string> corpus_file_paths(const std::string& dir) {
  const fs::path root(dir);
  std::vector<std::string> out;
  for (const char* name : {kPublicationsFile, kAuthorshipsFile, kJournalsFile,
                           kRetractionsFile, kCitationsFile}) {
    if (fs::exists(root / name)) out.push_back((root / name).string());
  }
  return out;
}

LoadedCorpus load_corpus(const CorpusFiles& files, const ReasonExclusionPolicy& policy) {
  auto parts = partition_retractions(files.retractions, policy);
  LoadedCorpus out;
  out.snapshot = build_snapshot(files.publications, files.journals, std::move(parts.kept));
  out.excluded_retractions = std::move(parts.excluded);
  out.citations = files.citations;
  return out;
}

LoadedCorpus load_corpus_dir(const std::string& dir, const ReasonExclusionPolicy& policy) {
  return load_corpus(read_corpus_dir(dir), policy);
}

}  // namespace integrity::ingest
