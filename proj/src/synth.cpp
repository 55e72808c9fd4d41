#include "integrity/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "integrity/diagnostics.hpp"
#include "integrity/indicators.hpp"

namespace integrity::synth {

namespace {

const std::vector<std::string> kParamKeys = {
    "n_institutions",          "n_authors_per_institution", "n_years",
    "start_year",              "pubs_per_author_year_mean", "max_author_yearly_output",
    "citation_mean",           "seed",                      "collaboration_probability",
    "journal_pool_size",       "background_institutions",   "background_pubs_per_year"};

const std::vector<std::string> kSubjects = {"Biology",     "Chemistry",   "Computer Science",
                                            "Engineering", "Mathematics", "Medicine"};

enum StreamId : std::uint64_t {
  kOutputStream = 1,
  kCoauthorStream = 2,
  kCitationStream = 3,
  kVenueStream = 4,
  kBackgroundStream = 5,
  kEdgeStream = 6,
  kIdStream = 7,
};

std::string padded(std::size_t value, int width) {
  auto s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace

void SynthParams::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ValidationError(std::string(name) + " must be positive");
  };
  positive(n_institutions, "n_institutions");
  positive(n_authors_per_institution, "n_authors_per_institution");
  positive(n_years, "n_years");
  positive(pubs_per_author_year_mean, "pubs_per_author_year_mean");
  positive(max_author_yearly_output, "max_author_yearly_output");
  positive(citation_mean, "citation_mean");
  positive(journal_pool_size, "journal_pool_size");
  if (n_institutions > 999 || background_institutions > 999) {
    throw ValidationError("at most 999 study and 999 background institutions");
  }
  if (max_author_yearly_output >= indicators::kHpaThreshold / 2) {
    throw ValidationError("max_author_yearly_output must stay below " +
                          std::to_string(indicators::kHpaThreshold / 2));
  }
  if (!(collaboration_probability >= 0.0 && collaboration_probability <= 1.0)) {
    throw ValidationError("collaboration_probability must lie in [0, 1]");
  }
  if (n_institutions < 2 && collaboration_probability > 0.0) {
    throw ValidationError("collaboration needs at least 2 institutions");
  }
  if ((background_institutions == 0) != (background_pubs_per_year == 0)) {
    throw ValidationError(
        "background_institutions and background_pubs_per_year must both be zero or both positive");
  }
  if (start_year < 1900) throw ValidationError("start_year must be >= 1900");
}

SynthParams parse_params(const KeyValueDoc& doc) {
  doc.reject_unknown(kParamKeys);
  SynthParams p;
  auto count = [&](const char* key, std::size_t& field) {
    if (!doc.has(key)) return;
    const auto v = doc.require_int(key);
    if (v < 0) throw ValidationError(doc.source() + ": " + key + " must be >= 0");
    field = static_cast<std::size_t>(v);
  };
  count("n_institutions", p.n_institutions);
  count("n_authors_per_institution", p.n_authors_per_institution);
  count("n_years", p.n_years);
  if (doc.has("start_year")) p.start_year = static_cast<int>(doc.require_int("start_year"));
  count("pubs_per_author_year_mean", p.pubs_per_author_year_mean);
  count("max_author_yearly_output", p.max_author_yearly_output);
  count("citation_mean", p.citation_mean);
  if (const auto* seed = doc.find("seed")) {
    std::uint64_t v = 0;
    const auto* end = seed->data() + seed->size();
    const auto [ptr, ec] = std::from_chars(seed->data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw FormatError(doc.source() + ": seed must be an unsigned 64-bit integer");
    }
    p.seed = v;
  }
  if (doc.has("collaboration_probability")) {
    p.collaboration_probability = doc.require_double("collaboration_probability");
  }
  count("journal_pool_size", p.journal_pool_size);
  count("background_institutions", p.background_institutions);
  count("background_pubs_per_year", p.background_pubs_per_year);
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(doc.source() + ": " + e.what());
  }
  return p;
}

SynthParams load_params(const std::string& path) { return parse_params(KeyValueDoc::load(path)); }

std::string format_params(const SynthParams& p) {
  KeyValueDoc doc;
  doc.set("n_institutions", std::to_string(p.n_institutions));
  doc.set("n_authors_per_institution", std::to_string(p.n_authors_per_institution));
  doc.set("n_years", std::to_string(p.n_years));
  doc.set("start_year", std::to_string(p.start_year));
  doc.set("pubs_per_author_year_mean", std::to_string(p.pubs_per_author_year_mean));
  doc.set("max_author_yearly_output", std::to_string(p.max_author_yearly_output));
  doc.set("citation_mean", std::to_string(p.citation_mean));
  doc.set("seed", std::to_string(p.seed));
  doc.set("collaboration_probability", text::format_exact(p.collaboration_probability));
  doc.set("journal_pool_size", std::to_string(p.journal_pool_size));
  doc.set("background_institutions", std::to_string(p.background_institutions));
  doc.set("background_pubs_per_year", std::to_string(p.background_pubs_per_year));
  return doc.render();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(seed ^ splitmix64(stream_id))) {}

std::uint64_t Stream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Stream::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = 0;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

bool Stream::chance(std::uint64_t per_million) { return below(1000000) < per_million; }

std::string study_institution_id(std::size_t i) { return "U" + padded(i + 1, 3); }
std::string background_institution_id(std::size_t i) { return "B" + padded(i + 1, 3); }

namespace {

std::string author_id(const std::string& institution, std::size_t i) {
  return institution + "-A" + padded(i + 1, 3);
}

constexpr std::size_t kBackgroundAuthors = 5;

}  // namespace

ingest::CorpusFiles generate_null(const SynthParams& params) {
  params.validate();
  Stream output(params.seed, kOutputStream);
  Stream coauthors(params.seed, kCoauthorStream);
  Stream citations(params.seed, kCitationStream);
  Stream venue(params.seed, kVenueStream);
  Stream background(params.seed, kBackgroundStream);
  Stream edges(params.seed, kEdgeStream);
  Stream ids(params.seed, kIdStream);

  ingest::CorpusFiles files;
  for (std::size_t j = 0; j < params.journal_pool_size; ++j) {
    JournalRecord journal;
    journal.journal_id = "J" + padded(j + 1, 3);
    journal.title = "Synthetic Journal " + std::to_string(j + 1);
    journal.coverage_scopus = {Window(params.start_year, params.end_year())};
    files.journals.push_back(std::move(journal));
  }

  const std::uint64_t collab_threshold =
      static_cast<std::uint64_t>(std::llround(params.collaboration_probability * 1e6));
  const std::size_t n_authors = params.n_authors_per_institution;

  std::vector<PublicationRecord> study;
  for (int year = params.start_year; year <= params.end_year(); ++year) {
    for (std::size_t i = 0; i < params.n_institutions; ++i) {
      const auto inst = study_institution_id(i);
      for (std::size_t a = 0; a < n_authors; ++a) {
        const auto n = std::min<std::size_t>(
            output.below(2 * params.pubs_per_author_year_mean + 1),
            params.max_author_yearly_output);
        for (std::size_t k = 0; k < n; ++k) {
          PublicationRecord p;
          p.year = year;
          p.authors.push_back({author_id(inst, a), {inst}, false});
          const auto extra = std::min<std::size_t>(coauthors.below(3), n_authors - 1);
          std::set<std::size_t> chosen = {a};
          while (chosen.size() < extra + 1) {
            const auto c = coauthors.below(n_authors);
            if (chosen.insert(c).second) p.authors.push_back({author_id(inst, c), {inst}, false});
          }
          if (params.n_institutions > 1 && coauthors.chance(collab_threshold)) {
            auto other = coauthors.below(params.n_institutions - 1);
            if (other >= i) ++other;
            const auto other_inst = study_institution_id(other);
            p.authors.push_back(
                {author_id(other_inst, coauthors.below(n_authors)), {other_inst}, false});
          }
          const auto corr = coauthors.below(2) == 0 ? 0 : coauthors.below(p.authors.size());
          p.authors[corr].is_corresponding = true;
          p.journal_id = files.journals[venue.below(params.journal_pool_size)].journal_id;
          p.doc_type = venue.chance(100000) ? DocType::Review : DocType::Article;
          p.subjects = {kSubjects[venue.below(kSubjects.size())]};
          p.citation_count =
              static_cast<std::int64_t>(citations.below(2 * params.citation_mean + 1));
          study.push_back(std::move(p));
        }
      }
    }
  }
  // Identifiers in shuffled order so citation ties do not favour any
  // institution.
  std::vector<std::size_t> order(study.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[ids.below(i)]);
  for (std::size_t i = 0; i < study.size(); ++i) {
    study[order[i]].pub_id = "P" + padded(i + 1, 7);
    study[order[i]].doi = "10.5555/synth.p" + padded(i + 1, 7);
  }

  // Background pool, indexed by year.
  std::vector<std::vector<std::size_t>> pool_by_year(params.n_years);
  std::vector<PublicationRecord> pool;
  std::size_t serial = 0;
  for (int year = params.start_year; year <= params.end_year(); ++year) {
    for (std::size_t k = 0; k < params.background_pubs_per_year; ++k) {
      PublicationRecord p;
      p.pub_id = "Q" + padded(++serial, 7);
      p.year = year;
      const auto inst = background_institution_id(background.below(params.background_institutions));
      p.authors.push_back({author_id(inst, background.below(kBackgroundAuthors)), {inst}, true});
      p.journal_id = files.journals[background.below(params.journal_pool_size)].journal_id;
      p.doc_type = DocType::Article;
      p.subjects = {kSubjects[background.below(kSubjects.size())]};
      pool_by_year[static_cast<std::size_t>(year - params.start_year)].push_back(pool.size());
      pool.push_back(std::move(p));
    }
  }

  CitationEdgeTable table;
  if (!pool.empty()) {
    for (const auto& p : study) {
      const auto first = static_cast<std::size_t>(p.year - params.start_year);
      std::size_t capacity = 0;
      for (std::size_t y = first; y < params.n_years; ++y) capacity += pool_by_year[y].size();
      const auto wanted = std::min<std::size_t>(static_cast<std::size_t>(p.citation_count), capacity);
      std::set<std::size_t> citing;
      while (citing.size() < wanted) {
        const auto y = first + edges.below(params.n_years - first);
        const auto& bucket = pool_by_year[y];
        citing.insert(bucket[edges.below(bucket.size())]);
      }
      for (auto c : citing) table.push_back({pool[c].pub_id, p.pub_id});
    }
  }
  // Citation counts mirror the in-corpus citation links.
  std::map<std::string, std::int64_t> received;
  for (const auto& e : table) ++received[e.cited_pub_id];
  if (!pool.empty()) {
    for (auto& p : study) p.citation_count = received[p.pub_id];
  }

  files.publications = std::move(study);
  for (auto& p : pool) files.publications.push_back(std::move(p));
  std::sort(files.publications.begin(), files.publications.end(),
            [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
  if (!pool.empty()) files.citations = normalize_edges(std::move(table));
  return files;
}

namespace {

int last_year(const ingest::CorpusFiles& files) {
  int year = 0;
  for (const auto& p : files.publications) year = std::max(year, p.year);
  if (year == 0) throw ValidationError("cannot inject into an empty corpus");
  return year;
}

int first_year(const ingest::CorpusFiles& files) {
  int year = last_year(files);
  for (const auto& p : files.publications) year = std::min(year, p.year);
  return year;
}

Window recent_window(const ingest::CorpusFiles& files) {
  const int last = last_year(files);
  return Window(std::max(first_year(files), last - 1), last);
}

bool solo(const PublicationRecord& p, std::string_view institution) {
  for (const auto& a : p.authors) {
    for (const auto& inst : a.institution_ids) {
      if (inst != institution) return false;
    }
  }
  return true;
}

std::map<std::string, std::size_t, std::less<>> index_by_id(const ingest::CorpusFiles& files) {
  std::map<std::string, std::size_t, std::less<>> out;
  for (std::size_t i = 0; i < files.publications.size(); ++i) {
    out.emplace(files.publications[i].pub_id, i);
  }
  return out;
}

void require_institution(const CorpusSnapshot& snapshot, const std::string& institution) {
  if (!snapshot.has_institution(institution)) {
    throw ValidationError("institution '" + institution + "' does not appear in the corpus");
  }
}

// Journal for injected ordinary publications: first journal never delisted.
std::string clean_journal(ingest::CorpusFiles& files, const Window& years) {
  for (const auto& j : files.journals) {
    if (!j.delisted()) return j.journal_id;
  }
  JournalRecord j;
  j.journal_id = "JSYN";
  j.title = "Synthetic Journal";
  j.coverage_scopus = {years};
  files.journals.push_back(j);
  return j.journal_id;
}

}  // namespace

ingest::CorpusFiles inject_delisted_dumping(ingest::CorpusFiles files,
                                            const std::string& institution, double target_share,
                                            std::optional<Window> window) {
  if (!(target_share >= 0.0 && target_share < 1.0)) {
    throw ValidationError("delisted target share must lie in [0, 1)");
  }
  if (target_share == 0.0) return files;
  const Window w = window.value_or(recent_window(files));
  const auto loaded = ingest::load_corpus(files);
  const auto& snapshot = loaded.snapshot;
  require_institution(snapshot, institution);
  const auto view = institution_view(snapshot, institution, w);
  const auto n = view.size();
  std::size_t delisted = indicators::delisted_share(snapshot, institution, w).count;
  const auto target = static_cast<std::size_t>(std::llround(target_share * static_cast<double>(n)));
  if (delisted >= target && n > 0) {
    warn("delisted share of '" + institution + "' already meets the target; nothing injected");
    return files;
  }

  const std::string journal_id = "JDL-" + institution;
  if (!snapshot.find_journal(journal_id)) {
    JournalRecord j;
    j.journal_id = journal_id;
    j.title = "Delisted Journal " + institution;
    j.delisted_scopus = true;
    j.delist_year_scopus = w.end_year;
    j.coverage_scopus = {Window(std::min(first_year(files), w.start_year), w.end_year)};
    files.journals.push_back(std::move(j));
  }

  const auto by_id = index_by_id(files);
  for (const auto* p : view) {
    if (delisted >= target) break;
    if (!solo(*p, institution) || snapshot.journal_of(*p).delisted_content(p->year)) continue;
    files.publications[by_id.find(p->pub_id)->second].journal_id = journal_id;
    ++delisted;
  }
  if (delisted < target) {
    // Not enough solo publications: add new delisted-journal articles until
    // (delisted + a) / (n + a) reaches the target.
    const double need = (target_share * static_cast<double>(n) - static_cast<double>(delisted)) /
                        (1.0 - target_share);
    const auto add = static_cast<std::size_t>(std::ceil(need - 1e-9));
    constexpr std::size_t kPerAuthorYear = 10;
    for (std::size_t k = 0; k < add; ++k) {
      PublicationRecord p;
      p.pub_id = institution + "-DL-" + padded(k + 1, 6);
      p.year = w.start_year + static_cast<int>(k % static_cast<std::size_t>(w.length()));
      const auto author = k / (kPerAuthorYear * static_cast<std::size_t>(w.length()));
      p.authors.push_back({institution + "-DL" + padded(author + 1, 4), {institution}, true});
      p.journal_id = journal_id;
      p.subjects = {"General"};
      files.publications.push_back(std::move(p));
    }
  }
  return files;
}

ingest::CorpusFiles inject_citation_ring(ingest::CorpusFiles files,
                                         const std::vector<std::string>& institutions,
                                         double intensity, std::optional<Window> window) {
  if (!(intensity >= 0.0 && intensity < 1.0)) {
    throw ValidationError("ring intensity must lie in [0, 1)");
  }
  std::vector<std::string> members = institutions;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (intensity == 0.0) return files;
  if (members.size() < 2) throw ValidationError("a citation ring needs at least 2 institutions");
  const double s = std::max(intensity, 0.01);
  const auto k = static_cast<double>(members.size());
  if ((k - 1.0) * s >= 1.0) {
    throw ValidationError("ring intensity too high for " + std::to_string(members.size()) +
                          " members");
  }
  const Window w = window.value_or(recent_window(files));
  const auto loaded = ingest::load_corpus(files);
  const auto& snapshot = loaded.snapshot;
  for (const auto& m : members) require_institution(snapshot, m);
  const indicators::CitationGraph graph(snapshot, loaded.citations.value_or(CitationEdgeTable{}));

  std::set<CitationPair> existing;
  if (files.citations) existing.insert(files.citations->begin(), files.citations->end());
  CitationEdgeTable added;
  for (const auto& target : members) {
    const auto basis = indicators::basis_set(graph, target, w, indicators::Basis::Top2);
    if (basis.empty()) {
      throw ValidationError("ring member '" + target + "' has no highly cited articles in " +
                            w.to_string());
    }
    const auto tally = indicators::tally_citations(graph, target, w, indicators::Basis::Top2);
    const auto total = static_cast<double>(tally.total);
    std::size_t x = 0;
    for (const auto& source : members) {
      if (source == target) continue;
      auto it = tally.by_institution.find(source);
      const double have = it == tally.by_institution.end() ? 0.0 : static_cast<double>(it->second);
      const double need = (s * total - have) / (1.0 - (k - 1.0) * s);
      if (need > 0) x = std::max(x, static_cast<std::size_t>(std::ceil(need - 1e-9)));
    }
    for (const auto& source : members) {
      if (source == target) continue;
      PublicationView citing;
      for (const auto* p : institution_view(snapshot, source, w, Scope{DocTypeSet::all(), Scope::kNoLimit})) {
        if (solo(*p, source)) citing.push_back(p);
      }
      if (citing.size() < x) {
        for (const auto* p : institution_view(snapshot, source, w, Scope{DocTypeSet::all(), Scope::kNoLimit})) {
          if (!solo(*p, source)) citing.push_back(p);
        }
      }
      std::size_t made = 0;
      for (std::size_t i = 0; made < x && i < citing.size() * basis.size(); ++i) {
        const auto* from = citing[i % citing.size()];
        const auto* to = basis[(i / citing.size() + i % citing.size()) % basis.size()];
        CitationPair e{from->pub_id, to->pub_id};
        if (from->lists(target) || !existing.insert(e).second) continue;
        added.push_back(std::move(e));
        ++made;
      }
      if (made < x) {
        warn("ring: only " + std::to_string(made) + " of " + std::to_string(x) +
             " citations could be added from '" + source + "' to '" + target + "'");
      }
    }
  }
  const auto by_id = index_by_id(files);
  for (const auto& e : added) ++files.publications[by_id.find(e.cited_pub_id)->second].citation_count;
  if (!files.citations) files.citations = CitationEdgeTable{};
  files.citations->insert(files.citations->end(), added.begin(), added.end());
  files.citations = normalize_edges(std::move(*files.citations));
  return files;
}

ingest::CorpusFiles inject_hpa(ingest::CorpusFiles files, const std::string& institution,
                               std::size_t n_authors, std::size_t yearly_output,
                               std::size_t extra_coauthors, std::optional<int> year) {
  if (n_authors == 0 || yearly_output == 0) return files;
  if (n_authors > 9999 || yearly_output > 999999) throw ValidationError("HPA injection too large");
  const int y = year.value_or(last_year(files));
  const auto journal = clean_journal(files, Window(first_year(files), last_year(files)));
  for (std::size_t a = 0; a < n_authors; ++a) {
    const auto author = institution + "-HPA" + padded(a + 1, 4);
    for (std::size_t k = 0; k < yearly_output; ++k) {
      PublicationRecord p;
      p.pub_id = author + "-" + padded(k + 1, 6);
      p.year = y;
      p.authors.push_back({author, {institution}, true});
      for (std::size_t c = 0; c < extra_coauthors; ++c) {
        p.authors.push_back({p.pub_id + "-C" + padded(c + 1, 3), {institution}, false});
      }
      p.journal_id = journal;
      p.subjects = {"General"};
      files.publications.push_back(std::move(p));
    }
  }
  return files;
}

ingest::CorpusFiles inject_retractions(ingest::CorpusFiles files, const std::string& institution,
                                       double rate_per_1000, std::optional<Window> window,
                                       const std::string& reason) {
  if (!(rate_per_1000 >= 0.0 && rate_per_1000 <= 1000.0)) {
    throw ValidationError("retraction rate must lie in [0, 1000]");
  }
  if (rate_per_1000 == 0.0) return files;
  const Window w = window.value_or(indicators::default_retraction_window(last_year(files) + 1));
  const auto loaded = ingest::load_corpus(files);
  const auto& snapshot = loaded.snapshot;
  require_institution(snapshot, institution);
  const auto view = institution_view(snapshot, institution, w);
  if (view.empty()) {
    throw ValidationError("'" + institution + "' has no articles in " + w.to_string());
  }
  const auto tally = indicators::retraction_rate(snapshot, institution, w);
  const auto target = static_cast<std::size_t>(
      std::llround(rate_per_1000 * static_cast<double>(view.size()) / 1000.0));
  if (tally.retractions >= target) {
    warn("retraction rate of '" + institution + "' already meets the target; nothing injected");
    return files;
  }
  std::size_t needed = target - tally.retractions;
  std::set<std::string> used_dois;
  for (const auto& r : files.retractions) {
    if (r.doi) used_dois.insert(normalize_doi(*r.doi));
  }
  const auto by_id = index_by_id(files);
  auto mark = [&](const PublicationRecord* p) {
    auto& pub = files.publications[by_id.find(p->pub_id)->second];
    if (!pub.doi) pub.doi = "10.5555/synth." + text::to_lower(pub.pub_id);
    if (!used_dois.insert(normalize_doi(*pub.doi)).second) return;
    RetractionRecord r;
    r.doi = pub.doi;
    r.retraction_year = pub.year;
    r.nature = "Retraction";
    r.reasons = {reason};
    files.retractions.push_back(std::move(r));
    --needed;
  };
  for (const auto* p : view) {
    if (needed == 0) break;
    if (solo(*p, institution) && !snapshot.is_retracted(*p)) mark(p);
  }
  if (needed > 0) {
    warn("retractions: not enough single-institution articles at '" + institution +
         "'; marking co-authored articles");
    for (const auto* p : view) {
      if (needed == 0) break;
      if (!solo(*p, institution) && !snapshot.is_retracted(*p)) mark(p);
    }
  }
  return files;
}

namespace {

constexpr std::array<std::string_view, 4> kInjectionNames = {"delisted", "ring", "hpa",
                                                             "retractions"};

}  // namespace

std::string Injection::to_line() const {
  std::string out = std::string(kInjectionNames[static_cast<std::size_t>(kind)]) + " " +
                    text::join(institutions, ",");
  switch (kind) {
    case InjectionKind::DelistedDumping:
      out += " share=" + text::format_exact(value);
      break;
    case InjectionKind::CitationRing:
      out += " intensity=" + text::format_exact(value);
      break;
    case InjectionKind::Hpa:
      out += " authors=" + std::to_string(n_authors) + " output=" + std::to_string(yearly_output);
      if (extra_coauthors) out += " coauthors=" + std::to_string(extra_coauthors);
      if (year) out += " year=" + std::to_string(*year);
      break;
    case InjectionKind::Retractions:
      out += " rate=" + text::format_exact(value);
      break;
  }
  if (window) out += " window=" + window->to_string();
  if (kind == InjectionKind::Retractions && reason != "Paper Mill") out += " reason=" + reason;
  return out;
}

Injection parse_injection(const std::string& line, const std::string& source,
                          std::size_t line_number) {
  auto fail = [&](const std::string& msg) -> Injection {
    throw FormatError(source, line_number, 0, msg);
  };
  std::istringstream in(line);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() < 2) return fail("expected '<kind> <institution[,...]> key=value...'");
  Injection inj;
  const auto kind = text::to_lower(tokens[0]);
  auto it = std::find(kInjectionNames.begin(), kInjectionNames.end(), kind);
  if (it == kInjectionNames.end()) {
    return fail("unknown injection kind '" + tokens[0] + "' (delisted, ring, hpa, retractions)");
  }
  inj.kind = static_cast<InjectionKind>(it - kInjectionNames.begin());
  inj.institutions = text::split_list(tokens[1], ',');
  if (inj.institutions.empty()) return fail("missing institution");
  if (inj.kind != InjectionKind::CitationRing && inj.institutions.size() != 1) {
    return fail("this injection takes exactly one institution");
  }

  std::vector<std::pair<std::string, std::string>> options;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) {
      if (options.empty()) return fail("expected key=value, got '" + tokens[i] + "'");
      options.back().second += " " + tokens[i];
      continue;
    }
    options.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
  }
  std::set<std::string> seen;
  bool have_value = false;
  bool have_authors = false;
  bool have_output = false;
  for (const auto& [key, value] : options) {
    if (!seen.insert(key).second) return fail("duplicate option '" + key + "'");
    try {
      auto expect_kind = [&](InjectionKind k) {
        if (inj.kind != k) throw std::invalid_argument("option not valid for this injection");
      };
      auto count = [&]() {
        const auto v = text::parse_int(value);
        if (v < 0) throw std::invalid_argument("must be >= 0");
        return static_cast<std::size_t>(v);
      };
      if (key == "share") {
        expect_kind(InjectionKind::DelistedDumping);
        inj.value = text::parse_double(value);
        have_value = true;
      } else if (key == "intensity") {
        expect_kind(InjectionKind::CitationRing);
        inj.value = text::parse_double(value);
        have_value = true;
      } else if (key == "rate") {
        expect_kind(InjectionKind::Retractions);
        inj.value = text::parse_double(value);
        have_value = true;
      } else if (key == "authors") {
        expect_kind(InjectionKind::Hpa);
        inj.n_authors = count();
        have_authors = true;
      } else if (key == "output") {
        expect_kind(InjectionKind::Hpa);
        inj.yearly_output = count();
        have_output = true;
      } else if (key == "coauthors") {
        expect_kind(InjectionKind::Hpa);
        inj.extra_coauthors = count();
      } else if (key == "year") {
        expect_kind(InjectionKind::Hpa);
        inj.year = static_cast<int>(text::parse_int(value));
      } else if (key == "reason") {
        expect_kind(InjectionKind::Retractions);
        inj.reason = text::trim(value);
        if (inj.reason.empty()) throw std::invalid_argument("empty reason");
      } else if (key == "window") {
        if (inj.kind == InjectionKind::Hpa) throw std::invalid_argument("hpa takes year=, not window=");
        inj.window = Window::parse(value);
      } else {
        throw std::invalid_argument("unknown option");
      }
    } catch (const std::exception& e) {
      return fail("option '" + key + "': " + e.what());
    }
  }
  if (inj.kind == InjectionKind::Hpa) {
    if (!have_authors || !have_output) return fail("hpa needs authors= and output=");
  } else if (!have_value) {
    return fail(std::string("missing ") +
                (inj.kind == InjectionKind::DelistedDumping ? "share="
                 : inj.kind == InjectionKind::CitationRing  ? "intensity="
                                                            : "rate="));
  }
  return inj;
}

std::vector<Injection> parse_injections(std::istream& in, const std::string& source) {
  std::vector<Injection> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(parse_injection(t, source, number));
  }
  return out;
}

std::vector<Injection> load_injections(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_injections(in, path);
}

ingest::CorpusFiles apply(ingest::CorpusFiles files, const Injection& inj) {
  switch (inj.kind) {
    case InjectionKind::DelistedDumping:
      return inject_delisted_dumping(std::move(files), inj.institutions.front(), inj.value,
                                     inj.window);
    case InjectionKind::CitationRing:
      return inject_citation_ring(std::move(files), inj.institutions, inj.value, inj.window);
    case InjectionKind::Hpa:
      return inject_hpa(std::move(files), inj.institutions.front(), inj.n_authors,
                        inj.yearly_output, inj.extra_coauthors, inj.year);
    case InjectionKind::Retractions:
      return inject_retractions(std::move(files), inj.institutions.front(), inj.value,
                                inj.window, inj.reason);
  }
  return files;
}

std::string scenario_manifest(const SynthParams& params,
                              const std::vector<Injection>& injections) {
  std::string out = "generator=null\nrng=mt19937_64 seeded by splitmix64(seed ^ splitmix64(stream))\n";
  out += format_params(params);
  out += "injections=" + std::to_string(injections.size()) + "\n";
  for (std::size_t i = 0; i < injections.size(); ++i) {
    out += "injection." + std::to_string(i + 1) + "=" + injections[i].to_line() + "\n";
  }
  return out;
}

}  // namespace integrity::synth
