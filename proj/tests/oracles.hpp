#pragma once

// Brute-force reference implementations over raw records. They share no code
// with the library beyond the record types.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "integrity/corpus.hpp"

namespace oracle {

using integrity::CitationEdgeTable;
using integrity::DocType;
using integrity::PublicationRecord;
using integrity::Window;

struct Filter {
  bool articles = true;
  bool reviews = true;
  bool other = false;
  std::size_t max_coauthors = 100;

  bool admits(const PublicationRecord& p) const {
    const bool type_ok = (p.doc_type == DocType::Article && articles) ||
                         (p.doc_type == DocType::Review && reviews) ||
                         (p.doc_type == DocType::Other && other);
    return type_ok && p.authors.size() <= max_coauthors;
  }
};

inline bool lists(const PublicationRecord& p, const std::string& inst) {
  for (const auto& a : p.authors) {
    for (const auto& i : a.institution_ids) {
      if (i == inst) return true;
    }
  }
  return false;
}

inline bool has_author(const PublicationRecord& p, const std::string& id) {
  for (const auto& a : p.authors) {
    if (a.author_id == id) return true;
  }
  return false;
}

inline std::vector<std::string> hpa_authors(const std::vector<PublicationRecord>& pubs,
                                            const std::string& inst, const Window& window,
                                            std::size_t threshold, const Filter& f) {
  std::set<std::string> all_authors;
  for (const auto& p : pubs) {
    for (const auto& a : p.authors) all_authors.insert(a.author_id);
  }
  std::set<std::string> out;
  for (int y = window.start_year; y <= window.end_year; ++y) {
    for (const auto& id : all_authors) {
      std::size_t count = 0;
      bool at_inst = false;
      for (const auto& p : pubs) {
        if (p.year != y || !f.admits(p) || !has_author(p, id)) continue;
        ++count;
        for (const auto& a : p.authors) {
          if (a.author_id != id) continue;
          for (const auto& i : a.institution_ids) at_inst = at_inst || i == inst;
        }
      }
      if (count >= threshold && at_inst) out.insert(id);
    }
  }
  return {out.begin(), out.end()};
}

// A publication is highly cited when fewer than floor(2% of its cohort)
// cohort members outrank it.
inline std::set<std::string> top2(const std::vector<PublicationRecord>& pubs, const Filter& f) {
  std::set<std::string> out;
  for (const auto& p : pubs) {
    if (!f.admits(p)) continue;
    std::size_t cohort = 0;
    std::size_t ahead = 0;
    for (const auto& q : pubs) {
      if (!f.admits(q) || q.year != p.year) continue;
      ++cohort;
      if (q.citation_count > p.citation_count ||
          (q.citation_count == p.citation_count && q.pub_id < p.pub_id)) {
        ++ahead;
      }
    }
    if (ahead < cohort * 2 / 100) out.insert(p.pub_id);
  }
  return out;
}

struct Entry {
  std::string institution;
  std::size_t count = 0;
  double share = 0.0;
};

inline void order(std::vector<Entry>& v) {
  std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
    return a.share != b.share ? a.share > b.share : a.institution < b.institution;
  });
}

inline std::vector<std::string> institutions(const std::vector<PublicationRecord>& pubs) {
  std::set<std::string> s;
  for (const auto& p : pubs) {
    for (const auto& a : p.authors) s.insert(a.institution_ids.begin(), a.institution_ids.end());
  }
  return {s.begin(), s.end()};
}

inline std::vector<Entry> major_collaborators(const std::vector<PublicationRecord>& pubs,
                                              const std::string& inst, const Window& window,
                                              double threshold, const Filter& f) {
  std::vector<Entry> out;
  std::size_t total = 0;
  for (const auto& p : pubs) {
    if (window.contains(p.year) && f.admits(p) && lists(p, inst)) ++total;
  }
  if (total == 0) return out;
  for (const auto& other : institutions(pubs)) {
    if (other == inst) continue;
    std::size_t shared = 0;
    for (const auto& p : pubs) {
      if (window.contains(p.year) && f.admits(p) && lists(p, inst) && lists(p, other)) ++shared;
    }
    const double share = static_cast<double>(shared) / static_cast<double>(total);
    if (shared > 0 && share >= threshold) out.push_back({other, shared, share});
  }
  order(out);
  return out;
}

inline std::vector<Entry> citation_contributors(const std::vector<PublicationRecord>& pubs,
                                                const CitationEdgeTable& edges,
                                                const std::string& inst, const Window& window,
                                                bool top2_basis, double threshold,
                                                const Filter& f) {
  const auto flagged = top2(pubs, f);
  std::set<std::pair<std::string, std::string>> unique;
  for (const auto& e : edges) {
    if (e.citing_pub_id != e.cited_pub_id) unique.insert({e.citing_pub_id, e.cited_pub_id});
  }
  auto find = [&](const std::string& id) -> const PublicationRecord* {
    for (const auto& p : pubs) {
      if (p.pub_id == id) return &p;
    }
    return nullptr;
  };
  std::size_t total = 0;
  std::map<std::string, std::size_t> counts;
  for (const auto& [citing_id, cited_id] : unique) {
    const auto* cited = find(cited_id);
    const auto* citing = find(citing_id);
    if (!window.contains(cited->year) || !f.admits(*cited) ||
        !lists(*cited, inst)) {
      continue;
    }
    if (top2_basis && !flagged.count(cited_id)) continue;
    if (!window.contains(citing->year)) continue;
    ++total;
    for (const auto& other : institutions({*citing})) ++counts[other];
  }
  std::vector<Entry> out;
  if (total == 0) return out;
  for (const auto& [other, count] : counts) {
    const double share = static_cast<double>(count) / static_cast<double>(total);
    if (share >= threshold) out.push_back({other, count, share});
  }
  order(out);
  return out;
}

}  // namespace oracle
