#include "integrity/indicators.hpp"

#include <algorithm>
#include <set>

#include "integrity/diagnostics.hpp"

namespace integrity::indicators {

Measure fraction(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

Measure per_thousand(std::size_t events, std::size_t articles) {
  if (articles == 0) return std::nullopt;
  return 1000.0 * static_cast<double>(events) / static_cast<double>(articles);
}

std::size_t output_count(const CorpusSnapshot& snapshot, std::string_view institution,
                         const Window& window, const Scope& scope) {
  if (!snapshot.has_institution(institution)) {
    warn("institution '" + std::string(institution) + "' does not appear in the corpus");
    return 0;
  }
  return institution_view(snapshot, institution, window, scope).size();
}

Measure growth(std::size_t base_count, std::size_t current_count) {
  if (base_count == 0) return std::nullopt;
  return 100.0 * (static_cast<double>(current_count) - static_cast<double>(base_count)) /
         static_cast<double>(base_count);
}

AuthorshipRates authorship_rates(const CorpusSnapshot& snapshot,
                                 std::string_view institution, const Window& window,
                                 const Scope& scope) {
  const auto view = institution_view(snapshot, institution, window, scope);
  std::size_t first = 0;
  std::size_t corresponding = 0;
  for (const auto* p : view) {
    if (p->first_author_at(institution)) ++first;
    if (p->corresponding_at(institution)) ++corresponding;
  }
  return {fraction(first, view.size()), fraction(corresponding, view.size())};
}

Measure authorship_decline(double rate_base, double rate_current) {
  if (rate_base == 0.0) return std::nullopt;
  return 100.0 * (rate_current - rate_base) / rate_base;
}

Measure authorship_decline(const Measure& rate_base, const Measure& rate_current) {
  if (!rate_base || !rate_current) return std::nullopt;
  return authorship_decline(*rate_base, *rate_current);
}

namespace {

// author -> qualifying publication indices for one year
std::map<std::string, std::vector<std::size_t>, std::less<>> author_publications(
    const CorpusSnapshot& snapshot, int year, const Scope& scope) {
  std::map<std::string, std::vector<std::size_t>, std::less<>> out;
  for (const auto* p : window_view(snapshot, Window(year, year), scope)) {
    std::set<std::string_view> seen;
    for (const auto& a : p->authors) {
      if (seen.insert(a.author_id).second) {
        out[a.author_id].push_back(snapshot.index_of(*p));
      }
    }
  }
  return out;
}

}  // namespace

AuthorCounts hyper_prolific_authors(const CorpusSnapshot& snapshot, int year,
                                    std::size_t threshold, std::size_t max_coauthors) {
  if (threshold < 1) throw ValidationError("HPA threshold must be >= 1");
  Scope scope;
  scope.max_coauthors = max_coauthors;
  AuthorCounts out;
  for (const auto& [author, pubs] : author_publications(snapshot, year, scope)) {
    if (pubs.size() >= threshold) out.emplace(author, pubs.size());
  }
  return out;
}

HpaIndex::HpaIndex(const CorpusSnapshot& snapshot, const Window& window,
                   std::size_t threshold, const Scope& scope) {
  if (threshold < 1) throw ValidationError("HPA threshold must be >= 1");
  std::map<std::string, std::set<std::string>, std::less<>> sets;
  for (int year = window.start_year; year <= window.end_year; ++year) {
    for (const auto& [author, pubs] : author_publications(snapshot, year, scope)) {
      if (pubs.size() < threshold) continue;
      for (auto i : pubs) {
        for (const auto& a : snapshot.publication(i).authors) {
          if (a.author_id != author) continue;
          for (const auto& inst : a.institution_ids) sets[inst].insert(author);
        }
      }
    }
  }
  for (auto& [inst, authors] : sets) {
    by_institution_.emplace(inst, std::vector<std::string>(authors.begin(), authors.end()));
  }
}

std::size_t HpaIndex::count(std::string_view institution) const {
  auto it = by_institution_.find(institution);
  return it == by_institution_.end() ? 0 : it->second.size();
}

std::vector<std::string> HpaIndex::authors(std::string_view institution) const {
  auto it = by_institution_.find(institution);
  return it == by_institution_.end() ? std::vector<std::string>{} : it->second;
}

std::size_t hpa_count(const CorpusSnapshot& snapshot, std::string_view institution,
                      const Window& window, std::size_t threshold, const Scope& scope) {
  return HpaIndex(snapshot, window, threshold, scope).count(institution);
}

Share delisted_share(const CorpusSnapshot& snapshot, std::string_view institution,
                     const Window& window, const Scope& scope) {
  const auto view = institution_view(snapshot, institution, window, scope);
  Share out;
  for (const auto* p : view) {
    if (snapshot.journal_of(*p).delisted_content(p->year)) ++out.count;
  }
  out.fraction = fraction(out.count, view.size());
  return out;
}

RetractionTally retraction_rate(const CorpusSnapshot& snapshot, std::string_view institution,
                                const Window& window, const Scope& scope) {
  const auto view = institution_view(snapshot, institution, window, scope);
  RetractionTally out;
  out.articles = view.size();
  for (const auto* p : view) {
    if (snapshot.is_retracted(*p)) ++out.retractions;
  }
  out.rate = per_thousand(out.retractions, out.articles);
  return out;
}

Window default_retraction_window(int analysis_year) {
  return Window(analysis_year - 3, analysis_year - 2);
}

Top2Flags::Top2Flags(const CorpusSnapshot& snapshot, const Scope& scope)
    : flags_(snapshot.size(), false) {
  std::map<int, std::vector<std::size_t>> cohorts;
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    const auto& p = snapshot.publication(i);
    if (scope.admits(p)) cohorts[p.year].push_back(i);
  }
  for (auto& [year, members] : cohorts) {
    const std::size_t quota = top2_cohort_quota(members.size());
    if (quota == 0) continue;
    std::partial_sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota),
                      members.end(), [&](std::size_t a, std::size_t b) {
                        const auto ca = snapshot.publication(a).citation_count;
                        const auto cb = snapshot.publication(b).citation_count;
                        if (ca != cb) return ca > cb;
                        return a < b;  // index order is pub_id order
                      });
    for (std::size_t k = 0; k < quota; ++k) flags_[members[k]] = true;
    count_ += quota;
  }
}

std::vector<std::string> Top2Flags::ids(const CorpusSnapshot& snapshot) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (flags_[i]) out.push_back(snapshot.publication(i).pub_id);
  }
  return out;
}

Top2Flags top2_flags(const CorpusSnapshot& snapshot, const Scope& scope) {
  return Top2Flags(snapshot, scope);
}

Share top2_share(const CorpusSnapshot& snapshot, std::string_view institution,
                 const Window& window, const Scope& scope) {
  return top2_share(snapshot, top2_flags(snapshot, scope), institution, window, scope);
}

Share top2_share(const CorpusSnapshot& snapshot, const Top2Flags& flags,
                 std::string_view institution, const Window& window, const Scope& scope) {
  const auto view = institution_view(snapshot, institution, window, scope);
  Share out;
  for (const auto* p : view) {
    if (flags.contains(snapshot.index_of(*p))) ++out.count;
  }
  out.fraction = fraction(out.count, view.size());
  return out;
}

std::string_view to_string(Basis b) { return b == Basis::Top2 ? "top2" : "all"; }

Basis parse_basis(std::string_view s) {
  const auto t = text::to_lower(text::trim(s));
  if (t == "top2") return Basis::Top2;
  if (t == "all") return Basis::All;
  throw ValidationError("basis must be top2 or all, got '" + t + "'");
}

CitationGraph::CitationGraph(const CorpusSnapshot& snapshot, const CitationEdgeTable& edges,
                             const Scope& scope)
    : snapshot_(&snapshot), scope_(scope), top2_(snapshot, scope), citing_(snapshot.size()) {
  std::set<std::string> unknown;
  for (const auto& e : normalize_edges(edges)) {
    const auto citing = snapshot.find(e.citing_pub_id);
    const auto cited = snapshot.find(e.cited_pub_id);
    if (!citing) unknown.insert(e.citing_pub_id);
    if (!cited) unknown.insert(e.cited_pub_id);
    if (!citing || !cited) continue;
    citing_[*cited].push_back(*citing);
    ++edge_count_;
  }
  if (!unknown.empty()) {
    std::vector<std::string> ids(unknown.begin(), unknown.end());
    if (ids.size() > 10) {
      ids.resize(10);
      ids.push_back("...");
    }
    throw ValidationError("citation table references unknown pub_id(s): " +
                          text::join(ids, ", "));
  }
  for (auto& c : citing_) std::sort(c.begin(), c.end());
}

PublicationView basis_set(const CitationGraph& graph, std::string_view institution,
                          const Window& window, Basis basis) {
  auto view = institution_view(graph.snapshot(), institution, window, graph.scope());
  if (basis == Basis::Top2) {
    std::erase_if(view, [&](const PublicationRecord* p) {
      return !graph.top2().contains(graph.snapshot().index_of(*p));
    });
  }
  return view;
}

CitationTally tally_citations(const CitationGraph& graph, std::string_view institution,
                              const Window& window, Basis basis) {
  CitationTally out;
  const auto& snapshot = graph.snapshot();
  for (const auto* p : basis_set(graph, institution, window, basis)) {
    for (auto citing : graph.citing(snapshot.index_of(*p))) {
      if (!window.contains(snapshot.publication(citing).year)) continue;
      ++out.total;
      for (const auto& inst : snapshot.institutions_of(citing)) ++out.by_institution[inst];
    }
  }
  return out;
}

Measure self_citation_rate(const CitationGraph& graph, std::string_view institution,
                           const Window& window, Basis basis) {
  const auto tally = tally_citations(graph, institution, window, basis);
  auto it = tally.by_institution.find(institution);
  return fraction(it == tally.by_institution.end() ? 0 : it->second, tally.total);
}

std::vector<GroupRate> grouped_rates(const CorpusSnapshot& snapshot, const Window& window,
                                     const Scope& scope) {
  std::map<std::string, GroupRate> groups;
  for (const auto* p : window_view(snapshot, window, scope)) {
    std::set<std::string_view> seen;
    for (const auto& subject : p->subjects) {
      if (!seen.insert(subject).second) continue;
      auto& g = groups[subject];
      g.group = subject;
      ++g.articles;
      if (snapshot.is_retracted(*p)) ++g.retractions;
    }
  }
  std::vector<GroupRate> out;
  for (auto& [_, g] : groups) {
    g.rate = per_thousand(g.retractions, g.articles);
    out.push_back(std::move(g));
  }
  return out;
}

IndicatorEngine::IndicatorEngine(const CorpusSnapshot& snapshot, const Window& base,
                                 const Window& current, IndicatorOptions options,
                                 const CitationGraph* citations)
    : snapshot_(&snapshot),
      base_(base),
      current_(current),
      options_(options),
      retraction_window_(options.retraction_window.value_or(
          default_retraction_window(current.end_year + 1))),
      citations_(citations),
      top2_(snapshot, options.scope),
      hpa_base_(snapshot, base, options.hpa_threshold, options.scope),
      hpa_current_(snapshot, current, options.hpa_threshold, options.scope) {
  if (base.end_year >= current.start_year) {
    throw ValidationError("base window " + base.to_string() + " must end before current window " +
                          current.to_string());
  }
}

InstitutionIndicators IndicatorEngine::compute(std::string_view institution) const {
  const auto& s = *snapshot_;
  const auto& scope = options_.scope;
  InstitutionIndicators r;
  r.institution_id = std::string(institution);
  r.base_window = base_;
  r.current_window = current_;
  r.article_count_base = institution_view(s, institution, base_, scope).size();
  r.article_count_current = institution_view(s, institution, current_, scope).size();
  r.growth_pct = growth(r.article_count_base, r.article_count_current);
  const auto rates_base = authorship_rates(s, institution, base_, scope);
  const auto rates_current = authorship_rates(s, institution, current_, scope);
  r.first_auth_rate_base = rates_base.first;
  r.first_auth_rate_current = rates_current.first;
  r.corr_auth_rate_base = rates_base.corresponding;
  r.corr_auth_rate_current = rates_current.corresponding;
  r.first_auth_delta_pct = authorship_decline(rates_base.first, rates_current.first);
  r.corr_auth_delta_pct =
      authorship_decline(rates_base.corresponding, rates_current.corresponding);
  r.hpa_count_base = hpa_base_.count(institution);
  r.hpa_count_current = hpa_current_.count(institution);
  r.delisted_share = delisted_share(s, institution, current_, scope).fraction;
  r.retraction_rate = retraction_rate(s, institution, retraction_window_, scope).rate;
  r.top2_share = top2_share(s, top2_, institution, current_, scope).fraction;
  if (citations_) {
    r.self_citation_rate = self_citation_rate(*citations_, institution, current_, Basis::Top2);
  }
  return r;
}

std::vector<InstitutionIndicators> IndicatorEngine::compute_all() const {
  std::vector<InstitutionIndicators> out;
  for (const auto& inst : snapshot_->institutions()) out.push_back(compute(inst));
  return out;
}

std::string display_percent(const Measure& pct) {
  if (!pct) return std::string(kUndefined);
  return text::format_fixed(*pct, 0) + "%";
}

std::string display_share(const Measure& f) {
  if (!f) return std::string(kUndefined);
  return text::format_fixed(*f * 100.0, 1) + "%";
}

std::string display_rate(const Measure& r) {
  if (!r) return std::string(kUndefined);
  return text::format_fixed(*r, 1);
}

}  // namespace integrity::indicators
