#include "integrity/networks.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"

namespace integrity::networks {

std::string_view to_string(Kind k) { return k == Kind::Citation ? "citation" : "coauthorship"; }

Kind parse_kind(std::string_view s) {
  const auto t = text::to_lower(text::trim(s));
  if (t == "citation") return Kind::Citation;
  if (t == "coauthorship") return Kind::Coauthorship;
  throw ValidationError("kind must be citation or coauthorship, got '" + t + "'");
}

std::string_view to_string(PartnerStatus s) {
  return s == PartnerStatus::New ? "new" : "intensified";
}

namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("threshold must be in (0, 1], got " + text::format_exact(threshold));
  }
}

void sort_contributors(std::vector<Contributor>& out) {
  std::sort(out.begin(), out.end(), [](const Contributor& a, const Contributor& b) {
    if (a.share != b.share) return a.share > b.share;
    return a.institution < b.institution;
  });
}

}  // namespace

std::vector<Contributor> citation_contributors(const CitationGraph& graph,
                                               std::string_view institution,
                                               const Window& window, Basis basis,
                                               double threshold) {
  check_threshold(threshold);
  const auto tally = indicators::tally_citations(graph, institution, window, basis);
  std::vector<Contributor> out;
  if (tally.total == 0) {
    warn("institution '" + std::string(institution) + "' received no citations in " +
         window.to_string() + "; contributor shares are undefined");
    return out;
  }
  for (const auto& [inst, count] : tally.by_institution) {
    const double share = static_cast<double>(count) / static_cast<double>(tally.total);
    if (share >= threshold) out.push_back({inst, count, share});
  }
  sort_contributors(out);
  return out;
}

Measure collaboration_share(const CorpusSnapshot& snapshot, std::string_view a,
                            std::string_view b, const Window& window, const Scope& scope) {
  const auto view = institution_view(snapshot, a, window, scope);
  std::size_t shared = 0;
  for (const auto* p : view) {
    if (p->lists(b)) ++shared;
  }
  return indicators::fraction(shared, view.size());
}

namespace {

// Co-authoring institution -> number of A's window publications it appears on.
std::map<std::string, std::size_t, std::less<>> partner_counts(const CorpusSnapshot& snapshot,
                                                               std::string_view institution,
                                                               const Window& window,
                                                               const Scope& scope,
                                                               std::size_t& output) {
  std::map<std::string, std::size_t, std::less<>> counts;
  const auto view = institution_view(snapshot, institution, window, scope);
  output = view.size();
  for (const auto* p : view) {
    for (const auto& other : snapshot.institutions_of(snapshot.index_of(*p))) {
      if (other != institution) ++counts[other];
    }
  }
  return counts;
}

}  // namespace

std::vector<Contributor> major_collaborators(const CorpusSnapshot& snapshot,
                                             std::string_view institution,
                                             const Window& window, double threshold,
                                             const Scope& scope) {
  check_threshold(threshold);
  std::size_t output = 0;
  const auto counts = partner_counts(snapshot, institution, window, scope, output);
  std::vector<Contributor> out;
  if (output == 0) return out;
  for (const auto& [inst, count] : counts) {
    const double share = static_cast<double>(count) / static_cast<double>(output);
    if (share >= threshold) out.push_back({inst, count, share});
  }
  sort_contributors(out);
  return out;
}

std::vector<Partner> new_or_intensified(const CorpusSnapshot& snapshot,
                                        std::string_view institution,
                                        const Window& base_window, const Window& current_window,
                                        double factor, double threshold, const Scope& scope) {
  if (base_window.overlaps(current_window)) {
    throw ValidationError("base window " + base_window.to_string() +
                          " overlaps current window " + current_window.to_string());
  }
  if (!(factor > 0.0)) throw ValidationError("intensify factor must be > 0");
  std::size_t base_output = 0;
  const auto base_counts = partner_counts(snapshot, institution, base_window, scope, base_output);
  std::vector<Partner> out;
  for (const auto& c : major_collaborators(snapshot, institution, current_window, threshold,
                                           scope)) {
    double base_share = 0.0;
    if (base_output > 0) {
      auto it = base_counts.find(c.institution);
      if (it != base_counts.end()) {
        base_share = static_cast<double>(it->second) / static_cast<double>(base_output);
      }
    }
    if (base_share == 0.0) {
      out.push_back({c.institution, PartnerStatus::New, 0.0, c.share});
    } else if (c.share / base_share >= factor) {
      out.push_back({c.institution, PartnerStatus::Intensified, base_share, c.share});
    }
  }
  return out;
}

InstitutionGraph::InstitutionGraph(std::vector<std::string> nodes,
                                   std::vector<ContributionEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.source == e.target) throw ValidationError("graph edge loops on '" + e.source + "'");
    nodes_.push_back(e.source);
    nodes_.push_back(e.target);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].source == edges_[i - 1].source && edges_[i].target == edges_[i - 1].target) {
      throw ValidationError("duplicate graph edge " + edges_[i].source + " -> " +
                            edges_[i].target);
    }
  }
  std::set<std::pair<std::string_view, std::string_view>> directed;
  for (const auto& e : edges_) directed.emplace(e.source, e.target);
  std::map<std::string_view, std::set<std::string_view>> neighbours;
  for (auto& e : edges_) {
    e.reciprocal = directed.count({e.target, e.source}) > 0;
    neighbours[e.source].insert(e.target);
    neighbours[e.target].insert(e.source);
  }
  for (const auto& n : nodes_) {
    auto it = neighbours.find(n);
    degree_.emplace(n, it == neighbours.end() ? 0 : it->second.size());
  }
}

std::size_t InstitutionGraph::degree(std::string_view node) const {
  auto it = degree_.find(node);
  return it == degree_.end() ? 0 : it->second;
}

const ContributionEdge* InstitutionGraph::find_edge(std::string_view source,
                                                    std::string_view target) const {
  for (const auto& e : edges_) {
    if (e.source == source && e.target == target) return &e;
  }
  return nullptr;
}

namespace {

std::vector<std::string> unique_sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

InstitutionGraph build_coauthorship_graph(const CorpusSnapshot& snapshot,
                                          const std::vector<std::string>& institutions,
                                          const Window& window, double threshold,
                                          const Scope& scope) {
  check_threshold(threshold);
  const auto nodes = unique_sorted(institutions);
  std::vector<ContributionEdge> edges;
  for (const auto& target : nodes) {
    for (const auto& c : major_collaborators(snapshot, target, window, threshold, scope)) {
      if (!std::binary_search(nodes.begin(), nodes.end(), c.institution)) continue;
      edges.push_back({c.institution, target, c.share, Kind::Coauthorship, false});
    }
  }
  return InstitutionGraph(nodes, std::move(edges));
}

InstitutionGraph build_citation_graph(const CitationGraph& graph,
                                      const std::vector<std::string>& institutions,
                                      const Window& window, double threshold, Basis basis) {
  check_threshold(threshold);
  const auto nodes = unique_sorted(institutions);
  std::vector<ContributionEdge> edges;
  for (const auto& target : nodes) {
    for (const auto& c : citation_contributors(graph, target, window, basis, threshold)) {
      if (c.institution == target) continue;
      if (!std::binary_search(nodes.begin(), nodes.end(), c.institution)) continue;
      edges.push_back({c.institution, target, c.share, Kind::Citation, false});
    }
  }
  return InstitutionGraph(nodes, std::move(edges));
}

InstitutionGraph build_contribution_graph(const CorpusSnapshot& snapshot,
                                          const CitationGraph* citations,
                                          const std::vector<std::string>& institutions,
                                          const Window& window, Kind kind, double threshold,
                                          Basis basis) {
  if (kind == Kind::Coauthorship) {
    return build_coauthorship_graph(snapshot, institutions, window, threshold);
  }
  if (!citations) {
    throw ValidationError("citation networks need a citations.csv in the corpus");
  }
  return build_citation_graph(*citations, institutions, window, threshold, basis);
}

ExportFormat parse_export_format(std::string_view s) {
  const auto t = text::to_lower(text::trim(s));
  if (t == "edge_list" || t == "csv") return ExportFormat::EdgeList;
  if (t == "dot") return ExportFormat::Dot;
  throw ValidationError("graph format must be edge_list or dot, got '" + t + "'");
}

namespace {

const std::vector<std::string> kEdgeListColumns = {"source", "target", "share", "kind",
                                                   "reciprocal"};

std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_graph(const InstitutionGraph& graph, ExportFormat format) {
  std::string out;
  if (format == ExportFormat::EdgeList) {
    out = csv::format_row(kEdgeListColumns);
    for (const auto& e : graph.edges()) {
      out += csv::format_row({e.source, e.target, text::format_exact(e.share),
                              std::string(to_string(e.kind)), e.reciprocal ? "true" : "false"});
    }
    return out;
  }
  out = "digraph contributions {\n";
  for (const auto& n : graph.nodes()) {
    out += "  " + dot_id(n) + " [degree=" + std::to_string(graph.degree(n)) + "];\n";
  }
  for (const auto& e : graph.edges()) {
    const std::string attrs = "kind=" + std::string(to_string(e.kind)) +
                              ", share=" + text::format_exact(e.share);
    if (!e.reciprocal) {
      out += "  " + dot_id(e.source) + " -> " + dot_id(e.target) + " [" + attrs + "];\n";
      continue;
    }
    if (e.source > e.target) continue;
    const auto* back = graph.find_edge(e.target, e.source);
    out += "  " + dot_id(e.source) + " -> " + dot_id(e.target) + " [dir=both, " + attrs +
           ", reverse_share=" + text::format_exact(back->share) + "];\n";
  }
  out += "}\n";
  return out;
}

InstitutionGraph parse_edge_list(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kEdgeListColumns);
  std::vector<ContributionEdge> edges;
  csv::Row row;
  while (reader.next(row)) {
    ContributionEdge e;
    e.source = text::trim(row.fields[0]);
    e.target = text::trim(row.fields[1]);
    if (e.source.empty()) reader.fail(row, 0, "empty source");
    if (e.target.empty()) reader.fail(row, 1, "empty target");
    try {
      e.share = text::parse_double(row.fields[2]);
    } catch (const std::invalid_argument&) {
      reader.fail(row, 2, "expected a number, got '" + row.fields[2] + "'");
    }
    if (!(e.share >= 0.0 && e.share <= 1.0)) reader.fail(row, 2, "share outside [0, 1]");
    try {
      e.kind = parse_kind(row.fields[3]);
    } catch (const ValidationError& err) {
      reader.fail(row, 3, err.what());
    }
    const auto r = text::to_lower(text::trim(row.fields[4]));
    if (r != "true" && r != "false") reader.fail(row, 4, "expected true or false");
    e.reciprocal = r == "true";
    edges.push_back(std::move(e));
  }
  InstitutionGraph graph({}, edges);
  for (const auto& e : edges) {
    if (graph.find_edge(e.source, e.target)->reciprocal != e.reciprocal) {
      throw FormatError(source, 0, 0,
                        "edge " + e.source + " -> " + e.target +
                            " has a reciprocal flag that disagrees with the edge set");
    }
  }
  return graph;
}

}  // namespace integrity::networks
