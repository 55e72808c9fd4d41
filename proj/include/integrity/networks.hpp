#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "integrity/indicators.hpp"

namespace integrity::networks {

using indicators::Basis;
using indicators::CitationGraph;

inline constexpr double kCitationThreshold = 0.01;
inline constexpr double kCollaborationThreshold = 0.02;
inline constexpr double kIntensifyFactor = 5.0;

enum class Kind { Citation, Coauthorship };

std::string_view to_string(Kind k);
Kind parse_kind(std::string_view s);

struct Contributor {
  std::string institution;
  std::size_t count = 0;
  double share = 0.0;

  friend bool operator==(const Contributor&, const Contributor&) = default;
};

// Institutions supplying at least `threshold` of the citations received by
// the basis articles, descending by share then id. The institution itself
// may appear. Empty, with a warning, when no citations were received.
std::vector<Contributor> citation_contributors(const CitationGraph& graph,
                                               std::string_view institution,
                                               const Window& window,
                                               Basis basis = Basis::Top2,
                                               double threshold = kCitationThreshold);

// Share of A's window publications that also list B. Undefined when A has no
// publications in the window.
Measure collaboration_share(const CorpusSnapshot& snapshot, std::string_view a,
                            std::string_view b, const Window& window, const Scope& scope = {});

// External institutions with collaboration share >= threshold, descending by
// share then id.
std::vector<Contributor> major_collaborators(const CorpusSnapshot& snapshot,
                                             std::string_view institution,
                                             const Window& window,
                                             double threshold = kCollaborationThreshold,
                                             const Scope& scope = {});

enum class PartnerStatus { New, Intensified };

std::string_view to_string(PartnerStatus s);

struct Partner {
  std::string institution;
  PartnerStatus status = PartnerStatus::New;
  double base_share = 0.0;
  double current_share = 0.0;

  friend bool operator==(const Partner&, const Partner&) = default;
};

// Current major collaborators that were absent in the base window or whose
// share grew by at least `factor`. Ordered like major_collaborators.
std::vector<Partner> new_or_intensified(const CorpusSnapshot& snapshot,
                                        std::string_view institution,
                                        const Window& base_window, const Window& current_window,
                                        double factor = kIntensifyFactor,
                                        double threshold = kCollaborationThreshold,
                                        const Scope& scope = {});

// Directed relation source -> target: the source supplies `share` of the
// target's citations (Kind::Citation) or co-authors `share` of the target's
// publications (Kind::Coauthorship).
struct ContributionEdge {
  std::string source;
  std::string target;
  double share = 0.0;
  Kind kind = Kind::Coauthorship;
  bool reciprocal = false;

  friend bool operator==(const ContributionEdge&, const ContributionEdge&) = default;
};

class InstitutionGraph {
 public:
  InstitutionGraph() = default;
  // Nodes and edges are sorted; edge endpoints missing from `nodes` are added.
  // Reciprocal flags are recomputed from the edge set.
  InstitutionGraph(std::vector<std::string> nodes, std::vector<ContributionEdge> edges);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<ContributionEdge>& edges() const { return edges_; }
  // Distinct neighbours in either direction.
  std::size_t degree(std::string_view node) const;
  const ContributionEdge* find_edge(std::string_view source, std::string_view target) const;

  friend bool operator==(const InstitutionGraph&, const InstitutionGraph&) = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<ContributionEdge> edges_;
  std::map<std::string, std::size_t, std::less<>> degree_;
};

InstitutionGraph build_coauthorship_graph(const CorpusSnapshot& snapshot,
                                          const std::vector<std::string>& institutions,
                                          const Window& window,
                                          double threshold = kCollaborationThreshold,
                                          const Scope& scope = {});

InstitutionGraph build_citation_graph(const CitationGraph& graph,
                                      const std::vector<std::string>& institutions,
                                      const Window& window,
                                      double threshold = kCitationThreshold,
                                      Basis basis = Basis::Top2);

// Dispatches on `kind`; Kind::Citation requires a citation graph.
InstitutionGraph build_contribution_graph(const CorpusSnapshot& snapshot,
                                          const CitationGraph* citations,
                                          const std::vector<std::string>& institutions,
                                          const Window& window, Kind kind, double threshold,
                                          Basis basis = Basis::Top2);

enum class ExportFormat { EdgeList, Dot };

ExportFormat parse_export_format(std::string_view s);

std::string export_graph(const InstitutionGraph& graph, ExportFormat format);
InstitutionGraph parse_edge_list(std::istream& in, const std::string& source);

}  // namespace integrity::networks
