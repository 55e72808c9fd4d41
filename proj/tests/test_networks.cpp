#include <sstream>

#include "doctest.h"
#include "integrity/diagnostics.hpp"
#include "integrity/networks.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace integrity;
using namespace integrity::networks;
using testkit::author;
using testkit::pub;

namespace {

void check_same(const std::vector<Contributor>& got, const std::vector<oracle::Entry>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].institution == want[i].institution);
    CHECK(got[i].count == want[i].count);
    CHECK(got[i].share == want[i].share);
  }
}

// I has 10 publications: 4 with J, 1 with K, 0 with L.
testkit::CorpusData collaboration_corpus() {
  testkit::CorpusData c;
  for (int i = 0; i < 10; ++i) {
    std::vector<AuthorshipEntry> authors{author("a", {"I"})};
    if (i < 4) authors.push_back(author("b", {"J"}));
    if (i == 9) authors.push_back(author("c", {"K"}));
    c.add(pub(testkit::numbered("P", i), 2023, authors));
  }
  c.add(pub("Q1", 2023, {author("d", {"J"}), author("e", {"L"})}));
  c.add(pub("Q2", 2018, {author("a", {"I"}), author("c", {"K"})}));
  c.add(pub("Q3", 2018, {author("a", {"I"})}));
  c.add(pub("Q4", 2018, {author("a", {"I"})}));
  c.add(pub("Q5", 2018, {author("a", {"I"})}));
  return c;
}

}  // namespace

TEST_CASE("kind and format parsing") {
  CHECK(parse_kind("Citation") == Kind::Citation);
  CHECK(parse_kind("coauthorship") == Kind::Coauthorship);
  CHECK_THROWS_AS(parse_kind("friends"), ValidationError);
  CHECK(parse_export_format("dot") == ExportFormat::Dot);
  CHECK(parse_export_format("edge_list") == ExportFormat::EdgeList);
  CHECK_THROWS_AS(parse_export_format("png"), ValidationError);
}

TEST_CASE("collaboration shares and major collaborators") {
  auto s = collaboration_corpus().snapshot();
  const Window w(2023, 2024);
  CHECK(*collaboration_share(s, "I", "J", w) == 0.4);
  CHECK(*collaboration_share(s, "I", "L", w) == 0.0);
  CHECK_FALSE(collaboration_share(s, "Z", "J", w).has_value());
  auto majors = major_collaborators(s, "I", w, 0.1);
  REQUIRE(majors.size() == 2);
  CHECK(majors[0].institution == "J");
  CHECK(majors[1].institution == "K");
  CHECK(major_collaborators(s, "I", w, 0.11).size() == 1);
  CHECK(major_collaborators(s, "Z", w).empty());
  CHECK_THROWS_AS(major_collaborators(s, "I", w, 0.0), ValidationError);
  CHECK_THROWS_AS(major_collaborators(s, "I", w, 1.5), ValidationError);
}

TEST_CASE("new and intensified partners") {
  auto s = collaboration_corpus().snapshot();
  auto p = new_or_intensified(s, "I", Window(2018, 2019), Window(2023, 2024), 5.0, 0.02);
  REQUIRE(p.size() == 1);
  CHECK(p[0].institution == "J");
  CHECK(p[0].status == PartnerStatus::New);
  // K went from 1/4 to 1/10: shrinking, not intensified.
  CHECK_THROWS_AS(new_or_intensified(s, "I", Window(2018, 2023), Window(2023, 2024)),
                  ValidationError);
}

TEST_CASE("intensification needs the full factor") {
  testkit::CorpusData c;
  // Base: 1 of 20 with J (5%). Current: 5 of 20 (25%), exactly 5x.
  for (int i = 0; i < 20; ++i) {
    std::vector<AuthorshipEntry> base{author("a", {"I"})};
    std::vector<AuthorshipEntry> cur{author("a", {"I"})};
    if (i < 1) base.push_back(author("b", {"J"}));
    if (i < 5) cur.push_back(author("b", {"J"}));
    if (i < 1) base.push_back(author("k", {"K"}));
    if (i < 4) cur.push_back(author("k", {"K"}));
    c.add(pub(testkit::numbered("B", i), 2018, base));
    c.add(pub(testkit::numbered("C", i), 2023, cur));
  }
  auto s = c.snapshot();
  auto p = new_or_intensified(s, "I", Window(2018, 2019), Window(2023, 2024));
  REQUIRE(p.size() == 1);
  CHECK(p[0].institution == "J");
  CHECK(p[0].status == PartnerStatus::Intensified);
  CHECK(p[0].base_share == 0.05);
  CHECK(p[0].current_share == 0.25);
}

TEST_CASE("citation contributors warn when nothing was cited") {
  auto c = collaboration_corpus();
  auto s = c.snapshot();
  CitationGraph g(s, {});
  WarningCapture capture;
  CHECK(citation_contributors(g, "I", Window(2023, 2024)).empty());
  CHECK(capture.contains("no citations"));
}

TEST_CASE("oracle equivalence on random corpora") {
  std::size_t corpora = 0;
  std::size_t top2_lists = 0;
  testkit::RandomSpec full;
  full.exact_size = true;
  full.years = 1;
  oracle::Filter all_types;
  all_types.other = true;
  const std::vector<std::pair<Scope, oracle::Filter>> scopes = {
      {Scope{}, oracle::Filter{}}, {Scope{DocTypeSet::all(), 100}, all_types}};
  for (std::uint64_t seed = 1000; seed < 1150; ++seed) {
    auto c = testkit::random_corpus(seed, seed % 3 == 0 ? full : testkit::RandomSpec{});
    REQUIRE(c.pubs.size() <= 50);
    auto s = c.snapshot();
    REQUIRE(s.institutions().size() <= 6);
    WarningCapture quiet;
    ++corpora;
    for (const auto& [scope, filter] : scopes) {
      CitationGraph g(s, c.edges, scope);
      for (const auto& w : {Window(2018, 2019), Window(2018, 2021), Window(2020, 2020)}) {
        for (const auto& inst : s.institutions()) {
          CAPTURE(seed);
          CAPTURE(inst);
          for (double t : {0.02, 0.2, 0.5}) {
            check_same(major_collaborators(s, inst, w, t, scope),
                       oracle::major_collaborators(c.pubs, inst, w, t, filter));
          }
          for (double t : {0.01, 0.25}) {
            check_same(citation_contributors(g, inst, w, Basis::All, t),
                       oracle::citation_contributors(c.pubs, c.edges, inst, w, false, t, filter));
            const auto top2 = citation_contributors(g, inst, w, Basis::Top2, t);
            check_same(top2,
                       oracle::citation_contributors(c.pubs, c.edges, inst, w, true, t, filter));
            if (!top2.empty()) ++top2_lists;
          }
        }
      }
    }
  }
  CHECK(corpora >= 100);
  CHECK(top2_lists > 0);
}

TEST_CASE("coauthorship graph edges point from contributor to recipient") {
  auto s = collaboration_corpus().snapshot();
  auto g = build_coauthorship_graph(s, {"I", "J", "K", "L"}, Window(2023, 2024), 0.1);
  const auto* ji = g.find_edge("J", "I");
  REQUIRE(ji != nullptr);
  CHECK(ji->share == 0.4);
  CHECK(ji->kind == Kind::Coauthorship);
  // J's own output is 5 publications, 4 with I.
  const auto* ij = g.find_edge("I", "J");
  REQUIRE(ij != nullptr);
  CHECK(ij->share == 0.8);
  CHECK(ji->reciprocal);
  CHECK(ij->reciprocal);
  CHECK(g.degree("I") == 2);
  CHECK(g.degree("L") == 1);
}

TEST_CASE("citation graph excludes self contributions") {
  testkit::CorpusData c;
  c.add(pub("A1", 2023, {author("a", {"A"})}));
  c.add(pub("B1", 2023, {author("b", {"B"})}));
  c.add(pub("A2", 2023, {author("a", {"A"})}));
  c.edges = {{"B1", "A1"}, {"A2", "A1"}, {"A1", "B1"}};
  auto s = c.snapshot();
  CitationGraph cg(s, c.edges);
  auto g = build_citation_graph(cg, {"A", "B"}, Window(2023, 2023), 0.01, Basis::All);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.find_edge("B", "A")->share == 0.5);
  CHECK(g.find_edge("A", "B")->share == 1.0);
  CHECK(g.find_edge("A", "A") == nullptr);
  CHECK_THROWS_AS(build_contribution_graph(s, nullptr, {"A"}, Window(2023, 2023),
                                           Kind::Citation, 0.01),
                  ValidationError);
}

TEST_CASE("graph construction recomputes reciprocity and rejects bad edges") {
  InstitutionGraph g({"Z"}, {{"B", "A", 0.1, Kind::Citation, false},
                             {"A", "B", 0.2, Kind::Citation, false},
                             {"C", "A", 0.3, Kind::Citation, true}});
  CHECK(g.nodes() == std::vector<std::string>{"A", "B", "C", "Z"});
  CHECK(g.find_edge("A", "B")->reciprocal);
  CHECK_FALSE(g.find_edge("C", "A")->reciprocal);
  CHECK(g.degree("A") == 2);
  CHECK(g.degree("Z") == 0);
  CHECK_THROWS_AS(InstitutionGraph({}, {{"A", "A", 0.1, Kind::Citation, false}}),
                  ValidationError);
  CHECK_THROWS_AS(InstitutionGraph({}, {{"A", "B", 0.1, Kind::Citation, false},
                                        {"A", "B", 0.2, Kind::Citation, false}}),
                  ValidationError);
}

TEST_CASE("edge list export round-trips") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto c = testkit::random_corpus(seed);
    auto s = c.snapshot();
    auto g = build_coauthorship_graph(s, s.institutions(), Window(2018, 2021), 0.02);
    std::istringstream in(export_graph(g, ExportFormat::EdgeList));
    auto back = parse_edge_list(in, "edges.csv");
    CHECK(back.edges() == g.edges());
  }
}

TEST_CASE("edge list parsing checks reciprocal flags and fields") {
  std::istringstream bad_flag(
      "source,target,share,kind,reciprocal\nA,B,0.1,citation,true\n");
  CHECK_THROWS_AS(parse_edge_list(bad_flag, "e"), FormatError);
  std::istringstream bad_share("source,target,share,kind,reciprocal\nA,B,1.5,citation,false\n");
  CHECK_THROWS_AS(parse_edge_list(bad_share, "e"), FormatError);
  std::istringstream bad_kind("source,target,share,kind,reciprocal\nA,B,0.5,love,false\n");
  CHECK_THROWS_AS(parse_edge_list(bad_kind, "e"), FormatError);
}

TEST_CASE("dot export merges reciprocal pairs") {
  InstitutionGraph g({}, {{"B", "A", 0.25, Kind::Coauthorship, false},
                          {"A", "B", 0.5, Kind::Coauthorship, false},
                          {"C", "A", 0.125, Kind::Coauthorship, false}});
  const std::string expected =
      "digraph contributions {\n"
      "  \"A\" [degree=2];\n"
      "  \"B\" [degree=1];\n"
      "  \"C\" [degree=1];\n"
      "  \"A\" -> \"B\" [dir=both, kind=coauthorship, share=0.5, reverse_share=0.25];\n"
      "  \"C\" -> \"A\" [kind=coauthorship, share=0.125];\n"
      "}\n";
  CHECK(export_graph(g, ExportFormat::Dot) == expected);
  CHECK(export_graph(InstitutionGraph{}, ExportFormat::EdgeList) ==
        "source,target,share,kind,reciprocal\n");
}
