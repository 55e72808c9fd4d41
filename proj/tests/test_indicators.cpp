#include <sstream>

#include "doctest.h"
#include "integrity/diagnostics.hpp"
#include "integrity/indicators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace integrity;
using namespace integrity::indicators;
using testkit::author;
using testkit::pub;

namespace {

// `n` single-author publications for an institution in one year.
void fill(testkit::CorpusData& c, const std::string& inst, int year, std::size_t n,
          const std::string& tag, std::int64_t citations = 0, const std::string& journal = "J1") {
  for (std::size_t i = 0; i < n; ++i) {
    c.add(pub(testkit::numbered(inst + tag, i), year,
              {author(inst + "-" + tag + std::to_string(i), {inst})}, citations, journal));
  }
}

oracle::Filter default_filter() { return {}; }

}  // namespace

TEST_CASE("ratios are undefined on empty denominators") {
  CHECK_FALSE(fraction(1, 0).has_value());
  CHECK(*fraction(1, 4) == 0.25);
  CHECK_FALSE(per_thousand(3, 0).has_value());
  CHECK(*per_thousand(3, 1000) == 3.0);
  CHECK_FALSE(growth(0, 5).has_value());
  CHECK(*growth(4, 5) == 25.0);
}

TEST_CASE("growth display uses half-up integer rounding") {
  CHECK(display_percent(growth(3037, 10418)) == "243%");
  CHECK(display_percent(growth(818, 8709)) == "965%");
  CHECK(display_percent(growth(576, 5804)) == "908%");
  CHECK(display_percent(growth(14218, 13883)) == "-2%");
  CHECK(display_percent(std::nullopt) == "n/a");
  CHECK(display_share(fraction(2421, 3037)) == "79.7%");
  CHECK(display_rate(per_thousand(175, 6341)) == "27.6");
}

TEST_CASE("output counts respect scope and warn on unknown institutions") {
  testkit::CorpusData c;
  fill(c, "I", 2019, 3, "a");
  c.add(pub("Z1", 2019, {author("z", {"I"})}, 0, "J1", DocType::Other));
  auto s = c.snapshot();
  CHECK(output_count(s, "I", Window(2018, 2019)) == 3);
  CHECK(output_count(s, "I", Window(2018, 2019), Scope{DocTypeSet::all(), 100}) == 4);
  WarningCapture capture;
  CHECK(output_count(s, "Q", Window(2018, 2019)) == 0);
  CHECK(capture.contains("Q"));
}

TEST_CASE("authorship rates and relative decline") {
  testkit::CorpusData c;
  c.add(pub("P1", 2019, {author("a", {"I"}, true), author("b", {"J"})}));
  c.add(pub("P2", 2019, {author("b", {"J"}, true), author("a", {"I"})}));
  c.add(pub("P3", 2024, {author("b", {"J"}, true), author("a", {"I"})}));
  c.add(pub("P4", 2024, {author("b", {"J"}), author("a", {"I"}, true)}));
  auto s = c.snapshot();
  auto base = authorship_rates(s, "I", Window(2018, 2019));
  auto cur = authorship_rates(s, "I", Window(2023, 2024));
  CHECK(*base.first == 0.5);
  CHECK(*base.corresponding == 0.5);
  CHECK(*cur.first == 0.0);
  CHECK(*cur.corresponding == 0.5);
  CHECK(*authorship_decline(base.first, cur.first) == -100.0);
  CHECK(*authorship_decline(base.corresponding, cur.corresponding) == 0.0);
  CHECK_FALSE(authorship_rates(s, "I", Window(2020, 2021)).first.has_value());
  CHECK_FALSE(authorship_decline(0.0, 0.3).has_value());
  CHECK(*authorship_decline(59.0, 31.0) == doctest::Approx(100.0 * (31.0 - 59.0) / 59.0));
}

TEST_CASE("hyper-prolific threshold, scope and calendar year") {
  testkit::CorpusData c;
  for (int i = 0; i < 40; ++i) {
    c.add(pub(testkit::numbered("H", i), 2023, {author("h", {"I"})}));
  }
  for (int i = 0; i < 39; ++i) {
    c.add(pub(testkit::numbered("L", i), 2023, {author("l", {"I"})}));
  }
  // 20 + 20 across two years never reaches 40 in a single year.
  for (int i = 0; i < 40; ++i) {
    c.add(pub(testkit::numbered("S", i), 2023 + i % 2, {author("s", {"I"})}));
  }
  // 39 articles plus one non-qualifying document.
  for (int i = 0; i < 39; ++i) {
    c.add(pub(testkit::numbered("O", i), 2023, {author("o", {"I"})}));
  }
  c.add(pub("O999", 2023, {author("o", {"I"})}, 0, "J1", DocType::Other));
  auto s = c.snapshot();
  HpaIndex index(s, Window(2023, 2024));
  CHECK(index.authors("I") == std::vector<std::string>{"h"});
  CHECK(hpa_count(s, "I", Window(2023, 2024)) == 1);
  CHECK(hpa_count(s, "I", Window(2023, 2024), 39) == 3);
  CHECK(hyper_prolific_authors(s, 2023).size() == 1);
  CHECK(hyper_prolific_authors(s, 2023, 39).at("l") == 39);
  CHECK_THROWS_AS(HpaIndex(s, Window(2023, 2024), 0), ValidationError);
}

TEST_CASE("mass collaborations are excluded from hyper-prolific counts") {
  testkit::CorpusData c;
  for (int i = 0; i < 40; ++i) {
    std::vector<AuthorshipEntry> authors{author("m", {"I"})};
    if (i == 0) {
      for (int k = 0; k < 100; ++k) authors.push_back(author("x" + std::to_string(k), {"J"}));
    }
    c.add(pub(testkit::numbered("M", i), 2023, authors));
  }
  auto s = c.snapshot();
  CHECK(hpa_count(s, "I", Window(2023, 2023)) == 0);
  CHECK(hpa_count(s, "I", Window(2023, 2023), 40, Scope{{DocType::Article}, 101}) == 1);
}

TEST_CASE("an author counts only where their own affiliation lists the institution") {
  testkit::CorpusData c;
  for (int i = 0; i < 40; ++i) {
    c.add(pub(testkit::numbered("P", i), 2023, {author("h", {"I"}), author("k", {"J"})}));
  }
  auto s = c.snapshot();
  HpaIndex index(s, Window(2023, 2023));
  CHECK(index.authors("I") == std::vector<std::string>{"h"});
  CHECK(index.authors("J") == std::vector<std::string>{"k"});
  CHECK(index.count("K") == 0);
}

TEST_CASE("hyper-prolific detection equals the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto c = testkit::random_corpus(seed);
    auto s = c.snapshot();
    for (std::size_t threshold : {1, 2, 3, 5}) {
      for (auto max_co : {std::size_t{2}, std::size_t{100}}) {
        const Window w(2018, 2021);
        HpaIndex index(s, w, threshold, Scope{{DocType::Article, DocType::Review}, max_co});
        oracle::Filter f;
        f.max_coauthors = max_co;
        for (const auto& inst : s.institutions()) {
          CAPTURE(seed);
          CAPTURE(inst);
          CHECK(index.authors(inst) == oracle::hpa_authors(c.pubs, inst, w, threshold, f));
        }
      }
    }
  }
}

TEST_CASE("top-2% quota and tie breaking") {
  CHECK(top2_cohort_quota(49) == 0);
  CHECK(top2_cohort_quota(50) == 1);
  CHECK(top2_cohort_quota(5804) == 116);
  testkit::CorpusData c;
  for (int i = 0; i < 100; ++i) {
    c.add(pub(testkit::numbered("P", i), 2020, {author("a", {"I"})}, i < 3 ? 10 : 0));
  }
  for (int i = 0; i < 49; ++i) {
    c.add(pub(testkit::numbered("Q", i), 2021, {author("a", {"I"})}, 100));
  }
  auto s = c.snapshot();
  auto flags = top2_flags(s);
  CHECK(flags.size() == 2);
  CHECK(flags.ids(s) == std::vector<std::string>{"P000000", "P000001"});
  auto share = top2_share(s, "I", Window(2020, 2020));
  CHECK(share.count == 2);
  CHECK(*share.fraction == 0.02);
}

TEST_CASE("top-2% flags equal the brute-force oracle") {
  testkit::RandomSpec wide;
  wide.max_pubs = 400;
  wide.years = 2;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    auto c = testkit::random_corpus(seed, seed % 2 ? testkit::RandomSpec{} : wide);
    auto s = c.snapshot();
    auto flags = top2_flags(s);
    auto ids = flags.ids(s);
    auto expected = oracle::top2(c.pubs, default_filter());
    CAPTURE(seed);
    CHECK(std::set<std::string>(ids.begin(), ids.end()) == expected);
    CHECK(flags.size() == expected.size());
  }
}

TEST_CASE("delisted share counts covered delisted content") {
  testkit::CorpusData c;
  fill(c, "I", 2019, 7, "a");
  fill(c, "I", 2019, 3, "d", 0, "JD");
  fill(c, "I", 2025, 2, "late", 0, "JD");
  auto s = c.snapshot();
  auto share = delisted_share(s, "I", Window(2018, 2019));
  CHECK(share.count == 3);
  CHECK(*share.fraction == 0.3);
  auto late = delisted_share(s, "I", Window(2025, 2025));
  CHECK(late.count == 0);
  CHECK_FALSE(delisted_share(s, "I", Window(2010, 2011)).fraction.has_value());
}

TEST_CASE("retraction rate places retracted publications by publication year") {
  testkit::CorpusData c;
  fill(c, "I", 2022, 500, "a");
  fill(c, "I", 2023, 500, "b");
  fill(c, "I", 2024, 10, "c");
  c.retract(c.pubs[0], 2025);
  c.retract(c.pubs[1], 2023);
  c.retract(c.pubs[600], 2025);
  c.retract(c.pubs[1001], 2025);
  auto s = c.snapshot();
  auto t = retraction_rate(s, "I", default_retraction_window(2025));
  CHECK(default_retraction_window(2025) == Window(2022, 2023));
  CHECK(t.retractions == 3);
  CHECK(t.articles == 1000);
  CHECK(*t.rate == 3.0);
}

TEST_CASE("grouped retraction rates by subject") {
  testkit::CorpusData c;
  for (int i = 0; i < 1000; ++i) {
    auto& p = c.add(pub(testkit::numbered("P", i), 2022, {author("a", {"I"})}));
    p.subjects = {i < 400 ? "Mathematics" : "Medicine"};
    if (i < 10) p.subjects.push_back("Computer Science");
  }
  for (int i = 0; i < 4; ++i) c.retract(c.pubs[static_cast<std::size_t>(i)], 2024);
  c.retract(c.pubs[500], 2024);
  auto rates = grouped_rates(c.snapshot(), Window(2022, 2023));
  REQUIRE(rates.size() == 3);
  CHECK(rates[0].group == "Computer Science");
  CHECK(*rates[0].rate == 400.0);
  CHECK(rates[1].group == "Mathematics");
  CHECK(*rates[1].rate == 10.0);
  CHECK(*rates[2].rate == doctest::Approx(1000.0 / 600.0));
}

TEST_CASE("citation tallies credit each institution once per citing publication") {
  testkit::CorpusData c;
  c.add(pub("T", 2023, {author("a", {"I"})}, 9));
  c.add(pub("C1", 2023, {author("b", {"J"}), author("c", {"J", "K"})}));
  c.add(pub("C2", 2024, {author("d", {"I"})}));
  c.add(pub("C3", 2021, {author("e", {"L"})}));
  auto s = c.snapshot();
  CitationEdgeTable edges = {{"C1", "T"}, {"C2", "T"}, {"C3", "T"}, {"C1", "T"}, {"T", "T"}};
  CitationGraph g(s, edges);
  CHECK(g.edge_count() == 3);
  auto tally = tally_citations(g, "I", Window(2023, 2024), Basis::All);
  CHECK(tally.total == 2);
  CHECK(tally.by_institution.at("J") == 1);
  CHECK(tally.by_institution.at("K") == 1);
  CHECK(tally.by_institution.at("I") == 1);
  CHECK(tally.by_institution.count("L") == 0);
  CHECK(*self_citation_rate(g, "I", Window(2023, 2024), Basis::All) == 0.5);
  CHECK_FALSE(self_citation_rate(g, "I", Window(2023, 2024), Basis::Top2).has_value());
}

TEST_CASE("citation graphs reject unknown publication ids") {
  testkit::CorpusData c;
  c.add(pub("T", 2023, {author("a", {"I"})}));
  auto s = c.snapshot();
  CHECK_THROWS_WITH_AS(CitationGraph(s, {{"X", "T"}}), doctest::Contains("X"), ValidationError);
}

TEST_CASE("basis parsing") {
  CHECK(parse_basis("top2") == Basis::Top2);
  CHECK(parse_basis("ALL") == Basis::All);
  CHECK(to_string(Basis::Top2) == "top2");
  CHECK_THROWS_AS(parse_basis("some"), ValidationError);
}

TEST_CASE("indicator engine computes every field") {
  testkit::CorpusData c;
  fill(c, "I", 2018, 10, "b");
  fill(c, "I", 2023, 20, "c");
  fill(c, "I", 2024, 5, "d", 0, "JD");
  fill(c, "I", 2022, 100, "r");
  c.retract(c.pubs.back(), 2024);
  for (auto& p : c.pubs) {
    if (p.year == 2018) p.authors[0].is_corresponding = true;
  }
  auto s = c.snapshot();
  IndicatorEngine engine(s, Window(2018, 2019), Window(2023, 2024));
  CHECK(engine.retraction_window() == Window(2022, 2023));
  auto r = engine.compute("I");
  CHECK(r.article_count_base == 10);
  CHECK(r.article_count_current == 25);
  CHECK(*r.growth_pct == 150.0);
  CHECK(*r.first_auth_rate_base == 1.0);
  CHECK(*r.corr_auth_rate_base == 1.0);
  CHECK(*r.corr_auth_rate_current == 0.0);
  CHECK(*r.corr_auth_delta_pct == -100.0);
  CHECK(*r.first_auth_delta_pct == 0.0);
  CHECK(*r.delisted_share == 0.2);
  CHECK(*r.retraction_rate == doctest::Approx(1000.0 / 120.0));
  CHECK_FALSE(r.self_citation_rate.has_value());
  auto all = engine.compute_all();
  REQUIRE(all.size() == 1);
  CHECK(all[0] == r);
}

TEST_CASE("indicator tables round-trip exactly") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = testkit::random_corpus(seed);
    auto s = c.snapshot();
    CitationGraph g(s, c.edges);
    IndicatorEngine engine(s, Window(2018, 2019), Window(2020, 2021), {}, &g);
    auto rows = engine.compute_all();
    std::istringstream in(format_indicator_table(rows));
    CHECK(parse_indicator_table(in, "t.csv") == rows);
  }
}

TEST_CASE("empty indicator table is header only") {
  CHECK(format_indicator_table({}) == text::join(kIndicatorColumns, ",") + "\n");
  std::istringstream in(format_indicator_table({}));
  CHECK(parse_indicator_table(in, "t.csv").empty());
}

TEST_CASE("indicator rows name the offending column") {
  InstitutionIndicators r;
  r.institution_id = "I";
  r.base_window = Window(2018, 2019);
  r.current_window = Window(2023, 2024);
  auto fields = indicator_row(r);
  fields[15] = "lots";
  CHECK_THROWS_WITH_AS(parse_indicator_row(fields), doctest::Contains("retraction_rate"),
                       ValidationError);
  fields = indicator_row(r);
  fields[3] = "-1";
  CHECK_THROWS_WITH_AS(parse_indicator_row(fields), doctest::Contains("article_count_base"),
                       ValidationError);
  std::istringstream in(format_indicator_table({r}) + "I,2018-2019,2023-2024,x" +
                        std::string(14, ',') + "\n");
  CHECK_THROWS_AS(parse_indicator_table(in, "t.csv"), FormatError);
}
