#include <sstream>

#include "doctest.h"
#include "integrity/common.hpp"
#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"
#include "integrity/keyvalue.hpp"
#include "integrity/manifest.hpp"
#include "support.hpp"

using namespace integrity;

TEST_CASE("window parsing") {
  CHECK(Window::parse("2018-2019") == Window(2018, 2019));
  CHECK(Window::parse(" 2020 ") == Window(2020, 2020));
  CHECK(Window(2018, 2019).to_string() == "2018-2019");
  CHECK(Window(2018, 2019).length() == 2);
  CHECK(Window(2018, 2019).overlaps(Window(2019, 2020)));
  CHECK_FALSE(Window(2018, 2019).overlaps(Window(2020, 2021)));
  CHECK_THROWS_AS(Window::parse("abc"), FormatError);
  CHECK_THROWS_AS(Window::parse("2018-x"), FormatError);
  CHECK_THROWS_AS(Window(2020, 2019), ValidationError);
}

TEST_CASE("half-up rounding and fixed formatting") {
  CHECK(text::format_fixed(242.9, 0) == "243");
  CHECK(text::format_fixed(0.5, 0) == "1");
  CHECK(text::format_fixed(2.5, 0) == "3");
  CHECK(text::format_fixed(-0.0001, 2) == "0.00");
  CHECK(text::format_fixed(79.71, 1) == "79.7");
  CHECK(text::format_fixed(0.0005, 3) == "0.001");
  CHECK(text::round_half_up(1.005, 2) == doctest::Approx(1.01));
}

TEST_CASE("exact formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2421.0 / 3037.0, 1e-17, 123456789.125, -0.25}) {
    CHECK(text::parse_double(text::format_exact(v)) == v);
  }
  CHECK(text::format_measure(std::nullopt) == "n/a");
  CHECK_FALSE(text::parse_measure("n/a").has_value());
  CHECK(*text::parse_measure("0.5") == 0.5);
  CHECK_THROWS_AS(text::parse_double("1,5"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_int("12x"), std::invalid_argument);
}

TEST_CASE("list splitting") {
  CHECK(text::split_list(" a | b ||c ", '|') == std::vector<std::string>{"a", "b", "c"});
  CHECK(text::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::join({"x", "y"}, ";") == "x;y");
}

TEST_CASE("csv reader handles quoting, CRLF and multi-line fields") {
  std::istringstream in("a,b\r\n\"x,1\",\"he said \"\"hi\"\"\"\r\n\n\"multi\nline\",2\n");
  csv::Reader r(in, "t.csv");
  r.expect_header({"a", "b"});
  csv::Row row;
  REQUIRE(r.next(row));
  CHECK(row.fields == std::vector<std::string>{"x,1", "he said \"hi\""});
  CHECK(row.line == 2);
  REQUIRE(r.next(row));
  CHECK(row.fields[0] == "multi\nline");
  CHECK(row.line == 4);
  CHECK_FALSE(r.next(row));
}

TEST_CASE("csv reader reports location of malformed rows") {
  std::istringstream in("a,b\n1,2\n3\n");
  csv::Reader r(in, "t.csv");
  r.expect_header({"a", "b"});
  csv::Row row;
  REQUIRE(r.next(row));
  try {
    r.next(row);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.source() == "t.csv");
    CHECK(e.line() == 3);
  }
}

TEST_CASE("csv header mismatch is a format error") {
  std::istringstream in("a,c\n");
  csv::Reader r(in, "t.csv");
  CHECK_THROWS_AS(r.expect_header({"a", "b"}), FormatError);
}

TEST_CASE("csv escaping round-trips") {
  const std::vector<std::string> fields = {"plain", "with,comma", "quote\"d", "", "line\nbreak"};
  std::istringstream in(csv::format_row({"1", "2", "3", "4", "5"}) + csv::format_row(fields));
  csv::Reader r(in, "t.csv");
  r.expect_header({"1", "2", "3", "4", "5"});
  csv::Row row;
  REQUIRE(r.next(row));
  CHECK(row.fields == fields);
}

TEST_CASE("key=value documents") {
  std::istringstream in("# comment\n a = 1 \n\nb=x y\n");
  auto doc = KeyValueDoc::parse(in, "k.txt");
  CHECK(doc.require_int("a") == 1);
  CHECK(doc.require("b") == "x y");
  CHECK_FALSE(doc.has("c"));
  CHECK_THROWS_AS(doc.require("c"), FormatError);
  CHECK_THROWS_AS(doc.reject_unknown({"a"}), FormatError);
  CHECK_NOTHROW(doc.reject_unknown({"a", "b"}));

  std::istringstream dup("a=1\na=2\n");
  CHECK_THROWS_AS(KeyValueDoc::parse(dup, "d.txt"), FormatError);
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(KeyValueDoc::parse(bad, "b.txt"), FormatError);
}

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("file digests ignore directory location") {
  auto a = testkit::scratch_dir("digest_a");
  auto b = testkit::scratch_dir("digest_b");
  write_file_atomically((a / "x.csv").string(), "hello");
  write_file_atomically((b / "x.csv").string(), "hello");
  CHECK(digest_files({(a / "x.csv").string()}) == digest_files({(b / "x.csv").string()}));
  write_file_atomically((b / "x.csv").string(), "hellO");
  CHECK(digest_files({(a / "x.csv").string()}) != digest_files({(b / "x.csv").string()}));
}

TEST_CASE("atomic writes replace content and leave no temporaries") {
  auto dir = testkit::scratch_dir("atomic");
  const auto path = (dir / "out.txt").string();
  write_file_atomically(path, "one");
  write_file_atomically(path, "two");
  CHECK(read_file(path) == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(read_file((dir / "missing").string()), FormatError);
}

TEST_CASE("warning capture collects messages") {
  WarningCapture capture;
  warn("first");
  warn("second thing");
  CHECK(capture.messages().size() == 2);
  CHECK(capture.contains("second"));
}
