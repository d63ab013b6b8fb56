#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "ramsi/error.hpp"
#include "ramsi/io.hpp"
#include "ramsi/synth.hpp"

using namespace ramsi;

TEST_CASE("zeros file") {
  std::istringstream in("0,0\n0,0\n0,0\n");
  const VectorTable t = read_vectors_csv(in);
  CHECK(t.x == SignalVector::zeros(3));
  CHECK(t.ensemble.count() == 1);
  CHECK(t.ensemble.signal(1) == SignalVector::zeros(3));
}

TEST_CASE("header, CRLF and blank lines") {
  std::istringstream in("x,z1,z2\r\n1.5,2,-3e-2\r\n\r\n-0.25, 4 ,+5\r\n");
  const VectorTable t = read_vectors_csv(in);
  CHECK(t.x.size() == 2);
  CHECK(t.x[0] == 1.5);
  CHECK(t.ensemble.value(2, 0) == -3e-2);
  CHECK(t.ensemble.value(1, 1) == 4.0);
  CHECK(t.ensemble.value(2, 1) == 5.0);
}

TEST_CASE("source only") {
  std::istringstream in("x\n1\n2\n");
  const VectorTable t = read_vectors_csv(in);
  CHECK(t.ensemble.count() == 0);
  CHECK(t.x.size() == 2);
}

TEST_CASE("round trip is bit exact") {
  const Scenario s = generate_scenario(uniform_scenario(500, 60, 3, 40, 30, 9));
  const auto path = std::filesystem::temp_directory_path() / "ramsi_io_roundtrip.csv";
  write_vectors_csv(path, s.x, s.ensemble);
  const VectorTable t = read_vectors_csv(path);
  std::filesystem::remove(path);
  CHECK(t.x == s.x);
  REQUIRE(t.ensemble.count() == 3);
  for (Index j = 1; j <= 3; ++j) CHECK(t.ensemble.signal(j) == s.ensemble.signal(j));
}

TEST_CASE("format_double is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, std::numeric_limits<double>::min()}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("malformed input") {
  SUBCASE("ragged row") {
    std::istringstream in("x,z1\n1,2\n3\n");
    try {
      read_vectors_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.column() == ParseError::npos);
    }
  }
  SUBCASE("non-numeric cell") {
    std::istringstream in("1,2\n3,abc\n");
    try {
      read_vectors_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 1);
      CHECK(e.column() == 1);
    }
  }
  SUBCASE("non-finite cell") {
    std::istringstream in("1,nan\n");
    CHECK_THROWS_AS(read_vectors_csv(in), ParseError);
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK_THROWS_AS(read_vectors_csv(in), ParseError);
    std::istringstream header_only("x,z1\n");
    CHECK_THROWS_AS(read_vectors_csv(header_only), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS(read_vectors_csv(std::filesystem::path("/nonexistent/ramsi.csv")));
  }
}
