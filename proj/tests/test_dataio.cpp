#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "ugm/dataio.hpp"
#include "ugm/errors.hpp"
#include "ugm/problem.hpp"

using namespace ugm;
using ugm::testing::Gen;

namespace {

Dataset parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, opts);
}

ParseError parse_error(const std::string& text, ParseOptions opts = {}) {
  try {
    parse(text, opts);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("hand-written example") {
  const auto ds = parse("+1 1:0.5 3:2\n-1 2:1");
  REQUIRE(ds.rows() == 2);
  REQUIRE(ds.cols() == 3);
  Matrix expected(2, 3);
  expected << 0.5, 0, 2, 0, 1, 0;
  CHECK(ds.features == expected);
  CHECK(ds.labels == (Vector(2) << 1, -1).finished());
}

TEST_CASE("whitespace, comments, CRLF and a trailing newline are tolerated") {
  const auto ds = parse("# header\n\n  2.5\t1:1   2:-3e-1  \r\n# mid\n-0.5 2:4 # trailing\n");
  REQUIRE(ds.rows() == 2);
  CHECK(ds.cols() == 2);
  CHECK(ds.labels[0] == 2.5);
  CHECK(ds.features(0, 1) == -0.3);
  CHECK(ds.features(1, 1) == 4.0);
}

TEST_CASE("empty input has no records") {
  for (const char* text : {"", "\n\n", "# only a comment\n"}) {
    const auto e = parse_error(text);
    CHECK(std::string(e.what()).find("no records") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1\n-1\n"), ParseError);  // labels only, no features
}

TEST_CASE("malformed lines name line and column") {
  struct Case {
    const char* text;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"1 1:2\nabc 1:2\n", 2, 1},      // non-numeric label
      {"1 1:2\n1 1:x\n", 2, 5},        // non-numeric value
      {"1 0:2\n", 1, 3},               // index <= 0
      {"1 -2:2\n", 1, 3},              // negative index
      {"1 3:1 2:1\n", 1, 7},           // decreasing index
      {"1 2:1 2:5\n", 1, 7},           // duplicate index
      {"1 1:2\n\n1 2\n", 3, 3},        // missing colon
      {"1 1:nan\n", 1, 5},             // NaN entries
  };
  for (const auto& c : cases) {
    CAPTURE(std::string(c.text));
    const auto e = parse_error(c.text);
    CHECK(e.line() == c.line);
    CHECK(e.column() == c.column);
  }
}

TEST_CASE("classification labels") {
  const auto ds = parse("1 1:1\n0 1:2\n-1 1:3\n", {true, false});
  CHECK(ds.labels == (Vector(3) << 1, -1, -1).finished());
  CHECK_THROWS_AS(parse("2 1:1\n", {true, false}), ParseError);
  CHECK(parse("2 1:1\n").labels[0] == 2.0);
}

TEST_CASE("normalization scales columns by their max magnitude") {
  auto ds = parse("1 1:2 2:-4\n1 1:-1 3:0\n", {false, true});
  Matrix expected(2, 3);
  expected << 1, -1, 0, -0.5, 0, 0;
  CHECK(ds.features == expected);
}

TEST_CASE("round trip reproduces the dataset exactly") {
  Gen gen(3);
  for (int t = 0; t < 100; ++t) {
    const auto m = gen.integer(1, 12), n = gen.integer(1, 9);
    Dataset ds;
    ds.features = Matrix::Zero(m, n);
    ds.labels = gen.vec(m, 10.0);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (gen.uniform(0, 1) < 0.4) ds.features(i, j) = gen.normal() * std::pow(10.0, gen.integer(-8, 8));
    std::ostringstream out;
    write_libsvm(out, ds);
    const auto back = parse(out.str());
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    std::ostringstream again;
    write_libsvm(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("file loading reports the path") {
  const std::string path = "test_dataio_tmp.svm";
  {
    std::ofstream f(path);
    f << "1 1:1\n1 q:1\n";
  }
  try {
    load_libsvm(path);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
    CHECK(e.line() == 2);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_libsvm("definitely/not/here.svm"), DataError);
}

TEST_CASE("synthetic least squares") {
  const auto a = synth_least_squares(100, 50, 7);
  const auto b = synth_least_squares(100, 50, 7);
  CHECK(a.data.features == b.data.features);
  CHECK(a.data.labels == b.data.labels);
  CHECK(a.x_star == b.x_star);
  CHECK(std::abs(a.x_star.norm() - 1.0) <= 1e-12);
  CHECK((a.data.features * a.x_star - a.data.labels).norm() <= 1e-12);
  CHECK(a.data.features.minCoeff() >= 0.0);
  CHECK(a.data.features.maxCoeff() <= 1.0);
  CHECK(synth_least_squares(100, 50, 8).x_star != a.x_star);
  CHECK_THROWS_AS(synth_least_squares(0, 5, 1), UsageError);
}

TEST_CASE("synthetic p-power and classification data") {
  const auto ls = synth_least_squares(40, 6, 9);
  const auto p2 = synth_p_power(40, 6, 2.0, 9);
  CHECK(p2.features == ls.data.features);
  CHECK(p2.labels == ls.data.labels);

  const auto p1 = p_power_objective(synth_p_power(40, 6, 1.0, 9).features, synth_p_power(40, 6, 1.0, 9).labels, 1.0);
  CHECK(p1.value(ls.x_star) <= 1e-12);

  Gen gen(10);
  for (double p : {1.0, 1.5, 2.0}) {
    const auto ds = synth_p_power(40, 6, p, 9);
    const auto obj = p_power_objective(ds.features, ds.labels, p);
    for (int t = 0; t < 100; ++t) {
      const Vector x = gen.in_ball(6), y = gen.in_ball(6);
      CHECK(obj.value(0.5 * (x + y)) <= 0.5 * (obj.value(x) + obj.value(y)) + 1e-12);
    }
  }
  CHECK_THROWS_AS(synth_p_power(4, 2, 2.5, 1), UsageError);

  const auto cls = synth_classification(40, 6, 9);
  CHECK(cls.features == ls.data.features);
  for (double l : cls.labels) CHECK((l == 1.0 || l == -1.0));
}
