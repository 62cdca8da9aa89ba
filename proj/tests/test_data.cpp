#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "powerfit/data.hpp"
#include "powerfit/errors.hpp"
#include "powerfit/estimators.hpp"

using namespace powerfit;

namespace {

FrequencyTable parse(const std::string &text) {
  std::istringstream in(text);
  return load_frequency_table(in);
}

FrequencyTable small() { return parse("x,count\n1,10\n2,5\n4,1\n"); }

double sum_y(const CurveData &c) {
  CompensatedSum s;
  for (const auto &p : c.points) s.add(p.y);
  return s.value();
}

FrequencyTable random_table(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> rows(2, 40);
  std::uniform_int_distribution<int> gap(1, 5);
  std::uniform_int_distribution<int> count(1, 500);
  std::vector<FrequencyRow> out;
  std::int64_t x = 0;
  for (int i = rows(rng); i > 0; --i) {
    x += gap(rng);
    out.push_back({x, count(rng)});
  }
  return FrequencyTable(out);
}

}  // namespace

TEST_CASE("load a small table") {
  const auto t = small();
  CHECK(t.n() == 16);
  CHECK(t.x_max() == 4);
  CHECK(t.size() == 3);
  CHECK(t.x_min() == 1);
}

TEST_CASE("loader accepts comments, CRLF, blank lines and unsorted rows") {
  const auto t = parse("# comment\r\nx,count\r\n4,1\r\n\r\n# mid\n1,10\n2,5");
  CHECK(t == small());
}

TEST_CASE("loader rejects malformed input") {
  CHECK_THROWS_AS(parse("x,count\n2,3\n2,4\n"), DuplicateXError);
  CHECK_THROWS_AS(parse("x,count\n"), EmptyInputError);
  CHECK_THROWS_AS(parse(""), EmptyInputError);
  CHECK_THROWS_AS(parse("1,2\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n1,a\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n1.5,2\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n0,2\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n-1,2\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n1,0\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse("x,count\n99999999999999999999999,1\n"), ParseError);
  try {
    parse("x,count\n1,2\nfoo\n");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("table constructor validates") {
  CHECK_THROWS_AS(FrequencyTable({}), EmptyInputError);
  CHECK_THROWS_AS(FrequencyTable({{0, 1}}), InvalidParamsError);
  CHECK_THROWS_AS(FrequencyTable({{1, 0}}), InvalidParamsError);
  CHECK_THROWS_AS(FrequencyTable({{3, 1}, {3, 2}}), DuplicateXError);
}

TEST_CASE("round trip through CSV") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_table(rng);
    std::ostringstream out;
    write_frequency_table(out, t);
    CHECK(parse(out.str()) == t);
  }
}

TEST_CASE("sufficient statistics") {
  const auto s = sufficient_stats(small());
  CHECK(s.n == 16);
  CHECK(s.sum_z == 24);
  CHECK(s.sum_log_z == doctest::Approx(5 * std::log(2.0) + std::log(4.0)).epsilon(1e-15));
  const auto ones = sufficient_stats(FrequencyTable({{1, 7}}));
  CHECK(ones.sum_z == 7);
  CHECK(ones.sum_log_z == 0.0);
}

TEST_CASE("empirical CDF") {
  const auto t = small();
  CHECK(empirical_cdf(t, 0) == 0.0);
  CHECK(empirical_cdf(t, 1) == 10.0 / 16);
  CHECK(empirical_cdf(t, 2) == 15.0 / 16);
  CHECK(empirical_cdf(t, 3) == 15.0 / 16);
  CHECK(empirical_cdf(t, 4) == 1.0);
  CHECK(empirical_cdf(t, 100) == 1.0);
}

TEST_CASE("curve view") {
  const auto c = to_curve(small());
  REQUIRE(c.points.size() == 3);
  CHECK(c.points[1].y == 5.0 / 16);
  CHECK(std::fabs(sum_y(c) - 1.0) < 1e-12);
}

TEST_CASE("truncation semantics") {
  const CurveData c{{{1, 0.6}, {2, 0.3}, {10, 0.1}}};
  const auto dist = truncate_distribution(c, 2);
  REQUIRE(dist.points.size() == 2);
  CHECK(dist.points[0].y == 0.6);
  CHECK(std::fabs(sum_y(dist) - 0.9) < 1e-15);
  const auto data = truncate_data(c, 2);
  CHECK(data.points[0].y == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(data.points[1].y == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(truncate_distribution(c, 10).points.size() == 3);
  CHECK_THROWS_AS(truncate_distribution(c, 0), EmptyResultError);
  CHECK_THROWS_AS(truncate_data(small(), 0), EmptyResultError);

  const auto t = small();
  const auto full = to_curve(t);
  const auto same = truncate_data(t, t.x_max());
  for (std::size_t i = 0; i < full.points.size(); ++i) {
    CHECK(same.points[i].y == doctest::Approx(full.points[i].y).epsilon(1e-15));
  }
}

TEST_CASE("parallel curves under the two truncations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_table(rng);
    std::uniform_int_distribution<std::int64_t> cut(t.rows()[1].x, t.x_max());
    const std::int64_t x_cut = cut(rng);
    const auto dist = truncate_distribution(to_curve(t), x_cut);
    const auto data = truncate_data(t, x_cut);
    CHECK(std::fabs(sum_y(data) - 1.0) < 1e-12);
    REQUIRE(dist.points.size() == data.points.size());
    const double shift = std::log(data.points[0].y) - std::log(dist.points[0].y);
    for (std::size_t i = 0; i < dist.points.size(); ++i) {
      CHECK(std::fabs(std::log(data.points[i].y) - std::log(dist.points[i].y) -
                      shift) < 1e-12);
    }
    const auto a = fit_ols_loglog(dist);
    const auto b = fit_ols_loglog(data);
    CHECK(std::fabs(a.alpha - b.alpha) < 1e-10);
    CHECK(std::fabs((*b.b - *a.b) - shift) < 1e-10);
  }
}

TEST_CASE("checksum changes with the data") {
  const auto a = small();
  const auto b = parse("x,count\n1,10\n2,5\n4,2\n");
  CHECK(table_checksum(a) == table_checksum(small()));
  CHECK(table_checksum(a) != table_checksum(b));
}

TEST_CASE("bundled Lotka chemistry table") {
  std::ifstream in(POWERFIT_LOTKA_CSV);
  REQUIRE(in);
  const auto t = load_frequency_table(in);
  CHECK(t.n() == 6891);
  CHECK(t.size() == 66);
  CHECK(t.x_max() == 346);
  const auto s = sufficient_stats(t);
  // Frozen at transcription time.
  CHECK(s.sum_z == 22934);
  CHECK(std::fabs(s.sum_log_z - 4139.540112699121) < 1e-9);
}
