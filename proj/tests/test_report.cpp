#include "ultrana/errors.hpp"
#include "ultrana/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace ultrana;

TEST_CASE("cells carry twenty significant digits") {
  const Precision p(256);
  const BigReal third = BigReal(1L, p) / 3L;
  const std::string cell = format_cell(third);
  CHECK(cell == "3.3333333333333333333e-01");
  CHECK(format_cell(0.25) == "2.5000000000000000000e-01");
}

TEST_CASE("CSV rows are sorted by n then j") {
  const Precision p(128);
  LemmaCheckReport r;
  r.lemma_id = "demo";
  r.worst_ratio = BigReal(0.5, p);
  r.rows.push_back({5, 2, BigReal(0.5, p), true});
  r.rows.push_back({2, 9, BigReal(0.25, p), true});
  r.rows.push_back({5, 1, BigReal(2L, p), false});
  r.violations.push_back({5, 1});
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "lemma_id,n,j_or_s,ratio,pass");
  std::getline(in, line);
  CHECK(line.rfind("demo,2,9,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("demo,5,1,", 0) == 0);
  CHECK(line.substr(line.size() - 5) == "false");
  CHECK_FALSE(r.passed());
  const auto j = to_json(r);
  CHECK(j["passed"] == false);
  CHECK(j["precision_bits"] == 128);
}

TEST_CASE("metrics lookup") {
  LemmaCheckReport r;
  r.set_metric("a", BigReal(1L, Precision(64)));
  r.set_metric("a", BigReal(2L, Precision(64)));
  CHECK(r.metrics.size() == 1);
  CHECK(r.metric("a").to_double() == 2.0);
  CHECK_THROWS_AS(r.metric("b"), Error);
}
