#include "doctest.h"

#include <utility>

#include "ident/errors.hpp"
#include "ident/rational.hpp"
#include "ident/simplex.hpp"

using namespace ident;

TEST_SUITE("simplex") {

TEST_CASE("textbook optimum at a vertex") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6  ->  12 at (4, 0)
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(-3), BigRat(-2)};
  lp.add_row({BigRat(1), BigRat(1)}, LpCmp::le, BigRat(4));
  lp.add_row({BigRat(1), BigRat(3)}, LpCmp::le, BigRat(6));
  auto r = lp_solve_min(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == BigRat(-12));
  CHECK(r.x[0] == BigRat(4));
  CHECK(r.x[1] == BigRat(0));
}

TEST_CASE("mean over a probability simplex spans the support hull") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(0), BigRat(1) / 2, BigRat(1)};
  lp.add_row({BigRat(1), BigRat(1), BigRat(1)}, LpCmp::eq, BigRat(1));
  auto [lo, hi] = lp_extremes(lp);
  CHECK(lo == BigRat(0));
  CHECK(hi == BigRat(1));
}

TEST_CASE("contradictory rows are reported infeasible") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(1)};
  lp.add_row({BigRat(1)}, LpCmp::eq, BigRat(-1));  // x >= 0 forces x != -1
  CHECK(lp_solve_min(lp).status == LpStatus::infeasible);
  CHECK_THROWS_AS(lp_extremes(lp), Infeasible);
}

TEST_CASE("degenerate equality pair is solved through phase one") {
  // x + y = 1, x - y = 0  ->  x = y = 1/2
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(1), BigRat(0)};
  lp.add_row({BigRat(1), BigRat(1)}, LpCmp::eq, BigRat(1));
  lp.add_row({BigRat(1), BigRat(-1)}, LpCmp::eq, BigRat(0));
  auto r = lp_solve_min(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == BigRat(1) / 2);
  CHECK(r.x[0] == BigRat(1) / 2);
  CHECK(r.x[1] == BigRat(1) / 2);
}

TEST_CASE("redundant duplicate rows do not disturb the optimum") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(1), BigRat(2)};
  lp.add_row({BigRat(1), BigRat(1)}, LpCmp::eq, BigRat(1));
  lp.add_row({BigRat(1), BigRat(1)}, LpCmp::eq, BigRat(1));
  auto [lo, hi] = lp_extremes(lp);
  CHECK(lo == BigRat(1));
  CHECK(hi == BigRat(2));
}

TEST_CASE("unbounded direction is detected") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(-1)};
  CHECK(lp_solve_min(lp).status == LpStatus::unbounded);
  CHECK_THROWS_AS(lp_extremes(lp), InternalError);
}

TEST_CASE("ge rows bound from below") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(1)};
  lp.add_row({BigRat(1)}, LpCmp::ge, BigRat(3));
  auto r = lp_solve_min(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == BigRat(3));
}

TEST_CASE("solutions are exact rationals, not floating approximations") {
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(1)};
  lp.add_row({BigRat(3)}, LpCmp::eq, BigRat(1));
  auto r = lp_solve_min(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == BigRat(1) / 3);
}

TEST_CASE("pinned sub-simplex extremes collapse to a point") {
  // p on the 3-simplex with p0 + p1 = 3/4 pinned: p2 is identified at 1/4.
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(0), BigRat(0), BigRat(1)};
  lp.add_row({BigRat(1), BigRat(1), BigRat(1)}, LpCmp::eq, BigRat(1));
  lp.add_row({BigRat(1), BigRat(1), BigRat(0)}, LpCmp::eq, BigRat(3) / 4);
  auto [lo, hi] = lp_extremes(lp);
  CHECK(lo == BigRat(1) / 4);
  CHECK(hi == BigRat(1) / 4);
}

TEST_CASE("Beale's cycling program terminates at the true optimum") {
  // Classic example that cycles under naive most-negative pivoting; Bland's
  // rule must escape with optimum -1/20 at (1/25, 0, 1, 0).
  LinearProgram<BigRat> lp;
  lp.c = {BigRat(-3) / 4, BigRat(150), BigRat(-1) / 50, BigRat(6)};
  lp.add_row({BigRat(1) / 4, BigRat(-60), BigRat(-1) / 25, BigRat(9)}, LpCmp::le,
             BigRat(0));
  lp.add_row({BigRat(1) / 2, BigRat(-90), BigRat(-1) / 50, BigRat(3)}, LpCmp::le,
             BigRat(0));
  lp.add_row({BigRat(0), BigRat(0), BigRat(1), BigRat(0)}, LpCmp::le, BigRat(1));
  auto r = lp_solve_min(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == BigRat(-1) / 20);
}

TEST_CASE("double instantiation matches the exact field within tolerance") {
  LinearProgram<double> lp;
  lp.c = {0.0, 0.5, 1.0};
  lp.add_row({1, 1, 1}, LpCmp::eq, 1.0);
  auto [lo, hi] = lp_extremes(lp);
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));

  LinearProgram<double> beale;
  beale.c = {-0.75, 150.0, -0.02, 6.0};
  beale.add_row({0.25, -60.0, -0.04, 9.0}, LpCmp::le, 0.0);
  beale.add_row({0.5, -90.0, -0.02, 3.0}, LpCmp::le, 0.0);
  beale.add_row({0.0, 0.0, 1.0, 0.0}, LpCmp::le, 1.0);
  auto rd = lp_solve_min(beale);
  REQUIRE(rd.status == LpStatus::optimal);
  CHECK(rd.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("rationals round-trip between the fixed and big representations") {
  BigRat b = BigRat(7) / 20;
  Rat r = Rat::from_big(b);
  CHECK(r == Rat(7, 20));
}

}  // TEST_SUITE
