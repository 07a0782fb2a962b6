#include "doctest.h"

#include <cstdint>
#include <limits>

#include "ident/errors.hpp"
#include "ident/rational.hpp"

using namespace ident;

TEST_SUITE("rational") {

TEST_CASE("construction normalizes sign and gcd") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(-1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(0, 7) == Rat(0, 1));
  CHECK(Rat(0, -7).den() == 1);
  CHECK_THROWS_AS(Rat(1, 0), OverflowError);
}

TEST_CASE("arithmetic is exact") {
  Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2, 1));
  CHECK(-a == Rat(-1, 3));
  CHECK_THROWS_AS(a / Rat(0, 1), OverflowError);
  // 1/10 + 2/10 == 3/10 exactly, unlike the binary doubles.
  CHECK(Rat(1, 10) + Rat(2, 10) == Rat(3, 10));
}

TEST_CASE("comparison is exact across denominators") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(-1, 3));
  CHECK(Rat(2, 6) <= Rat(1, 3));
  CHECK(Rat(7, 10) > Rat(9, 20));
  // Large-magnitude comparison that would overflow a naive cross-multiply
  // in 64 bits.
  std::int64_t big = 4'000'000'000LL;
  CHECK(Rat(big, big - 1) > Rat(big - 1, big));
}

TEST_CASE("overflow is detected, not wrapped") {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  Rat huge(m, 1);
  CHECK_THROWS_AS(huge + Rat(1, 1), OverflowError);
  CHECK_THROWS_AS(huge * Rat(2, 1), OverflowError);
  CHECK_THROWS_AS(Rat(m, 3) * Rat(5, 1), OverflowError);
}

TEST_CASE("parse_decimal handles signs, fractions, and rejects junk") {
  CHECK(Rat::parse_decimal("0.75") == Rat(3, 4));
  CHECK(Rat::parse_decimal("-0.3") == Rat(-3, 10));
  CHECK(Rat::parse_decimal("+1.5") == Rat(3, 2));
  CHECK(Rat::parse_decimal("42") == Rat(42, 1));
  CHECK(Rat::parse_decimal("0.000000001") == Rat(1, 1'000'000'000));
  CHECK_THROWS_AS(Rat::parse_decimal(""), OverflowError);
  CHECK_THROWS_AS(Rat::parse_decimal("1.2.3"), OverflowError);
  CHECK_THROWS_AS(Rat::parse_decimal("abc"), OverflowError);
  CHECK_THROWS_AS(Rat::parse_decimal("1e5"), OverflowError);
}

TEST_CASE("to_string emits exact decimals for 2^a 5^b denominators") {
  CHECK(Rat(1, 2).to_string() == "0.5");
  CHECK(Rat(3, 4).to_string() == "0.75");
  CHECK(Rat(-3, 10).to_string() == "-0.3");
  CHECK(Rat(7, 1).to_string() == "7");
  CHECK(Rat(1, 3).to_string() == "1/3");
  CHECK(Rat(9, 20).to_string() == "0.45");
  CHECK(Rat(1, 1'000'000'000).to_string() == "0.000000001");
}

TEST_CASE("parse_decimal(to_string()) round-trips decimal values") {
  for (int num = -25; num <= 25; ++num) {
    for (std::int64_t den : {1, 2, 4, 5, 8, 10, 20, 100, 1000}) {
      Rat r(num, den);
      CHECK(Rat::parse_decimal(r.to_string()) == r);
    }
  }
}

TEST_CASE("quantize rounds onto the equality grid, half to even") {
  CHECK(quantize(0.45) == Rat(9, 20));
  CHECK(quantize(-0.3) == Rat(-3, 10));
  CHECK(quantize(0.1 + 0.2) == Rat(3, 10));  // repairs binary noise
  // Exact .5 cases on a coarse grid: ties go to the even integer.
  CHECK(quantize(0.25, 10) == Rat(2, 10));   // 2.5 -> 2
  CHECK(quantize(0.75, 10) == Rat(8, 10));   // 7.5 -> 8
  CHECK(quantize(-0.25, 10) == Rat(-2, 10)); // -2.5 -> -2
  CHECK_THROWS_AS(quantize(std::numeric_limits<double>::infinity()),
                  OverflowError);
  CHECK_THROWS_AS(quantize(1e12), OverflowError);
}

TEST_CASE("grid_den_for_step inverts decimal steps") {
  CHECK(grid_den_for_step(0.01) == 100);
  CHECK(grid_den_for_step(0.05) == 20);
  CHECK(grid_den_for_step(1.0) == 1);
  CHECK_THROWS_AS(grid_den_for_step(0.0), OutOfRange);
  CHECK_THROWS_AS(grid_den_for_step(-0.1), OutOfRange);
}

TEST_CASE("big rational bridge") {
  BigRat w = BigRat(1) / 3 + BigRat(1) / 6;
  CHECK(Rat::from_big(w) == Rat(1, 2));
  BigRat wide("123456789123456789123456789/2");
  CHECK_THROWS_AS(Rat::from_big(wide), OverflowError);
}

}  // TEST_SUITE
