#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "ident/errors.hpp"

namespace ident {

// Arbitrary-precision rational used inside the simplex solver, where pivot
// chains can grow coefficients past any fixed width.
using BigRat = boost::multiprecision::cpp_rational;

// Exact rational over 64-bit integers. Always normalized: den > 0 and
// gcd(num, den) == 1. Intermediate products run in 128 bits; results that do
// not fit back into 64 bits raise OverflowError. Domain values here come from
// finite grids and observed quantities, so the width is ample in practice.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t num, std::int64_t den);
  static Rat of_int(std::int64_t n) { return Rat(n, 1); }

  // Parses a decimal literal ("-0.625", "3", "1e-3" is not accepted) exactly.
  static Rat parse_decimal(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  BigRat to_big() const { return BigRat(num_, den_); }
  static Rat from_big(const BigRat& r);  // throws OverflowError if too wide

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  Rat operator-() const { return Rat(-num_, den_); }
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;  // throws on division by zero

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this == o || *this < o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  // Exact decimal expansion when the denominator is of the form 2^a 5^b,
  // "num/den" otherwise. parse_decimal(to_string()) round-trips exactly for
  // values produced by parse_decimal.
  std::string to_string() const;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

// Denominator of the canonical equality grid: step 1e-9, round half to even.
inline constexpr std::int64_t kDefaultGridDen = 1'000'000'000;

// Maps a real onto the k/grid_den lattice. Relation membership requires exact
// equality, and gridded universes only produce values within rounding noise
// of lattice points, so nearest-lattice quantization makes equality decidable.
Rat quantize(double x, std::int64_t grid_den = kDefaultGridDen);

// Grid denominator for a given equality step (--eps flag): nearest 1/step.
std::int64_t grid_den_for_step(double step);

}  // namespace ident
