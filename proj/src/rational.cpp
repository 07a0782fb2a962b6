#include "ident/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace ident {

namespace {

using I128 = __int128;

std::int64_t checked_narrow(I128 v, const char* ctx) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw OverflowError(std::string("rational overflow in ") + ctx);
  }
  return static_cast<std::int64_t>(v);
}

I128 gcd128(I128 a, I128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rat make_normalized(I128 num, I128 den, const char* ctx) {
  if (den == 0) throw OverflowError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  I128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rat(checked_narrow(num, ctx), checked_narrow(den, ctx));
}

}  // namespace

Rat::Rat(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw OverflowError("rational with zero denominator");
  if (den_ < 0) {
    num_ = checked_narrow(-I128(num_), "negate");
    den_ = checked_narrow(-I128(den_), "negate");
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rat Rat::parse_decimal(const std::string& text) {
  if (text.empty()) throw OverflowError("empty numeric literal");
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  I128 mantissa = 0;
  I128 den = 1;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw OverflowError("malformed numeric literal: " + text);
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw OverflowError("malformed numeric literal: " + text);
    }
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (mantissa > I128(std::numeric_limits<std::int64_t>::max()) * 2 ||
        den > I128(std::numeric_limits<std::int64_t>::max())) {
      throw OverflowError("numeric literal too wide: " + text);
    }
  }
  if (!seen_digit) throw OverflowError("malformed numeric literal: " + text);
  if (neg) mantissa = -mantissa;
  return make_normalized(mantissa, den, "parse_decimal");
}

Rat Rat::from_big(const BigRat& r) {
  const auto& num = boost::multiprecision::numerator(r);
  const auto& den = boost::multiprecision::denominator(r);
  if (num > std::numeric_limits<std::int64_t>::max() ||
      num < std::numeric_limits<std::int64_t>::min() ||
      den > std::numeric_limits<std::int64_t>::max()) {
    throw OverflowError("exact LP value too wide for 64-bit rational");
  }
  return Rat(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Rat Rat::operator+(const Rat& o) const {
  return make_normalized(I128(num_) * o.den_ + I128(o.num_) * den_,
                         I128(den_) * o.den_, "add");
}

Rat Rat::operator-(const Rat& o) const {
  return make_normalized(I128(num_) * o.den_ - I128(o.num_) * den_,
                         I128(den_) * o.den_, "sub");
}

Rat Rat::operator*(const Rat& o) const {
  return make_normalized(I128(num_) * o.num_, I128(den_) * o.den_, "mul");
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw OverflowError("rational division by zero");
  return make_normalized(I128(num_) * o.den_, I128(den_) * o.num_, "div");
}

bool Rat::operator<(const Rat& o) const {
  return I128(num_) * o.den_ < I128(o.num_) * den_;
}

std::string Rat::to_string() const {
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  // Scale to a power of ten: digits = max(twos, fives).
  int digits = twos > fives ? twos : fives;
  I128 scaled = I128(num_);
  for (int k = 0; k < digits - fives; ++k) scaled *= 5;
  for (int k = 0; k < digits - twos; ++k) scaled *= 2;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string raw;
  if (scaled == 0) raw = "0";
  while (scaled > 0) {
    raw.insert(raw.begin(), static_cast<char>('0' + int(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(raw.size()) <= digits) raw.insert(raw.begin(), '0');
  std::string out = neg ? "-" : "";
  if (digits == 0) {
    out += raw;
  } else {
    out += raw.substr(0, raw.size() - digits) + "." + raw.substr(raw.size() - digits);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.to_string();
}

Rat quantize(double x, std::int64_t grid_den) {
  if (!std::isfinite(x)) throw OverflowError("cannot quantize non-finite value");
  double scaled = x * static_cast<double>(grid_den);
  if (std::abs(scaled) > 9.0e18) throw OverflowError("value too large to quantize");
  // nearbyint under the default rounding mode is round half to even.
  double q = std::nearbyint(scaled);
  return Rat(static_cast<std::int64_t>(q), grid_den);
}

std::int64_t grid_den_for_step(double step) {
  if (!(step > 0) || step > 1.0) throw OutOfRange("equality step must be in (0, 1]");
  double d = std::nearbyint(1.0 / step);
  if (d < 1) d = 1;
  if (d > 9.0e17) throw OutOfRange("equality step too small");
  return static_cast<std::int64_t>(d);
}

}  // namespace ident
