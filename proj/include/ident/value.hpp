#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ident/rational.hpp"

namespace ident {

// An element of an estimand or observation space. Values are immutable and
// carry a canonical byte key built at construction; two Values compare equal
// iff their keys are byte-identical. Scalars are exact rationals; reals enter
// through quantize() so that equality over gridded universes is decidable.
//
// Payload kinds:
//   scalar   exact rational (quantized reals land here too)
//   tuple    ordered sequence of Values
//   labeled  finite map label -> Value, keyed with labels sorted
//   missing  dedicated sentinel for unobserved cells in observed data
class Value {
 public:
  enum class Kind : std::uint8_t { scalar, tuple, labeled, missing };

  Value() : Value(scalar(Rat())) {}

  static Value scalar(Rat r);
  static Value real(double x, std::int64_t grid_den = kDefaultGridDen);
  static Value integer(std::int64_t n) { return scalar(Rat::of_int(n)); }
  static Value tuple(std::vector<Value> elems);
  static Value labeled(std::vector<std::pair<std::string, Value>> entries);
  static Value missing();

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::scalar; }
  bool is_missing() const { return kind_ == Kind::missing; }

  const Rat& as_rat() const;
  double as_double() const { return as_rat().to_double(); }
  const std::vector<Value>& elements() const;
  const std::vector<std::pair<std::string, Value>>& entries() const;

  // Canonical byte encoding; equality and hashing key.
  const std::string& key() const { return key_; }

  std::string to_string() const;

  bool operator==(const Value& o) const { return key_ == o.key_; }
  bool operator!=(const Value& o) const { return key_ != o.key_; }

 private:
  struct Node;
  Value(Kind k, std::string key, std::shared_ptr<const Node> node)
      : kind_(k), key_(std::move(key)), node_(std::move(node)) {}

  Kind kind_;
  std::string key_;
  std::shared_ptr<const Node> node_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const {
    return std::hash<std::string_view>()(v.key());
  }
};

using ValueSet = std::unordered_set<Value, ValueHash>;

template <typename T>
using ValueMap = std::unordered_map<Value, T, ValueHash>;

// Total order on values: scalars numerically, then tuples (lexicographic),
// then labeled records (by entry pairs), then missing.
bool value_less(const Value& a, const Value& b);

// Elements of a ValueSet in value_less order; deterministic regardless of
// insertion or partitioning order.
std::vector<Value> sorted(const ValueSet& set);

bool set_equal(const ValueSet& a, const ValueSet& b);
bool is_subset(const ValueSet& sub, const ValueSet& super);

}  // namespace ident
