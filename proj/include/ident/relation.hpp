#pragma once

#include <cstdint>
#include <vector>

#include "ident/value.hpp"

namespace ident {

class Universe;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// The four structural properties of a finite binary relation, each computed
// by its defining quantifier over the carrier spaces.
struct PropertyReport {
  bool injective = false;
  bool surjective = false;
  bool functional = false;
  bool left_total = false;
};

// A finite binary relation between an estimand space and an observation
// space. Immutable after construction and safe for concurrent reads. Pairs
// are a set under canonical value keys; a secondary index from observation to
// its related estimand values is built up front, since preimage queries are
// the hot operation.
class BinaryRelation {
 public:
  class Builder {
   public:
    Builder& add_theta(const Value& v);
    Builder& add_lambda(const Value& v);
    Builder& add_pair(const Value& theta, const Value& lambda);  // extends spaces
    BinaryRelation build();

   private:
    friend class BinaryRelation;
    ValueSet theta_;
    ValueSet lambda_;
    ValueMap<ValueSet> by_lambda_;
    ValueMap<ValueSet> by_theta_;
    std::uint64_t pair_count_ = 0;
  };

  const ValueSet& theta_space() const { return theta_; }
  const ValueSet& lambda_space() const { return lambda_; }
  std::uint64_t pair_count() const { return pair_count_; }

  bool related(const Value& theta, const Value& lambda) const;

  // Estimand values related to l0. Throws UnreachableObservation if l0 is not
  // a member of the observation space.
  const ValueSet& preimage(const Value& l0) const;

  // Observation values related to theta (empty set if none).
  const ValueSet& image_of(const Value& theta) const;

  PropertyReport check_properties() const;

  // True iff exactly one estimand value is related to l0.
  bool identifiable_at(const Value& l0) const;

  // True iff identifiable at every observation; equal to injectivity.
  bool identifiable_everywhere() const;

 private:
  BinaryRelation() = default;
  ValueSet theta_;
  ValueSet lambda_;
  ValueMap<ValueSet> by_lambda_;
  ValueMap<ValueSet> by_theta_;
  std::uint64_t pair_count_ = 0;
};

// The relation {(estimand(S), observation(S)) : S in u} with the carrier
// spaces set to the mapping images. Always surjective and left-total by
// construction. Throws EnumerationOverflow past the cap.
BinaryRelation induce(const Universe& u, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace ident
