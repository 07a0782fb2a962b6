#include "ident/relation.hpp"

#include <utility>
#include <vector>

#include "ident/errors.hpp"
#include "ident/parallel.hpp"
#include "ident/universe.hpp"

namespace ident {

BinaryRelation::Builder& BinaryRelation::Builder::add_theta(const Value& v) {
  theta_.insert(v);
  return *this;
}

BinaryRelation::Builder& BinaryRelation::Builder::add_lambda(const Value& v) {
  lambda_.insert(v);
  return *this;
}

BinaryRelation::Builder& BinaryRelation::Builder::add_pair(const Value& theta,
                                                           const Value& lambda) {
  theta_.insert(theta);
  lambda_.insert(lambda);
  if (by_lambda_[lambda].insert(theta).second) {
    by_theta_[theta].insert(lambda);
    ++pair_count_;
  }
  return *this;
}

BinaryRelation BinaryRelation::Builder::build() {
  BinaryRelation r;
  r.theta_ = std::move(theta_);
  r.lambda_ = std::move(lambda_);
  r.by_lambda_ = std::move(by_lambda_);
  r.by_theta_ = std::move(by_theta_);
  r.pair_count_ = pair_count_;
  return r;
}

bool BinaryRelation::related(const Value& theta, const Value& lambda) const {
  auto it = by_lambda_.find(lambda);
  return it != by_lambda_.end() && it->second.count(theta) > 0;
}

const ValueSet& BinaryRelation::preimage(const Value& l0) const {
  if (lambda_.count(l0) == 0)
    throw UnreachableObservation("observation " + l0.to_string() +
                                 " is outside the observation space");
  static const ValueSet kEmpty;
  auto it = by_lambda_.find(l0);
  return it == by_lambda_.end() ? kEmpty : it->second;
}

const ValueSet& BinaryRelation::image_of(const Value& theta) const {
  static const ValueSet kEmpty;
  auto it = by_theta_.find(theta);
  return it == by_theta_.end() ? kEmpty : it->second;
}

PropertyReport BinaryRelation::check_properties() const {
  PropertyReport rep;
  // Injective: every observation has at most one related estimand value.
  rep.injective = true;
  for (const auto& [lambda, thetas] : by_lambda_)
    if (thetas.size() > 1) rep.injective = false;
  // Surjective: every observation has at least one related estimand value.
  rep.surjective = true;
  for (const auto& lambda : lambda_) {
    auto it = by_lambda_.find(lambda);
    if (it == by_lambda_.end() || it->second.empty()) rep.surjective = false;
  }
  // Functional: every estimand value relates to at most one observation.
  rep.functional = true;
  for (const auto& [theta, lambdas] : by_theta_)
    if (lambdas.size() > 1) rep.functional = false;
  // Left-total: every estimand value relates to at least one observation.
  rep.left_total = true;
  for (const auto& theta : theta_) {
    auto it = by_theta_.find(theta);
    if (it == by_theta_.end() || it->second.empty()) rep.left_total = false;
  }
  return rep;
}

bool BinaryRelation::identifiable_at(const Value& l0) const {
  return preimage(l0).size() == 1;
}

bool BinaryRelation::identifiable_everywhere() const {
  for (const auto& lambda : lambda_)
    if (!identifiable_at(lambda)) return false;
  return !lambda_.empty();
}

BinaryRelation induce(const Universe& u, std::uint64_t cap) {
  // Dedupe per worker before merging: distinct (theta, lambda) pairs are
  // typically far fewer than states.
  std::vector<ValueMap<ValueSet>> partial(static_cast<std::size_t>(worker_count()));
  u.for_each_state_parallel(
      [&](const State& s, int worker) {
        partial[static_cast<std::size_t>(worker)][u.observation(s)].insert(
            u.estimand(s));
      },
      cap);
  BinaryRelation::Builder b;
  for (const auto& part : partial)
    for (const auto& [lambda, thetas] : part)
      for (const auto& theta : thetas) b.add_pair(theta, lambda);
  return b.build();
}

}  // namespace ident
