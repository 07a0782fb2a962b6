#include "doctest.h"

#include <cstdint>
#include <vector>

#include "ident/errors.hpp"
#include "ident/relation.hpp"
#include "ident/universe.hpp"

using namespace ident;

namespace {

// theta R lambda iff theta divides lambda.
BinaryRelation divides_relation(const std::vector<int>& thetas,
                                const std::vector<int>& lambdas) {
  BinaryRelation::Builder b;
  for (int t : thetas) b.add_theta(Value::integer(t));
  for (int l : lambdas) b.add_lambda(Value::integer(l));
  for (int t : thetas)
    for (int l : lambdas)
      if (l % t == 0) b.add_pair(Value::integer(t), Value::integer(l));
  return b.build();
}

// The three-parameter missing-outcome state (alpha, beta, gamma) =
// (mean among observed, mean among missing, share observed) on a half-step
// grid. The estimand is the mean among the missing — undefined (Missing)
// when nothing is missing.
Universe abg_universe() {
  std::vector<GridDim> dims(3, GridDim{0.0, 1.0, 0.5});
  auto estimand = [](const State& s) {
    return s.params()[2] >= 1.0 ? Value::missing() : Value::real(s.params()[1]);
  };
  auto observation = [](const State& s) {
    return Value::tuple({Value::real(s.params()[0]), Value::real(s.params()[2])});
  };
  return Universe::grid(dims, estimand, observation);
}

}  // namespace

TEST_SUITE("relation") {

TEST_CASE("divides relation over primes {2,3,5} and 1..10") {
  BinaryRelation r = divides_relation({2, 3, 5}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  PropertyReport p = r.check_properties();
  CHECK_FALSE(p.surjective);  // 1 (and 7) have no divisor in {2,3,5}
  CHECK(p.left_total);
  CHECK_FALSE(p.injective);   // 6 relates to both 2 and 3
  CHECK_FALSE(p.functional);  // 2 relates to 2, 4, 6, 8, 10
}

TEST_CASE("divides relation with all primes up to 10 is surjective onto 2..10") {
  // With the full prime list the textbook claim holds on this finite slice:
  // surjective and left-total, but neither injective nor functional.
  BinaryRelation r = divides_relation({2, 3, 5, 7}, {2, 3, 4, 5, 6, 7, 8, 9, 10});
  PropertyReport p = r.check_properties();
  CHECK(p.surjective);
  CHECK(p.left_total);
  CHECK_FALSE(p.injective);
  CHECK_FALSE(p.functional);
}

TEST_CASE("square relation on a symmetric grid") {
  BinaryRelation::Builder b;
  for (int t : {-2, -1, 0, 1, 2}) b.add_theta(Value::integer(t));
  for (int l : {0, 1, 4}) b.add_lambda(Value::integer(l));
  for (int t : {-2, -1, 0, 1, 2}) b.add_pair(Value::integer(t), Value::integer(t * t));
  BinaryRelation r = b.build();
  PropertyReport p = r.check_properties();
  CHECK_FALSE(p.injective);  // 1 <- {-1, 1}
  CHECK(p.functional);
  CHECK(p.left_total);
  CHECK(p.surjective);
  CHECK_FALSE(r.identifiable_everywhere());
  CHECK(r.identifiable_at(Value::integer(0)));
  CHECK_FALSE(r.identifiable_at(Value::integer(4)));
}

TEST_CASE("empty relation has vacuous universal properties") {
  BinaryRelation::Builder b;
  b.add_theta(Value::integer(1));
  b.add_lambda(Value::integer(2));
  BinaryRelation r = b.build();
  PropertyReport p = r.check_properties();
  CHECK(p.injective);
  CHECK(p.functional);
  CHECK_FALSE(p.surjective);
  CHECK_FALSE(p.left_total);
  CHECK(r.pair_count() == 0);
}

TEST_CASE("builder dedupes pairs and extends spaces") {
  BinaryRelation::Builder b;
  b.add_pair(Value::integer(1), Value::integer(10));
  b.add_pair(Value::integer(1), Value::integer(10));
  b.add_pair(Value::integer(2), Value::integer(20));
  BinaryRelation r = b.build();
  CHECK(r.pair_count() == 2);
  CHECK(r.theta_space().size() == 2);
  CHECK(r.lambda_space().size() == 2);
  CHECK(r.related(Value::integer(1), Value::integer(10)));
  CHECK_FALSE(r.related(Value::integer(1), Value::integer(20)));
  CHECK_THROWS_AS(r.preimage(Value::integer(99)), UnreachableObservation);
}

TEST_CASE("injective parametrization induces a bijection") {
  std::vector<State> states;
  for (double t : {0.2, 0.5, 0.8}) states.push_back(State({t}));
  auto estimand = [](const State& s) { return Value::real(s.params()[0]); };
  auto observation = [](const State& s) {
    return Value::real(2.0 * s.params()[0]);  // distinct P per parameter
  };
  Universe u = Universe::explicit_states(states, estimand, observation);
  BinaryRelation r = induce(u);
  PropertyReport p = r.check_properties();
  CHECK(p.injective);
  CHECK(p.surjective);
  CHECK(p.functional);
  CHECK(p.left_total);
  CHECK(r.identifiable_everywhere());
  for (double t : {0.2, 0.5, 0.8}) {
    CHECK(r.identifiable_at(Value::real(2.0 * t)));
    CHECK(r.preimage(Value::real(2.0 * t)).size() == 1);
  }
}

TEST_CASE("mean-among-missing counter-example on the half grid") {
  Universe u = abg_universe();
  BinaryRelation r = induce(u);
  Value l_mid = Value::tuple({Value::real(0.5), Value::real(0.5)});
  // Both extremes of the missing mean are consistent with the same data.
  CHECK(r.related(Value::real(0.0), l_mid));
  CHECK(r.related(Value::real(1.0), l_mid));
  CHECK_FALSE(r.identifiable_at(l_mid));
  CHECK_FALSE(r.identifiable_everywhere());

  // With nothing missing the estimand is the Missing sentinel everywhere, so
  // the observation pins it down.
  Value l_full = Value::tuple({Value::real(0.5), Value::real(1.0)});
  CHECK(r.identifiable_at(l_full));
  CHECK(*r.preimage(l_full).begin() == Value::missing());

  // At every observation with missing data the preimage is the whole grid of
  // missing-mean values: the data carry no information about it.
  ValueSet beta_grid = {Value::real(0.0), Value::real(0.5), Value::real(1.0)};
  for (double a : {0.0, 0.5, 1.0})
    for (double g : {0.0, 0.5}) {
      Value l0 = Value::tuple({Value::real(a), Value::real(g)});
      CHECK(set_equal(r.preimage(l0), beta_grid));
    }
}

TEST_CASE("induced relations are surjective and left-total") {
  Universe u = abg_universe();
  BinaryRelation r = induce(u);
  PropertyReport p = r.check_properties();
  CHECK(p.surjective);
  CHECK(p.left_total);
}

TEST_CASE("identifiable_everywhere equals injectivity") {
  for (const auto& rel :
       {divides_relation({2, 3, 5}, {2, 3, 4, 5, 6}), divides_relation({2}, {2, 4}),
        divides_relation({3, 7}, {3, 7})}) {
    CHECK(rel.identifiable_everywhere() == rel.check_properties().injective);
  }
}

TEST_CASE("identifiable_at equals singleton preimage at every observation") {
  BinaryRelation r = divides_relation({2, 3, 5}, {2, 3, 4, 5, 6, 7, 8, 9, 10});
  for (int l = 2; l <= 10; ++l) {
    Value v = Value::integer(l);
    if (r.lambda_space().count(v) == 0) continue;
    CHECK(r.identifiable_at(v) == (r.preimage(v).size() == 1));
  }
}

TEST_CASE("induction respects the enumeration cap") {
  Universe u = abg_universe();  // 27 states
  CHECK_THROWS_AS(induce(u, 5), EnumerationOverflow);
  CHECK_NOTHROW(induce(u, 27));
}

TEST_CASE("induction is deterministic under partitioning") {
  Universe u = abg_universe();
  BinaryRelation a = induce(u);
  BinaryRelation b = induce(u);
  CHECK(a.pair_count() == b.pair_count());
  CHECK(set_equal(a.theta_space(), b.theta_space()));
  CHECK(set_equal(a.lambda_space(), b.lambda_space()));
  for (const Value& l : a.lambda_space()) CHECK(set_equal(a.preimage(l), b.preimage(l)));
}

}  // TEST_SUITE
