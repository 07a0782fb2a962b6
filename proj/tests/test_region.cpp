#include "doctest.h"

#include <optional>
#include <utility>
#include <vector>

#include "ident/case_studies.hpp"
#include "ident/errors.hpp"
#include "ident/joint.hpp"
#include "ident/region.hpp"
#include "ident/universe.hpp"

using namespace ident;

namespace {

// States (a, b, g) on the half grid; estimand is the mean among the missing,
// undefined (Missing) when nothing is missing.
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

Value obs_point(double p_z1, double e_y_z1) {
  return Value::tuple({Value::real(p_z1), Value::real(e_y_z1)});
}

CertifiedValue certified(double v, const std::string& note) {
  return CertifiedValue{Value::real(v), Certificate{"observation-functional", note}};
}

}  // namespace

TEST_SUITE("region") {

TEST_CASE("explicit regions keep canonical numeric order") {
  Region r = Region::explicit_set(
      {Value::real(0.7), Value::real(0.45), Value::real(0.5)});
  REQUIRE(r.values().size() == 3);
  CHECK(r.values()[0] == Value::real(0.45));
  CHECK(r.values()[1] == Value::real(0.5));
  CHECK(r.values()[2] == Value::real(0.7));
  CHECK(r.contains_value(Value::real(0.45)));
  CHECK(r.contains_value(Value::real(0.7)));
  CHECK_FALSE(r.contains_value(Value::real(0.6)));
  CHECK_FALSE(r.is_singleton());
  CHECK_THROWS_AS(Region::explicit_set({}), ValidationError);
  CHECK_THROWS_AS(r.lo(), ValidationError);
}

TEST_CASE("interval regions expose endpoints and membership") {
  Region r = Region::interval(Rat(9, 20), Rat(7, 10));
  CHECK(r.lo() == Rat(9, 20));
  CHECK(r.hi() == Rat(7, 10));
  CHECK(r.contains_value(Value::real(0.45)));
  CHECK(r.contains_value(Value::real(0.6)));
  CHECK_FALSE(r.contains_value(Value::real(0.71)));
  CHECK_FALSE(r.contains_value(Value::missing()));
  CHECK_FALSE(r.is_singleton());
  CHECK(Region::interval(Rat(1, 2), Rat(1, 2)).is_singleton());
  CHECK_THROWS_AS(Region::interval(Rat(1, 1), Rat(0, 1)), ValidationError);
  CHECK_THROWS_AS(r.values(), ValidationError);
}

TEST_CASE("region equality is insertion-order free and kind-bridging") {
  Region a = Region::explicit_set({Value::real(0.1), Value::real(0.2)});
  Region b = Region::explicit_set({Value::real(0.2), Value::real(0.1)});
  CHECK(region_equal(a, b));
  CHECK_FALSE(region_equal(a, Region::explicit_set({Value::real(0.1)})));
  CHECK(region_equal(Region::interval(Rat(1, 4), Rat(3, 4)),
                     Region::interval(Rat(1, 4), Rat(3, 4))));
  // A one-point interval equals the singleton of its endpoint.
  CHECK(region_equal(Region::interval(Rat(2, 5), Rat(2, 5)),
                     Region::singleton(Value::real(0.4))));
  CHECK_FALSE(region_equal(Region::interval(Rat(0, 1), Rat(1, 1)), a));
}

TEST_CASE("containment covers the meaningful kind combinations") {
  Region set = Region::explicit_set({Value::real(0.45), Value::real(0.7)});
  Region itv = Region::interval(Rat(9, 20), Rat(7, 10));
  CHECK(region_contains(itv, set));
  CHECK(region_contains(itv, Region::interval(Rat(1, 2), Rat(3, 5))));
  CHECK(region_contains(set, Region::singleton(Value::real(0.45))));
  CHECK_FALSE(region_contains(set, Region::singleton(Value::real(0.5))));
  CHECK_FALSE(region_contains(Region::interval(Rat(0, 1), Rat(1, 2)), set));
  CHECK_THROWS_AS(region_contains(set, itv), ValidationError);
}

TEST_CASE("enumerated regions match pointwise identifiability") {
  Universe u = abg_universe();
  Value l_mid = Value::tuple({Value::real(0.5), Value::real(0.5)});
  Region mid = region_enumerate(u, l_mid);
  CHECK(region_equal(mid, Region::explicit_set({Value::real(0.0), Value::real(0.5),
                                                Value::real(1.0)})));
  CHECK_FALSE(mid.is_singleton());
  // The estimand image includes the Missing sentinel (from fully observed
  // states), so this region does not exhaust it.
  CHECK_FALSE(mid.strong());

  Value l_full = Value::tuple({Value::real(0.5), Value::real(1.0)});
  Region full = region_enumerate(u, l_full);
  CHECK(full.is_singleton());
  CHECK(full.values()[0] == Value::missing());

  CHECK_THROWS_AS(
      region_enumerate(u, Value::tuple({Value::real(0.3), Value::real(0.5)})),
      UnreachableObservation);
}

TEST_CASE("a constant estimand is never flagged strong") {
  Universe u = Universe::grid({{0.0, 1.0, 0.5}},
                              [](const State&) { return Value::integer(7); },
                              [](const State& s) { return Value::real(s.params()[0]); });
  Region r = region_enumerate(u, Value::real(0.5));
  CHECK(r.is_singleton());
  CHECK_FALSE(r.strong());
  CHECK_FALSE(is_strongly_nonidentifiable(u));
}

TEST_CASE("mean among the unexposed is strongly non-identifiable") {
  // Parametrize the unexposed mean directly: no observation constrains it.
  Universe u = missing_data_param_universe(0.0, 1.0, 0.5, 0.5).with_estimand(
      [](const State& s) { return Value::real(s.params()[1]); });
  CHECK(is_strongly_nonidentifiable(u));
  // The overall mean, by contrast, is pinned at g = 1.
  CHECK_FALSE(is_strongly_nonidentifiable(missing_data_param_universe(0.0, 1.0,
                                                                      0.5, 0.5)));
}

TEST_CASE("compositions demand certificates on every input") {
  auto sum = [](const std::vector<Value>& args) {
    Rat total;
    for (const auto& v : args) total = total + v.as_rat();
    return Value::scalar(total);
  };
  CertifiedValue ok = compose_identifiable(
      {certified(0.45, "t2 t1"), certified(0.25, "1 - t1")}, sum, "sum");
  CHECK(ok.value == Value::real(0.7));
  CHECK(ok.certificate.proposition == "composition");
  CHECK(ok.certificate.note == "sum");

  CHECK_THROWS_AS(compose_identifiable({certified(0.45, "t2 t1"),
                                        AnalysisValue(Value::real(0.25))},
                                       sum, "sum"),
                  UncertifiedInput);
}

TEST_CASE("reduced forms materialize by endpoint evaluation") {
  // theta = t2 t1 + y (1 - t1) with y free in [0, 1] at (t1, t2) =
  // (0.75, 0.6): identified part 0.45, slope 0.25.
  Combiner comb{"t2 t1 + y (1 - t1)",
                [](const std::vector<Rat>& parts, const Rat& y) {
                  return parts[0] + y * parts[1];
                },
                Monotone::increasing};
  Region reduced = reduced_form({{"t2 t1", certified(0.45, "observed product")},
                                 {"1 - t1", certified(0.25, "observed share")}},
                                Region::interval(Rat(0, 1), Rat(1, 1)), comb);
  CHECK(reduced.kind() == Region::Kind::reduced_form);
  CHECK_FALSE(reduced.is_singleton());
  Region m = materialize(reduced);
  CHECK(region_equal(m, Region::interval(Rat(9, 20), Rat(7, 10))));

  // Declared decreasing monotonicity swaps the endpoints.
  Combiner dec{"-y", [](const std::vector<Rat>&, const Rat& y) { return -y; },
               Monotone::decreasing};
  CHECK(region_equal(materialize(reduced_form({}, Region::interval(Rat(0, 1), Rat(1, 1)),
                                              dec)),
                     Region::interval(Rat(-1, 1), Rat(0, 1))));

  // A point interval needs no monotonicity declaration.
  Combiner point{"y", [](const std::vector<Rat>&, const Rat& y) { return y; },
                 Monotone::unknown};
  CHECK(materialize(reduced_form({}, Region::interval(Rat(1, 2), Rat(1, 2)), point))
            .is_singleton());
  CHECK_THROWS_AS(
      materialize(reduced_form({}, Region::interval(Rat(0, 1), Rat(1, 1)), point)),
      NonMonotoneCombiner);

  // Explicit free regions map through the combiner value by value.
  Region mapped = materialize(reduced_form(
      {{"t2 t1", certified(0.45, "observed product")},
       {"1 - t1", certified(0.25, "observed share")}},
      Region::explicit_set({Value::real(0.0), Value::real(0.5), Value::real(1.0)}),
      comb));
  CHECK(region_equal(mapped,
                     Region::explicit_set({Value::real(0.45), Value::real(0.575),
                                           Value::real(0.7)})));
}

TEST_CASE("reduced form agrees with brute-force enumeration") {
  // Missing-outcome universe on the 1/20 simplex at (P(Z=1), E[Y|Z=1]) =
  // (0.75, 0.6). Free component: the mean among the unexposed.
  JointLayout lay = missing_data_layout({0.0, 1.0});
  std::vector<RatioFunctional> obs = {lay.prob(1, 1.0), lay.expect(0, {{1, 1.0}})};
  Universe full = lay.make_universe(obs, lay.expect(0), 20);
  Universe free_u = lay.make_universe(obs, lay.expect(0, {{1, 0.0}}), 20);
  Value l0 = obs_point(0.75, 0.6);

  Region by_enumeration = region_enumerate(full, l0);
  Region free = region_enumerate(free_u, l0);
  Combiner comb{"t2 t1 + y (1 - t1)",
                [](const std::vector<Rat>& parts, const Rat& y) {
                  return parts[0] + y * parts[1];
                },
                Monotone::increasing};
  Region via_reduction = materialize(
      reduced_form({{"t2 t1", certified(0.45, "observed product")},
                    {"1 - t1", certified(0.25, "observed share")}},
                   free, comb));
  CHECK(region_equal(by_enumeration, via_reduction));
}

TEST_CASE("the LP route brackets enumeration exactly on the simplex grid") {
  Universe u = missing_data_universe({0.0, 1.0}, 20);
  Value l0 = obs_point(0.75, 0.6);

  Region enumerated = region_enumerate(u, l0);
  LpRegionResult lp = region_lp(u, l0);
  CHECK(lp.exact);
  CHECK(lp.eps == 0.0);
  CHECK(region_equal(lp.region, Region::interval(Rat(9, 20), Rat(7, 10))));
  CHECK(region_contains(lp.region, enumerated));
  // The grid attains both endpoints, so min/max agree exactly.
  CHECK(enumerated.values().front() == Value::real(0.45));
  CHECK(enumerated.values().back() == Value::real(0.7));

  auto [lo, hi] = region_lp_extremes(u, l0);
  CHECK(lo == BigRat(9) / 20);
  CHECK(hi == BigRat(7) / 10);
}

TEST_CASE("restriction can only shrink regions") {
  JointLayout lay = missing_data_layout({-1.0, 0.0, 1.0});
  std::vector<RatioFunctional> obs = {lay.prob(1, 1.0), lay.expect(0, {{1, 1.0}})};
  Universe u = lay.make_universe(obs, lay.expect(0), 6);
  Value l0 = obs_point(0.5, 1.0);
  Region before = region_enumerate(u, l0);
  Region after = region_enumerate(u.restrict(lay.bounded(0, 0.0, 1.0)), l0);
  CHECK(region_contains(before, after));
  CHECK(before.values().size() > after.values().size());
}

TEST_CASE("refutability on enumerable universes is an exact image question") {
  JointLayout lay = missing_data_layout({-1.0, 0.0, 1.0});
  std::vector<RatioFunctional> obs = {lay.prob(1, 1.0), lay.expect(0, {{1, 1.0}})};
  Universe u = lay.make_universe(obs, lay.expect(0), 6);
  Assumption bounded = lay.bounded(0, 0.0, 1.0);

  // Shrinks the observation image: a-priori refutable.
  RefutabilityVerdict ok = refutability(u, bounded, obs_point(0.5, 1.0));
  CHECK(ok.a_priori_refutable);
  REQUIRE(ok.refuted_at_l0.has_value());
  CHECK_FALSE(*ok.refuted_at_l0);

  // A mean of -1 among the exposed needs mass below the bound.
  RefutabilityVerdict bad = refutability(u, bounded, obs_point(0.5, -1.0));
  CHECK(bad.a_priori_refutable);
  REQUIRE(bad.refuted_at_l0.has_value());
  CHECK(*bad.refuted_at_l0);

  // Assumptions that never bind are irrefutable.
  RefutabilityVerdict idle =
      refutability(u, lay.bounded(0, -1.0, 1.0), obs_point(0.5, 1.0));
  CHECK_FALSE(idle.a_priori_refutable);
  CHECK_FALSE(*idle.refuted_at_l0);

  CHECK_THROWS_AS(refutability(u, bounded, obs_point(0.5, 0.123)),
                  UnreachableObservation);
}

TEST_CASE("refutability on polytopes uses feasibility programs at the point") {
  JointLayout lay = missing_data_layout({-1.0, 0.0, 1.0});
  std::vector<RatioFunctional> obs = {lay.prob(1, 1.0), lay.expect(0, {{1, 1.0}})};
  Universe u = lay.make_universe(obs, lay.expect(0), 0);
  Assumption bounded = lay.bounded(0, 0.0, 1.0);

  RefutabilityVerdict ok = refutability(u, bounded, obs_point(0.5, 1.0));
  REQUIRE(ok.refuted_at_l0.has_value());
  CHECK_FALSE(*ok.refuted_at_l0);
  CHECK(ok.a_priori_refutable);

  RefutabilityVerdict bad = refutability(u, bounded, obs_point(0.5, -1.0));
  REQUIRE(bad.refuted_at_l0.has_value());
  CHECK(*bad.refuted_at_l0);
  CHECK(bad.a_priori_refutable);

  // Only linearizable assumptions can be classified without enumeration.
  CHECK_THROWS_AS(refutability(u, lay.independent(0, 1), obs_point(0.5, 1.0)),
                  ValidationError);
}

}  // TEST_SUITE
