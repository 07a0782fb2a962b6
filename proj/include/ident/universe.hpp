#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ident/relation.hpp"
#include "ident/value.hpp"

namespace ident {

// Assumption-satisfaction tolerance: constraints over gridded reals cannot be
// compared to zero exactly.
inline constexpr double kDefaultEps = 1e-9;

// Per-unit observed record of a finite population. y_star is empty exactly
// where the outcome is unobserved; the Missing sentinel surfaces in the
// observation value, never a magic number.
struct ObservedUnit {
  std::optional<double> y_star;
  int z = 0;
};

enum class PopulationKind {
  missing_outcomes,    // one outcome per unit, observed iff z = 1
  potential_outcomes,  // two potential outcomes; the one under z is observed
};

// Full outcome tables of one finite-population state. For missing_outcomes
// only y1 is used (the single outcome vector).
struct PopulationTables {
  std::vector<double> y1;
  std::vector<double> y0;
  std::vector<int> z;
};

// One element of a statistical universe. Grid, simplex and polytope states
// carry a flat parameter/probability vector; population states carry tables.
class State {
 public:
  explicit State(std::vector<double> params) : payload_(std::move(params)) {}
  explicit State(PopulationTables tables) : payload_(std::move(tables)) {}

  bool has_params() const { return payload_.index() == 0; }
  const std::vector<double>& params() const { return std::get<0>(payload_); }
  const PopulationTables& tables() const { return std::get<1>(payload_); }

 private:
  std::variant<std::vector<double>, PopulationTables> payload_;
};

// A real-valued constraint over states, satisfied where it vanishes (within
// the universe tolerance). The optional linear form carries the same
// constraint as linear (in)equalities over cell probabilities so polytope
// universes can absorb it into their constraint system.
class Assumption {
 public:
  using Fn = std::function<double(const State&)>;

  struct LinearConstraint {
    std::vector<Rat> coeffs;
    Rat rhs;
    enum class Cmp { eq, le } cmp = Cmp::eq;
  };

  Assumption(std::string name, Fn constraint)
      : name_(std::move(name)), constraint_(std::move(constraint)) {}
  Assumption(std::string name, Fn constraint, std::vector<LinearConstraint> linear)
      : name_(std::move(name)),
        constraint_(std::move(constraint)),
        linear_(std::move(linear)) {}

  static Assumption always_true(std::string name = "true") {
    return Assumption(std::move(name), [](const State&) { return 0.0; },
                      std::vector<LinearConstraint>{});
  }

  const std::string& name() const { return name_; }
  double evaluate(const State& s) const { return constraint_(s); }
  bool satisfied(const State& s, double eps) const {
    double v = constraint_(s);
    return v < eps && v > -eps;
  }
  bool has_linear_form() const { return linear_.has_value(); }
  const std::vector<LinearConstraint>& linear_form() const { return *linear_; }

 private:
  std::string name_;
  Fn constraint_;
  std::optional<std::vector<LinearConstraint>> linear_;
};

// Ratio of linear functionals over cell probabilities (denominator absent
// means 1). Probabilities and expectations are linear in p; conditional
// versions are ratios whose constraint form at a fixed observed value is
// linear again.
struct RatioFunctional {
  std::vector<Rat> num;
  std::optional<std::vector<Rat>> den;

  // NaN when the denominator vanishes (conditioning on a null event).
  double eval(const std::vector<double>& p) const;
};

// Distribution-universe structure shared by the LP route and the gridded
// enumeration route: cell count, observation/estimand functionals, and extra
// linear constraints accumulated from assumptions.
struct PolytopeSpec {
  std::size_t cells = 0;
  std::vector<RatioFunctional> observations;
  std::optional<RatioFunctional> estimand;
  std::vector<Assumption::LinearConstraint> constraints;
};

struct GridDim {
  double lo = 0;
  double hi = 0;
  double step = 1;
};

// An enumerable or extremizable statistical universe with attached estimand
// and observation mappings. Immutable; restriction returns a new universe.
class Universe {
 public:
  enum class Kind { explicit_list, grid, simplex_grid, population, polytope };

  using Map = std::function<Value(const State&)>;
  using Generator = std::function<State(std::uint64_t)>;

  static Universe explicit_states(std::vector<State> states, Map estimand,
                                  Map observation);
  // Lexicographic box enumeration; count is the product of per-dimension
  // sizes. step > 0 and lo <= hi per dimension.
  static Universe grid(std::vector<GridDim> dims, Map estimand, Map observation);
  // Arbitrary flat-indexed family (reported as Kind::grid).
  static Universe indexed(std::uint64_t count, Generator gen, Map estimand,
                          Map observation);
  // Distribution universe over joint-support cells. grid_den > 0 makes it an
  // enumerable simplex grid (probabilities in multiples of 1/grid_den);
  // grid_den == 0 is the LP-only polytope.
  static Universe distribution(PolytopeSpec spec, std::int64_t grid_den,
                               Map estimand, Map observation);
  // States complete the unobserved cells with alphabet values and agree with
  // the observed cells; the observation mapping reproduces the observed data
  // exactly. Default estimand: mean outcome (missing_outcomes) or mean
  // treated-minus-control difference (potential_outcomes).
  static Universe finite_population(PopulationKind kind,
                                    std::vector<double> alphabet,
                                    std::vector<ObservedUnit> observed);

  Kind kind() const { return kind_; }
  bool enumerable() const { return kind_ != Kind::polytope; }

  // Raw state count before assumption filtering. Throws NotEnumerable.
  std::uint64_t state_count() const;

  // Enumerates states satisfying every attached assumption, in deterministic
  // lexicographic order. Throws EnumerationOverflow if the raw count exceeds
  // the cap, NotEnumerable for polytopes.
  void for_each_state(const std::function<void(const State&)>& fn,
                      std::uint64_t cap = kDefaultEnumerationCap) const;

  // Partitioned scan; fn must be safe to call concurrently from distinct
  // workers and downstream merges must be order-independent.
  void for_each_state_parallel(
      const std::function<void(const State&, int worker)>& fn,
      std::uint64_t cap = kDefaultEnumerationCap) const;

  Value estimand(const State& s) const { return estimand_(s); }
  Value observation(const State& s) const { return observation_(s); }

  // Same universe with a different estimand mapping.
  Universe with_estimand(Map estimand) const;

  // Universe of states additionally satisfying a. Enumerable universes are
  // checked for at least one survivor (EmptyUniverse otherwise); polytopes
  // absorb the assumption's linear form into their constraints.
  Universe restrict(const Assumption& a) const;

  const std::vector<Assumption>& assumptions() const { return assumptions_; }

  ValueSet observation_image(std::uint64_t cap = kDefaultEnumerationCap) const;
  ValueSet estimand_image(std::uint64_t cap = kDefaultEnumerationCap) const;

  bool has_polytope_spec() const { return lp_.has_value(); }
  const PolytopeSpec& polytope_spec() const;

  double eps() const { return eps_; }
  Universe with_eps(double eps) const;

 private:
  Universe() = default;

  bool passes_assumptions(const State& s) const;

  Kind kind_ = Kind::explicit_list;
  std::uint64_t count_ = 0;
  Generator gen_;
  Map estimand_;
  Map observation_;
  std::vector<Assumption> assumptions_;
  std::optional<PolytopeSpec> lp_;
  double eps_ = kDefaultEps;
};

// Deterministic unranking of the i-th weak composition of total into parts
// (lexicographic). Exposed for the simplex-grid enumerator and its tests.
std::vector<std::int64_t> unrank_composition(std::uint64_t index, std::int64_t total,
                                             std::size_t parts);
std::uint64_t count_compositions(std::int64_t total, std::size_t parts,
                                 std::uint64_t saturate_at);

}  // namespace ident
