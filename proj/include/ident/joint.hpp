#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ident/rational.hpp"
#include "ident/universe.hpp"

namespace ident {

// Cell layout of a joint distribution over named discrete variables, cells
// indexed in mixed radix with the first variable most significant. The
// standard functionals (expectations, probabilities, their conditional
// versions) and the builtin assumptions are all defined against a layout;
// the DSL front end and the case studies build distribution universes here.
class JointLayout {
 public:
  JointLayout(std::vector<std::string> names,
              std::vector<std::vector<double>> supports);

  std::size_t var_count() const { return supports_.size(); }
  std::size_t cells() const { return cells_; }
  const std::string& name(std::size_t v) const { return names_[v]; }
  const std::vector<double>& support(std::size_t v) const { return supports_[v]; }
  std::size_t var_index(const std::string& name) const;  // throws ValidationError

  std::vector<std::size_t> digits(std::size_t cell) const;
  double coord(std::size_t cell, std::size_t v) const;

  // A conditioning event "variable = support value".
  struct Cond {
    std::size_t var;
    double value;
  };

  RatioFunctional expect(std::size_t v, std::optional<Cond> cond = {}) const;
  RatioFunctional prob(std::size_t v, double value, std::optional<Cond> cond = {}) const;
  RatioFunctional mean_diff(std::size_t a, std::size_t b) const;  // E[a] - E[b]
  // P(v = s) for every support value s, in support order.
  std::vector<RatioFunctional> dist(std::size_t v, std::optional<Cond> cond = {}) const;

  // Mass outside [lo, hi] on variable v; linear, so usable on polytopes.
  Assumption bounded(std::size_t v, double lo, double hi) const;
  // P(v = value) = 1; linear.
  Assumption fixed(std::size_t v, double value) const;
  // Total-variation distance between the joint of (a, b) and the product of
  // their margins; not linear, enumeration only.
  Assumption independent(std::size_t a, std::size_t b) const;
  // Independence of z from all remaining variables jointly (total variation
  // between the full joint and margin-product); enumeration only.
  Assumption randomized(std::size_t z) const;
  // Independence of z linearized at a known z margin (probabilities aligned
  // with z's support). Linear, so the LP route can apply it; coincides with
  // randomized() on states whose z margin equals the pinned one.
  Assumption randomized_at(std::size_t z, std::vector<Rat> z_margin) const;

  // Distribution universe over this layout. grid_den > 0 enumerates the
  // probability simplex in multiples of 1/grid_den; grid_den = 0 builds the
  // LP-only polytope. Observation/estimand values are the functional
  // evaluations (Missing where a conditional functional hits a null event).
  Universe make_universe(std::vector<RatioFunctional> observations,
                         std::optional<RatioFunctional> estimand,
                         std::int64_t grid_den) const;

  // Index of value within v's support; throws OutOfSupport.
  std::size_t support_index(std::size_t v, double value) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> supports_;
  std::vector<Rat> quantized_;  // flattened per-variable supports
  std::vector<std::size_t> offsets_;
  std::size_t cells_ = 1;
};

// Observation value of a distribution state under a functional list: a tuple
// in list order (a bare scalar for a single functional), Missing components
// where a conditional hits a null event.
Value functional_value(const std::vector<RatioFunctional>& fs,
                       const std::vector<double>& p);

}  // namespace ident
