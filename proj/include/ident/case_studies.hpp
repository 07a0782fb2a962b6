#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ident/joint.hpp"
#include "ident/rational.hpp"
#include "ident/region.hpp"
#include "ident/universe.hpp"

namespace ident {

// ---------------------------------------------------------------------------
// Worked examples as closed forms, each with a universe builder so the
// brute-force/LP machinery can cross-check the formula.
// ---------------------------------------------------------------------------

// A discrete CDF: sorted support with nondecreasing cumulative values in
// [0, 1] ending at 1.
struct DiscreteCdf {
  std::vector<double> support;
  std::vector<double> cdf;

  void validate() const;  // throws ValidationError
  // F at x (largest support point <= x); x must lie within the support range.
  Rat at(double x) const;  // throws OutOfSupport
  // Point masses, in support order.
  std::vector<Rat> masses() const;
};

// Observed summary of the missing-outcome problem: share observed, mean among
// the observed, and the a-priori outcome bounds.
struct MissingDataPoint {
  double p_z1;
  double e_y_given_z1;
  double lo = 0.0;
  double hi = 1.0;
};

// Observed summary of the treatment/control problem.
struct CausalPoint {
  double p_z1;
  double e_yobs_z1;
  double e_yobs_z0;
  double lo = 0.0;
  double hi = 1.0;
};

// Worst-case interval for E[Y] with missing outcomes and Y in [a, b]:
//   [t2 t1 + a (1 - t1),  t2 t1 + b (1 - t1)].
// Width is (b - a)(1 - t1). t1 = 0 yields [a, b], t1 = 1 the observed point.
Region manski_bounds(const MissingDataPoint& p);  // throws InvalidPoint

// Bounds for the average treatment effect with Y(1), Y(0) in [a, b]:
//   [id + a (1 - t1) - b t1,  id + b (1 - t1) - a t1],
// where id = t2 t1 - t3 (1 - t1) is the identified part. The free component
// contributes E[Y(1)|Z=0](1-t1) - E[Y(0)|Z=1] t1, whose range over
// [a, b] x [a, b] gives the endpoints above; width is (b - a) for every t1,
// including the degenerate assignments t1 in {0, 1}.
Region causal_ate_bounds(const CausalPoint& c);  // throws InvalidPoint

// Under randomization the counterfactual means collapse onto the observed
// ones and the region is the point {t2 - t3}.
Region causal_randomized_region(double e_yobs_z1, double e_yobs_z0);

// Pre-observation envelope of the free component when the assignment
// probability is only known to lie in [t1_lo, t1_hi]: the union of the
// per-t1 free intervals [-t1, 1 - t1]. This is an envelope over possible
// observations, not the region at an observed point — at any observed point
// t1 is identified and the region keeps width (b - a).
Region causal_free_envelope(double t1_lo, double t1_hi);

// Pointwise copula envelopes W(u,v) = max(u+v-1, 0), M(u,v) = min(u,v).
std::pair<Rat, Rat> frechet_bounds(double u, double v);  // throws OutOfRange

// Region of the joint CDF at (x, y) over all joints with the given margins:
// the interval [W(Fx(x), Fy(y)), M(Fx(x), Fy(y))].
Region joint_cdf_region(const DiscreteCdf& fx, const DiscreteCdf& fy, double x,
                        double y);

// LP oracle for joint_cdf_region: contingency-table polytope with the margins
// as the observed point and cumulative mass at (x, y) as the estimand.
struct JointCdfProblem {
  Universe universe;
  Value l0;
};
JointCdfProblem joint_cdf_problem(const DiscreteCdf& fx, const DiscreteCdf& fy,
                                  double x, double y);

// Two-component location mixture on a parameter grid. States are
// (pi, mu1, mu2); the observation is the induced (mean, variance) pair
//   mean = pi mu1 + (1 - pi) mu2,   variance = pi^2 + (1 - pi)^2.
struct MixtureGrid {
  std::vector<double> pi;
  std::vector<double> mu;  // shared support of mu1 and mu2
};
// Estimand defaults to pi (params: [0]=pi, [1]=mu1, [2]=mu2).
Universe mixture_universe(const MixtureGrid& grid);

struct MixtureRegions {
  Region pi;
  Region mu1;
  Region mu2;
};
MixtureRegions mixture_region(const MixtureGrid& grid, double mean, double variance);

// Finite-population regions at the observed data (the observation is shared
// by every completion, so the observed point never needs to be passed in).
// Mean outcome under one-sided missingness:
Region finite_pop_mean_region(const std::vector<double>& alphabet,
                              const std::vector<ObservedUnit>& observed);
// Average treatment effect over completions of the counterfactual cells:
Region finite_pop_ate_region(const std::vector<double>& alphabet,
                             const std::vector<ObservedUnit>& observed);

// Missing-outcome distribution universe over (Y, Z) cells: observation
// (P(Z=1), E[Y|Z=1]), estimand E[Y]. grid_den > 0 enumerates; 0 is the LP
// polytope.
Universe missing_data_universe(const std::vector<double>& support,
                               std::int64_t grid_den);
JointLayout missing_data_layout(const std::vector<double>& support);

// Parametric missing-outcome universe: states (a, b, g) =
// (E[Y|Z=1], E[Y|Z=0], P(Z=1)) with a, b on a step grid over [y_lo, y_hi] and
// g on a step grid over [0, 1]; observation (g, a) with a Missing when g = 0;
// estimand E[Y] = a g + b (1 - g).
Universe missing_data_param_universe(double y_lo, double y_hi, double y_step,
                                     double g_step);

// Treatment/control distribution universe over (Y1, Y0, Z) cells: observation
// (P(Z=1), E[Y1|Z=1], E[Y0|Z=0]), estimand E[Y1 - Y0].
Universe causal_distribution_universe(const std::vector<double>& support,
                                      std::int64_t grid_den);
JointLayout causal_layout(const std::vector<double>& support);

// Parametric binary-outcome treatment/control universe with within-arm
// product structure: states (g, a1, b1, a0, b0) =
// (P(Z=1), P(Y1=1|Z=1), P(Y0=1|Z=1), P(Y1=1|Z=0), P(Y0=1|Z=0)); observation
// (g, a1, b0) with Missing at degenerate g; estimand the treatment effect
// a1 g + a0 (1-g) - b1 g - b0 (1-g). Randomization is exactly representable
// on this grid (match the unobserved arm to the observed one), so its
// image-equality classification is grid-exact.
Universe causal_param_universe(double step);
// Z independent of (Y1, Y0): |a1 - a0| + |b1 - b0| over the parametrization.
Assumption causal_param_randomized();

// Margins-plus-correlation parametric family: states
// (mu_x, sigma_x, mu_y, sigma_y, rho); observation the margin parameters,
// estimand rho. The dependence parameter never reaches the observation, so
// rho is strongly non-identifiable while the margin tuple is identified.
Universe gaussian_copula_universe(const std::vector<double>& mu,
                                  const std::vector<double>& sigma,
                                  const std::vector<double>& rho);

}  // namespace ident
