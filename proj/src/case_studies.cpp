#include "ident/case_studies.hpp"

#include <utility>

#include "ident/errors.hpp"

namespace ident {
namespace {

const Rat kZero = Rat();
const Rat kOne = Rat::of_int(1);

void require_prob(const Rat& p, const char* what) {
  if (p < kZero || kOne < p)
    throw InvalidPoint(std::string(what) + " must lie in [0, 1], got " +
                       p.to_string());
}

}  // namespace

void DiscreteCdf::validate() const {
  if (support.empty() || support.size() != cdf.size())
    throw ValidationError("CDF needs matching nonempty support and values");
  Rat prev_x, prev_f;
  for (std::size_t i = 0; i < support.size(); ++i) {
    Rat x = quantize(support[i]);
    Rat f = quantize(cdf[i]);
    if (i > 0 && !(prev_x < x))
      throw ValidationError("CDF support must be strictly increasing");
    if (f < kZero || kOne < f || (i > 0 && f < prev_f))
      throw ValidationError("CDF values must be nondecreasing within [0, 1]");
    prev_x = x;
    prev_f = f;
  }
  if (prev_f != kOne) throw ValidationError("CDF must end at 1");
}

Rat DiscreteCdf::at(double x) const {
  Rat qx = quantize(x);
  if (qx < quantize(support.front()) || quantize(support.back()) < qx)
    throw OutOfSupport("point " + qx.to_string() + " is outside the support range");
  Rat f;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (quantize(support[i]) <= qx) f = quantize(cdf[i]);
  }
  return f;
}

std::vector<Rat> DiscreteCdf::masses() const {
  std::vector<Rat> m;
  m.reserve(cdf.size());
  Rat prev;
  for (double f : cdf) {
    Rat q = quantize(f);
    m.push_back(q - prev);
    prev = q;
  }
  return m;
}

Region manski_bounds(const MissingDataPoint& p) {
  Rat t1 = quantize(p.p_z1);
  Rat t2 = quantize(p.e_y_given_z1);
  Rat a = quantize(p.lo);
  Rat b = quantize(p.hi);
  require_prob(t1, "P(Z=1)");
  if (b < a) throw InvalidPoint("outcome bounds must satisfy a <= b");
  if (!t1.is_zero() && (t2 < a || b < t2))
    throw InvalidPoint("E[Y|Z=1] must lie within the outcome bounds");
  Rat observed = t2 * t1;
  Rat miss = kOne - t1;
  return Region::interval(observed + a * miss, observed + b * miss);
}

Region causal_ate_bounds(const CausalPoint& c) {
  Rat t1 = quantize(c.p_z1);
  Rat t2 = quantize(c.e_yobs_z1);
  Rat t3 = quantize(c.e_yobs_z0);
  Rat a = quantize(c.lo);
  Rat b = quantize(c.hi);
  require_prob(t1, "P(Z=1)");
  if (b < a) throw InvalidPoint("outcome bounds must satisfy a <= b");
  if (!t1.is_zero() && (t2 < a || b < t2))
    throw InvalidPoint("E[Y*|Z=1] must lie within the outcome bounds");
  if (t1 != kOne && (t3 < a || b < t3))
    throw InvalidPoint("E[Y*|Z=0] must lie within the outcome bounds");
  Rat miss = kOne - t1;
  Rat id = t2 * t1 - t3 * miss;
  return Region::interval(id + a * miss - b * t1, id + b * miss - a * t1);
}

Region causal_randomized_region(double e_yobs_z1, double e_yobs_z0) {
  Rat d = quantize(e_yobs_z1) - quantize(e_yobs_z0);
  return Region::interval(d, d);
}

Region causal_free_envelope(double t1_lo, double t1_hi) {
  Rat lo = quantize(t1_lo);
  Rat hi = quantize(t1_hi);
  require_prob(lo, "assignment probability lower bound");
  require_prob(hi, "assignment probability upper bound");
  if (hi < lo) throw InvalidPoint("assignment probability range must be ordered");
  return Region::interval(-hi, kOne - lo);
}

std::pair<Rat, Rat> frechet_bounds(double u, double v) {
  Rat qu = quantize(u);
  Rat qv = quantize(v);
  if (qu < kZero || kOne < qu || qv < kZero || kOne < qv)
    throw OutOfRange("copula arguments must lie in [0, 1]");
  Rat w = qu + qv - kOne;
  if (w < kZero) w = kZero;
  Rat m = qu < qv ? qu : qv;
  return {w, m};
}

Region joint_cdf_region(const DiscreteCdf& fx, const DiscreteCdf& fy, double x,
                        double y) {
  fx.validate();
  fy.validate();
  auto [w, m] = frechet_bounds(fx.at(x).to_double(), fy.at(y).to_double());
  return Region::interval(w, m);
}

JointCdfProblem joint_cdf_problem(const DiscreteCdf& fx, const DiscreteCdf& fy,
                                  double x, double y) {
  fx.validate();
  fy.validate();
  JointLayout lay({"X", "Y"}, {fx.support, fy.support});
  std::vector<RatioFunctional> obs = lay.dist(0);
  for (auto& f : lay.dist(1)) obs.push_back(std::move(f));
  // Cumulative mass at (x, y): total probability of the lower-left cells.
  Rat qx = quantize(x);
  Rat qy = quantize(y);
  RatioFunctional cum;
  cum.num.assign(lay.cells(), Rat());
  for (std::size_t c = 0; c < lay.cells(); ++c) {
    if (quantize(lay.coord(c, 0)) <= qx && quantize(lay.coord(c, 1)) <= qy)
      cum.num[c] = kOne;
  }
  Universe u = lay.make_universe(obs, cum, 0);
  std::vector<Value> comps;
  for (const Rat& p : fx.masses()) comps.push_back(Value::scalar(p));
  for (const Rat& p : fy.masses()) comps.push_back(Value::scalar(p));
  return JointCdfProblem{std::move(u), Value::tuple(std::move(comps))};
}

Universe mixture_universe(const MixtureGrid& grid) {
  if (grid.pi.empty() || grid.mu.empty())
    throw ValidationError("mixture grid needs nonempty pi and mu supports");
  std::vector<double> pis = grid.pi;
  std::vector<double> mus = grid.mu;
  std::uint64_t np = pis.size(), nm = mus.size();
  auto gen = [pis, mus, nm](std::uint64_t index) {
    std::uint64_t k = index % nm;
    index /= nm;
    std::uint64_t j = index % nm;
    std::uint64_t i = index / nm;
    return State(std::vector<double>{pis[i], mus[j], mus[k]});
  };
  auto estimand = [](const State& s) { return Value::real(s.params()[0]); };
  auto observation = [](const State& s) {
    Rat pi = quantize(s.params()[0]);
    Rat m1 = quantize(s.params()[1]);
    Rat m2 = quantize(s.params()[2]);
    Rat anti = kOne - pi;
    Rat mean = pi * m1 + anti * m2;
    Rat var = pi * pi + anti * anti;
    return Value::tuple({Value::scalar(mean), Value::scalar(var)});
  };
  return Universe::indexed(np * nm * nm, gen, estimand, observation);
}

MixtureRegions mixture_region(const MixtureGrid& grid, double mean, double variance) {
  Universe u = mixture_universe(grid);
  Value l0 = Value::tuple({Value::real(mean), Value::real(variance)});
  Universe u_mu1 =
      u.with_estimand([](const State& s) { return Value::real(s.params()[1]); });
  Universe u_mu2 =
      u.with_estimand([](const State& s) { return Value::real(s.params()[2]); });
  return MixtureRegions{region_enumerate(u, l0), region_enumerate(u_mu1, l0),
                        region_enumerate(u_mu2, l0)};
}

namespace {

Region finite_pop_region(PopulationKind kind, const std::vector<double>& alphabet,
                         const std::vector<ObservedUnit>& observed) {
  Universe u = Universe::finite_population(kind, alphabet, observed);
  ValueSet image = u.observation_image();
  if (image.size() != 1)
    throw InternalError("completions disagree on the observed data");
  return region_enumerate(u, *image.begin());
}

}  // namespace

Region finite_pop_mean_region(const std::vector<double>& alphabet,
                              const std::vector<ObservedUnit>& observed) {
  return finite_pop_region(PopulationKind::missing_outcomes, alphabet, observed);
}

Region finite_pop_ate_region(const std::vector<double>& alphabet,
                             const std::vector<ObservedUnit>& observed) {
  return finite_pop_region(PopulationKind::potential_outcomes, alphabet, observed);
}

JointLayout missing_data_layout(const std::vector<double>& support) {
  return JointLayout({"Y", "Z"}, {support, {0, 1}});
}

Universe missing_data_universe(const std::vector<double>& support,
                               std::int64_t grid_den) {
  JointLayout lay = missing_data_layout(support);
  std::size_t y = 0, z = 1;
  std::vector<RatioFunctional> obs = {
      lay.prob(z, 1),
      lay.expect(y, JointLayout::Cond{z, 1}),
  };
  return lay.make_universe(obs, lay.expect(y), grid_den);
}

Universe missing_data_param_universe(double y_lo, double y_hi, double y_step,
                                     double g_step) {
  std::vector<GridDim> dims = {
      {y_lo, y_hi, y_step},  // a = E[Y|Z=1]
      {y_lo, y_hi, y_step},  // b = E[Y|Z=0]
      {0.0, 1.0, g_step},    // g = P(Z=1)
  };
  auto estimand = [](const State& s) {
    Rat a = quantize(s.params()[0]);
    Rat b = quantize(s.params()[1]);
    Rat g = quantize(s.params()[2]);
    return Value::scalar(a * g + b * (kOne - g));
  };
  auto observation = [](const State& s) {
    Rat g = quantize(s.params()[2]);
    Value mean_obs = g.is_zero() ? Value::missing() : Value::real(s.params()[0]);
    return Value::tuple({Value::scalar(g), std::move(mean_obs)});
  };
  return Universe::grid(std::move(dims), estimand, observation);
}

JointLayout causal_layout(const std::vector<double>& support) {
  return JointLayout({"Y1", "Y0", "Z"}, {support, support, {0, 1}});
}

Universe causal_distribution_universe(const std::vector<double>& support,
                                      std::int64_t grid_den) {
  JointLayout lay = causal_layout(support);
  std::size_t y1 = 0, y0 = 1, z = 2;
  std::vector<RatioFunctional> obs = {
      lay.prob(z, 1),
      lay.expect(y1, JointLayout::Cond{z, 1}),
      lay.expect(y0, JointLayout::Cond{z, 0}),
  };
  return lay.make_universe(obs, lay.mean_diff(y1, y0), grid_den);
}

Universe causal_param_universe(double step) {
  std::vector<GridDim> dims(5, GridDim{0.0, 1.0, step});
  auto estimand = [](const State& s) {
    Rat g = quantize(s.params()[0]);
    Rat a1 = quantize(s.params()[1]);
    Rat b1 = quantize(s.params()[2]);
    Rat a0 = quantize(s.params()[3]);
    Rat b0 = quantize(s.params()[4]);
    Rat anti = kOne - g;
    return Value::scalar(a1 * g + a0 * anti - b1 * g - b0 * anti);
  };
  auto observation = [](const State& s) {
    Rat g = quantize(s.params()[0]);
    Value treated = g.is_zero() ? Value::missing() : Value::real(s.params()[1]);
    Value control = g == kOne ? Value::missing() : Value::real(s.params()[4]);
    return Value::tuple({Value::scalar(g), std::move(treated), std::move(control)});
  };
  return Universe::grid(std::move(dims), estimand, observation);
}

Assumption causal_param_randomized() {
  auto fn = [](const State& s) {
    const auto& p = s.params();
    double d1 = p[1] - p[3];
    double d0 = p[2] - p[4];
    return (d1 < 0 ? -d1 : d1) + (d0 < 0 ? -d0 : d0);
  };
  return Assumption("randomized(Z)", fn);
}

Universe gaussian_copula_universe(const std::vector<double>& mu,
                                  const std::vector<double>& sigma,
                                  const std::vector<double>& rho) {
  if (mu.empty() || sigma.empty() || rho.empty())
    throw ValidationError("parameter grids must be nonempty");
  std::vector<double> mus = mu, sigmas = sigma, rhos = rho;
  std::uint64_t nm = mus.size(), ns = sigmas.size(), nr = rhos.size();
  std::uint64_t count = nm * ns * nm * ns * nr;
  auto gen = [mus, sigmas, rhos, nm, ns, nr](std::uint64_t index) {
    std::uint64_t r = index % nr;
    index /= nr;
    std::uint64_t sy = index % ns;
    index /= ns;
    std::uint64_t my = index % nm;
    index /= nm;
    std::uint64_t sx = index % ns;
    std::uint64_t mx = index / ns;
    return State(std::vector<double>{mus[mx], sigmas[sx], mus[my], sigmas[sy],
                                     rhos[r]});
  };
  auto estimand = [](const State& s) { return Value::real(s.params()[4]); };
  auto observation = [](const State& s) {
    const auto& p = s.params();
    return Value::tuple({Value::real(p[0]), Value::real(p[1]), Value::real(p[2]),
                         Value::real(p[3])});
  };
  return Universe::indexed(count, gen, estimand, observation);
}

}  // namespace ident
