#include "ident/region.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ident/errors.hpp"
#include "ident/parallel.hpp"
#include "ident/simplex.hpp"

namespace ident {

Region Region::explicit_set(ValueSet values, bool strong) {
  if (values.empty()) throw ValidationError("explicit region cannot be empty");
  Region r;
  r.kind_ = Kind::explicit_set;
  r.values_ = sorted(values);
  r.strong_ = strong;
  return r;
}

Region Region::interval(Rat lo, Rat hi) {
  if (hi < lo) throw ValidationError("interval region needs lo <= hi");
  Region r;
  r.kind_ = Kind::interval;
  r.lo_ = lo;
  r.hi_ = hi;
  return r;
}

Region Region::singleton(Value v) {
  ValueSet s;
  s.insert(std::move(v));
  return explicit_set(std::move(s));
}

Region Region::reduced(std::vector<std::pair<std::string, CertifiedValue>> identified,
                       Region free, Combiner combiner) {
  Region r;
  r.kind_ = Kind::reduced_form;
  r.identified_ = std::move(identified);
  r.free_ = std::make_shared<const Region>(std::move(free));
  r.combiner_ = std::move(combiner);
  return r;
}

bool Region::is_singleton() const {
  switch (kind_) {
    case Kind::explicit_set:
      return values_.size() == 1;
    case Kind::interval:
      return lo_ == hi_;
    case Kind::reduced_form:
      return free_->is_singleton();
  }
  return false;
}

const std::vector<Value>& Region::values() const {
  if (kind_ != Kind::explicit_set)
    throw ValidationError("region is not an explicit set");
  return values_;
}

bool Region::contains_value(const Value& v) const {
  switch (kind_) {
    case Kind::explicit_set:
      return std::binary_search(values_.begin(), values_.end(), v, value_less);
    case Kind::interval:
      return v.is_scalar() && lo_ <= v.as_rat() && v.as_rat() <= hi_;
    case Kind::reduced_form:
      throw ValidationError("materialize a reduced form before membership tests");
  }
  return false;
}

const Rat& Region::lo() const {
  if (kind_ != Kind::interval) throw ValidationError("region is not an interval");
  return lo_;
}

const Rat& Region::hi() const {
  if (kind_ != Kind::interval) throw ValidationError("region is not an interval");
  return hi_;
}

const std::vector<std::pair<std::string, CertifiedValue>>& Region::identified() const {
  if (kind_ != Kind::reduced_form) throw ValidationError("region is not a reduced form");
  return identified_;
}

const Region& Region::free_region() const {
  if (kind_ != Kind::reduced_form) throw ValidationError("region is not a reduced form");
  return *free_;
}

const Combiner& Region::combiner() const {
  if (kind_ != Kind::reduced_form) throw ValidationError("region is not a reduced form");
  return *combiner_;
}

bool region_contains(const Region& outer, const Region& inner) {
  using K = Region::Kind;
  if (outer.kind() == K::reduced_form || inner.kind() == K::reduced_form)
    return region_contains(materialize(outer), materialize(inner));
  if (inner.kind() == K::explicit_set) {
    for (const auto& v : inner.values())
      if (!outer.contains_value(v)) return false;
    return true;
  }
  if (outer.kind() == K::interval)
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
  throw ValidationError("interval-inside-explicit containment is not defined");
}

bool region_equal(const Region& a, const Region& b) {
  using K = Region::Kind;
  if (a.kind() == K::reduced_form || b.kind() == K::reduced_form)
    return region_equal(materialize(a), materialize(b));
  if (a.kind() != b.kind()) {
    // A one-point interval equals the singleton set of its endpoint.
    const Region& itv = a.kind() == K::interval ? a : b;
    const Region& set = a.kind() == K::interval ? b : a;
    return itv.lo() == itv.hi() && set.values().size() == 1 &&
           set.values()[0].is_scalar() && set.values()[0].as_rat() == itv.lo();
  }
  if (a.kind() == K::interval) return a.lo() == b.lo() && a.hi() == b.hi();
  if (a.values().size() != b.values().size()) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    if (a.values()[i] != b.values()[i]) return false;
  return true;
}

Region region_enumerate(const Universe& u, const Value& l0, std::uint64_t cap) {
  struct Part {
    ValueSet region;
    ValueSet image;
  };
  std::vector<Part> parts(static_cast<std::size_t>(worker_count()));
  u.for_each_state_parallel(
      [&](const State& s, int worker) {
        auto& part = parts[static_cast<std::size_t>(worker)];
        Value theta = u.estimand(s);
        if (u.observation(s) == l0) part.region.insert(theta);
        part.image.insert(std::move(theta));
      },
      cap);
  ValueSet region, image;
  for (auto& part : parts) {
    for (const auto& v : part.region) region.insert(v);
    for (const auto& v : part.image) image.insert(v);
  }
  if (region.empty())
    throw UnreachableObservation("observation " + l0.to_string() +
                                 " is not attained by any state");
  bool strong = image.size() > 1 && set_equal(region, image);
  return Region::explicit_set(std::move(region), strong);
}

namespace {

template <typename T>
T scalar_from_rat(const Rat& r);
template <>
BigRat scalar_from_rat<BigRat>(const Rat& r) {
  return r.to_big();
}
template <>
double scalar_from_rat<double>(const Rat& r) {
  return r.to_double();
}

template <typename T>
std::vector<T> widen_coeffs(const std::vector<Rat>& coeffs, std::size_t cells) {
  std::vector<T> out(cells, T(0));
  for (std::size_t i = 0; i < coeffs.size() && i < cells; ++i)
    out[i] = scalar_from_rat<T>(coeffs[i]);
  return out;
}

// Scalar components of l0, aligned with spec.observations; nullopt marks the
// Missing sentinel (a conditional moment of a null event).
std::vector<std::optional<Rat>> l0_components(const PolytopeSpec& spec,
                                              const Value& l0) {
  std::vector<Value> flat;
  if (l0.kind() == Value::Kind::tuple) {
    flat = l0.elements();
  } else {
    flat = {l0};
  }
  if (flat.size() != spec.observations.size())
    throw ValidationError("observed point has " + std::to_string(flat.size()) +
                          " components; the observation mapping has " +
                          std::to_string(spec.observations.size()));
  std::vector<std::optional<Rat>> out;
  out.reserve(flat.size());
  for (const auto& v : flat) {
    if (v.is_missing()) {
      out.push_back(std::nullopt);
    } else if (v.is_scalar()) {
      out.push_back(v.as_rat());
    } else {
      throw ValidationError("observed components must be scalars or missing");
    }
  }
  return out;
}

// Simplex membership plus accumulated constraints plus the observation pins.
template <typename T>
LinearProgram<T> pinned_program(const PolytopeSpec& spec,
                                const std::vector<std::optional<Rat>>& comps) {
  LinearProgram<T> lp;
  lp.c.assign(spec.cells, T(0));
  lp.add_row(std::vector<T>(spec.cells, T(1)), LpCmp::eq, T(1));
  for (const auto& c : spec.constraints) {
    LpCmp op = c.cmp == Assumption::LinearConstraint::Cmp::eq ? LpCmp::eq : LpCmp::le;
    lp.add_row(widen_coeffs<T>(c.coeffs, spec.cells), op, scalar_from_rat<T>(c.rhs));
  }
  for (std::size_t i = 0; i < spec.observations.size(); ++i) {
    const RatioFunctional& f = spec.observations[i];
    if (!comps[i]) {
      // Missing conditional moment: the conditioning event has no mass.
      if (!f.den)
        throw ValidationError("an unconditional observation cannot be missing");
      lp.add_row(widen_coeffs<T>(*f.den, spec.cells), LpCmp::eq, T(0));
      continue;
    }
    T c0 = scalar_from_rat<T>(*comps[i]);
    if (!f.den) {
      lp.add_row(widen_coeffs<T>(f.num, spec.cells), LpCmp::eq, c0);
      continue;
    }
    // num.p / den.p = c0  <=>  (num - c0 den).p = 0 given den.p > 0; the
    // denominator being pinned away from zero is the caller's observation.
    std::vector<T> row = widen_coeffs<T>(f.num, spec.cells);
    std::vector<T> den = widen_coeffs<T>(*f.den, spec.cells);
    for (std::size_t j = 0; j < spec.cells; ++j) row[j] -= c0 * den[j];
    lp.add_row(std::move(row), LpCmp::eq, T(0));
  }
  return lp;
}

template <typename T>
std::pair<T, T> extremize_estimand(const PolytopeSpec& spec, const Value& l0) {
  if (!spec.estimand)
    throw ValidationError("distribution universe carries no estimand functional");
  auto comps = l0_components(spec, l0);
  LinearProgram<T> lp = pinned_program<T>(spec, comps);
  const RatioFunctional& est = *spec.estimand;
  if (!est.den) {
    lp.c = widen_coeffs<T>(est.num, spec.cells);
    return lp_extremes(lp);
  }
  // Ratio estimands are linear only when the constraints pin the denominator
  // to a single value; conditional estimands given an observed margin do.
  LinearProgram<T> den_lp = lp;
  den_lp.c = widen_coeffs<T>(*est.den, spec.cells);
  auto [dlo, dhi] = lp_extremes(den_lp);
  if (dlo != dhi)
    throw ValidationError(
        "ratio estimand's denominator is not pinned by the observation; use "
        "the enumeration route");
  if (dlo == T(0))
    throw ValidationError("estimand conditions on a null event at this observation");
  lp.c = widen_coeffs<T>(est.num, spec.cells);
  auto [nlo, nhi] = lp_extremes(lp);
  T a = nlo / dlo;
  T b = nhi / dlo;
  if (b < a) std::swap(a, b);
  return {a, b};
}

}  // namespace

std::pair<BigRat, BigRat> region_lp_extremes(const Universe& u, const Value& l0) {
  return extremize_estimand<BigRat>(u.polytope_spec(), l0);
}

LpRegionResult region_lp(const Universe& u, const Value& l0) {
  const PolytopeSpec& spec = u.polytope_spec();
  if (spec.cells < kExactLpVarLimit) {
    auto [lo, hi] = extremize_estimand<BigRat>(spec, l0);
    return LpRegionResult{Region::interval(Rat::from_big(lo), Rat::from_big(hi)),
                          true, 0.0};
  }
  auto [lo, hi] = extremize_estimand<double>(spec, l0);
  if (hi < lo) hi = lo;
  return LpRegionResult{
      Region::interval(quantize(lo, 10'000'000), quantize(hi, 10'000'000)), false,
      kLpEps};
}

CertifiedValue compose_identifiable(
    const std::vector<AnalysisValue>& parts,
    const std::function<Value(const std::vector<Value>&)>& f,
    const std::string& label) {
  std::vector<Value> args;
  args.reserve(parts.size());
  for (const auto& part : parts) {
    if (!part.certificate)
      throw UncertifiedInput("composition input " + part.value.to_string() +
                             " carries no identifiability certificate");
    args.push_back(part.value);
  }
  return CertifiedValue{f(args), Certificate{"composition", label}};
}

Region reduced_form(std::vector<std::pair<std::string, CertifiedValue>> identified,
                    Region free, Combiner combiner) {
  return Region::reduced(std::move(identified), std::move(free), std::move(combiner));
}

Region materialize(const Region& r) {
  if (r.kind() != Region::Kind::reduced_form) return r;
  Region free = materialize(r.free_region());
  const Combiner& f = r.combiner();
  std::vector<Rat> parts;
  parts.reserve(r.identified().size());
  for (const auto& [label, cv] : r.identified()) {
    if (!cv.value.is_scalar())
      throw ValidationError("identified part '" + label + "' is not a scalar");
    parts.push_back(cv.value.as_rat());
  }
  if (free.kind() == Region::Kind::explicit_set) {
    ValueSet out;
    for (const auto& v : free.values()) {
      if (!v.is_scalar())
        throw ValidationError("free-region values must be scalars");
      out.insert(Value::scalar(f.fn(parts, v.as_rat())));
    }
    return Region::explicit_set(std::move(out));
  }
  if (free.lo() == free.hi()) {
    Rat y = f.fn(parts, free.lo());
    return Region::interval(y, y);
  }
  Rat at_lo = f.fn(parts, free.lo());
  Rat at_hi = f.fn(parts, free.hi());
  switch (f.mono) {
    case Monotone::increasing:
      return Region::interval(at_lo, at_hi);
    case Monotone::decreasing:
      return Region::interval(at_hi, at_lo);
    case Monotone::unknown:
      throw NonMonotoneCombiner("combiner '" + f.label +
                                "' has no declared monotonicity; interval "
                                "materialization needs one");
  }
  throw InternalError("unreachable combiner monotonicity");
}

bool is_strongly_nonidentifiable(const Universe& u, std::uint64_t cap) {
  BinaryRelation r = induce(u, cap);
  // A one-point estimand space is identified outright; reporting it strongly
  // non-identifiable as well would make the two flags contradictory.
  if (r.theta_space().size() <= 1) return false;
  for (const auto& lambda : r.lambda_space())
    if (!set_equal(r.preimage(lambda), r.theta_space())) return false;
  return true;
}

namespace {

// Violation magnitude of a set of linear constraints on a probability vector;
// zero exactly on the feasible set.
Assumption assumption_from_linear(const std::string& name,
                                  std::vector<Assumption::LinearConstraint> cs) {
  auto fn = [cs](const State& s) {
    const auto& p = s.params();
    double total = 0.0;
    for (const auto& c : cs) {
      double v = -c.rhs.to_double();
      for (std::size_t i = 0; i < c.coeffs.size() && i < p.size(); ++i)
        v += c.coeffs[i].to_double() * p[i];
      if (c.cmp == Assumption::LinearConstraint::Cmp::eq)
        total += std::abs(v);
      else if (v > 0)
        total += v;
    }
    return total;
  };
  return Assumption(name, fn, std::move(cs));
}

// Coarsest-but-usable gridded proxy of a polytope's constraint system, used
// only for the a-priori question (image equality), which has no exact finite
// form on the continuum.
Universe polytope_proxy(const PolytopeSpec& spec) {
  static constexpr std::int64_t kCandidates[] = {24, 20, 12, 10, 8, 6, 5, 4, 3, 2, 1};
  std::int64_t den = 1;
  for (std::int64_t d : kCandidates) {
    if (count_compositions(d, spec.cells, 300'000) < 300'000) {
      den = d;
      break;
    }
  }
  PolytopeSpec base = spec;
  base.constraints.clear();
  auto observation = [obs = spec.observations](const State& s) {
    std::vector<Value> parts;
    parts.reserve(obs.size());
    for (const auto& f : obs) {
      double v = f.eval(s.params());
      parts.push_back(std::isnan(v) ? Value::missing() : Value::real(v));
    }
    return parts.size() == 1 ? parts[0] : Value::tuple(std::move(parts));
  };
  auto estimand = [est = spec.estimand](const State& s) {
    if (!est) return Value::integer(0);
    double v = est->eval(s.params());
    return std::isnan(v) ? Value::missing() : Value::real(v);
  };
  Universe u = Universe::distribution(base, den, estimand, observation);
  if (!spec.constraints.empty())
    u = u.restrict(assumption_from_linear("carried-constraints", spec.constraints));
  return u;
}

bool lp_feasible(const PolytopeSpec& spec, const Value& l0) {
  auto comps = l0_components(spec, l0);
  LinearProgram<BigRat> lp = pinned_program<BigRat>(spec, comps);
  return lp_solve_min(lp).status == LpStatus::optimal;
}

}  // namespace

RefutabilityVerdict refutability(const Universe& u, const Assumption& a,
                                 const std::optional<Value>& l0, std::uint64_t cap) {
  RefutabilityVerdict verdict;
  if (u.enumerable()) {
    ValueSet img = u.observation_image(cap);
    if (l0 && img.count(*l0) == 0)
      throw UnreachableObservation("observation " + l0->to_string() +
                                   " is not attained by any state");
    ValueSet img_restricted;
    bool emptied = false;
    try {
      img_restricted = u.restrict(a).observation_image(cap);
    } catch (const EmptyUniverse&) {
      emptied = true;
    }
    verdict.a_priori_refutable = emptied || !set_equal(img_restricted, img);
    if (l0) verdict.refuted_at_l0 = emptied || img_restricted.count(*l0) == 0;
    return verdict;
  }

  if (!a.has_linear_form())
    throw ValidationError("assumption '" + a.name() +
                          "' has no linear form; a polytope universe cannot "
                          "classify it");
  const PolytopeSpec& spec = u.polytope_spec();
  // The observed-point question is exact: a feasibility LP each way.
  if (l0) {
    if (!lp_feasible(spec, *l0))
      throw UnreachableObservation("observation " + l0->to_string() +
                                   " is not attained by any state");
    PolytopeSpec restricted = spec;
    for (const auto& c : a.linear_form()) restricted.constraints.push_back(c);
    verdict.refuted_at_l0 = !lp_feasible(restricted, *l0);
  }
  // The a-priori question compares images over a continuum; answer it on a
  // gridded proxy of the same constraint system.
  Universe proxy = polytope_proxy(spec);
  RefutabilityVerdict proxy_verdict =
      refutability(proxy, assumption_from_linear(a.name(), a.linear_form()),
                   std::nullopt, cap);
  verdict.a_priori_refutable = proxy_verdict.a_priori_refutable;
  if (verdict.refuted_at_l0 && *verdict.refuted_at_l0) verdict.a_priori_refutable = true;
  return verdict;
}

}  // namespace ident
