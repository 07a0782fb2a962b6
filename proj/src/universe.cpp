#include "ident/universe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ident/errors.hpp"
#include "ident/parallel.hpp"

namespace ident {
namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kU64Max / b) return kU64Max;
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

Rat mean_rat(const std::vector<double>& xs) {
  Rat sum;
  for (double x : xs) sum = sum + quantize(x);
  return sum / Rat::of_int(static_cast<std::int64_t>(xs.size()));
}

}  // namespace

double RatioFunctional::eval(const std::vector<double>& p) const {
  double n = 0.0;
  for (std::size_t i = 0; i < num.size() && i < p.size(); ++i)
    n += num[i].to_double() * p[i];
  if (!den) return n;
  double d = 0.0;
  for (std::size_t i = 0; i < den->size() && i < p.size(); ++i)
    d += (*den)[i].to_double() * p[i];
  if (std::abs(d) < 1e-12) return std::numeric_limits<double>::quiet_NaN();
  return n / d;
}

std::uint64_t count_compositions(std::int64_t total, std::size_t parts,
                                 std::uint64_t saturate_at) {
  if (total < 0) return 0;
  if (parts == 0) return total == 0 ? 1 : 0;
  // C(total + parts - 1, parts - 1), clamped. Stepwise multiply-then-divide
  // keeps every intermediate an exact binomial coefficient.
  unsigned __int128 r = 1;
  std::uint64_t n = static_cast<std::uint64_t>(total) + parts - 1;
  std::uint64_t k = parts - 1;
  if (k > n - k) k = n - k;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i);
    r /= i;
    if (r > saturate_at) return saturate_at;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<std::int64_t> unrank_composition(std::uint64_t index, std::int64_t total,
                                             std::size_t parts) {
  std::vector<std::int64_t> out(parts, 0);
  std::int64_t remaining = total;
  for (std::size_t d = 0; d + 1 < parts; ++d) {
    for (std::int64_t v = 0; v <= remaining; ++v) {
      std::uint64_t block = count_compositions(remaining - v, parts - d - 1, kU64Max);
      if (index < block) {
        out[d] = v;
        remaining -= v;
        break;
      }
      index -= block;
    }
  }
  if (parts > 0) out[parts - 1] = remaining;
  return out;
}

Universe Universe::explicit_states(std::vector<State> states, Map estimand,
                                   Map observation) {
  if (states.empty()) throw EmptyUniverse("explicit universe has no states");
  Universe u;
  u.kind_ = Kind::explicit_list;
  u.count_ = states.size();
  auto shared = std::make_shared<std::vector<State>>(std::move(states));
  u.gen_ = [shared](std::uint64_t i) { return (*shared)[i]; };
  u.estimand_ = std::move(estimand);
  u.observation_ = std::move(observation);
  return u;
}

Universe Universe::grid(std::vector<GridDim> dims, Map estimand, Map observation) {
  if (dims.empty()) throw ValidationError("grid universe needs at least one dimension");
  std::vector<std::uint64_t> sizes;
  std::uint64_t total = 1;
  for (const auto& d : dims) {
    if (!(d.step > 0) || d.hi < d.lo)
      throw ValidationError("grid dimension needs step > 0 and hi >= lo");
    auto n = static_cast<std::uint64_t>(std::llround((d.hi - d.lo) / d.step)) + 1;
    sizes.push_back(n);
    total = saturating_mul(total, n);
  }
  Universe u;
  u.kind_ = Kind::grid;
  u.count_ = total;
  u.gen_ = [dims = std::move(dims), sizes](std::uint64_t index) {
    std::vector<double> params(dims.size());
    for (std::size_t d = dims.size(); d-- > 0;) {
      std::uint64_t digit = index % sizes[d];
      index /= sizes[d];
      params[d] = dims[d].lo + static_cast<double>(digit) * dims[d].step;
    }
    return State(std::move(params));
  };
  u.estimand_ = std::move(estimand);
  u.observation_ = std::move(observation);
  return u;
}

Universe Universe::indexed(std::uint64_t count, Generator gen, Map estimand,
                           Map observation) {
  if (count == 0) throw EmptyUniverse("indexed universe has no states");
  Universe u;
  u.kind_ = Kind::grid;
  u.count_ = count;
  u.gen_ = std::move(gen);
  u.estimand_ = std::move(estimand);
  u.observation_ = std::move(observation);
  return u;
}

Universe Universe::distribution(PolytopeSpec spec, std::int64_t grid_den,
                                Map estimand, Map observation) {
  if (spec.cells == 0) throw ValidationError("distribution universe needs cells >= 1");
  Universe u;
  if (grid_den > 0) {
    u.kind_ = Kind::simplex_grid;
    u.count_ = count_compositions(grid_den, spec.cells, kU64Max);
    u.gen_ = [cells = spec.cells, grid_den](std::uint64_t index) {
      std::vector<std::int64_t> counts = unrank_composition(index, grid_den, cells);
      std::vector<double> p(cells);
      for (std::size_t i = 0; i < cells; ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(grid_den);
      return State(std::move(p));
    };
  } else {
    u.kind_ = Kind::polytope;
    u.count_ = 0;
  }
  u.lp_ = std::move(spec);
  u.estimand_ = std::move(estimand);
  u.observation_ = std::move(observation);
  return u;
}

Universe Universe::finite_population(PopulationKind kind, std::vector<double> alphabet,
                                     std::vector<ObservedUnit> observed) {
  if (alphabet.empty()) throw ValidationError("population alphabet is empty");
  if (observed.empty()) throw ValidationError("population has no units");
  std::size_t n = observed.size();
  std::vector<std::size_t> free_units;  // units whose unknown cell gets a digit
  for (std::size_t i = 0; i < n; ++i) {
    const auto& unit = observed[i];
    if (unit.z != 0 && unit.z != 1)
      throw ValidationError("unit exposure must be 0 or 1");
    if (kind == PopulationKind::missing_outcomes) {
      if (unit.y_star.has_value() != (unit.z == 1))
        throw ValidationError("outcome must be observed exactly where z = 1");
      if (unit.z == 0) free_units.push_back(i);
    } else {
      if (!unit.y_star.has_value())
        throw ValidationError("realized outcome must be observed for every unit");
      free_units.push_back(i);  // the counterfactual cell is always unknown
    }
    if (unit.y_star.has_value()) {
      Rat y = quantize(*unit.y_star);
      bool in_alphabet = false;
      for (double a : alphabet)
        if (quantize(a) == y) in_alphabet = true;
      if (!in_alphabet)
        throw InconsistentObservation("observed outcome is not in the alphabet");
    }
  }

  Universe u;
  u.kind_ = Kind::population;
  u.count_ = saturating_pow(alphabet.size(), free_units.size());
  u.gen_ = [kind, alphabet, observed, free_units](std::uint64_t index) {
    std::size_t n = observed.size();
    PopulationTables t;
    t.y1.resize(n);
    t.z.resize(n);
    if (kind == PopulationKind::potential_outcomes) t.y0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      t.z[i] = observed[i].z;
      if (kind == PopulationKind::missing_outcomes) {
        if (observed[i].z == 1) t.y1[i] = *observed[i].y_star;
      } else {
        (observed[i].z == 1 ? t.y1[i] : t.y0[i]) = *observed[i].y_star;
      }
    }
    // Most-significant digit first over free units, so index order is
    // lexicographic in unit order.
    for (std::size_t pos = free_units.size(); pos-- > 0;) {
      std::size_t digit = index % alphabet.size();
      index /= alphabet.size();
      std::size_t i = free_units[pos];
      if (kind == PopulationKind::missing_outcomes) {
        t.y1[i] = alphabet[digit];
      } else {
        (observed[i].z == 1 ? t.y0[i] : t.y1[i]) = alphabet[digit];
      }
    }
    return State(std::move(t));
  };
  u.estimand_ = [kind](const State& s) {
    const auto& t = s.tables();
    if (kind == PopulationKind::missing_outcomes) return Value::scalar(mean_rat(t.y1));
    Rat sum;
    for (std::size_t i = 0; i < t.y1.size(); ++i)
      sum = sum + quantize(t.y1[i]) - quantize(t.y0[i]);
    return Value::scalar(sum / Rat::of_int(static_cast<std::int64_t>(t.y1.size())));
  };
  u.observation_ = [kind](const State& s) {
    const auto& t = s.tables();
    std::vector<Value> units;
    units.reserve(t.z.size());
    for (std::size_t i = 0; i < t.z.size(); ++i) {
      double realized = kind == PopulationKind::missing_outcomes || t.z[i] == 1
                            ? t.y1[i]
                            : t.y0[i];
      Value y = kind == PopulationKind::missing_outcomes && t.z[i] == 0
                    ? Value::missing()
                    : Value::real(realized);
      units.push_back(Value::tuple({std::move(y), Value::integer(t.z[i])}));
    }
    return Value::tuple(std::move(units));
  };
  return u;
}

std::uint64_t Universe::state_count() const {
  if (!enumerable()) throw NotEnumerable("polytope universes cannot be enumerated");
  return count_;
}

bool Universe::passes_assumptions(const State& s) const {
  for (const auto& a : assumptions_)
    if (!a.satisfied(s, eps_)) return false;
  return true;
}

void Universe::for_each_state(const std::function<void(const State&)>& fn,
                              std::uint64_t cap) const {
  std::uint64_t n = state_count();
  if (n > cap)
    throw EnumerationOverflow("universe has " + std::to_string(n) +
                              " raw states, over the cap of " + std::to_string(cap));
  for (std::uint64_t i = 0; i < n; ++i) {
    State s = gen_(i);
    if (passes_assumptions(s)) fn(s);
  }
}

void Universe::for_each_state_parallel(
    const std::function<void(const State&, int worker)>& fn, std::uint64_t cap) const {
  std::uint64_t n = state_count();
  if (n > cap)
    throw EnumerationOverflow("universe has " + std::to_string(n) +
                              " raw states, over the cap of " + std::to_string(cap));
  parallel_ranges(n, [&](std::uint64_t begin, std::uint64_t end, int worker) {
    for (std::uint64_t i = begin; i < end; ++i) {
      State s = gen_(i);
      if (passes_assumptions(s)) fn(s, worker);
    }
  });
}

Universe Universe::with_estimand(Map estimand) const {
  Universe u = *this;
  u.estimand_ = std::move(estimand);
  return u;
}

Universe Universe::with_eps(double eps) const {
  Universe u = *this;
  u.eps_ = eps;
  return u;
}

Universe Universe::restrict(const Assumption& a) const {
  Universe u = *this;
  u.assumptions_.push_back(a);
  if (u.lp_ && a.has_linear_form()) {
    for (const auto& c : a.linear_form()) u.lp_->constraints.push_back(c);
  }
  if (!enumerable()) {
    if (!a.has_linear_form())
      throw ValidationError("assumption '" + a.name() +
                            "' has no linear form; a polytope universe cannot "
                            "apply it");
    return u;
  }
  // Eager emptiness check, skipped only when the raw count already exceeds
  // the enumeration cap (enumeration would refuse such a universe anyway).
  if (count_ <= kDefaultEnumerationCap) {
    for (std::uint64_t i = 0; i < count_; ++i) {
      if (u.passes_assumptions(gen_(i))) return u;
    }
    throw EmptyUniverse("assumption '" + a.name() + "' leaves no states");
  }
  return u;
}

namespace {

ValueSet image_of_map(const Universe& u, const Universe::Map& map, std::uint64_t cap) {
  std::vector<ValueSet> per_worker(static_cast<std::size_t>(worker_count()));
  u.for_each_state_parallel(
      [&](const State& s, int worker) {
        per_worker[static_cast<std::size_t>(worker)].insert(map(s));
      },
      cap);
  ValueSet out;
  for (auto& part : per_worker)
    for (const auto& v : part) out.insert(v);
  return out;
}

}  // namespace

ValueSet Universe::observation_image(std::uint64_t cap) const {
  return image_of_map(*this, observation_, cap);
}

ValueSet Universe::estimand_image(std::uint64_t cap) const {
  return image_of_map(*this, estimand_, cap);
}

const PolytopeSpec& Universe::polytope_spec() const {
  if (!lp_) throw ValidationError("universe carries no distribution structure");
  return *lp_;
}

}  // namespace ident
