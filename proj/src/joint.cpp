#include "ident/joint.hpp"

#include <cmath>
#include <utility>

#include "ident/errors.hpp"

namespace ident {

JointLayout::JointLayout(std::vector<std::string> names,
                         std::vector<std::vector<double>> supports)
    : names_(std::move(names)), supports_(std::move(supports)) {
  if (names_.size() != supports_.size())
    throw ValidationError("layout needs one name per support");
  if (supports_.empty()) throw ValidationError("layout needs at least one variable");
  for (std::size_t v = 0; v < supports_.size(); ++v) {
    if (supports_[v].empty())
      throw ValidationError("variable '" + names_[v] + "' has an empty support");
    offsets_.push_back(quantized_.size());
    for (double x : supports_[v]) quantized_.push_back(quantize(x));
    cells_ *= supports_[v].size();
  }
}

std::size_t JointLayout::var_index(const std::string& name) const {
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return v;
  throw ValidationError("unknown variable '" + name + "'");
}

std::vector<std::size_t> JointLayout::digits(std::size_t cell) const {
  std::vector<std::size_t> d(supports_.size());
  for (std::size_t v = supports_.size(); v-- > 0;) {
    d[v] = cell % supports_[v].size();
    cell /= supports_[v].size();
  }
  return d;
}

double JointLayout::coord(std::size_t cell, std::size_t v) const {
  for (std::size_t w = supports_.size(); w-- > 0;) {
    std::size_t digit = cell % supports_[w].size();
    if (w == v) return supports_[w][digit];
    cell /= supports_[w].size();
  }
  throw ValidationError("variable index out of range");
}

std::size_t JointLayout::support_index(std::size_t v, double value) const {
  Rat q = quantize(value);
  const auto& sup = supports_[v];
  for (std::size_t i = 0; i < sup.size(); ++i)
    if (quantized_[offsets_[v] + i] == q) return i;
  throw OutOfSupport("value " + q.to_string() + " is not in the support of '" +
                     names_[v] + "'");
}

namespace {

bool cell_matches(const JointLayout& lay, std::size_t cell, std::size_t var,
                  std::size_t support_idx) {
  // digits() recomputed per call would allocate; compare via coord identity.
  return quantize(lay.coord(cell, var)) ==
         quantize(lay.support(var)[support_idx]);
}

}  // namespace

RatioFunctional JointLayout::expect(std::size_t v, std::optional<Cond> cond) const {
  RatioFunctional f;
  f.num.assign(cells_, Rat());
  if (cond) {
    std::size_t ci = support_index(cond->var, cond->value);
    f.den.emplace(cells_, Rat());
    for (std::size_t c = 0; c < cells_; ++c) {
      if (!cell_matches(*this, c, cond->var, ci)) continue;
      f.num[c] = quantize(coord(c, v));
      (*f.den)[c] = Rat::of_int(1);
    }
  } else {
    for (std::size_t c = 0; c < cells_; ++c) f.num[c] = quantize(coord(c, v));
  }
  return f;
}

RatioFunctional JointLayout::prob(std::size_t v, double value,
                                  std::optional<Cond> cond) const {
  RatioFunctional f;
  f.num.assign(cells_, Rat());
  std::size_t vi = support_index(v, value);
  std::optional<std::size_t> ci;
  if (cond) {
    ci = support_index(cond->var, cond->value);
    f.den.emplace(cells_, Rat());
  }
  for (std::size_t c = 0; c < cells_; ++c) {
    bool in_cond = !cond || cell_matches(*this, c, cond->var, *ci);
    if (!in_cond) continue;
    if (cond) (*f.den)[c] = Rat::of_int(1);
    if (cell_matches(*this, c, v, vi)) f.num[c] = Rat::of_int(1);
  }
  return f;
}

RatioFunctional JointLayout::mean_diff(std::size_t a, std::size_t b) const {
  RatioFunctional f;
  f.num.assign(cells_, Rat());
  for (std::size_t c = 0; c < cells_; ++c)
    f.num[c] = quantize(coord(c, a)) - quantize(coord(c, b));
  return f;
}

std::vector<RatioFunctional> JointLayout::dist(std::size_t v,
                                               std::optional<Cond> cond) const {
  std::vector<RatioFunctional> fs;
  fs.reserve(supports_[v].size());
  for (double value : supports_[v]) fs.push_back(prob(v, value, cond));
  return fs;
}

Assumption JointLayout::bounded(std::size_t v, double lo, double hi) const {
  std::vector<Rat> coeffs(cells_, Rat());
  Rat qlo = quantize(lo), qhi = quantize(hi);
  for (std::size_t c = 0; c < cells_; ++c) {
    Rat y = quantize(coord(c, v));
    if (y < qlo || qhi < y) coeffs[c] = Rat::of_int(1);
  }
  auto fn = [coeffs](const State& s) {
    const auto& p = s.params();
    double mass = 0.0;
    for (std::size_t c = 0; c < coeffs.size() && c < p.size(); ++c)
      if (!coeffs[c].is_zero()) mass += p[c];
    return mass;
  };
  std::vector<Assumption::LinearConstraint> linear;
  linear.push_back({coeffs, Rat(), Assumption::LinearConstraint::Cmp::eq});
  return Assumption("bounded(" + names_[v] + "," + qlo.to_string() + "," +
                        qhi.to_string() + ")",
                    fn, std::move(linear));
}

Assumption JointLayout::fixed(std::size_t v, double value) const {
  std::size_t vi = support_index(v, value);
  std::vector<Rat> coeffs(cells_, Rat());
  for (std::size_t c = 0; c < cells_; ++c)
    if (!cell_matches(*this, c, v, vi)) coeffs[c] = Rat::of_int(1);
  auto fn = [coeffs](const State& s) {
    const auto& p = s.params();
    double mass = 0.0;
    for (std::size_t c = 0; c < coeffs.size() && c < p.size(); ++c)
      if (!coeffs[c].is_zero()) mass += p[c];
    return mass;
  };
  std::vector<Assumption::LinearConstraint> linear;
  linear.push_back({coeffs, Rat(), Assumption::LinearConstraint::Cmp::eq});
  return Assumption("fixed(" + names_[v] + "," + quantize(value).to_string() + ")",
                    fn, std::move(linear));
}

Assumption JointLayout::independent(std::size_t a, std::size_t b) const {
  JointLayout lay = *this;
  auto fn = [lay, a, b](const State& s) {
    const auto& p = s.params();
    std::size_t na = lay.support(a).size(), nb = lay.support(b).size();
    std::vector<double> joint(na * nb, 0.0), pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t c = 0; c < lay.cells() && c < p.size(); ++c) {
      auto d = lay.digits(c);
      joint[d[a] * nb + d[b]] += p[c];
      pa[d[a]] += p[c];
      pb[d[b]] += p[c];
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        tv += std::abs(joint[i * nb + j] - pa[i] * pb[j]);
    return tv / 2.0;
  };
  return Assumption("independent(" + names_[a] + "," + names_[b] + ")", fn);
}

Assumption JointLayout::randomized(std::size_t z) const {
  JointLayout lay = *this;
  auto fn = [lay, z](const State& s) {
    const auto& p = s.params();
    std::size_t nz = lay.support(z).size();
    std::size_t rest = lay.cells() / nz;
    // Index the non-z block by collapsing z's digit.
    std::vector<double> joint(lay.cells(), 0.0);
    std::vector<double> pr(rest, 0.0), pz(nz, 0.0);
    for (std::size_t c = 0; c < lay.cells() && c < p.size(); ++c) {
      auto d = lay.digits(c);
      std::size_t r = 0;
      for (std::size_t v = 0; v < lay.var_count(); ++v)
        if (v != z) r = r * lay.support(v).size() + d[v];
      joint[r * nz + d[z]] += p[c];
      pr[r] += p[c];
      pz[d[z]] += p[c];
    }
    double tv = 0.0;
    for (std::size_t r = 0; r < rest; ++r)
      for (std::size_t k = 0; k < nz; ++k)
        tv += std::abs(joint[r * nz + k] - pr[r] * pz[k]);
    return tv / 2.0;
  };
  return Assumption("randomized(" + names_[z] + ")", fn);
}

Assumption JointLayout::randomized_at(std::size_t z, std::vector<Rat> z_margin) const {
  if (z_margin.size() != supports_[z].size())
    throw ValidationError("pinned margin size does not match the support of '" +
                          names_[z] + "'");
  // One row per (non-z cell, z value): p[r,k] - margin_k * sum_k' p[r,k'] = 0.
  std::vector<Assumption::LinearConstraint> linear;
  std::size_t nz = supports_[z].size();
  std::size_t rest = cells_ / nz;
  // Map each cell to its non-z block index and z digit once.
  std::vector<std::size_t> block(cells_), zdig(cells_);
  for (std::size_t c = 0; c < cells_; ++c) {
    auto d = digits(c);
    std::size_t r = 0;
    for (std::size_t v = 0; v < var_count(); ++v)
      if (v != z) r = r * supports_[v].size() + d[v];
    block[c] = r;
    zdig[c] = d[z];
  }
  for (std::size_t r = 0; r < rest; ++r) {
    for (std::size_t k = 0; k < nz; ++k) {
      std::vector<Rat> row(cells_, Rat());
      for (std::size_t c = 0; c < cells_; ++c) {
        if (block[c] != r) continue;
        row[c] = (zdig[c] == k ? Rat::of_int(1) : Rat()) - z_margin[k];
      }
      linear.push_back({std::move(row), Rat(), Assumption::LinearConstraint::Cmp::eq});
    }
  }
  auto rows = linear;
  auto fn = [rows](const State& s) {
    const auto& p = s.params();
    double total = 0.0;
    for (const auto& c : rows) {
      double v = 0.0;
      for (std::size_t i = 0; i < c.coeffs.size() && i < p.size(); ++i)
        if (!c.coeffs[i].is_zero()) v += c.coeffs[i].to_double() * p[i];
      total += std::abs(v);
    }
    return total;
  };
  return Assumption("randomized_at(" + names_[z] + ")", fn, std::move(linear));
}

Value functional_value(const std::vector<RatioFunctional>& fs,
                       const std::vector<double>& p) {
  std::vector<Value> parts;
  parts.reserve(fs.size());
  for (const auto& f : fs) {
    double v = f.eval(p);
    parts.push_back(std::isnan(v) ? Value::missing() : Value::real(v));
  }
  return parts.size() == 1 ? parts[0] : Value::tuple(std::move(parts));
}

Universe JointLayout::make_universe(std::vector<RatioFunctional> observations,
                                    std::optional<RatioFunctional> estimand,
                                    std::int64_t grid_den) const {
  PolytopeSpec spec;
  spec.cells = cells_;
  spec.observations = observations;
  spec.estimand = estimand;
  auto obs_map = [observations](const State& s) {
    return functional_value(observations, s.params());
  };
  auto est_map = [estimand](const State& s) {
    if (!estimand) return Value::integer(0);
    double v = estimand->eval(s.params());
    return std::isnan(v) ? Value::missing() : Value::real(v);
  };
  return Universe::distribution(std::move(spec), grid_den, est_map, obs_map);
}

}  // namespace ident
