#include "ident/analysis.hpp"

#include <chrono>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ident/errors.hpp"
#include "ident/joint.hpp"
#include "ident/region.hpp"

namespace ident {

namespace {

using Json = nlohmann::ordered_json;

std::string pos_text(SourcePos pos) {
  return " (line " + std::to_string(pos.line) + ", col " +
         std::to_string(pos.col) + ")";
}

struct CompiledEstimand {
  std::string name;
  std::string text;
  // One functional for scalar estimands; one per support value for dist(...).
  std::vector<RatioFunctional> parts;
};

struct CompiledAssumption {
  std::string label;
  Assumption enum_route;
  std::optional<Assumption> lp_route;  // linear form, when one exists
  std::string lp_blocker;              // why lp_route is absent
};

struct Compiled {
  JointLayout layout;
  UniverseKind ukind = UniverseKind::grid;
  std::int64_t grid_den = 1;
  std::uint64_t raw_states = 0;
  std::vector<std::string> observe_texts;
  std::vector<RatioFunctional> obs_flat;
  std::vector<CompiledEstimand> estimands;
  std::vector<CompiledAssumption> assumptions;
  std::optional<Value> l0;  // present iff given binds every observation
  Json given_echo = nullptr;
};

std::vector<RatioFunctional> compile_expr(const JointLayout& lay, const Expr& e) {
  try {
    std::optional<JointLayout::Cond> cond;
    if (e.cond_var)
      cond = JointLayout::Cond{lay.var_index(*e.cond_var),
                               e.cond_value->to_double()};
    switch (e.kind) {
      case ExprKind::expect:
        return {lay.expect(lay.var_index(e.var), cond)};
      case ExprKind::prob: {
        // Reject off-support targets up front: prob() would otherwise be
        // identically zero and silently misleading.
        std::size_t v = lay.var_index(e.var);
        lay.support_index(v, e.value->to_double());
        return {lay.prob(v, e.value->to_double(), cond)};
      }
      case ExprKind::dist:
        return lay.dist(lay.var_index(e.var), cond);
      case ExprKind::mean_diff:
        return {lay.mean_diff(lay.var_index(e.var), lay.var_index(e.var2))};
    }
    throw InternalError("unhandled expression kind");
  } catch (const ValidationError& err) {
    throw ValidationError(expr_to_string(e) + pos_text(e.pos) + ": " + err.what());
  } catch (const OutOfSupport& err) {
    throw ValidationError(expr_to_string(e) + pos_text(e.pos) + ": " + err.what());
  }
}

// Fully pinned margin of one variable, recoverable from the given block: a
// dist(...) binding, or unconditional prob(...) bindings covering all support
// values except at most one (the remainder).
std::optional<std::vector<Rat>> margin_from_given(const ProblemSpec& spec,
                                                  const std::string& var) {
  const VariableDecl* decl = nullptr;
  for (const auto& v : spec.universe.variables)
    if (v.name == var) decl = &v;
  if (!decl) return std::nullopt;
  std::size_t n = decl->support.size();
  std::vector<std::optional<Rat>> got(n);
  for (const auto& b : spec.given) {
    if (b.expr.var != var || b.expr.cond_var) continue;
    if (b.expr.kind == ExprKind::dist)
      return std::vector<Rat>(b.values.begin(), b.values.end());
    if (b.expr.kind == ExprKind::prob) {
      for (std::size_t i = 0; i < n; ++i)
        if (decl->support[i] == *b.expr.value) got[i] = b.values[0];
    }
  }
  std::size_t missing = 0, hole = 0;
  Rat sum;
  for (std::size_t i = 0; i < n; ++i) {
    if (got[i]) {
      sum = sum + *got[i];
    } else {
      ++missing;
      hole = i;
    }
  }
  if (missing > 1) return std::nullopt;
  if (missing == 1) {
    Rat rest = Rat::of_int(1) - sum;
    if (rest < Rat::of_int(0) || Rat::of_int(1) < rest) return std::nullopt;
    got[hole] = rest;
  }
  std::vector<Rat> margin;
  for (auto& g : got) margin.push_back(*g);
  return margin;
}

CompiledAssumption compile_assume(const JointLayout& lay, const ProblemSpec& spec,
                                  const AssumeDecl& a) {
  CompiledAssumption out{assume_to_string(a), Assumption::always_true(), {}, {}};
  try {
    if (a.name == "bounded") {
      Assumption lin = lay.bounded(lay.var_index(*a.args[0].ident),
                                   a.args[1].number->to_double(),
                                   a.args[2].number->to_double());
      out.enum_route = lin;
      out.lp_route = lin;
    } else if (a.name == "fixed") {
      Assumption lin = lay.fixed(lay.var_index(*a.args[0].ident),
                                 a.args[1].number->to_double());
      out.enum_route = lin;
      out.lp_route = lin;
    } else if (a.name == "independent") {
      out.enum_route = lay.independent(lay.var_index(*a.args[0].ident),
                                       lay.var_index(*a.args[1].ident));
      out.lp_blocker = "independence has no linear form; use --method enumerate";
    } else if (a.name == "randomized") {
      std::size_t z = lay.var_index(*a.args[0].ident);
      out.enum_route = lay.randomized(z);
      if (auto margin = margin_from_given(spec, *a.args[0].ident)) {
        out.lp_route = lay.randomized_at(z, *margin);
      } else {
        out.lp_blocker = "the LP route needs the margin of " + *a.args[0].ident +
                         " pinned in given; use --method enumerate";
      }
    } else {
      throw ValidationError("unknown assumption '" + a.name + "'");
    }
  } catch (const ValidationError& err) {
    throw ValidationError(out.label + pos_text(a.pos) + ": " + err.what());
  } catch (const OutOfSupport& err) {
    throw ValidationError(out.label + pos_text(a.pos) + ": " + err.what());
  }
  return out;
}

Json rat_json(const Rat& r) { return r.to_string(); }

Json value_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::scalar:
      return rat_json(v.as_rat());
    case Value::Kind::missing:
      return nullptr;
    case Value::Kind::tuple: {
      Json arr = Json::array();
      for (const auto& e : v.elements()) arr.push_back(value_json(e));
      return arr;
    }
    case Value::Kind::labeled: {
      Json obj = Json::object();
      for (const auto& [label, val] : v.entries()) obj[label] = value_json(val);
      return obj;
    }
  }
  return nullptr;
}

Json region_json(const Region& r) {
  Json out = Json::object();
  switch (r.kind()) {
    case Region::Kind::explicit_set: {
      out["kind"] = "set";
      Json vals = Json::array();
      for (const auto& v : r.values()) vals.push_back(value_json(v));
      out["values"] = vals;
      break;
    }
    case Region::Kind::interval:
      out["kind"] = "interval";
      out["lo"] = rat_json(r.lo());
      out["hi"] = rat_json(r.hi());
      break;
    case Region::Kind::reduced_form:
      return region_json(materialize(r));
  }
  return out;
}

Compiled compile(const ProblemSpec& spec, const RunOptions& opts) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> supports;
  for (const auto& v : spec.universe.variables) {
    names.push_back(v.name);
    std::vector<double> sup;
    for (const Rat& r : v.support) sup.push_back(r.to_double());
    supports.push_back(std::move(sup));
  }
  Compiled c{JointLayout(std::move(names), std::move(supports)),
             spec.universe.kind,
             1,
             0,
             {},
             {},
             {},
             {},
             {},
             nullptr};

  if (c.ukind == UniverseKind::grid) {
    Rat step = opts.grid_step.value_or(*spec.universe.grid_step);
    if (step.num() <= 0) throw ValidationError("grid step must be positive");
    Rat inv = Rat::of_int(1) / step;
    if (inv.den() != 1)
      throw ValidationError("grid step " + step.to_string() +
                            " must divide 1 evenly (use 1/k for integer k)");
    c.grid_den = inv.num();
  } else {
    if (opts.grid_step)
      throw ValidationError("--grid-step applies to grid universes only");
    c.grid_den = *spec.universe.units;
  }
  c.raw_states = count_compositions(c.grid_den, c.layout.cells(),
                                    kDefaultEnumerationCap * 8);

  for (const auto& e : spec.observe) {
    c.observe_texts.push_back(expr_to_string(e));
    for (auto& f : compile_expr(c.layout, e)) c.obs_flat.push_back(std::move(f));
  }
  for (const auto& d : spec.estimands)
    c.estimands.push_back(CompiledEstimand{d.name, expr_to_string(d.expr),
                                           compile_expr(c.layout, d.expr)});
  for (const auto& a : spec.assumptions)
    c.assumptions.push_back(compile_assume(c.layout, spec, a));

  if (spec.has_given) {
    std::vector<Value> parts;
    Json echo = Json::object();
    bool complete = true;
    for (const auto& o : spec.observe) {
      const GivenBinding* bound = nullptr;
      for (const auto& b : spec.given)
        if (expr_equal(b.expr, o)) bound = &b;
      if (!bound) {
        complete = false;
        continue;
      }
      if (bound->is_list) {
        Json arr = Json::array();
        for (const auto& r : bound->values) {
          parts.push_back(Value::real(r.to_double()));
          arr.push_back(rat_json(r));
        }
        echo[expr_to_string(o)] = arr;
      } else {
        parts.push_back(Value::real(bound->values[0].to_double()));
        echo[expr_to_string(o)] = rat_json(bound->values[0]);
      }
    }
    c.given_echo = echo;
    if (complete)
      c.l0 = parts.size() == 1 ? parts[0] : Value::tuple(std::move(parts));
  }
  return c;
}

Universe enum_universe(const Compiled& c, const CompiledEstimand* est,
                       const RunOptions& opts) {
  std::optional<RatioFunctional> scalar;
  if (est && est->parts.size() == 1) scalar = est->parts[0];
  Universe u =
      c.layout.make_universe(c.obs_flat, scalar, c.grid_den).with_eps(opts.eps);
  if (est && est->parts.size() > 1) {
    auto parts = est->parts;
    u = u.with_estimand(
        [parts](const State& s) { return functional_value(parts, s.params()); });
  }
  for (const auto& a : c.assumptions) u = u.restrict(a.enum_route);
  return u;
}

Universe lp_universe(const Compiled& c, const CompiledEstimand& est,
                     const RunOptions& opts) {
  if (c.ukind == UniverseKind::population)
    throw ValidationError(
        "population universes enumerate exactly; use --method enumerate");
  if (est.parts.size() != 1)
    throw ValidationError("estimand " + est.name +
                          " is distribution-valued; the LP route needs a "
                          "scalar estimand — use --method enumerate");
  Universe u = c.layout.make_universe(c.obs_flat, est.parts[0], 0).with_eps(opts.eps);
  for (const auto& a : c.assumptions) {
    if (!a.lp_route)
      throw ValidationError("assumption " + a.label + ": " + a.lp_blocker);
    u = u.restrict(*a.lp_route);
  }
  return u;
}

bool lp_route_open(const Compiled& c) {
  if (c.ukind == UniverseKind::population) return false;
  if (!c.l0) return false;
  for (const auto& a : c.assumptions)
    if (!a.lp_route) return false;
  for (const auto& e : c.estimands)
    if (e.parts.size() != 1) return false;
  return true;
}

Json universe_meta(const Compiled& c) {
  Json meta = Json::object();
  meta["kind"] = c.ukind == UniverseKind::grid ? "grid" : "population";
  Json vars = Json::array();
  for (std::size_t v = 0; v < c.layout.var_count(); ++v) {
    Json var = Json::object();
    var["name"] = c.layout.name(v);
    Json sup = Json::array();
    for (double x : c.layout.support(v)) sup.push_back(rat_json(quantize(x)));
    var["support"] = sup;
    vars.push_back(var);
  }
  meta["variables"] = vars;
  meta["cells"] = c.layout.cells();
  meta[c.ukind == UniverseKind::grid ? "grid_den" : "units"] = c.grid_den;
  meta["states"] = c.raw_states;
  return meta;
}

const char* command_name(Command cmd) {
  switch (cmd) {
    case Command::analyze: return "analyze";
    case Command::region: return "region";
    case Command::refute: return "refute";
    case Command::oracle: return "oracle";
  }
  return "?";
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Command command_from_name(const std::string& name) {
  if (name == "analyze") return Command::analyze;
  if (name == "region") return Command::region;
  if (name == "refute") return Command::refute;
  if (name == "oracle") return Command::oracle;
  throw ValidationError("unknown command '" + name +
                        "' (analyze, region, refute, oracle)");
}

Method method_from_name(const std::string& name) {
  if (name == "auto") return Method::automatic;
  if (name == "enumerate") return Method::enumerate;
  if (name == "lp") return Method::lp;
  throw ValidationError("unknown method '" + name +
                        "' (auto, enumerate, lp)");
}

RunResult run(const ProblemSpec& spec, Command command, const RunOptions& opts) {
  Stopwatch watch;
  Compiled c = compile(spec, opts);
  if (spec.observe.empty())
    throw ValidationError("document declares no observations");

  bool can_enum = c.raw_states <= opts.cap;
  bool use_lp = false;
  switch (command) {
    case Command::oracle:
      use_lp = false;
      break;
    case Command::analyze:
    case Command::refute:
      // Identifiability and image comparisons need enumeration; fall back to
      // the LP machinery only when the grid is out of reach.
      use_lp = opts.method == Method::lp ||
               (opts.method == Method::automatic && !can_enum);
      break;
    case Command::region:
      use_lp = opts.method == Method::lp ||
               (opts.method == Method::automatic && lp_route_open(c));
      break;
  }
  if (opts.method == Method::enumerate) use_lp = false;

  bool need_l0 = command == Command::region || command == Command::oracle;
  if (need_l0 && !c.l0)
    throw ValidationError(
        spec.has_given
            ? "given must bind every observation to name an observed point"
            : std::string(command_name(command)) + " requires a given block");

  Json report = Json::object();
  report["command"] = command_name(command);
  report["universe"] = universe_meta(c);
  report["method"] = use_lp ? "lp" : "enumerate";
  report["observe"] = c.observe_texts;
  report["given"] = c.given_echo;

  std::ostringstream diag;
  diag << "method: " << (use_lp ? "lp" : "enumerate") << "\n";
  diag << "states: " << c.raw_states << " over " << c.layout.cells()
       << " cells\n";

  int exit_code = 0;
  Json estimands = Json::array();

  auto enum_entry = [&](const CompiledEstimand& est) {
    Json entry = Json::object();
    entry["name"] = est.name;
    entry["expression"] = est.text;
    Universe u = enum_universe(c, &est, opts);
    if (command == Command::analyze) {
      BinaryRelation rel = induce(u, opts.cap);
      entry["identifiable_everywhere"] = rel.identifiable_everywhere();
      entry["strongly_nonidentifiable"] =
          is_strongly_nonidentifiable(u, opts.cap);
    } else {
      entry["identifiable_everywhere"] = nullptr;
      entry["strongly_nonidentifiable"] = nullptr;
    }
    if (c.l0) {
      Region r = region_enumerate(u, *c.l0, opts.cap);
      entry["identifiable_at_l0"] = r.is_singleton();
      if (command != Command::analyze)
        entry["strongly_nonidentifiable"] = r.strong();
      entry["region"] = region_json(r);
    } else {
      entry["identifiable_at_l0"] = nullptr;
      entry["region"] = nullptr;
    }
    return entry;
  };

  auto lp_entry = [&](const CompiledEstimand& est) {
    Json entry = Json::object();
    entry["name"] = est.name;
    entry["expression"] = est.text;
    entry["identifiable_everywhere"] = nullptr;
    entry["strongly_nonidentifiable"] = nullptr;
    if (!c.l0)
      throw ValidationError(
          "the LP route needs an observed point; add a given block or use "
          "--method enumerate");
    Universe u = lp_universe(c, est, opts);
    LpRegionResult res = region_lp(u, *c.l0);
    entry["identifiable_at_l0"] =
        res.exact ? Json(res.region.is_singleton()) : Json(nullptr);
    entry["region"] = region_json(res.region);
    if (!res.exact) entry["lp_certified_eps"] = res.eps;
    return entry;
  };

  switch (command) {
    case Command::analyze:
    case Command::region:
    case Command::oracle: {
      for (const auto& est : c.estimands)
        estimands.push_back(use_lp ? lp_entry(est) : enum_entry(est));
      report["estimands"] = estimands;
      break;
    }
    case Command::refute: {
      Json verdicts = Json::array();
      for (const auto& a : c.assumptions) {
        Json entry = Json::object();
        entry["name"] = a.label;
        RefutabilityVerdict v;
        if (!use_lp) {
          Universe base =
              c.layout.make_universe(c.obs_flat, std::nullopt, c.grid_den)
                  .with_eps(opts.eps);
          v = refutability(base, a.enum_route, c.l0, opts.cap);
        } else {
          if (!a.lp_route)
            throw ValidationError("assumption " + a.label + ": " + a.lp_blocker);
          Universe base = c.layout.make_universe(c.obs_flat, std::nullopt, 0)
                              .with_eps(opts.eps);
          v = refutability(base, *a.lp_route, c.l0, opts.cap);
        }
        entry["a_priori_refutable"] = v.a_priori_refutable;
        entry["refuted_at_l0"] =
            v.refuted_at_l0 ? Json(*v.refuted_at_l0) : Json(nullptr);
        if (v.refuted_at_l0 && *v.refuted_at_l0) exit_code = 2;
        verdicts.push_back(entry);
      }
      report["assumptions"] = verdicts;
      if (c.l0 && exit_code == 0) {
        try {
          for (const auto& est : c.estimands)
            estimands.push_back(use_lp ? lp_entry(est) : enum_entry(est));
          report["estimands"] = estimands;
        } catch (const EmptyUniverse& err) {
          // Individually survivable assumptions can still be jointly
          // contradictory; the verdicts above remain the report's point.
          report["estimands"] = nullptr;
          report["note"] = std::string("assumptions jointly refuted: ") + err.what();
          exit_code = 2;
        } catch (const UnreachableObservation& err) {
          report["estimands"] = nullptr;
          report["note"] =
              std::string("observed point refuted jointly: ") + err.what();
          exit_code = 2;
        } catch (const Infeasible& err) {
          report["estimands"] = nullptr;
          report["note"] =
              std::string("observed point refuted jointly: ") + err.what();
          exit_code = 2;
        }
      } else {
        report["estimands"] = nullptr;
      }
      break;
    }
  }

  diag << "elapsed_ms: " << watch.ms() << "\n";
  RunResult out;
  out.json = report.dump(2) + "\n";
  out.exit_code = exit_code;
  out.diagnostics = diag.str();
  return out;
}

}  // namespace ident
