#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ident/rational.hpp"
#include "ident/relation.hpp"
#include "ident/universe.hpp"
#include "ident/value.hpp"

namespace ident {

// Provenance of an identifiability claim. Values enter compositions only with
// one of these attached, so an unidentified quantity cannot be smuggled into
// a derived "identified" part; the mistake surfaces when the analysis is
// assembled rather than as a wrong number.
struct Certificate {
  std::string proposition;  // "observation-functional" | "composition" | "singleton-region"
  std::string note;
};

struct CertifiedValue {
  Value value;
  Certificate certificate;
};

// A value that may or may not carry a certificate; compositions reject the
// uncertified kind.
struct AnalysisValue {
  Value value;
  std::optional<Certificate> certificate;

  AnalysisValue(Value v) : value(std::move(v)) {}  // NOLINT: implicit by design
  AnalysisValue(CertifiedValue cv)                 // NOLINT: implicit by design
      : value(std::move(cv.value)), certificate(std::move(cv.certificate)) {}
};

enum class Monotone { increasing, decreasing, unknown };

// Scalar combiner f(identified parts, free component) used by reduced forms.
// Monotonicity is declared in the free argument only; it licenses interval
// materialization by endpoint evaluation.
struct Combiner {
  std::string label;
  std::function<Rat(const std::vector<Rat>&, const Rat&)> fn;
  Monotone mono = Monotone::unknown;
};

// An identification region: every estimand value compatible with an observed
// point. Explicit finite set, closed interval, or a reduced-form description
// (identified components plus one free component under a known combiner).
// strong=true marks a region equal to the full estimand space.
class Region {
 public:
  enum class Kind { explicit_set, interval, reduced_form };

  static Region explicit_set(ValueSet values, bool strong = false);
  static Region interval(Rat lo, Rat hi);
  static Region singleton(Value v);
  static Region reduced(std::vector<std::pair<std::string, CertifiedValue>> identified,
                        Region free, Combiner combiner);

  Kind kind() const { return kind_; }
  bool strong() const { return strong_; }
  void set_strong(bool s) { strong_ = s; }

  bool is_singleton() const;

  // Explicit sets, in canonical key order.
  const std::vector<Value>& values() const;
  bool contains_value(const Value& v) const;

  const Rat& lo() const;
  const Rat& hi() const;

  const std::vector<std::pair<std::string, CertifiedValue>>& identified() const;
  const Region& free_region() const;
  const Combiner& combiner() const;

 private:
  Region() = default;

  Kind kind_ = Kind::explicit_set;
  bool strong_ = false;
  std::vector<Value> values_;  // sorted by canonical key
  Rat lo_, hi_;
  std::vector<std::pair<std::string, CertifiedValue>> identified_;
  std::shared_ptr<const Region> free_;
  std::optional<Combiner> combiner_;
};

// outer contains inner (set inclusion / interval containment). Defined for
// explicit/explicit, interval/interval and explicit-inside-interval; the
// remaining combination has no use here.
bool region_contains(const Region& outer, const Region& inner);

bool region_equal(const Region& a, const Region& b);

// H{theta; l0} by exhaustive scan: the estimand values of all states mapping
// to l0, with strong=true iff the region exhausts the estimand image (and the
// image is not a singleton). Throws UnreachableObservation when no state
// attains l0.
Region region_enumerate(const Universe& u, const Value& l0,
                        std::uint64_t cap = kDefaultEnumerationCap);

// LP route over a distribution universe: extremizes the estimand functional
// over {p in simplex : constraints, observations pinned at l0}. Exact
// rational arithmetic below the variable threshold, tolerance-certified
// floating bounds above it.
struct LpRegionResult {
  Region region;
  bool exact = true;
  double eps = 0.0;  // reported certification tolerance of the floating path
};

inline constexpr std::size_t kExactLpVarLimit = 10'000;
inline constexpr double kLpEps = 1e-7;

LpRegionResult region_lp(const Universe& u, const Value& l0);

// Exact endpoints of the LP route (rational path only); the case-study
// oracles compare against closed forms at this layer, before any
// quantization.
std::pair<BigRat, BigRat> region_lp_extremes(const Universe& u, const Value& l0);

// A function of identified quantities is itself identified. Every part must
// carry a certificate; the result carries a composition certificate naming
// the combiner.
CertifiedValue compose_identifiable(
    const std::vector<AnalysisValue>& parts,
    const std::function<Value(const std::vector<Value>&)>& f,
    const std::string& label);

// Reduced-form region from certified identified parts, the free component's
// region, and the combiner.
Region reduced_form(std::vector<std::pair<std::string, CertifiedValue>> identified,
                    Region free, Combiner combiner);

// Evaluates reduced forms down to an explicit set or interval: interval free
// regions by endpoint evaluation (requires declared monotonicity unless the
// interval is a point), explicit free regions by mapping the combiner.
// Explicit sets and intervals pass through unchanged.
Region materialize(const Region& r);

// True iff the region equals the full estimand image at every reachable
// observation. A singleton estimand image reports false: the estimand is
// trivially identified there, and flagging it strongly non-identifiable too
// would make the flags contradictory.
bool is_strongly_nonidentifiable(const Universe& u,
                                 std::uint64_t cap = kDefaultEnumerationCap);

struct RefutabilityVerdict {
  bool a_priori_refutable = false;
  std::optional<bool> refuted_at_l0;
};

// Classifies an assumption: a-priori refutable iff it shrinks the image of
// the observation mapping; additionally tests the supplied observed point
// against the restricted image. Enumerable universes are checked exactly;
// polytopes check the point by LP feasibility and the a-priori question on a
// gridded proxy of the same constraint system (an approximation, since the
// continuum image is not finitely representable).
RefutabilityVerdict refutability(const Universe& u, const Assumption& a,
                                 const std::optional<Value>& l0,
                                 std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace ident
