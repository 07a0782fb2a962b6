#pragma once

#include <cstddef>
#include <vector>

#include "ident/errors.hpp"
#include "ident/rational.hpp"

namespace ident {

// Two-phase dense-tableau simplex with Bland's rule, templated on the scalar
// field. The exact instantiation (BigRat) terminates unconditionally and its
// optima are exact vertex values; the double instantiation trades that for
// speed on large programs and compares against a small tolerance.
//
// Form: minimize c.x subject to A x (cmp) b, x >= 0.

enum class LpCmp { le, eq, ge };

enum class LpStatus { optimal, infeasible, unbounded };

template <typename T>
struct LinearProgram {
  std::vector<std::vector<T>> A;
  std::vector<T> b;
  std::vector<LpCmp> cmp;
  std::vector<T> c;

  std::size_t vars() const { return c.size(); }
  std::size_t rows() const { return A.size(); }

  void add_row(std::vector<T> coeffs, LpCmp op, T rhs) {
    A.push_back(std::move(coeffs));
    cmp.push_back(op);
    b.push_back(std::move(rhs));
  }
};

template <typename T>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  T objective{};
  std::vector<T> x;
};

template <typename T>
struct LpTolerance {
  static T value() { return T(0); }
};
template <>
struct LpTolerance<double> {
  static double value() { return 1e-9; }
};

template <typename T>
LpResult<T> lp_solve_min(const LinearProgram<T>& lp);

// Minimum and maximum of c.x over the feasible set. Throws Infeasible when
// the constraints have no solution, InternalError if either direction comes
// back unbounded (the callers' programs all live inside a probability
// simplex, where that cannot happen).
template <typename T>
std::pair<T, T> lp_extremes(const LinearProgram<T>& lp);

extern template LpResult<BigRat> lp_solve_min<BigRat>(const LinearProgram<BigRat>&);
extern template LpResult<double> lp_solve_min<double>(const LinearProgram<double>&);
extern template std::pair<BigRat, BigRat> lp_extremes<BigRat>(
    const LinearProgram<BigRat>&);
extern template std::pair<double, double> lp_extremes<double>(
    const LinearProgram<double>&);

}  // namespace ident
