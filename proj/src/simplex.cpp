#include "ident/simplex.hpp"

#include <cstddef>
#include <limits>
#include <utility>

namespace ident {
namespace {

// Tableau state shared by both phases. Columns: structural variables first,
// then slack/surplus, then artificials, then the rhs. The objective row is
// carried along and updated by the same pivots.
template <typename T>
class Tableau {
 public:
  explicit Tableau(const LinearProgram<T>& lp) : eps_(LpTolerance<T>::value()) {
    const std::size_t m = lp.rows();
    const std::size_t n = lp.vars();
    // One slack/surplus per inequality row, one artificial per row that has
    // no natural basic column (ge and eq rows, plus le rows flipped by a
    // negative rhs).
    std::size_t extras = 0;
    for (auto op : lp.cmp)
      if (op != LpCmp::eq) ++extras;
    slack_begin_ = n;
    art_begin_ = n + extras;
    cols_ = art_begin_;  // artificials appended below as needed
    rows_.assign(m, {});
    rhs_.assign(m, T(0));
    basis_.assign(m, 0);

    std::size_t next_slack = slack_begin_;
    std::vector<std::size_t> needs_artificial;
    for (std::size_t i = 0; i < m; ++i) {
      if (lp.A[i].size() != n)
        throw ValidationError("linear program row width does not match c");
      rows_[i].assign(art_begin_, T(0));
      bool flip = lp.b[i] < T(0);
      for (std::size_t j = 0; j < n; ++j)
        rows_[i][j] = flip ? -lp.A[i][j] : lp.A[i][j];
      rhs_[i] = flip ? -lp.b[i] : lp.b[i];
      LpCmp op = lp.cmp[i];
      if (flip && op == LpCmp::le) op = LpCmp::ge;
      else if (flip && op == LpCmp::ge) op = LpCmp::le;
      if (op != LpCmp::eq) {
        rows_[i][next_slack] = op == LpCmp::le ? T(1) : T(-1);
        if (op == LpCmp::le) basis_[i] = next_slack;
        else needs_artificial.push_back(i);
        ++next_slack;
      } else {
        needs_artificial.push_back(i);
      }
    }
    for (std::size_t i : needs_artificial) {
      for (auto& row : rows_) row.push_back(T(0));
      rows_[i][cols_] = T(1);
      basis_[i] = cols_;
      ++cols_;
    }
  }

  bool has_artificials() const { return cols_ > art_begin_; }

  // Minimizes cost over the current tableau with Bland's rule; cost has one
  // entry per column below limit_cols (others never enter). Returns false if
  // unbounded in the minimizing direction.
  bool run_phase(const std::vector<T>& cost, std::size_t limit_cols) {
    // Price out the basic columns: obj[j] = cost[j] - sum_i cost[basis_i] a_ij.
    std::vector<T> obj(cols_, T(0));
    for (std::size_t j = 0; j < limit_cols; ++j) obj[j] = cost[j];
    obj_rhs_ = T(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T& cb = basis_[i] < limit_cols ? cost[basis_[i]] : zero_;
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < cols_; ++j) obj[j] -= cb * rows_[i][j];
      obj_rhs_ -= cb * rhs_[i];
    }
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < limit_cols; ++j) {
        if (obj[j] < -eps_) {
          enter = j;
          break;  // Bland: smallest eligible index
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_.size();
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= eps_) continue;
        if (leave == rows_.size()) {
          leave = i;
          continue;
        }
        // ratio_i < ratio_leave  <=>  rhs_i * a_leave < rhs_leave * a_i
        T lhs = rhs_[i] * rows_[leave][enter];
        T rhs = rhs_[leave] * rows_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter, obj);
    }
  }

  void pivot(std::size_t r, std::size_t c, std::vector<T>& obj) {
    T inv = rows_[r][c];
    for (auto& a : rows_[r]) a = a / inv;
    rhs_[r] = rhs_[r] / inv;
    rows_[r][c] = T(1);  // kill double-instantiation roundoff
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      T f = rows_[i][c];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = T(0);
      rhs_[i] -= f * rhs_[r];
    }
    T f = obj[c];
    if (f != T(0)) {
      for (std::size_t j = 0; j < cols_; ++j) obj[j] -= f * rows_[r][j];
      obj[c] = T(0);
      obj_rhs_ -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  // Pivots artificial variables out of the basis after phase 1 and drops
  // redundant rows, then truncates the artificial columns.
  void eliminate_artificials() {
    std::vector<T> dummy_obj(cols_, T(0));
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < art_begin_) {
        ++i;
        continue;
      }
      std::size_t c = art_begin_;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (rows_[i][j] > eps_ || rows_[i][j] < -eps_) {
          c = j;
          break;
        }
      }
      if (c < art_begin_) {
        pivot(i, c, dummy_obj);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (auto& row : rows_) row.resize(art_begin_);
    cols_ = art_begin_;
  }

  T phase1_objective() const { return -obj_rhs_; }

  std::vector<T> solution(std::size_t n) const {
    std::vector<T> x(n, T(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n) x[basis_[i]] = rhs_[i];
    return x;
  }

  std::size_t art_begin() const { return art_begin_; }
  std::size_t cols() const { return cols_; }
  const T& eps() const { return eps_; }

 private:
  std::vector<std::vector<T>> rows_;
  std::vector<T> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t cols_ = 0;
  T obj_rhs_{};
  T eps_{};
  T zero_{};
};

}  // namespace

template <typename T>
LpResult<T> lp_solve_min(const LinearProgram<T>& lp) {
  Tableau<T> tab(lp);
  if (tab.has_artificials()) {
    std::vector<T> phase1_cost(tab.cols(), T(0));
    for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) phase1_cost[j] = T(1);
    if (!tab.run_phase(phase1_cost, tab.cols()))
      throw InternalError("phase-1 simplex objective is bounded by construction");
    if (tab.phase1_objective() > tab.eps()) return {LpStatus::infeasible, T(0), {}};
    tab.eliminate_artificials();
  }
  std::vector<T> cost(tab.cols(), T(0));
  for (std::size_t j = 0; j < lp.vars(); ++j) cost[j] = lp.c[j];
  if (!tab.run_phase(cost, tab.cols())) return {LpStatus::unbounded, T(0), {}};
  LpResult<T> result;
  result.status = LpStatus::optimal;
  result.x = tab.solution(lp.vars());
  result.objective = T(0);
  for (std::size_t j = 0; j < lp.vars(); ++j)
    result.objective += lp.c[j] * result.x[j];
  return result;
}

template <typename T>
std::pair<T, T> lp_extremes(const LinearProgram<T>& lp) {
  LpResult<T> lo = lp_solve_min(lp);
  if (lo.status == LpStatus::infeasible)
    throw Infeasible("constraint system has no feasible point");
  LinearProgram<T> flipped = lp;
  for (auto& coef : flipped.c) coef = -coef;
  LpResult<T> hi = lp_solve_min(flipped);
  if (lo.status != LpStatus::optimal || hi.status != LpStatus::optimal)
    throw InternalError("objective unbounded over a bounded feasible set");
  return {lo.objective, -hi.objective};
}

template LpResult<BigRat> lp_solve_min<BigRat>(const LinearProgram<BigRat>&);
template LpResult<double> lp_solve_min<double>(const LinearProgram<double>&);
template std::pair<BigRat, BigRat> lp_extremes<BigRat>(const LinearProgram<BigRat>&);
template std::pair<double, double> lp_extremes<double>(const LinearProgram<double>&);

}  // namespace ident
