#pragma once

// Exact linear algebra over Z, Q and F2:
//   - column echelon reduction with a unimodular transform (integer kernels,
//     integer affine solves),
//   - row Hermite normal form (canonical lattice bases),
//   - Gaussian elimination over F2 (ranks),
//   - exact rational linear programming (two-phase simplex, Bland's rule).
//
// Matrices are small throughout (tens of rows/columns), so the implementations
// favour clarity and exactness over asymptotics.

#include "hfw/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hfw {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row-major

inline IntMat identity_int(int n) {
  IntMat m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Bring a copy of A (m x n) to column echelon form H = A * U with U unimodular.
// After the call, the first `pivots` columns of H are nonzero with strictly
// descending pivot rows; the remaining columns are identically zero.
struct ColumnEchelon {
  IntMat h;                              // echelon form, m x n
  IntMat u;                              // unimodular, n x n, a*u == h
  std::vector<std::pair<int, int>> pivots;  // (row, col) per pivot column
};

inline ColumnEchelon column_echelon(const IntMat& a) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  ColumnEchelon ce{a, identity_int(n), {}};
  auto col_sub = [&](int dst, int src, const Int& q) {
    // column dst -= q * column src (in both h and u)
    for (int i = 0; i < m; ++i) ce.h[i][dst] -= q * ce.h[i][src];
    for (int i = 0; i < n; ++i) ce.u[i][dst] -= q * ce.u[i][src];
  };
  auto col_swap = [&](int x, int y) {
    if (x == y) return;
    for (int i = 0; i < m; ++i) std::swap(ce.h[i][x], ce.h[i][y]);
    for (int i = 0; i < n; ++i) std::swap(ce.u[i][x], ce.u[i][y]);
  };
  auto col_negate = [&](int x) {
    for (int i = 0; i < m; ++i) ce.h[i][x] = -ce.h[i][x];
    for (int i = 0; i < n; ++i) ce.u[i][x] = -ce.u[i][x];
  };
  int next = 0;  // next pivot column slot
  for (int row = 0; row < m && next < n; ++row) {
    // Gcd-reduce the active part of this row until at most one nonzero stays.
    while (true) {
      int best = -1;
      for (int j = next; j < n; ++j)
        if (ce.h[row][j] != 0 && (best < 0 || abs(ce.h[row][j]) < abs(ce.h[row][best]))) best = j;
      if (best < 0) break;  // row is zero on active columns
      bool lone = true;
      for (int j = next; j < n; ++j) {
        if (j == best || ce.h[row][j] == 0) continue;
        Int q = ce.h[row][j] / ce.h[row][best];  // truncated division is fine:
        col_sub(j, best, q);                     // remainders shrink every pass
        if (ce.h[row][j] != 0) lone = false;
      }
      if (lone) {
        col_swap(next, best);
        if (ce.h[row][next] < 0) col_negate(next);
        ce.pivots.emplace_back(row, next);
        ++next;
        break;
      }
    }
  }
  return ce;
}

// Basis of the integer kernel { x in Z^n : A x = 0 }. The basis is saturated
// (it spans the rational kernel as well), because the transform is unimodular.
inline std::vector<IntVec> kernel_basis(const IntMat& a) {
  if (a.empty()) {
    // No constraints: kernel is all of Z^n, but n is unknown from an empty
    // matrix; callers must pass explicit zero rows instead.
    return {};
  }
  ColumnEchelon ce = column_echelon(a);
  const int n = static_cast<int>(ce.u.size());
  const int r = static_cast<int>(ce.pivots.size());
  std::vector<IntVec> basis;
  for (int j = r; j < n; ++j) {
    IntVec v(n);
    for (int i = 0; i < n; ++i) v[i] = ce.u[i][j];
    basis.push_back(std::move(v));
  }
  return basis;
}

// One integer solution of A x = b, if any.
inline std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  ColumnEchelon ce = column_echelon(a);
  IntVec y(n, 0);
  IntVec res = b;
  std::size_t next_pivot = 0;
  for (int row = 0; row < m; ++row) {
    if (next_pivot < ce.pivots.size() && ce.pivots[next_pivot].first == row) {
      const int col = ce.pivots[next_pivot].second;
      const Int& piv = ce.h[row][col];
      if (res[row] % piv != 0) return std::nullopt;  // rational-only solution
      Int q = res[row] / piv;
      y[col] = q;
      if (q != 0)
        for (int i = row; i < m; ++i) res[i] -= q * ce.h[i][col];
      ++next_pivot;
    } else if (res[row] != 0) {
      return std::nullopt;  // inconsistent row
    }
  }
  // x = U y
  IntVec x(n, 0);
  for (int i = 0; i < n; ++i) {
    Int s = 0;
    for (int j = 0; j < n; ++j)
      if (y[j] != 0) s += ce.u[i][j] * y[j];
    x[i] = s;
  }
  return x;
}

// Canonical row Hermite normal form of the lattice spanned by the rows of `a`.
// Nonzero rows only; pivots positive; entries above a pivot reduced into
// [0, pivot).
inline IntMat row_hnf(IntMat a) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  int top = 0;  // rows above `top` are finished
  for (int col = 0; col < n && top < m; ++col) {
    while (true) {
      int best = -1;
      for (int i = top; i < m; ++i)
        if (a[i][col] != 0 && (best < 0 || abs(a[i][col]) < abs(a[best][col]))) best = i;
      if (best < 0) break;
      bool lone = true;
      for (int i = top; i < m; ++i) {
        if (i == best || a[i][col] == 0) continue;
        Int q = a[i][col] / a[best][col];
        for (int j = 0; j < n; ++j) a[i][j] -= q * a[best][j];
        if (a[i][col] != 0) lone = false;
      }
      if (lone) {
        std::swap(a[top], a[best]);
        if (a[top][col] < 0)
          for (int j = 0; j < n; ++j) a[top][j] = -a[top][j];
        // Reduce the rows above into [0, pivot).
        for (int i = 0; i < top; ++i) {
          Int q = a[i][col] / a[top][col];
          if (a[i][col] - q * a[top][col] < 0) q -= 1;  // floor division
          if (q != 0)
            for (int j = 0; j < n; ++j) a[i][j] -= q * a[top][j];
        }
        ++top;
        break;
      }
    }
  }
  a.resize(top);
  return a;
}

// ---------------------------------------------------------------------------
// F2 matrices
// ---------------------------------------------------------------------------

using F2Mat = std::vector<std::vector<std::uint8_t>>;

inline int rank_f2(F2Mat m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][col]) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int i = 0; i < rows; ++i)
      if (i != rank && m[i][col])
        for (int j = col; j < cols; ++j) m[i][j] ^= m[rank][j];
    ++rank;
  }
  return rank;
}

// Is `target` in the F2 row span of `rows`?
inline bool in_f2_span(const F2Mat& rows, const std::vector<std::uint8_t>& target) {
  F2Mat with = rows;
  with.push_back(target);
  return rank_f2(rows) == rank_f2(with);
}

// ---------------------------------------------------------------------------
// Exact rational linear programming
// ---------------------------------------------------------------------------

// maximize objective . x  subject to  eq: a.x == rhs,  ge: a.x >= rhs,
// with x free (unbounded) variables.
struct LinearConstraint {
  std::vector<Rat> a;
  Rat rhs;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<LinearConstraint> eq;
  std::vector<LinearConstraint> ge;
  std::vector<Rat> objective;  // empty means "feasibility only"
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rat value;           // objective value when Optimal
  std::vector<Rat> x;  // a feasible (and optimal) point when Optimal
};

namespace detail {

// Textbook two-phase simplex on  min c.y  s.t.  T y = b, y >= 0  with Bland's
// anti-cycling rule. Returns nullopt when infeasible; sets *unbounded when the
// phase-2 objective is unbounded below.
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rat>> t, std::vector<Rat> b) : t_(std::move(t)), b_(std::move(b)) {
    m_ = static_cast<int>(t_.size());
    n_ = m_ == 0 ? 0 : static_cast<int>(t_[0].size());
    for (int i = 0; i < m_; ++i)
      if (b_[i] < Rat(0)) {
        for (auto& v : t_[i]) v = -v;
        b_[i] = -b_[i];
      }
  }

  // Phase 1: drive artificial variables to zero. True iff feasible.
  bool phase1() {
    basis_.assign(m_, -1);
    // Append an artificial identity block.
    for (int i = 0; i < m_; ++i) {
      for (int k = 0; k < m_; ++k) t_[i].push_back(i == k ? Rat(1) : Rat(0));
      basis_[i] = n_ + i;
    }
    std::vector<Rat> cost(n_ + m_, Rat(0));
    for (int j = n_; j < n_ + m_; ++j) cost[j] = Rat(1);
    bool unbounded = false;
    Rat opt = run(cost, &unbounded);
    if (opt != Rat(0)) return false;
    // Pivot any artificial still in the basis out (or its row is redundant).
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (t_[i][j] != Rat(0)) { enter = j; break; }
      if (enter >= 0) pivot(i, enter);
      // else: redundant row; harmless to keep (artificial stays at value 0).
    }
    for (auto& row : t_) row.resize(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_) basis_[i] = -2;  // marks a redundant zero row
    return true;
  }

  // Phase 2 on the original columns. Returns the optimal value of min c.y.
  Rat phase2(const std::vector<Rat>& cost, bool* unbounded) { return run(cost, unbounded); }

  std::vector<Rat> solution() const {
    std::vector<Rat> y(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && basis_[i] < n_) y[basis_[i]] = b_[i];
    return y;
  }

 private:
  void pivot(int row, int col) {
    Rat inv = Rat(1) / t_[row][col];
    for (auto& v : t_[row]) v *= inv;
    b_[row] *= inv;
    const int width = static_cast<int>(t_[row].size());
    for (int i = 0; i < m_; ++i) {
      if (i == row || t_[i][col] == Rat(0)) continue;
      Rat f = t_[i][col];
      for (int j = 0; j < width; ++j) t_[i][j] -= f * t_[row][j];
      b_[i] -= f * b_[row];
    }
    basis_[row] = col;
  }

  Rat run(const std::vector<Rat>& cost, bool* unbounded) {
    *unbounded = false;
    const int width = static_cast<int>(cost.size());
    while (true) {
      // Reduced costs via the basic solution's dual: z_j = c_j - c_B . T_j.
      std::vector<Rat> reduced(width);
      for (int j = 0; j < width; ++j) {
        Rat z = cost[j];
        for (int i = 0; i < m_; ++i)
          if (basis_[i] >= 0 && t_[i][j] != Rat(0)) z -= cost[basis_[i]] * t_[i][j];
        reduced[j] = z;
      }
      int enter = -1;  // Bland: smallest index with negative reduced cost
      for (int j = 0; j < width; ++j)
        if (reduced[j] < Rat(0)) { enter = j; break; }
      if (enter < 0) break;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < 0 || t_[i][enter] <= Rat(0)) continue;
        Rat ratio = b_[i] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        *unbounded = true;
        return Rat(0);
      }
      pivot(leave, enter);
    }
    Rat value(0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0) value += cost[basis_[i]] * b_[i];
    return value;
  }

  std::vector<std::vector<Rat>> t_;
  std::vector<Rat> b_;
  std::vector<int> basis_;
  int m_ = 0, n_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& p) {
  // Standard form: free x -> u - v with u, v >= 0; `ge` rows get a surplus
  // variable: a.x - s = rhs, s >= 0.
  const int n = p.num_vars;
  if (p.eq.empty() && p.ge.empty()) {
    // Unconstrained: the origin is feasible; any nonzero objective is
    // unbounded over free variables.
    LpSolution out;
    const bool flat = std::all_of(p.objective.begin(), p.objective.end(),
                                  [](const Rat& c) { return c == Rat(0); });
    out.status = flat ? LpStatus::Optimal : LpStatus::Unbounded;
    out.value = Rat(0);
    out.x.assign(n, Rat(0));
    return out;
  }
  const int num_ge = static_cast<int>(p.ge.size());
  const int cols = 2 * n + num_ge;
  std::vector<std::vector<Rat>> t;
  std::vector<Rat> b;
  auto push_row = [&](const LinearConstraint& c, int surplus_index) {
    std::vector<Rat> row(cols, Rat(0));
    for (int j = 0; j < n; ++j) {
      row[j] = c.a[j];
      row[n + j] = -c.a[j];
    }
    if (surplus_index >= 0) row[2 * n + surplus_index] = Rat(-1);
    t.push_back(std::move(row));
    b.push_back(c.rhs);
  };
  for (const auto& c : p.eq) push_row(c, -1);
  for (int i = 0; i < num_ge; ++i) push_row(p.ge[i], i);

  detail::Simplex s(std::move(t), std::move(b));
  LpSolution out;
  if (!s.phase1()) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  std::vector<Rat> cost(cols, Rat(0));
  for (int j = 0; j < n && j < static_cast<int>(p.objective.size()); ++j) {
    cost[j] = -p.objective[j];  // maximize obj == minimize -obj
    cost[n + j] = p.objective[j];
  }
  bool unbounded = false;
  Rat value = s.phase2(cost, &unbounded);
  if (unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = -value;
  std::vector<Rat> y = s.solution();
  out.x.resize(n);
  for (int j = 0; j < n; ++j) out.x[j] = y[j] - y[n + j];
  return out;
}

// Exact bounds of a coordinate over a polyhedron; nullopt when unbounded.
inline std::optional<Rat> maximize_coordinate(LpProblem p, int coord, bool negate) {
  p.objective.assign(p.num_vars, Rat(0));
  p.objective[coord] = negate ? Rat(-1) : Rat(1);
  LpSolution s = solve_lp(p);
  if (s.status == LpStatus::Unbounded) return std::nullopt;
  if (s.status == LpStatus::Infeasible) throw std::runtime_error("maximize_coordinate: infeasible");
  return negate ? -s.value : s.value;
}

// Coordinates of v in the integer row span of `rows` (rows assumed linearly
// independent); nullopt when v lies outside the lattice.
inline std::optional<IntVec> lattice_coordinates(const IntMat& rows, const IntVec& v) {
  const int r = static_cast<int>(rows.size());
  if (r == 0) {
    for (const Int& e : v)
      if (e != 0) return std::nullopt;
    return IntVec{};
  }
  const int n = static_cast<int>(rows[0].size());
  IntMat at(n, IntVec(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) at[j][i] = rows[i][j];
  return solve_integer(at, v);
}

}  // namespace hfw
