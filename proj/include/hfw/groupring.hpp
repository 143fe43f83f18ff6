#pragma once

// Exact algebra over the group ring F2[Z^r]:
//   - GroupRingElement: finite sets of integer exponent vectors (coefficient 1
//     each; adding a monomial twice cancels it),
//   - SparseMatrix<Ring>: sparse rectangular matrices, entry (row, col) =
//     (target, source), so (M e_src) = sum_tgt M[tgt,src] e_tgt,
//   - cancellation_reduce: collapse unit-paired generator pairs of a filtered
//     complex, with the inverse realized as a finite geometric series,
//   - snf_laurent / homology_univariate: Smith normal form and homology over
//     the univariate Laurent ring F2[t, 1/t] (units are monomials, Euclidean
//     function is the support width),
//   - augment / certify_nonvanishing: the monomial -> 1 specialization and the
//     rank certificate it supports.

#include "hfw/errors.hpp"
#include "hfw/exact_linalg.hpp"
#include "hfw/numeric.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hfw {

using ExpVec = std::vector<long long>;

// ---------------------------------------------------------------------------
// GroupRingElement
// ---------------------------------------------------------------------------

class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(int rank) : rank_(rank) {}

  static GroupRingElement zero(int rank) { return GroupRingElement(rank); }
  static GroupRingElement one(int rank) { return monomial(ExpVec(rank, 0)); }
  static GroupRingElement monomial(ExpVec v) {
    GroupRingElement e(static_cast<int>(v.size()));
    e.terms_.insert(std::move(v));
    return e;
  }
  // Univariate convenience: c0 + c1*t + ... given as exponents present.
  static GroupRingElement laurent(std::initializer_list<long long> exponents) {
    GroupRingElement e(1);
    for (long long k : exponents) e.toggle(ExpVec{k});
    return e;
  }

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_unit() const { return terms_.size() == 1; }
  bool is_one() const { return terms_.size() == 1 && *terms_.begin() == ExpVec(rank_, 0); }
  std::size_t term_count() const { return terms_.size(); }
  const std::set<ExpVec>& terms() const { return terms_; }

  GroupRingElement unit_inverse() const {
    if (!is_unit()) throw Error("unit_inverse: element is not a unit");
    ExpVec v = *terms_.begin();
    for (auto& c : v) c = -c;
    return monomial(std::move(v));
  }

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    GroupRingElement out(std::max(a.rank_, b.rank_));
    out.terms_ = a.terms_;
    for (const auto& t : b.terms_) out.toggle(t);
    return out;
  }

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    GroupRingElement out(std::max(a.rank_, b.rank_));
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        ExpVec s(ta.size());
        for (std::size_t i = 0; i < ta.size(); ++i) s[i] = ta[i] + tb[i];
        out.toggle(s);
      }
    return out;
  }

  GroupRingElement& operator+=(const GroupRingElement& o) { return *this = *this + o; }

  bool operator==(const GroupRingElement& o) const {
    return rank_ == o.rank_ && terms_ == o.terms_;
  }
  bool operator!=(const GroupRingElement& o) const { return !(*this == o); }
  bool operator<(const GroupRingElement& o) const { return terms_ < o.terms_; }

  // Univariate (rank-1) support window.
  long long min_exp() const { return (*terms_.begin())[0]; }
  long long max_exp() const { return (*terms_.rbegin())[0]; }
  long long width() const { return is_zero() ? -1 : max_exp() - min_exp(); }

  // F2 augmentation: every monomial specializes to 1.
  bool augmented() const { return terms_.size() % 2 == 1; }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += "+";
      bool trivial = true;
      std::string mono;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0) continue;
        trivial = false;
        if (!mono.empty()) mono += "*";
        mono += (t.size() == 1 ? var : var + std::to_string(i));
        if (t[i] != 1) mono += "^" + std::to_string(t[i]);
      }
      out += trivial ? "1" : mono;
    }
    return out;
  }

 private:
  void toggle(const ExpVec& v) {
    auto it = terms_.find(v);
    if (it == terms_.end())
      terms_.insert(v);
    else
      terms_.erase(it);
  }

  int rank_ = 0;
  std::set<ExpVec> terms_;
};

inline GroupRingElement gr_add(const GroupRingElement& a, const GroupRingElement& b) { return a + b; }
inline GroupRingElement gr_mul(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }
inline bool gr_is_unit(const GroupRingElement& a) { return a.is_unit(); }

// ---------------------------------------------------------------------------
// SparseMatrix
// ---------------------------------------------------------------------------

template <typename Ring>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::map<std::pair<int, int>, Ring>& entries() const { return entries_; }

  void set(int r, int c, const Ring& v) {
    if (v.is_zero())
      entries_.erase({r, c});
    else
      entries_[{r, c}] = v;
  }

  void add(int r, int c, const Ring& v) {
    auto it = entries_.find({r, c});
    if (it == entries_.end()) {
      set(r, c, v);
    } else {
      Ring s = it->second + v;
      if (s.is_zero())
        entries_.erase(it);
      else
        it->second = std::move(s);
    }
  }

  const Ring* find(int r, int c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool is_zero() const { return entries_.empty(); }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out = a;
    for (const auto& [rc, v] : b.entries_) out.add(rc.first, rc.second, v);
    return out;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows_, b.cols_);
    // Group b's entries by column for cache of a's columns keyed by b's rows.
    for (const auto& [rc_b, vb] : b.entries_) {
      const int k = rc_b.first, c = rc_b.second;
      for (const auto& [rc_a, va] : a.entries_) {
        if (rc_a.second != k) continue;
        out.add(rc_a.first, c, va * vb);
      }
    }
    return out;
  }

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::map<std::pair<int, int>, Ring> entries_;
};

using GrMatrix = SparseMatrix<GroupRingElement>;

inline bool d_squared_check(const GrMatrix& m) { return (m * m).is_zero(); }

inline F2Mat augment(const GrMatrix& m) {
  F2Mat out(m.rows(), std::vector<std::uint8_t>(m.cols(), 0));
  for (const auto& [rc, v] : m.entries()) out[rc.first][rc.second] = v.augmented() ? 1 : 0;
  return out;
}

// Sound nonvanishing certificate for a finite free complex over F2[Z^r] with
// d^2 = 0: if the complex were acyclic it would be contractible (finite free
// over a ring of finite global dimension), so every specialization would be
// acyclic too. Hence a nonzero F2 homology after the monomial -> 1
// specialization certifies nonzero homology upstairs.
inline bool certify_nonvanishing(const GrMatrix& d) {
  const int n = d.cols();
  const int r = rank_f2(augment(d));
  return n - 2 * r > 0;
}

// ---------------------------------------------------------------------------
// Cancellation of unit-paired generators in a filtered complex
// ---------------------------------------------------------------------------

struct BlockComplex {
  int ring_rank = 0;
  std::vector<std::string> names;            // generator labels
  std::vector<Rat> filtration;               // one value per generator
  GrMatrix d;                                // entry (target, source)
  std::vector<std::pair<int, int>> pairs;    // (a, b) with d[b,a] a unit
};

struct ReducedComplex {
  int ring_rank = 0;
  std::vector<int> kept;                     // original indices of survivors
  std::vector<std::string> names;
  std::vector<Rat> filtration;
  GrMatrix d;                                // over the survivors, reindexed
};

inline ReducedComplex cancellation_reduce(const BlockComplex& c) {
  const int n = static_cast<int>(c.names.size());

  // Strictly decreasing filtration is what makes the geometric series finite.
  for (const auto& [rc, v] : c.d.entries()) {
    if (!(c.filtration[rc.second] > c.filtration[rc.first]))
      throw NotNilpotent("differential entry " + c.names[rc.second] + " -> " + c.names[rc.first] +
                         " does not decrease the filtration");
  }

  std::vector<int> role(n, 0);  // 0 = kept, 1 = a-side, 2 = b-side
  std::vector<int> pair_index(n, -1);
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    auto [a, b] = c.pairs[i];
    if (role[a] != 0 || role[b] != 0) throw PairingNotIdentityLike("generator paired twice");
    role[a] = 1;
    role[b] = 2;
    pair_index[a] = pair_index[b] = static_cast<int>(i);
    const GroupRingElement* u = c.d.find(b, a);
    if (u == nullptr || !u->is_unit())
      throw PairingNotIdentityLike("pairing entry " + c.names[a] + " -> " + c.names[b] +
                                   " is not a unit");
  }
  std::vector<int> kept;
  for (int i = 0; i < n; ++i)
    if (role[i] == 0) kept.push_back(i);
  std::vector<int> kept_pos(n, -1);
  for (std::size_t i = 0; i < kept.size(); ++i) kept_pos[kept[i]] = static_cast<int>(i);

  const int np = static_cast<int>(c.pairs.size());
  const int nh = static_cast<int>(kept.size());

  // Normalize each pairing entry to 1 by scaling the a-side basis vector:
  // column a of d is multiplied by the unit inverse.
  std::vector<GroupRingElement> scale(np, GroupRingElement::one(c.ring_rank));
  for (int i = 0; i < np; ++i) scale[i] = c.d.find(c.pairs[i].second, c.pairs[i].first)->unit_inverse();

  // Blocks of the (normalized) differential: phi = I + k : A -> B,
  // p : A -> H, nmat : H -> B, l : H -> H.
  GrMatrix kmat(np, np), pmat(nh, np), nmat(np, nh), lmat(nh, nh);
  for (const auto& [rc, v] : c.d.entries()) {
    const int tgt = rc.first, src = rc.second;
    if (role[src] == 1 && role[tgt] == 2) {
      const int col = pair_index[src], row = pair_index[tgt];
      GroupRingElement w = v * scale[col];
      if (row == col) {
        if (!w.is_one()) throw PairingNotIdentityLike("normalization failed");  // unreachable
      } else {
        kmat.set(row, col, w);
      }
    } else if (role[src] == 1 && role[tgt] == 0) {
      pmat.set(kept_pos[tgt], pair_index[src], v * scale[pair_index[src]]);
    } else if (role[src] == 0 && role[tgt] == 2) {
      nmat.set(pair_index[tgt], kept_pos[src], v);
    } else if (role[src] == 0 && role[tgt] == 0) {
      lmat.set(kept_pos[tgt], kept_pos[src], v);
    }
    // Entries with source b or target a never enter the reduced differential.
  }

  // (I + k)^{-1} = sum k^i; the filtration bounds the nilpotency degree by np.
  GrMatrix series(np, np), power(np, np);
  for (int i = 0; i < np; ++i) {
    series.set(i, i, GroupRingElement::one(c.ring_rank));
    power.set(i, i, GroupRingElement::one(c.ring_rank));
  }
  int steps = 0;
  while (true) {
    power = power * kmat;
    if (power.is_zero()) break;
    if (++steps > np) throw NotNilpotent("pairing block is not nilpotent");
    series = series + power;
  }

  ReducedComplex out;
  out.ring_rank = c.ring_rank;
  out.kept = kept;
  for (int i : kept) {
    out.names.push_back(c.names[i]);
    out.filtration.push_back(c.filtration[i]);
  }
  out.d = lmat + pmat * series * nmat;

  if (d_squared_check(c.d) && !d_squared_check(out.d))
    throw Error("cancellation_reduce: output differential does not square to zero");
  return out;
}

// ---------------------------------------------------------------------------
// Univariate Laurent ring helpers
// ---------------------------------------------------------------------------

namespace laurent {

inline void require_univariate(const GroupRingElement& e) {
  if (e.rank() != 1) throw MultivariateUnsupported("expected exponents in a single Z factor");
}

// a = q*b + r with r == 0 or width(r) < width(b).
inline std::pair<GroupRingElement, GroupRingElement> divmod(const GroupRingElement& a,
                                                            const GroupRingElement& b) {
  require_univariate(b);
  if (b.is_zero()) throw Error("laurent division by zero");
  GroupRingElement q = GroupRingElement::zero(1);
  GroupRingElement r = a;
  const long long wb = b.width();
  while (!r.is_zero() && r.width() >= wb) {
    // Cancel the top term of r against the top term of b.
    GroupRingElement shift = GroupRingElement::monomial(ExpVec{r.max_exp() - b.max_exp()});
    q += shift;
    r += shift * b;  // subtraction == addition over F2
  }
  return {q, r};
}

inline bool divides(const GroupRingElement& b, const GroupRingElement& a) {
  if (a.is_zero()) return true;
  return divmod(a, b).second.is_zero();
}

// Multiply by a monomial unit so the lowest exponent is 0.
inline GroupRingElement normalize(const GroupRingElement& e) {
  if (e.is_zero()) return e;
  require_univariate(e);
  return e * GroupRingElement::monomial(ExpVec{-e.min_exp()});
}

}  // namespace laurent

// ---------------------------------------------------------------------------
// Smith normal form over F2[t, 1/t]
// ---------------------------------------------------------------------------

struct SnfResult {
  std::vector<GroupRingElement> factors;  // nonzero invariant factors, each dividing the next
  GrMatrix s;                             // the diagonal form, rows x cols
  GrMatrix u, u_inv;                      // rows x rows,  u * m * v == s,  u * u_inv == I
  GrMatrix v, v_inv;                      // cols x cols
};

inline SnfResult snf_laurent(const GrMatrix& m) {
  for (const auto& [rc, v] : m.entries()) laurent::require_univariate(v);
  const int rows = m.rows(), cols = m.cols();
  const GroupRingElement zero = GroupRingElement::zero(1);

  std::vector<std::vector<GroupRingElement>> w(rows, std::vector<GroupRingElement>(cols, zero));
  for (const auto& [rc, v] : m.entries()) w[rc.first][rc.second] = v;

  auto ident = [&](int k) {
    std::vector<std::vector<GroupRingElement>> id(k, std::vector<GroupRingElement>(k, zero));
    for (int i = 0; i < k; ++i) id[i][i] = GroupRingElement::one(1);
    return id;
  };
  auto u = ident(rows), u_inv = ident(rows), v = ident(cols), v_inv = ident(cols);

  // Row op helpers keep u * m_original * v == w and the explicit inverses in
  // sync. Over F2 coefficients, "add q times" operations are involutions.
  auto row_add = [&](int dst, int src, const GroupRingElement& q) {  // row dst += q * row src
    for (int j = 0; j < cols; ++j) w[dst][j] += q * w[src][j];
    for (int j = 0; j < rows; ++j) u[dst][j] += q * u[src][j];
    for (int i = 0; i < rows; ++i) u_inv[i][src] += q * u_inv[i][dst];
  };
  auto col_add = [&](int dst, int src, const GroupRingElement& q) {  // col dst += q * col src
    for (int i = 0; i < rows; ++i) w[i][dst] += q * w[i][src];
    for (int i = 0; i < cols; ++i) v[i][dst] += q * v[i][src];
    for (int j = 0; j < cols; ++j) v_inv[src][j] += q * v_inv[dst][j];
  };
  auto row_swap = [&](int x, int y) {
    if (x == y) return;
    std::swap(w[x], w[y]);
    std::swap(u[x], u[y]);
    for (int i = 0; i < rows; ++i) std::swap(u_inv[i][x], u_inv[i][y]);
  };
  auto col_swap = [&](int x, int y) {
    if (x == y) return;
    for (int i = 0; i < rows; ++i) std::swap(w[i][x], w[i][y]);
    for (int i = 0; i < cols; ++i) std::swap(v[i][x], v[i][y]);
    std::swap(v_inv[x], v_inv[y]);
  };
  auto row_scale = [&](int x, const GroupRingElement& unit) {
    for (int j = 0; j < cols; ++j) w[x][j] = unit * w[x][j];
    for (int j = 0; j < rows; ++j) u[x][j] = unit * u[x][j];
    const GroupRingElement inv = unit.unit_inverse();
    for (int i = 0; i < rows; ++i) u_inv[i][x] = inv * u_inv[i][x];
  };

  SnfResult out;
  const int bound = std::min(rows, cols);
  for (int t = 0; t < bound; ++t) {
    // Pick the nonzero entry of minimal support width in the working corner.
    int pr = -1, pc = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (!w[i][j].is_zero() && (pr < 0 || w[i][j].width() < w[pr][pc].width())) {
          pr = i;
          pc = j;
        }
    if (pr < 0) break;
    row_swap(t, pr);
    col_swap(t, pc);

    while (true) {
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (w[i][t].is_zero()) continue;
        auto [q, r] = laurent::divmod(w[i][t], w[t][t]);
        row_add(i, t, q);
        if (!w[i][t].is_zero()) {  // remainder with smaller width: promote it
          row_swap(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (w[t][j].is_zero()) continue;
        auto [q, r] = laurent::divmod(w[t][j], w[t][t]);
        col_add(j, t, q);
        if (!w[t][j].is_zero()) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Enforce the divisibility chain: the pivot must divide every entry of
      // the remaining block; otherwise fold the offending row in and redo.
      bool chain_ok = true;
      for (int i = t + 1; i < rows && chain_ok; ++i)
        for (int j = t + 1; j < cols && chain_ok; ++j)
          if (!laurent::divides(w[t][t], w[i][j])) {
            row_add(t, i, GroupRingElement::one(1));
            chain_ok = false;
          }
      if (chain_ok) break;
    }
    row_scale(t, GroupRingElement::monomial(ExpVec{-w[t][t].min_exp()}));
    out.factors.push_back(w[t][t]);
  }

  out.s = GrMatrix(rows, cols);
  for (std::size_t i = 0; i < out.factors.size(); ++i)
    out.s.set(static_cast<int>(i), static_cast<int>(i), out.factors[i]);
  auto to_sparse = [&](const std::vector<std::vector<GroupRingElement>>& dense, int r, int c) {
    GrMatrix sm(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (!dense[i][j].is_zero()) sm.set(i, j, dense[i][j]);
    return sm;
  };
  out.u = to_sparse(u, rows, rows);
  out.u_inv = to_sparse(u_inv, rows, rows);
  out.v = to_sparse(v, cols, cols);
  out.v_inv = to_sparse(v_inv, cols, cols);
  return out;
}

// ---------------------------------------------------------------------------
// Homology of a univariate complex
// ---------------------------------------------------------------------------

struct ModuleDescription {
  int free_rank = 0;
  std::vector<GroupRingElement> torsion;    // non-unit invariant factors
  bool nonvanishing = false;
  std::optional<long long> f2_dimension;    // finite iff free_rank == 0
};

// Homology of (R^n, d) over R = F2[t, 1/t], for square d with d^2 = 0.
inline ModuleDescription homology_univariate(const GrMatrix& d) {
  if (d.rows() != d.cols()) throw Error("homology_univariate: matrix is not square");
  if (!d_squared_check(d)) throw Error("homology_univariate: d^2 != 0");
  const int n = d.cols();

  SnfResult snf = snf_laurent(d);
  const int s = static_cast<int>(snf.factors.size());

  // ker d has basis the last n-s columns of V; im d is spanned by
  // U^{-1}(g_i e_i). Express the image in kernel coordinates via V^{-1}.
  GrMatrix rel(n - s, s);
  for (int i = 0; i < s; ++i) {
    // coords = V^{-1} * U^{-1} * (g_i e_i)
    std::vector<GroupRingElement> gen(n, GroupRingElement::zero(1));
    for (int r = 0; r < n; ++r) {
      const GroupRingElement* e = snf.u_inv.find(r, i);
      if (e != nullptr) gen[r] = *e * snf.factors[i];
    }
    for (int r = 0; r < n; ++r) {
      GroupRingElement c = GroupRingElement::zero(1);
      for (int k = 0; k < n; ++k) {
        const GroupRingElement* e = snf.v_inv.find(r, k);
        if (e != nullptr && !gen[k].is_zero()) c += *e * gen[k];
      }
      if (r < s) {
        if (!c.is_zero()) throw Error("homology_univariate: image escapes the kernel");
      } else if (!c.is_zero()) {
        rel.set(r - s, i, c);
      }
    }
  }

  SnfResult q = snf_laurent(rel);
  ModuleDescription out;
  out.free_rank = (n - s) - static_cast<int>(q.factors.size());
  long long dim = 0;
  for (const auto& g : q.factors)
    if (!g.is_unit()) {
      out.torsion.push_back(g);
      dim += g.width();
    }
  out.nonvanishing = out.free_rank > 0 || !out.torsion.empty();
  if (out.free_rank == 0) out.f2_dimension = dim;
  return out;
}

// Homology of an F2 complex (rank-0 group ring): dim = n - 2 * rank(d).
inline ModuleDescription homology_f2(const GrMatrix& d) {
  if (d.rows() != d.cols()) throw Error("homology_f2: matrix is not square");
  if (!d_squared_check(d)) throw Error("homology_f2: d^2 != 0");
  F2Mat a(d.rows(), std::vector<std::uint8_t>(d.cols(), 0));
  for (const auto& [rc, v] : d.entries()) a[rc.first][rc.second] = 1;
  const int r = rank_f2(a);
  ModuleDescription out;
  out.free_rank = d.cols() - 2 * r;
  out.nonvanishing = out.free_rank > 0;
  out.f2_dimension = out.free_rank;
  return out;
}

}  // namespace hfw
