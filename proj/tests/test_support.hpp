#pragma once

// Shared helpers for the unit suite and the acceptance runner: random filtered
// complexes with known homology, random univariate Laurent matrices, and a
// dense determinant over the group ring (for transform certificates).

#include "hfw/groupring.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hfw::testing {

// A filtered F2 complex with `pairs` unit pairings and `expected_dim` surviving
// homology dimension, built as a conjugated pure-pairing differential:
//   d = T d0 T^{-1} with d0(a_i) = b_i and T a product of elementary basis
// changes e_y <- e_y + e_x restricted to filtration(x) < filtration(y), which
// keeps every differential entry strictly filtration-decreasing and keeps the
// pairing entries equal to 1.
struct RandomFilteredComplex {
  BlockComplex complex;
  int expected_dim = 0;
};

inline RandomFilteredComplex make_random_filtered_complex(std::mt19937& rng) {
  const int p = std::uniform_int_distribution<int>(1, 15)(rng);
  const int max_h = std::min(10, 40 - 2 * p);
  const int h = std::uniform_int_distribution<int>(0, max_h)(rng);
  const int n = 2 * p + h;

  RandomFilteredComplex out;
  out.expected_dim = h;
  BlockComplex& c = out.complex;
  c.ring_rank = 0;

  // Index layout: a_i = i, b_i = p + i, h_j = 2p + j.
  std::vector<long long> filt(n);
  for (int i = 0; i < p; ++i) {
    filt[i] = 10 * i + 1;       // a_i
    filt[p + i] = 10 * i;       // b_i, just below its partner
  }
  for (int j = 0; j < h; ++j) filt[2 * p + j] = 10 * j + 5;
  for (int i = 0; i < n; ++i) {
    c.names.push_back("g" + std::to_string(i));
    c.filtration.push_back(Rat(Int(filt[i])));
  }

  std::vector<std::vector<std::uint8_t>> d(n, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < p; ++i) d[p + i][i] = 1;  // d(a_i) = b_i

  const int ops = std::uniform_int_distribution<int>(n, 4 * n)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < ops; ++k) {
    int x = pick(rng), y = pick(rng);
    if (x == y || filt[x] >= filt[y]) continue;
    // Conjugate by C = I + e_{x,y}: first d <- d C (col y += col x), then
    // d <- C d (row x += row y).
    for (int i = 0; i < n; ++i) d[i][y] ^= d[i][x];
    for (int j = 0; j < n; ++j) d[x][j] ^= d[y][j];
  }

  c.d = GrMatrix(n, n);
  const GroupRingElement one = GroupRingElement::one(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j]) c.d.set(i, j, one);
  for (int i = 0; i < p; ++i) c.pairs.emplace_back(i, p + i);  // area-ascending
  return out;
}

inline F2Mat to_f2(const GrMatrix& m) {
  F2Mat out(m.rows(), std::vector<std::uint8_t>(m.cols(), 0));
  for (const auto& [rc, v] : m.entries()) out[rc.first][rc.second] = 1;
  return out;
}

// F2 homology dimension of a square differential: n - 2 * rank.
inline int f2_homology_dim(const GrMatrix& d) { return d.cols() - 2 * rank_f2(to_f2(d)); }

// Random univariate Laurent element with support in [lo, hi] and at most
// `max_terms` monomials (possibly zero).
inline GroupRingElement random_laurent(std::mt19937& rng, int lo, int hi, int max_terms) {
  GroupRingElement e = GroupRingElement::zero(1);
  const int terms = std::uniform_int_distribution<int>(0, max_terms)(rng);
  std::uniform_int_distribution<int> exp(lo, hi);
  for (int i = 0; i < terms; ++i)
    e += GroupRingElement::monomial(ExpVec{static_cast<long long>(exp(rng))});
  return e;
}

// Random square univariate differential with d^2 = 0 and known homology: start
// from d0(a_i) = g_i * b_i and conjugate by random elementary transvections.
struct RandomUnivariateComplex {
  GrMatrix d;
  long long expected_f2_dim = 0;  // sum of widths of the nonzero g_i
  bool expected_nonvanishing = false;
};

inline RandomUnivariateComplex make_random_univariate_complex(std::mt19937& rng) {
  const int p = std::uniform_int_distribution<int>(1, 3)(rng);
  const int h = std::uniform_int_distribution<int>(0, 2)(rng);
  const int n = 2 * p + h;
  RandomUnivariateComplex out;
  out.d = GrMatrix(n, n);
  for (int i = 0; i < p; ++i) {
    GroupRingElement g = GroupRingElement::zero(1);
    while (g.is_zero()) g = random_laurent(rng, -2, 2, 3);
    out.d.set(p + i, i, g);
    out.expected_f2_dim += g.width();
  }
  out.expected_nonvanishing = out.expected_f2_dim > 0 || h > 0;
  if (h > 0) out.expected_f2_dim = -1;  // free part present: dimension infinite
  const int ops = std::uniform_int_distribution<int>(0, 12)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < ops; ++k) {
    int x = pick(rng), y = pick(rng);
    if (x == y) continue;
    GroupRingElement q = random_laurent(rng, -1, 1, 2);
    if (q.is_zero()) continue;
    // Conjugate by C = I + q e_{x,y} (its own inverse over F2 coefficients):
    // d <- C d C.
    GrMatrix cmat(n, n);
    for (int i = 0; i < n; ++i) cmat.set(i, i, GroupRingElement::one(1));
    cmat.add(x, y, q);
    out.d = cmat * out.d * cmat;
  }
  return out;
}

// Dense determinant over the group ring by Laplace expansion (signs are
// irrelevant in characteristic 2). Intended for small certificate checks.
inline GroupRingElement gr_det(const GrMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw Error("gr_det: not square");
  const int rank = [&] {
    for (const auto& [rc, v] : m.entries()) return v.rank();
    return 1;
  }();
  std::vector<std::vector<GroupRingElement>> a(n, std::vector<GroupRingElement>(n, GroupRingElement::zero(rank)));
  for (const auto& [rc, v] : m.entries()) a[rc.first][rc.second] = v;
  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) cols[i] = i;
  std::function<GroupRingElement(int, std::vector<int>&)> go = [&](int row, std::vector<int>& cs) {
    if (cs.empty()) return GroupRingElement::one(rank);
    GroupRingElement sum = GroupRingElement::zero(rank);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (a[row][cs[k]].is_zero()) continue;
      std::vector<int> rest;
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (j != k) rest.push_back(cs[j]);
      sum += a[row][cs[k]] * go(row + 1, rest);
    }
    return sum;
  };
  return go(0, cols);
}

}  // namespace hfw::testing
