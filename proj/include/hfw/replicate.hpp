#pragma once

// Machine checks for the symbolic deduction chains the workbench rests on:
//   - verify_star_formula: a three-pair block cancellation with symbolic
//     entries reproduces the closed-form surviving arrow,
//   - verify_count_relations: an exhaustive F2 sweep shows the thirteen count
//     relations force that arrow to vanish (and that no relation family is
//     redundant),
//   - verify_recursion_family: the d^2 = 0 constraints of a parametric complex
//     are exactly a product recursion on the counts, and acyclicity pins the
//     type-tied counts to 1,
//   - verify_survival_certificate: every d^2 = 0 completion of a partially
//     known 4x4 differential passes the specialization certificate,
//   - verify_parity_transfer: shipped domain data satisfies the composite-
//     domain identities that transfer a count parity between two classes.
//
// Every verifier returns a machine-readable transcript alongside its verdict.

#include "hfw/errors.hpp"
#include "hfw/exact_linalg.hpp"
#include "hfw/groupring.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hfw::replicate {

using json = nlohmann::json;

struct VerificationReport {
  bool passed = false;
  json transcript;
};

// ---------------------------------------------------------------------------
// Star formula: block cancellation with symbolic entries
// ---------------------------------------------------------------------------
//
// The symbolic ring is F2[Z^13]: twelve directions act as independent
// polynomial unknowns b1..b5, c1..c5, d1, d2 (the expansion is multilinear, so
// group-ring directions model polynomial unknowns faithfully) and the last
// direction is the distinguished Laurent variable e.

namespace detail {

inline const std::array<std::string, 12>& symbol_names() {
  static const std::array<std::string, 12> names = {"b1", "b2", "b3", "b4", "b5", "c1",
                                                    "c2", "c3", "c4", "c5", "d1", "d2"};
  return names;
}

inline GroupRingElement symbol(int idx) {
  ExpVec v(13, 0);
  v[idx] = 1;
  return GroupRingElement::monomial(v);
}

inline GroupRingElement laurent_dir(long long k) {
  ExpVec v(13, 0);
  v[12] = k;
  return GroupRingElement::monomial(v);
}

inline std::string symbolic_str(const GroupRingElement& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& t : e.terms()) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (int i = 0; i < 12; ++i) {
      if (t[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += symbol_names()[i];
      if (t[i] != 1) mono += "^" + std::to_string(t[i]);
    }
    if (t[12] != 0) {
      if (!mono.empty()) mono += "*";
      mono += "e";
      if (t[12] != 1) mono += "^" + std::to_string(t[12]);
    }
    out += mono.empty() ? "1" : mono;
  }
  return out;
}

// Coefficient of e^k as an element of the 12-symbol subring (e-exponent 0).
inline GroupRingElement laurent_coefficient(const GroupRingElement& e, long long k) {
  GroupRingElement out = GroupRingElement::zero(13);
  for (const auto& t : e.terms()) {
    if (t[12] != k) continue;
    ExpVec v = t;
    v[12] = 0;
    out += GroupRingElement::monomial(v);
  }
  return out;
}

// Specialize the twelve symbols to F2 values; e survives as a rank-1 Laurent
// variable. A monomial evaluates to 0 iff it contains a symbol set to 0.
inline GroupRingElement evaluate_symbols(const GroupRingElement& e, const std::array<int, 12>& val) {
  GroupRingElement out = GroupRingElement::zero(1);
  for (const auto& t : e.terms()) {
    bool alive = true;
    for (int i = 0; i < 12 && alive; ++i)
      if (t[i] != 0 && val[i] == 0) alive = false;
    if (alive) out += GroupRingElement::monomial(ExpVec{t[12]});
  }
  return out;
}

struct StarBlocks {
  GroupRingElement K, N1, N2, P, L;
};

inline StarBlocks star_blocks() {
  const GroupRingElement eplus = laurent_dir(1), eminus = laurent_dir(-1);
  auto b = [](int i) { return symbol(i - 1); };
  auto c = [](int i) { return symbol(4 + i); };
  auto d = [](int i) { return symbol(9 + i); };
  StarBlocks s;
  s.K = b(4) + c(4) * eminus;
  s.N1 = b(5) + c(5) * eplus;
  s.N2 = b(2) + c(2) * eminus + d(2) * eplus;
  s.P = b(3) + c(3) * eminus;
  s.L = b(1) + c(1) * eminus + d(1) * eplus;
  return s;
}

// The block complex: pairs (a_i, b_i) with identity pairing entries, two
// surviving generators h1, h2, and the five symbolic arrows.
inline BlockComplex star_block_complex(const StarBlocks& s, int ring_rank) {
  BlockComplex c;
  c.ring_rank = ring_rank;
  c.names = {"a1", "a2", "a3", "h1", "h2", "b1", "b2", "b3"};
  c.filtration = {Rat(Int(29)), Rat(Int(28)), Rat(Int(27)), Rat(Int(19)),
                  Rat(Int(18)), Rat(Int(9)),  Rat(Int(8)),  Rat(Int(7))};
  const GroupRingElement one = GroupRingElement::one(ring_rank);
  c.d = GrMatrix(8, 8);
  c.d.set(5, 0, one);   // pairing a1 -> b1
  c.d.set(6, 1, one);   // pairing a2 -> b2
  c.d.set(7, 2, one);   // pairing a3 -> b3
  c.d.set(6, 0, s.K);   // a1 -> b2
  c.d.set(5, 3, s.N1);  // h1 -> b1
  c.d.set(6, 3, s.N2);  // h1 -> b2
  c.d.set(4, 0, s.P);   // a1 -> h2
  c.d.set(4, 1, one);   // a2 -> h2
  c.d.set(4, 3, s.L);   // h1 -> h2
  c.pairs = {{0, 5}, {1, 6}, {2, 7}};
  return c;
}

}  // namespace detail

inline VerificationReport verify_star_formula() {
  const detail::StarBlocks s = detail::star_blocks();
  BlockComplex c = detail::star_block_complex(s, 13);
  ReducedComplex r = cancellation_reduce(c);

  GroupRingElement computed = GroupRingElement::zero(13);
  if (const GroupRingElement* e = r.d.find(1, 0)) computed = *e;
  const bool off_diagonal_only =
      r.d.find(0, 0) == nullptr && r.d.find(0, 1) == nullptr && r.d.find(1, 1) == nullptr;

  // The claimed closed form, multiplied out independently.
  const GroupRingElement expected = s.L + (s.P + s.K) * s.N1 + s.N2;

  // Its three Laurent coefficients, written out monomial by monomial.
  auto b = [](int i) { return detail::symbol(i - 1); };
  auto cc = [](int i) { return detail::symbol(4 + i); };
  auto dd = [](int i) { return detail::symbol(9 + i); };
  const GroupRingElement coeff0 =
      b(1) + b(2) + b(5) * b(3) + b(5) * b(4) + cc(5) * cc(3) + cc(5) * cc(4);
  const GroupRingElement coeff_minus = cc(1) + cc(2) + b(5) * cc(3) + b(5) * cc(4);
  const GroupRingElement coeff_plus = dd(1) + dd(2) + cc(5) * b(3) + cc(5) * b(4);

  const bool formula_matches = computed == expected;
  const bool coefficients_match = detail::laurent_coefficient(computed, 0) == coeff0 &&
                                  detail::laurent_coefficient(computed, -1) == coeff_minus &&
                                  detail::laurent_coefficient(computed, 1) == coeff_plus;

  VerificationReport out;
  out.passed = formula_matches && coefficients_match && off_diagonal_only;
  out.transcript = {
      {"computed", detail::symbolic_str(computed)},
      {"expected", detail::symbolic_str(expected)},
      {"coefficient_at_e0", detail::symbolic_str(coeff0)},
      {"coefficient_at_e_minus1", detail::symbolic_str(coeff_minus)},
      {"coefficient_at_e_plus1", detail::symbolic_str(coeff_plus)},
      {"formula_matches", formula_matches},
      {"coefficients_match", coefficients_match},
      {"reduced_matrix_strictly_triangular", off_diagonal_only},
  };
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive sweep over the 21 F2 count unknowns
// ---------------------------------------------------------------------------
//
// Bit layout: b1..b5 = 0..4, c1..c5 = 5..9, d1 = 10, d2 = 11,
//             b'3..b'6 = 12..15, c'3..c'6 = 16..19, d'6 = 20.

enum class RelationFamily { Sum12, Def6, Prod34, TieB, TieC };

namespace detail {

inline const char* family_name(RelationFamily f) {
  switch (f) {
    case RelationFamily::Sum12: return "sum12";
    case RelationFamily::Def6: return "def6";
    case RelationFamily::Prod34: return "prod34";
    case RelationFamily::TieB: return "tie_b";
    case RelationFamily::TieC: return "tie_c";
  }
  return "?";
}

struct CountRelation {
  const char* text;
  RelationFamily family;
  int (*eval)(std::uint32_t);  // returns the F2 value of the relation's lhs
};

inline int bit(std::uint32_t x, int i) { return (x >> i) & 1; }

// Named accessors for readability inside the relation table.
#define HFW_B(i) bit(x, (i) - 1)
#define HFW_C(i) bit(x, 4 + (i))
#define HFW_D(i) bit(x, 9 + (i))
#define HFW_BP(i) bit(x, 9 + (i))   // i = 3..6 -> bits 12..15
#define HFW_CP(i) bit(x, 13 + (i))  // i = 3..6 -> bits 16..19
#define HFW_DP6 bit(x, 20)

inline const std::vector<CountRelation>& count_relations() {
  static const std::vector<CountRelation> rels = {
      {"b1 + b2 + b'5*b5 + c'5*c5", RelationFamily::Sum12,
       [](std::uint32_t x) { return HFW_B(1) ^ HFW_B(2) ^ (HFW_BP(5) & HFW_B(5)) ^ (HFW_CP(5) & HFW_C(5)); }},
      {"c1 + c2 + c'5*b5", RelationFamily::Sum12,
       [](std::uint32_t x) { return HFW_C(1) ^ HFW_C(2) ^ (HFW_CP(5) & HFW_B(5)); }},
      {"d1 + d2 + b'5*c5", RelationFamily::Sum12,
       [](std::uint32_t x) { return HFW_D(1) ^ HFW_D(2) ^ (HFW_BP(5) & HFW_C(5)); }},
      {"b'6 + b'5*b5 + c'5*c5", RelationFamily::Def6,
       [](std::uint32_t x) { return HFW_BP(6) ^ (HFW_BP(5) & HFW_B(5)) ^ (HFW_CP(5) & HFW_C(5)); }},
      {"c'6 + c'5*b5", RelationFamily::Def6,
       [](std::uint32_t x) { return HFW_CP(6) ^ (HFW_CP(5) & HFW_B(5)); }},
      {"d'6 + b'5*c5", RelationFamily::Def6,
       [](std::uint32_t x) { return HFW_DP6 ^ (HFW_BP(5) & HFW_C(5)); }},
      {"b'3*b3 + b'4*b4 + c'3*c3 + c'4*c4 + b'6", RelationFamily::Prod34,
       [](std::uint32_t x) {
         return (HFW_BP(3) & HFW_B(3)) ^ (HFW_BP(4) & HFW_B(4)) ^ (HFW_CP(3) & HFW_C(3)) ^
                (HFW_CP(4) & HFW_C(4)) ^ HFW_BP(6);
       }},
      {"b'3*c3 + b'4*c4 + c'6", RelationFamily::Prod34,
       [](std::uint32_t x) { return (HFW_BP(3) & HFW_C(3)) ^ (HFW_BP(4) & HFW_C(4)) ^ HFW_CP(6); }},
      {"c'3*b3 + c'4*b4 + d'6", RelationFamily::Prod34,
       [](std::uint32_t x) { return (HFW_CP(3) & HFW_B(3)) ^ (HFW_CP(4) & HFW_B(4)) ^ HFW_DP6; }},
      {"b'3 + b'4", RelationFamily::TieB,
       [](std::uint32_t x) { return HFW_BP(3) ^ HFW_BP(4); }},
      {"b'4 + b5", RelationFamily::TieB,
       [](std::uint32_t x) { return HFW_BP(4) ^ HFW_B(5); }},
      {"c'3 + c'4", RelationFamily::TieC,
       [](std::uint32_t x) { return HFW_CP(3) ^ HFW_CP(4); }},
      {"c'4 + c5", RelationFamily::TieC,
       [](std::uint32_t x) { return HFW_CP(4) ^ HFW_C(5); }},
  };
  return rels;
}

// The three Laurent coefficients of the surviving arrow, as F2 functions of
// the unprimed unknowns.
inline int star_coeff_e0(std::uint32_t x) {
  return HFW_B(1) ^ HFW_B(2) ^ (HFW_B(5) & HFW_B(3)) ^ (HFW_B(5) & HFW_B(4)) ^
         (HFW_C(5) & HFW_C(3)) ^ (HFW_C(5) & HFW_C(4));
}
inline int star_coeff_eminus(std::uint32_t x) {
  return HFW_C(1) ^ HFW_C(2) ^ (HFW_B(5) & HFW_C(3)) ^ (HFW_B(5) & HFW_C(4));
}
inline int star_coeff_eplus(std::uint32_t x) {
  return HFW_D(1) ^ HFW_D(2) ^ (HFW_C(5) & HFW_B(3)) ^ (HFW_C(5) & HFW_B(4));
}

#undef HFW_B
#undef HFW_C
#undef HFW_D
#undef HFW_BP
#undef HFW_CP
#undef HFW_DP6

inline json assignment_to_json(std::uint32_t x) {
  static const std::array<const char*, 21> names = {
      "b1", "b2", "b3", "b4", "b5", "c1",  "c2",  "c3",  "c4",  "c5", "d1",
      "d2", "b'3", "b'4", "b'5", "b'6", "c'3", "c'4", "c'5", "c'6", "d'6"};
  json out = json::object();
  for (int i = 0; i < 21; ++i) out[names[i]] = bit(x, i);
  return out;
}

}  // namespace detail

// Sweep all 2^21 assignments of the count unknowns. With no family dropped,
// every assignment satisfying the thirteen relations must have all three star
// coefficients zero. Dropping a family searches for (and reports) a surviving
// assignment with a nonzero coefficient, demonstrating the family is load-
// bearing.
inline VerificationReport verify_count_relations(
    std::optional<RelationFamily> dropped = std::nullopt) {
  const auto& rels = detail::count_relations();
  std::uint64_t survivors = 0;
  std::optional<std::uint32_t> counterexample;
  const char* violated = nullptr;

  for (std::uint32_t x = 0; x < (1u << 21); ++x) {
    bool ok = true;
    for (const auto& r : rels) {
      if (dropped && r.family == *dropped) continue;
      if (r.eval(x)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++survivors;
    if (!counterexample) {
      if (detail::star_coeff_e0(x)) {
        counterexample = x;
        violated = "coefficient_at_e0";
      } else if (detail::star_coeff_eminus(x)) {
        counterexample = x;
        violated = "coefficient_at_e_minus1";
      } else if (detail::star_coeff_eplus(x)) {
        counterexample = x;
        violated = "coefficient_at_e_plus1";
      }
    }
  }

  VerificationReport out;
  out.passed = !counterexample.has_value();
  json rel_list = json::array();
  for (const auto& r : rels)
    rel_list.push_back({{"relation", r.text}, {"family", detail::family_name(r.family)}});
  out.transcript = {
      {"assignments_checked", 1u << 21},
      {"relations", rel_list},
      {"dropped_family", dropped ? json(detail::family_name(*dropped)) : json(nullptr)},
      {"survivors", survivors},
      {"counterexample", counterexample ? detail::assignment_to_json(*counterexample) : json(nullptr)},
      {"nonzero_coefficient", violated ? json(violated) : json(nullptr)},
      {"note", "the unknowns named with a prime are counts of a second class family; "
               "the two defining conventions for the primed 3/4 and 5/6 entries differ "
               "by a fixed lattice shift, and the relations are used exactly as stated"},
  };
  return out;
}

// ---------------------------------------------------------------------------
// Parametric recursion family
// ---------------------------------------------------------------------------
//
// Generators R_i, S_i, T_i, U_i (i = 1..n+1) and V, W, X, Y. Counts m, m' and
// m_k^i (k = 0..n, i = 1..4) with m_0^i = m_1^i = 1 forced. Arrows:
//   T_1     -> R_2 (1),            T_1     -> W (m)
//   T_k     -> R_{k+1} (m_k^2),    T_k     -> U_{k-1} (m_{n+2-k}^4)   k = 2..n
//   T_{n+1} -> U_n (1),            T_{n+1} -> X (m')
//   R_{k+1} -> S_k (m_{n+1-k}^3)                                      k = 1..n
//   U_k     -> S_{k+1} (m_k^1)                                        k = 1..n
//   V -> R_1, W -> S_1, X -> S_{n+1}, Y -> U_{n+1}  (all 1)

namespace detail {

struct RecursionAssignment {
  int m = 1, mp = 1;
  // counts[k][i-1] for k = 0..n; rows 0 and 1 are all ones.
  std::vector<std::array<int, 4>> counts;
};

inline RecursionAssignment decode_untied(int n, std::uint32_t bits) {
  RecursionAssignment a;
  a.counts.assign(n + 1, {1, 1, 1, 1});
  a.m = bit(bits, 0);
  a.mp = bit(bits, 1);
  for (int k = 2; k <= n; ++k)
    for (int i = 0; i < 4; ++i) a.counts[k][i] = bit(bits, 2 + 4 * (k - 2) + i);
  return a;
}

inline RecursionAssignment decode_tied(int n, std::uint32_t bits) {
  RecursionAssignment a;
  a.counts.assign(n + 1, {1, 1, 1, 1});
  for (int k = 2; k <= n; ++k) {
    const int mu = bit(bits, k - 2);
    a.counts[k] = {mu, mu, mu, mu};
  }
  a.m = a.counts[n][2];   // forced by d^2 = 0 in the tied model
  a.mp = a.counts[n][0];
  return a;
}

inline bool all_ones(int n, const RecursionAssignment& a) {
  if (a.m != 1 || a.mp != 1) return false;
  for (int k = 2; k <= n; ++k)
    for (int i = 0; i < 4; ++i)
      if (a.counts[k][i] != 1) return false;
  return true;
}

// The product relations that d^2 = 0 should be equivalent to.
inline bool recursion_relations_hold(int n, const RecursionAssignment& a) {
  if (a.m != a.counts[n][2]) return false;   // m = m_n^3
  if (a.mp != a.counts[n][0]) return false;  // m' = m_n^1
  for (int k = 2; k <= n; ++k) {
    const int lhs = a.counts[k][1] & a.counts[n + 1 - k][2];      // m_k^2 * m_{n+1-k}^3
    const int rhs = a.counts[n + 2 - k][3] & a.counts[k - 1][0];  // m_{n+2-k}^4 * m_{k-1}^1
    if (lhs != rhs) return false;
  }
  return true;
}

inline F2Mat recursion_differential(int n, const RecursionAssignment& a) {
  const int N = n + 1;
  auto R = [&](int i) { return i - 1; };
  auto S = [&](int i) { return N + i - 1; };
  auto T = [&](int i) { return 2 * N + i - 1; };
  auto U = [&](int i) { return 3 * N + i - 1; };
  const int V = 4 * N, W = 4 * N + 1, X = 4 * N + 2, Y = 4 * N + 3;
  const int G = 4 * N + 4;

  F2Mat d(G, std::vector<std::uint8_t>(G, 0));
  auto arrow = [&](int src, int tgt, int coeff) {
    if (coeff) d[tgt][src] ^= 1;
  };
  arrow(T(1), R(2), 1);
  arrow(T(1), W, a.m);
  for (int k = 2; k <= n; ++k) {
    arrow(T(k), R(k + 1), a.counts[k][1]);
    arrow(T(k), U(k - 1), a.counts[n + 2 - k][3]);
  }
  arrow(T(n + 1), U(n), 1);
  arrow(T(n + 1), X, a.mp);
  for (int k = 1; k <= n; ++k) {
    arrow(R(k + 1), S(k), a.counts[n + 1 - k][2]);
    arrow(U(k), S(k + 1), a.counts[k][0]);
  }
  arrow(V, R(1), 1);
  arrow(W, S(1), 1);
  arrow(X, S(n + 1), 1);
  arrow(Y, U(n + 1), 1);
  return d;
}

inline bool f2_square_is_zero(const F2Mat& d) {
  const int n = static_cast<int>(d.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int s = 0;
      for (int k = 0; k < n; ++k) s ^= d[i][k] & d[k][j];
      if (s) return false;
    }
  return true;
}

inline bool f2_acyclic(const F2Mat& d) {
  const int n = static_cast<int>(d.size());
  return n == 2 * rank_f2(d);
}

inline json recursion_assignment_to_json(int n, const RecursionAssignment& a) {
  json out = json::object();
  out["m"] = a.m;
  out["m'"] = a.mp;
  for (int k = 2; k <= n; ++k)
    for (int i = 0; i < 4; ++i)
      out["m_" + std::to_string(k) + "^" + std::to_string(i + 1)] = a.counts[k][i];
  return out;
}

}  // namespace detail

inline VerificationReport verify_recursion_family(int n) {
  if (n < 1 || n > 4)
    throw ParameterOutOfRange("recursion family parameter must be between 1 and 4, got " +
                              std::to_string(n));

  const int untied_bits = 2 + 4 * (n - 1);
  bool equivalence = true;            // d^2 = 0  <=>  product relations
  bool all_ones_acyclic = false;      // the all-ones assignment has H = 0
  std::optional<std::uint32_t> acyclic_not_all_ones;  // untied sweep: H = 0 without all-ones
  std::uint64_t d2_survivors = 0;

  for (std::uint32_t bits = 0; bits < (1u << untied_bits); ++bits) {
    const auto a = detail::decode_untied(n, bits);
    const F2Mat d = detail::recursion_differential(n, a);
    const bool d2 = detail::f2_square_is_zero(d);
    if (d2 != detail::recursion_relations_hold(n, a)) equivalence = false;
    if (!d2) continue;
    ++d2_survivors;
    const bool acyclic = detail::f2_acyclic(d);
    if (acyclic && detail::all_ones(n, a)) all_ones_acyclic = true;
    if (acyclic && !detail::all_ones(n, a) && !acyclic_not_all_ones) acyclic_not_all_ones = bits;
  }

  // Tied model: classes of the same shape share one count, so each level k
  // carries a single unknown mu_k (mu_0 = mu_1 = 1 forced, m = mu_n = m').
  std::vector<json> tied_survivors;
  bool tied_unique_all_ones = true;
  for (std::uint32_t bits = 0; bits < (1u << (n - 1)); ++bits) {
    const auto a = detail::decode_tied(n, bits);
    const F2Mat d = detail::recursion_differential(n, a);
    if (!detail::f2_square_is_zero(d) || !detail::f2_acyclic(d)) continue;
    tied_survivors.push_back(detail::recursion_assignment_to_json(n, a));
    if (!detail::all_ones(n, a)) tied_unique_all_ones = false;
  }
  if (tied_survivors.size() != 1) tied_unique_all_ones = false;

  json relations = json::array();
  relations.push_back("m = m_" + std::to_string(n) + "^3");
  relations.push_back("m' = m_" + std::to_string(n) + "^1");
  for (int k = 2; k <= n; ++k)
    relations.push_back("m_" + std::to_string(k) + "^2 * m_" + std::to_string(n + 1 - k) +
                        "^3 = m_" + std::to_string(n + 2 - k) + "^4 * m_" + std::to_string(k - 1) +
                        "^1");

  VerificationReport out;
  out.passed = equivalence && all_ones_acyclic && tied_unique_all_ones;
  out.transcript = {
      {"n", n},
      {"generators", 4 * (n + 1) + 4},
      {"relations_forced_by_d_squared", relations},
      {"d_squared_equivalent_to_relations", equivalence},
      {"d_squared_survivors", d2_survivors},
      {"all_ones_assignment_acyclic", all_ones_acyclic},
      {"untied_acyclic_counterexample",
       acyclic_not_all_ones
           ? detail::recursion_assignment_to_json(n, detail::decode_untied(n, *acyclic_not_all_ones))
           : json(nullptr)},
      {"note", "with all counts independent, acyclicity does not force every count to 1; "
               "tying counts of equal-shape classes (one unknown per level) restores uniqueness"},
      {"tied_survivors", tied_survivors},
      {"tied_unique_all_ones", tied_unique_all_ones},
  };
  return out;
}

// ---------------------------------------------------------------------------
// Survival certificate for a partially known 4x4 differential
// ---------------------------------------------------------------------------
//
// Generator 0 maps to generator 1 with coefficient 1+t after a shared unknown
// entry V cancels in characteristic 2; nothing maps into generator 0; the
// differential among generators 1..3 is a fully unknown F2 block. Every
// completion with d^2 = 0 must pass the specialization certificate.

inline VerificationReport verify_survival_certificate(bool mutate_unit_entry = false) {
  const GroupRingElement unit_entry =
      mutate_unit_entry ? GroupRingElement::laurent({1}) : GroupRingElement::laurent({0, 1});

  // The shared-entry cancellation: the base matrix and the correction both
  // carry V at position (2,0), so their sum is V-independent.
  bool v_cancels = true;
  GrMatrix column_part(4, 4);
  for (int v = 0; v <= 1; ++v) {
    GrMatrix base(4, 4), corr(4, 4);
    base.set(1, 0, GroupRingElement::laurent({0, 1}));
    if (v) base.set(2, 0, GroupRingElement::one(1));
    if (v) corr.set(2, 0, GroupRingElement::one(1));
    GrMatrix total = base + corr;
    if (v == 0) column_part = total;
    if (!(total == column_part)) v_cancels = false;
  }
  {
    // After cancellation: column 0 is (0, 1+t, 0, 0) and row 0 is zero.
    const GroupRingElement* e = column_part.find(1, 0);
    if (e == nullptr || !(*e == GroupRingElement::laurent({0, 1}))) v_cancels = false;
    for (int i = 0; i < 4; ++i) {
      if (i != 1 && column_part.find(i, 0) != nullptr) v_cancels = false;
      if (column_part.find(0, i) != nullptr) v_cancels = false;
    }
  }

  // Sweep the 2^9 completions of the unknown block.
  std::uint64_t completions = 0;
  json failures = json::array();
  int max_rank = 0;
  const GroupRingElement one = GroupRingElement::one(1);
  for (std::uint32_t bits = 0; bits < (1u << 9); ++bits) {
    GrMatrix d(4, 4);
    d.set(1, 0, unit_entry);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        if (detail::bit(bits, 3 * (i - 1) + (j - 1))) d.set(i, j, one);
    if (!d_squared_check(d)) continue;
    ++completions;
    const int rank = rank_f2(augment(d));
    max_rank = std::max(max_rank, rank);
    if (!certify_nonvanishing(d)) {
      json entry = json::object();
      entry["augmented_rank"] = rank;
      json block = json::array();
      for (int i = 1; i <= 3; ++i) {
        json row = json::array();
        for (int j = 1; j <= 3; ++j) row.push_back(detail::bit(bits, 3 * (i - 1) + (j - 1)));
        block.push_back(row);
      }
      entry["block"] = block;
      failures.push_back(entry);
    }
  }

  VerificationReport out;
  out.passed = v_cancels && failures.empty() && completions > 0;
  out.transcript = {
      {"shared_entry_cancels", v_cancels},
      {"distinguished_entry", unit_entry.str()},
      {"completions_with_d_squared_zero", completions},
      {"max_augmented_rank", max_rank},
      {"all_completions_certify", failures.empty()},
      {"failing_completions", failures},
      {"note", "certificate: generator count minus twice the augmented rank stays positive, "
               "so the specialized complex cannot be acyclic and neither can the original"},
  };
  return out;
}

// ---------------------------------------------------------------------------
// Parity transfer between two classes via composite-domain identities
// ---------------------------------------------------------------------------

namespace detail {

using DomainVec = std::map<std::string, long long>;

inline DomainVec domain_from_json(const json& j) {
  DomainVec d;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const long long v = it.value().get<long long>();
    if (v != 0) d[it.key()] = v;
  }
  return d;
}

inline DomainVec domain_sum(const std::vector<DomainVec>& parts) {
  DomainVec out;
  for (const auto& p : parts)
    for (const auto& [r, v] : p) {
      out[r] += v;
      if (out[r] == 0) out.erase(r);
    }
  return out;
}

inline json domain_to_json(const DomainVec& d) {
  json out = json::object();
  for (const auto& [r, v] : d) out[r] = v;
  return out;
}

}  // namespace detail

// Data layout of the shipped fragment file:
//   regions: list of region names,
//   first_class / second_class: the two domains whose counts must agree,
//   slots.{a,b,c,d}: per-family lists of elementary domains,
//   composites.{a,b,c,d}: three composite recipes per family, each a list of
//     1-based slot indices summed into one domain.
inline VerificationReport verify_parity_transfer(const std::string& data_path) {
  std::ifstream in(data_path);
  if (!in) throw GoldenDataMissing("cannot open domain fragment data: " + data_path);
  json data;
  try {
    in >> data;
  } catch (const std::exception& e) {
    throw ParseError("domain fragment data is not valid JSON: " + std::string(e.what()));
  }

  const std::array<std::string, 4> fams = {"a", "b", "c", "d"};
  std::map<std::string, std::vector<detail::DomainVec>> slots;
  std::map<std::string, std::vector<detail::DomainVec>> comps;
  for (const auto& f : fams) {
    for (const auto& s : data.at("slots").at(f)) slots[f].push_back(detail::domain_from_json(s));
    for (const auto& recipe : data.at("composites").at(f)) {
      std::vector<detail::DomainVec> parts;
      for (const auto& idx : recipe) {
        const std::size_t k = idx.get<std::size_t>();
        if (k < 1 || k > slots[f].size())
          throw ParseError("composite recipe index out of range in family " + f);
        parts.push_back(slots[f][k - 1]);
      }
      comps[f].push_back(detail::domain_sum(parts));
    }
    if (comps[f].size() != 3) throw ParseError("each family needs exactly three composites");
  }
  const detail::DomainVec first = detail::domain_from_json(data.at("first_class"));
  const detail::DomainVec second = detail::domain_from_json(data.at("second_class"));

  // The seven domain identities. The last five identify counts across
  // families; the first two tie composites to the named classes.
  struct Identity {
    const char* label;
    detail::DomainVec lhs, rhs;
  };
  const std::vector<Identity> identities = {
      {"a1 = first_class", comps["a"][0], first},
      {"c1 = second_class", comps["c"][0], second},
      {"a2 = c2", comps["a"][1], comps["c"][1]},
      {"b2 = d2", comps["b"][1], comps["d"][1]},
      {"a3 = b1", comps["a"][2], comps["b"][0]},
      {"c3 = d1", comps["c"][2], comps["d"][0]},
      {"b3 = d3", comps["b"][2], comps["d"][2]},
  };
  json identity_report = json::array();
  bool identities_ok = true;
  for (const auto& id : identities) {
    const bool ok = id.lhs == id.rhs;
    identities_ok = identities_ok && ok;
    identity_report.push_back({{"identity", id.label},
                               {"holds", ok},
                               {"lhs", detail::domain_to_json(id.lhs)},
                               {"rhs", detail::domain_to_json(id.rhs)}});
  }

  // Parity bookkeeping: one F2 unknown per composite count (12 unknowns,
  // family-major). Relations: each family's three counts sum to 0; equal
  // domains have equal counts. The target "count(a1) = count(c1)" must lie in
  // the span.
  auto var = [&](int fam, int i) { return 3 * fam + i; };
  F2Mat relations;
  auto rel = [&](std::initializer_list<int> idxs) {
    std::vector<std::uint8_t> v(12, 0);
    for (int i : idxs) v[i] ^= 1;
    relations.push_back(v);
  };
  for (int f = 0; f < 4; ++f) rel({var(f, 0), var(f, 1), var(f, 2)});
  rel({var(0, 1), var(2, 1)});  // a2 = c2
  rel({var(1, 1), var(3, 1)});  // b2 = d2
  rel({var(0, 2), var(1, 0)});  // a3 = b1
  rel({var(2, 2), var(3, 0)});  // c3 = d1
  rel({var(1, 2), var(3, 2)});  // b3 = d3
  std::vector<std::uint8_t> target(12, 0);
  target[var(0, 0)] = 1;  // a1
  target[var(2, 0)] = 1;  // c1
  const bool parity_derivable = in_f2_span(relations, target);

  VerificationReport out;
  out.passed = identities_ok && parity_derivable;
  out.transcript = {
      {"data_path", data_path},
      {"identities", identity_report},
      {"parity_unknowns", 12},
      {"parity_relations",
       {"a1+a2+a3=0", "b1+b2+b3=0", "c1+c2+c3=0", "d1+d2+d3=0", "a2=c2", "b2=d2", "a3=b1",
        "c3=d1", "b3=d3"}},
      {"target", "count(a1) = count(c1), i.e. the two named classes share a count parity"},
      {"parity_derivable", parity_derivable},
  };
  return out;
}

}  // namespace hfw::replicate
