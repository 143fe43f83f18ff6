#pragma once

// Periodic domains, weak admissibility, exact area assignments, and the
// relative exponent grading of generators.
//
// A domain is an integer multiplicity per region. Its boundary is a 1-chain
// of curve arcs: the coefficient of an arc is (left region) - (right region)
// multiplicity. A domain is *periodic* when every curve's arc coefficients
// agree (the boundary closes up to whole curves) and the multiplicity at
// every basepoint region is zero. The lattice of periodic domains is the
// integer kernel of an exact linear system; its rank r is the exponent rank
// of the twisted coefficient ring.
//
// Generators are graded relatively by pairing a connecting 1-cycle against
// the beta-boundaries of the periodic basis. The cycle eps(x0, x) consists of
// alpha segments from the base generator's points to x's points and beta
// segments back; the pairing with a full beta curve is evaluated by pushing
// the beta curve off itself to its left, which hits exactly one alpha arc per
// crossing (the incoming arc at positive crossings, the outgoing arc at
// negative ones). The result is independent of every segment choice because
// whole curves pair to zero with any beta-boundary.

#include "hfw/diagram.hpp"
#include "hfw/errors.hpp"
#include "hfw/exact_linalg.hpp"
#include "hfw/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hfw {

// ---------------------------------------------------------------------------
// Periodic domains
// ---------------------------------------------------------------------------

struct PeriodicBasis {
  int num_regions = 0;
  std::vector<IntVec> domains;           // Hermite-reduced lattice basis rows
  std::vector<IntVec> beta_boundaries;   // per element, coefficient per beta curve
  int rank() const { return static_cast<int>(domains.size()); }
};

namespace topo_detail {

// One row per curve junction: the boundary coefficient of the arc leaving the
// junction point minus the coefficient of the arc entering it, expressed in
// region multiplicities. A domain's boundary closes to whole curves exactly
// when all rows vanish.
struct JumpSystem {
  IntMat rows;
  std::vector<int> point;        // junction point per row
  std::vector<bool> beta_side;   // family of the curve the row lives on
};

inline JumpSystem jump_system(const Diagram& diag, const ValidationReport& rep) {
  JumpSystem sys;
  const int nr = static_cast<int>(diag.regions.size());
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    const auto& orders = is_beta ? diag.beta_orders : diag.alpha_orders;
    const auto& sides = is_beta ? rep.beta_arc_sides : rep.alpha_arc_sides;
    for (int c = 0; c < diag.d; ++c) {
      const int m = static_cast<int>(orders[c].size());
      for (int pos = 0; pos < m; ++pos) {
        const int arc_out = pos;                // tail = this point
        const int arc_in = (pos - 1 + m) % m;   // head = this point
        IntVec row(nr, 0);
        row[sides[c][arc_out].first] += 1;
        row[sides[c][arc_out].second] -= 1;
        row[sides[c][arc_in].first] -= 1;
        row[sides[c][arc_in].second] += 1;
        sys.rows.push_back(std::move(row));
        sys.point.push_back(orders[c][pos]);
        sys.beta_side.push_back(is_beta);
      }
    }
  }
  return sys;
}

}  // namespace topo_detail

// The unique coefficient per beta curve with boundary(D) = sum over curves;
// throws NotPeriodic when the boundary of D does not close to whole curves.
inline IntVec beta_boundary(const Diagram& diag, const ValidationReport& rep, const IntVec& domain) {
  IntVec result(diag.d, 0);
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    const auto& sides = is_beta ? rep.beta_arc_sides : rep.alpha_arc_sides;
    for (int c = 0; c < diag.d; ++c) {
      std::optional<Int> coeff;
      for (const auto& [left, right] : sides[c]) {
        const Int v = domain[left] - domain[right];
        if (!coeff)
          coeff = v;
        else if (*coeff != v)
          throw NotPeriodic("boundary does not close along " +
                            std::string(is_beta ? "beta " : "alpha ") + std::to_string(c + 1));
      }
      if (is_beta && coeff) result[c] = *coeff;
    }
  }
  return result;
}

inline PeriodicBasis periodic_domains(const Diagram& diag, const ValidationReport& rep) {
  const int nr = static_cast<int>(diag.regions.size());
  topo_detail::JumpSystem sys = topo_detail::jump_system(diag, rep);
  IntMat mat = sys.rows;
  for (int z : diag.basepoints) {
    IntVec row(nr, 0);
    row[z] = 1;
    mat.push_back(std::move(row));
  }
  IntMat basis;
  for (auto& v : kernel_basis(mat)) basis.push_back(std::move(v));
  basis = row_hnf(basis);

  PeriodicBasis pb;
  pb.num_regions = nr;
  for (auto& dom : basis) {
    pb.beta_boundaries.push_back(beta_boundary(diag, rep, dom));
    for (int z : diag.basepoints)
      if (dom[z] != 0) throw NotPeriodic("kernel element has nonzero basepoint multiplicity");
    pb.domains.push_back(std::move(dom));
  }
  return pb;
}

inline PeriodicBasis periodic_domains(const Diagram& diag) {
  return periodic_domains(diag, validate(diag));
}

// ---------------------------------------------------------------------------
// Weak admissibility and area assignments
// ---------------------------------------------------------------------------

struct AdmissibilityResult {
  bool admissible = true;
  IntVec witness_coeffs;  // combination of basis elements (when inadmissible)
  IntVec witness_domain;  // the one-signed nonzero domain it produces
};

// True iff every nonzero combination of periodic basis elements has both a
// positive and a negative region multiplicity. Decided exactly: for each
// basis coordinate pinned to +1 or -1, a rational LP searches for a
// nonnegative combination; any feasible point scales to an integer witness.
inline AdmissibilityResult check_weak_admissibility(const PeriodicBasis& pb) {
  AdmissibilityResult out;
  const int r = pb.rank();
  if (r == 0) return out;

  for (int pinned = 0; pinned < r; ++pinned) {
    for (int sign : {+1, -1}) {
      LpProblem lp;
      lp.num_vars = r;
      LinearConstraint pin;
      pin.a.assign(r, Rat(0));
      pin.a[pinned] = Rat(1);
      pin.rhs = Rat(sign);
      lp.eq.push_back(std::move(pin));
      for (int reg = 0; reg < pb.num_regions; ++reg) {
        LinearConstraint ge;
        ge.a.assign(r, Rat(0));
        for (int j = 0; j < r; ++j) ge.a[j] = Rat(pb.domains[j][reg]);
        ge.rhs = Rat(0);
        lp.ge.push_back(std::move(ge));
      }
      const LpSolution sol = solve_lp(lp);
      if (sol.status != LpStatus::Optimal) continue;

      // Scale the rational point to integers.
      Int scale = 1;
      for (const Rat& v : sol.x) {
        const Int den = v.denominator();
        scale = scale / boost::multiprecision::gcd(scale, den) * den;
      }
      out.admissible = false;
      out.witness_coeffs.assign(r, 0);
      for (int j = 0; j < r; ++j)
        out.witness_coeffs[j] = boost::rational_cast<Int>(sol.x[j] * Rat(scale));
      out.witness_domain.assign(pb.num_regions, 0);
      for (int j = 0; j < r; ++j)
        for (int reg = 0; reg < pb.num_regions; ++reg)
          out.witness_domain[reg] += out.witness_coeffs[j] * pb.domains[j][reg];
      return out;
    }
  }
  return out;
}

// Strictly positive rational areas vanishing on every periodic basis element.
// Regions listed in `small` get areas below 1/1000 of every other region;
// regions in `large` exceed 1000 times every other region. Throws Infeasible
// when no such assignment exists (equivalently, when admissibility fails).
inline std::vector<Rat> area_assignment(const PeriodicBasis& pb,
                                        const std::vector<std::uint8_t>& small = {},
                                        const std::vector<std::uint8_t>& large = {}) {
  const int nr = pb.num_regions;
  const Rat eps = rat(1, 1000);
  const Rat big = rat(1000, 1);
  const Rat cap = rat(1000000, 1);

  auto flag = [&](const std::vector<std::uint8_t>& mask, int reg) {
    return reg < static_cast<int>(mask.size()) && mask[reg] != 0;
  };

  LpProblem lp;
  lp.num_vars = nr + 1;  // areas, then the slack t being maximized
  const int tv = nr;
  for (const IntVec& dom : pb.domains) {
    LinearConstraint eq;
    eq.a.assign(nr + 1, Rat(0));
    for (int reg = 0; reg < nr; ++reg) eq.a[reg] = Rat(dom[reg]);
    eq.rhs = Rat(0);
    lp.eq.push_back(std::move(eq));
  }
  auto ge_row = [&](auto fill, const Rat& rhs) {
    LinearConstraint c;
    c.a.assign(nr + 1, Rat(0));
    fill(c.a);
    c.rhs = rhs;
    lp.ge.push_back(std::move(c));
  };
  for (int reg = 0; reg < nr; ++reg) {
    ge_row([&](std::vector<Rat>& a) { a[reg] = Rat(1); a[tv] = Rat(-1); }, Rat(0));
    ge_row([&](std::vector<Rat>& a) { a[reg] = Rat(-1); }, -cap);
  }
  ge_row([&](std::vector<Rat>& a) { a[tv] = Rat(-1); }, Rat(-1));
  for (int s = 0; s < nr; ++s) {
    if (!flag(small, s)) continue;
    for (int reg = 0; reg < nr; ++reg) {
      if (flag(small, reg)) continue;
      ge_row([&](std::vector<Rat>& a) { a[reg] = eps; a[s] = Rat(-1); a[tv] = Rat(-1); }, Rat(0));
    }
  }
  for (int l = 0; l < nr; ++l) {
    if (!flag(large, l)) continue;
    for (int reg = 0; reg < nr; ++reg) {
      if (flag(large, reg)) continue;
      ge_row([&](std::vector<Rat>& a) { a[l] = Rat(1); a[reg] = -big; a[tv] = Rat(-1); }, Rat(0));
    }
  }
  lp.objective.assign(nr + 1, Rat(0));
  lp.objective[tv] = Rat(1);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal || sol.value <= Rat(0))
    throw Infeasible("no strictly positive area assignment annihilates the periodic lattice");

  std::vector<Rat> areas(sol.x.begin(), sol.x.begin() + nr);
  for (const Rat& a : areas)
    if (a <= Rat(0)) throw Infeasible("area solver returned a nonpositive area");
  for (const IntVec& dom : pb.domains) {
    Rat total(0);
    for (int reg = 0; reg < nr; ++reg) total += Rat(dom[reg]) * areas[reg];
    if (total != Rat(0)) throw Infeasible("area solver violated a lattice constraint");
  }
  return areas;
}

// ---------------------------------------------------------------------------
// Grading paths and relative exponent classes
// ---------------------------------------------------------------------------

// A connected walk along curve arcs visiting every point of the base
// generator. The grading itself is path independent (whole curves pair to
// zero against beta-boundaries), so the path is parsed and validated for
// interface fidelity but contributes nothing to the pairing.
struct GradingPath {
  std::vector<ArcRef> arcs;
};

inline GradingPath parse_grading_path(const Diagram& diag, const std::string& text) {
  GradingPath path;
  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) path.arcs.push_back(resolve_arc_token(diag, tok, lineno));
  }
  return path;
}

inline void validate_grading_path(const Diagram& diag, const GradingPath& path,
                                  const Generator& base) {
  for (std::size_t i = 0; i + 1 < path.arcs.size(); ++i)
    if (diag.arc_endpoints(path.arcs[i]).second != diag.arc_endpoints(path.arcs[i + 1]).first)
      throw PathInvalid("path arcs " + std::to_string(i) + " and " + std::to_string(i + 1) +
                        " do not chain");

  std::set<int> visited;
  for (const ArcRef& a : path.arcs) {
    const auto [t, h] = diag.arc_endpoints(a);
    visited.insert(t);
    visited.insert(h);
  }
  for (int p : base)
    if (!visited.count(p))
      throw PathInvalid("path misses base generator point '" + diag.points[p].id + "'");

  // The portion of the path on each single curve must be connected: the used
  // slots form one contiguous cyclic run.
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    for (int c = 0; c < diag.d; ++c) {
      const int m = static_cast<int>(diag.curve_order(is_beta, c).size());
      std::set<int> slots;
      for (const ArcRef& a : path.arcs)
        if (a.is_beta == is_beta && a.curve == c) slots.insert(a.slot);
      if (slots.empty()) continue;
      int breaks = 0;
      for (int s : slots)
        if (!slots.count((s + 1) % m)) ++breaks;
      if (breaks > 1)
        throw PathInvalid("path is disconnected along " +
                          std::string(is_beta ? "beta " : "alpha ") + std::to_string(c + 1));
    }
  }
}

namespace topo_detail {

inline void require_generator(const Diagram& diag, const Generator& g, const char* what) {
  if (static_cast<int>(g.size()) != diag.d) throw Error(std::string(what) + ": wrong length");
  std::set<int> betas;
  for (int i = 0; i < diag.d; ++i) {
    if (g[i] < 0 || g[i] >= static_cast<int>(diag.points.size()) ||
        diag.points[g[i]].alpha_index != i + 1)
      throw Error(std::string(what) + ": entry " + std::to_string(i) +
                  " is not on its alpha curve");
    betas.insert(diag.points[g[i]].beta_index);
  }
  if (static_cast<int>(betas.size()) != diag.d)
    throw Error(std::string(what) + ": beta indices are not a permutation");
}

// Pairing entries of eps(base, x) against each periodic basis element.
inline IntVec relative_class(const Diagram& diag, const ValidationReport& rep,
                             const PeriodicBasis& pb, const Generator& base, const Generator& x) {
  // Multiplicity of each alpha arc in the segment from base's point to x's.
  std::vector<std::vector<Int>> alpha_mult(diag.d);
  for (int c = 0; c < diag.d; ++c) {
    const auto& order = diag.alpha_orders[c];
    const int m = static_cast<int>(order.size());
    alpha_mult[c].assign(m, 0);
    const int from = static_cast<int>(std::find(order.begin(), order.end(), base[c]) - order.begin());
    const int to = static_cast<int>(std::find(order.begin(), order.end(), x[c]) - order.begin());
    if (from == m || to == m)
      throw Error("generator point missing from its curve order; validate the diagram first");
    for (int k = from; k != to; k = (k + 1) % m) alpha_mult[c][k] += 1;
  }

  // Signed crossings of the cycle with each full beta curve via the left
  // push-off: each crossing point contributes its sign times the cycle's
  // multiplicity on one alpha arc (incoming at positive crossings, outgoing
  // at negative crossings).
  IntVec beta_cross(diag.d, 0);
  for (int c = 0; c < diag.d; ++c) {
    const auto& order = diag.alpha_orders[c];
    const int m = static_cast<int>(order.size());
    for (int pos = 0; pos < m; ++pos) {
      const int p = order[pos];
      const int s = rep.crossing_sign[p];
      const int slot = s > 0 ? (pos - 1 + m) % m : pos;
      beta_cross[diag.points[p].beta_index - 1] += Int(s) * alpha_mult[c][slot];
    }
  }

  IntVec entries(pb.rank(), 0);
  for (int j = 0; j < pb.rank(); ++j) {
    Int sum = 0;
    for (int l = 0; l < diag.d; ++l) sum += pb.beta_boundaries[j][l] * beta_cross[l];
    entries[j] = sum;
  }
  return entries;
}

}  // namespace topo_detail

inline IntVec spinc_relative(const Diagram& diag, const ValidationReport& rep,
                             const PeriodicBasis& pb, const GradingPath& path,
                             const Generator& base, const Generator& x) {
  topo_detail::require_generator(diag, base, "base generator");
  topo_detail::require_generator(diag, x, "generator");
  validate_grading_path(diag, path, base);
  return topo_detail::relative_class(diag, rep, pb, base, x);
}

inline std::map<IntVec, std::vector<Generator>> partition_by_spinc(const Diagram& diag,
                                                                   const ValidationReport& rep,
                                                                   const PeriodicBasis& pb,
                                                                   const GradingPath& path,
                                                                   const Generator& base) {
  topo_detail::require_generator(diag, base, "base generator");
  validate_grading_path(diag, path, base);
  std::map<IntVec, std::vector<Generator>> classes;
  for (const Generator& g : enumerate_generators(diag))
    classes[topo_detail::relative_class(diag, rep, pb, base, g)].push_back(g);
  return classes;
}

// ---------------------------------------------------------------------------
// The final independence step
// ---------------------------------------------------------------------------

struct SpincClassInfo {
  IntVec coords;
  bool nonvanishing = false;
};

// True iff at least two nonvanishing classes with first coordinate zero have
// linearly independent images in the quotient of the exponent lattice by its
// first axis.
inline bool thurston_conclusion(const std::vector<SpincClassInfo>& classes) {
  IntMat images;
  for (const auto& cls : classes) {
    if (!cls.nonvanishing || cls.coords.empty() || cls.coords[0] != 0) continue;
    images.emplace_back(cls.coords.begin() + 1, cls.coords.end());
  }
  if (images.size() < 2) return false;
  return column_echelon(images).pivots.size() >= 2;
}

}  // namespace hfw
