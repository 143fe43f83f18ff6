#pragma once

// Disk classes joining two generators of a multi-pointed diagram.
//
//   * connecting_domains — the affine lattice of 2-chains whose boundary runs
//     along the alpha curves from one generator to the other and back along
//     the beta curves, avoiding every base region.  Empty exactly when the
//     generators lie in different relative structure classes.
//   * maslov_index       — combinatorial index: Euler measure of the domain
//     plus the average corner multiplicities at both generators.
//   * positive_classes   — every non-negative domain of a prescribed index in
//     a connecting family.  Terminates because a positive area assignment is
//     constant on each family, so coefficients are bounded.
//   * classify_shape     — deterministic signature of a multiplicity-0/1
//     domain: genus and boundary circuits of the abstract closure, per-circuit
//     edge counts, reflex (270-degree) corners, interior generator points.
//   * count_holomorphic  — representative counts for the shipped shape
//     families, extensible through textual count rules.
//   * juxtapose / degenerations — composition of classes and the enumeration
//     of all two-factor positive index-1 splittings of an index-2 class.
//
// Boundary circuits are walked with the domain on the left.  At a junction the
// walk sweeps clockwise from the arrival ray through covered sectors; sweeping
// one sector is an acute corner, two is a straight pass-through, three is a
// reflex corner.  The closure is taken abstractly: a junction contributes one
// vertex per boundary visit plus one when all four sectors are covered, which
// makes the genus of self-touching supports well defined.

#include <hfw/diagram.hpp>
#include <hfw/errors.hpp>
#include <hfw/exact_linalg.hpp>
#include <hfw/numeric.hpp>
#include <hfw/topology.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hfw {

// A 2-chain joining `from` to `to`, stored as one multiplicity per region.
struct DiskClass {
  Generator from;
  Generator to;
  IntVec domain;

  bool operator==(const DiskClass& o) const {
    return from == o.from && to == o.to && domain == o.domain;
  }
};

// Affine family of domains joining two fixed generators: base + integer
// combinations of the lattice rows.
struct DomainLattice {
  bool nonempty = false;
  IntVec base;     // canonical representative, reduced modulo the lattice
  IntMat lattice;  // rows: basis of the closed, base-region-free lattice
};

// Precomputed geometry shared by the queries below.  Construct once per
// diagram; pass an area assignment when positivity searches are needed.
struct WhitneyContext {
  const Diagram* diag = nullptr;
  ValidationReport rep;
  PeriodicBasis pb;
  std::vector<Rat> areas;       // empty unless supplied
  IntMat jump_rows;             // one row per curve junction
  std::vector<int> jump_point;  // junction point per row
  std::vector<bool> jump_beta;  // curve family per row
  std::vector<int> alpha_pos;   // position of each point in its alpha order
  std::vector<int> beta_pos;    // position of each point in its beta order
  std::vector<Rat> region_euler;  // Euler measure of each closed region
};

namespace whitney_detail {

inline Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int floor_div(const Int& a, const Int& b) {  // b > 0
  Int q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

inline Int rat_floor(const Rat& x) { return floor_div(x.numerator(), x.denominator()); }
inline Int rat_ceil(const Rat& x) { return -rat_floor(-x); }

// Right-hand side of the junction jump system for a class from x to y: the
// alpha-side boundary runs from x to y, the beta side from y back to x.
inline IntVec corner_rhs(const WhitneyContext& ctx, const Generator& x, const Generator& y) {
  const Diagram& diag = *ctx.diag;
  std::vector<int> in_x(diag.points.size(), 0), in_y(diag.points.size(), 0);
  for (int c = 0; c < diag.d; ++c) {
    in_x[x[c]] = 1;
    in_y[y[c]] = 1;
  }
  IntVec rhs(ctx.jump_rows.size(), 0);
  for (std::size_t i = 0; i < ctx.jump_rows.size(); ++i) {
    const int p = ctx.jump_point[i];
    const int s = in_x[p] - in_y[p];
    rhs[i] = ctx.jump_beta[i] ? -s : s;
  }
  return rhs;
}

// Reduce v modulo the Hermite-form lattice rows to the canonical coset
// representative (pivot coordinates brought into [0, pivot)).
inline IntVec reduce_mod_lattice(IntVec v, const IntMat& lattice) {
  for (const IntVec& row : lattice) {
    int piv = 0;
    while (piv < static_cast<int>(row.size()) && row[piv] == 0) ++piv;
    if (piv == static_cast<int>(row.size())) continue;
    const Int q = floor_div(v[piv], row[piv]);
    if (q != 0)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * row[j];
  }
  return v;
}

}  // namespace whitney_detail

inline WhitneyContext whitney_context(const Diagram& diag, std::vector<Rat> areas = {}) {
  WhitneyContext ctx;
  ctx.diag = &diag;
  ctx.rep = validate(diag);
  if (!ctx.rep.ok())
    throw Error("diagram '" + diag.name + "' fails validation; run validate() for the report");
  ctx.pb = periodic_domains(diag, ctx.rep);

  topo_detail::JumpSystem sys = topo_detail::jump_system(diag, ctx.rep);
  ctx.jump_rows = std::move(sys.rows);
  ctx.jump_point = std::move(sys.point);
  ctx.jump_beta.assign(sys.beta_side.begin(), sys.beta_side.end());

  ctx.alpha_pos.assign(diag.points.size(), -1);
  ctx.beta_pos.assign(diag.points.size(), -1);
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    const auto& orders = is_beta ? diag.beta_orders : diag.alpha_orders;
    auto& pos = is_beta ? ctx.beta_pos : ctx.alpha_pos;
    for (const auto& order : orders)
      for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;
  }

  ctx.region_euler.reserve(diag.regions.size());
  for (const Region& reg : diag.regions) {
    long long corners = 0;
    for (const auto& word : reg.components) corners += static_cast<long long>(word.size());
    ctx.region_euler.push_back(
        rat(2 - 2 * static_cast<long long>(reg.genus) -
            static_cast<long long>(reg.components.size())) -
        rat(corners, 4));
  }

  if (!areas.empty()) {
    if (areas.size() != diag.regions.size())
      throw NotAdmissible("area assignment length does not match the region count");
    for (const Rat& a : areas)
      if (a <= Rat(0)) throw NotAdmissible("area assignment has a non-positive region");
    for (const IntVec& dom : ctx.pb.domains) {
      Rat s(0);
      for (std::size_t r = 0; r < areas.size(); ++r) s += areas[r] * Rat(dom[r]);
      if (s != Rat(0))
        throw NotAdmissible("area assignment does not annihilate the closed-domain lattice");
    }
    ctx.areas = std::move(areas);
  }
  return ctx;
}

// ---------------------------------------------------------------------------
// Connecting domains
// ---------------------------------------------------------------------------

inline DomainLattice connecting_domains(const WhitneyContext& ctx, const Generator& x,
                                        const Generator& y) {
  const Diagram& diag = *ctx.diag;
  topo_detail::require_generator(diag, x, "source generator");
  topo_detail::require_generator(diag, y, "target generator");

  IntMat mat = ctx.jump_rows;
  IntVec rhs = whitney_detail::corner_rhs(ctx, x, y);
  for (int z : diag.basepoints) {
    IntVec row(diag.regions.size(), 0);
    row[z] = 1;
    mat.push_back(std::move(row));
    rhs.push_back(0);
  }

  DomainLattice out;
  out.lattice = ctx.pb.domains;
  std::optional<IntVec> sol = solve_integer(mat, rhs);
  if (!sol) return out;
  out.nonempty = true;
  out.base = whitney_detail::reduce_mod_lattice(std::move(*sol), out.lattice);
  return out;
}

inline DomainLattice connecting_domains(const Diagram& diag, const Generator& x,
                                        const Generator& y) {
  return connecting_domains(whitney_context(diag), x, y);
}

// ---------------------------------------------------------------------------
// Combinatorial index
// ---------------------------------------------------------------------------

inline Rat euler_measure(const WhitneyContext& ctx, const IntVec& domain) {
  if (domain.size() != ctx.region_euler.size())
    throw MalformedDomain("domain length does not match the region count");
  Rat s(0);
  for (std::size_t r = 0; r < domain.size(); ++r)
    if (domain[r] != 0) s += Rat(domain[r]) * ctx.region_euler[r];
  return s;
}

namespace whitney_detail {

// Average of the four sector multiplicities at a junction point.
inline Rat point_multiplicity(const WhitneyContext& ctx, const IntVec& domain, int p) {
  Int s = 0;
  for (int q = 0; q < 4; ++q) s += domain[ctx.rep.quadrant_region[p][q]];
  return Rat(s) / Rat(4);
}

// Index without the constraint re-check, for domains built by construction.
inline Int maslov_unchecked(const WhitneyContext& ctx, const DiskClass& phi) {
  Rat mu = euler_measure(ctx, phi.domain);
  for (int c = 0; c < ctx.diag->d; ++c) {
    mu += point_multiplicity(ctx, phi.domain, phi.from[c]);
    mu += point_multiplicity(ctx, phi.domain, phi.to[c]);
  }
  if (mu.denominator() != 1)
    throw MalformedDomain("index is not an integer: " + to_string(mu));
  return mu.numerator();
}

}  // namespace whitney_detail

inline Int maslov_index(const WhitneyContext& ctx, const DiskClass& phi) {
  topo_detail::require_generator(*ctx.diag, phi.from, "source generator");
  topo_detail::require_generator(*ctx.diag, phi.to, "target generator");
  if (phi.domain.size() != ctx.diag->regions.size())
    throw MalformedDomain("domain length does not match the region count");
  const IntVec rhs = whitney_detail::corner_rhs(ctx, phi.from, phi.to);
  for (std::size_t i = 0; i < ctx.jump_rows.size(); ++i)
    if (whitney_detail::dot(ctx.jump_rows[i], phi.domain) != rhs[i])
      throw MalformedDomain("boundary does not join the generators at point '" +
                            ctx.diag->points[ctx.jump_point[i]].id + "'");
  return whitney_detail::maslov_unchecked(ctx, phi);
}

inline Int maslov_index(const Diagram& diag, const DiskClass& phi) {
  return maslov_index(whitney_context(diag), phi);
}

// ---------------------------------------------------------------------------
// Positive classes of a fixed index
// ---------------------------------------------------------------------------

inline std::vector<DiskClass> positive_classes(const WhitneyContext& ctx, const Generator& x,
                                               const Generator& y, int index) {
  if (ctx.areas.empty())
    throw NotAdmissible("positivity search requires a positive area assignment");
  const Diagram& diag = *ctx.diag;
  const int nr = static_cast<int>(diag.regions.size());

  DomainLattice fam = connecting_domains(ctx, x, y);
  std::vector<DiskClass> out;
  if (!fam.nonempty) return out;
  const int rank = static_cast<int>(fam.lattice.size());

  auto emit = [&](const IntVec& dom) {
    for (const Int& v : dom)
      if (v < 0) return;
    for (int z : diag.basepoints)
      if (dom[z] != 0) throw Error("enumerated domain touches a base region");
    DiskClass phi{x, y, dom};
    if (whitney_detail::maslov_unchecked(ctx, phi) == index) out.push_back(std::move(phi));
  };

  if (rank == 0) {
    emit(fam.base);
    return out;
  }

  // Rational relaxation of base + t * lattice >= 0 in the coefficients t.
  LpProblem relax;
  relax.num_vars = rank;
  for (int r = 0; r < nr; ++r) {
    LinearConstraint c;
    c.a.resize(rank);
    bool any = false;
    for (int i = 0; i < rank; ++i) {
      c.a[i] = Rat(fam.lattice[i][r]);
      any = any || fam.lattice[i][r] != 0;
    }
    c.rhs = Rat(-fam.base[r]);
    if (any || c.rhs > Rat(0)) relax.ge.push_back(std::move(c));
  }

  IntVec fixed(rank, 0);
  std::function<void(const LpProblem&, int)> descend = [&](const LpProblem& lp, int level) {
    LpProblem feas = lp;
    feas.objective.clear();
    if (solve_lp(feas).status == LpStatus::Infeasible) return;
    if (level == rank) {
      IntVec dom = fam.base;
      for (int i = 0; i < rank; ++i)
        if (fixed[i] != 0)
          for (int r = 0; r < nr; ++r) dom[r] += fixed[i] * fam.lattice[i][r];
      emit(dom);
      return;
    }
    std::optional<Rat> hi = maximize_coordinate(lp, level, false);
    std::optional<Rat> lo = maximize_coordinate(lp, level, true);
    if (!hi || !lo)
      throw NotAdmissible("positivity search is unbounded; the area assignment is not valid");
    const Int top = whitney_detail::rat_floor(*hi);
    for (Int v = whitney_detail::rat_ceil(*lo); v <= top; ++v) {
      fixed[level] = v;
      LpProblem sub = lp;
      LinearConstraint c;
      c.a.assign(rank, Rat(0));
      c.a[level] = Rat(1);
      c.rhs = Rat(v);
      sub.eq.push_back(std::move(c));
      descend(sub, level + 1);
    }
  };
  descend(relax, 0);

  std::sort(out.begin(), out.end(),
            [](const DiskClass& a, const DiskClass& b) { return a.domain < b.domain; });
  return out;
}

inline std::vector<DiskClass> positive_classes(const Diagram& diag, const Generator& x,
                                               const Generator& y, int index,
                                               const std::vector<Rat>& areas) {
  return positive_classes(whitney_context(diag, areas), x, y, index);
}

// ---------------------------------------------------------------------------
// Shape classification
// ---------------------------------------------------------------------------

enum class ShapeKind { Bigon, Rectangle, PhiKLN, PhiNM, GenusOneTwoEdge, Unknown };

struct ShapeSignature {
  ShapeKind kind = ShapeKind::Unknown;
  int genus = 0;
  int components = 0;  // boundary circuits of the abstract closure
  std::vector<std::pair<int, int>> component_shape;  // sorted (edges, reflex corners)
  int interior_shared = 0;  // interior junctions lying on both generators
  int k = 0, l = 0, n = 0, m = 0;  // family parameters when applicable
  std::string pattern;             // canonical matcher string
};

namespace whitney_detail {

struct Circuit {
  int edges = 0;                   // corner count; 0 for a smooth closed curve
  std::vector<int> corner_points;  // acute and reflex junctions, in walk order
  std::vector<int> reflex_points;
  std::set<std::pair<bool, int>> curves;  // (family, curve) of traversed arcs
};

struct SupportAnalysis {
  std::vector<Circuit> circuits;
  int genus = 0;
  int components = 0;            // connected pieces of the abstract closure
  std::vector<int> coverage;     // covered sectors per junction point (0..4)
};

// The directed arc leaving point p along the given ray.
inline ArcRef ray_arc(const WhitneyContext& ctx, int p, Ray ray) {
  const Diagram& diag = *ctx.diag;
  const bool is_beta = ray == kBetaOut || ray == kBetaIn;
  const int curve = is_beta ? diag.points[p].beta_index - 1 : diag.points[p].alpha_index - 1;
  const int pos = is_beta ? ctx.beta_pos[p] : ctx.alpha_pos[p];
  const int m = static_cast<int>(diag.curve_order(is_beta, curve).size());
  if (ray == kAlphaOut || ray == kBetaOut) return ArcRef{is_beta, curve, pos, true};
  return ArcRef{is_beta, curve, (pos - 1 + m) % m, false};
}

// Walk the boundary of a multiplicity-0/1 support with the domain on the
// left.  Returns nullopt only for inputs whose sector pattern cannot bound a
// subsurface (two covered sectors meeting only at the junction are fine; an
// uncovered arrival sector is not).
inline std::optional<SupportAnalysis> analyze_support(const WhitneyContext& ctx,
                                                      const IntVec& domain) {
  const Diagram& diag = *ctx.diag;
  const int nr = static_cast<int>(diag.regions.size());
  const int np = static_cast<int>(diag.points.size());

  std::vector<char> covered(nr, 0);
  for (int r = 0; r < nr; ++r) covered[r] = domain[r] == 1;

  SupportAnalysis res;
  res.coverage.assign(np, 0);
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < 4; ++q) res.coverage[p] += covered[ctx.rep.quadrant_region[p][q]];

  // Abstract connectivity: faces glued along arcs covered on both sides.
  std::vector<int> parent(nr);
  for (int r = 0; r < nr; ++r) parent[r] = r;
  std::function<int(int)> find = [&](int r) {
    while (parent[r] != r) r = parent[r] = parent[parent[r]];
    return r;
  };
  auto arc_sides = [&](bool is_beta, int c, int s) {
    return is_beta ? ctx.rep.beta_arc_sides[c][s] : ctx.rep.alpha_arc_sides[c][s];
  };

  long long closure_arcs = 0;
  std::vector<std::vector<char>> boundary[2];  // per family: curve x slot flag
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    boundary[side].resize(diag.d);
    for (int c = 0; c < diag.d; ++c) {
      const int m = static_cast<int>(diag.curve_order(is_beta, c).size());
      boundary[side][c].assign(m, 0);
      for (int s = 0; s < m; ++s) {
        const auto [left, right] = arc_sides(is_beta, c, s);
        const bool lc = covered[left], rc = covered[right];
        if (lc || rc) ++closure_arcs;
        if (lc && rc) {
          const int a = find(left), b = find(right);
          if (a != b) parent[a] = b;
        } else if (lc || rc) {
          boundary[side][c][s] = 1;
        }
      }
    }
  }

  // Boundary circuits, domain on the left.
  long long visits = 0;
  auto direction = [&](bool is_beta, int c, int s) -> bool {
    const auto [left, right] = arc_sides(is_beta, c, s);
    return covered[left] != 0;  // forward when the domain sits on the forward-left
  };
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    for (int c = 0; c < diag.d; ++c) {
      for (int s = 0; s < static_cast<int>(boundary[side][c].size()); ++s) {
        if (!boundary[side][c][s]) continue;
        Circuit circuit;
        const ArcRef start{is_beta, c, s, direction(is_beta, c, s)};
        ArcRef cur = start;
        do {
          boundary[cur.is_beta ? 1 : 0][cur.curve][cur.slot] = 0;
          circuit.curves.insert({cur.is_beta, cur.curve});
          const int p = diag.arc_endpoints(cur).second;  // traversal destination
          const Ray arrive = cur.is_beta ? (cur.forward ? kBetaIn : kBetaOut)
                                         : (cur.forward ? kAlphaIn : kAlphaOut);
          ++visits;
          const auto order = ray_order(ctx.rep.crossing_sign[p]);
          std::array<int, 4> pos{};
          for (int i = 0; i < 4; ++i) pos[order[i]] = i;
          auto sector_covered = [&](int q) {
            return covered[ctx.rep.quadrant_region[p][q]] != 0;
          };
          int j = pos[arrive], span = 0;
          while (span < 4 && sector_covered((j + 3) % 4)) {
            j = (j + 3) % 4;
            ++span;
          }
          if (span == 0 || span == 4) return std::nullopt;
          if (span != 2) {
            circuit.corner_points.push_back(p);
            if (span == 3) circuit.reflex_points.push_back(p);
          }
          const ArcRef next = ray_arc(ctx, p, order[j]);
          const bool next_is_boundary = boundary[next.is_beta ? 1 : 0][next.curve][next.slot] ||
                                        (next.is_beta == start.is_beta &&
                                         next.curve == start.curve && next.slot == start.slot);
          if (!next_is_boundary || direction(next.is_beta, next.curve, next.slot) != next.forward)
            return std::nullopt;
          cur = next;
        } while (!(cur == start));
        circuit.edges = static_cast<int>(circuit.corner_points.size());
        res.circuits.push_back(std::move(circuit));
      }
    }
  }

  // Abstract closure invariants.
  long long face_chi = 0;
  std::set<int> roots;
  for (int r = 0; r < nr; ++r)
    if (covered[r]) {
      face_chi += 2 - 2 * static_cast<long long>(diag.regions[r].genus) -
                  static_cast<long long>(diag.regions[r].components.size());
      roots.insert(find(r));
    }
  long long interior_points = 0;
  for (int p = 0; p < np; ++p) interior_points += res.coverage[p] == 4;
  const long long chi = interior_points + visits - closure_arcs + face_chi;
  const long long b = static_cast<long long>(res.circuits.size());
  const long long c = static_cast<long long>(roots.size());
  const long long twice_genus = 2 * c - b - chi;
  if (twice_genus < 0 || twice_genus % 2 != 0)
    throw Error("support closure has inconsistent invariants");
  res.genus = static_cast<int>(twice_genus / 2);
  res.components = static_cast<int>(c);
  return res;
}

}  // namespace whitney_detail

inline ShapeSignature classify_shape(const WhitneyContext& ctx, const DiskClass& phi) {
  const Diagram& diag = *ctx.diag;
  if (phi.domain.size() != diag.regions.size())
    throw MalformedDomain("domain length does not match the region count");

  ShapeSignature sig;
  std::ostringstream pat;

  int support = 0;
  Int lo = 0, hi = 0;
  for (const Int& v : phi.domain) {
    if (v != 0) ++support;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (support == 0) {
    sig.pattern = "empty";
    return sig;
  }
  if (lo < 0 || hi > 1) {
    pat << "irregular(min=" << lo << ",max=" << hi << ",support=" << support << ")";
    sig.pattern = pat.str();
    return sig;
  }

  auto analysis = whitney_detail::analyze_support(ctx, phi.domain);
  if (!analysis) {
    pat << "irregular(min=" << lo << ",max=" << hi << ",support=" << support << ")";
    sig.pattern = pat.str();
    return sig;
  }

  sig.genus = analysis->genus;
  sig.components = static_cast<int>(analysis->circuits.size());
  for (const auto& circ : analysis->circuits)
    sig.component_shape.push_back({circ.edges, static_cast<int>(circ.reflex_points.size())});
  std::sort(sig.component_shape.begin(), sig.component_shape.end());

  std::set<int> shared;
  for (int c = 0; c < diag.d; ++c)
    if (phi.from[c] == phi.to[c]) shared.insert(phi.from[c]);
  for (int p : shared)
    if (analysis->coverage[p] == 4) ++sig.interior_shared;

  int total_reflex = 0;
  for (const auto& circ : analysis->circuits)
    total_reflex += static_cast<int>(circ.reflex_points.size());

  // Crossings of an (alpha, beta) curve pair inside / on the support.
  auto pair_of = [&](int p) {
    return std::pair<int, int>{diag.points[p].alpha_index, diag.points[p].beta_index};
  };
  auto pair_census = [&](std::pair<int, int> pr) {
    int interior = 0, boundary = 0;
    for (int p = 0; p < static_cast<int>(diag.points.size()); ++p) {
      if (pair_of(p) != pr) continue;
      if (analysis->coverage[p] == 4)
        ++interior;
      else if (analysis->coverage[p] > 0)
        ++boundary;
    }
    return std::pair<int, int>{interior, boundary};
  };

  const auto& circuits = analysis->circuits;
  if (sig.genus == 0 && sig.components == 1 && total_reflex == 0 &&
      (circuits[0].edges == 2 || circuits[0].edges == 4)) {
    sig.kind = circuits[0].edges == 2 ? ShapeKind::Bigon : ShapeKind::Rectangle;
    sig.pattern = circuits[0].edges == 2 ? "bigon" : "rectangle";
    return sig;
  }

  if (sig.genus == 1 && sig.components == 1 && circuits[0].edges == 2 && total_reflex == 0 &&
      sig.interior_shared == 1) {
    sig.kind = ShapeKind::GenusOneTwoEdge;
    sig.pattern = "genus_one_two_edge";
    return sig;
  }

  if (sig.genus == 0 && sig.components == 2 && total_reflex == 1 &&
      circuits[0].edges >= 2 && circuits[1].edges >= 2 && circuits[0].edges % 2 == 0 &&
      circuits[1].edges % 2 == 0) {
    const int obtuse = circuits[0].reflex_points.empty() ? 1 : 0;
    const int p = circuits[obtuse].reflex_points[0];
    const auto [interior, boundary] = pair_census(pair_of(p));
    if (boundary == 1) {  // the reflex junction is the pair's only boundary crossing
      sig.kind = ShapeKind::PhiKLN;
      sig.l = circuits[obtuse].edges / 2;
      sig.k = circuits[1 - obtuse].edges / 2;
      sig.n = 1 + interior;
      pat << "phi_kln(" << sig.k << "," << sig.l << "," << sig.n << ")";
      sig.pattern = pat.str();
      return sig;
    }
  }

  if (sig.genus == 0 && sig.components == 3 && total_reflex == 2 && circuits[0].edges == 2 &&
      circuits[1].edges == 2 && circuits[2].edges == 2) {
    bool ok = true;
    std::set<int> alphas, betas;
    std::vector<int> reflex_counts;
    for (const auto& circ : circuits) {
      if (circ.reflex_points.size() > 1 || circ.curves.size() != 2) ok = false;
      std::pair<int, int> pr{-1, -1};
      for (int p : circ.corner_points) {
        if (pr.first == -1)
          pr = pair_of(p);
        else if (pair_of(p) != pr)
          ok = false;  // both corners must cross the same curve pair
      }
      if (!ok) break;
      alphas.insert(pr.first);
      betas.insert(pr.second);
      const auto [interior, boundary] = pair_census(pr);
      if (boundary != 2) ok = false;  // the pair touches the boundary only at the corners
      reflex_counts.push_back(circ.reflex_points.empty() ? -1 : 2 + interior);
      if (circ.reflex_points.empty() && interior != 0) ok = false;
    }
    int obtuse_circuits = 0;
    for (int v : reflex_counts) obtuse_circuits += v >= 0;
    if (ok && alphas.size() == 3 && betas.size() == 3 && obtuse_circuits == 2) {
      std::vector<int> params;
      for (int v : reflex_counts)
        if (v >= 0) params.push_back(v);
      std::sort(params.rbegin(), params.rend());
      sig.kind = ShapeKind::PhiNM;
      sig.n = params[0];
      sig.m = params[1];
      pat << "phi_nm(" << sig.n << "," << sig.m << ")";
      sig.pattern = pat.str();
      return sig;
    }
  }

  pat << "shape(g=" << sig.genus << ",b=[";
  for (std::size_t i = 0; i < sig.component_shape.size(); ++i) {
    if (i) pat << ",";
    pat << sig.component_shape[i].first << ":" << sig.component_shape[i].second;
  }
  pat << "],i=" << sig.interior_shared << ")";
  sig.pattern = pat.str();
  return sig;
}

inline ShapeSignature classify_shape(const Diagram& diag, const DiskClass& phi) {
  return classify_shape(whitney_context(diag), phi);
}

// ---------------------------------------------------------------------------
// Count rules
// ---------------------------------------------------------------------------

struct CountRule {
  std::string pattern;
  int count = 0;
};

// Glob match with '*' standing for any (possibly empty) run of characters.
inline bool pattern_matches(const std::string& pattern, const std::string& subject) {
  std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
  while (s < subject.size()) {
    if (p < pattern.size() && (pattern[p] == subject[s])) {
      ++p;
      ++s;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = s;
    } else if (star != std::string::npos) {
      p = star + 1;
      s = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

// Rules file: one `rule <pattern> count <0|1>` per line, '#' comments.
inline std::vector<CountRule> parse_count_rules(const std::string& text) {
  std::vector<CountRule> rules;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw, pattern, countkw, value;
    if (!(ls >> kw)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (kw != "rule") throw ParseError(where + "expected 'rule', got '" + kw + "'");
    if (!(ls >> pattern >> countkw >> value) || countkw != "count")
      throw ParseError(where + "expected 'rule <pattern> count <0|1>'");
    if (value != "0" && value != "1")
      throw ParseError(where + "count must be 0 or 1, got '" + value + "'");
    std::string extra;
    if (ls >> extra) throw ParseError(where + "trailing token '" + extra + "'");
    rules.push_back({pattern, value == "1" ? 1 : 0});
  }
  return rules;
}

// Representative count of a classified shape; user rules are consulted first
// (first match wins), then the shipped families; nullopt when undetermined.
inline std::optional<int> count_holomorphic(const ShapeSignature& sig,
                                            const std::vector<CountRule>& rules = {}) {
  for (const CountRule& rule : rules)
    if (pattern_matches(rule.pattern, sig.pattern)) return rule.count;
  if (sig.kind != ShapeKind::Unknown) return 1;
  return std::nullopt;
}

inline std::optional<int> count_holomorphic(const WhitneyContext& ctx, const DiskClass& phi,
                                            const std::vector<CountRule>& rules = {}) {
  return count_holomorphic(classify_shape(ctx, phi), rules);
}

// ---------------------------------------------------------------------------
// Juxtaposition and degenerations
// ---------------------------------------------------------------------------

inline DiskClass juxtapose(const DiskClass& a, const DiskClass& b) {
  if (!(a.to == b.from))
    throw EndpointMismatch("second factor does not start where the first ends");
  if (a.domain.size() != b.domain.size())
    throw EndpointMismatch("factors have different region counts");
  DiskClass out{a.from, b.to, a.domain};
  for (std::size_t i = 0; i < out.domain.size(); ++i) out.domain[i] += b.domain[i];
  return out;
}

// All ordered pairs of positive index-1 classes through any intermediate
// generator whose juxtaposition is psi.
inline std::vector<std::pair<DiskClass, DiskClass>> degenerations(const WhitneyContext& ctx,
                                                                  const DiskClass& psi) {
  const Int total = maslov_index(ctx, psi);
  std::vector<std::pair<DiskClass, DiskClass>> out;
  for (const Generator& mid : enumerate_generators(*ctx.diag)) {
    for (DiskClass& first : positive_classes(ctx, psi.from, mid, 1)) {
      IntVec rest = psi.domain;
      bool nonneg = true;
      for (std::size_t r = 0; r < rest.size(); ++r) {
        rest[r] -= first.domain[r];
        nonneg = nonneg && rest[r] >= 0;
      }
      if (!nonneg) continue;
      DiskClass second{mid, psi.to, std::move(rest)};
      if (whitney_detail::maslov_unchecked(ctx, second) != total - 1) continue;
      out.push_back({std::move(first), std::move(second)});
    }
  }
  return out;
}

}  // namespace hfw
