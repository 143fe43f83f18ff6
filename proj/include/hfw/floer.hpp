#pragma once

// Twisted chain complexes assembled from a diagram.
//
//   * build_complex — generators of one relative structure class, with the
//     differential over F2[Z^r]: entry (y, x) sums count(phi) * e^{[phi]}
//     over the positive index-1 classes from x to y that avoid every marked
//     region, where [phi] is measured in lattice coordinates against a
//     per-entry base class (minimal area, ties by lexicographic domain).
//   * homology — invariant factors over the univariate Laurent ring, or the
//     F2 dimension when the exponent lattice is trivial.
//   * untwisted_differential — the same counts with exponents dropped,
//     computed without any of the gauge machinery (cross-check path).
//   * reduce_basepoints — build the differential for an enlarged marked-point
//     set, pair its unit arrows along the area filtration, and cancel those
//     pairs against the full differential of the smaller set.
//
// Marked-point sets are lists of region indices and must contain the
// diagram's own base regions; enlarging a set only removes disk classes, so
// the resulting matrix entries are supported on a subset of pairs.

#include <hfw/diagram.hpp>
#include <hfw/errors.hpp>
#include <hfw/exact_linalg.hpp>
#include <hfw/groupring.hpp>
#include <hfw/numeric.hpp>
#include <hfw/topology.hpp>
#include <hfw/whitney.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hfw {

// Chain complex of one relative structure class over F2[Z^r].
struct TwistedComplex {
  int ring_rank = 0;
  Generator base;                      // origin generator of the coordinates
  IntVec spinc;                        // class selector relative to `base`
  std::vector<int> basepoints;         // region indices enforced on classes
  std::vector<Generator> generators;   // sorted members of the class
  std::vector<std::string> names;      // rendered generator labels
  std::vector<Rat> filtration;         // area level per generator
  GrMatrix d;                          // entry (target row, source column)
  // Classes that produced each direct entry, keyed by (row, column).  After
  // reduce_basepoints only the directly inherited part is recorded.
  std::map<std::pair<int, int>, std::vector<DiskClass>> provenance;
};

// Override hook for the per-entry base class; receives the sorted positive
// classes of one (x, y) pair and returns the index to use as exponent origin.
using BaseChooser = std::function<std::size_t(const std::vector<DiskClass>&)>;

namespace floer_detail {

inline Rat domain_area(const WhitneyContext& ctx, const IntVec& domain) {
  Rat s(0);
  for (std::size_t r = 0; r < domain.size(); ++r) s += Rat(domain[r]) * ctx.areas[r];
  return s;
}

// Region indices, sorted and deduplicated; empty input means the diagram's
// own base regions.  The diagram's base regions must always be included,
// since connecting families are solved with those multiplicities pinned to 0.
inline std::vector<int> normalize_basepoints(const WhitneyContext& ctx,
                                             std::vector<int> basepoints) {
  const Diagram& diag = *ctx.diag;
  if (basepoints.empty()) basepoints = diag.basepoints;
  std::sort(basepoints.begin(), basepoints.end());
  basepoints.erase(std::unique(basepoints.begin(), basepoints.end()), basepoints.end());
  const int nr = static_cast<int>(diag.regions.size());
  for (int z : basepoints)
    if (z < 0 || z >= nr) throw Error("marked region index out of range");
  for (int z : diag.basepoints)
    if (!std::binary_search(basepoints.begin(), basepoints.end(), z))
      throw Error("marked points must contain the diagram's base region '" +
                  diag.regions[z].id + "'");
  return basepoints;
}

inline std::size_t minimal_area_base(const WhitneyContext& ctx,
                                     const std::vector<DiskClass>& classes) {
  std::size_t best = 0;
  Rat best_area = domain_area(ctx, classes[0].domain);
  for (std::size_t i = 1; i < classes.size(); ++i) {
    const Rat a = domain_area(ctx, classes[i].domain);
    if (a < best_area || (a == best_area && classes[i].domain < classes[best].domain)) {
      best = i;
      best_area = a;
    }
  }
  return best;
}

inline std::string render_domain(const Diagram& diag, const IntVec& domain) {
  std::string out = "[";
  bool first = true;
  for (std::size_t r = 0; r < domain.size(); ++r) {
    if (domain[r] == 0) continue;
    if (!first) out += " ";
    first = false;
    out += diag.regions[r].id + ":" + domain[r].str();
  }
  return out + "]";
}

// Count of one class, as a hard error when no rule or shipped family applies.
inline int require_count(const WhitneyContext& ctx, const DiskClass& phi,
                         const std::vector<CountRule>& rules) {
  const ShapeSignature sig = classify_shape(ctx, phi);
  const std::optional<int> c = count_holomorphic(sig, rules);
  if (!c)
    throw UnknownDiskCount("no count for the class " + generator_label(*ctx.diag, phi.from) +
                           " -> " + generator_label(*ctx.diag, phi.to) + " with domain " +
                           render_domain(*ctx.diag, phi.domain) +
                           "; add a rule for pattern '" + sig.pattern + "'");
  return *c;
}

inline ExpVec exponent_of(const WhitneyContext& ctx, const IntVec& domain, const IntVec& base) {
  IntVec diff(domain.size());
  for (std::size_t r = 0; r < domain.size(); ++r) diff[r] = domain[r] - base[r];
  const std::optional<IntVec> coords = lattice_coordinates(ctx.pb.domains, diff);
  if (!coords)
    throw Error("two classes of one connecting family differ outside the periodic lattice");
  ExpVec e(coords->size());
  for (std::size_t i = 0; i < coords->size(); ++i)
    e[i] = static_cast<long long>((*coords)[i]);
  return e;
}

}  // namespace floer_detail

// Differential of one structure class over F2[Z^r].  `basepoints` lists the
// region indices whose multiplicity every contributing class must avoid
// (empty = the diagram's own); `spinc` selects the class relative to `base`.
inline TwistedComplex build_complex(const WhitneyContext& ctx, std::vector<int> basepoints,
                                    const Generator& base, const IntVec& spinc,
                                    const std::vector<CountRule>& rules = {},
                                    const BaseChooser& choose = {}) {
  const Diagram& diag = *ctx.diag;
  topo_detail::require_generator(diag, base, "base generator");
  if (static_cast<int>(spinc.size()) != ctx.pb.rank())
    throw Error("class selector length does not match the periodic lattice rank");
  if (ctx.areas.empty())
    throw NotAdmissible("building a differential requires a positive area assignment");

  TwistedComplex out;
  out.ring_rank = ctx.pb.rank();
  out.base = base;
  out.spinc = spinc;
  out.basepoints = floer_detail::normalize_basepoints(ctx, std::move(basepoints));

  for (const Generator& g : enumerate_generators(diag))
    if (topo_detail::relative_class(diag, ctx.rep, ctx.pb, base, g) == spinc)
      out.generators.push_back(g);
  const int n = static_cast<int>(out.generators.size());
  for (const Generator& g : out.generators) out.names.push_back(generator_label(diag, g));

  // Area level relative to the first member; differences are well defined
  // because the area assignment vanishes on the periodic lattice.
  for (const Generator& g : out.generators) {
    const DomainLattice fam = connecting_domains(ctx, out.generators[0], g);
    if (!fam.nonempty) throw Error("structure class members admit no connecting domain");
    out.filtration.push_back(-floer_detail::domain_area(ctx, fam.base));
  }

  out.d = GrMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<DiskClass> classes =
          positive_classes(ctx, out.generators[i], out.generators[j], 1);
      std::erase_if(classes, [&](const DiskClass& phi) {
        for (int z : out.basepoints)
          if (phi.domain[z] != 0) return true;
        return false;
      });
      if (classes.empty()) continue;

      std::vector<int> counts(classes.size());
      for (std::size_t k = 0; k < classes.size(); ++k)
        counts[k] = floer_detail::require_count(ctx, classes[k], rules);

      const std::size_t b = choose ? choose(classes) : floer_detail::minimal_area_base(ctx, classes);
      if (b >= classes.size()) throw Error("base-class chooser returned an out-of-range index");

      GroupRingElement entry = GroupRingElement::zero(out.ring_rank);
      std::vector<DiskClass> contributing;
      for (std::size_t k = 0; k < classes.size(); ++k) {
        if (counts[k] % 2 == 0) continue;
        entry += GroupRingElement::monomial(
            floer_detail::exponent_of(ctx, classes[k].domain, classes[b].domain));
        contributing.push_back(classes[k]);
      }
      if (entry.is_zero()) continue;
      out.d.set(j, i, entry);
      out.provenance[{j, i}] = std::move(contributing);
    }
  }

  if (!d_squared_check(out.d))
    throw Error("assembled differential does not square to zero");
  return out;
}

// Same counts with every exponent dropped, assembled without the gauge
// machinery; used to cross-check the augmentation of a twisted differential.
inline GrMatrix untwisted_differential(const WhitneyContext& ctx,
                                       const std::vector<Generator>& gens,
                                       std::vector<int> basepoints,
                                       const std::vector<CountRule>& rules = {}) {
  const std::vector<int> zs = floer_detail::normalize_basepoints(ctx, std::move(basepoints));
  const int n = static_cast<int>(gens.size());
  GrMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int parity = 0;
      for (const DiskClass& phi : positive_classes(ctx, gens[i], gens[j], 1)) {
        bool marked = false;
        for (int z : zs) marked = marked || phi.domain[z] != 0;
        if (!marked) parity ^= floer_detail::require_count(ctx, phi, rules) & 1;
      }
      if (parity) d.set(j, i, GroupRingElement::one(0));
    }
  }
  return d;
}

// Invariant factors of the homology: over F2 when the exponent lattice is
// trivial, over F2[t, 1/t] when it has rank one.
inline ModuleDescription homology(const TwistedComplex& tc) {
  if (tc.ring_rank == 0) return homology_f2(tc.d);
  return homology_univariate(tc.d);
}

inline ModuleDescription homology(const WhitneyContext& ctx, std::vector<int> basepoints,
                                  const Generator& base, const IntVec& spinc,
                                  const std::vector<CountRule>& rules = {}) {
  return homology(build_complex(ctx, std::move(basepoints), base, spinc, rules));
}

// Build with the enlarged set z1, pair its unit arrows greedily along the
// area filtration, then cancel those pairs against the full differential of
// the smaller set z2.  The cancelled output has the homology of the direct
// z2 complex whenever the pairing assumptions hold; violations surface as
// DecompositionFailed.
inline TwistedComplex reduce_basepoints(const WhitneyContext& ctx, std::vector<int> z1,
                                        std::vector<int> z2, const Generator& base,
                                        const IntVec& spinc,
                                        const std::vector<CountRule>& rules = {},
                                        const BaseChooser& choose = {}) {
  z1 = floer_detail::normalize_basepoints(ctx, std::move(z1));
  z2 = floer_detail::normalize_basepoints(ctx, std::move(z2));
  for (int z : z2)
    if (!std::binary_search(z1.begin(), z1.end(), z))
      throw Error("the enlarged marked-point set must contain the smaller one");

  TwistedComplex full = build_complex(ctx, z2, base, spinc, rules, choose);
  if (z1 == z2) return full;

  // Every periodic basis element must meet a z1 marked region; otherwise the
  // enlarged complex retains twisting and the pairing derivation is invalid.
  for (const IntVec& dom : ctx.pb.domains) {
    bool touched = false;
    for (int z : z1) touched = touched || dom[z] != 0;
    if (!touched)
      throw DecompositionFailed("a periodic domain avoids every enlarged marked region");
  }

  const TwistedComplex nice = build_complex(ctx, z1, base, spinc, rules, choose);

  // Unit arrows of the enlarged differential, ordered with sources by
  // ascending area and, per source, by ascending area drop.
  struct Arrow {
    int src, tgt;
  };
  std::vector<Arrow> arrows;
  for (const auto& [rc, v] : nice.d.entries())
    if (v.is_unit()) arrows.push_back({rc.second, rc.first});
  std::sort(arrows.begin(), arrows.end(), [&](const Arrow& a, const Arrow& b) {
    if (nice.filtration[a.src] != nice.filtration[b.src])
      return nice.filtration[a.src] < nice.filtration[b.src];
    if (nice.filtration[a.tgt] != nice.filtration[b.tgt])
      return nice.filtration[a.tgt] > nice.filtration[b.tgt];
    return std::tie(a.src, a.tgt) < std::tie(b.src, b.tgt);
  });
  std::vector<char> matched(full.generators.size(), 0);
  std::vector<std::pair<int, int>> pairs;
  for (const Arrow& a : arrows) {
    if (matched[a.src] || matched[a.tgt]) continue;
    matched[a.src] = matched[a.tgt] = 1;
    pairs.push_back({a.src, a.tgt});
  }

  BlockComplex bc;
  bc.ring_rank = full.ring_rank;
  bc.names = full.names;
  bc.filtration = full.filtration;
  bc.d = full.d;
  bc.pairs = pairs;
  ReducedComplex rc;
  try {
    rc = cancellation_reduce(bc);
  } catch (const PairingNotIdentityLike& e) {
    throw DecompositionFailed(e.what());
  } catch (const NotNilpotent& e) {
    throw DecompositionFailed(e.what());
  }

  TwistedComplex out;
  out.ring_rank = full.ring_rank;
  out.base = full.base;
  out.spinc = full.spinc;
  out.basepoints = z2;
  out.names = rc.names;
  out.filtration = rc.filtration;
  out.d = rc.d;
  std::vector<int> pos(full.generators.size(), -1);
  for (std::size_t k = 0; k < rc.kept.size(); ++k) {
    out.generators.push_back(full.generators[rc.kept[k]]);
    pos[rc.kept[k]] = static_cast<int>(k);
  }
  for (const auto& [key, classes] : full.provenance) {
    const int r = pos[key.first], c = pos[key.second];
    if (r < 0 || c < 0) continue;
    if (out.d.find(r, c) != nullptr) out.provenance[{r, c}] = classes;
  }
  return out;
}

}  // namespace hfw
