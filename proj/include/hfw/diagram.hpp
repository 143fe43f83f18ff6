#pragma once

// Combinatorial multi-pointed Heegaard diagrams.
//
// A diagram is a closed oriented surface of genus G carrying d alpha-curves
// and d beta-curves in general position, encoded region-first: each complement
// region is listed with its genus and one cyclic boundary word per boundary
// component. Boundary words traverse oriented arcs with the region on the
// LEFT. Every junction between consecutive arcs of a word turns through
// exactly one quadrant of the intersection point it passes (transverse double
// points admit no straight or reflex region corners), which is what lets the
// validator reconstruct crossing signs and quadrant ownership from the words
// alone.
//
// File format (.hd, line oriented, '#' starts a comment):
//   diagram <name>
//   genus <G>
//   curves <d>
//   point <id> alpha <i> beta <j> index <k>
//   alpha <i> : <id> <id> ...
//   beta <j> : <id> <id> ...
//   region <id> genus <g> : ( <arc> <arc> ... ) ( ... )
//   basepoints : <region-id> ...          # first listed is the distinguished z
// with <arc> ::= A<i>[<tail>-><head>] | B<j>[<tail>-><head>] and an optional
// occurrence suffix ':<k>' (A1[p->q:1]) selecting among multiple arcs with the
// same endpoints (needed on curves with at most two points).

#include "hfw/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace hfw {

struct IntersectionPoint {
  std::string id;
  int alpha_index = 0;  // 1-based
  int beta_index = 0;   // 1-based
  int local_index = 0;
};

// A directed traversal of one arc of one curve inside a boundary word. The
// arc itself is (curve, slot): slot s of a curve with cyclic point order
// p_0..p_{m-1} runs from p_s to p_{s+1 mod m} in the curve's own orientation.
struct ArcRef {
  bool is_beta = false;
  int curve = 0;  // 0-based
  int slot = 0;
  bool forward = true;  // true: traversed along the curve orientation

  bool operator==(const ArcRef& o) const {
    return is_beta == o.is_beta && curve == o.curve && slot == o.slot && forward == o.forward;
  }
};

struct Region {
  std::string id;
  int genus = 0;
  std::vector<std::vector<ArcRef>> components;  // cyclic boundary words
};

struct Diagram {
  std::string name;
  int surface_genus = 0;
  int d = 0;  // number of alpha curves == number of beta curves
  std::vector<IntersectionPoint> points;
  std::vector<std::vector<int>> alpha_orders;  // per curve, cyclic list of point indices
  std::vector<std::vector<int>> beta_orders;
  std::vector<Region> regions;
  std::vector<int> basepoints;  // region indices; front() is the distinguished z

  int point_by_id(const std::string& id) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int region_by_id(const std::string& id) const {
    for (std::size_t i = 0; i < regions.size(); ++i)
      if (regions[i].id == id) return static_cast<int>(i);
    return -1;
  }
  const std::vector<int>& curve_order(bool is_beta, int curve) const {
    return is_beta ? beta_orders[curve] : alpha_orders[curve];
  }
  // Tail and head point indices of an arc traversal.
  std::pair<int, int> arc_endpoints(const ArcRef& a) const {
    const auto& ord = curve_order(a.is_beta, a.curve);
    const int m = static_cast<int>(ord.size());
    const int t = ord[a.slot], h = ord[(a.slot + 1) % m];
    return a.forward ? std::make_pair(t, h) : std::make_pair(h, t);
  }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace diagram_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

struct RawLine {
  int number = 0;
  std::vector<std::string> tokens;
};

inline ParseError parse_error(int line, const std::string& msg) {
  return ParseError("line " + std::to_string(line) + ": " + msg);
}

// Directed-traversal candidates on `order` from tail to head, sorted by
// (slot, forward-before-backward).
inline std::vector<std::pair<int, bool>> arc_candidates(const std::vector<int>& order, int tail,
                                                        int head) {
  std::vector<std::pair<int, bool>> out;
  const int m = static_cast<int>(order.size());
  for (int s = 0; s < m; ++s) {
    const int a = order[s], b = order[(s + 1) % m];
    if (a == tail && b == head) out.emplace_back(s, true);
    if (a == head && b == tail) out.emplace_back(s, false);
  }
  return out;
}

}  // namespace diagram_detail

// Resolve one arc token such as "A1[p->q]" or "B2[x->y:1]" against the
// diagram's declared curve orders. `line` >= 0 prefixes error messages with
// the source line.
inline ArcRef resolve_arc_token(const Diagram& diag, const std::string& token, int line = -1) {
  static const std::regex arc_re(
      R"(^([AB])([0-9]+)\[([A-Za-z0-9_.+-]+)->([A-Za-z0-9_.+-]+)(?::([0-9]+))?\]$)");
  const std::string at = line >= 0 ? "line " + std::to_string(line) + ": " : "";
  std::smatch m;
  if (!std::regex_match(token, m, arc_re)) throw ParseError(at + "bad arc token '" + token + "'");
  ArcRef a;
  a.is_beta = m[1] == "B";
  a.curve = std::stoi(m[2]) - 1;
  if (a.curve < 0 || a.curve >= diag.d)
    throw UndeclaredReference(at + "curve " + m[2].str() + " of " + std::to_string(diag.d));
  const int tail = diag.point_by_id(m[3]);
  const int head = diag.point_by_id(m[4]);
  if (tail < 0) throw UndeclaredReference(at + "point '" + m[3].str() + "'");
  if (head < 0) throw UndeclaredReference(at + "point '" + m[4].str() + "'");
  const auto& order = diag.curve_order(a.is_beta, a.curve);
  auto cands = diagram_detail::arc_candidates(order, tail, head);
  if (cands.empty()) throw ParseError(at + "no arc '" + token + "' on that curve");
  if (m[5].matched) {
    const std::size_t k = std::stoul(m[5]);
    if (k >= cands.size())
      throw ParseError(at + "occurrence index " + m[5].str() + " out of range for '" + token +
                       "' (" + std::to_string(cands.size()) + " candidates)");
    a.slot = cands[k].first;
    a.forward = cands[k].second;
  } else {
    if (cands.size() > 1)
      throw ParseError(at + "ambiguous arc '" + token + "': " + std::to_string(cands.size()) +
                       " candidates, add an occurrence suffix ':k'");
    a.slot = cands[0].first;
    a.forward = cands[0].second;
  }
  return a;
}

inline Diagram parse_diagram(const std::string& text) {
  using diagram_detail::parse_error;
  Diagram diag;

  std::vector<diagram_detail::RawLine> alpha_lines, beta_lines, region_lines, basepoint_lines;
  bool saw_name = false, saw_genus = false, saw_curves = false;
  std::set<std::string> point_ids;
  std::set<std::tuple<int, int, int>> point_triples;

  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tokens = diagram_detail::tokenize(line);
    if (tokens.empty()) continue;
    const std::string& kw = tokens[0];

    auto expect_int = [&](const std::string& tok, const char* what) {
      try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
      } catch (const std::exception&) {
        throw parse_error(lineno, std::string("expected integer for ") + what + ", got '" + tok + "'");
      }
    };

    if (kw == "diagram") {
      if (saw_name) throw DuplicateId("line " + std::to_string(lineno) + ": duplicate 'diagram'");
      if (tokens.size() != 2) throw parse_error(lineno, "usage: diagram <name>");
      diag.name = tokens[1];
      saw_name = true;
    } else if (kw == "genus") {
      if (saw_genus) throw DuplicateId("line " + std::to_string(lineno) + ": duplicate 'genus'");
      if (tokens.size() != 2) throw parse_error(lineno, "usage: genus <G>");
      diag.surface_genus = expect_int(tokens[1], "genus");
      if (diag.surface_genus < 0) throw parse_error(lineno, "genus must be nonnegative");
      saw_genus = true;
    } else if (kw == "curves") {
      if (saw_curves) throw DuplicateId("line " + std::to_string(lineno) + ": duplicate 'curves'");
      if (tokens.size() != 2) throw parse_error(lineno, "usage: curves <d>");
      diag.d = expect_int(tokens[1], "curve count");
      if (diag.d < 1) throw parse_error(lineno, "curve count must be positive");
      saw_curves = true;
    } else if (kw == "point") {
      if (tokens.size() != 8 || tokens[2] != "alpha" || tokens[4] != "beta" || tokens[6] != "index")
        throw parse_error(lineno, "usage: point <id> alpha <i> beta <j> index <k>");
      IntersectionPoint p;
      p.id = tokens[1];
      p.alpha_index = expect_int(tokens[3], "alpha index");
      p.beta_index = expect_int(tokens[5], "beta index");
      p.local_index = expect_int(tokens[7], "local index");
      if (!point_ids.insert(p.id).second)
        throw DuplicateId("line " + std::to_string(lineno) + ": duplicate point id '" + p.id + "'");
      if (!point_triples.insert({p.alpha_index, p.beta_index, p.local_index}).second)
        throw DuplicateId("line " + std::to_string(lineno) + ": duplicate point label (" +
                          tokens[3] + "," + tokens[5] + "," + tokens[7] + ")");
      if (p.local_index < 1) throw parse_error(lineno, "local index must be positive");
      diag.points.push_back(p);
    } else if (kw == "alpha") {
      alpha_lines.push_back({lineno, tokens});
    } else if (kw == "beta") {
      beta_lines.push_back({lineno, tokens});
    } else if (kw == "region") {
      region_lines.push_back({lineno, tokens});
    } else if (kw == "basepoints") {
      basepoint_lines.push_back({lineno, tokens});
    } else {
      throw parse_error(lineno, "unknown keyword '" + kw + "'");
    }
  }

  if (!saw_name) throw ParseError("missing 'diagram' line");
  if (!saw_genus) throw ParseError("missing 'genus' line");
  if (!saw_curves) throw ParseError("missing 'curves' line");
  for (const auto& p : diag.points) {
    if (p.alpha_index < 1 || p.alpha_index > diag.d)
      throw UndeclaredReference("point '" + p.id + "' names alpha curve " +
                                std::to_string(p.alpha_index) + " of " + std::to_string(diag.d));
    if (p.beta_index < 1 || p.beta_index > diag.d)
      throw UndeclaredReference("point '" + p.id + "' names beta curve " +
                                std::to_string(p.beta_index) + " of " + std::to_string(diag.d));
  }

  // Curve cyclic orders.
  diag.alpha_orders.assign(diag.d, {});
  diag.beta_orders.assign(diag.d, {});
  auto fill_orders = [&](const std::vector<diagram_detail::RawLine>& lines, bool is_beta) {
    std::set<int> seen;
    for (const auto& rl : lines) {
      const auto& t = rl.tokens;
      if (t.size() < 3 || t[2] != ":")
        throw parse_error(rl.number, std::string("usage: ") + (is_beta ? "beta" : "alpha") +
                                         " <i> : <point> ...");
      int idx;
      try {
        idx = std::stoi(t[1]);
      } catch (const std::exception&) {
        throw parse_error(rl.number, "bad curve number '" + t[1] + "'");
      }
      if (idx < 1 || idx > diag.d)
        throw UndeclaredReference("line " + std::to_string(rl.number) + ": curve " + t[1] +
                                  " of " + std::to_string(diag.d));
      if (!seen.insert(idx).second)
        throw DuplicateId("line " + std::to_string(rl.number) + ": duplicate order for " +
                          (is_beta ? "beta " : "alpha ") + t[1]);
      std::vector<int>& order = is_beta ? diag.beta_orders[idx - 1] : diag.alpha_orders[idx - 1];
      for (std::size_t i = 3; i < t.size(); ++i) {
        const int pi = diag.point_by_id(t[i]);
        if (pi < 0)
          throw UndeclaredReference("line " + std::to_string(rl.number) + ": point '" + t[i] + "'");
        order.push_back(pi);
      }
    }
  };
  fill_orders(alpha_lines, false);
  fill_orders(beta_lines, true);

  // Regions.
  std::set<std::string> region_ids;
  for (const auto& rl : region_lines) {
    const auto& t = rl.tokens;
    if (t.size() < 5 || t[2] != "genus" || t[4] != ":")
      throw parse_error(rl.number, "usage: region <id> genus <g> : ( <arc> ... ) ...");
    Region reg;
    reg.id = t[1];
    try {
      reg.genus = std::stoi(t[3]);
    } catch (const std::exception&) {
      throw parse_error(rl.number, "bad region genus '" + t[3] + "'");
    }
    if (reg.genus < 0) throw parse_error(rl.number, "region genus must be nonnegative");
    if (!region_ids.insert(reg.id).second)
      throw DuplicateId("line " + std::to_string(rl.number) + ": duplicate region id '" + reg.id + "'");

    std::optional<std::vector<ArcRef>> word;
    for (std::size_t i = 5; i < t.size(); ++i) {
      if (t[i] == "(") {
        if (word) throw parse_error(rl.number, "nested '('");
        word.emplace();
      } else if (t[i] == ")") {
        if (!word) throw parse_error(rl.number, "')' without '('");
        if (word->empty()) throw parse_error(rl.number, "empty boundary word");
        reg.components.push_back(std::move(*word));
        word.reset();
      } else {
        if (!word) throw parse_error(rl.number, "arc outside parentheses: '" + t[i] + "'");
        word->push_back(resolve_arc_token(diag, t[i], rl.number));
      }
    }
    if (word) throw parse_error(rl.number, "unterminated '('");
    if (reg.components.empty()) throw parse_error(rl.number, "region has no boundary words");
    diag.regions.push_back(std::move(reg));
  }

  // Basepoints.
  if (basepoint_lines.size() > 1)
    throw DuplicateId("line " + std::to_string(basepoint_lines[1].number) +
                      ": duplicate 'basepoints'");
  if (basepoint_lines.empty()) throw ParseError("missing 'basepoints' line");
  {
    const auto& rl = basepoint_lines[0];
    const auto& t = rl.tokens;
    if (t.size() < 3 || t[1] != ":")
      throw parse_error(rl.number, "usage: basepoints : <region-id> ...");
    std::set<int> seen;
    for (std::size_t i = 2; i < t.size(); ++i) {
      const int r = diag.region_by_id(t[i]);
      if (r < 0)
        throw UndeclaredReference("line " + std::to_string(rl.number) + ": region '" + t[i] + "'");
      if (!seen.insert(r).second)
        throw DuplicateId("line " + std::to_string(rl.number) + ": duplicate basepoint '" + t[i] + "'");
      diag.basepoints.push_back(r);
    }
  }

  return diag;
}

// ---------------------------------------------------------------------------
// Canonicalization and serialization
// ---------------------------------------------------------------------------

namespace diagram_detail {

inline std::string render_arc(const Diagram& diag, const ArcRef& a) {
  const auto [tail, head] = diag.arc_endpoints(a);
  const auto& order = diag.curve_order(a.is_beta, a.curve);
  auto cands = arc_candidates(order, tail, head);
  std::string out = (a.is_beta ? "B" : "A") + std::to_string(a.curve + 1) + "[" +
                    diag.points[tail].id + "->" + diag.points[head].id;
  if (cands.size() > 1) {
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (cands[k] == std::make_pair(a.slot, a.forward)) {
        out += ":" + std::to_string(k);
        break;
      }
  }
  return out + "]";
}

inline std::string render_word(const Diagram& diag, const std::vector<ArcRef>& word) {
  std::string out = "(";
  for (const auto& a : word) out += " " + render_arc(diag, a);
  return out + " )";
}

}  // namespace diagram_detail

// Normalize to the canonical presentation: points sorted by (alpha, beta,
// local) label, curve orders rotated to start at their smallest point, region
// words rotated to their lexicographically smallest rendering, regions sorted
// by id, basepoint tail sorted (the distinguished first entry stays put).
inline Diagram canonicalize(const Diagram& input) {
  Diagram diag = input;

  // Sort points and remap indices.
  std::vector<int> perm(diag.points.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    const auto& p = diag.points[a];
    const auto& q = diag.points[b];
    return std::tie(p.alpha_index, p.beta_index, p.local_index) <
           std::tie(q.alpha_index, q.beta_index, q.local_index);
  });
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  {
    std::vector<IntersectionPoint> sorted;
    for (int old : perm) sorted.push_back(diag.points[old]);
    diag.points = std::move(sorted);
  }
  auto remap_order = [&](std::vector<int>& order) {
    for (int& p : order) p = inv[p];
  };
  for (auto& o : diag.alpha_orders) remap_order(o);
  for (auto& o : diag.beta_orders) remap_order(o);

  // Rotate curve orders to start at the smallest point index; remap slots.
  auto rotate_curve = [&](std::vector<int>& order, bool is_beta, int curve) {
    if (order.empty()) return;
    const int m = static_cast<int>(order.size());
    const int rot = static_cast<int>(std::min_element(order.begin(), order.end()) - order.begin());
    if (rot == 0) return;
    std::rotate(order.begin(), order.begin() + rot, order.end());
    for (auto& reg : diag.regions)
      for (auto& word : reg.components)
        for (auto& a : word)
          if (a.is_beta == is_beta && a.curve == curve) a.slot = (a.slot - rot + m) % m;
  };
  for (int i = 0; i < diag.d; ++i) {
    rotate_curve(diag.alpha_orders[i], false, i);
    rotate_curve(diag.beta_orders[i], true, i);
  }

  // Canonical rotation of each boundary word, then sort words within a region.
  for (auto& reg : diag.regions) {
    for (auto& word : reg.components) {
      std::string best = diagram_detail::render_word(diag, word);
      std::vector<ArcRef> best_word = word;
      for (std::size_t r = 1; r < word.size(); ++r) {
        std::vector<ArcRef> rotated(word.begin() + r, word.end());
        rotated.insert(rotated.end(), word.begin(), word.begin() + r);
        const std::string s = diagram_detail::render_word(diag, rotated);
        if (s < best) {
          best = s;
          best_word = std::move(rotated);
        }
      }
      word = std::move(best_word);
    }
    std::sort(reg.components.begin(), reg.components.end(),
              [&](const std::vector<ArcRef>& a, const std::vector<ArcRef>& b) {
                return diagram_detail::render_word(diag, a) < diagram_detail::render_word(diag, b);
              });
  }

  // Sort regions by id and remap basepoints.
  std::vector<int> rperm(diag.regions.size());
  for (std::size_t i = 0; i < rperm.size(); ++i) rperm[i] = static_cast<int>(i);
  std::sort(rperm.begin(), rperm.end(),
            [&](int a, int b) { return diag.regions[a].id < diag.regions[b].id; });
  std::vector<int> rinv(rperm.size());
  for (std::size_t i = 0; i < rperm.size(); ++i) rinv[rperm[i]] = static_cast<int>(i);
  {
    std::vector<Region> sorted;
    for (int old : rperm) sorted.push_back(std::move(diag.regions[old]));
    diag.regions = std::move(sorted);
  }
  for (int& b : diag.basepoints) b = rinv[b];
  if (diag.basepoints.size() > 1)
    std::sort(diag.basepoints.begin() + 1, diag.basepoints.end());

  return diag;
}

inline std::string serialize(const Diagram& input) {
  const Diagram diag = canonicalize(input);
  std::ostringstream out;
  out << "diagram " << diag.name << "\n";
  out << "genus " << diag.surface_genus << "\n";
  out << "curves " << diag.d << "\n";
  for (const auto& p : diag.points)
    out << "point " << p.id << " alpha " << p.alpha_index << " beta " << p.beta_index << " index "
        << p.local_index << "\n";
  for (int i = 0; i < diag.d; ++i) {
    out << "alpha " << (i + 1) << " :";
    for (int p : diag.alpha_orders[i]) out << " " << diag.points[p].id;
    out << "\n";
  }
  for (int i = 0; i < diag.d; ++i) {
    out << "beta " << (i + 1) << " :";
    for (int p : diag.beta_orders[i]) out << " " << diag.points[p].id;
    out << "\n";
  }
  for (const auto& reg : diag.regions) {
    out << "region " << reg.id << " genus " << reg.genus << " :";
    for (const auto& word : reg.components) out << " " << diagram_detail::render_word(diag, word);
    out << "\n";
  }
  out << "basepoints :";
  for (int b : diag.basepoints) out << " " << diag.regions[b].id;
  out << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// Rays at an intersection point, in the curves' own orientations.
enum Ray : int { kAlphaOut = 0, kBetaOut = 1, kAlphaIn = 2, kBetaIn = 3 };

struct Violation {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  // Derived geometry, meaningful only when ok():
  //   crossing_sign[p]: +1 iff the counterclockwise ray order at p is
  //     (alpha-out, beta-out, alpha-in, beta-in); -1 for the mirror order.
  //   quadrant_region[p][q]: region owning the q-th counterclockwise sector;
  //     sector q lies between ray ray_order[q] and ray ray_order[q+1].
  //   arc sides: region seen on the left / right of each arc (indexed by
  //     curve then slot), where left is the side seen traversing forward.
  std::vector<int> crossing_sign;
  std::vector<std::array<int, 4>> quadrant_region;
  std::vector<std::vector<std::pair<int, int>>> alpha_arc_sides;
  std::vector<std::vector<std::pair<int, int>>> beta_arc_sides;

  bool ok() const { return violations.empty(); }
};

// Counterclockwise ray order for a crossing sign.
inline std::array<Ray, 4> ray_order(int sign) {
  if (sign > 0) return {kAlphaOut, kBetaOut, kAlphaIn, kBetaIn};
  return {kAlphaOut, kBetaIn, kAlphaIn, kBetaOut};
}

inline ValidationReport validate(const Diagram& diag) {
  ValidationReport rep;
  auto flag = [&](const std::string& code, const std::string& detail) {
    rep.violations.push_back({code, detail});
  };

  const int np = static_cast<int>(diag.points.size());

  if (static_cast<int>(diag.alpha_orders.size()) != diag.d ||
      static_cast<int>(diag.beta_orders.size()) != diag.d)
    flag("CurveCount", "curve order tables do not match the declared curve count");

  // Point membership: each point exactly once in its own curves' orders.
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    const auto& orders = is_beta ? diag.beta_orders : diag.alpha_orders;
    std::vector<int> uses(np, 0);
    for (int c = 0; c < static_cast<int>(orders.size()); ++c) {
      if (orders[c].empty())
        flag("EmptyCurve", std::string(is_beta ? "beta " : "alpha ") + std::to_string(c + 1) +
                               " has no intersection points");
      for (int p : orders[c]) {
        uses[p]++;
        const int declared = is_beta ? diag.points[p].beta_index : diag.points[p].alpha_index;
        if (declared != c + 1)
          flag("CurveMembership", "point '" + diag.points[p].id + "' listed on " +
                                      (is_beta ? "beta " : "alpha ") + std::to_string(c + 1) +
                                      " but declared on " + std::to_string(declared));
      }
    }
    for (int p = 0; p < np; ++p)
      if (uses[p] != 1)
        flag("CurveMembership", "point '" + diag.points[p].id + "' appears " +
                                    std::to_string(uses[p]) + " times in " +
                                    (is_beta ? "beta" : "alpha") + " orders");
  }

  // Arc usage: every arc exactly once forward and once backward; record sides.
  rep.alpha_arc_sides.assign(diag.d, {});
  rep.beta_arc_sides.assign(diag.d, {});
  for (int c = 0; c < diag.d; ++c) {
    rep.alpha_arc_sides[c].assign(diag.alpha_orders[c].size(), {-1, -1});
    rep.beta_arc_sides[c].assign(diag.beta_orders[c].size(), {-1, -1});
  }
  for (int r = 0; r < static_cast<int>(diag.regions.size()); ++r) {
    for (const auto& word : diag.regions[r].components) {
      for (const auto& a : word) {
        auto& sides = a.is_beta ? rep.beta_arc_sides[a.curve][a.slot]
                                : rep.alpha_arc_sides[a.curve][a.slot];
        int& side = a.forward ? sides.first : sides.second;
        if (side != -1)
          flag("ArcOveruse", std::string(a.is_beta ? "beta" : "alpha") + " arc " +
                                 std::to_string(a.curve + 1) + "/" + std::to_string(a.slot) +
                                 (a.forward ? " forward" : " backward") + " used more than once");
        side = r;
      }
    }
  }
  for (int side = 0; side < 2; ++side) {
    const bool is_beta = side == 1;
    const auto& table = is_beta ? rep.beta_arc_sides : rep.alpha_arc_sides;
    for (int c = 0; c < diag.d; ++c)
      for (std::size_t s = 0; s < table[c].size(); ++s) {
        if (table[c][s].first == -1)
          flag("ArcUnderuse", std::string(is_beta ? "beta" : "alpha") + " arc " +
                                  std::to_string(c + 1) + "/" + std::to_string(s) +
                                  " has no forward (left-side) traversal");
        if (table[c][s].second == -1)
          flag("ArcUnderuse", std::string(is_beta ? "beta" : "alpha") + " arc " +
                                  std::to_string(c + 1) + "/" + std::to_string(s) +
                                  " has no backward (right-side) traversal");
      }
  }

  // Junction corners: alternation, endpoint chaining, quadrant reconstruction.
  struct Corner {
    int region;
    Ray depart, arrive;
  };
  std::vector<std::vector<Corner>> corners(np);
  for (int r = 0; r < static_cast<int>(diag.regions.size()); ++r) {
    for (const auto& word : diag.regions[r].components) {
      const int n = static_cast<int>(word.size());
      for (int i = 0; i < n; ++i) {
        const ArcRef& in_arc = word[i];
        const ArcRef& out_arc = word[(i + 1) % n];
        const int meet = diag.arc_endpoints(in_arc).second;
        if (diag.arc_endpoints(out_arc).first != meet) {
          flag("EndpointMismatch", "region '" + diag.regions[r].id +
                                       "': consecutive arcs do not share a point");
          continue;
        }
        if (in_arc.is_beta == out_arc.is_beta) {
          flag("AlternationBroken", "region '" + diag.regions[r].id + "': consecutive " +
                                        (in_arc.is_beta ? "beta" : "alpha") + " arcs at point '" +
                                        diag.points[meet].id + "'");
          continue;
        }
        // Ray pointing back along the arrival, ray pointing out along the
        // departure; the corner is the single sector swept from the departure
        // ray counterclockwise to the arrival ray.
        const Ray arrive = in_arc.is_beta ? (in_arc.forward ? kBetaIn : kBetaOut)
                                          : (in_arc.forward ? kAlphaIn : kAlphaOut);
        const Ray depart = out_arc.is_beta ? (out_arc.forward ? kBetaOut : kBetaIn)
                                           : (out_arc.forward ? kAlphaOut : kAlphaIn);
        corners[meet].push_back({r, depart, arrive});
      }
    }
  }

  rep.crossing_sign.assign(np, 0);
  rep.quadrant_region.assign(np, {-1, -1, -1, -1});
  for (int p = 0; p < np; ++p) {
    if (corners[p].size() != 4) {
      flag("CornerCount", "point '" + diag.points[p].id + "' has " +
                              std::to_string(corners[p].size()) + " region corners, expected 4");
      continue;
    }
    bool assigned = false;
    for (int sign : {+1, -1}) {
      const auto order = ray_order(sign);
      std::array<int, 4> pos;  // position of each ray in the ccw order
      for (int i = 0; i < 4; ++i) pos[order[i]] = i;
      std::array<int, 4> owner = {-1, -1, -1, -1};
      bool ok = true;
      for (const auto& c : corners[p]) {
        const int q = pos[c.depart];
        if (order[(q + 1) % 4] != c.arrive || owner[q] != -1) {
          ok = false;
          break;
        }
        owner[q] = c.region;
      }
      if (ok) {
        rep.crossing_sign[p] = sign;
        rep.quadrant_region[p] = owner;
        assigned = true;
        break;
      }
    }
    if (!assigned)
      flag("InconsistentCrossing",
           "point '" + diag.points[p].id + "' admits no crossing sign matching its corners");
  }

  // Euler characteristic: V - E + sum of face characteristics with E = 2V.
  {
    long long face_sum = 0;
    for (const auto& reg : diag.regions)
      face_sum += 2 - 2 * static_cast<long long>(reg.genus) -
                  static_cast<long long>(reg.components.size());
    const long long chi = face_sum - np;
    if (chi != 2 - 2 * static_cast<long long>(diag.surface_genus))
      flag("EulerCharacteristic", "computed " + std::to_string(chi) + ", declared genus needs " +
                                      std::to_string(2 - 2 * diag.surface_genus));
  }

  if (diag.basepoints.empty()) flag("Basepoints", "no basepoint regions declared");

  return rep;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// A generator assigns to each alpha curve one intersection point such that
// the induced beta indices are a permutation.
using Generator = std::vector<int>;  // point index per alpha curve, size d

namespace diagram_detail {

template <typename Visit>
inline void for_each_generator(const Diagram& diag, Visit&& visit) {
  std::vector<std::vector<int>> by_alpha(diag.d);
  for (int p = 0; p < static_cast<int>(diag.points.size()); ++p)
    by_alpha[diag.points[p].alpha_index - 1].push_back(p);
  Generator current(diag.d, -1);
  std::uint32_t beta_used = 0;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == diag.d) {
      visit(current);
      return;
    }
    for (int p : by_alpha[i]) {
      const int b = diag.points[p].beta_index - 1;
      if (beta_used & (1u << b)) continue;
      beta_used |= 1u << b;
      current[i] = p;
      self(self, i + 1);
      beta_used &= ~(1u << b);
    }
  };
  rec(rec, 0);
}

}  // namespace diagram_detail

inline std::vector<Generator> enumerate_generators(const Diagram& diag) {
  std::vector<Generator> out;
  diagram_detail::for_each_generator(diag, [&](const Generator& g) { out.push_back(g); });
  std::sort(out.begin(), out.end());
  return out;
}

// Count without materializing: the permanent of the intersection-count matrix
// computed by the same backtracking.
inline unsigned long long count_generators(const Diagram& diag) {
  unsigned long long n = 0;
  diagram_detail::for_each_generator(diag, [&](const Generator&) { ++n; });
  return n;
}

inline std::string generator_label(const Diagram& diag, const Generator& g) {
  std::string out = "(";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ",";
    out += diag.points[g[i]].id;
  }
  return out + ")";
}

}  // namespace hfw
