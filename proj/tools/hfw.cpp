// hfw — command-line front end for the Heegaard diagram workbench.
//
// Subcommands read .hd diagram files (and .path / rules files where noted)
// and print either human-readable text or structured JSON via --json <path>
// (use "-" for stdout).
//
// Exit codes:
//   0  success, or the checked property holds
//   1  the checked property fails (invalid diagram, inadmissible, unknown
//      disk count, failed decomposition, failed verifier)
//   2  input errors (missing file, parse error, bad flag values)

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hfw/diagram.hpp"
#include "hfw/errors.hpp"
#include "hfw/floer.hpp"
#include "hfw/groupring.hpp"
#include "hfw/replicate.hpp"
#include "hfw/topology.hpp"
#include "hfw/whitney.hpp"

#include <CLI11.hpp>
#include <json.hpp>

using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit_json(const std::optional<std::string>& dest, const json& j) {
  if (!dest) return;
  if (*dest == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(*dest, std::ios::binary);
  if (!out) throw InputError("cannot write '" + *dest + "'");
  out << j.dump(2) << "\n";
}

hfw::Diagram load_diagram(const std::string& path) {
  return hfw::parse_diagram(read_file(path));
}

// Validation is a precondition for every semantic subcommand.
hfw::ValidationReport require_valid(const hfw::Diagram& diag, const std::string& path) {
  hfw::ValidationReport rep = hfw::validate(diag);
  if (!rep.ok()) {
    std::string msg = "'" + path + "' fails validation:";
    for (const auto& v : rep.violations) msg += "\n  [" + v.code + "] " + v.detail;
    throw InputError(msg);
  }
  return rep;
}

int find_region(const hfw::Diagram& diag, const std::string& token) {
  for (std::size_t r = 0; r < diag.regions.size(); ++r)
    if (diag.regions[r].id == token) return static_cast<int>(r);
  try {
    std::size_t used = 0;
    const int idx = std::stoi(token, &used);
    if (used == token.size() && idx >= 0 && idx < static_cast<int>(diag.regions.size()))
      return idx;
  } catch (const std::exception&) {
  }
  throw InputError("unknown region '" + token + "'");
}

int find_point(const hfw::Diagram& diag, const std::string& token) {
  for (std::size_t p = 0; p < diag.points.size(); ++p)
    if (diag.points[p].id == token) return static_cast<int>(p);
  throw InputError("unknown intersection point '" + token + "'");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_regions(const hfw::Diagram& diag, const std::string& csv) {
  std::vector<int> out;
  for (const auto& tok : split_list(csv)) out.push_back(find_region(diag, tok));
  return out;
}

// Generators are written as comma-separated point ids, e.g. "p,q"; the tuple
// is re-ordered by alpha curve internally.
hfw::Generator parse_generator(const hfw::Diagram& diag, const std::string& csv) {
  const auto toks = split_list(csv);
  if (static_cast<int>(toks.size()) != diag.d)
    throw InputError("generator needs exactly " + std::to_string(diag.d) + " points");
  hfw::Generator g(diag.d, -1);
  for (const auto& tok : toks) {
    const int p = find_point(diag, tok);
    const int a = diag.points[p].alpha_index - 1;
    if (a < 0 || a >= diag.d || g[a] != -1)
      throw InputError("generator does not occupy each alpha curve once");
    g[a] = p;
  }
  return g;
}

hfw::IntVec parse_spinc(const std::string& csv) {
  hfw::IntVec out;
  for (const auto& tok : split_list(csv)) {
    try {
      std::size_t used = 0;
      out.push_back(hfw::Int(std::stoll(tok, &used)));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("bad class coordinate '" + tok + "'");
    }
  }
  return out;
}

std::string tuple_label(const hfw::IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

std::string rat_str(const hfw::Rat& r) {
  std::string s = r.numerator().str();
  if (r.denominator() != 1) s += "/" + r.denominator().str();
  return s;
}

// The canonical base generator: first in lexicographic enumeration order.
hfw::Generator default_base(const hfw::Diagram& diag) {
  const auto gens = hfw::enumerate_generators(diag);
  if (gens.empty()) throw CheckFailed("diagram has no generators");
  return gens.front();
}

std::vector<hfw::CountRule> load_rules(const std::optional<std::string>& path) {
  if (!path) return {};
  return hfw::parse_count_rules(read_file(*path));
}

json poly_json(const hfw::GroupRingElement& e) {
  json terms = json::array();
  for (const auto& m : e.terms()) {
    json mono = json::array();
    for (long long c : m) mono.push_back(c);
    terms.push_back(mono);
  }
  return terms;
}

json matrix_json(const hfw::GrMatrix& m) {
  json entries = json::array();
  for (const auto& [rc, v] : m.entries())
    entries.push_back(json::array({rc.first, rc.second, poly_json(v)}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

json complex_json(const hfw::TwistedComplex& tc) {
  json names = json::array();
  for (const auto& n : tc.names) names.push_back(n);
  json filt = json::array();
  for (const auto& f : tc.filtration) filt.push_back(rat_str(f));
  json zs = json::array();
  for (int z : tc.basepoints) zs.push_back(z);
  return json{{"ring_rank", tc.ring_rank}, {"class", tuple_label(tc.spinc)},
              {"basepoints", zs},          {"generators", names},
              {"filtration", filt},        {"d", matrix_json(tc.d)}};
}

void print_complex(const hfw::TwistedComplex& tc) {
  std::cout << "ring rank  " << tc.ring_rank << "\n";
  std::cout << "class      " << tuple_label(tc.spinc) << "\n";
  std::cout << "generators " << tc.names.size() << "\n";
  for (std::size_t i = 0; i < tc.names.size(); ++i)
    std::cout << "  [" << i << "] " << tc.names[i] << "   filtration " << rat_str(tc.filtration[i])
              << "\n";
  if (tc.d.entries().empty()) {
    std::cout << "differential: zero\n";
    return;
  }
  std::cout << "differential entries (source -> target : coefficient):\n";
  for (const auto& [rc, v] : tc.d.entries())
    std::cout << "  " << tc.names[rc.second] << " -> " << tc.names[rc.first] << " : " << v.str()
              << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  const hfw::ValidationReport rep = hfw::validate(diag);
  json violations = json::array();
  for (const auto& v : rep.violations) violations.push_back({{"code", v.code}, {"detail", v.detail}});
  emit_json(json_out, json{{"valid", rep.ok()},
                           {"violations", violations},
                           {"points", diag.points.size()},
                           {"regions", diag.regions.size()},
                           {"genus", diag.surface_genus},
                           {"curves", diag.d}});
  if (rep.ok()) {
    std::cout << "valid: genus " << diag.surface_genus << ", " << diag.d << "+" << diag.d
              << " curves, " << diag.points.size() << " points, " << diag.regions.size()
              << " regions\n";
    return 0;
  }
  for (const auto& v : rep.violations) std::cout << "[" << v.code << "] " << v.detail << "\n";
  return 1;
}

int cmd_gens(const std::string& path, bool count_only, const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  require_valid(diag, path);
  const unsigned long long n = hfw::count_generators(diag);
  json j{{"count", n}};
  if (!count_only) {
    json labels = json::array();
    for (const auto& g : hfw::enumerate_generators(diag))
      labels.push_back(hfw::generator_label(diag, g));
    j["generators"] = labels;
    for (const auto& l : j["generators"]) std::cout << l.get<std::string>() << "\n";
  }
  std::cout << n << "\n";
  emit_json(json_out, j);
  return 0;
}

int cmd_periodic(const std::string& path, const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  const auto rep = require_valid(diag, path);
  const hfw::PeriodicBasis pb = hfw::periodic_domains(diag, rep);
  json basis = json::array();
  for (const auto& dom : pb.domains) {
    json row = json::array();
    for (const auto& c : dom) row.push_back(static_cast<long long>(c));
    basis.push_back(row);
  }
  json regions = json::array();
  for (const auto& r : diag.regions) regions.push_back(r.id);
  emit_json(json_out, json{{"rank", pb.rank()}, {"basis", basis}, {"regions", regions}});
  std::cout << "rank " << pb.rank() << "\n";
  for (const auto& dom : pb.domains) {
    std::string line;
    for (std::size_t r = 0; r < dom.size(); ++r) {
      if (dom[r] == 0) continue;
      if (!line.empty()) line += " ";
      line += diag.regions[r].id + ":" + dom[r].str();
    }
    std::cout << "  " << (line.empty() ? "0" : line) << "\n";
  }
  return 0;
}

int cmd_admissible(const std::string& path, const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  const auto rep = require_valid(diag, path);
  const hfw::PeriodicBasis pb = hfw::periodic_domains(diag, rep);
  const auto adm = hfw::check_weak_admissibility(pb);
  if (!adm.admissible) {
    json witness = json::array();
    for (const auto& c : adm.witness_domain) witness.push_back(static_cast<long long>(c));
    emit_json(json_out, json{{"admissible", false}, {"witness", witness}});
    std::cout << "not admissible: a nonzero base-point-free periodic domain has no sign change\n";
    return 1;
  }
  const std::vector<hfw::Rat> areas = hfw::area_assignment(pb);
  json ja = json::array();
  for (const auto& a : areas) ja.push_back(rat_str(a));
  emit_json(json_out, json{{"admissible", true}, {"areas", ja}});
  std::cout << "admissible\n";
  for (std::size_t r = 0; r < areas.size(); ++r)
    std::cout << "  " << diag.regions[r].id << " : " << rat_str(areas[r]) << "\n";
  return 0;
}

int cmd_spinc(const std::string& path, const std::string& base_csv, const std::string& path_file,
              const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  const auto rep = require_valid(diag, path);
  const hfw::PeriodicBasis pb = hfw::periodic_domains(diag, rep);
  const hfw::Generator base = parse_generator(diag, base_csv);
  const hfw::GradingPath gpath = hfw::parse_grading_path(diag, read_file(path_file));
  const auto classes = hfw::partition_by_spinc(diag, rep, pb, gpath, base);
  json basis = json::array();
  for (const auto& dom : pb.domains) {
    json row = json::array();
    for (const auto& c : dom) row.push_back(static_cast<long long>(c));
    basis.push_back(row);
  }
  json jc = json::object();
  std::cout << "rank " << pb.rank() << ", " << classes.size() << " classes\n";
  for (const auto& [label, members] : classes) {
    json arr = json::array();
    for (const auto& g : members) arr.push_back(hfw::generator_label(diag, g));
    jc[tuple_label(label)] = arr;
    std::cout << "  " << tuple_label(label) << " : " << members.size() << " generators\n";
    for (const auto& g : members) std::cout << "    " << hfw::generator_label(diag, g) << "\n";
  }
  emit_json(json_out, json{{"rank", pb.rank()}, {"basis", basis}, {"classes", jc}});
  return 0;
}

int cmd_complex(const std::string& path, const std::string& spinc_csv,
                const std::string& basepoints_csv, const std::optional<std::string>& rules_path,
                const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  require_valid(diag, path);
  const hfw::WhitneyContext ctx =
      hfw::whitney_context(diag, hfw::area_assignment(hfw::periodic_domains(diag)));
  const auto tc = hfw::build_complex(ctx, parse_regions(diag, basepoints_csv),
                                     default_base(diag), parse_spinc(spinc_csv),
                                     load_rules(rules_path));
  print_complex(tc);
  emit_json(json_out, complex_json(tc));
  return 0;
}

int cmd_reduce(const std::string& path, const std::string& z1_csv, const std::string& z2_csv,
               const std::string& spinc_csv, const std::optional<std::string>& rules_path,
               const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  require_valid(diag, path);
  const hfw::WhitneyContext ctx =
      hfw::whitney_context(diag, hfw::area_assignment(hfw::periodic_domains(diag)));
  const auto tc =
      hfw::reduce_basepoints(ctx, parse_regions(diag, z1_csv), parse_regions(diag, z2_csv),
                             default_base(diag), parse_spinc(spinc_csv), load_rules(rules_path));
  print_complex(tc);
  emit_json(json_out, complex_json(tc));
  return 0;
}

int cmd_homology(const std::string& path, const std::string& spinc_csv,
                 const std::optional<std::string>& rules_path,
                 const std::optional<std::string>& json_out) {
  const hfw::Diagram diag = load_diagram(path);
  require_valid(diag, path);
  const hfw::WhitneyContext ctx =
      hfw::whitney_context(diag, hfw::area_assignment(hfw::periodic_domains(diag)));
  const auto md = hfw::homology(ctx, {}, default_base(diag), parse_spinc(spinc_csv),
                                load_rules(rules_path));
  json torsion = json::array();
  for (const auto& t : md.torsion) torsion.push_back(t.str());
  json j{{"free_rank", md.free_rank}, {"torsion", torsion}, {"nonvanishing", md.nonvanishing}};
  if (md.f2_dimension) j["f2_dimension"] = *md.f2_dimension;
  emit_json(json_out, j);
  std::cout << "free rank " << md.free_rank << "\n";
  for (const auto& t : md.torsion) std::cout << "torsion factor " << t.str() << "\n";
  if (md.f2_dimension) std::cout << "F2 dimension " << *md.f2_dimension << "\n";
  std::cout << (md.nonvanishing ? "nonvanishing" : "vanishing or undetermined") << "\n";
  return 0;
}

int cmd_replicate(const std::string& which, int n, const std::optional<std::string>& data_path,
                  const std::optional<std::string>& json_out) {
  hfw::replicate::VerificationReport rep;
  if (which == "star") {
    rep = hfw::replicate::verify_star_formula();
  } else if (which == "s5") {
    rep = hfw::replicate::verify_count_relations();
  } else if (which == "s6") {
    rep = hfw::replicate::verify_survival_certificate();
  } else if (which == "lemma41") {
    if (n < 1) throw InputError("lemma41 needs --n <n> with n >= 1");
    rep = hfw::replicate::verify_recursion_family(n);
  } else if (which == "lemma61") {
    const std::string p = data_path.value_or(std::string(HFW_SOURCE_DIR) +
                                             "/data/parity_transfer_domains.json");
    rep = hfw::replicate::verify_parity_transfer(p);
  } else {
    throw InputError("unknown replicate target '" + which +
                     "' (expected s5, s6, star, lemma41, lemma61)");
  }
  emit_json(json_out, json{{"passed", rep.passed}, {"transcript", rep.transcript}});
  std::cout << (rep.passed ? "PASS" : "FAIL") << "\n";
  if (!json_out) std::cout << rep.transcript.dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hfw — combinatorial Heegaard diagram workbench"};
  app.require_subcommand(1);

  std::string file, base_csv, path_file, spinc_csv, basepoints_csv, z1_csv, z2_csv, which;
  std::optional<std::string> rules_path, json_out, data_path;
  bool count_only = false;
  int n = 0;

  auto add_json = [&](CLI::App* sub) {
    sub->add_option("--json", json_out, "write structured JSON to a file ('-' for stdout)");
  };

  auto* validate = app.add_subcommand("validate", "check a .hd file for structural consistency");
  validate->add_option("file", file)->required();
  add_json(validate);

  auto* gens = app.add_subcommand("gens", "enumerate generators");
  gens->add_option("file", file)->required();
  gens->add_flag("--count-only", count_only, "print only the count");
  add_json(gens);

  auto* periodic = app.add_subcommand("periodic", "base-point-free periodic domain basis");
  periodic->add_option("file", file)->required();
  add_json(periodic);

  auto* admissible = app.add_subcommand("admissible", "weak admissibility and an area witness");
  admissible->add_option("file", file)->required();
  add_json(admissible);

  auto* spinc = app.add_subcommand("spinc", "partition generators into structure classes");
  spinc->add_option("file", file)->required();
  spinc->add_option("--base", base_csv, "base generator as comma-separated point ids")->required();
  spinc->add_option("--path", path_file, "grading path file (arc tokens)")->required();
  add_json(spinc);

  auto* complexc = app.add_subcommand("complex", "assemble the twisted chain complex of a class");
  complexc->add_option("file", file)->required();
  complexc->add_option("--spinc", spinc_csv, "class label, comma-separated integers");
  complexc->add_option("--basepoints", basepoints_csv, "marked regions (ids), must contain the diagram's own");
  complexc->add_option("--rules", rules_path, "extra disk-count rules file");
  add_json(complexc);

  auto* reduce = app.add_subcommand("reduce", "cancel unit pairs of an enlarged marked set");
  reduce->add_option("file", file)->required();
  reduce->add_option("--z1", z1_csv, "enlarged marked region set")->required();
  reduce->add_option("--z2", z2_csv, "smaller marked region set (subset of --z1)")->required();
  reduce->add_option("--spinc", spinc_csv, "class label, comma-separated integers");
  reduce->add_option("--rules", rules_path, "extra disk-count rules file");
  add_json(reduce);

  auto* homology = app.add_subcommand("homology", "homology of the twisted complex of a class");
  homology->add_option("file", file)->required();
  homology->add_option("--spinc", spinc_csv, "class label, comma-separated integers");
  homology->add_option("--rules", rules_path, "extra disk-count rules file");
  add_json(homology);

  auto* replicate = app.add_subcommand("replicate", "run a built-in verification");
  replicate->add_option("which", which, "s5 | s6 | star | lemma41 | lemma61")->required();
  replicate->add_option("--n", n, "family parameter for lemma41");
  replicate->add_option("--data", data_path, "domain data file for lemma61");
  add_json(replicate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file, json_out);
    if (*gens) return cmd_gens(file, count_only, json_out);
    if (*periodic) return cmd_periodic(file, json_out);
    if (*admissible) return cmd_admissible(file, json_out);
    if (*spinc) return cmd_spinc(file, base_csv, path_file, json_out);
    if (*complexc) return cmd_complex(file, spinc_csv, basepoints_csv, rules_path, json_out);
    if (*reduce) return cmd_reduce(file, z1_csv, z2_csv, spinc_csv, rules_path, json_out);
    if (*homology) return cmd_homology(file, spinc_csv, rules_path, json_out);
    if (*replicate) return cmd_replicate(which, n, data_path, json_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::UndeclaredReference& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::DuplicateId& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::PathInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::ParameterOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hfw::GoldenDataMissing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const hfw::Error& e) {
    // Remaining library errors describe semantic failures of the requested
    // check (inadmissible, unknown counts, failed decomposition, ...).
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
