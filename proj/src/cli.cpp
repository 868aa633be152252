#include "tcrecon/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcrecon/aux_graph.hpp"
#include "tcrecon/document.hpp"
#include "tcrecon/errors.hpp"
#include "tcrecon/newick.hpp"
#include "tcrecon/oracle.hpp"
#include "tcrecon/reconciliation.hpp"
#include "tcrecon/time_consistency.hpp"

namespace tcr {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string output;
  std::vector<std::string> newick;
  std::string sigma;
  std::string dot;
  bool force = false;
  bool json = false;
  ScenarioParams sim;
};

struct Outcome {
  std::string command;
  std::string status = "ok";
  int exit_code = kExitOk;
  std::string message;
  Report violations;
  std::optional<CycleWitness> witness;
  std::vector<std::pair<std::string, std::string>> verdicts;
  std::optional<ScenarioDocument> document;
};

// Names for report output; the planted root prints as "_root".
struct Naming {
  VertexId planted = kNoVertex;
  std::vector<std::string> species;
  std::vector<std::string> genes;

  Json species_id(VertexId x) const { return x == planted ? Json("_root") : Json(x); }
  std::string species_name(VertexId x) const {
    if (x == planted) return "_root";
    return x >= 0 && x < static_cast<VertexId>(species.size()) ? species[x] : "";
  }
  std::string gene_name(VertexId u) const {
    return u >= 0 && u < static_cast<VertexId>(genes.size()) ? genes[u] : "";
  }
};

Naming naming_of(const ScenarioDocument& doc) {
  Naming n;
  n.planted = doc.planted_root();
  for (const auto& r : doc.species) n.species.push_back(r.name);
  for (const auto& r : doc.genes) n.genes.push_back(r.name);
  return n;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

ScenarioDocument load(const Options& o) {
  bool have_json = !o.input.empty();
  bool have_newick = !o.newick.empty();
  if (have_json == have_newick)
    throw InputError("give exactly one of --input or --newick GENE SPECIES");
  if (have_json) return parse_scenario(read_file(o.input));
  if (o.sigma.empty()) throw InputError("--newick needs --sigma");
  return parse_newick_pair(read_file(o.newick[0]), read_file(o.newick[1]), read_file(o.sigma));
}

std::string witness_text(const CycleWitness& w, const Naming& n) {
  std::string s;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    const AuxNode& a = w.nodes[i];
    std::string name = a.kind == AuxNode::Kind::species ? n.species_name(a.vertex) : n.gene_name(a.vertex);
    if (name.empty())
      name = (a.kind == AuxNode::Kind::species ? "s" : "g") + std::to_string(a.vertex);
    s += name;
    if (i < w.rules.size()) s += " -[" + rules_to_string(w.rules[i]) + "]-> ";
  }
  return s;
}

Json witness_json(const CycleWitness& w, const Naming& n) {
  Json nodes = Json::array();
  for (const auto& a : w.nodes) {
    Json j = Json::object();
    bool sp = a.kind == AuxNode::Kind::species;
    j["kind"] = sp ? "species" : "gene";
    j["id"] = sp ? n.species_id(a.vertex) : Json(a.vertex);
    std::string name = sp ? n.species_name(a.vertex) : n.gene_name(a.vertex);
    if (!name.empty()) j["name"] = name;
    nodes.push_back(std::move(j));
  }
  Json rules = Json::array();
  for (auto r : w.rules) rules.push_back(rules_to_string(r));
  Json j = Json::object();
  j["nodes"] = std::move(nodes);
  j["rules"] = std::move(rules);
  return j;
}

std::string render(const Outcome& o, const Naming& n, bool json) {
  if (json) {
    Json j = Json::object();
    j["command"] = o.command;
    j["status"] = o.status;
    j["exit_code"] = o.exit_code;
    if (!o.message.empty()) j["message"] = o.message;
    if (!o.verdicts.empty()) {
      Json v = Json::object();
      for (const auto& [k, val] : o.verdicts) v[k] = val;
      j["verdicts"] = std::move(v);
    }
    Json vs = Json::array();
    for (const auto& v : o.violations) {
      Json e = Json::object();
      e["condition"] = v.condition;
      e["gene"] = v.gene;
      Json sp = Json::array();
      for (auto x : v.species) sp.push_back(n.species_id(x));
      e["species"] = std::move(sp);
      e["detail"] = v.detail;
      vs.push_back(std::move(e));
    }
    j["violations"] = std::move(vs);
    j["witness"] = o.witness ? witness_json(*o.witness, n) : Json(nullptr);
    return j.dump(2) + "\n";
  }
  std::ostringstream s;
  s << o.command << ": " << o.status << "\n";
  if (!o.message.empty()) s << o.message << "\n";
  for (const auto& [k, val] : o.verdicts) s << k << ": " << val << "\n";
  for (const auto& v : o.violations) {
    s << "violation " << v.condition;
    if (!v.gene.empty()) {
      s << " gene";
      for (auto g : v.gene) s << ' ' << g;
    }
    if (!v.species.empty()) {
      s << " species";
      for (auto x : v.species) s << ' ' << (x == n.planted ? std::string("_root") : std::to_string(x));
    }
    if (!v.detail.empty()) s << ": " << v.detail;
    s << "\n";
  }
  if (o.witness) s << "cycle: " << witness_text(*o.witness, n) << "\n";
  return s.str();
}

std::string dot_of(const AuxGraph& g, const Naming& n) {
  std::ostringstream s;
  s << "digraph aux {\n";
  for (int i = 0; i < g.size(); ++i) {
    const AuxNode& a = g.node(i);
    bool sp = a.kind == AuxNode::Kind::species;
    std::string name = sp ? n.species_name(a.vertex) : n.gene_name(a.vertex);
    if (name.empty()) name = (sp ? "s" : "g") + std::to_string(a.vertex);
    s << "  n" << i << " [label=\"" << name << "\"" << (sp ? "" : ", shape=box") << "];\n";
  }
  for (const auto& e : g.edges())
    s << "  n" << e.from << " -> n" << e.to << " [label=\"" << rules_to_string(e.rules) << "\"];\n";
  s << "}\n";
  return s.str();
}

// Returns false (and fills the outcome) if the instance is not observable
// and --force was not given.
bool observable(const Instance& inst, const Options& opt, Outcome& out) {
  Report obs = check_observability(inst);
  if (obs.empty() || opt.force) return true;
  out.status = "not_observable";
  out.exit_code = kExitNegative;
  out.message = "instance violates observability conditions (use --force to continue)";
  out.violations = std::move(obs);
  return false;
}

void no_reconciliation(Outcome& out, Report why) {
  out.status = "no_reconciliation";
  out.exit_code = kExitNegative;
  out.message = "no valid reconciliation map";
  out.violations = std::move(why);
}

// Initial map, or nullopt if it is invalid (then none exists at all).
std::optional<ReconciliationMap> initial_map(const Instance& inst, Report& why) {
  ReconciliationMap mu = build_initial_map(inst);
  why = validate_reconciliation(inst, mu);
  if (!why.empty()) return std::nullopt;
  return mu;
}

double candidate_count(const Instance& inst) {
  LcaSigmaMap ell = compute_lca_sigma(inst);
  double total = 1;
  for (VertexId u = 0; u < inst.gene_size(); ++u)
    if (!on_vertex(inst.event(u))) total *= inst.species_index().depth(ell[u]);
  return total;
}

void cmd_check(const ScenarioDocument& doc, const Instance& inst, Outcome& out) {
  Report r = check_observability(inst);
  if (doc.reconciliation) r.append(validate_reconciliation(inst, *doc.reconciliation));
  bool exists = true;
  try {
    Report why;
    exists = initial_map(inst, why).has_value();
    if (!exists) {
      // Small instances are confirmed by exhaustive enumeration.
      if (candidate_count(inst) <= 1e5 && !enumerate_reconciliations(inst, 1e5).empty())
        throw InvariantError("initial map invalid although a valid map exists");
      r.add("no_reconciliation", {}, {}, "no valid reconciliation map");
      r.append(why);
    }
  } catch (const PreconditionError& e) {
    exists = false;
    r.add("no_reconciliation", {}, {}, e.what());
  }
  out.violations = std::move(r);
  if (!out.violations.empty()) {
    out.status = exists ? "violations" : "no_reconciliation";
    out.exit_code = kExitNegative;
    if (!exists) out.message = "no valid reconciliation map";
  }
}

void cmd_reconcile(ScenarioDocument doc, const Instance& inst, Outcome& out) {
  Report why;
  auto mu = initial_map(inst, why);
  if (!mu) return no_reconciliation(out, std::move(why));
  doc.reconciliation = std::move(*mu);
  doc.times.reset();
  out.document = std::move(doc);
}

std::string verdict(bool ok) { return ok ? "consistent" : "inconsistent"; }

void cmd_tc_check(const ScenarioDocument& doc, const Instance& inst, const Options& opt,
                  const Naming& names, Outcome& out) {
  std::optional<ReconciliationMap> any;
  bool ok = true;
  if (doc.reconciliation) {
    Report r = validate_reconciliation(inst, *doc.reconciliation);
    if (!r.empty()) throw InputError("supplied reconciliation map is invalid:\n" + to_string(r));
    TcVerdict a1 = is_time_consistent(inst, *doc.reconciliation);
    out.verdicts.emplace_back("supplied_map", verdict(a1.consistent));
    if (!a1.consistent) {
      ok = false;
      out.witness = a1.witness;
    }
    any = doc.reconciliation;
  } else {
    out.verdicts.emplace_back("supplied_map", "absent");
    Report why;
    any = initial_map(inst, why);
    if (!any) return no_reconciliation(out, std::move(why));
  }
  TcVerdict a2 = exists_time_consistent(inst, *any);
  out.verdicts.emplace_back("exists", verdict(a2.consistent));
  if (!a2.consistent) {
    ok = false;
    if (!out.witness) out.witness = a2.witness;
  }
  if (!opt.dot.empty()) write_file(opt.dot, dot_of(build_aux_graph(inst, *any, AuxVariant::a2), names));
  if (!ok) {
    out.status = "not_time_consistent";
    out.exit_code = kExitNegative;
  }
}

void cmd_tc_construct(ScenarioDocument doc, const Instance& inst, const Options& opt,
                      const Naming& names, Outcome& out) {
  ConstructResult res = construct_time_consistent(inst);
  if (!opt.dot.empty() && res.status != ConstructStatus::no_reconciliation)
    write_file(opt.dot, dot_of(build_aux_graph(inst, build_initial_map(inst), AuxVariant::a2), names));
  switch (res.status) {
    case ConstructStatus::no_reconciliation:
      return no_reconciliation(out, std::move(res.violations));
    case ConstructStatus::not_time_consistent:
      out.status = "not_time_consistent";
      out.exit_code = kExitNegative;
      out.message = "no time-consistent reconciliation map exists";
      out.witness = std::move(res.witness);
      return;
    case ConstructStatus::success:
      doc.reconciliation = std::move(res.map);
      doc.times = std::move(res.times);
      out.document = std::move(doc);
      return;
  }
}

void cmd_to_dtl(ScenarioDocument doc, const Instance& inst, Outcome& out) {
  if (!doc.reconciliation) throw InputError("to-dtl needs a reconciliation in the document");
  require_binary(inst);
  Report r = validate_reconciliation(inst, *doc.reconciliation);
  if (!r.empty()) {
    out.status = "violations";
    out.exit_code = kExitNegative;
    out.violations = std::move(r);
    return;
  }
  doc.dtl = to_dtl(inst, *doc.reconciliation);
  out.document = std::move(doc);
}

void cmd_from_dtl(ScenarioDocument doc, const Instance& inst, Outcome& out) {
  if (!doc.dtl) throw InputError("from-dtl needs a dtl map in the document");
  Report r = validate_dtl(inst, *doc.dtl);
  if (!r.empty()) {
    out.status = "violations";
    out.exit_code = kExitNegative;
    out.violations = std::move(r);
    return;
  }
  doc.reconciliation = from_dtl(inst, *doc.dtl);
  doc.times.reset();
  out.document = std::move(doc);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-consistent reconciliation of event-labeled gene trees with species trees"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, bool reads) {
    if (reads) {
      sub->add_option("--input", opt.input, "scenario JSON file ('-' for stdin)");
      sub->add_option("--newick", opt.newick, "gene and species Newick files")->expected(2);
      sub->add_option("--sigma", opt.sigma, "gene-to-species TSV for --newick");
      sub->add_flag("--force", opt.force, "continue past observability violations");
    }
    sub->add_option("--output", opt.output, "write the resulting document here");
    sub->add_flag("--json", opt.json, "machine-readable report");
  };
  auto* check = app.add_subcommand("check", "observability, map validity and existence");
  auto* reconcile = app.add_subcommand("reconcile", "add the lowest reconciliation map");
  auto* tc_check = app.add_subcommand("tc-check", "time-consistency of the supplied map and existence");
  auto* tc_construct = app.add_subcommand("tc-construct", "build a time-consistent map with times");
  auto* to_dtl_cmd = app.add_subcommand("to-dtl", "convert the reconciliation to a DTL map");
  auto* from_dtl_cmd = app.add_subcommand("from-dtl", "convert the DTL map to a reconciliation");
  auto* simulate = app.add_subcommand("simulate", "random observable scenario");
  for (auto* s : {check, reconcile, tc_check, tc_construct, to_dtl_cmd, from_dtl_cmd}) common(s, true);
  for (auto* s : {tc_check, tc_construct}) s->add_option("--dot", opt.dot, "write the auxiliary graph as DOT");
  common(simulate, false);
  simulate->add_option("--seed", opt.sim.seed, "random seed");
  simulate->add_option("--genes", opt.sim.n_genes, "maximum number of gene leaves");
  simulate->add_option("--species", opt.sim.n_species, "number of species");
  simulate->add_option("--p-dup", opt.sim.p_dup, "duplication probability");
  simulate->add_option("--p-hgt", opt.sim.p_hgt, "transfer probability");
  simulate->add_option("--p-loss", opt.sim.p_loss, "loss probability");
  simulate->add_flag("--free-transfers", opt.sim.free_transfers,
                     "allow transfers to any incomparable edge at any time");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  Outcome result;
  result.command = app.get_subcommands().front()->get_name();
  Naming names;
  auto fail = [&](const std::string& status, int code, const std::string& msg) {
    result.status = status;
    result.exit_code = code;
    result.message = msg;
    result.document.reset();
    err << "error: " << msg << "\n";
    if (opt.json) out << render(result, names, true);
    return code;
  };

  try {
    if (result.command == "simulate") {
      result.document = document_from_instance(random_scenario(opt.sim));
    } else {
      ScenarioDocument doc = load(opt);
      names = naming_of(doc);
      Instance inst = instance_from_document(doc);
      if (result.command == "check") {
        cmd_check(doc, inst, result);
      } else if (observable(inst, opt, result)) {
        if (result.command == "reconcile") cmd_reconcile(std::move(doc), inst, result);
        else if (result.command == "tc-check") cmd_tc_check(doc, inst, opt, names, result);
        else if (result.command == "tc-construct") cmd_tc_construct(std::move(doc), inst, opt, names, result);
        else if (result.command == "to-dtl") cmd_to_dtl(std::move(doc), inst, result);
        else if (result.command == "from-dtl") cmd_from_dtl(std::move(doc), inst, result);
      }
    }
  } catch (const ParseError& e) {
    std::string where = e.line() > 0 ? "line " + std::to_string(e.line()) + ", column " +
                                           std::to_string(e.column()) + ": "
                                     : "";
    return fail("parse_error", kExitParse, where + e.what());
  } catch (const InvariantError& e) {
    return fail("internal_error", kExitInternal, e.what());
  } catch (const UnsupportedShape& e) {
    return fail("unsupported_shape", kExitInput, e.what());
  } catch (const Error& e) {
    return fail("input_error", kExitInput, e.what());
  }

  std::string report = render(result, names, opt.json);
  if (!result.document) {
    out << report;
    return result.exit_code;
  }
  std::string text = serialize_scenario(*result.document);
  if (opt.output.empty()) {
    out << text;
    err << report;
    return result.exit_code;
  }
  try {
    write_file(opt.output, text);
  } catch (const Error& e) {
    return fail("input_error", kExitInput, e.what());
  }
  out << report;
  return result.exit_code;
}

}  // namespace tcr
