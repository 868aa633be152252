#include "tcrecon/document.hpp"

#include <charconv>

#include <json.hpp>

#include "tcrecon/errors.hpp"

namespace tcr {

// Input is read into map-backed objects; output objects are filled by
// appending in key order.
using Json = nlohmann::json;
using OutJson = nlohmann::ordered_json;

namespace {

void append(OutJson& obj, std::string key, OutJson value) {
  obj.get_ref<OutJson::object_t&>().emplace_back(std::move(key), std::move(value));
}

[[noreturn]] void shape(const std::string& path, const std::string& what) {
  throw ParseError(0, 0, path + ": " + what);
}

const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) shape(path, "missing key '" + key + "'");
  return *it;
}

void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= it.key() == k;
    if (!known) shape(path, "unknown key '" + it.key() + "'");
  }
}

const Json& object_at(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = member(obj, key, path);
  if (!v.is_object()) shape(path + "." + key, "expected an object");
  return v;
}

long long integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) shape(path, "expected an integer");
  return v.get<long long>();
}

// Decimal id key such as "12"; rejects signs, leading zeros and junk.
VertexId id_key(const std::string& key, VertexId limit, const std::string& path) {
  VertexId v = -1;
  auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  bool ok = ec == std::errc() && end == key.data() + key.size() && !key.empty() &&
            (key == "0" || key[0] != '0');
  if (!ok) shape(path, "key '" + key + "' is not a vertex id");
  if (v < 0 || v >= limit) throw InputError(path + ": unknown vertex id " + key);
  return v;
}

// Species reference inside reconciliation, dtl or times: id or "_root".
VertexId species_ref(const Json& v, VertexId planted, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "_root") return planted;
    shape(path, "expected a species id or \"_root\"");
  }
  long long id = integer(v, path);
  if (id < 0 || id >= planted) throw InputError(path + ": unknown species id " + std::to_string(id));
  return static_cast<VertexId>(id);
}

OutJson species_json(VertexId id, VertexId planted) {
  if (id == planted) return "_root";
  return id;
}

std::string species_key(VertexId id, VertexId planted) {
  return id == planted ? "_root" : std::to_string(id);
}

VertexId parent_ref(const Json& v, VertexId n, const std::string& path) {
  if (v.is_null()) return kNoVertex;
  long long p = integer(v, path);
  if (p < 0 || p >= n) throw InputError(path + ": dangling parent id " + std::to_string(p));
  return static_cast<VertexId>(p);
}

void check_record_id(const Json& rec, std::size_t i, const std::string& path) {
  long long id = integer(member(rec, "id", path), path + ".id");
  if (id != static_cast<long long>(i))
    throw InputError(path + ": id " + std::to_string(id) + " out of order; ids must be 0..n-1 ascending");
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ScenarioDocument parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    // Keep only the library's message text.
    std::string msg = e.what();
    auto cut = msg.find(": ", msg.find("parse error"));
    throw ParseError(line, col, cut == std::string::npos ? msg : msg.substr(cut + 2));
  }
  if (!root.is_object()) shape("$", "expected an object");
  only_keys(root, {"species_tree", "gene_tree", "sigma", "reconciliation", "dtl", "times"}, "$");

  ScenarioDocument doc;
  const Json& sp = member(root, "species_tree", "$");
  if (!sp.is_array()) shape("$.species_tree", "expected an array");
  const auto ns = static_cast<VertexId>(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    std::string path = "$.species_tree[" + std::to_string(i) + "]";
    const Json& rec = sp[i];
    if (!rec.is_object()) shape(path, "expected an object");
    only_keys(rec, {"id", "parent", "name"}, path);
    check_record_id(rec, i, path);
    SpeciesRecord r;
    r.id = static_cast<VertexId>(i);
    r.parent = parent_ref(member(rec, "parent", path), ns, path + ".parent");
    if (rec.contains("name")) {
      if (!rec["name"].is_string()) shape(path + ".name", "expected a string");
      r.name = rec["name"].get<std::string>();
    }
    doc.species.push_back(std::move(r));
  }

  const Json& gt = member(root, "gene_tree", "$");
  if (!gt.is_array()) shape("$.gene_tree", "expected an array");
  const auto ng = static_cast<VertexId>(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    std::string path = "$.gene_tree[" + std::to_string(i) + "]";
    const Json& rec = gt[i];
    if (!rec.is_object()) shape(path, "expected an object");
    only_keys(rec, {"id", "parent", "name", "event", "transfer_edge"}, path);
    check_record_id(rec, i, path);
    GeneRecord r;
    r.id = static_cast<VertexId>(i);
    r.parent = parent_ref(member(rec, "parent", path), ng, path + ".parent");
    if (rec.contains("name")) {
      if (!rec["name"].is_string()) shape(path + ".name", "expected a string");
      r.name = rec["name"].get<std::string>();
    }
    const Json& ev = member(rec, "event", path);
    if (!ev.is_string()) shape(path + ".event", "expected a string");
    auto e = parse_event(ev.get<std::string>());
    if (!e) shape(path + ".event", "unknown event '" + ev.get<std::string>() + "'");
    r.event = *e;
    const Json& tr = member(rec, "transfer_edge", path);
    if (!tr.is_boolean()) shape(path + ".transfer_edge", "expected a boolean");
    r.transfer_edge = tr.get<bool>();
    doc.genes.push_back(std::move(r));
  }

  const Json& sg = object_at(root, "sigma", "$");
  for (auto it = sg.begin(); it != sg.end(); ++it) {
    if (!it->is_string()) shape("$.sigma." + it.key(), "expected a string");
    doc.sigma.emplace(it.key(), it->get<std::string>());
  }

  const VertexId planted = ns;
  if (root.contains("reconciliation")) {
    const Json& rj = object_at(root, "reconciliation", "$");
    ReconciliationMap mu;
    mu.image.resize(ng);
    std::vector<bool> seen(ng, false);
    for (auto it = rj.begin(); it != rj.end(); ++it) {
      std::string path = "$.reconciliation." + it.key();
      VertexId u = id_key(it.key(), ng, path);
      const Json& v = *it;
      if (!v.is_object() || v.size() != 1) shape(path, "expected {\"vertex\": id} or {\"edge\": [parent, child]}");
      if (v.contains("vertex")) {
        mu[u] = TreeElement::vertex(species_ref(v["vertex"], planted, path + ".vertex"));
      } else if (v.contains("edge")) {
        const Json& e = v["edge"];
        if (!e.is_array() || e.size() != 2) shape(path + ".edge", "expected [parent, child]");
        mu[u] = TreeElement::edge(species_ref(e[0], planted, path + ".edge[0]"),
                                  species_ref(e[1], planted, path + ".edge[1]"));
      } else {
        shape(path, "expected {\"vertex\": id} or {\"edge\": [parent, child]}");
      }
      seen[u] = true;
    }
    for (VertexId u = 0; u < ng; ++u)
      if (!seen[u]) throw InputError("reconciliation map has no image for gene vertex " + std::to_string(u));
    doc.reconciliation = std::move(mu);
  }

  if (root.contains("dtl")) {
    const Json& dj = object_at(root, "dtl", "$");
    DtlMap g;
    g.gamma.assign(ng, kNoVertex);
    for (auto it = dj.begin(); it != dj.end(); ++it) {
      std::string path = "$.dtl." + it.key();
      VertexId u = id_key(it.key(), ng, path);
      g[u] = species_ref(*it, planted, path);
    }
    for (VertexId u = 0; u < ng; ++u)
      if (g[u] == kNoVertex) throw InputError("dtl map has no image for gene vertex " + std::to_string(u));
    doc.dtl = std::move(g);
  }

  if (root.contains("times")) {
    const Json& tj = object_at(root, "times", "$");
    only_keys(tj, {"gene", "species"}, "$.times");
    TimeAssignment tau;
    auto read = [&](const char* side, VertexId n, bool with_root, std::vector<Time>& out) {
      const Json& m = object_at(tj, side, "$.times");
      std::vector<bool> seen(n, false);
      out.assign(n, Time(0));
      for (auto it = m.begin(); it != m.end(); ++it) {
        std::string path = std::string("$.times.") + side + "." + it.key();
        VertexId v = with_root && it.key() == "_root" ? n - 1 : id_key(it.key(), with_root ? n - 1 : n, path);
        if (!it->is_string()) shape(path, "expected a \"p/q\" string");
        out[v] = parse_time(it->get<std::string>());
        seen[v] = true;
      }
      for (VertexId v = 0; v < n; ++v)
        if (!seen[v]) throw InputError(std::string("times.") + side + " misses vertex " + std::to_string(v));
    };
    read("gene", ng, false, tau.gene);
    read("species", ns + 1, true, tau.species);
    doc.times = std::move(tau);
  }
  return doc;
}

std::string serialize_scenario(const ScenarioDocument& doc) {
  const VertexId planted = doc.planted_root();
  OutJson root = OutJson::object();
  OutJson sp = OutJson::array();
  for (const auto& r : doc.species) {
    OutJson j = OutJson::object();
    j["id"] = r.id;
    j["parent"] = r.parent == kNoVertex ? OutJson(nullptr) : OutJson(r.parent);
    if (!r.name.empty()) j["name"] = r.name;
    sp.push_back(std::move(j));
  }
  root["species_tree"] = std::move(sp);
  OutJson gt = OutJson::array();
  for (const auto& r : doc.genes) {
    OutJson j = OutJson::object();
    j["id"] = r.id;
    j["parent"] = r.parent == kNoVertex ? OutJson(nullptr) : OutJson(r.parent);
    if (!r.name.empty()) j["name"] = r.name;
    j["event"] = to_string(r.event);
    j["transfer_edge"] = r.transfer_edge;
    gt.push_back(std::move(j));
  }
  root["gene_tree"] = std::move(gt);
  OutJson sg = OutJson::object();
  for (const auto& [gene, species] : doc.sigma) append(sg, gene, species);
  root["sigma"] = std::move(sg);

  if (doc.reconciliation) {
    OutJson rj = OutJson::object();
    for (VertexId u = 0; u < doc.reconciliation->size(); ++u) {
      const TreeElement& m = (*doc.reconciliation)[u];
      OutJson e = OutJson::object();
      if (m.is_vertex())
        e["vertex"] = species_json(m.upper, planted);
      else
        e["edge"] = OutJson::array({species_json(m.upper, planted), species_json(m.lower, planted)});
      append(rj, std::to_string(u), std::move(e));
    }
    root["reconciliation"] = std::move(rj);
  }
  if (doc.dtl) {
    OutJson dj = OutJson::object();
    for (std::size_t u = 0; u < doc.dtl->gamma.size(); ++u)
      append(dj, std::to_string(u), species_json(doc.dtl->gamma[u], planted));
    root["dtl"] = std::move(dj);
  }
  if (doc.times) {
    OutJson tj = OutJson::object();
    OutJson g = OutJson::object(), s = OutJson::object();
    for (std::size_t u = 0; u < doc.times->gene.size(); ++u)
      append(g, std::to_string(u), format_time(doc.times->gene[u]));
    for (std::size_t x = 0; x < doc.times->species.size(); ++x)
      append(s, species_key(static_cast<VertexId>(x), planted), format_time(doc.times->species[x]));
    tj["gene"] = std::move(g);
    tj["species"] = std::move(s);
    root["times"] = std::move(tj);
  }
  return root.dump(2) + "\n";
}

Instance instance_from_document(const ScenarioDocument& doc) {
  std::vector<VertexId> sp_parent;
  std::vector<std::string> sp_name;
  for (const auto& r : doc.species) {
    sp_parent.push_back(r.parent);
    sp_name.push_back(r.name);
  }
  SpeciesTree species = augment_species_tree(RootedTree::from_parents(sp_parent, sp_name));

  std::vector<VertexId> g_parent;
  std::vector<std::string> g_name;
  std::vector<Event> events;
  std::vector<bool> transfer;
  for (const auto& r : doc.genes) {
    g_parent.push_back(r.parent);
    g_name.push_back(r.name);
    events.push_back(r.event);
    transfer.push_back(r.transfer_edge);
  }
  RootedTree gt = RootedTree::from_parents(std::move(g_parent), g_name);
  std::vector<std::string> leaf_species(gt.size());
  std::map<std::string, bool> used;
  for (VertexId v = 0; v < gt.size(); ++v) {
    if (!gt.is_leaf(v)) continue;
    if (g_name[v].empty()) throw InputError("gene leaf " + std::to_string(v) + " has no name");
    auto it = doc.sigma.find(g_name[v]);
    if (it == doc.sigma.end()) throw InputError("sigma has no species for gene leaf '" + g_name[v] + "'");
    leaf_species[v] = it->second;
    if (used.count(g_name[v])) throw InputError("gene leaf name '" + g_name[v] + "' is used twice");
    used[g_name[v]] = true;
  }
  for (const auto& [gene, s] : doc.sigma)
    if (!used.count(gene)) throw InputError("sigma names '" + gene + "', which is not a gene leaf");
  GeneTree gene(std::move(gt), std::move(events), std::move(transfer), std::move(leaf_species));
  return Instance(std::move(gene), std::move(species));
}

ScenarioDocument document_from_instance(const Instance& inst) {
  ScenarioDocument doc;
  const RootedTree& st = inst.species_tree();
  const VertexId planted = inst.species().planted_root();
  for (VertexId x = 0; x < planted; ++x)
    doc.species.push_back({x, st.parent(x) == planted ? kNoVertex : st.parent(x), st.label(x)});
  const RootedTree& gt = inst.gene_tree();
  for (VertexId v = 0; v < gt.size(); ++v) {
    doc.genes.push_back({v, gt.parent(v), gt.label(v), inst.event(v), inst.transfer_in(v)});
    if (gt.is_leaf(v)) doc.sigma.emplace(gt.label(v), inst.species().name(inst.sigma(v)));
  }
  return doc;
}

}  // namespace tcr
