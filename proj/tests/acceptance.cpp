#include <fcntl.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcrecon/cli.hpp"
#include "tcrecon/document.hpp"
#include "tcrecon/errors.hpp"
#include "tcrecon/oracle.hpp"
#include "tcrecon/reconciliation.hpp"
#include "tcrecon/time_consistency.hpp"
#include "tcrecon/time_map.hpp"

using namespace tcr;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name + ".json";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance fixture(const std::string& name) {
  return instance_from_document(parse_scenario(read_text(fixture_path(name))));
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Tiny instances: at most a handful of species and events, so that most
// have at most 9 merged classes.
ScenarioParams tiny(std::uint64_t seed) {
  ScenarioParams p;
  p.seed = seed;
  p.n_species = 2 + static_cast<int>(seed % 3);
  p.n_genes = 5;
  p.p_dup = 0.2;
  p.p_hgt = 0.35;
  p.free_transfers = seed % 2 == 0;
  return p;
}

// Three species and frequent transfers at arbitrary times: small enough
// for the permutation oracle, yet some transfers go back in time.
ScenarioParams backward(std::uint64_t seed) {
  ScenarioParams p;
  p.seed = seed;
  p.n_species = 3;
  p.n_genes = 6;
  p.p_dup = 0;
  p.p_hgt = 0.6;
  p.free_transfers = true;
  return p;
}

// Medium instances with transfers at arbitrary times; a few percent are not
// time-consistent.
ScenarioParams medium(std::uint64_t seed) {
  ScenarioParams p;
  p.seed = seed;
  p.n_species = 6;
  p.n_genes = 20;
  p.p_dup = 0.05;
  p.p_hgt = 0.5;
  p.free_transfers = true;
  return p;
}

Outcome criterion1() {
  auto t0 = Clock::now();
  int instances = 0, pairs = 0, consistent = 0, mismatches = 0;
  for (std::uint64_t seed = 1; instances < 2000 && seed < 100000; ++seed) {
    auto inst = random_scenario(seed % 2 == 0 ? tiny(seed) : backward(seed));
    if (merged_class_count(inst) > 9) continue;
    auto all = enumerate_reconciliations(inst);
    if (all.empty()) continue;
    ++instances;
    for (const auto& mu : all) {
      bool oracle = oracle_time_consistent(inst, mu, OracleMode::permutation);
      bool fast = is_time_consistent(inst, mu).consistent;
      ++pairs;
      consistent += oracle;
      mismatches += oracle != fast;
    }
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = instances >= 200 && mismatches == 0 && consistent < pairs && secs < 60;
  o.detail = std::to_string(instances) + " instances, " + std::to_string(pairs) + " (instance, map) pairs, " +
             std::to_string(pairs - consistent) + " inconsistent, " + std::to_string(mismatches) +
             " mismatches, " + std::to_string(secs) + " s";
  return o;
}

Outcome criterion2() {
  std::mt19937_64 rng(2);
  int instances = 0, negatives = 0, mismatches = 0, skipped = 0;
  auto run = [&](const Instance& inst) {
    std::vector<ReconciliationMap> all;
    bool oracle;
    try {
      all = enumerate_reconciliations(inst, 1e5);
      if (all.empty()) return;
      oracle = oracle_exists_tc(inst, OracleMode::automatic, 1e5);
    } catch (const SizeCapError&) {
      ++skipped;
      return;
    }
    ++instances;
    negatives += !oracle;
    // Two different valid maps must give the same verdict.
    bool a = exists_time_consistent(inst, build_initial_map(inst)).consistent;
    bool b = exists_time_consistent(inst, all[rng() % all.size()]).consistent;
    mismatches += (a != oracle) + (b != oracle);
  };
  for (std::uint64_t seed = 1; seed <= 150; ++seed) run(random_scenario(tiny(seed)));
  for (std::uint64_t seed = 1; seed <= 500; ++seed) run(random_scenario(backward(seed)));
  for (std::uint64_t seed = 1; seed <= 250; ++seed) run(random_scenario(medium(seed)));
  Outcome o;
  o.pass = instances >= 200 && mismatches == 0 && negatives > 0;
  o.detail = std::to_string(instances) + " instances (" + std::to_string(negatives) + " without a time-consistent map, " +
             std::to_string(skipped) + " over the enumeration cap skipped), " + std::to_string(mismatches) +
             " mismatches";
  return o;
}

Outcome criterion3() {
  int mismatches = 0, max_leaves = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.n_species = 1 + static_cast<int>(seed % 32);
    p.n_genes = 64;
    p.p_dup = 0.15;
    p.p_hgt = 0.2;
    p.free_transfers = seed % 3 == 0;
    auto inst = random_scenario(p);
    max_leaves = std::max(max_leaves, static_cast<int>(inst.gene_tree().leaves().size()));
    mismatches += !(compute_lca_sigma(inst) == naive_lca_sigma(inst));
  }
  return {mismatches == 0, "1000 instances, up to " + std::to_string(max_leaves) + " gene leaves and 32 species, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome criterion4() {
  int successes = 0, failures = 0, confirmed = 0, unchecked = 0, bad = 0;
  auto run = [&](const Instance& inst) {
    auto res = construct_time_consistent(inst);
    if (res.status == ConstructStatus::success) {
      ++successes;
      const auto& tau = *res.times;
      bool clean = validate_reconciliation(inst, res.map).empty() &&
                   check_time_map(inst.gene_tree(), tau.gene).empty() &&
                   check_time_map(inst.species_tree(), tau.species, TreeSide::species).empty() &&
                   check_c(inst, res.map, tau).empty() && check_d(inst, res.map, tau).empty() &&
                   check_t(inst, res.map, tau.gene).empty();
      bad += !clean;
      return;
    }
    ++failures;
    try {
      bool ok = res.status == ConstructStatus::no_reconciliation
                    ? enumerate_reconciliations(inst).empty()
                    : !oracle_exists_tc(inst);
      ok ? ++confirmed : ++bad;
    } catch (const SizeCapError&) {
      ++unchecked;
    }
  };
  for (std::uint64_t seed = 1; seed <= 250; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.n_species = 2 + static_cast<int>(seed % 20);
    p.n_genes = 40;
    p.p_dup = 0.2;
    p.p_hgt = 0.3;
    run(random_scenario(p));
  }
  for (std::uint64_t seed = 1; seed <= 250; ++seed) run(random_scenario(medium(seed)));
  for (const char* f : {"F1", "F2", "F3", "F4"}) run(fixture(f));
  return {bad == 0 && confirmed > 0,
          std::to_string(successes) + " successes all clean, " + std::to_string(failures) + " failures (" +
              std::to_string(confirmed) + " confirmed by the oracle, " + std::to_string(unchecked) +
              " beyond its caps), " + std::to_string(bad) + " problems"};
}

Outcome criterion5() {
  auto inst = fixture("F4");
  bool valid = validate_reconciliation(inst, build_initial_map(inst)).empty();
  auto r = cli({"tc-construct", "--input", fixture_path("F4"), "--json"});
  std::vector<std::string> names;
  try {
    auto j = nlohmann::json::parse(r.out);
    for (const auto& n : j.at("witness").at("nodes")) names.push_back(n.at("name").get<std::string>());
  } catch (const std::exception&) {
  }
  std::string cycle;
  for (const auto& n : names) cycle += (cycle.empty() ? "" : " ") + n;
  std::vector<std::string> expect{"p1", "u_a", "p2", "u_d", "p1"};
  return {valid && r.code == 1 && names == expect,
          std::string("valid map ") + (valid ? "found" : "missing") + ", exit " + std::to_string(r.code) +
              ", cycle " + cycle};
}

Outcome criterion6() {
  auto maps = enumerate_reconciliations(fixture("F3"));
  auto r = cli({"check", "--input", fixture_path("F3")});
  return {maps.empty() && r.code == 1,
          std::to_string(maps.size()) + " valid maps, check exits " + std::to_string(r.code)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  int instances = 0, failures = 0;
  for (std::uint64_t seed = 1; instances < 500 && seed < 100000; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.n_species = 2 + static_cast<int>(seed % 10);
    p.n_genes = 16;
    p.p_dup = 0.2;
    p.p_hgt = 0.3;
    p.free_transfers = seed % 2 == 0;
    auto inst = random_scenario(p);
    require_binary(inst);
    ReconciliationMap mu = build_initial_map(inst);
    if (!validate_reconciliation(inst, mu).empty()) continue;
    try {
      auto all = enumerate_reconciliations(inst, 1e4);
      mu = all[rng() % all.size()];
    } catch (const SizeCapError&) {
    }
    ++instances;
    auto gamma = to_dtl(inst, mu);
    bool ok = validate_dtl(inst, gamma).empty() && validate_reconciliation(inst, from_dtl(inst, gamma)).empty();
    failures += !ok;
  }
  return {instances >= 500 && failures == 0,
          std::to_string(instances) + " binary instances, " + std::to_string(failures) + " failures"};
}

// Two copies of the gene tree below a new duplication root.
ScenarioDocument doubled(const ScenarioDocument& doc) {
  ScenarioDocument out;
  out.species = doc.species;
  const auto n = static_cast<VertexId>(doc.genes.size());
  out.genes.push_back({0, kNoVertex, "", Event::duplication, false});
  for (int copy = 0; copy < 2; ++copy) {
    const VertexId shift = 1 + copy * n;
    for (auto g : doc.genes) {
      g.id += shift;
      g.parent = g.parent == kNoVertex ? 0 : g.parent + shift;
      if (g.event == Event::leaf && copy == 1) g.name += "_2";
      out.genes.push_back(g);
    }
  }
  for (const auto& [gene, species] : doc.sigma) {
    out.sigma.emplace(gene, species);
    out.sigma.emplace(gene + "_2", species);
  }
  return out;
}

std::string g_cli_path;

// Runs the command-line tool in a child process and returns its exit code.
int spawn_cli(const std::vector<std::string>& args) {
  std::vector<std::string> all{g_cli_path};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : all) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  pid_t pid;
  int rc = posix_spawn(&pid, g_cli_path.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return -1;
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double best_construct_time(const std::string& input, const std::string& output, int& code) {
  double best = 1e9;
  for (int k = 0; k < 3; ++k) {
    auto t0 = Clock::now();
    code = spawn_cli({"tc-construct", "--input", input, "--output", output});
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

double children_peak_mb() {
  rusage usage{};
  getrusage(RUSAGE_CHILDREN, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

Outcome criterion8() {
  if (g_cli_path.empty()) return {false, "path of the command-line tool not given"};
  ScenarioParams p;
  p.seed = 1;
  p.n_species = 8000;
  p.n_genes = 1000000;
  p.p_dup = 0.15;
  p.p_hgt = 0.05;
  p.p_loss = 0;
  auto dir = std::filesystem::temp_directory_path();
  auto base = (dir / "tcrecon_acceptance_base.json").string();
  auto twice = (dir / "tcrecon_acceptance_doubled.json").string();
  auto out = (dir / "tcrecon_acceptance_out.json").string();
  VertexId nv = 0, ns = 0;
  std::size_t nv2 = 0;
  {
    auto inst = random_scenario(p);
    nv = inst.gene_size();
    ns = inst.species_size();
    auto doc = document_from_instance(inst);
    std::ofstream(base, std::ios::binary) << serialize_scenario(doc);
    auto doc2 = doubled(doc);
    nv2 = doc2.genes.size();
    std::ofstream(twice, std::ios::binary) << serialize_scenario(doc2);
  }

  int code1 = -1, code2 = -1;
  double t1 = best_construct_time(base, out, code1);
  double mem1 = children_peak_mb();
  double t2 = best_construct_time(twice, out, code2);
  double mem2 = children_peak_mb();
  double ratio = t2 / t1;
  for (const auto& f : {base, twice, out}) std::filesystem::remove(f);

  bool size_ok = nv >= 180000 && nv <= 220000 && ns >= 15000 && ns <= 17000;
  bool pass = size_ok && code1 == 0 && code2 == 0 && t1 < 5.0 && ratio >= 1.6 && ratio <= 2.8 && mem1 < 1024;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "|V(T)|=%d |V(S)|=%d: %.3f s, peak RSS %.0f MB; doubled |V(T)|=%zu: %.3f s, peak RSS %.0f MB; "
                "ratio %.2f",
                nv, ns, t1, mem1, nv2, t2, mem2, ratio);
  return {pass, buf};
}

Outcome criterion9() {
  int differing = 0;
  for (const char* f : {"F1", "F2", "F3", "F4"}) {
    auto first = cli({"tc-construct", "--input", fixture_path(f)});
    for (int k = 1; k < 10; ++k) {
      auto again = cli({"tc-construct", "--input", fixture_path(f)});
      differing += again.out != first.out || again.err != first.err || again.code != first.code;
    }
  }
  return {differing == 0, "4 fixtures x 10 runs, " + std::to_string(differing) + " differing outputs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
