// hss: streaming hypergraph cut sparsification toolkit.
//
// Exit codes: 0 success, 2 recovery failure, 3 deletion budget exceeded,
// 4 malformed input / unusable parameters, 5 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hss/generators.hpp"
#include "hss/hgs_io.hpp"
#include "hss/oracle.hpp"
#include "hss/space_bench.hpp"
#include "hss/stream_engine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRecoveryFailure = 2;
constexpr int kExitBudgetExceeded = 3;
constexpr int kExitMalformed = 4;
constexpr int kExitVerifyFailed = 5;

uint64_t default_seed() {
  if (const char* env = std::getenv("HSS_SEED")) {
    char* end = nullptr;
    uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 1;
}

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw hss::MalformedInput("--set expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return out;
}

struct ModeSpec {
  std::string name;  // static | simple | insertion | bounded | dynamic
  uint64_t k = 0;
  bool k_given = false;
};

ModeSpec parse_mode(const std::string& mode) {
  ModeSpec spec;
  auto colon = mode.find(':');
  spec.name = mode.substr(0, colon);
  if (colon != std::string::npos) {
    spec.k = std::stoull(mode.substr(colon + 1));
    spec.k_given = true;
  }
  if (spec.name != "static" && spec.name != "simple" && spec.name != "insertion" &&
      spec.name != "bounded" && spec.name != "dynamic")
    throw hss::MalformedInput("unknown mode '" + mode + "'");
  if (spec.k_given && spec.name != "bounded")
    throw hss::MalformedInput("only bounded mode takes :k");
  return spec;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw hss::MalformedInput("cannot open input " + path);
  return f;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw hss::MalformedInput("cannot open output " + path);
  return f;
}

int cmd_sparsify(const std::string& input, const std::string& output,
                 const std::string& report, const std::string& mode_str, double eps,
                 uint64_t seed, const std::string& profile,
                 const std::vector<std::string>& sets) {
  ModeSpec mode = parse_mode(mode_str);
  auto overrides = parse_overrides(sets);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file = open_input(input);
    in = &file;
  }

  hss::WeightedHypergraph result(2, 1);
  std::vector<std::pair<std::string, std::string>> manifest;

  if (mode.name == "static" || mode.name == "simple") {
    hss::StreamHeader hdr;
    hss::Hypergraph h = hss::materialize_hgs(*in, &hdr);
    hss::StrengthOracle oracle(hss::OracleConfig{12});
    result = mode.name == "static" ? hss::static_sparsify(h, eps, seed, oracle)
                                   : hss::simple_sparsify(h, eps, seed, oracle);
    manifest.emplace_back("mode", mode.name);
    manifest.emplace_back("n", std::to_string(hdr.n));
    manifest.emplace_back("r", std::to_string(hdr.r));
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", eps);
    manifest.emplace_back("epsilon", buf);
    manifest.emplace_back("seed", std::to_string(seed));
  } else {
    // one-pass engine: built as soon as the header arrives
    std::optional<hss::StreamEngine> engine;
    hss::stream_hgs(
        *in, [&](const hss::StreamUpdate& u) { engine->update(u); },
        [&](const hss::StreamHeader& hdr) {
          hss::EngineMode em = mode.name == "insertion" ? hss::EngineMode::kInsertion
                               : mode.name == "bounded" ? hss::EngineMode::kBounded
                                                        : hss::EngineMode::kDynamic;
          uint64_t k = mode.k_given ? mode.k : hdr.k;
          if (em == hss::EngineMode::kInsertion && hdr.k != 0)
            throw hss::MalformedInput("insertion mode on a stream declaring k=" +
                                      std::to_string(hdr.k));
          if (em == hss::EngineMode::kBounded && hdr.k > k)
            throw hss::MalformedInput("stream declares k=" + std::to_string(hdr.k) +
                                      " beyond mode budget " + std::to_string(k));
          engine.emplace(hss::EngineConfig::resolve(em, hdr.n, hdr.r, k, eps, seed,
                                                    profile, overrides));
        });
    if (!engine) throw hss::MalformedInput("missing header");
    result = engine->recover();
    manifest = engine->config().manifest();
  }

  auto out = open_output(output);
  hss::write_hgw(out, result);
  std::string report_path = report.empty() ? output + ".manifest" : report;
  auto rep = open_output(report_path);
  hss::write_manifest(rep, manifest);
  std::cerr << "wrote " << result.edge_count() << " weighted edges to " << output << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& original, const std::string& sparsifier, double eps,
               uint32_t bound) {
  auto of = open_input(original);
  hss::Hypergraph h = hss::materialize_hgs(of);
  auto sf = open_input(sparsifier);
  hss::WeightedHypergraph s = hss::read_hgw(sf);
  if (s.n() != h.n()) throw hss::MalformedInput("vertex count mismatch");

  hss::VerifyReport rep;
  try {
    rep = hss::verify_sparsifier(h, s, eps, bound);
  } catch (const hss::NotASubgraph& e) {
    std::cerr << "FAIL: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  std::cout << "cuts_checked " << rep.cuts_checked << "\n";
  std::cout << "worst_ratio " << rep.worst_ratio << "\n";
  if (!rep.pass) {
    std::cout << "witness";
    for (auto v : rep.witness) std::cout << " " << v;
    std::cout << "\n";
    std::cerr << "FAIL: cut outside [1-eps, 1+eps]\n";
    return kExitVerifyFailed;
  }
  std::cout << "pass\n";
  return kExitOk;
}

int cmd_oracle(const std::string& sub, const std::string& input) {
  auto f = open_input(input);
  hss::Hypergraph h = hss::materialize_hgs(f);
  hss::StrengthOracle oracle(hss::OracleConfig{12});
  if (sub == "kcut") {
    if (h.n() < 2) throw hss::NoCut("kcut needs n >= 2");
    auto cut = oracle.min_normalized_kcut(h);
    std::cout << "phi " << cut.value.to_string() << "\n";
    std::cout << "blocks " << cut.blocks << "\n";
    std::cout << "partition";
    for (hss::VertexId v = 0; v < h.n(); ++v) std::cout << " " << cut.partition.block_of(v);
    std::cout << "\n";
  } else if (sub == "strengths") {
    auto lambda = oracle.compute_strengths(h);
    for (const auto& [e, st] : lambda)
      std::cout << e.to_string() << " " << st.to_string() << "\n";
  } else if (sub == "sum-check") {
    auto lambda = oracle.compute_strengths(h);
    hss::MultiEdgeList edges;
    for (const auto& e : h.edges()) edges.emplace_back(e, 1);
    hss::Rational sum = hss::StrengthOracle::reciprocal_strength_sum(lambda, edges);
    hss::UnionFind uf(h.n());
    for (const auto& e : h.edges())
      for (size_t i = 1; i < e.vertices().size(); ++i)
        uf.unite(e.vertices()[0], e.vertices()[i]);
    hss::Rational expect(static_cast<int64_t>(h.n()) - uf.components());
    std::cout << "sum " << sum.to_string() << "\n";
    std::cout << "expected " << expect.to_string() << "\n";
    if (!(sum == expect)) {
      std::cerr << "FAIL: reciprocal strength sum mismatch\n";
      return kExitVerifyFailed;
    }
    std::cout << "pass\n";
  } else {
    throw hss::MalformedInput("oracle subcommand must be kcut|strengths|sum-check");
  }
  return kExitOk;
}

int cmd_gen(const std::string& kind, uint32_t n, uint32_t r, uint64_t m, uint64_t k,
            uint32_t blocks, uint64_t intra, uint64_t cross, uint64_t seed,
            const std::string& output) {
  std::vector<hss::StreamUpdate> updates;
  uint64_t header_k = 0;
  if (kind == "uniform") {
    updates = hss::gen_uniform(n, m, std::min(2u, r), r, seed);
  } else if (kind == "planted") {
    updates = hss::gen_planted(n, blocks, intra, cross, seed);
    r = std::max(r, 2u);
  } else if (kind == "deletion-heavy") {
    updates = hss::gen_deletion_heavy(n, m, std::min(2u, r), r, k, seed);
    header_k = k;
  } else {
    throw hss::MalformedInput("gen kind must be uniform|planted|deletion-heavy");
  }
  auto out = open_output(output);
  hss::write_hgs(out, {n, r, header_k}, updates);
  std::cerr << "wrote " << updates.size() << " updates to " << output << "\n";
  return kExitOk;
}

int cmd_bench(uint32_t n, uint32_t r, uint32_t arity, uint64_t base_edges,
              const std::string& ks_str, bool compare, uint64_t compare_edges,
              uint64_t seed, const std::string& profile,
              const std::vector<std::string>& sets, const std::string& output) {
  hss::BenchConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.arity = arity;
  cfg.base_edges = base_edges;
  cfg.compare_engines = compare;
  cfg.compare_edges = compare_edges;
  cfg.seed = seed;
  cfg.profile = profile;
  cfg.overrides = parse_overrides(sets);
  std::stringstream ks(ks_str);
  std::string tok;
  while (std::getline(ks, tok, ','))
    if (!tok.empty()) cfg.ks.push_back(std::stoull(tok));

  auto rows = hss::run_space_bench(cfg);
  if (output.empty() || output == "-") {
    hss::write_bench_csv(std::cout, rows);
  } else {
    auto out = open_output(output);
    hss::write_bench_csv(out, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming hypergraph cut sparsification"};
  app.require_subcommand(1);

  // sparsify
  std::string sp_input, sp_output, sp_report, sp_mode = "insertion", sp_profile = "desk";
  double sp_eps = 0.5;
  uint64_t sp_seed = default_seed();
  std::vector<std::string> sp_sets;
  auto* sp = app.add_subcommand("sparsify", "stream a .hgs file into a sparsifier");
  sp->add_option("--input", sp_input, ".hgs path, or - for stdin")->required();
  sp->add_option("--output", sp_output, ".hgw path")->required();
  sp->add_option("--report", sp_report, "manifest path (default <output>.manifest)");
  sp->add_option("--mode", sp_mode, "static|simple|insertion|bounded[:k]|dynamic");
  sp->add_option("--epsilon", sp_eps, "target accuracy");
  sp->add_option("--seed", sp_seed, "master seed (default HSS_SEED or 1)");
  sp->add_option("--profile", sp_profile, "desk|paper");
  sp->add_option("--set", sp_sets, "constant override key=value (repeatable)");

  // verify
  std::string vf_orig, vf_spars;
  double vf_eps = 0.5;
  uint32_t vf_bound = 16;
  auto* vf = app.add_subcommand("verify", "exhaustively check a sparsifier");
  vf->add_option("original", vf_orig, ".hgs stream")->required();
  vf->add_option("sparsifier", vf_spars, ".hgw sparsifier")->required();
  vf->add_option("--epsilon", vf_eps, "tolerance");
  vf->add_option("--bound", vf_bound, "max n for exhaustive verification");

  // oracle
  std::string or_sub, or_input;
  auto* orc = app.add_subcommand("oracle", "exact strength computations");
  orc->add_option("subcommand", or_sub, "kcut|strengths|sum-check")->required();
  orc->add_option("--input", or_input, ".hgs stream")->required();

  // gen
  std::string gn_kind = "uniform", gn_output;
  uint32_t gn_n = 8, gn_r = 4, gn_blocks = 2;
  uint64_t gn_m = 40, gn_k = 0, gn_intra = 30, gn_cross = 3, gn_seed = default_seed();
  auto* gn = app.add_subcommand("gen", "synthesize stream files");
  gn->add_option("--kind", gn_kind, "uniform|planted|deletion-heavy");
  gn->add_option("--n", gn_n);
  gn->add_option("--r", gn_r);
  gn->add_option("--m", gn_m, "edge count");
  gn->add_option("--k", gn_k, "deletions (deletion-heavy)");
  gn->add_option("--blocks", gn_blocks, "planted block count");
  gn->add_option("--intra", gn_intra, "planted edges per block");
  gn->add_option("--cross", gn_cross, "planted cross edges");
  gn->add_option("--seed", gn_seed);
  gn->add_option("--output", gn_output)->required();

  // bench-space
  std::string bn_ks = "1,16,256,4096", bn_output, bn_profile = "desk";
  uint32_t bn_n = 256, bn_r = 4, bn_arity = 3;
  uint64_t bn_base = 1 << 18, bn_compare_edges = 0, bn_seed = default_seed();
  bool bn_compare = false;
  std::vector<std::string> bn_sets;
  auto* bn = app.add_subcommand("bench-space", "space scaling probes (CSV)");
  bn->add_option("--n", bn_n);
  bn->add_option("--r", bn_r);
  bn->add_option("--arity", bn_arity, "synthetic edge arity");
  bn->add_option("--base-edges", bn_base, "insertions per k-matrix run");
  bn->add_option("--ks", bn_ks, "comma-separated deletion budgets");
  bn->add_flag("--compare-engines", bn_compare, "insertion vs dynamic long-stream run");
  bn->add_option("--compare-edges", bn_compare_edges, "override comparison length (default n^3)");
  bn->add_option("--seed", bn_seed);
  bn->add_option("--profile", bn_profile);
  bn->add_option("--set", bn_sets, "constant override key=value");
  bn->add_option("--output", bn_output, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sp->parsed())
      return cmd_sparsify(sp_input, sp_output, sp_report, sp_mode, sp_eps, sp_seed,
                          sp_profile, sp_sets);
    if (vf->parsed()) return cmd_verify(vf_orig, vf_spars, vf_eps, vf_bound);
    if (orc->parsed()) return cmd_oracle(or_sub, or_input);
    if (gn->parsed())
      return cmd_gen(gn_kind, gn_n, gn_r, gn_m, gn_k, gn_blocks, gn_intra, gn_cross,
                     gn_seed, gn_output);
    if (bn->parsed())
      return cmd_bench(bn_n, bn_r, bn_arity, bn_base, bn_ks, bn_compare,
                       bn_compare_edges, bn_seed, bn_profile, bn_sets, bn_output);
  } catch (const hss::RecoveryFailure& e) {
    std::cerr << "recovery failure: " << e.what() << "\n";
    std::cerr << "retry with a different --seed\n";
    return kExitRecoveryFailure;
  } catch (const hss::DeletionBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudgetExceeded;
  } catch (const hss::NoCut& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const hss::TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const hss::MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitOk;
}
