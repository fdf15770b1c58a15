// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treehash/analysis.hpp"
#include "treehash/codec.hpp"
#include "treehash/treemode.hpp"

namespace {

using namespace treehash;

std::string hex_of(const Block& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    const std::string& s = buffer.str();
    return {s.begin(), s.end()};
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  const std::string& s = buffer.str();
  return {s.begin(), s.end()};
}

std::string join_arities(const std::vector<int>& arities) {
  std::string out;
  for (std::size_t j = 0; j < arities.size(); ++j) {
    if (j) out.push_back(',');
    out += std::to_string(arities[j]);
  }
  return out;
}

std::string format_gain(const Rational& gain) {
  if (gain.num % gain.den == 0) return std::to_string(gain.num / gain.den);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", gain.value());
  return buf;
}

unsigned default_threads() {
  if (const char* env = std::getenv("TREEHASH_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

int cmd_hash(const std::string& input, unsigned threads, unsigned block_bits,
             bool no_cache, bool report, const std::string& emit_tree) {
  std::vector<std::uint8_t> message;
  try {
    message = read_input(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  HashParams params = make_params(block_bits, !no_cache);
  TreeJob job = make_tree_job(message, params, threads);
  PrecomputeCache cache = PrecomputeCache::build(params);
  TreeHashResult result = tree_hash(job, no_cache ? nullptr : &cache);
  std::cout << hex_of(result.digest) << "\n";
  if (report) {
    std::cout << "level,arity,nodes,time_units\n";
    for (std::size_t k = 0; k < result.report.per_step.size(); ++k) {
      const CostStep& step = result.report.per_step[k];
      std::cout << k + 1 << ',' << step.arity << ',' << step.nodes << ','
                << step.arity << "\n";
    }
    std::cout << "total_work," << result.report.total_work << ",,"
              << result.report.time_units << "\n";
  }
  if (!emit_tree.empty()) {
    FInputTree tree = emit_f_input_tree(job);
    std::vector<std::uint8_t> bytes = serialize(tree);
    std::ofstream out(emit_tree, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << emit_tree << "\n";
      return 1;
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  return 0;
}

int cmd_topology(std::uint64_t l, bool alg1, bool oracle) {
  if (l < 1) {
    std::cerr << "error: block count must be positive\n";
    return 64;
  }
  ArityPlan plan;
  if (l == 1) {
    plan.block_count = 1;
    plan.arities = {1};
  } else {
    plan = alg1 ? min_time_plan(l) : optimal_plan(l);
  }
  LevelProfile profile = level_profile(l, plan);
  std::cout << "l: " << l << "\n";
  std::cout << "arities: " << join_arities(plan.arities) << "\n";
  std::cout << "case: " << (plan.case_id ? std::to_string(*plan.case_id) : "-") << "\n";
  std::cout << "time_units: " << plan.time() << "\n";
  std::cout << "processors: " << profile.processors << "\n";
  std::string counts;
  for (std::size_t j = 0; j < profile.node_counts.size(); ++j) {
    if (j) counts.push_back(',');
    counts += std::to_string(profile.node_counts[j]);
  }
  std::cout << "node_counts: " << counts << "\n";
  std::cout << "total_work: " << profile.total_work_truncated << "\n";
  if (oracle && l >= 2) {
    bool time_ok = plan.time() == oracle_min_time(l);
    bool plan_ok = alg1 ? time_ok : plan.arities == oracle_lex_plan(l).arities;
    std::cout << "oracle: " << (time_ok && plan_ok ? "agree" : "DISAGREE") << "\n";
    if (!(time_ok && plan_ok)) return 1;
  }
  return 0;
}

int cmd_decode(const std::string& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_input(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  FInputTree tree;
  try {
    tree = deserialize(bytes);
  } catch (const ParseError& e) {
    std::cout << "parse-error: " << e.what() << "\n";
    return 3;
  }
  Verdict verdict = a_decode(tree);
  switch (verdict.compliance) {
    case Compliance::Compliant:
      std::cout << "compliant\n";
      return 0;
    case Compliance::FinalSubtreeCompliant:
      std::cout << "final-subtree-compliant\n";
      return 2;
    case Compliance::Incompliant:
      std::cout << "incompliant " << verdict.rule << "\n";
      return 1;
  }
  return 1;
}

int cmd_speedup(std::uint64_t max_l) {
  std::cout << "l,binary_time,optimal_time,gain_percent\n";
  for (const SpeedupRow& row : speedup_sweep(max_l)) {
    std::cout << row.l << ',' << row.binary_time << ',' << row.optimal_time << ','
              << format_gain(row.gain) << "\n";
  }
  return 0;
}

int cmd_pareto(const ParetoConfig& config) {
  CaseHistogram hist = monte_carlo(config);
  std::cout << "case_id,count,frequency\n";
  char buf[64];
  for (int c = 1; c <= 11; ++c) {
    double freq = static_cast<double>(hist.counts[c - 1]) /
                  static_cast<double>(hist.samples);
    std::snprintf(buf, sizeof buf, "%d,%llu,%.6f", c,
                  static_cast<unsigned long long>(hist.counts[c - 1]), freq);
    std::cout << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "grouped,%.4f,%.4f,%.4f", hist.p3, hist.p4, hist.p5);
  std::cout << buf << "\n";
  return 0;
}

int cmd_ternary(int max_k) {
  std::cout << "k,row_type,threshold_u\n";
  for (int k = 2; k <= max_k; ++k) {
    TernaryRow row = ternary_threshold(k);
    std::cout << k << ',' << to_string(row.type) << ',';
    if (row.threshold) std::cout << *row.threshold;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel tree hashing with time- and processor-optimal topologies"};
  app.require_subcommand(1);

  std::string input;
  unsigned threads = default_threads();
  unsigned block_bits = 256;
  bool no_cache = false;
  bool report = false;
  std::string emit_tree;
  auto* hash = app.add_subcommand("hash", "Hash a file or standard input");
  hash->add_option("--input", input, "Input file (default: standard input)");
  hash->add_option("--threads", threads, "Worker budget");
  hash->add_option("--block-bits", block_bits, "Block and digest size in bits");
  hash->add_flag("--no-cache", no_cache, "Skip the precomputed-state cache");
  hash->add_flag("--report", report, "Print the cost report as CSV");
  hash->add_option("--emit-tree", emit_tree, "Write the tree of f-inputs to a file");

  std::uint64_t topo_l = 0;
  bool topo_alg1 = false;
  bool topo_oracle = false;
  auto* topo = app.add_subcommand("topology", "Show the plan for a block count");
  topo->add_option("l", topo_l, "Message length in blocks")->required();
  topo->add_flag("--alg1", topo_alg1, "Show the 3s-then-2s minimal-time plan");
  topo->add_flag("--oracle", topo_oracle, "Cross-check against the exhaustive oracle");

  auto* analyze = app.add_subcommand("analyze", "Reproduce the study tables");
  analyze->require_subcommand(1);
  std::uint64_t max_l = 100000;
  auto* speedup = analyze->add_subcommand("speedup", "Binary vs optimal running time");
  speedup->add_option("--max-l", max_l, "Largest block count");
  ParetoConfig pareto_config;
  auto* pareto = analyze->add_subcommand("pareto", "Case distribution under Pareto sizes");
  pareto->add_option("--samples", pareto_config.samples, "Sample count");
  pareto->add_option("--rho", pareto_config.rho, "Shape parameter");
  pareto->add_option("--nu", pareto_config.nu, "Location parameter in bytes");
  pareto->add_option("--seed", pareto_config.seed, "Generator seed");
  int max_k = 26;
  auto* ternary = analyze->add_subcommand("ternary", "Perfect binary vs ternary rows");
  ternary->add_option("--max-k", max_k, "Largest exponent")->check(CLI::Range(2, 26));

  std::string tree_path;
  auto* decode = app.add_subcommand("decode", "Classify a serialized tree of f-inputs");
  decode->add_option("tree", tree_path, "Tree file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hash) return cmd_hash(input, threads, block_bits, no_cache, report, emit_tree);
    if (*topo) return cmd_topology(topo_l, topo_alg1, topo_oracle);
    if (*decode) return cmd_decode(tree_path);
    if (*speedup) return cmd_speedup(max_l);
    if (*pareto) return cmd_pareto(pareto_config);
    if (*ternary) return cmd_ternary(max_k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
