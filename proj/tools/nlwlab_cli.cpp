// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "nlwlab/nlwlab.h"

namespace {

// 0 success, 2 validation, 3 numerical, 4 unconverged diagnostic.
int exit_code(nlw_status s) {
  switch (s) {
    case NLW_OK: return 0;
    case NLW_ERR_UNCONVERGED: return 4;
    case NLW_ERR_NUMERICAL:
    case NLW_ERR_CONDITIONING:
    case NLW_ERR_REFINEMENT:
    case NLW_ERR_INTERNAL: return 3;
    default: return 2;
  }
}

int report(nlw_status s, const std::string& what) {
  std::cerr << "nlwlab: " << what << ": " << nlw_status_name(s);
  const std::string msg = nlw_last_error();
  if (!msg.empty()) std::cerr << "\n" << msg;
  std::cerr << "\n";
  return exit_code(s);
}

std::string fetch(const std::function<nlw_status(char*, size_t, size_t*)>& call) {
  size_t needed = 0;
  if (call(nullptr, 0, &needed) != NLW_OK) return {};
  std::string buf(needed, '\0');
  if (call(buf.data(), buf.size(), &needed) != NLW_OK) return {};
  buf.resize(needed - 1);
  return buf;
}

using config_ptr = std::unique_ptr<nlw_config, decltype(&nlw_config_destroy)>;
using manifest_ptr = std::unique_ptr<nlw_manifest, decltype(&nlw_manifest_destroy)>;

struct globals {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::vector<std::string> sets;
};

// Loads --config (if any), applies --set and --seed; kind forces run.kind.
nlw_status build_config(const globals& g, const std::string& kind, config_ptr& out) {
  nlw_config* raw = nullptr;
  nlw_status s = g.config_path.empty() ? nlw_config_create(&raw) : nlw_config_load(g.config_path.c_str(), &raw);
  if (s != NLW_OK) return s;
  out.reset(raw);
  if (!kind.empty()) {
    char current[64];
    if (nlw_config_get(raw, "run.kind", current, sizeof current, nullptr) == NLW_OK && kind != current) {
      std::cerr << "nlwlab: config declares kind '" << current << "' but the subcommand is '" << kind << "'\n";
      return NLW_ERR_VALIDATION;
    }
    if ((s = nlw_config_set(raw, "run.kind", kind.c_str())) != NLW_OK) return s;
  }
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "nlwlab: --set expects key=value, got '" << kv << "'\n";
      return NLW_ERR_VALIDATION;
    }
    if ((s = nlw_config_set(raw, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != NLW_OK) return s;
  }
  if (g.seed_given) s = nlw_config_set(raw, "run.seed", std::to_string(g.seed).c_str());
  return s;
}

// Prints every issue; true when there are none.
bool print_issues(const nlw_config* cfg) {
  size_t count = 0;
  const std::string text = fetch([&](char* b, size_t l, size_t* n) { return nlw_config_validate(cfg, &count, b, l, n); });
  if (count == 0) return true;
  std::cerr << "nlwlab: " << count << " configuration issue" << (count == 1 ? "" : "s") << ":\n";
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::cerr << "  - " << text.substr(start, end - start) << "\n";
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return false;
}

void print_manifest(const nlw_manifest* m, const std::string& dir) {
  char hash[65];
  nlw_manifest_config_hash(m, hash);
  size_t n = 0;
  nlw_manifest_file_count(m, &n);
  std::cout << "config " << hash << "\n";
  for (size_t i = 0; i < n; ++i) {
    char name[256];
    char sha[65];
    if (nlw_manifest_file(m, i, name, sizeof name, sha) == NLW_OK) std::cout << sha << "  " << dir << "/" << name << "\n";
  }
  std::ifstream summary(dir + "/summary.csv");
  if (summary) std::cout << "\n" << summary.rdbuf();
}

int run_kind(const globals& g, const std::string& kind) {
  if (g.out_dir.empty()) {
    std::cerr << "nlwlab: --out is required\n";
    return 2;
  }
  config_ptr cfg(nullptr, &nlw_config_destroy);
  nlw_status s = build_config(g, kind, cfg);
  if (s != NLW_OK) return report(s, "configuration");
  if (!print_issues(cfg.get())) return 2;
  nlw_manifest* raw = nullptr;
  s = nlw_run(cfg.get(), g.out_dir.c_str(), &raw);
  manifest_ptr m(raw, &nlw_manifest_destroy);
  if (m) print_manifest(m.get(), g.out_dir);
  if (s != NLW_OK) return report(s, kind);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial energy-critical wave equation laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nlw_version()));

  globals g;
  app.add_option("--config", g.config_path, "experiment config file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "output directory (must be absent or empty)");
  auto* seed = app.add_option("--seed", g.seed, "seed for randomized experiments (sets run.seed)");
  app.add_option("--threads", g.threads, "worker threads (runs are currently sequential)")
      ->check(CLI::PositiveNumber);
  app.add_option("--set", g.sets, "override a config entry, key=value (repeatable)");

  const std::vector<std::pair<std::string, std::string>> kinds{
      {"constants", "ground-state constants table"},
      {"evolve", "evolve initial data under the free, linearized or nonlinear equation"},
      {"channels", "exterior channel energies, forward and backward"},
      {"collide", "two-soliton run with modulation tracking and exterior radiation"},
      {"modfit", "fixed-point modulation fit of a planted multisoliton"},
      {"modode", "modulation ODE trajectory, monotonicity diagnostics or exit-time sweep"},
      {"estimates", "exponent sweeps and pointwise sampling of the weighted integral estimates"},
      {"exterior", "exterior profile fit against P(R)"}};
  std::string chosen;
  for (const auto& [name, help] : kinds) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  auto* validate = app.add_subcommand("validate", "list every issue in a config");
  validate->fallthrough();
  auto* presets = app.add_subcommand("presets", "list initial-data presets");
  std::string run_dir;
  auto* replay = app.add_subcommand("replay", "re-run a finished experiment and compare output hashes");
  replay->add_option("run_dir", run_dir, "directory of the original run")->required()->check(CLI::ExistingDirectory);
  replay->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = seed->count() > 0;

  if (!chosen.empty()) return run_kind(g, chosen);

  if (validate->parsed()) {
    config_ptr cfg(nullptr, &nlw_config_destroy);
    const nlw_status s = build_config(g, "", cfg);
    if (s != NLW_OK) return report(s, "configuration");
    if (!print_issues(cfg.get())) return 2;
    std::cout << "ok\n";
    return 0;
  }

  if (presets->parsed()) {
    std::cout << fetch([](char* b, size_t l, size_t* n) { return nlw_list_presets(b, l, n); });
    return 0;
  }

  if (replay->parsed()) {
    if (g.out_dir.empty()) {
      std::cerr << "nlwlab: --out is required\n";
      return 2;
    }
    int match = 0;
    nlw_manifest* raw = nullptr;
    const nlw_status s = nlw_replay(run_dir.c_str(), g.out_dir.c_str(), &match, &raw);
    manifest_ptr m(raw, &nlw_manifest_destroy);
    if (s != NLW_OK) return report(s, "replay");
    std::cout << (match ? "replay matches " : "replay differs from ") << run_dir << "\n";
    if (!match) std::cerr << nlw_last_error() << "\n";
    return match ? 0 : 2;
  }
  return 2;
}
