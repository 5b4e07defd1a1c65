#include <doctest.h>

#include <atomic>
#include <cmath>
#include <unistd.h>
#include <filesystem>
#include <string>

#include "nlwlab/config.hpp"
#include "nlwlab/errors.hpp"
#include "nlwlab/experiment.hpp"
#include "nlwlab/io.hpp"

using namespace nlwlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto p = fs::temp_directory_path() / ("nlwlab_unit_" + std::to_string(::getpid()) + "_" + tag + "_" +
                                              std::to_string(counter++));
  fs::remove_all(p);
  return p;
}

const char* constants_cfg = "kind = constants\n[grid]\nN = 5\nh = 0.01\nr_max = 50\n";
const char* modode_cfg =
    "kind = modode\n[ode]\nN = 5\nsigns = 1, 1\nscales = 1, 0.01\nt_final = 100\ngamma_max = 0.2\nrecord_every = 50\n";

bool same_hashes(const experiment::manifest& a, const experiment::manifest& b) {
  if (a.files.size() != b.files.size()) return false;
  for (std::size_t i = 0; i < a.files.size(); ++i)
    if (a.files[i].name != b.files[i].name || a.files[i].sha256 != b.files[i].sha256) return false;
  return true;
}

}  // namespace

TEST_CASE("identical configs give byte-identical outputs") {
  for (const char* text : {constants_cfg, modode_cfg}) {
    const auto cfg = config::experiment_config::parse(text);
    const auto d1 = scratch("det"), d2 = scratch("det");
    const auto m1 = experiment::run(cfg, d1.string());
    const auto m2 = experiment::run(cfg, d2.string());
    CHECK(m1.status == error_code::ok);
    CHECK(m1.config_hash == cfg.hash());
    CHECK(same_hashes(m1, m2));
    CHECK(fs::exists(d1 / "manifest.txt"));
    CHECK(fs::exists(d1 / "config.ini"));
    CHECK(fs::exists(d1 / "plot.txt"));
    fs::remove_all(d1);
    fs::remove_all(d2);
  }
}

TEST_CASE("manifest round trip and replay") {
  const auto cfg = config::experiment_config::parse(modode_cfg);
  const auto d = scratch("replay"), r = scratch("replay");
  const auto m = experiment::run(cfg, d.string());
  const auto back = experiment::read_manifest(d.string());
  CHECK(back.config_hash == m.config_hash);
  CHECK(back.kind == "modode");
  CHECK(same_hashes(back, m));
  const auto rep = experiment::replay(d.string(), r.string());
  CHECK(rep.outputs_match);
  CHECK(rep.mismatched.empty());

  // an edited config no longer matches the recorded hash
  const auto rr = scratch("replay");
  io::write_text((d / "config.ini").string(), io::read_text((d / "config.ini").string()) + "[ode]\nC = 5\n");
  CHECK_THROWS_AS(experiment::replay(d.string(), rr.string()), error);
  fs::remove_all(d);
  fs::remove_all(r);
  fs::remove_all(rr);
}

TEST_CASE("a non-empty output directory is refused") {
  const auto d = scratch("busy");
  fs::create_directories(d);
  io::write_text((d / "keep.txt").string(), "x");
  CHECK_THROWS_AS(experiment::run(config::experiment_config::parse(constants_cfg), d.string()), error);
  CHECK(fs::exists(d / "keep.txt"));
  fs::remove_all(d);
}

TEST_CASE("invalid configs are refused before anything is written") {
  const auto d = scratch("invalid");
  CHECK_THROWS_AS(experiment::run(config::experiment_config::parse("kind = constants\n[grid]\nN = 4\n"), d.string()), error);
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("a failing run leaves nothing behind") {
  const auto d = scratch("fail");
  const auto cfg = config::experiment_config::parse(
      "kind = evolve\n[grid]\nN = 5\nh = 0.01\nr_max = 20\n"
      "[data]\npreset = W+perturbation\nepsilon = 2\n[evolve]\nequation = nonlinear\nt_final = 10\n");
  try {
    experiment::run(cfg, d.string());
    FAIL("expected a blow-up");
  } catch (const error& e) {
    CHECK(e.code() == error_code::numerical);
  }
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("presets build data on the grid") {
  const auto grid = make_grid(5, 0.01, 20.0);
  for (const auto& info : experiment::list_presets()) CHECK_FALSE(info.description.empty());
  auto cfg = config::experiment_config::parse("[data]\npreset = W\nlambda = 2\n");
  const auto p = experiment::make_preset(grid, cfg);
  CHECK(p.f[0] == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-4));
  auto bump = config::experiment_config::parse("seed = 4\n[data]\npreset = bump\nrandom = true\n");
  const auto b1 = experiment::make_preset(grid, bump), b2 = experiment::make_preset(grid, bump);
  CHECK(h_norm_sq(b1 - b2) == 0.0);
}

TEST_CASE("field files round trip exactly") {
  const auto grid = make_grid(5, 0.1, 3.0);
  const field_pair p(sample(grid, [](double r) { return std::exp(-r) / 3.0; }), sample(grid, [](double r) { return r / 7.0; }));
  const auto d = scratch("field");
  fs::create_directories(d);
  io::write_field((d / "f.csv").string(), p);
  const auto q = io::read_field((d / "f.csv").string());
  CHECK(q.grid()->dim() == 5);
  CHECK(q.f.values == p.f.values);
  CHECK(q.g.values == p.g.values);
  CHECK(io::format_real(0.1) == "0.10000000000000001");
  fs::remove_all(d);
}
