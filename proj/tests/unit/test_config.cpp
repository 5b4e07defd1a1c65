#include <doctest.h>

#include <algorithm>

#include "nlwlab/config.hpp"
#include "nlwlab/errors.hpp"

using namespace nlwlab;
using config::experiment_config;

namespace {

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("parse sections, comments and top-level keys") {
  const auto c = experiment_config::parse(
      "kind = constants   # trailing comment\n"
      "; full-line comment\n"
      "[grid]\n"
      "N = 5\n"
      "h = 1e-3\n"
      "  r_max=200  \n"
      "data.lambda = 2\n");
  CHECK(c.kind() == "constants");
  CHECK(c.integer("grid.N") == 5);
  CHECK(c.real("grid.h") == 1e-3);
  CHECK(c.real("grid.r_max") == 200.0);
  CHECK(c.real("data.lambda") == 2.0);
  CHECK(c.real("grid.missing", 7.0) == 7.0);
}

TEST_CASE("duplicates, malformed lines and bad values are rejected") {
  CHECK_THROWS_AS(experiment_config::parse("[grid]\nN = 5\nN = 7\n"), error);
  CHECK_THROWS_AS(experiment_config::parse("[grid\nN = 5\n"), error);
  CHECK_THROWS_AS(experiment_config::parse("just words\n"), error);
  const auto c = experiment_config::parse("[grid]\nN = five\n");
  CHECK_THROWS_AS(c.integer("grid.N"), error);
  CHECK_THROWS_AS(c.real("grid.h"), error);
}

TEST_CASE("lists") {
  const auto c = experiment_config::parse("[ode]\nsigns = 1, -1, 1\nscales = 1, 0.1,0.01\n");
  CHECK(c.integers("ode.signs") == std::vector<int>{1, -1, 1});
  CHECK(c.reals("ode.scales") == std::vector<double>{1.0, 0.1, 0.01});
}

TEST_CASE("canonical form and hash ignore order, spacing and comments") {
  const auto a = experiment_config::parse("kind = constants\n[grid]\nN = 5\nh = 0.001\nr_max = 200\n");
  const auto b = experiment_config::parse("[grid]\nr_max=200 # outer\nh=0.001\nN=5\n[run]\nkind=constants\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 64);
  auto c = a;
  c.set("grid.N", "7");
  CHECK(c.hash() != a.hash());
  CHECK(experiment_config::parse(a.canonical()).canonical() == a.canonical());
}

TEST_CASE("sha256 of a known string") {
  CHECK(config::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validation lists every issue") {
  const auto c = experiment_config::parse("kind = evolve\n[grid]\nN = 4\nh = 0.01\n[evolve]\nequation = sideways\nbogus = 1\n");
  const auto issues = config::validate(c);
  CHECK(mentions(issues, "grid.r_max"));
  CHECK(mentions(issues, "grid.N"));
  CHECK(mentions(issues, "evolve.equation"));
  CHECK(mentions(issues, "evolve.bogus"));
  CHECK(mentions(issues, "evolve.t_final"));
  CHECK(mentions(issues, "data.preset"));
  CHECK(issues.size() >= 6);
}

TEST_CASE("valid configs pass and unknown kinds do not") {
  CHECK(config::validate(experiment_config::parse("kind = constants\n[grid]\nN = 5\nh = 1e-3\nr_max = 200\n")).empty());
  CHECK(mentions(config::validate(experiment_config::parse("kind = teleport\n")), "run.kind"));
  CHECK(mentions(config::validate(experiment_config::parse("[grid]\nN = 5\n")), "run.kind"));
}

TEST_CASE("randomized experiments need a seed") {
  const std::string base = "kind = estimates\n[estimates]\nfamily = pointwise\nids = BT20\nN = 5\nsamples = 10000\n";
  const auto without = config::validate(experiment_config::parse(base));
  CHECK(mentions(without, "run.seed"));
  const auto with = config::validate(experiment_config::parse("seed = 3\n" + base));
  CHECK_FALSE(mentions(with, "run.seed"));
}

TEST_CASE("cross-field checks on soliton lists") {
  const auto c = experiment_config::parse(
      "kind = modfit\n[grid]\nN = 5\nh = 1e-3\nr_max = 100\n[modfit]\nsigns = 1, 1\nscales = 0.01, 1\n");
  CHECK(mentions(config::validate(c), "modfit.scales"));
  const auto d = experiment_config::parse(
      "kind = modfit\n[grid]\nN = 5\nh = 1e-3\nr_max = 100\n[modfit]\nsigns = 1\nscales = 1, 0.01\n");
  CHECK(mentions(config::validate(d), "modfit"));
}
