#include "nlwlab/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "nlwlab/errors.hpp"

namespace nlwlab::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoull(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

bool parse_flag(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") return out = true, true;
  if (s == "false" || s == "0" || s == "no") return out = false, true;
  return false;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw error(error_code::validation, key + ": cannot read '" + value + "' as " + expected);
}

[[noreturn]] void missing(const std::string& key) {
  throw error(error_code::validation, "missing required key " + key);
}

std::string qualify(const std::string& section, const std::string& key) {
  return key.find('.') == std::string::npos ? section + "." + key : key;
}

}  // namespace

experiment_config experiment_config::parse(const std::string& text) {
  experiment_config cfg;
  std::stringstream in(text);
  std::string line;
  std::string section = "run";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      require(line.back() == ']' && line.size() > 2, error_code::validation, where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      require(!section.empty() && section.find('.') == std::string::npos, error_code::validation,
              where + "malformed section name");
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, error_code::validation, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), error_code::validation, where + "empty key");
    const std::string full = qualify(section, key);
    require(!cfg.has(full), error_code::validation, where + "duplicate key " + full);
    cfg.entries_[full] = trim(line.substr(eq + 1));
  }
  return cfg;
}

experiment_config experiment_config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), error_code::io, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void experiment_config::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  require(!k.empty(), error_code::invalid_argument, "empty key");
  entries_[qualify("run", k)] = trim(value);
}

void experiment_config::erase(const std::string& key) { entries_.erase(qualify("run", key)); }

bool experiment_config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> experiment_config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string experiment_config::str(const std::string& key, const std::optional<std::string>& fallback) const {
  if (auto v = get(key)) return *v;
  if (fallback) return *fallback;
  missing(key);
}

double experiment_config::real(const std::string& key, const std::optional<double>& fallback) const {
  const auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    missing(key);
  }
  double x = 0;
  if (!parse_real(*v, x)) bad_value(key, *v, "a real number");
  return x;
}

long experiment_config::integer(const std::string& key, const std::optional<long>& fallback) const {
  const auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    missing(key);
  }
  long x = 0;
  if (!parse_long(*v, x)) bad_value(key, *v, "an integer");
  return x;
}

std::uint64_t experiment_config::u64(const std::string& key) const {
  const auto v = get(key);
  if (!v) missing(key);
  std::uint64_t x = 0;
  if (!parse_u64(*v, x)) bad_value(key, *v, "an unsigned 64-bit integer");
  return x;
}

bool experiment_config::flag(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  bool x = false;
  if (!parse_flag(*v, x)) bad_value(key, *v, "true/false");
  return x;
}

std::vector<double> experiment_config::reals(const std::string& key,
                                             const std::optional<std::vector<double>>& fallback) const {
  const auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    missing(key);
  }
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    double x = 0;
    if (!parse_real(item, x)) bad_value(key, *v, "a list of real numbers");
    out.push_back(x);
  }
  if (out.empty()) bad_value(key, *v, "a non-empty list");
  return out;
}

std::vector<int> experiment_config::integers(const std::string& key,
                                             const std::optional<std::vector<int>>& fallback) const {
  const auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    missing(key);
  }
  std::vector<int> out;
  for (const auto& item : split_list(*v)) {
    long x = 0;
    if (!parse_long(item, x)) bad_value(key, *v, "a list of integers");
    out.push_back(static_cast<int>(x));
  }
  if (out.empty()) bad_value(key, *v, "a non-empty list");
  return out;
}

std::vector<std::string> experiment_config::words(const std::string& key,
                                                  const std::optional<std::vector<std::string>>& fallback) const {
  const auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    missing(key);
  }
  auto out = split_list(*v);
  if (out.empty() || std::any_of(out.begin(), out.end(), [](const std::string& w) { return w.empty(); }))
    bad_value(key, *v, "a list of names");
  return out;
}

std::string experiment_config::canonical() const {
  std::string out;
  std::string current;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!out.empty()) out += '\n';
      out += "[" + section + "]\n";
      current = section;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::string experiment_config::hash() const { return sha256_hex(canonical()); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) == 1, error_code::io,
          "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), error_code::io, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::vector<std::string> kinds() {
  return {"constants", "evolve", "channels", "collide", "modfit", "modode", "estimates", "exterior"};
}

std::vector<std::string> presets() { return {"W", "LambdaW", "bump", "xi", "multisoliton", "W+perturbation"}; }

// ---------------------------------------------------------------------------------------------
// Validation schema

namespace {

enum class vtype { integer, real, u64, flag, word, reals, integers, words };

struct key_spec {
  std::string key;
  vtype type;
  bool required = false;
  double lo = -HUGE_VAL;  // inclusive bounds on numeric values and list entries
  double hi = HUGE_VAL;
  std::string choices;    // '|' separated, word type only
};

using schema = std::vector<key_spec>;

key_spec req(std::string k, vtype t, double lo = -HUGE_VAL, double hi = HUGE_VAL) {
  return {std::move(k), t, true, lo, hi, {}};
}
key_spec opt(std::string k, vtype t, double lo = -HUGE_VAL, double hi = HUGE_VAL) {
  return {std::move(k), t, false, lo, hi, {}};
}
key_spec choice(std::string k, bool required, std::string choices) {
  return {std::move(k), vtype::word, required, -HUGE_VAL, HUGE_VAL, std::move(choices)};
}

constexpr double tiny = 1e-300;

schema grid_keys() {
  return {req("grid.N", vtype::integer, 3, 15), req("grid.h", vtype::real, tiny, 1.0),
          req("grid.r_max", vtype::real, tiny)};
}

schema data_keys() {
  return {choice("data.preset", true, "W|LambdaW|bump|xi|multisoliton|W+perturbation"),
          opt("data.lambda", vtype::real, tiny),
          choice("data.component", false, "position|velocity"),
          opt("data.center", vtype::real, 0),
          opt("data.width", vtype::real, tiny),
          opt("data.amplitude", vtype::real),
          opt("data.random", vtype::flag),
          opt("data.count", vtype::integer, 1, 64),
          opt("data.k", vtype::integer, 1, 8),
          opt("data.R", vtype::real, tiny),
          opt("data.cut", vtype::real, tiny),
          opt("data.signs", vtype::integers, -1, 1),
          opt("data.scales", vtype::reals, tiny),
          opt("data.alpha", vtype::reals),
          opt("data.epsilon", vtype::real)};
}

schema join(std::initializer_list<schema> parts) {
  schema out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

schema kind_schema(const std::string& kind) {
  if (kind == "constants") return grid_keys();
  if (kind == "evolve") {
    return join({grid_keys(), data_keys(),
                 {choice("evolve.equation", true, "free|linearized|nonlinear"),
                  req("evolve.t_final", vtype::real, 0), opt("evolve.dt", vtype::real, tiny),
                  opt("evolve.series_every", vtype::integer, 1), opt("evolve.snapshot_every", vtype::integer, 0),
                  opt("evolve.channel_R", vtype::real, 0), opt("evolve.signs", vtype::integers, -1, 1),
                  opt("evolve.scales", vtype::reals, tiny), opt("evolve.cone", vtype::real, 0),
                  opt("evolve.support", vtype::real, tiny)}});
  }
  if (kind == "channels") {
    return join({grid_keys(), data_keys(),
                 {req("channels.R", vtype::real, 0), req("channels.t_final", vtype::real, tiny),
                  choice("channels.equation", false, "free|linearized"), opt("channels.dt", vtype::real, tiny),
                  opt("channels.signs", vtype::integers, -1, 1), opt("channels.scales", vtype::reals, tiny),
                  opt("channels.series_every", vtype::integer, 1), opt("channels.support", vtype::real, tiny),
                  opt("channels.cone", vtype::real, 0)}});
  }
  if (kind == "collide") {
    return join({grid_keys(),
                 {req("collide.gamma0", vtype::real, tiny, 0.5), opt("collide.lambda1", vtype::real, tiny),
                  opt("collide.signs", vtype::integers, -1, 1), req("collide.t_final", vtype::real, tiny),
                  req("collide.snapshot_dt", vtype::real, tiny), opt("collide.R", vtype::real, 0),
                  opt("collide.gamma_pass", vtype::real, tiny, 1.0),
                  opt("collide.shoot_iterations", vtype::integer, 0, 200),
                  opt("collide.shoot_dt", vtype::real, tiny)}});
  }
  if (kind == "modfit") {
    return join({grid_keys(),
                 {req("modfit.signs", vtype::integers, -1, 1), req("modfit.scales", vtype::reals, tiny),
                  opt("modfit.start", vtype::reals, tiny), opt("modfit.noise", vtype::real, 0),
                  opt("modfit.tol", vtype::real, tiny, 1.0), opt("modfit.max_iter", vtype::integer, 1, 100000),
                  opt("modfit.damping", vtype::flag), opt("modfit.enforce_gate", vtype::flag)}});
  }
  if (kind == "modode") {
    return {req("ode.N", vtype::integer, 5, 15),
            req("ode.signs", vtype::integers, -1, 1),
            choice("ode.mode", false, "trajectory|exit"),
            opt("ode.scales", vtype::reals, tiny),
            opt("ode.beta", vtype::reals),
            opt("ode.t_final", vtype::real, tiny),
            opt("ode.dt", vtype::real, tiny),
            opt("ode.record_every", vtype::integer, 1),
            opt("ode.gamma_max", vtype::real, tiny),
            opt("ode.C", vtype::real, tiny),
            opt("ode.epsilon", vtype::real, tiny),
            opt("ode.L", vtype::real, 0),
            opt("ode.hyp_C", vtype::real, tiny),
            opt("ode.hyp_a", vtype::real),
            opt("ode.gamma0", vtype::reals, tiny, 0.5),
            opt("ode.lambda1", vtype::reals, tiny),
            opt("ode.horizon", vtype::real, tiny)};
  }
  if (kind == "estimates") {
    return {choice("estimates.family", true, "crucial|integral|spacetime|pointwise"),
            req("estimates.N", vtype::integer, 3, 15),
            opt("estimates.ids", vtype::words),
            opt("estimates.ratios", vtype::reals, tiny, 1.0),
            opt("estimates.a", vtype::real, tiny),
            opt("estimates.b", vtype::real, tiny),
            opt("estimates.samples", vtype::integer, 10000, 100000000),
            opt("estimates.lambda_w", vtype::flag)};
  }
  if (kind == "exterior") {
    return join({grid_keys(), data_keys(),
                 {req("exterior.radii", vtype::reals, tiny), opt("exterior.delta", vtype::real, 0),
                  opt("exterior.lambda1", vtype::real, tiny), opt("exterior.C", vtype::real, tiny)}});
  }
  return {};
}

// Checks one present value against its spec; returns the issue text or "".
std::string check_value(const key_spec& spec, const std::string& v) {
  const auto in_range = [&](double x) { return x >= spec.lo && x <= spec.hi; };
  const auto range_text = [&] {
    std::ostringstream os;
    os << spec.key << ": value '" << v << "' outside [" << spec.lo << ", " << spec.hi << "]";
    return os.str();
  };
  switch (spec.type) {
    case vtype::integer: {
      long x = 0;
      if (!parse_long(v, x)) return spec.key + ": '" + v + "' is not an integer";
      return in_range(static_cast<double>(x)) ? "" : range_text();
    }
    case vtype::real: {
      double x = 0;
      if (!parse_real(v, x)) return spec.key + ": '" + v + "' is not a finite real number";
      return in_range(x) ? "" : range_text();
    }
    case vtype::u64: {
      std::uint64_t x = 0;
      return parse_u64(v, x) ? "" : spec.key + ": '" + v + "' is not an unsigned 64-bit integer";
    }
    case vtype::flag: {
      bool x = false;
      return parse_flag(v, x) ? "" : spec.key + ": '" + v + "' is not true/false";
    }
    case vtype::word: {
      std::stringstream opts(spec.choices);
      std::string c;
      while (std::getline(opts, c, '|'))
        if (c == v) return "";
      return spec.key + ": '" + v + "' is not one of " + spec.choices;
    }
    case vtype::reals:
    case vtype::integers: {
      const auto items = split_list(v);
      if (items.empty()) return spec.key + ": empty list";
      for (const auto& item : items) {
        double x = 0;
        long n = 0;
        const bool ok = spec.type == vtype::reals ? parse_real(item, x) : (parse_long(item, n) && (x = n, true));
        if (!ok) return spec.key + ": '" + item + "' is not a valid list entry";
        if (!in_range(x)) return range_text();
        if (spec.type == vtype::integers && spec.lo == -1 && spec.hi == 1 && x == 0)
          return spec.key + ": signs must be +1 or -1";
      }
      return "";
    }
    case vtype::words: {
      const auto items = split_list(v);
      if (items.empty() || std::any_of(items.begin(), items.end(), [](const std::string& s) { return s.empty(); }))
        return spec.key + ": malformed list";
      return "";
    }
  }
  return "";
}

// Rules that involve more than one key. Only runs on values that passed check_value.
void cross_checks(const experiment_config& raw, const experiment_config& cfg, const std::string& kind, std::vector<std::string>& issues) {
  const auto ok = [&](const std::string& key) {
    if (!raw.has(key)) return false;
    try {
      (void)cfg.str(key);
      return true;
    } catch (const error&) {
      return false;
    }
  };
  auto safe = [&](auto&& fn) {
    try {
      fn();
    } catch (const error&) {
      // already reported by the per-key pass
    }
  };
  bool randomized = false;

  if (ok("grid.N")) {
    safe([&] {
      const long N = cfg.integer("grid.N");
      if (N % 2 == 0) issues.push_back("grid.N: dimension must be odd");
      if ((kind == "constants" || kind == "collide" || kind == "modfit") && N < 5)
        issues.push_back("grid.N: " + kind + " requires N >= 5");
      if (ok("grid.h") && ok("grid.r_max") && cfg.real("grid.r_max") < 4 * cfg.real("grid.h"))
        issues.push_back("grid.r_max: grid needs at least four cells");
    });
  }
  if (ok("ode.N")) safe([&] {
      if (cfg.integer("ode.N") % 2 == 0) issues.push_back("ode.N: dimension must be odd");
    });
  if (ok("estimates.N")) safe([&] {
      if (cfg.integer("estimates.N") % 2 == 0) issues.push_back("estimates.N: dimension must be odd");
    });

  const auto paired = [&](const std::string& signs, const std::string& scales, bool required) {
    if (required) {
      if (!raw.has(signs)) issues.push_back("missing required key " + signs);
      if (!raw.has(scales)) issues.push_back("missing required key " + scales);
    }
    if (ok(signs) && ok(scales)) safe([&] {
        const auto s = cfg.integers(signs);
        const auto l = cfg.reals(scales);
        if (s.size() != l.size()) issues.push_back(scales + ": length differs from " + signs);
        for (std::size_t j = 1; j < l.size(); ++j)
          if (!(l[j] < l[j - 1])) {
            issues.push_back(scales + ": scales must be strictly decreasing");
            break;
          }
      });
  };

  if (ok("data.preset")) {
    const std::string preset = cfg.str("data.preset");
    const auto need = [&](const std::string& key) {
      if (!raw.has(key)) issues.push_back("missing required key " + key + " (preset " + preset + ")");
    };
    if (preset == "xi") {
      need("data.k");
      need("data.R");
      need("data.cut");
      if (ok("data.R") && ok("data.cut")) safe([&] {
          if (cfg.real("data.cut") <= cfg.real("data.R")) issues.push_back("data.cut: must exceed data.R");
        });
    } else if (preset == "multisoliton") {
      paired("data.signs", "data.scales", true);
      if (ok("data.alpha") && ok("data.scales")) safe([&] {
          if (cfg.reals("data.alpha").size() != cfg.reals("data.scales").size())
            issues.push_back("data.alpha: length differs from data.scales");
        });
    } else if (preset == "W+perturbation") {
      need("data.epsilon");
    } else if (preset == "bump") {
      safe([&] { randomized = randomized || cfg.flag("data.random", false); });
    }
  }

  if (kind == "evolve" && ok("evolve.equation")) {
    paired("evolve.signs", "evolve.scales", cfg.str("evolve.equation") == "linearized");
  }
  if (kind == "channels") {
    paired("channels.signs", "channels.scales", cfg.str("channels.equation", std::string("free")) == "linearized");
  }
  if (kind == "collide" && ok("collide.signs")) safe([&] {
      if (cfg.integers("collide.signs").size() != 2) issues.push_back("collide.signs: exactly two signs required");
    });
  if (kind == "modfit") {
    paired("modfit.signs", "modfit.scales", false);
    if (ok("modfit.start") && ok("modfit.scales")) safe([&] {
        if (cfg.reals("modfit.start").size() != cfg.reals("modfit.scales").size())
          issues.push_back("modfit.start: length differs from modfit.scales");
      });
    safe([&] { randomized = randomized || cfg.real("modfit.noise", 0.0) > 0.0; });
  }
  if (kind == "modode") {
    const std::string mode = cfg.str("ode.mode", std::string("trajectory"));
    if (mode == "trajectory") {
      if (!raw.has("ode.scales")) issues.push_back("missing required key ode.scales (mode trajectory)");
      if (!raw.has("ode.t_final")) issues.push_back("missing required key ode.t_final (mode trajectory)");
      paired("ode.signs", "ode.scales", false);
      if (ok("ode.beta") && ok("ode.scales")) safe([&] {
          if (cfg.reals("ode.beta").size() != cfg.reals("ode.scales").size())
            issues.push_back("ode.beta: length differs from ode.scales");
        });
    } else if (mode == "exit") {
      if (!raw.has("ode.gamma0")) issues.push_back("missing required key ode.gamma0 (mode exit)");
    }
  }
  if (kind == "estimates" && ok("estimates.family")) {
    const std::string family = cfg.str("estimates.family");
    if (family == "crucial") {
      if (!raw.has("estimates.a")) issues.push_back("missing required key estimates.a (family crucial)");
      if (!raw.has("estimates.b")) issues.push_back("missing required key estimates.b (family crucial)");
    }
    if (family == "pointwise") randomized = true;
  }

  if (randomized && !raw.has("run.seed")) issues.push_back("missing required key run.seed (randomized experiment)");
}

}  // namespace

std::vector<std::string> validate(const experiment_config& cfg) {
  std::vector<std::string> issues;
  if (!cfg.has("run.kind")) {
    issues.push_back("missing required key run.kind");
    return issues;
  }
  const std::string kind = cfg.kind();
  const auto known = kinds();
  if (std::find(known.begin(), known.end(), kind) == known.end()) {
    issues.push_back("run.kind: '" + kind + "' is not a known experiment kind");
    return issues;
  }

  schema keys = kind_schema(kind);
  keys.push_back(opt("run.seed", vtype::u64));
  keys.push_back(choice("run.kind", true, "constants|evolve|channels|collide|modfit|modode|estimates|exterior"));

  std::set<std::string> allowed;
  for (const auto& spec : keys) {
    allowed.insert(spec.key);
    const auto v = cfg.get(spec.key);
    if (!v) {
      if (spec.required) issues.push_back("missing required key " + spec.key);
      continue;
    }
    const auto issue = check_value(spec, *v);
    if (!issue.empty()) issues.push_back(issue);
  }
  for (const auto& [key, value] : cfg.entries())
    if (!allowed.count(key)) issues.push_back(key + ": unknown key for kind " + kind);

  // Cross-key rules read values through the typed accessors, which would rethrow for
  // malformed entries; those keys are skipped.
  experiment_config clean;
  for (const auto& spec : keys) {
    const auto v = cfg.get(spec.key);
    if (v && check_value(spec, *v).empty()) clean.set(spec.key, *v);
  }
  cross_checks(cfg, clean, kind, issues);
  return issues;
}

}  // namespace nlwlab::config
