#include "nlwlab/nlwlab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "nlwlab/config.hpp"
#include "nlwlab/errors.hpp"
#include "nlwlab/experiment.hpp"
#include "nlwlab/ground_state.hpp"
#include "nlwlab/radial.hpp"

struct nlw_grid {
  nlwlab::grid_ptr grid;
};

struct nlw_config {
  nlwlab::config::experiment_config cfg;
};

struct nlw_manifest {
  nlwlab::experiment::manifest m;
};

namespace {

thread_local std::string last_error;

nlw_status to_status(nlwlab::error_code c) {
  const int v = static_cast<int>(c);
  return v >= 0 && v <= NLW_ERR_REFINEMENT ? static_cast<nlw_status>(v) : NLW_ERR_INTERNAL;
}

// Runs fn, mapping exceptions to status codes and recording the message.
template <class Fn>
nlw_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const nlwlab::error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NLW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NLW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return NLW_ERR_INTERNAL;
  }
}

nlw_status fail(nlw_status s, const char* msg) {
  last_error = msg;
  return s;
}

nlw_status copy_out(const std::string& s, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return len == 0 ? NLW_OK : fail(NLW_ERR_INVALID_ARGUMENT, "null buffer");
  if (len == 0) return fail(NLW_ERR_RANGE, "buffer too small");
  const size_t n = std::min(len - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
  return n == s.size() ? NLW_OK : fail(NLW_ERR_RANGE, "buffer too small");
}

void copy_hash(const std::string& h, char out[65]) {
  std::memset(out, 0, 65);
  std::memcpy(out, h.data(), std::min<size_t>(64, h.size()));
}

void fill(const nlwlab::ground_state::constants& c, nlw_constants* out) {
  out->N = c.N;
  out->norm_LambdaW_L2_sq = c.norm_LambdaW_L2_sq;
  out->norm_gradW_L2_sq = c.norm_gradW_L2_sq;
  out->norm_gradLambdaW_L2_sq = c.norm_gradLambdaW_L2_sq;
  out->kappa0 = c.kappa0;
  out->kappa1 = c.kappa1;
  out->kappa1_prime = c.kappa1_prime;
  out->kappa2 = c.kappa2;
  out->energy_W = c.energy_W;
  out->interaction_integral = c.interaction_integral;
  out->potential_integral = c.potential_integral;
}

}  // namespace

extern "C" {

const char* nlw_last_error(void) { return last_error.c_str(); }

const char* nlw_status_name(nlw_status status) {
  switch (status) {
    case NLW_OK: return "ok";
    case NLW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NLW_ERR_VALIDATION: return "validation failure";
    case NLW_ERR_NUMERICAL: return "numerical failure";
    case NLW_ERR_UNCONVERGED: return "unconverged";
    case NLW_ERR_DOMAIN: return "domain error";
    case NLW_ERR_RANGE: return "range error";
    case NLW_ERR_IO: return "i/o error";
    case NLW_ERR_CONDITIONING: return "ill-conditioned";
    case NLW_ERR_REFINEMENT: return "refinement failure";
    case NLW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nlw_version(void) {
  static const std::string v = nlwlab::experiment::version();
  return v.c_str();
}

nlw_status nlw_grid_create(int N, double h, double r_max, nlw_grid** out) {
  if (!out) return fail(NLW_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return guarded([&] {
    *out = new nlw_grid{nlwlab::make_grid(N, h, r_max)};
    return NLW_OK;
  });
}

void nlw_grid_destroy(nlw_grid* grid) { delete grid; }

nlw_status nlw_grid_size(const nlw_grid* grid, size_t* out) {
  if (!grid || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = grid->grid->size();
  return NLW_OK;
}

nlw_status nlw_grid_nodes(const nlw_grid* grid, double* out, size_t len) {
  if (!grid || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  if (len < grid->grid->size()) return fail(NLW_ERR_RANGE, "output array shorter than the grid");
  std::memcpy(out, grid->grid->nodes().data(), grid->grid->size() * sizeof(double));
  return NLW_OK;
}

nlw_status nlw_ground_state(int N, double r, double* W, double* LambdaW) {
  return guarded([&] {
    nlwlab::check_dimension(N, 3);
    nlwlab::require_domain(r >= 0.0, "radius must be nonnegative");
    if (W) *W = nlwlab::ground_state::W(N, r);
    if (LambdaW) *LambdaW = nlwlab::ground_state::LambdaW(N, r);
    return NLW_OK;
  });
}

nlw_status nlw_constants_on_grid(const nlw_grid* grid, nlw_constants* out) {
  if (!grid || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    fill(nlwlab::ground_state::compute_constants(*grid->grid), out);
    return NLW_OK;
  });
}

nlw_status nlw_constants_reference(int N, nlw_constants* out) {
  if (!out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    fill(nlwlab::ground_state::reference_constants(N), out);
    return NLW_OK;
  });
}

nlw_status nlw_config_create(nlw_config** out) {
  if (!out) return fail(NLW_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] {
    *out = new nlw_config{};
    return NLW_OK;
  });
}

nlw_status nlw_config_parse(const char* text, nlw_config** out) {
  if (!text || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new nlw_config{nlwlab::config::experiment_config::parse(text)};
    return NLW_OK;
  });
}

nlw_status nlw_config_load(const char* path, nlw_config** out) {
  if (!path || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new nlw_config{nlwlab::config::experiment_config::load(path)};
    return NLW_OK;
  });
}

void nlw_config_destroy(nlw_config* cfg) { delete cfg; }

nlw_status nlw_config_set(nlw_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.set(key, value);
    return NLW_OK;
  });
}

nlw_status nlw_config_get(const nlw_config* cfg, const char* key, char* buf, size_t len, size_t* needed) {
  if (!cfg || !key) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto v = cfg->cfg.get(key);
    if (!v) return fail(NLW_ERR_INVALID_ARGUMENT, "key not present");
    return copy_out(*v, buf, len, needed);
  });
}

nlw_status nlw_config_canonical(const nlw_config* cfg, char* buf, size_t len, size_t* needed) {
  if (!cfg) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return copy_out(cfg->cfg.canonical(), buf, len, needed); });
}

nlw_status nlw_config_hash(const nlw_config* cfg, char out[65]) {
  if (!cfg || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    copy_hash(cfg->cfg.hash(), out);
    return NLW_OK;
  });
}

nlw_status nlw_config_validate(const nlw_config* cfg, size_t* count, char* buf, size_t len, size_t* needed) {
  if (!cfg) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto issues = nlwlab::config::validate(cfg->cfg);
    if (count) *count = issues.size();
    std::string text;
    for (const auto& i : issues) text += (text.empty() ? "" : "\n") + i;
    if (!buf && len == 0) {
      if (needed) *needed = text.size() + 1;
      return NLW_OK;
    }
    return copy_out(text, buf, len, needed);
  });
}

nlw_status nlw_run(const nlw_config* cfg, const char* out_dir, nlw_manifest** out) {
  if (!cfg || !out_dir || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* m = new nlw_manifest{nlwlab::experiment::run(cfg->cfg, out_dir)};
    *out = m;
    if (m->m.status != nlwlab::error_code::ok) last_error = m->m.message;
    return to_status(m->m.status);
  });
}

nlw_status nlw_manifest_read(const char* run_dir, nlw_manifest** out) {
  if (!run_dir || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new nlw_manifest{nlwlab::experiment::read_manifest(run_dir)};
    return NLW_OK;
  });
}

void nlw_manifest_destroy(nlw_manifest* m) { delete m; }

nlw_status nlw_manifest_status(const nlw_manifest* m) {
  if (!m) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return to_status(m->m.status);
}

nlw_status nlw_manifest_config_hash(const nlw_manifest* m, char out[65]) {
  if (!m || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  copy_hash(m->m.config_hash, out);
  return NLW_OK;
}

nlw_status nlw_manifest_kind(const nlw_manifest* m, char* buf, size_t len, size_t* needed) {
  if (!m) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  return copy_out(m->m.kind, buf, len, needed);
}

nlw_status nlw_manifest_file_count(const nlw_manifest* m, size_t* out) {
  if (!m || !out) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  *out = m->m.files.size();
  return NLW_OK;
}

nlw_status nlw_manifest_file(const nlw_manifest* m, size_t index, char* name, size_t name_len, char sha256[65]) {
  if (!m) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= m->m.files.size()) return fail(NLW_ERR_RANGE, "file index out of range");
  const auto& f = m->m.files[index];
  if (sha256) copy_hash(f.sha256, sha256);
  return name ? copy_out(f.name, name, name_len, nullptr) : NLW_OK;
}

nlw_status nlw_replay(const char* run_dir, const char* out_dir, int* match, nlw_manifest** out) {
  if (!run_dir || !out_dir || !match) return fail(NLW_ERR_INVALID_ARGUMENT, "null argument");
  if (out) *out = nullptr;
  return guarded([&] {
    const auto r = nlwlab::experiment::replay(run_dir, out_dir);
    *match = r.outputs_match ? 1 : 0;
    if (out) *out = new nlw_manifest{r.rerun};
    if (!r.outputs_match) {
      std::string names;
      for (const auto& n : r.mismatched) names += (names.empty() ? "" : ", ") + n;
      last_error = "replay outputs differ: " + names;
    }
    return NLW_OK;
  });
}

nlw_status nlw_list_presets(char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    std::string text;
    for (const auto& p : nlwlab::experiment::list_presets())
      text += p.name + "\t" + p.keys + "\t" + p.description + "\n";
    return copy_out(text, buf, len, needed);
  });
}

}  // extern "C"
