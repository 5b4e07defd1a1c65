#pragma once

#include <string>
#include <vector>

#include "nlwlab/config.hpp"
#include "nlwlab/errors.hpp"
#include "nlwlab/radial.hpp"

namespace nlwlab::experiment {

struct file_entry {
  std::string name;
  std::string sha256;
};

struct manifest {
  std::string config_hash;
  std::string version;
  std::string kind;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  error_code status = error_code::ok;  // ok, or unconverged for a completed run whose diagnostic did not settle
  std::string message;
  std::vector<file_entry> files;       // everything in the output directory except manifest.txt
};

// Validates, refuses a non-empty output directory, writes CSVs + config.ini + plot.txt + manifest.txt.
// On any exception the files written so far are removed before rethrowing.
manifest run(const config::experiment_config& cfg, const std::string& out_dir);

manifest read_manifest(const std::string& run_dir);

struct replay_result {
  manifest original;
  manifest rerun;
  bool outputs_match = false;
  std::vector<std::string> mismatched;  // file names whose hashes differ or are missing
};

// Re-executes run_dir/config.ini into out_dir after checking it against the stored hash.
replay_result replay(const std::string& run_dir, const std::string& out_dir);

struct preset_info {
  std::string name;
  std::string keys;  // data.* keys it reads
  std::string description;
  bool randomized = false;
};

std::vector<preset_info> list_presets();

// Initial data from the data.* keys on the given grid.
field_pair make_preset(const grid_ptr& grid, const config::experiment_config& cfg);

std::string version();

}  // namespace nlwlab::experiment
