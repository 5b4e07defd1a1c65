#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlwlab::config {

// Flat "section.key = value" store. Text form:
//
//   kind = collide          # keys before any header belong to [run]
//   [grid]
//   N = 5
//
// Lists are comma separated.
class experiment_config {
 public:
  static experiment_config parse(const std::string& text);
  static experiment_config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key);
  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Typed access; a missing key without a fallback or a malformed value is a validation error.
  std::string str(const std::string& key, const std::optional<std::string>& fallback = {}) const;
  double real(const std::string& key, const std::optional<double>& fallback = {}) const;
  long integer(const std::string& key, const std::optional<long>& fallback = {}) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& key, const std::optional<std::vector<double>>& fallback = {}) const;
  std::vector<int> integers(const std::string& key, const std::optional<std::vector<int>>& fallback = {}) const;
  std::vector<std::string> words(const std::string& key, const std::optional<std::vector<std::string>>& fallback = {}) const;

  std::string kind() const { return str("run.kind", std::string()); }

  // Sections in lexical order, keys sorted within each; values trimmed. Equal configs give equal text.
  std::string canonical() const;
  std::string hash() const;  // SHA-256 of canonical(), hex

 private:
  std::map<std::string, std::string> entries_;
};

std::vector<std::string> kinds();
std::vector<std::string> presets();

// Every problem found, in a stable order; empty when the config can run.
std::vector<std::string> validate(const experiment_config& cfg);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

}  // namespace nlwlab::config
