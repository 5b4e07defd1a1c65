#pragma once

#include <vector>

namespace nlwlab {

// (J, ι, 𝛌) with λ_J < … < λ₁.
struct soliton_config {
  std::vector<int> signs;
  std::vector<double> scales;

  std::size_t count() const { return scales.size(); }
  // max_j λ_j/λ_{j-1}; zero for a single soliton.
  double gamma() const;
  // Throws a domain error unless signs are ±1, scales positive and strictly decreasing.
  void validate() const;
};

}  // namespace nlwlab
