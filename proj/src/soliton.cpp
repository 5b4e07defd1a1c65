#include "nlwlab/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "nlwlab/errors.hpp"

namespace nlwlab {

double soliton_config::gamma() const {
  double g = 0.0;
  for (std::size_t j = 1; j < scales.size(); ++j) g = std::max(g, scales[j] / scales[j - 1]);
  return g;
}

void soliton_config::validate() const {
  require_domain(!scales.empty(), "soliton configuration needs J >= 1");
  require_domain(signs.size() == scales.size(), "one sign per scale");
  for (int s : signs) require_domain(s == 1 || s == -1, "signs must be +1 or -1");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    require_domain(scales[j] > 0.0 && std::isfinite(scales[j]), "scales must be positive");
    if (j > 0) require_domain(scales[j] < scales[j - 1], "scales must be strictly decreasing");
  }
}

}  // namespace nlwlab
