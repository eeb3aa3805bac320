#include "hetnet/quadrature.hpp"

#include <numbers>

namespace hetnet {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("must be > 0", "quadrature.rel_tol");
  if (!(abs_tol > 0.0)) throw ConfigError("must be > 0", "quadrature.abs_tol");
  if (max_subdivisions < 1) throw ConfigError("must be >= 1", "quadrature.max_subdivisions");
  if (!(tail_cutoff_epsilon > 0.0)) {
    throw ConfigError("must be > 0", "quadrature.tail_cutoff_epsilon");
  }
  if (ceiling_doublings < 1 || ceiling_doublings > 1000) {
    throw ConfigError("must lie in [1, 1000]", "quadrature.ceiling_doublings");
  }
}

double nearest_neighbor_scale(double lambda_ref) {
  if (!(lambda_ref > 0.0) || !std::isfinite(lambda_ref)) return 1.0;
  return 1.0 / std::sqrt(std::numbers::pi * lambda_ref);
}

}  // namespace hetnet
