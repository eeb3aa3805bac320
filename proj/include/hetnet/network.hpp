#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hetnet/kernels.hpp"
#include "hetnet/quadrature.hpp"

namespace hetnet {

enum class TierKind { Poisson, Cluster };

/// One base-station tier: a homogeneous PPP, or a Poisson cluster process
/// with parent intensity `parent_lambda`, Poisson(mbar) members per cluster
/// and displacement law `kernel`. Intensities are per square meter, power in
/// watts.
struct TierSpec {
  TierKind kind = TierKind::Poisson;
  double lambda = 0.0;
  double parent_lambda = 0.0;
  double mbar = 0.0;
  OffspringKernel kernel;
  double power = 1.0;

  static TierSpec poisson(double lambda, double power);
  static TierSpec cluster(double parent_lambda, double mbar, OffspringKernel kernel,
                          double power);

  bool is_cluster() const noexcept { return kind == TierKind::Cluster; }
  /// Mean number of base stations per square meter.
  double mean_intensity() const noexcept {
    return is_cluster() ? parent_lambda * mbar : lambda;
  }
};

enum class UserType { Type1, Type2 };

/// Type1 users are independent of the base stations. Type2 users are
/// clustered around the parents of cluster tier `q`, displaced from their
/// center by `user_kernel` (tier q's kernel when unset).
struct UserModel {
  UserType type = UserType::Type1;
  std::size_t q = 0;
  std::optional<OffspringKernel> user_kernel;

  static UserModel type1() { return {}; }
  static UserModel type2(std::size_t q, std::optional<OffspringKernel> kernel = std::nullopt) {
    return {UserType::Type2, q, kernel};
  }
};

struct NetworkModel {
  std::vector<TierSpec> tiers;
  double alpha = 4.0;
  double noise = 0.0;
  UserModel user;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  std::size_t size() const noexcept { return tiers.size(); }
  /// (P_j / P_i)^(1/alpha)
  double pbar(std::size_t j, std::size_t i) const;
  /// Kernel of the typical Type2 user around its cluster center.
  OffspringKernel user_kernel() const;
};

struct CoverageQuery {
  std::vector<double> taus;  // per tier, linear scale
  QuadratureConfig quad;
  double z_truncation_multiplier = kDefaultTruncation;

  /// Same threshold for every tier.
  static CoverageQuery uniform(const NetworkModel& net, double tau, QuadratureConfig quad = {});
  void validate(const NetworkModel& net) const;
};

struct CoverageResult {
  std::vector<double> per_tier;     // P(SINR > tau_i, S_i)
  double total = 0.0;               // sum of per_tier
  std::vector<double> association;  // P(S_i)
};

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace hetnet
