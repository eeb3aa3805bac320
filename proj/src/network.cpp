#include "hetnet/network.hpp"

#include <cmath>
#include <string>

namespace hetnet {

TierSpec TierSpec::poisson(double lambda, double power) {
  TierSpec t;
  t.kind = TierKind::Poisson;
  t.lambda = lambda;
  t.power = power;
  return t;
}

TierSpec TierSpec::cluster(double parent_lambda, double mbar, OffspringKernel kernel,
                           double power) {
  TierSpec t;
  t.kind = TierKind::Cluster;
  t.parent_lambda = parent_lambda;
  t.mbar = mbar;
  t.kernel = kernel;
  t.power = power;
  return t;
}

void NetworkModel::validate() const {
  if (tiers.empty()) throw ConfigError("at least one tier is required", "network.tiers");
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw ConfigError("path-loss exponent must satisfy alpha > 2", "network.alpha");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw ConfigError("noise power must be finite and >= 0", "network.noise");
  }
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    const auto& t = tiers[k];
    const std::string where = "network.tiers[" + std::to_string(k) + "]";
    if (!(t.power > 0.0) || !std::isfinite(t.power)) {
      throw ConfigError("power must be positive", where + ".power");
    }
    if (t.is_cluster()) {
      if (!(t.parent_lambda >= 0.0) || !std::isfinite(t.parent_lambda)) {
        throw ConfigError("parent intensity must be >= 0", where + ".parent_density");
      }
      if (!(t.mbar >= 0.0) || !std::isfinite(t.mbar)) {
        throw ConfigError("mean cluster size must be >= 0", where + ".mbar");
      }
    } else if (!(t.lambda >= 0.0) || !std::isfinite(t.lambda)) {
      throw ConfigError("intensity must be >= 0", where + ".density");
    }
  }
  if (user.type == UserType::Type2) {
    if (user.q >= tiers.size()) throw ConfigError("tier index out of range", "network.user.q");
    if (!tiers[user.q].is_cluster()) {
      throw ConfigError("Type 2 users must be coupled to a cluster tier", "network.user.q");
    }
  }
}

double NetworkModel::pbar(std::size_t j, std::size_t i) const {
  return std::pow(tiers[j].power / tiers[i].power, 1.0 / alpha);
}

OffspringKernel NetworkModel::user_kernel() const {
  if (user.user_kernel) return *user.user_kernel;
  return tiers.at(user.q).kernel;
}

CoverageQuery CoverageQuery::uniform(const NetworkModel& net, double tau,
                                     QuadratureConfig quad) {
  CoverageQuery q;
  q.taus.assign(net.size(), tau);
  q.quad = quad;
  return q;
}

void CoverageQuery::validate(const NetworkModel& net) const {
  if (taus.size() != net.size()) {
    throw ConfigError("one threshold per tier is required", "query.taus");
  }
  for (double t : taus) {
    if (!(t >= 0.0)) throw ConfigError("thresholds must be >= 0", "query.taus");
  }
  if (!(z_truncation_multiplier > 0.0)) {
    throw ConfigError("must be > 0", "query.z_truncation_multiplier");
  }
  quad.validate();
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace hetnet
