#include "hetnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hetnet {
namespace {

constexpr double kPi = std::numbers::pi;

// Integral of f over [lo, hi] split at the breakpoints that fall inside.
template <class F>
double integrate_pieces(F&& f, double lo, double hi, std::vector<double> breaks,
                        const QuadratureConfig& cfg) {
  if (!(lo < hi)) return 0.0;
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0;
  double a = lo;
  for (double b : breaks) {
    if (b > a && b < hi) {
      sum += integrate_finite(f, a, b, cfg);
      a = b;
    }
  }
  return sum + integrate_finite(f, a, hi, cfg);
}

QuadratureConfig tightened(const QuadratureConfig& cfg, double factor) {
  QuadratureConfig out = cfg;
  out.rel_tol *= factor;
  out.abs_tol *= factor;
  return out;
}

// Evaluates the serving-distance integrand of one tier's coverage term. The
// outer r-integral runs at the query tolerance; z-integrals are held ten
// times tighter and the innermost distance integrals a hundred times tighter
// so that their error does not masquerade as integrand structure.
class TierIntegrand {
 public:
  TierIntegrand(const NetworkModel& net, const CoverageQuery& query, std::size_t tier,
                RhoCache& cache)
      : net_(net),
        tier_(tier),
        tau_(query.taus[tier]),
        trunc_(query.z_truncation_multiplier),
        middle_(tightened(query.quad, 0.1)),
        inner_(tightened(query.quad, 0.01)),
        type2_(net.user.type == UserType::Type2) {
    double ppp_weight = 0.0;
    for (std::size_t j = 0; j < net.size(); ++j) {
      const auto& t = net.tiers[j];
      if (!t.is_cluster()) {
        const double pb = net.pbar(j, tier);
        ppp_weight += t.lambda * pb * pb;
      }
    }
    ppp_exponent_ = kPi * ppp_weight * (tau_ > 0.0 ? rho(tau_, net.alpha, cache) : 1.0);
    if (type2_) user_kernel_ = net.user_kernel();
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    const auto& serving = net_.tiers[tier_];
    double log_g = -ppp_exponent_ * r * r;
    if (net_.noise > 0.0 && tau_ > 0.0) {
      log_g -= tau_ * net_.noise * path_loss_power(r, net_.alpha) / serving.power;
    }
    if (log_g < -745.0) return 0.0;
    for (std::size_t j = 0; j < net_.size(); ++j) {
      const auto& t = net_.tiers[j];
      if (!t.is_cluster() || t.parent_lambda == 0.0 || t.mbar == 0.0) continue;
      log_g -= 2.0 * kPi * t.parent_lambda * pgfl_integral(j, r);
      if (log_g < -745.0) return 0.0;
    }
    double g = std::exp(log_g);
    const std::size_t q = net_.user.q;

    if (!serving.is_cluster()) {
      if (type2_) g *= representative_factor(r);
      return g * 2.0 * kPi * serving.lambda * r;
    }
    if (type2_ && tier_ == q) {
      const double ordinary = serving.parent_lambda > 0.0
                                  ? 2.0 * kPi * serving.parent_lambda *
                                        sum_product_integral(r) *
                                        representative_factor(r)
                                  : 0.0;
      return g * serving.mbar * (representative_serving(r) + ordinary);
    }
    if (type2_) g *= representative_factor(r);
    return g * 2.0 * kPi * serving.parent_lambda * serving.mbar * sum_product_integral(r);
  }

  // Length scale of the serving distance, used to seed shell doubling.
  double r_scale() const {
    double weight = 0.0;
    for (std::size_t j = 0; j < net_.size(); ++j) {
      const double pb = net_.pbar(j, tier_);
      weight += net_.tiers[j].mean_intensity() * pb * pb;
    }
    double scale = nearest_neighbor_scale(weight);
    if (type2_) scale = weight > 0.0 ? std::min(scale, reach(user_kernel_)) : reach(user_kernel_);
    return scale;
  }

 private:
  double reach(const OffspringKernel& k) const {
    return k.is_gaussian() ? trunc_ * k.length() : k.length();
  }

  ClusterFactorArgs args(std::size_t j) const {
    const auto& t = net_.tiers[j];
    return {t.kernel, t.mbar, tau_, net_.alpha, net_.pbar(j, tier_)};
  }

  double exponent(const ClusterFactorArgs& a, double r, double z) const {
    return cluster_exponent(a, r, z, inner_, trunc_);
  }

  // int_0^inf (1 - C_{j,i}(r, z)) z dz
  double pgfl_integral(std::size_t j, double r) const {
    const auto a = args(j);
    const double edge = a.pbar * r;
    const double span = reach(a.kernel);
    auto f = [&](double z) { return -std::expm1(-exponent(a, r, z)) * z; };
    const double near_end = edge + span;
    double total = integrate_pieces(f, 0.0, near_end, {edge - span, edge}, middle_);
    if (tau_ > 0.0) total += integrate_semi_infinite(f, near_end, middle_, near_end);
    return total;
  }

  // int_0^inf f_i(r|z) C_{i,i}(r, z) z dz
  double sum_product_integral(double r) const {
    const auto a = args(tier_);
    const auto [lo, hi] = a.kernel.distance_support(r, trunc_);
    auto f = [&](double z) {
      return conditional_distance_pdf(a.kernel, r, z) * std::exp(-exponent(a, r, z)) * z;
    };
    return integrate_pieces(f, lo, hi, {a.kernel.kink(r)}, middle_);
  }

  // E[C_{q,i}(r, z0)] over the representative cluster center distance z0.
  double representative_factor(double r) const {
    const auto a = args(net_.user.q);
    const auto [lo, hi] = user_kernel_.distance_support(0.0, trunc_);
    const double edge = a.pbar * r;
    const double span = reach(a.kernel);
    auto f = [&](double z0) {
      return std::exp(-exponent(a, r, z0)) * conditional_distance_pdf(user_kernel_, z0, 0.0);
    };
    return integrate_pieces(f, lo, hi, {edge - span, edge, edge + span}, middle_);
  }

  // E[f_q(r|z0) C_{q,q}(r, z0)] over z0.
  double representative_serving(double r) const {
    const auto a = args(net_.user.q);
    const auto [ulo, uhi] = user_kernel_.distance_support(0.0, trunc_);
    const auto [klo, khi] = a.kernel.distance_support(r, trunc_);
    auto f = [&](double z0) {
      return conditional_distance_pdf(a.kernel, r, z0) * std::exp(-exponent(a, r, z0)) *
             conditional_distance_pdf(user_kernel_, z0, 0.0);
    };
    return integrate_pieces(f, std::max(ulo, klo), std::min(uhi, khi), {a.kernel.kink(r)},
                            middle_);
  }

  const NetworkModel& net_;
  std::size_t tier_;
  double tau_;
  double trunc_;
  QuadratureConfig middle_;
  QuadratureConfig inner_;
  bool type2_;
  OffspringKernel user_kernel_;
  double ppp_exponent_ = 0.0;
};

bool tier_is_empty(const NetworkModel& net, std::size_t i) {
  const auto& t = net.tiers[i];
  if (net.user.type == UserType::Type2 && i == net.user.q) return t.mbar == 0.0;
  return t.mean_intensity() == 0.0;
}

double tier_coverage(const NetworkModel& net, const CoverageQuery& query, std::size_t tier,
                     RhoCache* cache) {
  net.validate();
  query.validate(net);
  if (tier >= net.size()) throw ConfigError("tier index out of range", "tier");
  if (tier_is_empty(net, tier)) return 0.0;
  if (std::isinf(query.taus[tier])) return 0.0;
  RhoCache local;
  TierIntegrand integrand(net, query, tier, cache ? *cache : local);
  const double p = integrate_semi_infinite(integrand, 0.0, query.quad, integrand.r_scale());
  return std::clamp(p, 0.0, 1.0);
}

// Numerator of the conditional serving-distance density (association
// integrand of the conditional association probability).
class ConditionalServingIntegrand {
 public:
  ConditionalServingIntegrand(const NetworkModel& net, std::size_t tier,
                              const ParentDistances& parents, const QuadratureConfig& quad)
      : net_(net), tier_(tier), parents_(parents), quad_(tightened(quad, 0.01)) {
    for (std::size_t j = 0; j < net.size(); ++j) {
      if (!net.tiers[j].is_cluster()) {
        const double pb = net.pbar(j, tier);
        ppp_weight_ += net.tiers[j].lambda * pb * pb;
      }
    }
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    double log_g = -kPi * ppp_weight_ * r * r;
    for (std::size_t j = 0; j < net_.size(); ++j) {
      const auto& t = net_.tiers[j];
      if (log_g < -745.0) return 0.0;
      if (!t.is_cluster() || t.mbar == 0.0) continue;
      const double edge = net_.pbar(j, tier_) * r;
      double mass = 0.0;
      for (double z : parents_[j]) mass += conditional_distance_cdf(t.kernel, edge, z, quad_);
      log_g -= t.mbar * mass;
    }
    if (log_g < -745.0) return 0.0;
    const auto& s = net_.tiers[tier_];
    if (!s.is_cluster()) return std::exp(log_g) * 2.0 * kPi * s.lambda * r;
    double density = 0.0;
    for (double z : parents_[tier_]) density += conditional_distance_pdf(s.kernel, r, z);
    return std::exp(log_g) * s.mbar * density;
  }

  double r_scale() const {
    double weight = ppp_weight_;
    for (std::size_t j = 0; j < net_.size(); ++j) {
      if (net_.tiers[j].is_cluster()) {
        const double pb = net_.pbar(j, tier_);
        weight += net_.tiers[j].mean_intensity() * pb * pb;
      }
    }
    return nearest_neighbor_scale(weight);
  }

 private:
  const NetworkModel& net_;
  std::size_t tier_;
  const ParentDistances& parents_;
  QuadratureConfig quad_;
  double ppp_weight_ = 0.0;
};

void check_parents(const NetworkModel& net, std::size_t tier, const ParentDistances& parents) {
  net.validate();
  if (tier >= net.size()) throw ConfigError("tier index out of range", "tier");
  if (parents.size() != net.size()) {
    throw ConfigError("one parent list per tier is required", "parents");
  }
  for (const auto& list : parents) {
    for (double z : list) {
      if (!(z >= 0.0)) throw DomainError("parent distances must be non-negative");
    }
  }
}

}  // namespace

double coverage_tier_type1(const NetworkModel& net, const CoverageQuery& query,
                           std::size_t tier, RhoCache* cache) {
  if (net.user.type != UserType::Type1) {
    throw ConfigError("network carries a Type 2 user model", "network.user");
  }
  return tier_coverage(net, query, tier, cache);
}

double coverage_tier_type2(const NetworkModel& net, const CoverageQuery& query,
                           std::size_t tier, RhoCache* cache) {
  if (net.user.type != UserType::Type2) {
    throw ConfigError("network carries a Type 1 user model", "network.user");
  }
  return tier_coverage(net, query, tier, cache);
}

double coverage_tier(const NetworkModel& net, const CoverageQuery& query, std::size_t tier,
                     RhoCache* cache) {
  return tier_coverage(net, query, tier, cache);
}

double association_probability(const NetworkModel& net, std::size_t tier,
                               const QuadratureConfig& quad) {
  NetworkModel quiet = net;
  quiet.noise = 0.0;
  CoverageQuery query = CoverageQuery::uniform(quiet, 0.0, quad);
  return tier_coverage(quiet, query, tier, nullptr);
}

CoverageResult coverage(const NetworkModel& net, const CoverageQuery& query,
                        RhoCache* cache) {
  net.validate();
  query.validate(net);
  RhoCache local;
  RhoCache& rc = cache ? *cache : local;
  CoverageResult out;
  out.per_tier.reserve(net.size());
  out.association.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    out.per_tier.push_back(tier_coverage(net, query, i, &rc));
    out.total += out.per_tier.back();
    out.association.push_back(association_probability(net, i, query.quad));
  }
  return out;
}

double association_probability_given_parents(const NetworkModel& net, std::size_t tier,
                                             const ParentDistances& parents,
                                             const QuadratureConfig& quad) {
  check_parents(net, tier, parents);
  ConditionalServingIntegrand integrand(net, tier, parents, quad);
  return std::clamp(integrate_semi_infinite(integrand, 0.0, quad, integrand.r_scale()), 0.0,
                    1.0);
}

double serving_distance_pdf_given_parents(const NetworkModel& net, std::size_t tier,
                                          const ParentDistances& parents, double r,
                                          const QuadratureConfig& quad) {
  if (r < 0.0) throw DomainError("serving distance must be non-negative");
  const double p = association_probability_given_parents(net, tier, parents, quad);
  if (p < 1e-300) {
    throw DegenerateCondition("association with this tier has zero probability given the parents");
  }
  ConditionalServingIntegrand integrand(net, tier, parents, quad);
  return integrand(r) / p;
}

double coverage_ppp_closed_form(const std::vector<double>& lambdas,
                                const std::vector<double>& powers,
                                const std::vector<double>& taus, double alpha) {
  if (!(alpha > 2.0)) throw DomainError("path-loss exponent must exceed 2");
  if (lambdas.size() != powers.size() || lambdas.size() != taus.size()) {
    throw DomainError("closed form: mismatched tier vectors");
  }
  double denom = 0.0;
  std::vector<double> weights(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0 || !(powers[i] > 0.0)) throw DomainError("closed form: bad tier");
    weights[i] = lambdas[i] * std::pow(powers[i], 2.0 / alpha);
    denom += weights[i];
  }
  if (!(denom > 0.0)) throw DomainError("closed form: network has no base stations");
  double pc = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    pc += weights[i] / (denom * rho(taus[i], alpha));
  }
  return pc;
}

NetworkModel scale_network(const NetworkModel& net, double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("scale factor must be positive");
  if (net.noise != 0.0) {
    throw ConfigError("equi-coverage scaling needs an interference-limited network",
                      "network.noise");
  }
  NetworkModel out = net;
  const double area = l * l;
  for (auto& t : out.tiers) {
    t.lambda /= area;
    t.parent_lambda /= area;
    if (t.is_cluster()) t.kernel = t.kernel.scaled(l);
  }
  if (out.user.user_kernel) out.user.user_kernel = out.user.user_kernel->scaled(l);
  return out;
}

}  // namespace hetnet
