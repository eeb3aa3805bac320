#pragma once

// Closed-form/quadrature evaluation of downlink coverage for K-tier networks
// mixing PPP and Poisson-cluster tiers under max-average-power association.
//
// The per-tier coverage probability is a single integral over the serving
// distance r. Its integrand multiplies
//   * the noise term exp(-tau N0 r^alpha / P_i),
//   * for each cluster tier j, the parent-PPP PGFL
//       exp(-2 pi lambda_pj int (1 - C_ji(r, z)) z dz),
//   * for the PPP tiers, exp(-pi r^2 sum_j lambda_j Pbar_ji^2 rho(tau_i, alpha)),
//   * and the density of a serving candidate at r: 2 pi lambda_i r for a PPP
//     tier, 2 pi lambda_pi mbar_i int f_i(r|z) C_ii(r, z) z dz (the parent
//     sum-product functional) for a cluster tier.
// Type 2 users add the representative cluster of tier q, whose center lies at
// a distance z0 drawn from the user kernel.

#include <cstddef>
#include <vector>

#include "hetnet/kernels.hpp"
#include "hetnet/network.hpp"

namespace hetnet {

/// P(SINR > tau_i, S_i) for Type 1 users. Throws ConfigError for Type 2 networks.
double coverage_tier_type1(const NetworkModel& net, const CoverageQuery& query,
                           std::size_t tier, RhoCache* cache = nullptr);

/// P(SINR > tau_i, S_i) for Type 2 users. Throws ConfigError for Type 1 networks.
double coverage_tier_type2(const NetworkModel& net, const CoverageQuery& query,
                           std::size_t tier, RhoCache* cache = nullptr);

/// Per-tier coverage for whichever user model `net` carries.
double coverage_tier(const NetworkModel& net, const CoverageQuery& query, std::size_t tier,
                     RhoCache* cache = nullptr);

/// P(S_i), as the coverage of tier i with every threshold and the noise at zero.
double association_probability(const NetworkModel& net, std::size_t tier,
                               const QuadratureConfig& quad = {});

/// Per-tier coverage terms, their sum, and the association probabilities.
CoverageResult coverage(const NetworkModel& net, const CoverageQuery& query,
                        RhoCache* cache = nullptr);

/// Parent distances from the origin, one list per tier (empty for PPP tiers).
using ParentDistances = std::vector<std::vector<double>>;

/// P(S_i | parents) for fixed parent point sets of the cluster tiers. For a
/// Type 2 user, the representative cluster center belongs in tier q's list.
double association_probability_given_parents(const NetworkModel& net, std::size_t tier,
                                             const ParentDistances& parents,
                                             const QuadratureConfig& quad = {});

/// Density of the serving distance given association with `tier` and the
/// parents. Throws DegenerateCondition when P(S_i | parents) < 1e-300.
double serving_distance_pdf_given_parents(const NetworkModel& net, std::size_t tier,
                                          const ParentDistances& parents, double r,
                                          const QuadratureConfig& quad = {});

/// Interference-limited coverage of an all-PPP network:
/// sum_i lambda_i P_i^(2/alpha) / (rho(tau_i, alpha) sum_j lambda_j P_j^(2/alpha)).
double coverage_ppp_closed_form(const std::vector<double>& lambdas,
                                const std::vector<double>& powers,
                                const std::vector<double>& taus, double alpha);

/// Equi-coverage rescaling: intensities divided by l^2, kernel lengths
/// (user kernel included) multiplied by l. Requires an interference-limited
/// network.
NetworkModel scale_network(const NetworkModel& net, double l);

}  // namespace hetnet
