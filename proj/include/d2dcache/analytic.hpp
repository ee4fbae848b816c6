#pragma once

// Closed-form probabilities, densities, and bounds for every placement
// strategy.  All functions are pure and reentrant.
//
// Model summary.  Caches form a planar Poisson process with the configured
// intensity.  A strategy assigns each file m a caching probability
// (marginal) and, for hard-core strategies, an exclusion radius r_m: the
// per-file cache locations then follow a dependent thinning in which a point
// survives only when it holds the lowest mark within r_m.  The survival
// probability at mean neighborhood load c = intensity * pi * r_m^2 is
// (1 - e^(-c)) / c, and the surviving (retained) intensity is that fraction
// of the full intensity.  Hit probabilities are evaluated for a receiver at
// the origin with communication radius R.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "d2dcache/errors.hpp"
#include "d2dcache/numerics.hpp"
#include "d2dcache/scenario.hpp"

namespace d2dcache {

enum class PolicyKind { MPC, GCP, MHC_A, MHC_B };

inline const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::MPC: return "MPC";
    case PolicyKind::GCP: return "GCP";
    case PolicyKind::MHC_A: return "MHC_A";
    case PolicyKind::MHC_B: return "MHC_B";
  }
  return "?";
}

// Per-file placement description.  For hard-core kinds the exclusion radii
// are present and the marginals equal the thinning survival probability at
// those radii; retained_intensity is marginal * intensity.
struct PlacementPolicy {
  PolicyKind kind = PolicyKind::GCP;
  std::vector<double> marginals;
  std::optional<std::vector<double>> exclusion_radii;
  std::optional<std::vector<double>> retained_intensity;
};

// Closed-form lower/upper hit-probability values; `exact` is set when the
// two coincide analytically.  `clamped` records that a linear-regime term
// exceeded probability 1 and was clamped (diagnostic, not an error).
struct AnalyticBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;
  bool clamped = false;
};

// Radius reported for files that are never placed (marginal 0).
inline double sentinel_radius(const ScenarioConfig& config) {
  return 1e6 * config.d2d_radius;
}

// Thinning survival probability (1 - e^(-c)) / c at mean neighborhood load c,
// with the c -> 0 limit equal to 1.
inline double retention_probability(double cbar) {
  if (cbar < 0.0) throw std::domain_error("retention_probability: c < 0");
  if (cbar == 0.0) return 1.0;
  return -std::expm1(-cbar) / cbar;
}

// Mean neighborhood load c = intensity * pi * r^2 for an exclusion radius r.
inline double neighborhood_load(const ScenarioConfig& config, double radius) {
  return config.intensity * kPi * radius * radius;
}

// Retained (surviving) intensity for a file with exclusion radius r.
inline double retained_intensity_at(const ScenarioConfig& config,
                                    double radius) {
  return retention_probability(neighborhood_load(config, radius)) *
         config.intensity;
}

// Builds a hard-core policy from exclusion radii; marginals and retained
// intensities follow from the survival probability.
inline PlacementPolicy policy_from_radii(const ScenarioConfig& config,
                                         PolicyKind kind,
                                         const std::vector<double>& radii) {
  PlacementPolicy policy;
  policy.kind = kind;
  policy.exclusion_radii = radii;
  policy.marginals.resize(radii.size());
  std::vector<double> lam(radii.size());
  for (std::size_t m = 0; m < radii.size(); ++m) {
    policy.marginals[m] =
        retention_probability(neighborhood_load(config, radii[m]));
    lam[m] = policy.marginals[m] * config.intensity;
  }
  policy.retained_intensity = std::move(lam);
  return policy;
}

inline PlacementPolicy make_mpc_policy(const ScenarioConfig& config) {
  PlacementPolicy policy;
  policy.kind = PolicyKind::MPC;
  policy.marginals.assign(static_cast<std::size_t>(config.catalog_size), 0.0);
  for (int m = 0; m < config.cache_size; ++m) {
    policy.marginals[static_cast<std::size_t>(m)] = 1.0;
  }
  return policy;
}

inline PlacementPolicy make_gcp_policy(const ScenarioConfig& config,
                                       std::vector<double> marginals) {
  (void)config;
  PlacementPolicy policy;
  policy.kind = PolicyKind::GCP;
  policy.marginals = std::move(marginals);
  return policy;
}

// Opt-in consistency check: marginal/radius agreement to 1e-9, cache-budget
// feasibility, and intensity consistency.  Kept separate from the bound
// evaluators so externally supplied (e.g. rounded) operating points can still
// be scored.
inline void validate_policy(const ScenarioConfig& config,
                            const PlacementPolicy& policy) {
  const std::size_t m_count = policy.marginals.size();
  if (m_count != static_cast<std::size_t>(config.catalog_size)) {
    throw config_error("policy: marginal count does not match catalog size");
  }
  double total = 0.0;
  for (double q : policy.marginals) {
    if (q < -1e-12 || q > 1.0 + 1e-12) {
      throw config_error("policy: marginal outside [0, 1]");
    }
    total += q;
  }
  if (total > config.cache_size + 1e-9) {
    throw config_error("policy: marginals exceed the relaxed cache budget");
  }
  if (policy.exclusion_radii) {
    if (policy.exclusion_radii->size() != m_count) {
      throw config_error("policy: radius count does not match catalog size");
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      const double r = (*policy.exclusion_radii)[m];
      if (r < 0.0) throw config_error("policy: negative exclusion radius");
      const double q = retention_probability(neighborhood_load(config, r));
      // Sentinel radii stand in for "never placed"; skip the consistency
      // check when the marginal is (numerically) zero.
      if (policy.marginals[m] <= 1e-12 && r >= sentinel_radius(config)) {
        continue;
      }
      if (std::abs(q - policy.marginals[m]) > 1e-9) {
        throw config_error("policy: marginal inconsistent with radius for file " +
                           std::to_string(m + 1));
      }
    }
  }
  if (policy.retained_intensity) {
    if (policy.retained_intensity->size() != m_count) {
      throw config_error("policy: intensity count does not match catalog size");
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      if (std::abs((*policy.retained_intensity)[m] -
                   policy.marginals[m] * config.intensity) >
          1e-9 * std::max(1.0, config.intensity)) {
        throw config_error("policy: retained intensity inconsistent for file " +
                           std::to_string(m + 1));
      }
    }
  }
}

// Hit probability when every cache stores the N most popular files: the
// receiver succeeds iff it is covered at all and requested a top-N file.
inline AnalyticBounds hit_mpc(const ScenarioConfig& config,
                              const PopularityModel& popularity) {
  const double coverage = -std::expm1(-config.coverage_mean());
  double top = 0.0;
  for (int m = 0; m < config.cache_size; ++m) {
    top += popularity.pmf[static_cast<std::size_t>(m)];
  }
  AnalyticBounds out;
  out.lower = out.upper = coverage * top;
  out.exact = out.lower;
  return out;
}

// Hit probability under independent placement with the given marginals: the
// caches holding file m form a Poisson process of intensity marginal * lambda.
inline AnalyticBounds hit_gcp(const ScenarioConfig& config,
                              const std::vector<double>& marginals) {
  const PopularityModel pop =
      zipf_pmf(config.catalog_size, config.zipf_exponent);
  const double nu = config.coverage_mean();
  double value = 0.0;
  for (std::size_t m = 0; m < marginals.size(); ++m) {
    value += pop.pmf[m] * (-std::expm1(-marginals[m] * nu));
  }
  AnalyticBounds out;
  out.lower = out.upper = value;
  out.exact = value;
  return out;
}

// Pairwise density of same-file retained caches at separation r for a file
// with exclusion radius r_m: zero inside the hard core, a transition formula
// on (r_m, 2 r_m) driven by the two-disk union area, and the squared retained
// intensity beyond 2 r_m where exclusion zones cannot interact.
inline double second_order_product_density(const ScenarioConfig& config,
                                           double r_m, double r) {
  if (!(r_m > 0.0)) {
    throw std::domain_error("second_order_product_density: r_m must be > 0");
  }
  if (r < 0.0) {
    throw std::domain_error("second_order_product_density: r must be >= 0");
  }
  const double lt = config.intensity;
  const double a = kPi * r_m * r_m;
  const double lam = retention_probability(lt * a) * lt;
  if (r <= r_m) return 0.0;
  if (r >= 2.0 * r_m) return lam * lam;
  const double the = r / (2.0 * r_m);
  const double v = 2.0 * a - 2.0 * r_m * r_m * std::acos(the) +
                   0.5 * r * std::sqrt(4.0 * r_m * r_m - r * r);
  const double num =
      2.0 * v * (-std::expm1(-lt * a)) - 2.0 * a * (-std::expm1(-lt * v));
  return num / (a * v * (v - a));
}

// Mean number of same-file retained caches within distance R of a typical
// retained cache: the pair density integrated over the disk, divided by the
// process intensity.
inline double campbell_neighbor_count(const ScenarioConfig& config,
                                      double r_m) {
  if (!(r_m > 0.0)) {
    throw std::domain_error("campbell_neighbor_count: r_m must be > 0");
  }
  const double r_d2d = config.d2d_radius;
  if (r_d2d <= r_m) return 0.0;
  const double integral = integrate_radial(
      [&config, r_m](double r) {
        return second_order_product_density(config, r_m, r);
      },
      0.0, r_d2d, 1e-9, {r_m, 2.0 * r_m});
  return integral / config.intensity;
}

// Hit-probability bounds for a hard-core policy.  Files whose exclusion
// radius is below R contribute the void-probability (concave) term to both
// bounds, plus a pair-correction term to the upper bound; files at or above R
// can supply at most one cache inside the disk, so their hit term is the
// expected in-range retained count, clamped to 1.  The correction integral
// uses the polar area measure by default; `line_integral_correction` switches
// to the plain 1-D form for comparison.
inline AnalyticBounds hit_mhc_a_bounds(const ScenarioConfig& config,
                                       const PlacementPolicy& policy,
                                       bool line_integral_correction = false) {
  if (!policy.exclusion_radii) {
    throw config_error("hit_mhc_a_bounds: policy lacks exclusion radii");
  }
  const PopularityModel pop =
      zipf_pmf(config.catalog_size, config.zipf_exponent);
  const std::vector<double>& radii = *policy.exclusion_radii;
  const double r_d2d = config.d2d_radius;
  const double area = kPi * r_d2d * r_d2d;
  AnalyticBounds out;
  double lower = 0.0;
  double correction = 0.0;
  for (std::size_t m = 0; m < radii.size(); ++m) {
    const double lam = policy.retained_intensity
                           ? (*policy.retained_intensity)[m]
                           : policy.marginals[m] * config.intensity;
    const double expected_in_range = lam * area;
    if (radii[m] < r_d2d) {
      lower += pop.pmf[m] * (-std::expm1(-expected_in_range));
      if (lam > 0.0 && radii[m] > 0.0) {
        const double r_m = radii[m];
        const auto rho = [&config, r_m](double x) {
          return second_order_product_density(config, r_m, x);
        };
        const double integral =
            line_integral_correction
                ? integrate_interval(rho, r_m, r_d2d, 1e-9, {2.0 * r_m})
                : integrate_radial(rho, r_m, r_d2d, 1e-9, {2.0 * r_m});
        correction += pop.pmf[m] * integral / config.intensity;
      }
    } else {
      if (expected_in_range > 1.0) {
        out.clamped = true;
        lower += pop.pmf[m];
      } else {
        lower += pop.pmf[m] * expected_in_range;
      }
    }
  }
  out.lower = std::clamp(lower, 0.0, 1.0);
  out.upper = std::clamp(lower + correction, out.lower, 1.0);
  if (out.upper == out.lower) out.exact = out.lower;
  return out;
}

// Hit probability for the radius-inversion strategy that reproduces given
// independent-placement marginals under hard-core thinning.  Same regime
// split and clamping rule as hit_mhc_a_bounds, with retained intensity
// intensity * marginal by construction.
inline AnalyticBounds hit_mhc_b(const ScenarioConfig& config,
                                const std::vector<double>& marginals_gcp,
                                const std::vector<double>& radii_b) {
  if (marginals_gcp.size() != radii_b.size()) {
    throw config_error("hit_mhc_b: marginal/radius size mismatch");
  }
  const PopularityModel pop =
      zipf_pmf(config.catalog_size, config.zipf_exponent);
  const double nu = config.coverage_mean();
  AnalyticBounds out;
  double value = 0.0;
  for (std::size_t m = 0; m < radii_b.size(); ++m) {
    const double mass = marginals_gcp[m] * nu;
    if (radii_b[m] < config.d2d_radius) {
      value += pop.pmf[m] * (-std::expm1(-mass));
    } else if (mass > 1.0) {
      out.clamped = true;
      value += pop.pmf[m];
    } else {
      value += pop.pmf[m] * mass;
    }
  }
  out.lower = out.upper = std::clamp(value, 0.0, 1.0);
  out.exact = out.lower;
  return out;
}

// Mean fraction of cache slots inside the receiver disk actually filled by a
// hard-core policy.  Files with exclusion radius below R use the
// void-probability form rescaled from the exclusion disk to the receiver
// disk; wider files use the expected in-range retained count directly.
inline double underutilization_ratio(const ScenarioConfig& config,
                                     const PlacementPolicy& policy) {
  if (policy.kind != PolicyKind::MHC_A && policy.kind != PolicyKind::MHC_B) {
    throw config_error("underutilization_ratio: requires a hard-core policy");
  }
  if (!policy.exclusion_radii) {
    throw config_error("underutilization_ratio: policy lacks exclusion radii");
  }
  const std::vector<double>& radii = *policy.exclusion_radii;
  const double r_d2d = config.d2d_radius;
  const double disk_area = kPi * r_d2d * r_d2d;
  double stored = 0.0;
  for (std::size_t m = 0; m < radii.size(); ++m) {
    const double lam = policy.retained_intensity
                           ? (*policy.retained_intensity)[m]
                           : policy.marginals[m] * config.intensity;
    const double r = radii[m];
    if (r < r_d2d) {
      if (r < 1e-12) {
        stored += config.intensity * disk_area;
      } else {
        const double cbar = neighborhood_load(config, r);
        stored += (-std::expm1(-cbar)) * (r_d2d / r) * (r_d2d / r);
      }
    } else {
      stored += lam * disk_area;
    }
  }
  return stored / (config.cache_size * config.intensity * disk_area);
}

// Per-file check that a hard-core policy retains at least as much intensity
// as needed to dominate independent placement at the given marginals, plus
// the aggregate feasibility of the retained intensities.
struct SufficientConditionReport {
  std::vector<char> per_file;
  bool feasible = true;

  bool all() const {
    if (!feasible) return false;
    for (char c : per_file) {
      if (!c) return false;
    }
    return true;
  }
};

inline SufficientConditionReport sufficient_condition_holds(
    const ScenarioConfig& config, const PlacementPolicy& policy_mhc,
    const std::vector<double>& marginals_gcp) {
  if (!policy_mhc.exclusion_radii) {
    throw config_error("sufficient_condition_holds: policy lacks radii");
  }
  const std::vector<double>& radii = *policy_mhc.exclusion_radii;
  if (radii.size() != marginals_gcp.size()) {
    throw config_error("sufficient_condition_holds: size mismatch");
  }
  const double r_d2d = config.d2d_radius;
  const double disk_area = kPi * r_d2d * r_d2d;
  const double slack = 1e-9 * config.intensity;
  SufficientConditionReport report;
  report.per_file.resize(radii.size());
  double total = 0.0;
  for (std::size_t m = 0; m < radii.size(); ++m) {
    const double lam = policy_mhc.retained_intensity
                           ? (*policy_mhc.retained_intensity)[m]
                           : policy_mhc.marginals[m] * config.intensity;
    total += lam;
    double threshold;
    if (radii[m] < r_d2d) {
      threshold = config.intensity * marginals_gcp[m];
    } else {
      threshold =
          (-std::expm1(-config.intensity * marginals_gcp[m] * disk_area)) /
          disk_area;
    }
    report.per_file[m] = lam >= threshold - slack ? 1 : 0;
  }
  report.feasible =
      total <= config.cache_size * config.intensity + 1e-9 * config.intensity;
  return report;
}

// Stationary approximation to the per-unit-area variance of the retained
// count for a file with exclusion radius r_m.  Valid as a window-variance
// approximation once the window side is large relative to r_m.
inline double mhc_variance(const ScenarioConfig& config, double r_m) {
  if (!(r_m > 0.0)) throw std::domain_error("mhc_variance: r_m must be > 0");
  const double cbar = neighborhood_load(config, r_m);
  const double lam = retention_probability(cbar) * config.intensity;
  const double pair_integral = integrate_interval(
      [&config, r_m](double r) {
        return second_order_product_density(config, r_m, r) * r;
      },
      r_m, 2.0 * r_m, 1e-9);
  return lam - 4.0 * lam * (-std::expm1(-cbar)) + 2.0 * kPi * pair_integral;
}

}  // namespace d2dcache
