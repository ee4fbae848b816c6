#pragma once

// Placement-design solvers:
//   solve_gcp              optimal independent-placement marginals (dual
//                          bisection / water filling)
//   solve_hcp              optimal hard-core operating point: exact maximizer
//                          of the closed-form hit lower bound, reported in
//                          the boundary-normalized radius convention
//   solve_hcp_closed_form  the Lambert-W stationarity system solved as a
//                          joint fixed point in (c, regime index); kept as a
//                          separate, falsifiable route
//   invert_retention       radius that achieves a requested thinning marginal
//   solve_mhc_b            radius inversion of the optimal independent
//                          marginals (hard-core variant B)
//   numeric_oracle_hcp     direct projected coordinate-ascent maximizer used
//                          as a cross-check oracle
//
// All solvers are deterministic and pure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "d2dcache/analytic.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/numerics.hpp"
#include "d2dcache/scenario.hpp"

namespace d2dcache {

// Optimal independent-placement marginals plus the dual variable at which the
// per-file water-filling rule meets the cache budget.
struct GcpSolution {
  std::vector<double> marginals;
  double mu_star = 0.0;
};

// Hard-core operating point: per-file retained intensities and exclusion
// radii, the budget multiplier, and the number of files in the concave
// (radius < R) regime.
struct HcpSolution {
  std::vector<double> retained_intensity;
  std::vector<double> radii;
  double c_star = 0.0;
  int m_c = 0;
};

namespace detail {

// Marginals induced by dual value mu: clamp(log(p * nu / mu) / nu, 0, 1).
inline std::vector<double> gcp_marginals_at(const std::vector<double>& pmf,
                                            double nu, double mu) {
  std::vector<double> q(pmf.size());
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    q[m] = std::clamp(std::log(pmf[m] * nu / mu) / nu, 0.0, 1.0);
  }
  return q;
}

// Water-filling dual bisection on the log scale.  The geometric first probe
// is exact whenever all files sit in the interior regime.
inline GcpSolution solve_gcp_raw(const std::vector<double>& pmf, double nu,
                                 int n_cap) {
  double p_min = pmf.front(), p_max = pmf.front();
  for (double p : pmf) {
    p_min = std::min(p_min, p);
    p_max = std::max(p_max, p);
  }
  double lo = p_min * nu * std::exp(-nu);  // below: every marginal is 1
  double hi = p_max * nu;                  // above: every marginal is 0
  const auto total = [&pmf, nu](double mu) {
    double s = 0.0;
    for (double p : pmf) {
      s += std::clamp(std::log(p * nu / mu) / nu, 0.0, 1.0);
    }
    return s;
  };
  GcpSolution out;
  double mu = lo;
  if (total(lo) <= static_cast<double>(n_cap) + 1e-10) {
    out.mu_star = lo;
    out.marginals = gcp_marginals_at(pmf, nu, lo);
    return out;
  }
  if (total(hi) > static_cast<double>(n_cap)) {
    throw solver_error("solve_gcp: failed to bracket the dual variable in [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  for (int it = 0; it < 500; ++it) {
    mu = std::sqrt(lo * hi);
    const double s = total(mu);
    if (std::abs(s - n_cap) <= 1e-10) break;
    if (s > n_cap) {
      lo = mu;
    } else {
      hi = mu;
    }
  }
  out.mu_star = mu;
  out.marginals = gcp_marginals_at(pmf, nu, mu);
  // Snap marginals that are within round-off of the regime thresholds.
  for (double& q : out.marginals) {
    if (q > 1.0 - 1e-10) q = 1.0;
    if (q < 1e-10) q = 0.0;
  }
  return out;
}

// Mean neighborhood load achieving thinning marginal p, via the closed-form
// Lambert-W inverse of (1 - e^(-c))/c = p with a bisection fallback.
inline double cbar_from_marginal(double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("invert_retention: marginal must be in (0, 1]");
  }
  if (p >= 1.0) return 0.0;
  const double inv_p = 1.0 / p;
  const double arg = -std::exp(-inv_p) / p;
  double cbar = inv_p + lambert_w0(std::max(arg, -kInvE));
  if (cbar < 0.0) cbar = 0.0;
  if (std::abs(retention_probability(cbar) - p) > 1e-9) {
    // Monotone bisection on the survival map as a safety net.
    double lo = 0.0, hi = 1.0;
    while (retention_probability(hi) > p && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (retention_probability(mid) > p) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    cbar = 0.5 * (lo + hi);
  }
  return cbar;
}

}  // namespace detail

// Exclusion radius whose thinning marginal equals `marginal`.  Radii beyond
// one million communication radii are reported as the sentinel value
// (sentinel_radius), signalling "effectively never placed".
inline double invert_retention(const ScenarioConfig& config, double marginal) {
  if (!(marginal > 0.0) || marginal > 1.0) {
    throw std::domain_error("invert_retention: marginal must be in (0, 1]");
  }
  if (marginal >= 1.0) return 0.0;
  const double cbar = detail::cbar_from_marginal(marginal);
  const double radius = std::sqrt(cbar / (config.intensity * kPi));
  const double cap = sentinel_radius(config);
  return radius > cap ? cap : radius;
}

// Optimal independent-placement marginals.  The degenerate full-catalog case
// (N = M) forces every marginal to 1.
inline GcpSolution solve_gcp(const ScenarioConfig& config,
                             const PopularityModel& popularity) {
  config.validate();
  const double nu = config.coverage_mean();
  if (config.cache_size == config.catalog_size) {
    GcpSolution out;
    out.marginals.assign(popularity.pmf.size(), 1.0);
    double cap = std::numeric_limits<double>::infinity();
    for (double p : popularity.pmf) {
      cap = std::min(cap, p * nu * std::exp(-nu));
    }
    out.mu_star = cap;
    return out;
  }
  return detail::solve_gcp_raw(popularity.pmf, nu, config.cache_size);
}

namespace detail {

// Working state for the hard-core bound maximizer.  Budget is expressed in
// expected-in-range-count units t = marginal * nu, where nu = lambda*pi*R^2;
// per-file budget caps at nu (marginal 1) and the total equals N * nu.
struct HcpSearch {
  double nu = 0.0;
  double budget = 0.0;
  double t_boundary = 0.0;   // t at which the reported radius equals R
  double t_dominated = 0.0;  // below this, the concave branch loses to the cap
  std::vector<double> pmf;

  double value(const std::vector<double>& t) const {
    double v = 0.0;
    for (std::size_t m = 0; m < pmf.size(); ++m) {
      v += pmf[m] * (t[m] <= t_boundary + 1e-15 ? t[m] : -std::expm1(-t[m]));
    }
    return v;
  }
};

// Solves sum over the k most popular files of clamp(log(p/eta), 0, nu) =
// budget for the water level eta; returns false when no level fits.
inline bool solve_water_level(const HcpSearch& s, int k, double budget,
                              double& eta_out) {
  if (budget > k * s.nu + 1e-12) return false;
  const auto filled = [&s, k](double eta) {
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      total += std::clamp(std::log(s.pmf[static_cast<std::size_t>(i)] / eta),
                          0.0, s.nu);
    }
    return total;
  };
  double p_min = s.pmf[static_cast<std::size_t>(k - 1)];
  double lo = std::log(p_min) - s.nu - 1.0;  // everything at the per-file cap
  double hi = std::log(s.pmf[0]);            // everything at zero
  if (filled(std::exp(lo)) < budget - 1e-12) return false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (filled(std::exp(mid)) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  eta_out = std::exp(0.5 * (lo + hi));
  return true;
}

inline std::vector<double> water_fill(const HcpSearch& s, int k, double eta) {
  std::vector<double> t(s.pmf.size(), 0.0);
  for (int i = 0; i < k; ++i) {
    t[static_cast<std::size_t>(i)] = std::clamp(
        std::log(s.pmf[static_cast<std::size_t>(i)] / eta), 0.0, s.nu);
  }
  return t;
}

}  // namespace detail

// Optimal hard-core operating point: maximizes the closed-form hit lower
// bound over feasible per-file budgets by enumerating regime structures
// (k files in the concave regime, j files capped at the regime boundary,
// at most one partially filled file), then snapping to the uniform split
// whenever it ties the best structure.  Radii are reported in the
// boundary-normalized convention in which a file capped at the regime
// boundary sits exactly at radius R.
inline HcpSolution solve_hcp(const ScenarioConfig& config,
                             const PopularityModel& popularity) {
  config.validate();
  const int m_count = config.catalog_size;
  const double nu = config.coverage_mean();
  const double lt = config.intensity;
  const double r_d2d = config.d2d_radius;

  HcpSolution out;
  if (config.cache_size == m_count) {
    out.retained_intensity.assign(static_cast<std::size_t>(m_count), lt);
    out.radii.assign(static_cast<std::size_t>(m_count), 0.0);
    out.c_star = 0.0;
    out.m_c = m_count;
    return out;
  }

  detail::HcpSearch s;
  s.nu = nu;
  s.budget = config.cache_size * nu;
  s.t_boundary = -std::expm1(-nu * nu) / nu;
  s.t_dominated = -std::log1p(-s.t_boundary);
  s.pmf = popularity.pmf;

  const double tb = s.t_boundary;
  double best_value = -1.0;
  std::vector<double> best_t;
  const auto consider = [&](const std::vector<double>& t) {
    const double v = s.value(t);
    if (v > best_value) {
      best_value = v;
      best_t = t;
    }
  };

  for (int k = 0; k <= m_count; ++k) {
    for (int j = 0; j + k <= m_count; ++j) {
      const double rem = s.budget - j * tb;
      if (rem < -1e-12) break;
      const int idx = k + j;
      if (k == 0) {
        const double tp = rem;
        if (tp > tb + 1e-12 || tp < -1e-12) continue;
        std::vector<double> t(static_cast<std::size_t>(m_count), 0.0);
        for (int i = 0; i < j; ++i) t[static_cast<std::size_t>(i)] = tb;
        if (idx < m_count && tp > 1e-15) {
          t[static_cast<std::size_t>(idx)] = std::clamp(tp, 0.0, tb);
        }
        consider(t);
        continue;
      }
      // Partial-file modes: empty, capped at the boundary, or balanced with
      // the concave water level.
      for (int mode = 0; mode < 3; ++mode) {
        double tp;
        if (mode == 0) {
          tp = 0.0;
        } else if (mode == 1) {
          if (idx >= m_count) continue;
          tp = tb;
        } else {
          if (idx >= m_count) continue;
          const double eta = s.pmf[static_cast<std::size_t>(idx)];
          std::vector<double> t = detail::water_fill(s, k, eta);
          double concave_total = 0.0;
          for (int i = 0; i < k; ++i) {
            concave_total += t[static_cast<std::size_t>(i)];
          }
          tp = rem - concave_total;
          if (tp < -1e-12 || tp > tb + 1e-12) continue;
          for (int i = k; i < k + j; ++i) t[static_cast<std::size_t>(i)] = tb;
          t[static_cast<std::size_t>(idx)] = std::clamp(tp, 0.0, tb);
          bool valid = true;
          for (int i = 0; i < k; ++i) {
            if (t[static_cast<std::size_t>(i)] < s.t_dominated - 1e-9) {
              valid = false;
              break;
            }
          }
          if (valid) consider(t);
          continue;
        }
        const double concave_budget = rem - tp;
        if (concave_budget <= 1e-15) continue;
        double eta;
        if (!detail::solve_water_level(s, k, concave_budget, eta)) continue;
        std::vector<double> t = detail::water_fill(s, k, eta);
        for (int i = k; i < k + j; ++i) t[static_cast<std::size_t>(i)] = tb;
        if (idx < m_count && tp > 0.0) t[static_cast<std::size_t>(idx)] = tp;
        bool valid = true;
        for (int i = 0; i < k; ++i) {
          if (t[static_cast<std::size_t>(i)] < s.t_dominated - 1e-9) {
            valid = false;
            break;
          }
        }
        if (valid) consider(t);
      }
    }
  }

  // Uniform split: preferred whenever it ties the enumerated optimum, which
  // keeps symmetric demand symmetric in the face of round-off.
  std::vector<double> uniform(static_cast<std::size_t>(m_count),
                              s.budget / m_count);
  if (s.value(uniform) >= best_value - 1e-12) {
    best_value = s.value(uniform);
    best_t = uniform;
  }

  if (best_t.empty()) {
    throw solver_error("solve_hcp: structure enumeration found no candidate");
  }

  out.retained_intensity.resize(static_cast<std::size_t>(m_count));
  out.radii.resize(static_cast<std::size_t>(m_count));
  const double sentinel = sentinel_radius(config);
  int concave_count = 0;
  double partial_popularity = 0.0;
  double interior_price = 0.0;
  for (int m = 0; m < m_count; ++m) {
    const std::size_t um = static_cast<std::size_t>(m);
    const double t = best_t[um];
    const double q = t / nu;
    out.retained_intensity[um] = q * lt;
    const bool capped = std::abs(t - tb) <= 1e-12;
    if (capped) {
      out.radii[um] = r_d2d;
    } else if (q >= 1.0 - 1e-15) {
      out.radii[um] = 0.0;
    } else if (q <= 1e-15) {
      out.radii[um] = sentinel;
      out.retained_intensity[um] = 0.0;
    } else {
      const double cbar = detail::cbar_from_marginal(q);
      const double r = r_d2d * std::pow(cbar / (nu * nu), 0.25);
      out.radii[um] = std::min(r, sentinel);
    }
    if (t > tb + 1e-12) {
      ++concave_count;
      if (t < nu - 1e-12) {
        interior_price =
            std::max(interior_price, s.pmf[um] * std::exp(-t));
      }
    } else if (!capped && t > 1e-15) {
      partial_popularity = std::max(partial_popularity, s.pmf[um]);
    }
  }
  out.m_c = concave_count;
  // Shadow price of cache budget at the solution: the linear rate of the
  // partially filled file when one exists, otherwise the concave water level.
  out.c_star = partial_popularity > 0.0 ? partial_popularity : interior_price;
  return out;
}

// Simulation-ready policy for a solve_hcp operating point: marginals from the
// retained intensities and exclusion radii in the direct thinning convention.
// Files capped at the regime boundary (reported radius exactly R) map to the
// exact thinning radius R * sqrt(nu); this assignment is analytic, so the
// regime classification of the resulting policy is stable even when that
// radius lands exactly on R.
inline PlacementPolicy hcp_policy(const ScenarioConfig& config,
                                  const HcpSolution& solution) {
  const double nu = config.coverage_mean();
  const double sentinel = sentinel_radius(config);
  PlacementPolicy policy;
  policy.kind = PolicyKind::MHC_A;
  const std::size_t m_count = solution.retained_intensity.size();
  policy.marginals.resize(m_count);
  std::vector<double> radii(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double q = solution.retained_intensity[m] / config.intensity;
    policy.marginals[m] = q;
    if (q <= 1e-15) {
      radii[m] = sentinel;
      policy.marginals[m] = 0.0;
    } else if (q >= 1.0 - 1e-15) {
      radii[m] = 0.0;
      policy.marginals[m] = 1.0;
    } else if (solution.radii[m] == config.d2d_radius) {
      radii[m] = config.d2d_radius * std::sqrt(nu);
    } else {
      radii[m] = invert_retention(config, q);
    }
  }
  policy.exclusion_radii = std::move(radii);
  policy.retained_intensity = solution.retained_intensity;
  return policy;
}

// Closed-form hit lower bound at a solve_hcp operating point, evaluated in
// the solver's reported radius convention.
inline double hcp_lower_bound_objective(const ScenarioConfig& config,
                                        const HcpSolution& solution) {
  PlacementPolicy policy;
  policy.kind = PolicyKind::MHC_A;
  policy.marginals.resize(solution.retained_intensity.size());
  for (std::size_t m = 0; m < policy.marginals.size(); ++m) {
    policy.marginals[m] = solution.retained_intensity[m] / config.intensity;
  }
  policy.exclusion_radii = solution.radii;
  policy.retained_intensity = solution.retained_intensity;
  return hit_mhc_a_bounds(config, policy).lower;
}

// Radius inversion of the optimal independent marginals: the hard-core
// variant that reproduces them exactly per file.
inline PlacementPolicy solve_mhc_b(const ScenarioConfig& config,
                                   const PopularityModel& popularity) {
  const GcpSolution gcp = solve_gcp(config, popularity);
  PlacementPolicy policy;
  policy.kind = PolicyKind::MHC_B;
  policy.marginals = gcp.marginals;
  const std::size_t m_count = gcp.marginals.size();
  std::vector<double> radii(m_count);
  std::vector<double> lam(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double q = gcp.marginals[m];
    lam[m] = q * config.intensity;
    radii[m] = q > 1e-15 ? invert_retention(config, q)
                         : sentinel_radius(config);
  }
  policy.exclusion_radii = std::move(radii);
  policy.retained_intensity = std::move(lam);
  return policy;
}

// The Lambert-W stationarity system solved as printed: intensities follow
// W0(c p) in the concave regime and c p in the linear regime, with c chosen
// so the budget binds, and the regime index recomputed from the implied radii
// until the joint fixed point stabilizes.  Some operating points cycle
// between regime indices; after 100 outer iterations this raises
// solver_error rather than returning an unconverged answer.
inline HcpSolution solve_hcp_closed_form(const ScenarioConfig& config,
                                         const PopularityModel& popularity) {
  config.validate();
  const int m_count = config.catalog_size;
  const double lt = config.intensity;
  const double budget = config.cache_size * lt;
  const std::vector<double>& pmf = popularity.pmf;
  const double sentinel = sentinel_radius(config);

  int m_c = 0;
  for (int outer = 0; outer < 100; ++outer) {
    // Budget residual as a function of c (monotone nondecreasing).
    const auto residual = [&pmf, m_c, budget](double c) {
      double s = c;
      for (int m = 0; m < m_c; ++m) {
        const double cp = c * pmf[static_cast<std::size_t>(m)];
        s += lambert_w0(cp) - cp;
      }
      return s - budget;
    };
    double c;
    if (m_c == 0) {
      c = budget;
    } else {
      double hi = std::max(budget, 1.0);
      int grow = 0;
      while (residual(hi) < 0.0 && grow++ < 200) hi *= 2.0;
      if (residual(hi) < 0.0) {
        throw solver_error("solve_hcp_closed_form: cannot bracket c");
      }
      c = find_root(residual, make_bracket(residual, 0.0, hi), 1e-12);
    }
    if (!(c > 0.0)) {
      throw infeasible_error("solve_hcp_closed_form: nonpositive budget constant");
    }
    HcpSolution out;
    out.retained_intensity.resize(static_cast<std::size_t>(m_count));
    out.radii.resize(static_cast<std::size_t>(m_count));
    out.c_star = c;
    out.m_c = m_c;
    int new_m_c = 0;
    for (int m = 0; m < m_count; ++m) {
      const std::size_t um = static_cast<std::size_t>(m);
      const double cp = c * pmf[um];
      const double lam = m < m_c ? lambert_w0(cp) : cp;
      out.retained_intensity[um] = lam;
      const double q = lam / lt;
      if (q > 1.0 + 1e-12) {
        throw infeasible_error(
            "solve_hcp_closed_form: stationarity yields marginal > 1");
      }
      if (q <= 1e-15) {
        out.radii[um] = sentinel;
      } else if (q >= 1.0) {
        out.radii[um] = 0.0;
      } else {
        out.radii[um] = invert_retention(config, q);
      }
      if (out.radii[um] < config.d2d_radius) ++new_m_c;
    }
    if (new_m_c == m_c) return out;
    m_c = new_m_c;
  }
  throw solver_error(
      "solve_hcp_closed_form: regime index did not stabilize in 100 iterations");
}

// Direct maximizer of the hit lower bound over feasible retained intensities
// (classification by the direct thinning radii), via projected coordinate
// ascent with exact elementary moves.  Serves as the independent cross-check
// for solve_hcp; radii in the result use the direct thinning convention.
inline HcpSolution numeric_oracle_hcp(const ScenarioConfig& config,
                                      const PopularityModel& popularity) {
  config.validate();
  const int m_count = config.catalog_size;
  const double nu = config.coverage_mean();
  const double lt = config.intensity;

  HcpSolution out;
  if (config.cache_size == m_count) {
    out.retained_intensity.assign(static_cast<std::size_t>(m_count), lt);
    out.radii.assign(static_cast<std::size_t>(m_count), 0.0);
    out.c_star = 0.0;
    out.m_c = m_count;
    return out;
  }

  const std::vector<double>& pmf = popularity.pmf;
  const double budget = config.cache_size * nu;
  const double t_cap = -std::expm1(-nu);  // boundary where the radius hits R
  const auto file_value = [&](int m, double t) {
    return pmf[static_cast<std::size_t>(m)] *
           (t <= t_cap + 1e-15 ? t : -std::expm1(-t));
  };

  std::vector<double> t(static_cast<std::size_t>(m_count), budget / m_count);
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 4 * m_count * m_count + 16) {
    improved = false;
    // Snap any file above the boundary down to it: the boundary is the
    // per-file value maximum, and the move frees budget.
    for (int m = 0; m < m_count; ++m) {
      double& tm = t[static_cast<std::size_t>(m)];
      if (tm > t_cap + 1e-15 && file_value(m, t_cap) > file_value(m, tm) + 1e-15) {
        tm = t_cap;
        improved = true;
      }
    }
    // Spend slack on the most popular unfilled files.
    double used = 0.0;
    for (double v : t) used += v;
    double slack = budget - used;
    for (int m = 0; m < m_count && slack > 1e-15; ++m) {
      double& tm = t[static_cast<std::size_t>(m)];
      if (tm < t_cap) {
        const double add = std::min(slack, t_cap - tm);
        tm += add;
        slack -= add;
        improved = true;
      }
    }
    // Transfer budget from a less popular linear file to a more popular
    // unfilled one (strictly improving: linear rates are the popularities).
    for (int b = 0; b < m_count; ++b) {
      double& t_b = t[static_cast<std::size_t>(b)];
      if (t_b >= t_cap - 1e-15) continue;
      for (int a = m_count - 1; a > b; --a) {
        double& t_a = t[static_cast<std::size_t>(a)];
        if (t_a <= 1e-15 || t_a > t_cap + 1e-15) continue;
        if (pmf[static_cast<std::size_t>(b)] <=
            pmf[static_cast<std::size_t>(a)] + 1e-15) {
          continue;
        }
        const double delta = std::min(t_a, t_cap - t_b);
        if (delta <= 1e-15) continue;
        t_a -= delta;
        t_b += delta;
        improved = true;
        if (t_b >= t_cap - 1e-15) break;
      }
    }
  }

  out.retained_intensity.resize(static_cast<std::size_t>(m_count));
  out.radii.resize(static_cast<std::size_t>(m_count));
  const double sentinel = sentinel_radius(config);
  double partial_popularity = 0.0;
  int concave_count = 0;
  for (int m = 0; m < m_count; ++m) {
    const std::size_t um = static_cast<std::size_t>(m);
    const double tm = t[um];
    const double q = tm / nu;
    out.retained_intensity[um] = q * lt;
    if (q <= 1e-15) {
      out.radii[um] = sentinel;
      out.retained_intensity[um] = 0.0;
    } else if (q >= 1.0 - 1e-15) {
      out.radii[um] = 0.0;
    } else if (std::abs(tm - t_cap) <= 1e-12) {
      // Boundary load nu corresponds exactly to the communication radius.
      out.radii[um] = config.d2d_radius;
    } else {
      out.radii[um] = invert_retention(config, q);
    }
    if (out.radii[um] < config.d2d_radius) ++concave_count;
    if (tm > 1e-15 && tm < t_cap - 1e-12) {
      partial_popularity = std::max(partial_popularity, pmf[um]);
    }
  }
  out.m_c = concave_count;
  out.c_star = partial_popularity;
  return out;
}

// Hit lower bound at a direct-convention operating point (classification by
// the direct thinning radii), used when scoring numeric_oracle_hcp output.
inline double oracle_objective(const ScenarioConfig& config,
                               const HcpSolution& solution) {
  return hcp_lower_bound_objective(config, solution);
}

}  // namespace d2dcache
