#pragma once

// Monte-Carlo engine: buffered Poisson sampling, hard-core (lowest mark
// within radius) and independent placement, hit-rate estimation, and spatial
// diagnostics (pair density, dependence report, utilization).
//
// Reproducibility contract: every replication derives its own RNG streams
// from (seed, replication index, purpose), replications may run on any
// number of threads, and reductions are performed serially over
// index-addressed per-replication results, so output is identical for any
// thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>
#include <vector>

#include "d2dcache/analytic.hpp"
#include "d2dcache/errors.hpp"
#include "d2dcache/rng.hpp"
#include "d2dcache/scenario.hpp"

namespace d2dcache {

// A sampled pattern of cache locations.  Points cover the nominal window
// [-nominal_half_width, +nominal_half_width]^2 extended by `buffer` on every
// side; statistics are collected in the nominal window only, the buffer
// exists so distance-dependent thinning near the window edge is unbiased.
struct PointPattern {
  std::vector<double> xs;
  std::vector<double> ys;
  double nominal_half_width = 0.0;
  double buffer = 0.0;
  // Per point: file ids held, in placement order.
  std::vector<std::vector<std::int32_t>> cache_contents;

  std::size_t size() const { return xs.size(); }
  bool in_nominal_window(std::size_t i) const {
    return std::abs(xs[i]) <= nominal_half_width &&
           std::abs(ys[i]) <= nominal_half_width;
  }
};

struct SimOptions {
  bool enforce_capacity = true;
  // When a cache is full: false = it leaves the contention entirely (neither
  // receives nor suppresses); true = it keeps suppressing neighbors but
  // cannot receive.  Both readings of the capacity rule are simulated.
  bool full_cache_blocks = false;
  int threads = 0;  // 0 = hardware concurrency
};

struct HitEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
  // Per file: fraction of replications in which some in-range cache held it.
  std::vector<double> per_file_hit;
};

inline PointPattern sample_ppp(const ScenarioConfig& config,
                               std::mt19937_64& rng, double buffer = 0.0) {
  config.validate();
  PointPattern pattern;
  pattern.nominal_half_width = config.window_half_width;
  pattern.buffer = buffer;
  const double half = config.window_half_width + buffer;
  const double area = 4.0 * half * half;
  std::poisson_distribution<long long> count_dist(config.intensity * area);
  const long long n = count_dist(rng);
  std::uniform_real_distribution<double> coord(-half, half);
  pattern.xs.reserve(static_cast<std::size_t>(n));
  pattern.ys.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    pattern.xs.push_back(x);
    pattern.ys.push_back(y);
  }
  pattern.cache_contents.assign(static_cast<std::size_t>(n), {});
  return pattern;
}

namespace detail {

// Uniform-cell spatial hash over a subset of points; queries visit every
// point in the 3x3 cell neighborhood, which covers all points within one
// cell size of the query location.
class NeighborGrid {
 public:
  NeighborGrid(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::vector<std::uint32_t>& members, double cell)
      : xs_(xs), ys_(ys), cell_(cell > 0.0 ? cell : 1.0) {
    cells_.reserve(members.size());
    for (std::uint32_t idx : members) {
      cells_[key_of(xs_[idx], ys_[idx])].push_back(idx);
    }
  }

  template <typename Fn>
  void for_each_candidate(double x, double y, Fn&& fn) const {
    const std::int64_t cx = coord_key(x);
    const std::int64_t cy = coord_key(y);
    for (std::int64_t ix = cx - 1; ix <= cx + 1; ++ix) {
      for (std::int64_t iy = cy - 1; iy <= cy + 1; ++iy) {
        const auto it = cells_.find(pack(ix, iy));
        if (it == cells_.end()) continue;
        for (std::uint32_t idx : it->second) fn(idx);
      }
    }
  }

 private:
  std::int64_t coord_key(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
  }
  static std::uint64_t pack(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
  }
  std::uint64_t key_of(double x, double y) const {
    return pack(coord_key(x), coord_key(y));
  }

  const std::vector<double>& xs_;
  const std::vector<double>& ys_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace detail

// Lowest-mark-within-radius thinning over the given participant subset:
// participant i survives iff no other participant j with (mark_j, j)
// lexicographically below (mark_i, i) lies within `radius` (inclusive).
// The index tie-break makes the outcome deterministic even under duplicated
// marks.  radius <= 0 means no exclusion: everyone survives.
inline std::vector<std::uint32_t> retain_hardcore(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<std::uint32_t>& participants, double radius,
    const std::vector<double>& marks) {
  if (radius <= 0.0) return participants;
  const double r2 = radius * radius;
  detail::NeighborGrid grid(xs, ys, participants, radius);
  std::vector<std::uint32_t> retained;
  retained.reserve(participants.size());
  for (std::uint32_t i : participants) {
    bool survives = true;
    grid.for_each_candidate(xs[i], ys[i], [&](std::uint32_t j) {
      if (!survives || j == i) return;
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      if (dx * dx + dy * dy > r2) return;
      if (marks[j] < marks[i] || (marks[j] == marks[i] && j < i)) {
        survives = false;
      }
    });
    if (survives) retained.push_back(i);
  }
  return retained;
}

// Hard-core placement: files processed in decreasing popularity order; for
// each file every eligible point draws a fresh i.i.d. uniform mark and is
// retained iff it carries the lowest mark among eligible points within the
// file's exclusion radius.  Full caches follow SimOptions: by default they
// leave the contention entirely; with full_cache_blocks they keep
// suppressing but cannot receive.
inline PointPattern place_mhc(const ScenarioConfig& config,
                              const PointPattern& pattern,
                              const PlacementPolicy& policy,
                              const PopularityModel& popularity,
                              std::mt19937_64& rng,
                              const SimOptions& options = {}) {
  if (!policy.exclusion_radii.has_value()) {
    throw config_error("place_mhc: policy carries no exclusion radii");
  }
  const std::vector<double>& radii = *policy.exclusion_radii;
  if (radii.size() != policy.marginals.size()) {
    throw config_error("place_mhc: radii/marginals size mismatch");
  }
  PointPattern placed = pattern;
  const std::size_t n = placed.size();
  const int capacity = config.cache_size;
  std::vector<std::int32_t> load(n, 0);

  std::vector<std::size_t> order(policy.marginals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&popularity](std::size_t a, std::size_t b) {
                     return popularity.pmf[a] > popularity.pmf[b];
                   });

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> marks(n);
  std::vector<std::uint32_t> participants;
  participants.reserve(n);
  for (std::size_t f : order) {
    if (policy.marginals[f] <= 1e-15) continue;
    for (std::size_t i = 0; i < n; ++i) marks[i] = unit(rng);
    participants.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const bool has_room = load[i] < capacity;
      if (!options.enforce_capacity || has_room || options.full_cache_blocks) {
        participants.push_back(static_cast<std::uint32_t>(i));
      }
    }
    const std::vector<std::uint32_t> survivors = retain_hardcore(
        placed.xs, placed.ys, participants, radii[f], marks);
    for (std::uint32_t s : survivors) {
      if (options.enforce_capacity && load[s] >= capacity) continue;
      placed.cache_contents[s].push_back(static_cast<std::int32_t>(f));
      ++load[s];
    }
  }
  return placed;
}

// Independent placement via systematic-interval sampling: one uniform draw
// per point selects every file whose wrapped interval of length marginal[m]
// in the cumulative layout covers the draw.  Per-file inclusion probability
// equals the marginal exactly, and each point receives floor or ceil of the
// marginal total, so the cache budget binds exactly whenever the marginals
// sum to the cache size.
inline PointPattern place_independent(const ScenarioConfig& config,
                                      const PointPattern& pattern,
                                      const std::vector<double>& marginals,
                                      std::mt19937_64& rng) {
  double total = 0.0;
  for (double q : marginals) {
    if (q < -1e-12 || q > 1.0 + 1e-12) {
      throw config_error("place_independent: marginal outside [0, 1]");
    }
    total += q;
  }
  if (total > config.cache_size + 1e-9) {
    throw config_error("place_independent: marginals exceed the cache budget");
  }
  PointPattern placed = pattern;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> start(marginals.size());
  double cum = 0.0;
  for (std::size_t m = 0; m < marginals.size(); ++m) {
    start[m] = cum - std::floor(cum);
    cum += marginals[m];
  }
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const double u = unit(rng);
    auto& contents = placed.cache_contents[i];
    contents.clear();
    for (std::size_t m = 0; m < marginals.size(); ++m) {
      const double q = marginals[m];
      if (q <= 0.0) continue;
      const double lo = start[m];
      const double hi = lo + q;
      const bool inside = (u >= lo && u < hi) || (hi > 1.0 && u < hi - 1.0);
      if (inside) contents.push_back(static_cast<std::int32_t>(m));
    }
  }
  return placed;
}

// Deterministic placement of the cache_size most popular files everywhere.
inline PointPattern place_mpc(const ScenarioConfig& config,
                              const PointPattern& pattern) {
  PointPattern placed = pattern;
  const int top = std::min(config.cache_size, config.catalog_size);
  std::vector<std::int32_t> everything(static_cast<std::size_t>(top));
  std::iota(everything.begin(), everything.end(), 0);
  for (auto& contents : placed.cache_contents) contents = everything;
  return placed;
}

namespace detail {

inline PointPattern place_policy(const ScenarioConfig& config,
                                 const PointPattern& pattern,
                                 const PlacementPolicy& policy,
                                 const PopularityModel& popularity,
                                 std::mt19937_64& rng,
                                 const SimOptions& options) {
  switch (policy.kind) {
    case PolicyKind::MPC:
      return place_mpc(config, pattern);
    case PolicyKind::GCP:
      return place_independent(config, pattern, policy.marginals, rng);
    case PolicyKind::MHC_A:
    case PolicyKind::MHC_B:
      return place_mhc(config, pattern, policy, popularity, rng, options);
  }
  throw config_error("place_policy: unknown policy kind");
}

// Buffer width needed so thinning is unbiased throughout the nominal window:
// the largest exclusion radius among files that are actually placed.
inline double placement_buffer(const PlacementPolicy& policy) {
  if (!policy.exclusion_radii.has_value()) return 0.0;
  double buffer = 0.0;
  for (std::size_t m = 0; m < policy.marginals.size(); ++m) {
    if (policy.marginals[m] > 1e-15) {
      buffer = std::max(buffer, (*policy.exclusion_radii)[m]);
    }
  }
  return buffer;
}

inline std::size_t draw_request(const std::vector<double>& pmf, double u) {
  double cum = 0.0;
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    cum += pmf[m];
    if (u < cum) return m;
  }
  return pmf.size() - 1;
}

}  // namespace detail

// Monte-Carlo hit probability for a receiver at the origin.  Every
// replication resamples the pattern, the placement, and one request; the
// request hits iff some cache within d2d_radius of the origin holds the
// requested file.  per_file_hit[m] is the unconditional reachability rate of
// file m (evaluated every replication regardless of the sampled request).
inline HitEstimate estimate_hit(const ScenarioConfig& config,
                                const PopularityModel& popularity,
                                const PlacementPolicy& policy,
                                std::uint64_t replications,
                                std::uint64_t seed,
                                const SimOptions& options = {}) {
  config.validate();
  if (replications < 1) {
    throw config_error("estimate_hit: replications must be >= 1");
  }
  if (config.window_half_width < config.d2d_radius) {
    throw config_error(
        "estimate_hit: window_half_width must cover d2d_radius");
  }
  if (policy.marginals.size() != static_cast<std::size_t>(config.catalog_size)) {
    throw config_error("estimate_hit: policy size != catalog size");
  }
  const std::size_t m_count = policy.marginals.size();
  const std::size_t words = (m_count + 63) / 64;
  std::vector<std::uint64_t> reach(replications * words, 0);
  std::vector<std::uint8_t> hit(replications, 0);
  const double buffer = detail::placement_buffer(policy);
  const double radius2 = config.d2d_radius * config.d2d_radius;
  RngFactory factory{seed};

  parallel_for(
      replications,
      [&](std::uint64_t rep) {
        auto pattern_rng = factory.stream(rep, 0);
        const PointPattern pattern = sample_ppp(config, pattern_rng, buffer);
        auto placement_rng = factory.stream(rep, 1);
        const PointPattern placed = detail::place_policy(
            config, pattern, policy, popularity, placement_rng, options);
        auto request_rng = factory.stream(rep, 2);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t request =
            detail::draw_request(popularity.pmf, unit(request_rng));
        std::uint64_t* row = reach.data() + rep * words;
        for (std::size_t i = 0; i < placed.size(); ++i) {
          const double d2 =
              placed.xs[i] * placed.xs[i] + placed.ys[i] * placed.ys[i];
          if (d2 > radius2) continue;
          for (std::int32_t f : placed.cache_contents[i]) {
            row[static_cast<std::size_t>(f) >> 6] |=
                std::uint64_t{1} << (static_cast<std::size_t>(f) & 63);
          }
        }
        hit[rep] = (row[request >> 6] >> (request & 63)) & 1;
      },
      options.threads);

  HitEstimate estimate;
  estimate.replications = replications;
  std::uint64_t hits = 0;
  for (std::uint64_t rep = 0; rep < replications; ++rep) hits += hit[rep];
  estimate.mean = static_cast<double>(hits) / static_cast<double>(replications);
  estimate.std_error = std::sqrt(estimate.mean * (1.0 - estimate.mean) /
                                 static_cast<double>(replications));
  estimate.per_file_hit.assign(m_count, 0.0);
  for (std::size_t m = 0; m < m_count; ++m) {
    std::uint64_t count = 0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
      count += (reach[rep * words + (m >> 6)] >> (m & 63)) & 1;
    }
    estimate.per_file_hit[m] =
        static_cast<double>(count) / static_cast<double>(replications);
  }
  return estimate;
}

// Histogram estimate of the second-order product density of the hard-core
// retained process, with translation edge correction.
struct PairDensityEstimate {
  std::vector<double> r_lo;
  std::vector<double> r_hi;
  std::vector<double> empirical;
  std::vector<double> analytic;
  std::vector<double> std_error;
  std::uint64_t pair_count = 0;
  std::uint64_t replications = 0;
};

// Estimates the retained-pair density over [0, 3*hardcore_radius] from
// `replications` independent patterns.  Ordered pairs with both endpoints in
// the nominal window contribute weight 1/((L-|dx|)(L-|dy|)) (translation
// correction for the L x L window); the expectation of each bin total equals
// the radial integral of the pair density over the bin, so dividing by the
// annulus area yields the area-averaged density, and the analytic comparator
// is averaged the same way.
inline PairDensityEstimate empirical_pair_density(const ScenarioConfig& config,
                                                  double hardcore_radius,
                                                  std::uint64_t replications,
                                                  std::uint64_t seed,
                                                  int bins = 60,
                                                  int threads = 0) {
  config.validate();
  if (hardcore_radius <= 0.0) {
    throw config_error("empirical_pair_density: radius must be positive");
  }
  if (bins < 60) {
    throw config_error(
        "empirical_pair_density: need >= 60 bins so bin width <= radius/20");
  }
  const double r_max = 3.0 * hardcore_radius;
  const double width = r_max / bins;
  const double window_side = 2.0 * config.window_half_width;
  if (window_side <= r_max) {
    throw config_error("empirical_pair_density: window too small");
  }

  std::vector<std::vector<double>> rep_weight(
      replications, std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  std::vector<std::uint64_t> rep_pairs(replications, 0);
  RngFactory factory{seed};

  parallel_for(
      replications,
      [&](std::uint64_t rep) {
        auto pattern_rng = factory.stream(rep, 0);
        const PointPattern pattern =
            sample_ppp(config, pattern_rng, hardcore_radius);
        auto mark_rng = factory.stream(rep, 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> marks(pattern.size());
        for (double& v : marks) v = unit(mark_rng);
        std::vector<std::uint32_t> everyone(pattern.size());
        std::iota(everyone.begin(), everyone.end(), 0u);
        const std::vector<std::uint32_t> retained = retain_hardcore(
            pattern.xs, pattern.ys, everyone, hardcore_radius, marks);
        std::vector<std::uint32_t> core;
        core.reserve(retained.size());
        for (std::uint32_t idx : retained) {
          if (pattern.in_nominal_window(idx)) core.push_back(idx);
        }
        detail::NeighborGrid grid(pattern.xs, pattern.ys, core, r_max);
        auto& weights = rep_weight[rep];
        std::uint64_t pairs = 0;
        for (std::uint32_t i : core) {
          grid.for_each_candidate(pattern.xs[i], pattern.ys[i],
                                  [&](std::uint32_t j) {
            if (j == i) return;
            const double dx = pattern.xs[i] - pattern.xs[j];
            const double dy = pattern.ys[i] - pattern.ys[j];
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d >= r_max) return;
            const double gamma =
                (window_side - std::abs(dx)) * (window_side - std::abs(dy));
            int b = static_cast<int>(d / width);
            if (b >= bins) b = bins - 1;
            weights[static_cast<std::size_t>(b)] += 1.0 / gamma;
            ++pairs;
          });
        }
        rep_pairs[rep] = pairs;
      },
      threads);

  PairDensityEstimate out;
  out.replications = replications;
  out.r_lo.resize(static_cast<std::size_t>(bins));
  out.r_hi.resize(static_cast<std::size_t>(bins));
  out.empirical.resize(static_cast<std::size_t>(bins));
  out.analytic.resize(static_cast<std::size_t>(bins));
  out.std_error.resize(static_cast<std::size_t>(bins));
  for (std::uint64_t rep = 0; rep < replications; ++rep) {
    out.pair_count += rep_pairs[rep];
  }
  for (int b = 0; b < bins; ++b) {
    const std::size_t ub = static_cast<std::size_t>(b);
    const double lo = b * width;
    const double hi = (b + 1) * width;
    out.r_lo[ub] = lo;
    out.r_hi[ub] = hi;
    const double area = kPi * (hi * hi - lo * lo);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
      sum += rep_weight[rep][ub];
      sum_sq += rep_weight[rep][ub] * rep_weight[rep][ub];
    }
    const double n = static_cast<double>(replications);
    const double mean_rep = sum / n;
    const double var_rep =
        n > 1 ? std::max(0.0, (sum_sq - n * mean_rep * mean_rep) / (n - 1))
              : 0.0;
    out.empirical[ub] = mean_rep / area;
    out.std_error[ub] = std::sqrt(var_rep / n) / area;
    out.analytic[ub] =
        integrate_radial(
            [&](double r) {
              return second_order_product_density(config, hardcore_radius, r);
            },
            lo, hi, 1e-9,
            {hardcore_radius, 2.0 * hardcore_radius}) /
        area;
  }
  return out;
}

// Dependence diagnostics for a hard-core placement.
struct DependenceReport {
  std::uint64_t replications = 0;
  // Same-file retained pairs closer than the file's exclusion radius,
  // across all files and replications.  Must be zero.
  std::uint64_t co_retained_violations = 0;
  // Smallest same-file retained pair distance observed (probe file, within
  // twice its radius); +inf when no such pair was seen.
  double min_same_file_distance = std::numeric_limits<double>::infinity();
  int probe_file = -1;
  // Both-retained frequency among original-pattern pairs whose separation
  // lies in (radius, 2*radius] for the probe file, its Monte-Carlo standard
  // error, the pair-density prediction averaged over the same annulus, and
  // the squared retention marginal (the independence yardstick).
  std::uint64_t pairs_checked = 0;
  double joint_frequency = 0.0;
  double std_error = 0.0;
  double predicted_joint = 0.0;
  double product_of_marginals = 0.0;
};

// Verifies the hard-core property exactly and measures pairwise retention
// dependence at separations in (radius, 2*radius] for the most popular
// placed file, against both the pair-density prediction and the
// independence yardstick.  Placement runs with the supplied capacity
// options, so single-file policies give the cleanest comparison.
inline DependenceReport negative_dependence_check(
    const ScenarioConfig& config, const PlacementPolicy& policy,
    const PopularityModel& popularity, std::uint64_t replications,
    std::uint64_t seed, const SimOptions& options = {}) {
  config.validate();
  if (policy.kind != PolicyKind::MHC_A && policy.kind != PolicyKind::MHC_B) {
    throw config_error("negative_dependence_check: policy must be hard-core");
  }
  if (!policy.exclusion_radii.has_value()) {
    throw config_error("negative_dependence_check: policy carries no radii");
  }
  const std::vector<double>& radii = *policy.exclusion_radii;
  int probe = -1;
  for (std::size_t m = 0; m < policy.marginals.size(); ++m) {
    if (policy.marginals[m] > 1e-15 &&
        (probe < 0 ||
         policy.marginals[m] > policy.marginals[static_cast<std::size_t>(probe)])) {
      probe = static_cast<int>(m);
    }
  }
  DependenceReport report;
  report.replications = replications;
  report.probe_file = probe;
  if (probe < 0) return report;
  const double r_probe = radii[static_cast<std::size_t>(probe)];
  const double annulus_hi = 2.0 * r_probe;
  const double buffer = detail::placement_buffer(policy);

  struct RepStats {
    std::uint64_t violations = 0;
    double min_distance = std::numeric_limits<double>::infinity();
    std::uint64_t pairs = 0;
    std::uint64_t both = 0;
  };
  std::vector<RepStats> stats(replications);
  RngFactory factory{seed};

  parallel_for(
      replications,
      [&](std::uint64_t rep) {
        auto pattern_rng = factory.stream(rep, 0);
        const PointPattern pattern = sample_ppp(config, pattern_rng, buffer);
        auto placement_rng = factory.stream(rep, 1);
        const PointPattern placed = detail::place_policy(
            config, pattern, policy, popularity, placement_rng, options);
        RepStats& st = stats[rep];
        const std::size_t n = placed.size();
        // Retention flags per file for violation scanning.
        for (std::size_t m = 0; m < policy.marginals.size(); ++m) {
          if (policy.marginals[m] <= 1e-15) continue;
          const double r_f = radii[m];
          std::vector<std::uint32_t> holders;
          for (std::size_t i = 0; i < n; ++i) {
            for (std::int32_t f : placed.cache_contents[i]) {
              if (f == static_cast<std::int32_t>(m)) {
                holders.push_back(static_cast<std::uint32_t>(i));
                break;
              }
            }
          }
          detail::NeighborGrid grid(placed.xs, placed.ys, holders,
                                    std::max(r_f, 1e-300));
          const double r2 = r_f * r_f;
          for (std::uint32_t i : holders) {
            grid.for_each_candidate(placed.xs[i], placed.ys[i],
                                    [&](std::uint32_t j) {
              if (j <= i) return;
              const double dx = placed.xs[i] - placed.xs[j];
              const double dy = placed.ys[i] - placed.ys[j];
              const double d2 = dx * dx + dy * dy;
              if (d2 <= r2) ++st.violations;
              if (static_cast<int>(m) == probe) {
                st.min_distance = std::min(st.min_distance, std::sqrt(d2));
              }
            });
          }
        }
        // Probe-file joint retention over original pairs in the annulus.
        std::vector<char> holds(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::int32_t f : placed.cache_contents[i]) {
            if (f == probe) {
              holds[i] = 1;
              break;
            }
          }
        }
        std::vector<std::uint32_t> core;
        for (std::size_t i = 0; i < n; ++i) {
          if (placed.in_nominal_window(i)) {
            core.push_back(static_cast<std::uint32_t>(i));
          }
        }
        detail::NeighborGrid grid(placed.xs, placed.ys, core, annulus_hi);
        for (std::uint32_t i : core) {
          grid.for_each_candidate(placed.xs[i], placed.ys[i],
                                  [&](std::uint32_t j) {
            if (j <= i) return;
            const double dx = placed.xs[i] - placed.xs[j];
            const double dy = placed.ys[i] - placed.ys[j];
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d <= r_probe || d > annulus_hi) return;
            ++st.pairs;
            if (holds[i] && holds[j]) ++st.both;
          });
        }
      },
      options.threads);

  std::uint64_t pairs = 0, both = 0;
  for (const RepStats& st : stats) {
    report.co_retained_violations += st.violations;
    report.min_same_file_distance =
        std::min(report.min_same_file_distance, st.min_distance);
    pairs += st.pairs;
    both += st.both;
  }
  report.pairs_checked = pairs;
  if (pairs > 0) {
    const double joint = static_cast<double>(both) / static_cast<double>(pairs);
    report.joint_frequency = joint;
    // Linearized ratio standard error across replications.
    double ss = 0.0;
    for (const RepStats& st : stats) {
      const double resid =
          static_cast<double>(st.both) - joint * static_cast<double>(st.pairs);
      ss += resid * resid;
    }
    const double n = static_cast<double>(replications);
    report.std_error =
        std::sqrt(ss * (n / std::max(1.0, n - 1.0))) / static_cast<double>(pairs);
  }
  const double annulus_area =
      kPi * (annulus_hi * annulus_hi - r_probe * r_probe);
  report.predicted_joint =
      integrate_radial(
          [&](double r) {
            return second_order_product_density(config, r_probe, r);
          },
          r_probe, annulus_hi, 1e-9, {}) /
      annulus_area / (config.intensity * config.intensity);
  const double marginal =
      retention_probability(neighborhood_load(config, r_probe));
  report.product_of_marginals = marginal * marginal;
  return report;
}

struct UtilizationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t replications_used = 0;
};

// Empirical mean of (stored files) / (cache_size * point count) over the
// nominal window, pooled across replications: each replication contributes
// with weight equal to its point count, so sparse windows (which see fewer
// competitors and hold more) are not over-weighted and the estimate is free
// of the O(1/points) small-window bias of a plain mean of per-replication
// ratios.  Replications whose nominal window is empty are skipped.
inline UtilizationEstimate utilization_measure(const ScenarioConfig& config,
                                               const PlacementPolicy& policy,
                                               const PopularityModel& popularity,
                                               std::uint64_t replications,
                                               std::uint64_t seed,
                                               const SimOptions& options = {}) {
  config.validate();
  const double buffer = detail::placement_buffer(policy);
  std::vector<double> ratio(replications, -1.0);
  std::vector<double> weight(replications, 0.0);
  RngFactory factory{seed};
  parallel_for(
      replications,
      [&](std::uint64_t rep) {
        auto pattern_rng = factory.stream(rep, 0);
        const PointPattern pattern = sample_ppp(config, pattern_rng, buffer);
        auto placement_rng = factory.stream(rep, 1);
        const PointPattern placed = detail::place_policy(
            config, pattern, policy, popularity, placement_rng, options);
        std::uint64_t stored = 0, points = 0;
        for (std::size_t i = 0; i < placed.size(); ++i) {
          if (!placed.in_nominal_window(i)) continue;
          ++points;
          stored += placed.cache_contents[i].size();
        }
        if (points > 0) {
          ratio[rep] = static_cast<double>(stored) /
                       (static_cast<double>(config.cache_size) *
                        static_cast<double>(points));
          weight[rep] = static_cast<double>(points);
        }
      },
      options.threads);
  UtilizationEstimate out;
  double weight_sum = 0.0;
  double value_sum = 0.0;
  for (std::uint64_t rep = 0; rep < replications; ++rep) {
    if (ratio[rep] < 0.0) continue;
    ++out.replications_used;
    weight_sum += weight[rep];
    value_sum += weight[rep] * ratio[rep];
  }
  if (out.replications_used > 0 && weight_sum > 0.0) {
    out.mean = value_sum / weight_sum;
    if (out.replications_used > 1) {
      // Weighted replicate variance of the pooled ratio.
      double quad = 0.0;
      for (std::uint64_t rep = 0; rep < replications; ++rep) {
        if (ratio[rep] < 0.0) continue;
        const double centered = ratio[rep] - out.mean;
        quad += weight[rep] * weight[rep] * centered * centered;
      }
      out.std_error = std::sqrt(quad) / weight_sum;
    }
  }
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
inline double two_sample_ks_statistic(std::vector<double> a,
                                      std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw config_error("two_sample_ks_statistic: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value in both samples, so the
    // difference is evaluated only between jump points (ties count once).
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// One row per point: x, y, and the stored file ids (semicolon-separated).
inline void dump_realization(std::ostream& os, const PointPattern& pattern) {
  os << "x,y,files\n";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    os << pattern.xs[i] << ',' << pattern.ys[i] << ',';
    const auto& contents = pattern.cache_contents[i];
    for (std::size_t k = 0; k < contents.size(); ++k) {
      if (k) os << ';';
      os << contents[k];
    }
    os << '\n';
  }
}

}  // namespace d2dcache
