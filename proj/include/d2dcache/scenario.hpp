#pragma once

// Model parameters, the Zipf demand law, and the Poisson coverage-number
// distribution.  Every other module consumes these types.  All types are
// immutable after construction and safe to share across threads.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "d2dcache/errors.hpp"

namespace d2dcache {

inline constexpr double kPi = 3.14159265358979323846;

// Global scenario parameters.
//   intensity          transmitter density per unit area (> 0)
//   d2d_radius         communication radius of the typical receiver (> 0)
//   catalog_size       number of files M (>= 1)
//   cache_size         slots per cache N, 1 <= N <= M (N = M is a degenerate
//                      corner where every marginal is forced to 1)
//   zipf_exponent      demand skewness (>= 0)
//   window_half_width  simulation window is [-D, D]^2 (> 0)
//   seed               root RNG seed
struct ScenarioConfig {
  double intensity = 1.0;
  double d2d_radius = 1.0;
  int catalog_size = 1;
  int cache_size = 1;
  double zipf_exponent = 0.0;
  double window_half_width = 10.0;
  std::uint64_t seed = 1;

  // Mean number of transmitters covering the typical receiver.
  double coverage_mean() const {
    return intensity * kPi * d2d_radius * d2d_radius;
  }

  void validate() const {
    if (!(intensity > 0.0)) throw config_error("intensity must be > 0");
    if (!(d2d_radius > 0.0)) throw config_error("d2d_radius must be > 0");
    if (catalog_size < 1) throw config_error("catalog_size must be >= 1");
    if (cache_size < 1) throw config_error("cache_size must be >= 1");
    if (cache_size > catalog_size) {
      throw config_error("cache_size must not exceed catalog_size");
    }
    if (!(zipf_exponent >= 0.0)) {
      throw config_error("zipf_exponent must be >= 0");
    }
    if (!(window_half_width > 0.0)) {
      throw config_error("window_half_width must be > 0");
    }
  }
};

// Normalized, nonincreasing demand distribution over the catalog.
struct PopularityModel {
  std::vector<double> pmf;
};

// Power-law popularity: pmf(n) proportional to n^(-gamma), normalized to 1.
inline PopularityModel zipf_pmf(int catalog_size, double zipf_exponent) {
  if (catalog_size < 1) {
    throw std::invalid_argument("zipf_pmf: catalog_size must be >= 1");
  }
  if (!(zipf_exponent >= 0.0)) {
    throw std::invalid_argument("zipf_pmf: zipf_exponent must be >= 0");
  }
  PopularityModel model;
  model.pmf.resize(static_cast<std::size_t>(catalog_size));
  double total = 0.0;
  for (int n = 1; n <= catalog_size; ++n) {
    const double w = std::pow(static_cast<double>(n), -zipf_exponent);
    model.pmf[static_cast<std::size_t>(n - 1)] = w;
    total += w;
  }
  for (double& w : model.pmf) w /= total;
  return model;
}

// P(exactly k transmitters cover the typical receiver): Poisson with mean
// intensity * pi * R^2, evaluated in log space so large k stays finite.
inline double coverage_number_pmf(const ScenarioConfig& config, int k) {
  if (k < 0) throw std::invalid_argument("coverage_number_pmf: k must be >= 0");
  const double mean = config.coverage_mean();
  if (k == 0) return std::exp(-mean);
  if (mean == 0.0) return 0.0;
  const double log_p =
      static_cast<double>(k) * std::log(mean) - mean - std::lgamma(k + 1.0);
  return std::exp(log_p);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text);

template <>
inline double parse_number<double>(const std::string& key,
                                   const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw config_error("scenario: bad numeric value for '" + key + "'");
  }
  if (pos != text.size()) {
    throw config_error("scenario: trailing characters in value for '" + key +
                       "'");
  }
  return v;
}

template <>
inline std::uint64_t parse_number<std::uint64_t>(const std::string& key,
                                                 const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw config_error("scenario: bad unsigned value for '" + key + "'");
  }
  if (pos != text.size()) {
    throw config_error("scenario: trailing characters in value for '" + key +
                       "'");
  }
  return static_cast<std::uint64_t>(v);
}

template <>
inline int parse_number<int>(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw config_error("scenario: bad integer value for '" + key + "'");
  }
  if (pos != text.size()) {
    throw config_error("scenario: trailing characters in value for '" + key +
                       "'");
  }
  return v;
}

}  // namespace detail

// Parses the flat `key = value` scenario format ('#' starts a comment).
// Every field must appear exactly once; unknown or duplicate keys are errors.
inline ScenarioConfig parse_scenario(std::istream& in) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("scenario: line " + std::to_string(line_no) +
                         " is not a key = value pair");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error("scenario: line " + std::to_string(line_no) +
                         " has an empty key or value");
    }
    if (!seen.insert(key).second) {
      throw config_error("scenario: duplicate key '" + key + "'");
    }
    if (key == "intensity") {
      cfg.intensity = detail::parse_number<double>(key, value);
    } else if (key == "d2d_radius") {
      cfg.d2d_radius = detail::parse_number<double>(key, value);
    } else if (key == "catalog_size") {
      cfg.catalog_size = detail::parse_number<int>(key, value);
    } else if (key == "cache_size") {
      cfg.cache_size = detail::parse_number<int>(key, value);
    } else if (key == "zipf_exponent") {
      cfg.zipf_exponent = detail::parse_number<double>(key, value);
    } else if (key == "window_half_width") {
      cfg.window_half_width = detail::parse_number<double>(key, value);
    } else if (key == "seed") {
      cfg.seed = detail::parse_number<std::uint64_t>(key, value);
    } else {
      throw config_error("scenario: unknown key '" + key + "'");
    }
  }
  const char* required[] = {"intensity",     "d2d_radius",
                            "catalog_size",  "cache_size",
                            "zipf_exponent", "window_half_width",
                            "seed"};
  for (const char* key : required) {
    if (seen.find(key) == seen.end()) {
      throw config_error(std::string("scenario: missing key '") + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("scenario: cannot open file '" + path + "'");
  return parse_scenario(in);
}

}  // namespace d2dcache
