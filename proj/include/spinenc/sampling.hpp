#pragma once

// Seeded shot sampling and bootstrap error bars.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinenc/encodings.hpp"
#include "spinenc/errors.hpp"

namespace spinenc {

// SplitMix64: a Weyl counter through a fixed mixing function.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_{seed} {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct ShotResult {
  int width = 0;  // register width for printing (0: print raw indices)
  std::uint64_t nShots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t count(std::uint64_t index) const {
    auto it = counts.find(index);
    return it == counts.end() ? 0 : it->second;
  }
  double frequency(std::uint64_t index) const { return nShots ? static_cast<double>(count(index)) / nShots : 0.0; }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [idx, c] : counts) j[width > 0 ? Bitstring(width, idx).to_string() : std::to_string(idx)] = c;
    return j;
  }
};

namespace detail {
inline std::vector<double> cumulative(const Eigen::VectorXd& probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    require(probs(i) >= -1e-12, "sample_shots: negative probability");
    acc += std::max(0.0, probs(i));
    cdf[i] = acc;
  }
  require(std::abs(acc - 1.0) <= 1e-8, "sample_shots: probabilities do not sum to 1");
  return cdf;
}

inline std::uint64_t draw(const std::vector<double>& cdf, SplitMix64& rng) {
  const double u = rng.uniform() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  auto idx = static_cast<std::uint64_t>(it - cdf.begin());
  // u < cdf.back(), so the bin found has positive weight.
  return std::min<std::uint64_t>(idx, cdf.size() - 1);
}
}  // namespace detail

// Multinomial draw over basis probabilities (state |amp|^2 or density
// diagonal). Identical seed gives identical counts.
inline ShotResult sample_shots(const Eigen::VectorXd& probs, std::uint64_t nShots, std::uint64_t seed, int width = 0) {
  require(nShots >= 1, "sample_shots: nShots must be >= 1");
  const auto cdf = detail::cumulative(probs);
  SplitMix64 rng(seed);
  ShotResult out;
  out.width = width;
  out.nShots = nShots;
  for (std::uint64_t s = 0; s < nShots; ++s) ++out.counts[detail::draw(cdf, rng)];
  return out;
}

// Sample standard deviation of `statistic` over multinomial resamples of the
// empirical counts.
inline double bootstrap_std(const ShotResult& result, const std::function<double(const ShotResult&)>& statistic,
                            int nResamples = 1000, std::uint64_t seed = 0x5EEDULL) {
  require(result.nShots >= 1, "bootstrap_std: need at least one shot");
  require(nResamples >= 2, "bootstrap_std: need at least two resamples");
  std::vector<std::uint64_t> keys;
  Eigen::VectorXd probs(static_cast<Eigen::Index>(result.counts.size()));
  for (const auto& [k, c] : result.counts) {
    probs(static_cast<Eigen::Index>(keys.size())) = static_cast<double>(c) / result.nShots;
    keys.push_back(k);
  }
  const auto cdf = detail::cumulative(probs);
  SplitMix64 rng(seed);
  std::vector<double> values(nResamples);
  for (int r = 0; r < nResamples; ++r) {
    ShotResult re;
    re.width = result.width;
    re.nShots = result.nShots;
    for (std::uint64_t s = 0; s < result.nShots; ++s) ++re.counts[keys[detail::draw(cdf, rng)]];
    values[r] = statistic(re);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= nResamples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / (nResamples - 1));
}

}  // namespace spinenc
