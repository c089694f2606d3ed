#include "tmech/uniformity.hpp"

#include "tmech/beacon.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <map>
#include <random>
#include <string>
#include <stdexcept>

namespace tmech {

UniformityResult beacon_uniformity(std::size_t trials, std::uint64_t seed,
                                   std::span<std::uint64_t const> adversarial_constants,
                                   double significance)
{
  if (trials == 0)
  {
    throw std::invalid_argument{"uniformity check needs at least one trial"};
  }
  UniformityResult r;
  r.trials       = trials;
  r.significance = significance;

  std::mt19937_64                              rng{seed};
  std::uniform_int_distribution<std::uint64_t> honest{0, std::uint64_t{1} << 63};

  std::map<AgentId, BeaconContribution> contributions;
  for (std::size_t i = 0; i < adversarial_constants.size(); ++i)
  {
    contributions["adversary-" + std::to_string(i)] = {adversarial_constants[i]};
  }
  for (std::size_t t = 0; t < trials; ++t)
  {
    contributions["honest"] = {honest(rng)};
    ++r.counts[aggregate(contributions).value % 64];
  }

  double const expected = static_cast<double>(trials) / 64.0;
  for (auto c : r.counts)
  {
    double const d = static_cast<double>(c) - expected;
    r.chi_square += d * d / expected;
  }
  boost::math::chi_squared const dist{63.0};
  r.p_value        = boost::math::cdf(boost::math::complement(dist, r.chi_square));
  r.critical_value = boost::math::quantile(boost::math::complement(dist, significance));
  return r;
}

}  // namespace tmech
