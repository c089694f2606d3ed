#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace tmech {

// Chi-square check that the beacon output mod 64 is uniform when one contributor is
// honest (uniform on 0..2^63) and every other contributor submits a fixed constant.
struct UniformityResult
{
  std::size_t                   trials = 0;
  std::array<std::uint64_t, 64> counts{};
  double                        chi_square     = 0;
  double                        p_value        = 0;
  double                        critical_value = 0;  // at the requested significance
  double                        significance   = 0;

  bool passes() const noexcept { return p_value >= significance; }
};

UniformityResult beacon_uniformity(std::size_t trials, std::uint64_t seed,
                                   std::span<std::uint64_t const> adversarial_constants,
                                   double significance = 0.001);

}  // namespace tmech
