#pragma once

#include <stdexcept>

namespace klic {

// Thrown when a channel gain falls outside every regime a layered scheme
// covers (the uncovered band is 6 - 4*sqrt(2) <= b^2 <= 3/2).
struct regime_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when an exhaustive enumeration would exceed the configured cap.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Slack for boundary-inclusive comparisons whose threshold is only available
// through floating-point round-off (square roots of non-dyadic values).
inline constexpr double kBoundaryTol = 1e-12;

}  // namespace klic
