#include "dmisac/rng.hpp"

namespace dmisac {

double wrap_angle(double phi) {
  constexpr double kPi = 3.141592653589793238462643383279502884;
  double w = std::remainder(phi, 2.0 * kPi);  // in [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace dmisac
