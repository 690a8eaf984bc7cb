#include "snnevo/rng.hpp"

#include <cmath>
#include <numbers>

namespace snnevo {

double RngStream::next_gaussian() {
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace snnevo
