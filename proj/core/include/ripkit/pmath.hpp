#pragma once

#include <cmath>

namespace ripkit {

// |x|^p with fast paths for the exponents the toolkit hits constantly.
inline double pow_abs(double x, double p) {
  x = std::abs(x);
  if (p == 2.0) return x * x;
  if (p == 1.0) return x;
  if (p == 3.0) return x * x * x;
  if (p == 1.5) return x * std::sqrt(x);
  if (p == 0.5) return std::sqrt(x);
  if (p == 4.0) {
    const double s = x * x;
    return s * s;
  }
  return std::pow(x, p);
}

}  // namespace ripkit
