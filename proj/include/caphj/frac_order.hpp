#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace caphj {

/// Order of the fractional time derivative, restricted to the open
/// interval (0,1). Construction fails outside it.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0) {
      throw std::invalid_argument(
          "alpha must lie strictly in (0,1), got " + std::to_string(alpha));
    }
  }

  double value() const { return alpha_; }

  friend bool operator==(FractionalOrder a, FractionalOrder b) {
    return a.alpha_ == b.alpha_;
  }

 private:
  double alpha_;
};

}  // namespace caphj
