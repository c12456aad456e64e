#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>

namespace hjrec {

// Extended real: finite | +inf | -inf with a total order. NaN is rejected at
// construction so comparisons are always meaningful. Infinities exist so that
// min/max over an empty set have a value; the discrete engine never produces
// them, value iteration over set-valued maps may.
class xreal {
public:
  xreal() : v_(0.0) {}
  xreal(double v) : v_(v) {
    if (std::isnan(v)) throw std::invalid_argument("xreal: NaN is not an extended real");
  }

  static xreal pos_inf() { return xreal(std::numeric_limits<double>::infinity(), 0); }
  static xreal neg_inf() { return xreal(-std::numeric_limits<double>::infinity(), 0); }

  bool finite() const { return std::isfinite(v_); }
  double value() const {
    if (!finite()) throw std::domain_error("xreal: value() on an infinity");
    return v_;
  }
  // raw double, infinities included; callers that can consume IEEE inf use this
  double raw() const { return v_; }

  friend bool operator<(const xreal& a, const xreal& b) { return a.v_ < b.v_; }
  friend bool operator>(const xreal& a, const xreal& b) { return a.v_ > b.v_; }
  friend bool operator<=(const xreal& a, const xreal& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const xreal& a, const xreal& b) { return a.v_ >= b.v_; }
  friend bool operator==(const xreal& a, const xreal& b) { return a.v_ == b.v_; }
  friend bool operator!=(const xreal& a, const xreal& b) { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const xreal& x) {
    if (x.v_ == std::numeric_limits<double>::infinity()) return os << "+inf";
    if (x.v_ == -std::numeric_limits<double>::infinity()) return os << "-inf";
    return os << x.v_;
  }

private:
  xreal(double v, int) : v_(v) {}  // unchecked, for the infinity tags
  double v_;
};

// min/max over possibly empty ranges; empty min is +inf, empty max is -inf
inline xreal min_over(std::span<const xreal> xs) {
  xreal m = xreal::pos_inf();
  for (const auto& x : xs)
    if (x < m) m = x;
  return m;
}

inline xreal max_over(std::span<const xreal> xs) {
  xreal m = xreal::neg_inf();
  for (const auto& x : xs)
    if (x > m) m = x;
  return m;
}

}  // namespace hjrec
