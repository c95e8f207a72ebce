#pragma once

#include <compare>
#include <limits>

namespace terraroute {

// Path-cost accumulator carrying the rounding error of every addition in a
// second double (double-double). For the magnitudes that arise on planning
// grids the pair represents the running sum exactly, so two paths compare
// equal iff their real-valued sums are equal, and value() is the correctly
// rounded total.
//
// Requires IEEE round-to-nearest and no -ffast-math.
class CostSum {
 public:
  constexpr CostSum() = default;
  constexpr explicit CostSum(double value) : hi_(value) {}

  static constexpr CostSum infinity() { return CostSum(std::numeric_limits<double>::infinity()); }

  constexpr bool is_finite() const { return hi_ < std::numeric_limits<double>::infinity(); }

  // Returns this + term. `this` and `term` must be finite.
  constexpr CostSum plus(double term) const {
    const double s = hi_ + term;
    const double bb = s - hi_;
    const double err = (hi_ - (s - bb)) + (term - bb);
    const double e = err + lo_;
    CostSum out;
    out.hi_ = s + e;
    out.lo_ = e - (out.hi_ - s);
    return out;
  }

  constexpr CostSum& operator+=(double term) { return *this = plus(term); }

  constexpr double value() const { return hi_; }
  constexpr double residual() const { return lo_; }

  friend constexpr bool operator==(const CostSum&, const CostSum&) = default;
  friend constexpr std::partial_ordering operator<=>(const CostSum& a, const CostSum& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

}  // namespace terraroute
