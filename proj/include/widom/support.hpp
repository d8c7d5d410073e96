#pragma once

#include <string>
#include <variant>

#include "widom/polynomial.hpp"

namespace widom {

struct Interval {
  double a;
  double b;
};

/// K_gamma = { e^{i theta} : theta in [pi - gamma, pi + gamma] }, 0 < gamma < pi.
struct CircularArc {
  double gamma;
};

struct UnitCircle {};

/// Q^{-1}([-1, 1]) for a real polynomial Q.
struct PreimageReal {
  Polynomial q;
};

/// Q^{-1}(unit circle).
struct PreimageCircle {
  Polynomial q;
};

/// Tagged description of the compact set K carrying a measure.
class SupportDescriptor {
 public:
  using Variant = std::variant<Interval, CircularArc, UnitCircle, PreimageReal, PreimageCircle>;

  static SupportDescriptor interval(double a, double b);
  static SupportDescriptor arc(double gamma);
  static SupportDescriptor unit_circle();
  static SupportDescriptor preimage_real(Polynomial q);
  static SupportDescriptor preimage_circle(Polynomial q);

  const Variant& value() const { return v_; }
  template <class T>
  bool holds() const {
    return std::holds_alternative<T>(v_);
  }
  template <class T>
  const T& get() const {
    return std::get<T>(v_);
  }

  /// K is a subset of the real line.
  bool is_real() const;
  /// K lies on the unit circle (trigonometric moments apply).
  bool on_unit_circle() const;

  /// Distance from z to K. Exact for the closed-form families; for pre-images
  /// a first-order estimate dist(Q(z), base) / |Q'(z)|.
  double distance(Complex z) const;

  std::string describe() const;

 private:
  explicit SupportDescriptor(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace widom
