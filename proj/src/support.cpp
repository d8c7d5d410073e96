#include "widom/support.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "widom/error.hpp"

namespace widom {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_preimage_poly(const Polynomial& q) {
  if (q.degree() < 1) throw InvalidArgument("pre-image polynomial must have degree >= 1");
}

double distance_to_interval(Complex w) {
  const double dx = std::max(0.0, std::abs(w.real()) - 1.0);
  return std::hypot(dx, w.imag());
}

double preimage_distance(const Polynomial& q, Complex z, double base_distance) {
  if (base_distance <= 1e-13 * q.scale(z)) return 0.0;
  const double slope = std::abs(q.derivative()(z));
  return slope > 0.0 ? base_distance / slope : base_distance;
}

}  // namespace

SupportDescriptor SupportDescriptor::interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument(fmt::format("interval needs a < b, got [{}, {}]", a, b));
  return SupportDescriptor(Interval{a, b});
}

SupportDescriptor SupportDescriptor::arc(double gamma) {
  if (!(gamma > 0.0 && gamma < std::numbers::pi))
    throw InvalidArgument(fmt::format("arc half-angle must lie in (0, pi), got {}", gamma));
  return SupportDescriptor(CircularArc{gamma});
}

SupportDescriptor SupportDescriptor::unit_circle() { return SupportDescriptor(UnitCircle{}); }

SupportDescriptor SupportDescriptor::preimage_real(Polynomial q) {
  check_preimage_poly(q);
  if (!q.is_real()) throw InvalidArgument("real pre-image needs a real polynomial");
  return SupportDescriptor(PreimageReal{std::move(q)});
}

SupportDescriptor SupportDescriptor::preimage_circle(Polynomial q) {
  check_preimage_poly(q);
  return SupportDescriptor(PreimageCircle{std::move(q)});
}

bool SupportDescriptor::is_real() const {
  return holds<Interval>() || holds<PreimageReal>();
}

bool SupportDescriptor::on_unit_circle() const {
  return holds<UnitCircle>() || holds<CircularArc>();
}

double SupportDescriptor::distance(Complex z) const {
  return std::visit(
      Overloaded{
          [&](const Interval& s) {
            const double dx = std::max({s.a - z.real(), z.real() - s.b, 0.0});
            return std::hypot(dx, z.imag());
          },
          [&](const CircularArc& s) {
            const double radial = std::abs(std::abs(z) - 1.0);
            // Angle measured from -1; the arc is |angle| <= gamma.
            const double angle = std::abs(std::arg(-z));
            if (angle <= s.gamma) return radial;
            const Complex end = std::polar(1.0, std::numbers::pi - s.gamma);
            return std::min(std::abs(z - end), std::abs(z - std::conj(end)));
          },
          [&](const UnitCircle&) { return std::abs(std::abs(z) - 1.0); },
          [&](const PreimageReal& s) {
            return preimage_distance(s.q, z, distance_to_interval(s.q(z)));
          },
          [&](const PreimageCircle& s) {
            return preimage_distance(s.q, z, std::abs(std::abs(s.q(z)) - 1.0));
          },
      },
      v_);
}

std::string SupportDescriptor::describe() const {
  return std::visit(Overloaded{
                        [](const Interval& s) { return fmt::format("interval[{:.15g},{:.15g}]", s.a, s.b); },
                        [](const CircularArc& s) { return fmt::format("arc(gamma={:.15g})", s.gamma); },
                        [](const UnitCircle&) { return std::string("unit-circle"); },
                        [](const PreimageReal& s) { return "preimage-real(" + s.q.to_string() + ")"; },
                        [](const PreimageCircle& s) { return "preimage-circle(" + s.q.to_string() + ")"; },
                    },
                    v_);
}

}  // namespace widom
