#include "widom/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "widom/error.hpp"
#include "widom/preimage.hpp"

namespace widom {
namespace {

constexpr double kNodeTolerance = 1e-10;

double midpoint_angle(int i, int m) { return (i + 0.5) * std::numbers::pi / m; }

Complex integer_power(Complex z, int k) {
  if (k < 0) return 1.0 / integer_power(z, -k);
  Complex acc = 1.0;
  for (; k > 0; k >>= 1, z *= z)
    if (k & 1) acc *= z;
  return acc;
}

}  // namespace

DiscretizedMeasure::DiscretizedMeasure(std::vector<Complex> nodes, std::vector<double> weights,
                                       SupportDescriptor support, std::string provenance,
                                       std::optional<std::vector<double>> density)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      support_(std::move(support)),
      provenance_(std::move(provenance)),
      density_(std::move(density)) {
  if (nodes_.size() != weights_.size())
    throw InvalidArgument("nodes and weights differ in length");
  if (nodes_.empty()) throw InvalidArgument("measure has no nodes");
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw InvalidArgument(fmt::format("weight {} at node {} is not positive", weights_[i], i));
    const double d = support_.distance(nodes_[i]);
    if (d > kNodeTolerance)
      throw InvalidArgument(fmt::format("node ({}, {}) lies {} off {}", nodes_[i].real(),
                                        nodes_[i].imag(), d, support_.describe()));
  }
  if (density_ && density_->size() != nodes_.size())
    throw InvalidArgument("density must have one value per node");
  mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (provenance_ == "equilibrium" && std::abs(mass_ - 1.0) > 1e-12)
    throw InvalidArgument(fmt::format("equilibrium measure has mass {}", mass_));
}

bool DiscretizedMeasure::is_equilibrium(double tol) const {
  if (atoms_ != 0 || !density_) return false;
  return std::all_of(density_->begin(), density_->end(),
                     [tol](double r) { return std::abs(r - 1.0) <= tol; });
}

DiscretizedMeasure DiscretizedMeasure::with_atom(Complex node, double mass) const {
  std::vector<Complex> nodes = nodes_;
  std::vector<double> weights = weights_;
  nodes.push_back(node);
  weights.push_back(mass);
  DiscretizedMeasure out(std::move(nodes), std::move(weights), support_, "with-atoms");
  out.density_ = density_;
  out.atoms_ = atoms_ + 1;
  return out;
}

DiscretizedMeasure DiscretizedMeasure::reweighted(std::vector<double> weights, std::string provenance,
                                                  std::optional<std::vector<double>> density) const {
  if (density && density->size() != continuous_size())
    throw InvalidArgument("density must cover the continuous nodes");
  DiscretizedMeasure out(nodes_, std::move(weights), support_, std::move(provenance));
  out.atoms_ = atoms_;
  out.density_ = std::move(density);
  return out;
}

int default_quadrature_size() {
  if (const char* env = std::getenv("WIDOM_QUAD_M")) {
    char* end = nullptr;
    const long m = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && m >= 8 && m <= (1 << 22)) return static_cast<int>(m);
    throw InvalidArgument(fmt::format("WIDOM_QUAD_M='{}' is not an integer >= 8", env));
  }
  return kDefaultQuadratureSize;
}

DiscretizedMeasure build_equilibrium(const SupportDescriptor& support, int m, double circle_phase) {
  if (m < 8) throw InvalidArgument(fmt::format("need at least 8 quadrature nodes, got {}", m));
  std::vector<Complex> nodes(m);
  const std::vector<double> weights(m, 1.0 / m);
  const std::vector<double> ones(m, 1.0);

  if (support.holds<Interval>()) {
    const auto [a, b] = support.get<Interval>();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) nodes[i] = mid + half * std::cos(midpoint_angle(i, m));
  } else if (support.holds<CircularArc>()) {
    const double s = std::sin(0.5 * support.get<CircularArc>().gamma);
    for (int i = 0; i < m; ++i) {
      // e^{i theta} = (cos(theta/2) + i sin(theta/2))^2
      const double c = s * std::cos(midpoint_angle(i, m));
      const double sn = std::sqrt((1.0 - c) * (1.0 + c));
      nodes[i] = Complex((c - sn) * (c + sn), 2.0 * c * sn);
    }
  } else if (support.holds<UnitCircle>()) {
    for (int i = 0; i < m; ++i)
      nodes[i] = std::polar(1.0, circle_phase + 2.0 * std::numbers::pi * i / m);
  } else if (support.holds<PreimageReal>()) {
    const auto base = build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), m);
    auto mu = pullback(PullbackSpec::standard(support.get<PreimageReal>().q), base);
    return mu.reweighted(std::vector<double>(mu.weights().begin(), mu.weights().end()),
                         "equilibrium", mu.density());
  } else {
    const auto base = build_equilibrium(SupportDescriptor::unit_circle(), m, circle_phase);
    auto mu = pullback(PullbackSpec::standard(support.get<PreimageCircle>().q), base);
    return mu.reweighted(std::vector<double>(mu.weights().begin(), mu.weights().end()),
                         "equilibrium", mu.density());
  }
  return DiscretizedMeasure(std::move(nodes), weights, support, "equilibrium", ones);
}

DiscretizedMeasure apply_weight(const DiscretizedMeasure& mu, const WeightFunction& w) {
  std::vector<double> weights(mu.weights().begin(), mu.weights().end());
  std::optional<std::vector<double>> density = mu.density();
  for (size_t i = 0; i < mu.size(); ++i) {
    const double v = w(mu.nodes()[i]);
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument(fmt::format("weight is {} at node {} = ({:.15g}, {:.15g})", v, i,
                                        mu.nodes()[i].real(), mu.nodes()[i].imag()));
    weights[i] *= v;
    if (density && i < mu.continuous_size()) (*density)[i] *= v;
  }
  return mu.reweighted(std::move(weights), "weighted", std::move(density));
}

DiscretizedMeasure apply_weight(const DiscretizedMeasure& mu, const Polynomial& w) {
  return apply_weight(mu, [&w](Complex z) {
    const Complex v = w(z);
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
      return std::numeric_limits<double>::quiet_NaN();
    return v.real();
  });
}

Complex moment(const DiscretizedMeasure& mu, int k) {
  const bool trig = mu.support().on_unit_circle();
  Complex acc = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) {
    const Complex z = trig ? std::conj(mu.nodes()[i]) : mu.nodes()[i];
    acc += mu.weights()[i] * integer_power(z, k);
  }
  return acc;
}

}  // namespace widom
