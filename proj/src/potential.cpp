#include "widom/potential.hpp"

#include <cmath>

#include <fmt/format.h>

#include "widom/error.hpp"

namespace widom {

CapacityResult capacity(const SupportDescriptor& support) {
  if (support.holds<Interval>()) {
    const auto [a, b] = support.get<Interval>();
    return {(b - a) / 4.0, "closed-form"};
  }
  if (support.holds<CircularArc>()) return {std::sin(0.5 * support.get<CircularArc>().gamma), "closed-form"};
  if (support.holds<UnitCircle>()) return {1.0, "closed-form"};
  // Cap([-1,1]) = 1/2 and Cap(unit circle) = 1.
  const bool real = support.holds<PreimageReal>();
  const Polynomial& q = real ? support.get<PreimageReal>().q : support.get<PreimageCircle>().q;
  const double base = real ? 0.5 : 1.0;
  return {std::pow(base / std::abs(q.leading()), 1.0 / q.degree()), "preimage-relation"};
}

namespace {

double entropy_sum(std::span<const double> equilibrium_weights, std::span<const double> density) {
  double log_sum = 0.0;
  double total = 0.0;
  for (size_t i = 0; i < density.size(); ++i) {
    if (density[i] < 0.0) throw InvalidArgument(fmt::format("negative density at node {}", i));
    if (equilibrium_weights[i] <= 0.0) continue;
    if (density[i] == 0.0) return 0.0;
    log_sum += equilibrium_weights[i] * std::log(density[i]);
    total += equilibrium_weights[i];
  }
  // Normalize against rounding in the recovered equilibrium weights.
  return std::exp(log_sum / total);
}

const std::vector<double>& require_density(const DiscretizedMeasure& mu) {
  if (!mu.density())
    throw InvalidArgument("Radon-Nikodym derivative unknown: measure was not built by apply_weight or pullback");
  return *mu.density();
}

}  // namespace

double relative_entropy(const DiscretizedMeasure& mu, const DiscretizedMeasure& mu_k) {
  const auto& rho = require_density(mu);
  if (mu_k.continuous_size() != mu.continuous_size())
    throw InvalidArgument("measures are discretized on different nodes");
  for (size_t i = 0; i < mu.continuous_size(); ++i) {
    const double scale = std::max(1.0, std::abs(mu.nodes()[i]));
    if (std::abs(mu.nodes()[i] - mu_k.nodes()[i]) > 1e-12 * scale)
      throw InvalidArgument(fmt::format("node {} differs between the measures", i));
  }
  return entropy_sum(mu_k.weights().first(mu_k.continuous_size()), rho);
}

double relative_entropy(const DiscretizedMeasure& mu) {
  const auto& rho = require_density(mu);
  std::vector<double> wk(rho.size());
  for (size_t i = 0; i < rho.size(); ++i) wk[i] = mu.weights()[i] / rho[i];
  return entropy_sum(wk, rho);
}

double relative_entropy(const DiscretizedMeasure& mu_k, const WeightFunction& w) {
  std::vector<double> rho(mu_k.continuous_size());
  for (size_t i = 0; i < rho.size(); ++i) rho[i] = w(mu_k.nodes()[i]);
  return entropy_sum(mu_k.weights().first(rho.size()), rho);
}

}  // namespace widom
