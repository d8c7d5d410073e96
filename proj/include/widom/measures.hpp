#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "widom/polynomial.hpp"
#include "widom/support.hpp"

namespace widom {

/// Quadrature representation sum_i w_i delta_{z_i} of a finite Borel measure.
///
/// Absolutely continuous nodes come first and may carry `density`, the
/// Radon-Nikodym derivative with respect to the equilibrium measure of the
/// support evaluated at those nodes. Point masses inserted with with_atom()
/// follow; they are null for the equilibrium measure and carry no density.
/// Instances are immutable.
class DiscretizedMeasure {
 public:
  DiscretizedMeasure(std::vector<Complex> nodes, std::vector<double> weights,
                     SupportDescriptor support, std::string provenance,
                     std::optional<std::vector<double>> density = std::nullopt);

  std::span<const Complex> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const SupportDescriptor& support() const { return support_; }
  const std::string& provenance() const { return provenance_; }
  double mass() const { return mass_; }
  size_t size() const { return nodes_.size(); }

  /// Number of trailing point masses.
  size_t atom_count() const { return atoms_; }
  /// Nodes carrying the absolutely continuous part.
  size_t continuous_size() const { return nodes_.size() - atoms_; }
  const std::optional<std::vector<double>>& density() const { return density_; }

  /// Density identically 1 and no atoms.
  bool is_equilibrium(double tol = 1e-12) const;

  DiscretizedMeasure with_atom(Complex node, double mass) const;
  /// Same nodes, new weights; density is dropped unless supplied.
  DiscretizedMeasure reweighted(std::vector<double> weights, std::string provenance,
                                std::optional<std::vector<double>> density = std::nullopt) const;

 private:
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
  SupportDescriptor support_;
  std::string provenance_;
  std::optional<std::vector<double>> density_;
  size_t atoms_ = 0;
  double mass_ = 0.0;
};

inline constexpr int kDefaultQuadratureSize = 512;

/// Quadrature size from WIDOM_QUAD_M, else kDefaultQuadratureSize.
int default_quadrature_size();

/// Equilibrium measure of `support` discretized with m nodes.
///
/// Intervals use x = mid + half cos(phi); arcs use cos(theta/2) = sin(gamma/2) cos(phi).
/// Both push dphi/pi forward to the equilibrium measure, and phi is sampled at
/// the m midpoints of (0, pi), so all weights equal 1/m. The unit circle uses
/// e^{i(phase + 2 pi k/m)}. Pre-images are pulled back from the base measure.
DiscretizedMeasure build_equilibrium(const SupportDescriptor& support, int m, double circle_phase = 0.0);

using WeightFunction = std::function<double(Complex)>;

/// Multiplies weights by w(node). Throws InvalidArgument naming the first
/// node where w is not strictly positive.
DiscretizedMeasure apply_weight(const DiscretizedMeasure& mu, const WeightFunction& w);
/// Polynomial weight; must be real and positive at every node.
DiscretizedMeasure apply_weight(const DiscretizedMeasure& mu, const Polynomial& w);

/// sum_i w_i z_i^k on real and pre-image supports; sum_i w_i e^{-ik theta_i}
/// on the unit circle and arcs.
Complex moment(const DiscretizedMeasure& mu, int k);

}  // namespace widom
