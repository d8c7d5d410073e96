#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "widom/measures.hpp"
#include "widom/polynomial.hpp"

namespace widom {

/// Monic orthogonal polynomials P_0..P_n of a discrete measure, built by
/// Gram-Schmidt on the Krylov sequence 1, z P_0, z P_1, ... with one full
/// reorthogonalization pass. The projection coefficients are kept so any P_k
/// can be evaluated off the nodes without going through monomial
/// coefficients.
class OrthogonalSystem {
 public:
  OrthogonalSystem(const DiscretizedMeasure& mu, int n);
  /// Same nodes as mu with weights replaced (IRLS inner solves).
  OrthogonalSystem(std::span<const Complex> nodes, std::span<const double> weights, int n);

  int degree() const { return static_cast<int>(norms_.size()) - 1; }
  const MonicPoly& poly(int k) const { return polys_[k]; }
  double norm(int k) const { return norms_[k]; }
  /// P_k(z) by the Hessenberg recurrence.
  Complex evaluate(int k, Complex z) const;

 private:
  void build(std::span<const Complex> nodes, std::span<const double> weights, int n);

  std::vector<MonicPoly> polys_;
  std::vector<double> norms_;
  std::vector<std::vector<Complex>> hessenberg_;  // hessenberg_[k][j], j < k
};

struct OrthogonalResult {
  MonicPoly poly;
  double norm;  ///< t_{2,n}(mu)
};

/// Monic degree-n orthogonal polynomial in L_2(mu) and its norm.
OrthogonalResult orthogonal_monic(const DiscretizedMeasure& mu, int n);

struct VerblunskySequence {
  std::vector<Complex> alphas;
  std::string source;  ///< "from-measure" or "arc-closed-form"
};

/// alpha_k = -conj(Phi_{k+1}(0)), k = 0..count-1, for measures on the unit
/// circle or an arc.
VerblunskySequence verblunsky_from_measure(const DiscretizedMeasure& mu, int count);

struct ExtremalOptions {
  int max_iterations = 500;
  double relative_decrease = 1e-13;
};

struct ExtremalResult {
  MonicPoly poly;
  double t = 0.0;  ///< (sum_i w_i |P(z_i)|^p)^{1/p}
  int iterations = 0;
  std::vector<double> objective;  ///< sum_i w_i |P(z_i)|^p, start value then each iteration
};

/// Monic L_p(mu) extremal polynomial for p in [1, inf). p = 2 is solved by
/// orthogonalization; otherwise by iteratively reweighted least squares with
/// weights w_i (|P(z_i)|^2 + s^2)^{(p-2)/2}, where s shrinks tenfold toward a
/// floor whenever progress stalls. Each step is followed by an exact line
/// search along the IRLS direction so the objective never increases.
/// Throws InvalidArgument for p < 1 or non-finite p, NonConvergence when the
/// iteration budget runs out.
ExtremalResult lp_extremal(const DiscretizedMeasure& mu, double p, int n,
                           const ExtremalOptions& options = {});

/// max_k |sum_i w_i z_i^k |P_i|^{p-2} conj(P_i)| / sum_i w_i |P_i|^{p-1},
/// k < deg P. Vanishes exactly at L_p extremal polynomials.
double extremality_residual(const DiscretizedMeasure& mu, double p, const MonicPoly& poly);

/// L_p(mu) norm of an arbitrary polynomial.
double lp_norm(const DiscretizedMeasure& mu, double p, const MonicPoly& poly);

inline constexpr double kBoundTolerance = 1e-8;

struct WidomRecord {
  double p = 2.0;
  int n = 0;
  double t = 0.0;
  double capn = 0.0;   ///< Cap(K)^n
  double widom = 0.0;  ///< t / capn
  double entropy = 0.0;
  double ratio = 0.0;  ///< widom^p / entropy
  bool lower_bound_ok = false;
  std::optional<bool> improved_bound_ok;  ///< real support, equilibrium, p = 2
};

WidomRecord widom_record(const DiscretizedMeasure& mu, double p, int n);

struct SharpnessCell {
  int degree = 0;        ///< approximant degree
  double ratio = 0.0;    ///< W^p / S for w_j mu_K
  bool positive = true;  ///< approximant was positive at every node
  bool clipped = false;  ///< values were raised to half of min w_eps
};

struct SharpnessRow {
  double eps = 0.0;
  double ratio = 0.0;  ///< W^p / S for w_eps mu_K
  std::vector<SharpnessCell> approximants;
};

/// Ratios W^p/S for w_eps = (x^2 + eps^2)^{-np/2} on a real set containing 0,
/// and for its Chebyshev projections of the given degrees.
std::vector<SharpnessRow> sharpness_experiment(const SupportDescriptor& k, double p, int n,
                                               std::span<const double> eps_grid,
                                               std::span<const int> approx_degrees, int m);

struct WeakStarDeviation {
  double t_deviation = 0.0;
  double widom_deviation = 0.0;
};

/// Multiplies the weights by (1 + delta r_i), r_i in [-1, 1] from a seeded
/// generator, and reports |t' - t| and |W' - W|.
WeakStarDeviation weak_star_probe(const DiscretizedMeasure& mu, double delta, double p, int n,
                                  std::uint64_t seed = 20240611);

}  // namespace widom
