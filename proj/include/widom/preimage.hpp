#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "widom/measures.hpp"
#include "widom/polynomial.hpp"

namespace widom {

/// All roots of p(y) = target by Aberth-Ehrlich iteration from a perturbed
/// circle, Newton-polished, with roots closer than 1e-8 merged to their mean.
/// Sorted by (real, imag). Throws NonConvergence after 200 sweeps.
std::vector<Complex> polynomial_roots(const Polynomial& p, Complex target = 0.0);

/// The pair (T, R) defining the pull-back U^{T,R}: T of degree N >= 1 with
/// leading coefficient tau, R of degree N-1 with the same leading coefficient.
class PullbackSpec {
 public:
  /// Throws InvalidArgument on a degree or leading-coefficient mismatch.
  PullbackSpec(Polynomial t, Polynomial r);
  /// R = T'/N; satisfies the positivity assumption on every set, so it is
  /// born validated.
  static PullbackSpec standard(Polynomial t);

  const Polynomial& t() const { return t_; }
  const Polynomial& r() const { return r_; }
  int degree() const { return t_.degree(); }
  Complex tau() const { return t_.leading(); }
  bool validated() const { return validated_; }
  bool is_standard() const { return standard_; }

  /// R(y)/T'(y) after cancelling common zeros of R and T'.
  Complex branch_weight(Complex y) const;

  PullbackSpec as_validated() const;

 private:
  Polynomial t_;
  Polynomial r_;
  Polynomial r_reduced_;
  Polynomial dt_reduced_;
  bool validated_ = false;
  bool standard_ = false;
};

struct ValidationReport {
  bool valid = false;
  /// max over samples of |sum_j R/T'(T_j^{-1}(z)) - 1|.
  double identity_error = 0.0;
  /// Smallest real part of R/T' over all pre-images seen.
  double min_branch_weight = 0.0;
  std::optional<Complex> offending_point;
  std::string message;
  std::optional<PullbackSpec> spec;  ///< validated copy when valid
};

/// Checks 0 < R/T' < infinity at every pre-image of every sample and the
/// partial-fraction identity sum_j R/T' = 1 (tolerance 1e-10).
ValidationReport validate_spec(const PullbackSpec& spec, std::span<const Complex> k0_samples);

/// U^{T,R}(mu0): each node z_i spawns the N roots of T(y) = z_i with weights
/// w_i R/T'(y). Density transforms as N R/T' * (rho_0 o T).
DiscretizedMeasure pullback(const PullbackSpec& spec, const DiscretizedMeasure& mu0);

struct LiftedExtremal {
  MonicPoly poly;          ///< tau^{-n} T_n(T(z))
  double norm = 0.0;       ///< ||S_{nN}||_{L_p(mu)}
  double norm_base = 0.0;  ///< |tau|^{-n} ||T_n||_{L_p(mu0)}
  double widom = 0.0;      ///< W_{p,nN}(mu) from norm and Cap(K)
  double widom_base = 0.0; ///< W_{p,n}(mu0)
  double base_residual = 0.0;
  bool norm_ok = false;    ///< relative agreement within 1e-10
  bool widom_ok = false;   ///< relative agreement within 1e-8
};

/// Lifts an L_p(mu0) extremal polynomial to mu = U^{T,R}(mu0).
LiftedExtremal lift_extremal(const PullbackSpec& spec, const DiscretizedMeasure& mu0,
                             const DiscretizedMeasure& mu, const MonicPoly& tn, double p);

struct CirclePowerResult {
  MonicPoly poly;              ///< z^ell T_n(z^N)
  double norm = 0.0;           ///< ||S_{ell+nN}||_{L_p(mu)}
  double norm_power = 0.0;     ///< ||S_{nN}||_{L_p(mu)}
  double widom_direct = 0.0;   ///< W_{p,ell+nN}(mu) by direct minimization
  double widom_predicted = 0.0;///< Cap(K)^{-ell} W_{p,n}(mu0)
  double residual = 0.0;       ///< extremality residual of poly on mu
  bool norm_ok = false;
  bool widom_ok = false;
};

/// Extremal polynomials for the pull-back of a circle measure under z^N.
CirclePowerResult circle_power_extremal(const MonicPoly& tn, int ell, int big_n,
                                        const DiscretizedMeasure& mu0,
                                        const DiscretizedMeasure& mu, double p);

/// Band/gap structure of T^{-1}([-1,1]) for a real polynomial whose
/// pre-image is real.
struct Gap {
  double lo;        ///< b_k
  double hi;        ///< a_{k+1}
  double critical;  ///< c_k, the zero of T' in (lo, hi)
};

struct BandStructure {
  std::vector<std::pair<double, double>> bands;
  std::vector<Gap> gaps;
};

/// Throws InvalidArgument if T is not real or T^{-1}([-1,1]) is not real.
BandStructure band_structure(const Polynomial& t);

class ReflectionlessSpec {
 public:
  /// Throws InvalidArgument if the number of gap points differs from the
  /// number of open gaps or some d_k lies outside its closed gap.
  ReflectionlessSpec(Polynomial t, std::vector<double> d_points);

  const Polynomial& t() const { return t_; }
  const std::vector<double>& d_points() const { return d_; }
  const std::vector<double>& c_points() const { return c_; }
  const BandStructure& bands() const { return bands_; }

 private:
  Polynomial t_;
  std::vector<double> d_;
  std::vector<double> c_;
  BandStructure bands_;
};

struct GapPerturbation {
  size_t gap;
  double requested;
  double used;
};

struct ReflectionlessResult {
  DiscretizedMeasure measure;
  PullbackSpec spec;
  std::vector<GapPerturbation> perturbations;
};

/// Pulls back the equilibrium measure of [-1,1] with
/// R = (T'/N) prod (x - d_k)/(x - c_k). Gap points on a gap edge are moved
/// 1e-6 gap lengths inside and reported.
ReflectionlessResult reflectionless_measure(const ReflectionlessSpec& spec, int m);

/// 2^p / sqrt(pi) * Gamma((p+1)/2) / Gamma(p/2 + 1).
double gamma_widom_value(double p);

enum class SaturationVariant { kRealInterval, kCircle };

struct SaturationRow {
  int degree;       ///< n
  double widom;     ///< W_{p,n}(mu_K)
  double expected;  ///< sqrt(2) or 1
  bool pass;
};

struct SaturationReport {
  SupportDescriptor support;
  std::vector<SaturationRow> rows;
  bool pass = true;
};

/// Forward saturation: for K = Q^{-1}(base) checks W_{2,deg Q}(mu_K) = sqrt 2
/// (real variant) or W_{p,k deg Q}(mu_K) = 1 for each k (circle variant),
/// within `tol`.
SaturationReport saturation_check(const Polynomial& q, SaturationVariant variant, double p,
                                  std::span<const int> k_multiples, int m, double tol = 1e-8);

}  // namespace widom
