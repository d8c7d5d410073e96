#pragma once

#include <span>
#include <string>
#include <vector>

#include "widom/extremal.hpp"
#include "widom/measures.hpp"

namespace widom {

/// Parameters of the arc K_gamma = {e^{i theta} : |theta - pi| <= gamma} and
/// its Szego image L_gamma = [-2, c].
struct ArcParams {
  double gamma;
  double a;      ///< sin^2(gamma/2)
  double c;      ///< -2 cos(gamma)
  double b;      ///< (c - 2)/2
  double s;      ///< 2/a - 1
  double theta;  ///< arccosh(s)

  /// Throws InvalidArgument unless 0 < gamma < pi.
  static ArcParams from_gamma(double gamma);
};

/// T_k(s) by the three-term recurrence.
double chebyshev_first_kind(int k, double s);

/// T_{k+1}(s)/T_k(s) for s = cosh(theta); switches to the exponential form
/// once k theta > 30.
double chebyshev_ratio(int k, const ArcParams& arc);

/// alpha_0..alpha_{count-1} of the equilibrium measure of K_gamma. Throws
/// NumericalError if the two odd-index formulas disagree by more than 1e-12.
VerblunskySequence arc_verblunsky_closed(double gamma, int count);

/// [W_{2,n}(mu_{K_gamma})]^2 as prod_j (1 - alpha_j^2)/a.
double arc_widom_closed(double gamma, int n);

struct ArcAsymptotics {
  double limit;  ///< 1 + cos(gamma/2)
  double inf;    ///< 1 + cos^2(gamma/2)
  double sup;    ///< equals limit
};

ArcAsymptotics arc_asymptotics(double gamma);

struct SzegoRow {
  int k;
  double coefficient_error;  ///< max |coef diff| / max |coef|, P_k numeric vs closed form
  double norm_error;         ///< relative error of ||P_k||^2 against 2 a^{2k}
  double even_relation;      ///< relative residual of the Phi_{2k} norm relation (k >= 1)
  double odd_relation;       ///< relative residual of the Phi_{2k+1} norm relation
  bool pass;
};

struct SzegoReport {
  double gamma;
  std::vector<SzegoRow> rows;
  bool pass = true;
  std::string message;  ///< first failing k, empty on success
};

/// Compares the numerically orthogonalized P_k on L_gamma and Phi_n on
/// K_gamma with the closed forms. Rows run over k = 0..k_max; row 0 carries
/// only the odd relation.
SzegoReport szego_check(double gamma, int k_max, int m = 512);

struct MonotonicityAssertion {
  std::string name;
  bool pass = true;
  double margin;         ///< smallest margin seen
  std::string location;  ///< where the smallest margin occurred
};

struct MonotonicityReport {
  std::vector<double> gammas;
  int n_max;
  /// widom2[g][n-1] = [W_{2,n}]^2, alpha[g][n] = alpha_n, n < n_max.
  std::vector<std::vector<double>> widom2;
  std::vector<std::vector<double>> alpha;
  std::vector<MonotonicityAssertion> assertions;
  bool pass = true;
};

/// Checks strict monotonicity in n and gamma. Gaps that shrink like
/// e^{-2 k theta} use cancellation-free closed forms and must be positive;
/// plain differences must exceed 1e-12 times the compared magnitude.
MonotonicityReport monotonicity_report(std::span<const double> gamma_grid, int n_max);

/// -alpha_{2k+1} as tanh(theta/2) tanh((k+1) theta), for derivative checks.
double odd_alpha_magnitude(double theta, int k);

}  // namespace widom
