#include "widom/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "widom/error.hpp"
#include "widom/potential.hpp"

namespace widom {
namespace {

size_t distinct_count(std::span<const Complex> nodes) {
  std::vector<Complex> sorted(nodes.begin(), nodes.end());
  auto less = [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(sorted.begin(), sorted.end(), less);
  return static_cast<size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

double weighted_norm2(std::span<const double> w, const std::vector<Complex>& v) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += w[i] * std::norm(v[i]);
  return acc;
}

double lp_objective(std::span<const double> w, const std::vector<Complex>& v, double p) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += w[i] * std::pow(std::abs(v[i]), p);
  return acc;
}

// Derivative of theta -> sum_i w_i |u_i + theta d_i|^p.
double directional_slope(std::span<const double> w, const std::vector<Complex>& u,
                         const std::vector<Complex>& d, double theta, double p) {
  double acc = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    const Complex v = u[i] + theta * d[i];
    const double a = std::abs(v);
    if (a == 0.0) continue;
    acc += w[i] * std::pow(a, p - 2.0) * (std::conj(v) * d[i]).real();
  }
  return p * acc;
}

// Minimizer of the convex function theta -> sum w |u + theta d|^p over theta >= 0.
double line_search(std::span<const double> w, const std::vector<Complex>& u,
                   const std::vector<Complex>& d, double p) {
  if (directional_slope(w, u, d, 0.0, p) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (directional_slope(w, u, d, hi, p) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) return lo;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (directional_slope(w, u, d, mid, p) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Minimizes sum_i v_i |lead_i + sum_k c_k basis_k(i)|^2 over c by modified
// Gram-Schmidt (two passes) on the columns sqrt(v) basis_k.
std::vector<Complex> weighted_correction(const std::vector<std::vector<Complex>>& basis,
                                         const std::vector<Complex>& lead, const std::vector<double>& v) {
  const size_t n = basis.size();
  const size_t m = lead.size();
  std::vector<double> root(m);
  for (size_t i = 0; i < m; ++i) root[i] = std::sqrt(v[i]);
  std::vector<std::vector<Complex>> q(n, std::vector<Complex>(m));
  std::vector<std::vector<Complex>> r(n, std::vector<Complex>(n, 0.0));
  for (size_t k = 0; k < n; ++k) {
    auto& a = q[k];
    for (size_t i = 0; i < m; ++i) a[i] = root[i] * basis[k][i];
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t j = 0; j < k; ++j) {
        Complex ip = 0.0;
        for (size_t i = 0; i < m; ++i) ip += std::conj(q[j][i]) * a[i];
        for (size_t i = 0; i < m; ++i) a[i] -= ip * q[j][i];
        r[j][k] += ip;
      }
    }
    double len = 0.0;
    for (const auto& x : a) len += std::norm(x);
    len = std::sqrt(len);
    if (!(len > 0.0)) throw NumericalError("weighted least-squares step lost rank");
    r[k][k] = len;
    for (auto& x : a) x /= len;
  }
  std::vector<Complex> y(n, 0.0);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < m; ++i) y[k] += std::conj(q[k][i]) * root[i] * lead[i];
  std::vector<Complex> c(n);
  for (size_t k = n; k-- > 0;) {
    Complex acc = -y[k];
    for (size_t j = k + 1; j < n; ++j) acc -= r[k][j] * c[j];
    c[k] = acc / r[k][k];
  }
  return c;
}

}  // namespace

OrthogonalSystem::OrthogonalSystem(const DiscretizedMeasure& mu, int n) { build(mu.nodes(), mu.weights(), n); }

OrthogonalSystem::OrthogonalSystem(std::span<const Complex> nodes, std::span<const double> weights, int n) {
  build(nodes, weights, n);
}

void OrthogonalSystem::build(std::span<const Complex> nodes, std::span<const double> weights, int n) {
  if (n < 0) throw InvalidArgument("degree must be non-negative");
  if (static_cast<size_t>(n) >= distinct_count(nodes))
    throw InvalidArgument(fmt::format("degree {} needs more than {} distinct nodes", n, distinct_count(nodes)));
  const size_t m = nodes.size();
  std::vector<std::vector<Complex>> values(n + 1);
  std::vector<std::vector<Complex>> coeffs(n + 1);
  std::vector<double> norm2(n + 1);
  hessenberg_.assign(n + 1, {});

  values[0].assign(m, 1.0);
  coeffs[0] = {1.0};
  norm2[0] = weighted_norm2(weights, values[0]);

  for (int k = 1; k <= n; ++k) {
    std::vector<Complex> q(m);
    for (size_t i = 0; i < m; ++i) q[i] = nodes[i] * values[k - 1][i];
    std::vector<Complex> c(k + 1, 0.0);
    std::copy(coeffs[k - 1].begin(), coeffs[k - 1].end(), c.begin() + 1);
    auto& h = hessenberg_[k];
    h.assign(k, 0.0);
    const double start = std::sqrt(weighted_norm2(weights, q));

    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        Complex ip = 0.0;
        for (size_t i = 0; i < m; ++i) ip += weights[i] * q[i] * std::conj(values[j][i]);
        const Complex proj = ip / norm2[j];
        for (size_t i = 0; i < m; ++i) q[i] -= proj * values[j][i];
        for (size_t l = 0; l < coeffs[j].size(); ++l) c[l] -= proj * coeffs[j][l];
        h[j] += proj;
      }
    }
    norm2[k] = weighted_norm2(weights, q);
    if (!(std::sqrt(norm2[k]) > 1e-13 * start))
      throw NumericalError(fmt::format("numerically singular Gram-Schmidt step at degree {}", k));
    c.back() = 1.0;
    values[k] = std::move(q);
    coeffs[k] = std::move(c);
  }

  polys_.clear();
  norms_.clear();
  for (int k = 0; k <= n; ++k) {
    polys_.push_back(MonicPoly(coeffs[k]).with_node_values(std::move(values[k])));
    norms_.push_back(std::sqrt(norm2[k]));
  }
}

Complex OrthogonalSystem::evaluate(int k, Complex z) const {
  std::vector<Complex> v(k + 1);
  v[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    Complex acc = z * v[j - 1];
    for (int i = 0; i < j; ++i) acc -= hessenberg_[j][i] * v[i];
    v[j] = acc;
  }
  return v[k];
}

OrthogonalResult orthogonal_monic(const DiscretizedMeasure& mu, int n) {
  OrthogonalSystem sys(mu, n);
  return {sys.poly(n), sys.norm(n)};
}

VerblunskySequence verblunsky_from_measure(const DiscretizedMeasure& mu, int count) {
  if (!mu.support().on_unit_circle())
    throw InvalidArgument("Verblunsky coefficients need a measure on the unit circle or an arc");
  VerblunskySequence out{{}, "from-measure"};
  if (count <= 0) return out;
  OrthogonalSystem sys(mu, count);
  for (int k = 0; k < count; ++k) out.alphas.push_back(-std::conj(sys.evaluate(k + 1, 0.0)));
  return out;
}

double lp_norm(const DiscretizedMeasure& mu, double p, const MonicPoly& poly) {
  double acc = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) acc += mu.weights()[i] * std::pow(std::abs(poly(mu.nodes()[i])), p);
  return std::pow(acc, 1.0 / p);
}

ExtremalResult lp_extremal(const DiscretizedMeasure& mu, double p, int n, const ExtremalOptions& options) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw InvalidArgument(fmt::format("p = {} is outside [1, inf); p < 1 is non-convex and p = inf unsupported", p));
  OrthogonalSystem start(mu, n);
  if (p == 2.0 || n == 0) {
    const double t = p == 2.0 ? start.norm(n) : std::pow(mu.mass(), 1.0 / p);
    return {start.poly(n), t, 0, {std::pow(t, p)}};
  }

  const auto nodes = mu.nodes();
  const auto w = mu.weights();
  const size_t m = nodes.size();
  double max_modulus = 0.0;
  for (const auto& z : nodes) max_modulus = std::max(max_modulus, std::abs(z));
  const double floor = 1e-12 * std::pow(std::max(max_modulus, 1e-300), n);

  // Iterates are P = Phi_n + sum_k c_k q_k with q_k orthonormal in L_2(mu),
  // so node values and coefficients come from the same c.
  std::vector<std::vector<Complex>> basis(n);
  for (int k = 0; k < n; ++k) {
    basis[k] = *start.poly(k).node_values();
    for (auto& x : basis[k]) x /= start.norm(k);
  }
  const std::vector<Complex>& lead = *start.poly(n).node_values();
  auto evaluate = [&](const std::vector<Complex>& c) {
    std::vector<Complex> v = lead;
    for (int k = 0; k < n; ++k)
      for (size_t i = 0; i < m; ++i) v[i] += c[k] * basis[k][i];
    return v;
  };

  std::vector<Complex> c(n, 0.0);
  std::vector<Complex> values = lead;
  double f = lp_objective(w, values, p);
  std::vector<double> history{f};
  // Smoothing radius for |P| in the weights; shrunk whenever progress stalls
  // so zeros of P at nodes cannot pin the iteration.
  double smooth = 0.0;
  for (size_t i = 0; i < m; ++i) smooth += w[i] * std::norm(values[i]);
  smooth = std::max(0.1 * std::sqrt(smooth / mu.mass()), floor);
  std::vector<double> irls(m);
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    double scale = 0.0;
    for (size_t i = 0; i < m; ++i) {
      irls[i] = w[i] * std::pow(std::norm(values[i]) + smooth * smooth, 0.5 * (p - 2.0));
      scale = std::max(scale, irls[i]);
    }
    for (auto& x : irls) x /= scale;

    const std::vector<Complex> target = weighted_correction(basis, lead, irls);
    const std::vector<Complex> cand_values = evaluate(target);
    std::vector<Complex> dir(m);
    for (size_t i = 0; i < m; ++i) dir[i] = cand_values[i] - values[i];

    const double theta = line_search(w, values, dir, p);
    std::vector<Complex> next_c(n);
    for (int k = 0; k < n; ++k) next_c[k] = c[k] + theta * (target[k] - c[k]);
    std::vector<Complex> next = evaluate(next_c);
    const double f_next = lp_objective(w, next, p);
    const bool descent = f_next < f;
    const double decrease = descent ? (f - f_next) / f : 0.0;
    if (descent) {
      c = std::move(next_c);
      values = std::move(next);
      f = f_next;
    }
    history.push_back(f);
    if (smooth > floor) {
      if (decrease < 1e-9) smooth = std::max(0.1 * smooth, floor);
      continue;
    }
    if (decrease < options.relative_decrease) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged)
    throw NonConvergence(fmt::format("IRLS for p = {}, n = {} did not converge in {} iterations (objective {:.15g})",
                                     p, n, options.max_iterations, f),
                         f);
  std::vector<Complex> coeffs = start.poly(n).coefficients();
  for (int k = 0; k < n; ++k) {
    const auto& ck = start.poly(k).coefficients();
    for (size_t l = 0; l < ck.size(); ++l) coeffs[l] += c[k] / start.norm(k) * ck[l];
  }
  coeffs.back() = 1.0;
  return {MonicPoly(coeffs).with_node_values(std::move(values)), std::pow(f, 1.0 / p), it, std::move(history)};
}

double extremality_residual(const DiscretizedMeasure& mu, double p, const MonicPoly& poly) {
  const int deg = poly.degree();
  const auto nodes = mu.nodes();
  const auto w = mu.weights();
  std::vector<Complex> kernel(nodes.size());
  double normalizer = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Complex v = poly(nodes[i]);
    const double a = std::abs(v);
    if (a > 0.0) kernel[i] = w[i] * std::pow(a, p - 2.0) * std::conj(v);
    normalizer += w[i] * std::pow(a, p - 1.0);
  }
  double worst = 0.0;
  std::vector<Complex> zk(nodes.size(), 1.0);
  for (int k = 0; k < deg; ++k) {
    Complex acc = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      acc += zk[i] * kernel[i];
      zk[i] *= nodes[i];
    }
    worst = std::max(worst, std::abs(acc));
  }
  return normalizer > 0.0 ? worst / normalizer : 0.0;
}

WidomRecord widom_record(const DiscretizedMeasure& mu, double p, int n) {
  WidomRecord rec;
  rec.p = p;
  rec.n = n;
  rec.t = lp_extremal(mu, p, n).t;
  rec.capn = std::pow(capacity(mu.support()).cap, n);
  rec.widom = rec.t / rec.capn;
  rec.entropy = relative_entropy(mu);
  rec.ratio = std::pow(rec.widom, p) / rec.entropy;
  rec.lower_bound_ok = rec.ratio >= 1.0 - kBoundTolerance;
  if (mu.support().is_real() && p == 2.0 && mu.is_equilibrium())
    rec.improved_bound_ok = rec.widom * rec.widom >= 2.0 - kBoundTolerance;
  return rec;
}

namespace {

bool contains_zero(const SupportDescriptor& k) {
  if (k.holds<Interval>()) return k.get<Interval>().a <= 0.0 && 0.0 <= k.get<Interval>().b;
  if (k.holds<PreimageReal>()) return std::abs(k.get<PreimageReal>().q(0.0).real()) <= 1.0;
  return false;
}

// Chebyshev coefficients of f on [lo, hi] up to `degree`, from `samples`
// Chebyshev points of the first kind.
std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, double lo, double hi,
                                           int degree, int samples) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> fv(samples);
  std::vector<double> phi(samples);
  for (int j = 0; j < samples; ++j) {
    phi[j] = (j + 0.5) * std::numbers::pi / samples;
    fv[j] = f(mid + half * std::cos(phi[j]));
  }
  std::vector<double> c(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    double acc = 0.0;
    for (int j = 0; j < samples; ++j) acc += fv[j] * std::cos(k * phi[j]);
    c[k] = (k == 0 ? 1.0 : 2.0) * acc / samples;
  }
  return c;
}

double clenshaw(const std::vector<double>& c, int degree, double t) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (int k = degree; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace

std::vector<SharpnessRow> sharpness_experiment(const SupportDescriptor& k, double p, int n,
                                               std::span<const double> eps_grid,
                                               std::span<const int> approx_degrees, int m) {
  if (!k.is_real() || !contains_zero(k)) throw InvalidArgument("sharpness needs a real set containing 0");
  if (!std::is_sorted(approx_degrees.begin(), approx_degrees.end()))
    throw InvalidArgument("approximation degrees must be ascending");
  const auto mu_k = build_equilibrium(k, m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& z : mu_k.nodes()) {
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
  }
  if (k.holds<Interval>()) {
    lo = k.get<Interval>().a;
    hi = k.get<Interval>().b;
  }
  const int max_degree = approx_degrees.empty() ? 0 : approx_degrees.back();

  std::vector<SharpnessRow> rows;
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument(fmt::format("eps = {} outside (0, 1]", eps));
    auto w_eps = [=](double x) { return std::pow(x * x + eps * eps, -0.5 * n * p); };
    SharpnessRow row;
    row.eps = eps;
    const auto mu_eps = apply_weight(mu_k, [&](Complex z) { return w_eps(z.real()); });
    row.ratio = widom_record(mu_eps, p, n).ratio;

    double w_min = std::numeric_limits<double>::infinity();
    for (const auto& z : mu_k.nodes()) w_min = std::min(w_min, w_eps(z.real()));
    const auto coeffs = chebyshev_coefficients(w_eps, lo, hi, max_degree, std::max(2 * max_degree + 2, 256));
    for (int degree : approx_degrees) {
      SharpnessCell cell;
      cell.degree = degree;
      std::vector<double> values(mu_k.size());
      for (size_t i = 0; i < mu_k.size(); ++i) {
        const double t = (2.0 * mu_k.nodes()[i].real() - lo - hi) / (hi - lo);
        double v = clenshaw(coeffs, degree, t);
        if (!(v > 0.0)) cell.positive = false;
        if (v < 0.5 * w_min) {
          cell.clipped = true;
          v = 0.5 * w_min;
        }
        values[i] = v;
      }
      std::vector<double> weights(mu_k.size());
      for (size_t i = 0; i < weights.size(); ++i) weights[i] = mu_k.weights()[i] * values[i];
      const auto mu_j = mu_k.reweighted(std::move(weights), "weighted", std::move(values));
      cell.ratio = widom_record(mu_j, p, n).ratio;
      row.approximants.push_back(cell);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WeakStarDeviation weak_star_probe(const DiscretizedMeasure& mu, double delta, double p, int n, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidArgument(fmt::format("delta = {} outside [0, 1)", delta));
  std::mt19937_64 gen(seed);
  std::vector<double> weights(mu.weights().begin(), mu.weights().end());
  for (auto& w : weights) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    w *= 1.0 + delta * (2.0 * u - 1.0);
  }
  const auto perturbed = mu.reweighted(std::move(weights), "perturbed");
  const double capn = std::pow(capacity(mu.support()).cap, n);
  const double t = lp_extremal(mu, p, n).t;
  const double t_pert = lp_extremal(perturbed, p, n).t;
  return {std::abs(t_pert - t), std::abs(t_pert - t) / capn};
}

}  // namespace widom
