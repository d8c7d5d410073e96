#include "widom/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "widom/error.hpp"
#include "widom/extremal.hpp"
#include "widom/potential.hpp"

namespace widom {
namespace {

constexpr int kMaxSweeps = 200;
constexpr double kClusterRadius = 1e-8;

bool lex_less(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

Polynomial shifted(const Polynomial& p, Complex target) {
  std::vector<Complex> c = p.coefficients();
  c[0] -= target;
  return Polynomial(std::move(c));
}

void newton_polish(const Polynomial& q, const Polynomial& dq, Complex& y) {
  for (int it = 0; it < 3; ++it) {
    const Complex f = q(y);
    const Complex df = dq(y);
    if (std::abs(df) == 0.0) return;
    const Complex next = y - f / df;
    if (!(std::abs(q(next)) < std::abs(f))) return;
    y = next;
  }
}

// Replaces clusters of nearly equal roots by their mean.
void merge_clusters(std::vector<Complex>& roots) {
  const size_t n = roots.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    for (size_t j = i + 1; j < n; ++j)
      if (label[j] < 0 && std::abs(roots[i] - roots[j]) <= kClusterRadius * std::max(1.0, std::abs(roots[i])))
        label[j] = next;
    ++next;
  }
  for (int g = 0; g < next; ++g) {
    Complex sum = 0.0;
    int count = 0;
    for (size_t i = 0; i < n; ++i)
      if (label[i] == g) {
        sum += roots[i];
        ++count;
      }
    if (count > 1)
      for (size_t i = 0; i < n; ++i)
        if (label[i] == g) roots[i] = sum / static_cast<double>(count);
  }
}

SupportDescriptor pulled_back_support(const SupportDescriptor& base, const Polynomial& t) {
  if (base.holds<Interval>()) {
    const auto [a, b] = base.get<Interval>();
    const Polynomial q = t * Complex(2.0 / (b - a)) - Polynomial::constant((a + b) / (b - a));
    return SupportDescriptor::preimage_real(q);
  }
  if (base.holds<PreimageReal>()) return SupportDescriptor::preimage_real(compose(base.get<PreimageReal>().q, t));
  if (base.holds<UnitCircle>()) return SupportDescriptor::preimage_circle(t);
  if (base.holds<PreimageCircle>())
    return SupportDescriptor::preimage_circle(compose(base.get<PreimageCircle>().q, t));
  throw InvalidArgument("pull-back of a measure on a circular arc has no support descriptor");
}

bool positive_real(Complex a, double tol) {
  return std::isfinite(a.real()) && std::isfinite(a.imag()) && a.real() > 0.0 &&
         std::abs(a.imag()) <= tol * std::abs(a);
}

}  // namespace

std::vector<Complex> polynomial_roots(const Polynomial& p, Complex target) {
  if (p.degree() < 1) throw InvalidArgument("root finding needs degree >= 1");
  const Polynomial q = shifted(p, target);
  const int n = q.degree();
  const auto& c = q.coefficients();
  if (n == 1) return {-c[0] / c[1]};

  const Polynomial dq = q.derivative();
  const Complex center = -c[n - 1] / (static_cast<double>(n) * c[n]);
  // Geometric mean of |root - center| from the shifted constant term.
  const Polynomial centered = compose(q, Polynomial(std::vector<Complex>{center, 1.0}));
  double radius = std::pow(std::abs(centered.coefficient(0) / centered.leading()), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<Complex> roots(n);
  for (int k = 0; k < n; ++k) roots[k] = center + std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  bool done = false;
  for (int sweep = 0; sweep < kMaxSweeps && !done; ++sweep) {
    done = true;
    for (int k = 0; k < n; ++k) {
      const Complex f = q(roots[k]);
      if (std::abs(f) <= 4.0 * std::numeric_limits<double>::epsilon() * q.scale(roots[k])) continue;
      const Complex ratio = f / dq(roots[k]);
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0 / (roots[k] - roots[j]);
      Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      roots[k] -= step;
      if (std::abs(step) > 1e-15 * std::max(1.0, std::abs(roots[k]))) done = false;
    }
  }
  for (auto& y : roots) newton_polish(q, dq, y);
  merge_clusters(roots);
  for (const auto& y : roots) {
    const double res = std::abs(q(y));
    if (!(res < 1e-11 * q.scale(y) || res < 1e-12 * std::max(1.0, std::abs(y)) * std::abs(dq(y))))
      throw NonConvergence(fmt::format("root finder stalled at ({:.6g}, {:.6g}) with residual {:.3g}", y.real(),
                                       y.imag(), std::abs(q(y))),
                           std::abs(q(y)));
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

PullbackSpec::PullbackSpec(Polynomial t, Polynomial r) : t_(std::move(t)), r_(std::move(r)) {
  if (t_.degree() < 1) throw InvalidArgument("T must have degree >= 1");
  if (r_.degree() != t_.degree() - 1)
    throw InvalidArgument(fmt::format("deg R = {} but deg T - 1 = {}", r_.degree(), t_.degree() - 1));
  if (std::abs(r_.leading() - t_.leading()) > 1e-12 * std::abs(t_.leading()))
    throw InvalidArgument("R must have the same leading coefficient as T");
  r_reduced_ = r_;
  dt_reduced_ = t_.derivative();
  if (t_.degree() >= 2) {
    for (const Complex c : polynomial_roots(dt_reduced_)) {
      if (r_reduced_.degree() >= 1 && std::abs(r_reduced_(c)) <= 1e-12 * r_reduced_.scale(c)) {
        r_reduced_ = r_reduced_.deflate(c);
        dt_reduced_ = dt_reduced_.deflate(c);
      }
    }
  }
}

PullbackSpec PullbackSpec::standard(Polynomial t) {
  if (t.degree() < 1) throw InvalidArgument("T must have degree >= 1");
  const double n = t.degree();
  Polynomial r = t.derivative() * Complex(1.0 / n);
  // Keep lead(R) == lead(T) exactly.
  std::vector<Complex> rc = r.coefficients();
  rc.back() = t.leading();
  PullbackSpec spec(std::move(t), Polynomial(std::move(rc)));
  spec.r_reduced_ = Polynomial::constant(1.0 / n);
  spec.dt_reduced_ = Polynomial::constant(1.0);
  spec.validated_ = true;
  spec.standard_ = true;
  return spec;
}

Complex PullbackSpec::branch_weight(Complex y) const { return r_reduced_(y) / dt_reduced_(y); }

PullbackSpec PullbackSpec::as_validated() const {
  PullbackSpec copy = *this;
  copy.validated_ = true;
  return copy;
}

ValidationReport validate_spec(const PullbackSpec& spec, std::span<const Complex> k0_samples) {
  ValidationReport report;
  report.min_branch_weight = std::numeric_limits<double>::infinity();
  for (const Complex z : k0_samples) {
    Complex sum = 0.0;
    for (const Complex y : polynomial_roots(spec.t(), z)) {
      const Complex a = spec.branch_weight(y);
      report.min_branch_weight = std::min(report.min_branch_weight, a.real());
      if (!positive_real(a, 1e-10)) {
        report.offending_point = y;
        report.message = fmt::format("R/T' = ({:.6g}, {:.6g}) at pre-image ({:.6g}, {:.6g}) of ({:.6g}, {:.6g})",
                                     a.real(), a.imag(), y.real(), y.imag(), z.real(), z.imag());
        return report;
      }
      sum += a;
    }
    report.identity_error = std::max(report.identity_error, std::abs(sum - 1.0));
  }
  if (report.identity_error > 1e-10) {
    report.message = fmt::format("partial-fraction identity off by {:.3g}", report.identity_error);
    return report;
  }
  report.valid = true;
  report.spec = spec.as_validated();
  return report;
}

DiscretizedMeasure pullback(const PullbackSpec& spec, const DiscretizedMeasure& mu0) {
  if (!spec.validated()) throw InvalidArgument("pull-back spec has not been validated");
  const SupportDescriptor support = pulled_back_support(mu0.support(), spec.t());
  const bool real = support.is_real();
  const double big_n = spec.degree();

  std::vector<Complex> nodes;
  std::vector<double> weights;
  std::vector<double> density;
  std::vector<std::pair<Complex, double>> atoms;
  const auto& rho0 = mu0.density();
  for (size_t i = 0; i < mu0.size(); ++i) {
    const Complex z = mu0.nodes()[i];
    for (Complex y : polynomial_roots(spec.t(), z)) {
      if (real) {
        if (std::abs(y.imag()) > 1e-9 * std::max(1.0, std::abs(y)))
          throw InvalidArgument(fmt::format("pre-image ({:.6g}, {:.6g}) of real base point {:.6g} is not real",
                                            y.real(), y.imag(), z.real()));
        y = y.real();
      }
      const Complex a = spec.branch_weight(y);
      if (!positive_real(a, 1e-8))
        throw InvalidArgument(fmt::format("R/T' = ({:.6g}, {:.6g}) is not positive at ({:.6g}, {:.6g})", a.real(),
                                          a.imag(), y.real(), y.imag()));
      const double wi = mu0.weights()[i] * a.real();
      if (i < mu0.continuous_size()) {
        nodes.push_back(y);
        weights.push_back(wi);
        if (rho0) density.push_back(big_n * a.real() * (*rho0)[i]);
      } else {
        atoms.emplace_back(y, wi);
      }
    }
  }
  DiscretizedMeasure mu(std::move(nodes), std::move(weights), support, "pullback",
                        rho0 ? std::optional(std::move(density)) : std::nullopt);
  for (const auto& [y, w] : atoms) mu = mu.with_atom(y, w);
  return mu;
}

LiftedExtremal lift_extremal(const PullbackSpec& spec, const DiscretizedMeasure& mu0, const DiscretizedMeasure& mu,
                             const MonicPoly& tn, double p) {
  const int n = tn.degree();
  const int big_n = spec.degree();
  if (mu.size() != mu0.size() * static_cast<size_t>(big_n))
    throw InvalidArgument("mu does not have N nodes per node of mu0; not the pull-back under T");
  LiftedExtremal out{MonicPoly::normalized(compose(tn.polynomial(), spec.t()))};
  if (out.poly.degree() != n * big_n) throw InvalidArgument("composition degree mismatch");
  const double scale = std::pow(std::abs(spec.tau()), -n);
  const double base_norm = lp_norm(mu0, p, tn);
  out.norm = lp_norm(mu, p, out.poly);
  out.norm_base = scale * base_norm;
  out.widom = out.norm / std::pow(capacity(mu.support()).cap, n * big_n);
  out.widom_base = base_norm / std::pow(capacity(mu0.support()).cap, n);
  out.base_residual = extremality_residual(mu0, p, tn);
  out.norm_ok = std::abs(out.norm - out.norm_base) <= 1e-10 * out.norm_base;
  out.widom_ok = std::abs(out.widom - out.widom_base) <= 1e-8 * out.widom_base;
  return out;
}

CirclePowerResult circle_power_extremal(const MonicPoly& tn, int ell, int big_n, const DiscretizedMeasure& mu0,
                                        const DiscretizedMeasure& mu, double p) {
  if (big_n < 1) throw InvalidArgument("N must be positive");
  if (ell < 0 || ell >= big_n) throw InvalidArgument(fmt::format("ell = {} outside 0..{}", ell, big_n - 1));
  if (!mu0.support().on_unit_circle()) throw InvalidArgument("mu0 must live on the unit circle");
  if (mu.size() != mu0.size() * static_cast<size_t>(big_n))
    throw InvalidArgument("mu does not have N nodes per node of mu0; not the pull-back under z^N");
  const int n = tn.degree();
  std::vector<Complex> power(n * big_n + 1, 0.0);
  std::vector<Complex> shifted(ell + n * big_n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    power[k * big_n] = tn.coefficients()[k];
    shifted[ell + k * big_n] = tn.coefficients()[k];
  }
  const MonicPoly s_power(power);
  CirclePowerResult out{MonicPoly(shifted)};
  const int degree = ell + n * big_n;
  const double cap_k = capacity(mu.support()).cap;
  const double cap_0 = capacity(mu0.support()).cap;
  out.norm = lp_norm(mu, p, out.poly);
  out.norm_power = lp_norm(mu, p, s_power);
  out.widom_direct = lp_extremal(mu, p, degree).t / std::pow(cap_k, degree);
  out.widom_predicted = std::pow(cap_k, -ell) * lp_norm(mu0, p, tn) / std::pow(cap_0, n);
  out.residual = extremality_residual(mu, p, out.poly);
  out.norm_ok = std::abs(out.norm - out.norm_power) <= 1e-10 * out.norm_power;
  out.widom_ok = std::abs(out.widom_direct - out.widom_predicted) <= 1e-8 * out.widom_predicted;
  return out;
}

BandStructure band_structure(const Polynomial& t) {
  if (t.degree() < 1 || !t.is_real()) throw InvalidArgument("band structure needs a real polynomial of degree >= 1");
  std::vector<double> edges;
  for (double level : {-1.0, 1.0}) {
    for (const Complex y : polynomial_roots(t, level)) {
      if (std::abs(y.imag()) > 1e-6 * std::max(1.0, std::abs(y)))
        throw InvalidArgument("T^{-1}([-1,1]) is not contained in the real line");
      edges.push_back(y.real());
    }
  }
  std::sort(edges.begin(), edges.end());
  BandStructure out;
  std::vector<double> crit;
  if (t.degree() >= 2)
    for (const Complex c : polynomial_roots(t.derivative())) crit.push_back(c.real());
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  for (const double c : crit) {
    if (std::abs(t(c).real()) <= 1.0 + 1e-12) continue;
    auto above = std::upper_bound(edges.begin(), edges.end(), c);
    if (above == edges.begin() || above == edges.end()) continue;
    out.gaps.push_back({*(above - 1), *above, c});
  }
  double left = edges.front();
  for (const auto& g : out.gaps) {
    out.bands.emplace_back(left, g.lo);
    left = g.hi;
  }
  out.bands.emplace_back(left, edges.back());
  return out;
}

ReflectionlessSpec::ReflectionlessSpec(Polynomial t, std::vector<double> d_points)
    : t_(std::move(t)), d_(std::move(d_points)), bands_(band_structure(t_)) {
  if (d_.size() != bands_.gaps.size())
    throw InvalidArgument(fmt::format("{} gap points for {} gaps", d_.size(), bands_.gaps.size()));
  for (size_t k = 0; k < d_.size(); ++k) {
    const auto& g = bands_.gaps[k];
    if (d_[k] < g.lo || d_[k] > g.hi)
      throw InvalidArgument(fmt::format("d_{} = {} outside gap [{:.15g}, {:.15g}]", k + 1, d_[k], g.lo, g.hi));
    c_.push_back(g.critical);
  }
}

ReflectionlessResult reflectionless_measure(const ReflectionlessSpec& spec, int m) {
  const Polynomial& t = spec.t();
  std::vector<GapPerturbation> perturbations;
  Polynomial r = t.derivative() * Complex(1.0 / t.degree());
  for (size_t k = 0; k < spec.d_points().size(); ++k) {
    const auto& g = spec.bands().gaps[k];
    const double length = g.hi - g.lo;
    double d = spec.d_points()[k];
    if (d <= g.lo) d = g.lo + 1e-6 * length;
    if (d >= g.hi) d = g.hi - 1e-6 * length;
    if (d != spec.d_points()[k]) perturbations.push_back({k, spec.d_points()[k], d});
    r = r.deflate(g.critical) * Polynomial{-d, 1.0};
  }
  std::vector<Complex> rc = r.coefficients();
  rc.back() = t.leading();
  PullbackSpec pb(t, Polynomial(std::move(rc)));

  std::vector<Complex> samples(100);
  for (size_t j = 0; j < samples.size(); ++j)
    samples[j] = std::cos((j + 0.5) * std::numbers::pi / samples.size());
  const auto report = validate_spec(pb, samples);
  if (!report.valid) throw InvalidArgument("reflectionless spec failed validation: " + report.message);

  const auto base = build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), m);
  auto mu = pullback(*report.spec, base);
  auto measure = mu.reweighted(std::vector<double>(mu.weights().begin(), mu.weights().end()), "reflectionless",
                               mu.density());
  return {std::move(measure), *report.spec, std::move(perturbations)};
}

double gamma_widom_value(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument(fmt::format("p = {} outside [1, inf)", p));
  const double ratio = p < 300.0 ? std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0)
                                 : std::exp(std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5 * p + 1.0));
  return std::pow(2.0, p) / std::sqrt(std::numbers::pi) * ratio;
}

SaturationReport saturation_check(const Polynomial& q, SaturationVariant variant, double p,
                                  std::span<const int> k_multiples, int m, double tol) {
  const bool real = variant == SaturationVariant::kRealInterval;
  SaturationReport report{real ? SupportDescriptor::preimage_real(q) : SupportDescriptor::preimage_circle(q)};
  const auto mu = build_equilibrium(report.support, m);
  const double cap = capacity(report.support).cap;
  const double expected = real ? std::numbers::sqrt2 : 1.0;
  const double power = real ? 2.0 : p;
  const std::vector<int> fallback{1};
  const auto ks = k_multiples.empty() ? std::span<const int>(fallback) : k_multiples;
  for (const int k : ks) {
    if (k < 1) throw InvalidArgument("multiples must be positive");
    const int n = k * q.degree();
    const double w = lp_extremal(mu, power, n).t / std::pow(cap, n);
    const bool pass = std::abs(w - expected) <= tol;
    report.rows.push_back({n, w, expected, pass});
    report.pass = report.pass && pass;
  }
  return report;
}

}  // namespace widom
