#include "widom/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "widom/arc.hpp"
#include "widom/error.hpp"
#include "widom/extremal.hpp"
#include "widom/measures.hpp"
#include "widom/potential.hpp"
#include "widom/preimage.hpp"

namespace widom {
namespace {

using nlohmann::json;

constexpr double kAgreement = 1e-8;

std::string fmt15(double x) { return fmt::format("{:.15g}", x); }

json num(double x) {
  if (!std::isfinite(x)) return fmt15(x);
  return std::stod(fmt15(x));
}

double tol_or(const RunConfig& c, double fallback) { return c.tolerance.value_or(fallback); }

Assertion within(std::string name, double error, double tol) { return {std::move(name), error <= tol, tol - error}; }

const SupportDescriptor& require_support(const RunConfig& c) {
  if (!c.support) throw InvalidArgument(fmt::format("'{}' needs a support option", c.command));
  return *c.support;
}

DiscretizedMeasure base_measure(const RunConfig& c, const SupportDescriptor& k, int m) {
  const bool circle = k.holds<UnitCircle>();
  auto mu = build_equilibrium(k, m, circle ? std::numbers::pi / m : 0.0);
  if (!c.weight.empty()) mu = apply_weight(mu, parse_polynomial(c.weight));
  return mu;
}

double widom_of(const DiscretizedMeasure& mu, double p, int n) {
  return lp_extremal(mu, p, n).t / std::pow(capacity(mu.support()).cap, n);
}

std::vector<Complex> base_samples(const SupportDescriptor& base, int count) {
  std::vector<Complex> out(count);
  for (int j = 0; j < count; ++j) {
    const double phi = (j + 0.5) * std::numbers::pi / count;
    if (base.holds<Interval>()) {
      const auto [a, b] = base.get<Interval>();
      out[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(phi);
    } else {
      out[j] = std::polar(1.0, 2.0 * phi + 0.1);
    }
  }
  return out;
}

Table cmd_capacity(const RunConfig& c, int) {
  const auto& k = require_support(c);
  const auto r = capacity(k);
  return {{"support", "cap", "method"}, {{k.describe(), num(r.cap), r.method}}, {}, {}, -1};
}

Table cmd_entropy(const RunConfig& c, int m) {
  const auto& k = require_support(c);
  if (c.weight.empty()) throw InvalidArgument("entropy needs --weight");
  const auto mu = base_measure(c, k, m);
  return {{"support", "weight", "entropy"}, {{k.describe(), c.weight, num(relative_entropy(mu))}}, {}, {}, 2};
}

Table cmd_widom(const RunConfig& c, int m) {
  const auto& k = require_support(c);
  const auto mu = base_measure(c, k, m);
  Table t{{"n", "t", "capn", "widom", "widom_p", "entropy", "ratio", "lower_bound_ok", "improved_bound_ok"}};
  t.value_column = 3;
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto r = widom_record(mu, c.p, n);
    json improved = r.improved_bound_ok ? json(*r.improved_bound_ok) : json(nullptr);
    t.rows.push_back({n, num(r.t), num(r.capn), num(r.widom), num(std::pow(r.widom, c.p)), num(r.entropy),
                      num(r.ratio), r.lower_bound_ok, improved});
    t.assertions.push_back({fmt::format("lower-bound n={}", n), r.lower_bound_ok, r.ratio - (1.0 - kBoundTolerance)});
    if (r.improved_bound_ok)
      t.assertions.push_back({fmt::format("improved-bound n={}", n), *r.improved_bound_ok,
                              r.widom * r.widom - (2.0 - kBoundTolerance)});
  }
  return t;
}

Table cmd_arc(const RunConfig& c, int) {
  if (c.gammas.empty()) throw InvalidArgument("arc needs --gamma");
  Table t{{"gamma", "n", "alpha", "widom2", "inf", "sup", "limit"}};
  for (const double g : c.gammas) {
    const auto asym = arc_asymptotics(g);
    const auto alphas = arc_verblunsky_closed(g, c.n_hi).alphas;
    for (int n = c.n_lo; n <= c.n_hi; ++n) {
      const double w2 = arc_widom_closed(g, n);
      t.rows.push_back({num(g), n, num(alphas[n - 1].real()), num(w2), num(asym.inf), num(asym.sup), num(asym.limit)});
      const double margin = std::min(w2 - asym.inf + 1e-12, asym.sup - w2);
      t.assertions.push_back({fmt::format("inf-sup gamma={} n={}", fmt15(g), n), margin > 0.0, margin});
      if (n == 1) t.assertions.push_back(within(fmt::format("first-equals-inf gamma={}", fmt15(g)),
                                                std::abs(w2 - asym.inf), tol_or(c, 1e-8)));
    }
  }
  return t;
}

Table cmd_verblunsky(const RunConfig& c, int m) {
  if (c.gammas.empty()) throw InvalidArgument("verblunsky needs --gamma");
  Table t{{"gamma", "k", "closed", "numeric", "difference"}};
  t.value_column = 3;
  for (const double g : c.gammas) {
    const auto closed = arc_verblunsky_closed(g, c.n_hi).alphas;
    const auto numeric = verblunsky_from_measure(build_equilibrium(SupportDescriptor::arc(g), m), c.n_hi).alphas;
    double worst = 0.0;
    for (int k = 0; k < c.n_hi; ++k) {
      const double diff = std::abs(closed[k] - numeric[k]);
      worst = std::max(worst, diff);
      t.rows.push_back({num(g), k, num(closed[k].real()), num(numeric[k].real()), num(diff)});
    }
    t.assertions.push_back(within(fmt::format("closed-vs-numeric gamma={}", fmt15(g)), worst, tol_or(c, 1e-8)));
  }
  return t;
}

PullbackSpec make_spec(const RunConfig& c, const Polynomial& t_poly, const SupportDescriptor& base,
                       double* identity_error) {
  if (c.r_poly.empty()) return PullbackSpec::standard(t_poly);
  PullbackSpec spec(t_poly, parse_polynomial(c.r_poly));
  const auto samples = base_samples(base, 100);
  auto report = validate_spec(spec, samples);
  if (!report.valid) throw InvalidArgument("pull-back spec rejected: " + report.message);
  if (identity_error) *identity_error = report.identity_error;
  return *report.spec;
}

Table cmd_pullback(const RunConfig& c, int m) {
  if (c.t_poly.empty()) throw InvalidArgument("pullback needs --T");
  const SupportDescriptor base = c.support.value_or(SupportDescriptor::interval(-1.0, 1.0));
  double identity = 0.0;
  const auto spec = make_spec(c, parse_polynomial(c.t_poly), base, &identity);
  const auto mu0 = base_measure(c, base, m);
  const auto mu = pullback(spec, mu0);
  const int big_n = spec.degree();
  const double tol = tol_or(c, 1e-7);

  Table t{{"n", "degree", "widom_base", "widom_pullback", "relative_difference"}};
  t.value_column = 3;
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const double w0 = widom_of(mu0, c.p, n);
    const double w = widom_of(mu, c.p, n * big_n);
    const double rel = std::abs(w - w0) / w0;
    t.rows.push_back({n, n * big_n, num(w0), num(w), num(rel)});
    t.assertions.push_back(within(fmt::format("widom-invariance n={}", n), rel, tol));
  }
  const double s0 = relative_entropy(mu0);
  const double s = relative_entropy(mu);
  // S(mu) = S_K(N R/T') S(mu_0); the factor is 1 for R = T'/N
  double factor = 1.0;
  if (!spec.is_standard()) {
    const auto mu_k = pullback(PullbackSpec::standard(spec.t()), build_equilibrium(base, m));
    factor = relative_entropy(mu_k, [&](Complex z) { return big_n * spec.branch_weight(z).real(); });
  }
  t.meta = {{"support", mu.support().describe()},
            {"entropy_base", fmt15(s0)},
            {"entropy_pullback", fmt15(s)},
            {"entropy_factor", fmt15(factor)},
            {"mass_error", fmt15(std::abs(mu.mass() - mu0.mass()))},
            {"identity_error", fmt15(identity)}};
  t.assertions.push_back(within(spec.is_standard() ? "entropy-invariance" : "entropy-factor",
                                std::abs(s - factor * s0) / s, tol));
  t.assertions.push_back(within("mass-preservation", std::abs(mu.mass() - mu0.mass()), 1e-12));
  return t;
}

Table cmd_reflectionless(const RunConfig& c, int m) {
  if (c.t_poly.empty()) throw InvalidArgument("reflectionless needs --T");
  const ReflectionlessSpec spec(parse_polynomial(c.t_poly), c.d_points);
  const auto result = reflectionless_measure(spec, m);
  const int big_n = spec.t().degree();
  Table t{{"k", "degree", "widom2"}};
  t.value_column = 2;
  for (int k = c.n_lo; k <= c.n_hi; ++k) {
    const double w = widom_of(result.measure, 2.0, k * big_n);
    t.rows.push_back({k, k * big_n, num(w * w)});
    t.assertions.push_back(within(fmt::format("widom2-equals-2 degree={}", k * big_n), std::abs(w * w - 2.0),
                                  tol_or(c, 1e-7)));
  }
  const auto& gaps = spec.bands().gaps;
  for (size_t g = 0; g < gaps.size(); ++g)
    t.meta.emplace_back(fmt::format("gap_{}", g + 1), fmt::format("[{}, {}] critical {}", fmt15(gaps[g].lo),
                                                                  fmt15(gaps[g].hi), fmt15(gaps[g].critical)));
  for (const auto& pert : result.perturbations)
    t.meta.emplace_back(fmt::format("perturbed_{}", pert.gap + 1),
                        fmt::format("d {} -> {}", fmt15(pert.requested), fmt15(pert.used)));
  return t;
}

Table cmd_saturate(const RunConfig& c, int m) {
  if (c.t_poly.empty()) throw InvalidArgument("saturate needs --Q");
  SaturationVariant variant;
  if (c.variant == "real")
    variant = SaturationVariant::kRealInterval;
  else if (c.variant == "circle")
    variant = SaturationVariant::kCircle;
  else
    throw InvalidArgument("variant must be real or circle");
  const auto report = saturation_check(parse_polynomial(c.t_poly), variant, c.p, c.multiples, m, tol_or(c, 1e-8));
  Table t{{"degree", "widom", "expected", "pass"}};
  t.value_column = 1;
  for (const auto& r : report.rows) {
    t.rows.push_back({r.degree, num(r.widom), num(r.expected), r.pass});
    t.assertions.push_back({fmt::format("saturation degree={}", r.degree), r.pass,
                            tol_or(c, 1e-8) - std::abs(r.widom - r.expected)});
  }
  t.meta.emplace_back("support", report.support.describe());
  return t;
}

Table cmd_sharpness(const RunConfig& c, int m) {
  const SupportDescriptor k = c.support.value_or(SupportDescriptor::interval(-2.0, 2.0));
  const std::vector<double> eps = c.eps.empty() ? std::vector<double>{1.0, 0.3, 0.1, 0.03, 0.01} : c.eps;
  const std::vector<int> degrees = c.degrees.empty() ? std::vector<int>{100, 200, 400, 800, 1600, 3200} : c.degrees;
  const auto rows = sharpness_experiment(k, c.p, c.n_lo, eps, degrees, m);
  Table t{{"eps", "degree", "ratio", "error", "positive", "clipped"}};
  t.value_column = 2;
  const double tol = tol_or(c, 1e-3);
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    t.rows.push_back({num(row.eps), -1, num(row.ratio), num(0.0), true, false});
    for (const auto& cell : row.approximants)
      t.rows.push_back({num(row.eps), cell.degree, num(cell.ratio), num(std::abs(cell.ratio - row.ratio)),
                        cell.positive, cell.clipped});
    if (!row.approximants.empty())
      t.assertions.push_back(within(fmt::format("approximants-converge eps={}", fmt15(row.eps)),
                                    std::abs(row.approximants.back().ratio - row.ratio), tol));
    if (r > 0)
      t.assertions.push_back({fmt::format("ratio-decreasing eps={}", fmt15(row.eps)), row.ratio < rows[r - 1].ratio,
                              rows[r - 1].ratio - row.ratio});
  }
  return t;
}

Table verify_interval(const RunConfig& c, int m) {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), m);
  const double expected = gamma_widom_value(c.p);
  const double tol = tol_or(c, c.p == 2.0 ? 1e-8 : 1e-6);
  Table t{{"n", "widom_p", "expected", "error"}};
  t.value_column = 1;
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const double wp = std::pow(widom_of(mu, c.p, n), c.p);
    t.rows.push_back({n, num(wp), num(expected), num(std::abs(wp - expected))});
    t.assertions.push_back(within(fmt::format("widom-p n={}", n), std::abs(wp - expected), tol));
  }
  return t;
}

Table verify_arc_monotone(const RunConfig& c, int) {
  std::vector<double> grid = c.gammas;
  if (grid.empty())
    for (int j = 1; j <= 10; ++j) grid.push_back(0.3 * j);
  const auto report = monotonicity_report(grid, std::max(c.n_hi, 2));
  Table t{{"assertion", "pass", "margin", "location"}};
  for (const auto& a : report.assertions) {
    t.rows.push_back({a.name, a.pass, num(a.margin), a.location});
    t.assertions.push_back({a.name, a.pass, a.margin});
  }
  return t;
}

Table verify_preimage(const RunConfig& c, int m) {
  std::vector<Polynomial> maps;
  if (!c.t_poly.empty())
    maps.push_back(parse_polynomial(c.t_poly));
  else
    maps = {Polynomial{-1.0, 0.0, 2.0}, Polynomial{0.0, -1.5, 0.0, 0.5}};
  const std::string weight = c.weight.empty() ? "1.5,0.3,0.4" : c.weight;
  const auto mu0 = apply_weight(build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), m), parse_polynomial(weight));
  const double tol = tol_or(c, 1e-7);
  Table t{{"T", "n", "degree", "widom_base", "widom_pullback", "relative_difference"}};
  t.value_column = 4;
  for (const auto& map : maps) {
    const auto mu = pullback(PullbackSpec::standard(map), mu0);
    const int big_n = map.degree();
    for (int n = c.n_lo; n <= c.n_hi; ++n) {
      const double w0 = widom_of(mu0, c.p, n);
      const double w = widom_of(mu, c.p, n * big_n);
      const double rel = std::abs(w - w0) / w0;
      t.rows.push_back({map.to_string(), n, n * big_n, num(w0), num(w), num(rel)});
      t.assertions.push_back(within(fmt::format("widom-invariance T={} n={}", map.to_string(), n), rel, tol));
    }
    const double s0 = relative_entropy(mu0);
    const double s = relative_entropy(mu);
    t.assertions.push_back(within(fmt::format("entropy-invariance T={}", map.to_string()), std::abs(s - s0) / s0, tol));
  }
  return t;
}

Table verify_circle_powers(const RunConfig& c, int m) {
  const auto circle = build_equilibrium(SupportDescriptor::unit_circle(), m, std::numbers::pi / m);
  const auto mu0 = apply_weight(circle, [](Complex z) { return 1.0 + z.real(); });
  const auto mu = pullback(PullbackSpec::standard(Polynomial::monomial(c.big_n)), mu0);
  const double tol = tol_or(c, 1e-8);
  Table t{{"ell", "n", "degree", "residual", "widom_direct", "widom_predicted"}};
  t.value_column = 4;
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto tn = lp_extremal(mu0, c.p, n).poly;
    for (int ell = 0; ell < c.big_n; ++ell) {
      const auto r = circle_power_extremal(tn, ell, c.big_n, mu0, mu, c.p);
      t.rows.push_back({ell, n, ell + n * c.big_n, num(r.residual), num(r.widom_direct), num(r.widom_predicted)});
      const std::string at = fmt::format("ell={} n={}", ell, n);
      t.assertions.push_back(within("residual " + at, r.residual, tol));
      t.assertions.push_back(
          within("widom " + at, std::abs(r.widom_direct - r.widom_predicted) / r.widom_predicted, tol));
    }
  }
  return t;
}

Table verify_bounds(const RunConfig& c, int m) {
  const auto mu_k = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), m);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 6);
  Table t{{"weight", "p", "n", "ratio"}};
  t.value_column = 3;
  for (int j = 0; j < c.count; ++j) {
    std::vector<Complex> w(deg(rng) + 1, 0.0);
    for (size_t k = 1; k < w.size(); ++k) w[k] = coef(rng);
    double low = 0.0;
    for (const auto& z : mu_k.nodes()) low = std::min(low, Polynomial(w)(z).real());
    w[0] = 0.1 - low + std::abs(coef(rng));
    const Polynomial weight(w);
    const auto mu = apply_weight(mu_k, weight);
    for (const double p : {1.0, 2.0, 3.0}) {
      for (int n = c.n_lo; n <= c.n_hi; ++n) {
        const auto r = widom_record(mu, p, n);
        t.rows.push_back({weight.to_string(), num(p), n, num(r.ratio)});
        t.assertions.push_back({fmt::format("lower-bound weight={} p={} n={}", j, p, n), r.lower_bound_ok,
                                r.ratio - (1.0 - kBoundTolerance)});
      }
    }
  }
  return t;
}

Table dispatch(const RunConfig& c, int m) {
  const std::string& cmd = c.command;
  if (cmd == "capacity") return cmd_capacity(c, m);
  if (cmd == "entropy") return cmd_entropy(c, m);
  if (cmd == "widom") return cmd_widom(c, m);
  if (cmd == "arc") return cmd_arc(c, m);
  if (cmd == "verblunsky") return cmd_verblunsky(c, m);
  if (cmd == "pullback") return cmd_pullback(c, m);
  if (cmd == "reflectionless") return cmd_reflectionless(c, m);
  if (cmd == "saturate") return cmd_saturate(c, m);
  if (cmd == "sharpness") return cmd_sharpness(c, m);
  if (cmd == "verify") {
    if (c.suite == "interval") return verify_interval(c, m);
    if (c.suite == "arc-monotone") return verify_arc_monotone(c, m);
    if (c.suite == "preimage-invariance") return verify_preimage(c, m);
    if (c.suite == "circle-powers") return verify_circle_powers(c, m);
    if (c.suite == "bounds") return verify_bounds(c, m);
    throw InvalidArgument(fmt::format("unknown verify suite '{}'", c.suite));
  }
  throw InvalidArgument(fmt::format("unknown command '{}'", cmd));
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt15(v.get<double>());
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw InvalidArgument(fmt::format("'{}' is not a number", item));
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const double v : parse_doubles(text)) {
    if (v != std::floor(v)) throw InvalidArgument(fmt::format("{} is not an integer", v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void parse_range(const std::string& text, int& lo, int& hi) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument(fmt::format("bad degree range '{}'", text));
  }
}

}  // namespace

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.suite.empty()) j["suite"] = c.suite;
  j["support"] = c.support ? json(c.support->describe()) : json(nullptr);
  if (!c.weight.empty()) j["weight"] = c.weight;
  j["p"] = num(c.p);
  j["n"] = {c.n_lo, c.n_hi};
  if (!c.gammas.empty()) {
    j["gamma"] = json::array();
    for (const double g : c.gammas) j["gamma"].push_back(num(g));
  }
  j["m"] = c.m;
  j["format"] = c.format;
  if (c.tolerance) j["tolerance"] = num(*c.tolerance);
  j["seed"] = c.seed;
  if (!c.t_poly.empty()) j["T"] = c.t_poly;
  if (!c.r_poly.empty()) j["R"] = c.r_poly;
  if (!c.d_points.empty()) j["d"] = c.d_points;
  if (!c.multiples.empty()) j["multiples"] = c.multiples;
  if (!c.eps.empty()) j["eps"] = c.eps;
  if (!c.degrees.empty()) j["degrees"] = c.degrees;
  if (c.command == "saturate") j["variant"] = c.variant;
  if (c.command == "verify" && c.suite == "bounds") j["count"] = c.count;
  if (c.command == "verify" && c.suite == "circle-powers") j["N"] = c.big_n;
  return j;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  try {
    if (config.m < 8) throw InvalidArgument(fmt::format("m = {} is below 8", config.m));
    if (config.n_lo < 1 || config.n_hi < config.n_lo)
      throw InvalidArgument(fmt::format("degree range {}..{} is empty or starts below 1", config.n_lo, config.n_hi));
    if (config.format != "csv" && config.format != "json") throw InvalidArgument("format must be csv or json");

    out.table = dispatch(config, config.m);
    auto& t = out.table;
    t.columns.push_back("converged_2m");
    bool all = true;
    if (t.value_column >= 0) {
      const Table fine = dispatch(config, 2 * config.m);
      for (size_t r = 0; r < t.rows.size(); ++r) {
        const auto& a = t.rows[r][t.value_column];
        const auto& b = fine.rows[r][t.value_column];
        bool ok = a.is_number() && b.is_number();
        if (ok) {
          const double x = a.get<double>();
          ok = std::abs(x - b.get<double>()) <= kAgreement * std::max(1.0, std::abs(x));
        }
        t.rows[r].push_back(ok);
        all = all && ok;
      }
    } else {
      for (auto& row : t.rows) row.push_back(true);
    }
    t.meta.insert(t.meta.begin(), {"2m_agreement", all ? "true" : "unconverged"});
    for (const auto& a : t.assertions)
      if (!a.pass) out.status = 1;
  } catch (const InvalidArgument& e) {
    out.status = 2;
    out.error = e.what();
  } catch (const NonConvergence& e) {
    out.status = 3;
    out.error = e.what();
  } catch (const NumericalError& e) {
    out.status = 3;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.status = 3;
    out.error = e.what();
  }
  return out;
}

std::string render_csv(const RunConfig& config, const Table& table) {
  std::string s = fmt::format("# {}\n# config {}\n# m {}\n", kToolVersion, config_json(config).dump(), config.m);
  for (const auto& [k, v] : table.meta) s += fmt::format("# {} {}\n", k, v);
  for (size_t j = 0; j < table.columns.size(); ++j) s += (j ? "," : "") + table.columns[j];
  s += "\n";
  for (const auto& row : table.rows) {
    for (size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + csv_cell(row[j]);
    s += "\n";
  }
  for (const auto& a : table.assertions)
    s += fmt::format("# assertion {},{},{}\n", csv_cell(a.name), a.pass ? "pass" : "fail", fmt15(a.margin));
  return s;
}

json render_json(const RunConfig& config, const Table& table) {
  json j;
  j["config"] = config_json(config);
  j["version"] = kToolVersion;
  j["meta"] = json::object();
  for (const auto& [k, v] : table.meta) j["meta"][k] = v;
  j["columns"] = table.columns;
  j["rows"] = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
    j["rows"].push_back(std::move(obj));
  }
  j["assertions"] = json::array();
  for (const auto& a : table.assertions) j["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"margin", num(a.margin)}});
  return j;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string interval, arc, preimage_real, preimage_circle, n_range, gammas, d_points, multiples, eps, degrees;
  bool circle = false;
  std::optional<int> m;
  std::optional<double> tolerance;

  CLI::App app{"Widom factors, extremal polynomials and pull-back measures", "widom"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--interval", interval, "support [a,b] as a,b");
    sub->add_option("--arc", arc, "support: arc with half-angle gamma around -1");
    sub->add_flag("--circle", circle, "support: unit circle");
    sub->add_option("--preimage-real", preimage_real, "support: Q^{-1}([-1,1]), coefficients constant first");
    sub->add_option("--preimage-circle", preimage_circle, "support: Q^{-1}(unit circle)");
    sub->add_option("--weight", config.weight, "polynomial weight, coefficients constant first");
    sub->add_option("--p", config.p, "exponent p >= 1");
    sub->add_option("--n", n_range, "degree range lo..hi or a single degree");
    sub->add_option("--gamma", gammas, "comma-separated gamma values");
    sub->add_option("--m", m, "quadrature size (default WIDOM_QUAD_M or 512)");
    sub->add_option("--format", config.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", config.output, "output file (default stdout)");
    sub->add_option("--tol", tolerance, "override the assertion tolerance");
    sub->add_option("--seed", config.seed, "seed for random weights");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"capacity", "logarithmic capacity of a support"},
                      {"entropy", "relative entropy of a weighted equilibrium measure"},
                      {"widom", "Widom factors and lower bounds of a weighted equilibrium measure"},
                      {"arc", "closed-form Widom factors on a circular arc"},
                      {"verblunsky", "closed-form vs quadrature Verblunsky coefficients on an arc"},
                      {"pullback", "Widom factors of a measure and its polynomial pull-back"},
                      {"reflectionless", "Widom factors of a reflectionless measure"},
                      {"saturate", "Widom factors of equilibrium measures of polynomial pre-images"},
                      {"sharpness", "W^p/S for weights concentrating at 0 (degree: lower end of --n)"},
                      {"verify", "verification suites"}};
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    const std::string name = s.name;
    if (name == "pullback" || name == "reflectionless" || name == "verify")
      sub->add_option("--T", config.t_poly, "polynomial T, coefficients constant first");
    if (name == "pullback") sub->add_option("--R", config.r_poly, "branch polynomial R (default T'/N)");
    if (name == "reflectionless") sub->add_option("--d", d_points, "gap points, comma-separated");
    if (name == "saturate") {
      sub->add_option("--Q", config.t_poly, "polynomial Q, coefficients constant first")->required();
      sub->add_option("--variant", config.variant, "real or circle")->check(CLI::IsMember({"real", "circle"}));
      sub->add_option("--k", multiples, "degree multiples, comma-separated");
    }
    if (name == "sharpness") {
      sub->add_option("--eps", eps, "epsilon grid, comma-separated");
      sub->add_option("--degrees", degrees, "approximant degrees, comma-separated");
    }
    if (name == "verify") {
      sub->add_option("suite", config.suite, "interval, arc-monotone, preimage-invariance, circle-powers, bounds")
          ->required()
          ->check(CLI::IsMember({"interval", "arc-monotone", "preimage-invariance", "circle-powers", "bounds"}));
      sub->add_option("--count", config.count, "number of random weights (bounds)");
      sub->add_option("--N", config.big_n, "power N (circle-powers)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  config.command = app.get_subcommands().front()->get_name();

  try {
    config.m = m ? *m : default_quadrature_size();
    config.tolerance = tolerance;
    if (!n_range.empty()) parse_range(n_range, config.n_lo, config.n_hi);
    if (!gammas.empty()) config.gammas = parse_doubles(gammas);
    if (!d_points.empty()) config.d_points = parse_doubles(d_points);
    if (!multiples.empty()) config.multiples = parse_ints(multiples);
    if (!eps.empty()) config.eps = parse_doubles(eps);
    if (!degrees.empty()) config.degrees = parse_ints(degrees);
    const int chosen = !interval.empty() + !arc.empty() + circle + !preimage_real.empty() + !preimage_circle.empty();
    if (chosen > 1) throw InvalidArgument("give at most one support option");
    if (!interval.empty()) {
      const auto ab = parse_doubles(interval);
      if (ab.size() != 2) throw InvalidArgument("--interval takes a,b");
      config.support = SupportDescriptor::interval(ab[0], ab[1]);
    } else if (!arc.empty()) {
      config.support = SupportDescriptor::arc(parse_doubles(arc).at(0));
    } else if (circle) {
      config.support = SupportDescriptor::unit_circle();
    } else if (!preimage_real.empty()) {
      config.support = SupportDescriptor::preimage_real(parse_polynomial(preimage_real));
    } else if (!preimage_circle.empty()) {
      config.support = SupportDescriptor::preimage_circle(parse_polynomial(preimage_circle));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const RunOutcome outcome = run(config);
  if (outcome.status == 2) {
    err << "error: " << outcome.error << "\n" << app.help();
    return 2;
  }
  if (outcome.status == 3) {
    err << "numerical failure: " << outcome.error << "\n";
    return 3;
  }
  const std::string text =
      config.format == "json" ? render_json(config, outcome.table).dump(2) + "\n" : render_csv(config, outcome.table);
  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output);
    if (!file) {
      err << "error: cannot write " << config.output << "\n";
      return 2;
    }
    file << text;
  }
  for (const auto& a : outcome.table.assertions)
    if (!a.pass) err << "failed: " << a.name << " (margin " << fmt15(a.margin) << ")\n";
  return outcome.status;
}

}  // namespace widom
