#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "random_specs.hpp"
#include "widom/error.hpp"
#include "widom/extremal.hpp"
#include "widom/potential.hpp"
#include "widom/preimage.hpp"

using namespace widom;
using testing_support::interval_samples;

namespace {

DiscretizedMeasure unit_interval(int m) { return build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), m); }

DiscretizedMeasure cosine_circle(int m) {
  const auto base = build_equilibrium(SupportDescriptor::unit_circle(), m, std::numbers::pi / m);
  return apply_weight(base, [](Complex z) { return 1.0 + z.real(); });
}

}  // namespace

TEST_CASE("spec construction checks degree and leading coefficient") {
  CHECK_THROWS_AS(PullbackSpec(Polynomial{-1.0, 0.0, 2.0}, Polynomial{0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(PullbackSpec(Polynomial{-1.0, 0.0, 2.0}, Polynomial{1.0, 0.0, 2.0}), InvalidArgument);
  CHECK_NOTHROW(PullbackSpec(Polynomial{-1.0, 0.0, 2.0}, Polynomial{0.0, 2.0}));
  CHECK_FALSE(PullbackSpec(Polynomial{-1.0, 0.0, 2.0}, Polynomial{0.0, 2.0}).validated());
  CHECK(PullbackSpec::standard(Polynomial{-1.0, 0.0, 2.0}).validated());
}

TEST_CASE("validate_spec") {
  const auto samples = interval_samples(100);
  const auto ok = validate_spec(PullbackSpec(Polynomial{-2.0, 0.0, 1.0}, Polynomial{0.0, 1.0}), samples);
  CHECK(ok.valid);
  CHECK(ok.identity_error < 1e-10);
  REQUIRE(ok.spec.has_value());
  CHECK(ok.spec->validated());

  // R = x - 1.2 changes sign on [-sqrt3, -1] u [1, sqrt3].
  const auto bad = validate_spec(PullbackSpec(Polynomial{-2.0, 0.0, 1.0}, Polynomial{-1.2, 1.0}), samples);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.offending_point.has_value());
  CHECK(bad.offending_point->real() > 1.0);
  CHECK_FALSE(bad.message.empty());
}

TEST_CASE("pullback needs a validated spec") {
  CHECK_THROWS_AS(pullback(PullbackSpec(Polynomial{-2.0, 0.0, 1.0}, Polynomial{0.0, 1.0}), unit_interval(16)),
                  InvalidArgument);
}

TEST_CASE("pullback of the arcsine law under 2x^2 - 1") {
  const auto mu0 = unit_interval(256);
  const auto mu = pullback(PullbackSpec::standard(Polynomial{-1.0, 0.0, 2.0}), mu0);
  CHECK(mu.size() == 512);
  CHECK(mu.provenance() == "pullback");
  CHECK(mu.support().holds<PreimageReal>());
  CHECK(std::abs(mu.mass() - mu0.mass()) < 1e-12);
  for (int k = 0; k <= 12; ++k)
    CHECK(std::abs(moment(mu, k).real() - oracle::arcsine_moment(k) / std::pow(2.0, k)) < 1e-10);
}

TEST_CASE("pullback of a weighted circle measure under z^2") {
  const auto mu0 = cosine_circle(256);
  const auto mu = pullback(PullbackSpec::standard(Polynomial{0.0, 0.0, 1.0}), mu0);
  CHECK(mu.support().holds<PreimageCircle>());
  CHECK(std::abs(moment(mu, 0) - 1.0) < 1e-12);
  CHECK(std::abs(moment(mu, 1)) < 1e-12);
  CHECK(std::abs(moment(mu, 2) - 0.5) < 1e-12);
  CHECK(std::abs(moment(mu, -2) - 0.5) < 1e-12);
  CHECK(std::abs(moment(mu, 4)) < 1e-12);
  REQUIRE(mu.density().has_value());
  for (size_t i = 0; i < mu.size(); ++i) {
    const Complex z = mu.nodes()[i];
    CHECK(std::abs((*mu.density())[i] - (1.0 + (z * z).real())) < 1e-12);
  }
}

TEST_CASE("pullback carries atoms") {
  const auto mu0 = unit_interval(32).with_atom(0.5, 0.25);
  const auto mu = pullback(PullbackSpec::standard(Polynomial{-1.0, 0.0, 2.0}), mu0);
  CHECK(mu.atom_count() == 2);
  CHECK(std::abs(mu.mass() - 1.25) < 1e-12);
}

TEST_CASE("random specs preserve mass and satisfy the partial-fraction identity") {
  std::mt19937_64 rng(3);
  const auto samples = interval_samples(100);
  const auto mu0 = apply_weight(unit_interval(128), Polynomial{2.0, 0.5, 0.3});
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = testing_support::random_spec(rng, 1 + trial % 5);
    const auto report = validate_spec(spec, samples);
    REQUIRE(report.valid);
    CHECK(report.identity_error < 1e-10);
    CHECK(report.min_branch_weight > 0.0);
    const auto mu = pullback(*report.spec, mu0);
    CHECK(std::abs(mu.mass() - mu0.mass()) < 1e-12);
  }
}

TEST_CASE("common zeros of R and T' cancel") {
  const Polynomial t{-2.0, 0.0, 1.0};  // T' = 2x, gap critical point 0
  const PullbackSpec spec(t, Polynomial{0.0, 1.0});  // R = x = T'/2
  CHECK(std::abs(spec.branch_weight(0.0) - 0.5) < 1e-15);
}

TEST_CASE("entropy and Widom factors are invariant under pullback") {
  const auto mu0 = apply_weight(unit_interval(1024), Polynomial{1.5, 0.3, 0.4});
  for (const Polynomial& t : {Polynomial{-1.0, 0.0, 2.0}, Polynomial{0.0, -1.5, 0.0, 0.5}}) {
    const auto mu = pullback(PullbackSpec::standard(t), mu0);
    CHECK(std::abs(relative_entropy(mu) - relative_entropy(mu0)) < 1e-8 * relative_entropy(mu0));
    const int big_n = t.degree();
    for (const double p : {1.0, 2.0, 3.0}) {
      for (int n = 1; n <= 5; ++n) {
        const double w0 = lp_extremal(mu0, p, n).t / std::pow(capacity(mu0.support()).cap, n);
        const double w = lp_extremal(mu, p, n * big_n).t / std::pow(capacity(mu.support()).cap, n * big_n);
        INFO("N=" << big_n << " p=" << p << " n=" << n);
        CHECK(std::abs(w - w0) < 1e-7 * w0);
      }
    }
  }
}

TEST_CASE("lifted extremal polynomials") {
  const Polynomial t{-1.0, 0.0, 2.0};
  const auto spec = PullbackSpec::standard(t);
  const auto mu0 = unit_interval(512);
  const auto mu = pullback(spec, mu0);
  const auto lifted = lift_extremal(spec, mu0, mu, MonicPoly::power(1), 2.0);
  REQUIRE(lifted.poly.degree() == 2);
  CHECK(std::abs(lifted.poly.coefficients()[0] + 0.5) < 1e-15);
  CHECK(std::abs(lifted.poly.coefficients()[1]) < 1e-15);
  CHECK(lifted.norm_ok);
  CHECK(lifted.widom_ok);

  const auto identity = PullbackSpec::standard(Polynomial{0.0, 1.0});
  const MonicPoly tn(std::vector<Complex>{0.25, -0.5, 1.0});
  const auto same = lift_extremal(identity, mu0, pullback(identity, mu0), tn, 2.0);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(same.poly.coefficients()[k] - tn.coefficients()[k]) < 1e-15);

  const auto weighted = apply_weight(mu0, Polynomial{1.5, 0.3, 0.4});
  const auto wmu = pullback(PullbackSpec::standard(Polynomial{0.0, -1.5, 0.0, 0.5}), weighted);
  for (const double p : {2.0, 3.0}) {
    for (int n = 1; n <= 3; ++n) {
      const auto tn_p = lp_extremal(weighted, p, n).poly;
      const auto l = lift_extremal(PullbackSpec::standard(Polynomial{0.0, -1.5, 0.0, 0.5}), weighted, wmu, tn_p, p);
      CHECK(l.norm_ok);
      CHECK(l.widom_ok);
      CHECK(l.norm <= lp_extremal(wmu, p, 3 * n).t * (1.0 + 1e-10));
      CHECK(extremality_residual(wmu, p, l.poly) < 1e-6);
    }
  }
  CHECK_THROWS_AS(lift_extremal(spec, mu0, mu0, MonicPoly::power(1), 2.0), InvalidArgument);
}

TEST_CASE("circle power extremals") {
  const auto uniform = build_equilibrium(SupportDescriptor::unit_circle(), 64);
  const auto up = pullback(PullbackSpec::standard(Polynomial{0.0, 0.0, 1.0}), uniform);
  const auto r = circle_power_extremal(MonicPoly::power(1), 1, 2, uniform, up, 2.0);
  REQUIRE(r.poly.degree() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r.poly.coefficients()[k]) < 1e-15);

  const auto mu0 = cosine_circle(256);
  const auto mu = pullback(PullbackSpec::standard(Polynomial{0.0, 0.0, 1.0}), mu0);
  const auto phi1 = orthogonal_monic(mu0, 1).poly;
  CHECK(std::abs(phi1.coefficients()[0] + 0.5) < 1e-13);
  const auto s = circle_power_extremal(phi1, 1, 2, mu0, mu, 2.0);
  CHECK(std::abs(s.poly.coefficients()[1] + 0.5) < 1e-13);
  CHECK(std::abs(s.poly.coefficients()[3] - 1.0) == 0.0);
  CHECK(s.norm_ok);
  CHECK(s.widom_ok);
  CHECK(s.residual < 1e-8);

  CHECK_THROWS_AS(circle_power_extremal(phi1, 2, 2, mu0, mu, 2.0), InvalidArgument);
  CHECK_THROWS_AS(circle_power_extremal(phi1, -1, 2, mu0, mu, 2.0), InvalidArgument);
}

TEST_CASE("band structure") {
  const auto bands = band_structure(Polynomial{-2.0, 0.0, 1.0});
  REQUIRE(bands.gaps.size() == 1);
  CHECK(std::abs(bands.gaps[0].lo + 1.0) < 1e-12);
  CHECK(std::abs(bands.gaps[0].hi - 1.0) < 1e-12);
  CHECK(std::abs(bands.gaps[0].critical) < 1e-12);
  REQUIRE(bands.bands.size() == 2);
  CHECK(std::abs(bands.bands[0].first + std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(bands.bands[1].second - std::sqrt(3.0)) < 1e-12);

  CHECK(band_structure(Polynomial{-1.0, 0.0, 2.0}).gaps.empty());
  CHECK_THROWS_AS(band_structure(Polynomial{0.0, 0.0, 0.0, 1.0}), InvalidArgument);
}

TEST_CASE("reflectionless measures") {
  const ReflectionlessSpec none(Polynomial{-1.0, 0.0, 2.0}, {});
  const auto eq = reflectionless_measure(none, 256).measure;
  for (int k = 0; k <= 8; ++k)
    CHECK(std::abs(moment(eq, k).real() - oracle::arcsine_moment(k) / std::pow(2.0, k)) < 1e-10);

  const ReflectionlessSpec centered(Polynomial{-2.0, 0.0, 1.0}, {0.0});
  const auto mu_eq = reflectionless_measure(centered, 512);
  CHECK(mu_eq.perturbations.empty());
  CHECK(mu_eq.measure.is_equilibrium(1e-12));
  const double w = lp_extremal(mu_eq.measure, 2.0, 2).t / std::pow(capacity(mu_eq.measure.support()).cap, 2);
  CHECK(std::abs(w * w - 2.0) < 1e-8);

  const ReflectionlessSpec shifted(Polynomial{-2.0, 0.0, 1.0}, {0.5});
  const auto mu = reflectionless_measure(shifted, 512).measure;
  for (int n = 1; n <= 3; ++n) {
    const double wn = lp_extremal(mu, 2.0, 2 * n).t / std::pow(capacity(mu.support()).cap, 2 * n);
    CHECK(std::abs(wn * wn - 2.0) < 1e-7);
  }

  const ReflectionlessSpec edge(Polynomial{-2.0, 0.0, 1.0}, {1.0});
  const auto edged = reflectionless_measure(edge, 256);
  REQUIRE(edged.perturbations.size() == 1);
  CHECK(std::abs(edged.perturbations[0].used - (1.0 - 2e-6)) < 1e-12);

  CHECK_THROWS_AS(ReflectionlessSpec(Polynomial{-2.0, 0.0, 1.0}, {1.5}), InvalidArgument);
  CHECK_THROWS_AS(ReflectionlessSpec(Polynomial{-2.0, 0.0, 1.0}, {}), InvalidArgument);
}

TEST_CASE("Gamma-function Widom value") {
  CHECK(std::abs(gamma_widom_value(2.0) - 2.0) < 1e-14);
  CHECK(std::abs(gamma_widom_value(1.0) - 4.0 / std::numbers::pi) < 1e-14);
  CHECK(std::abs(gamma_widom_value(4.0) - 6.0) < 1e-13);
  for (double p = 1.0; p <= 20.0; p += 0.25) {
    const double ref = std::pow(2.0, p) / std::sqrt(std::numbers::pi) * oracle::lanczos_gamma(0.5 * (p + 1.0)) /
                       oracle::lanczos_gamma(0.5 * p + 1.0);
    CHECK(std::abs(gamma_widom_value(p) - ref) < 1e-13 * ref);
  }
  CHECK(std::isfinite(gamma_widom_value(400.0)));
  CHECK_THROWS_AS(gamma_widom_value(0.5), InvalidArgument);
}

TEST_CASE("saturation") {
  const int one[] = {1};
  const auto real = saturation_check(Polynomial{-1.0, 0.0, 2.0}, SaturationVariant::kRealInterval, 2.0, one, 512);
  REQUIRE(real.rows.size() == 1);
  CHECK(real.rows[0].degree == 2);
  CHECK(std::abs(real.rows[0].widom - std::sqrt(2.0)) < 1e-8);
  CHECK(real.pass);

  const int ks[] = {1, 2};
  const auto circ = saturation_check(Polynomial{0.0, 0.0, 0.0, 1.0}, SaturationVariant::kCircle, 2.0, ks, 512);
  REQUIRE(circ.rows.size() == 2);
  CHECK(circ.rows[1].degree == 6);
  for (const auto& r : circ.rows) CHECK(std::abs(r.widom - 1.0) < 1e-8);
  CHECK(circ.pass);

  const auto line = saturation_check(Polynomial{0.0, 0.5}, SaturationVariant::kRealInterval, 2.0, one, 512);
  CHECK(std::abs(line.rows[0].widom - std::sqrt(2.0)) < 1e-8);

  CHECK_THROWS_AS(saturation_check(Polynomial(std::vector<Complex>{0.0, Complex(0.0, 1.0)}),
                                   SaturationVariant::kRealInterval, 2.0, one, 64),
                  InvalidArgument);
  CHECK_THROWS_AS(saturation_check(Polynomial{0.0, 0.0, 0.0, 1.0}, SaturationVariant::kRealInterval, 2.0, one, 64),
                  InvalidArgument);
}
