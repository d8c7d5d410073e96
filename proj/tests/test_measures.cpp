#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "widom/error.hpp"
#include "widom/measures.hpp"

using namespace widom;

TEST_CASE("equilibrium of an interval is a probability measure") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 64);
  CHECK(std::abs(mu.mass() - 1.0) < 1e-14);
  CHECK(mu.provenance() == "equilibrium");
  CHECK(mu.is_equilibrium());
  for (const auto& z : mu.nodes()) CHECK(mu.support().distance(z) <= 1e-10);
}

TEST_CASE("arc equilibrium first moment") {
  const double gamma = std::numbers::pi / 2;
  const auto mu = build_equilibrium(SupportDescriptor::arc(gamma), 128);
  Complex first = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) first += mu.weights()[i] * mu.nodes()[i];
  CHECK(std::abs(first - oracle::arc_cos_moment(1, gamma)) < 1e-12);
  CHECK(std::abs(first + 0.5) < 1e-12);
}

TEST_CASE("arc equilibrium matches the density on a grid of moments") {
  for (const double gamma : {0.5, 1.3, 2.5}) {
    const auto mu = build_equilibrium(SupportDescriptor::arc(gamma), 256);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(moment(mu, k).real() - oracle::arc_cos_moment(k, gamma)) < 1e-12);
  }
}

TEST_CASE("arc weights are all equal") {
  const auto mu = build_equilibrium(SupportDescriptor::arc(1.0), 100);
  for (const double w : mu.weights()) CHECK(w == mu.weights()[0]);
}

TEST_CASE("unit circle nodes are equispaced") {
  const auto mu = build_equilibrium(SupportDescriptor::unit_circle(), 100);
  CHECK(std::abs(mu.mass() - 1.0) < 1e-14);
  for (size_t k = 0; k < mu.size(); ++k) {
    CHECK(std::abs(mu.nodes()[k] - std::polar(1.0, 2.0 * std::numbers::pi * k / 100)) < 1e-15);
    CHECK(mu.weights()[k] == 1.0 / 100);
  }
}

TEST_CASE("quadrature size is validated") {
  CHECK_THROWS_AS(build_equilibrium(SupportDescriptor::interval(0.0, 1.0), 7), InvalidArgument);
}

TEST_CASE("apply_weight") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 64);
  const auto same = apply_weight(mu, Polynomial{1.0});
  for (size_t i = 0; i < mu.size(); ++i) CHECK(same.weights()[i] == mu.weights()[i]);
  CHECK(same.provenance() == "weighted");

  const auto heavy = apply_weight(mu, Polynomial{1.0, 0.0, 1.0});
  CHECK(std::abs(heavy.mass() - (1.0 + oracle::arcsine_moment(2))) < 1e-13);
  CHECK(std::abs(heavy.mass() - 3.0) < 1e-13);

  CHECK_THROWS_AS(apply_weight(mu, Polynomial{0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(apply_weight(mu, Polynomial(std::vector<Complex>{Complex(1.0, 1.0)})), InvalidArgument);
}

TEST_CASE("apply_weight is multiplicative") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), 200);
  const Polynomial w1{2.0, 0.5};
  const Polynomial w2{1.0, 0.0, 0.3};
  const auto twice = apply_weight(apply_weight(mu, w1), w2);
  const auto once = apply_weight(mu, w1 * w2);
  for (size_t i = 0; i < mu.size(); ++i)
    CHECK(std::abs(twice.weights()[i] - once.weights()[i]) <= 1e-14 * once.weights()[i]);
}

TEST_CASE("moments") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 64);
  CHECK(std::abs(moment(mu, 1)) < 1e-13);
  CHECK(std::abs(moment(mu, 2) - 2.0) < 1e-10);
  const auto circle = build_equilibrium(SupportDescriptor::unit_circle(), 64);
  CHECK(std::abs(moment(circle, 3)) < 1e-13);
}

TEST_CASE("doubling m leaves moments unchanged") {
  const SupportDescriptor supports[] = {SupportDescriptor::interval(-2.0, 2.0), SupportDescriptor::interval(0.0, 3.0),
                                        SupportDescriptor::arc(0.7), SupportDescriptor::arc(2.9),
                                        SupportDescriptor::unit_circle()};
  for (const auto& k : supports) {
    const auto coarse = build_equilibrium(k, 256);
    const auto fine = build_equilibrium(k, 512);
    for (int j = k.is_real() ? 0 : -20; j <= 20; ++j) {
      const Complex a = moment(coarse, j);
      const Complex b = moment(fine, j);
      CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("interval moments match the arcsine law") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 512);
  for (int k = 0; k <= 20; ++k)
    CHECK(std::abs(moment(mu, k).real() - oracle::arcsine_moment(k)) < 1e-10 * std::max(1.0, oracle::arcsine_moment(k)));
}

TEST_CASE("measure invariants are enforced") {
  const auto k = SupportDescriptor::interval(-1.0, 1.0);
  CHECK_THROWS_AS(DiscretizedMeasure({0.0, 0.5}, {0.5, 0.0}, k, "weighted"), InvalidArgument);
  CHECK_THROWS_AS(DiscretizedMeasure({0.0, 1.5}, {0.5, 0.5}, k, "weighted"), InvalidArgument);
  CHECK_THROWS_AS(DiscretizedMeasure({0.0, 0.5}, {0.5, 0.6}, k, "equilibrium"), InvalidArgument);
  CHECK_NOTHROW(DiscretizedMeasure({0.0, 0.5}, {0.5, 0.6}, k, "weighted"));
}

TEST_CASE("atoms are appended after the continuous part") {
  const auto mu = build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), 16);
  const auto with = mu.with_atom(0.25, 0.5);
  CHECK(with.size() == 17);
  CHECK(with.atom_count() == 1);
  CHECK(with.continuous_size() == 16);
  CHECK(std::abs(with.mass() - 1.5) < 1e-14);
  CHECK_FALSE(with.is_equilibrium());
}
