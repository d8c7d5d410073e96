#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "widom/error.hpp"
#include "widom/measures.hpp"
#include "widom/potential.hpp"

using namespace widom;

TEST_CASE("capacities in closed form") {
  CHECK(capacity(SupportDescriptor::interval(-2.0, 2.0)).cap == 1.0);
  CHECK(capacity(SupportDescriptor::interval(-2.0, 2.0)).method == "closed-form");
  CHECK(std::abs(capacity(SupportDescriptor::arc(std::numbers::pi / 2)).cap - std::sqrt(0.5)) < 1e-15);
  CHECK(capacity(SupportDescriptor::unit_circle()).cap == 1.0);
}

TEST_CASE("pre-image capacities") {
  const auto r = capacity(SupportDescriptor::preimage_real(Polynomial{-1.0, 0.0, 2.0}));
  CHECK(r.method == "preimage-relation");
  CHECK(std::abs(r.cap - 0.5) < 1e-15);
  CHECK(std::abs(r.cap - capacity(SupportDescriptor::interval(-1.0, 1.0)).cap) < 1e-15);
  CHECK(std::abs(capacity(SupportDescriptor::preimage_real(Polynomial{0.0, 0.5})).cap - 1.0) < 1e-15);
}

TEST_CASE("pre-image relation is exact") {
  const Polynomial qs[] = {Polynomial{-2.0, 0.0, 1.0}, Polynomial{0.3, -1.5, 0.0, 0.5}, Polynomial{1.0, 2.0, 0.0, 0.0, 3.0}};
  for (const auto& q : qs) {
    const double cap = capacity(SupportDescriptor::preimage_real(q)).cap;
    CHECK(std::abs(std::pow(cap, q.degree()) * std::abs(q.leading()) - 0.5) < 1e-14);
    const double ccap = capacity(SupportDescriptor::preimage_circle(q)).cap;
    CHECK(std::abs(std::pow(ccap, q.degree()) * std::abs(q.leading()) - 1.0) < 1e-14);
  }
}

TEST_CASE("relative entropy") {
  const auto mu_k = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 512);
  CHECK(std::abs(relative_entropy(mu_k) - 1.0) < 1e-15);

  const auto mu = apply_weight(mu_k, Polynomial{1.0, 0.0, 1.0});
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double dense = std::exp(oracle::tanh_sinh(
      [](double phi) { return std::log(4.0 * std::cos(phi) * std::cos(phi) + 1.0) / std::numbers::pi; }, 0.0,
      std::numbers::pi));
  CHECK(std::abs(dense - golden * golden) < 1e-10);
  CHECK(std::abs(relative_entropy(mu) - golden * golden) < 1e-10);
  CHECK(std::abs(relative_entropy(mu, mu_k) - golden * golden) < 1e-10);
}

TEST_CASE("entropy of a weight vanishing at a node is zero") {
  const auto mu_k = build_equilibrium(SupportDescriptor::interval(-1.0, 1.0), 9);  // x = 0 is a node
  CHECK(relative_entropy(mu_k, [](Complex z) { return std::abs(z) < 1e-12 ? 0.0 : 1.0; }) == 0.0);
  CHECK_THROWS_AS(relative_entropy(mu_k, [](Complex z) { return z.real(); }), InvalidArgument);
}

TEST_CASE("entropy needs a density") {
  const auto k = SupportDescriptor::interval(-1.0, 1.0);
  const DiscretizedMeasure bare({0.0, 0.5}, {0.5, 0.5}, k, "weighted");
  CHECK_THROWS_AS(relative_entropy(bare), InvalidArgument);
}

TEST_CASE("entropy is multiplicative and homogeneous") {
  const auto mu_k = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 256);
  const Polynomial w1{3.0, 1.0};
  const Polynomial w2{2.0, 0.0, 0.5};
  const double s1 = relative_entropy(apply_weight(mu_k, w1));
  const double s2 = relative_entropy(apply_weight(mu_k, w2));
  const double s12 = relative_entropy(apply_weight(mu_k, w1 * w2));
  CHECK(std::abs(s12 - s1 * s2) < 1e-12 * s12);
  const double sc = relative_entropy(apply_weight(mu_k, w1 * Complex(4.5)));
  CHECK(std::abs(sc - 4.5 * s1) < 1e-12 * sc);
}

TEST_CASE("atoms do not change the entropy") {
  const auto mu_k = build_equilibrium(SupportDescriptor::interval(-2.0, 2.0), 64);
  const auto mu = apply_weight(mu_k, Polynomial{2.0, 0.5});
  CHECK(relative_entropy(mu.with_atom(1.0, 3.0)) == relative_entropy(mu));
}
