#pragma once

#include <string>

#include "widom/measures.hpp"
#include "widom/support.hpp"

namespace widom {

struct CapacityResult {
  double cap = 0.0;
  std::string method;  ///< "closed-form" or "preimage-relation"
};

/// Logarithmic capacity of the four supported families. Pre-images use
/// Cap(Q^{-1}(K0))^N = Cap(K0) / |lead(Q)|.
CapacityResult capacity(const SupportDescriptor& support);

/// exp(sum_i wK_i log w(z_i)), the discretized exp of int log w dmu_K, where
/// w is the density that `mu` carries and wK are the weights of `mu_k`.
/// The continuous nodes of both measures must coincide. Throws
/// InvalidArgument if `mu` carries no density.
double relative_entropy(const DiscretizedMeasure& mu, const DiscretizedMeasure& mu_k);

/// Same, with the equilibrium weights recovered as w_i / rho_i from mu itself.
double relative_entropy(const DiscretizedMeasure& mu);

/// S_K(w) for an evaluable weight against the equilibrium discretization
/// mu_k. Returns 0 if w vanishes at a node; throws if w < 0 somewhere.
double relative_entropy(const DiscretizedMeasure& mu_k, const WeightFunction& w);

}  // namespace widom
