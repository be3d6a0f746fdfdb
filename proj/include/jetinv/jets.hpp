#pragma once

#include <optional>
#include <vector>

#include "jetinv/diffring.hpp"
#include "jetinv/linalg.hpp"

namespace jetinv {

// An affine scheme cut out by homogeneous polynomials in the order-0
// variables.  The ambient ring carries the normalization used downstream;
// generators must be degree-homogeneous and free of positive-order variables.
struct AffineScheme {
  JetRing ambient;
  std::vector<Polynomial> generators;

  AffineScheme(JetRing ring, std::vector<Polynomial> gens);

  [[nodiscard]] int degree_of(int gen) const;
};

// Derivatives D^i f_l for 0 <= i <= m, the natural generating set of the
// jet ideal at truncation m.
struct JetIdealBasis {
  int m = 0;
  std::vector<std::vector<Polynomial>> derivatives;  // [gen][order]
};

JetIdealBasis jet_ideal(const AffineScheme& scheme, int m);

// Span of the ideal's bidegree-(d, w) piece at truncation m: all products
// M * D^i f_l with M a monomial of the complementary bidegree.
LinearSpan ideal_piece_span(const AffineScheme& scheme, int m, int d, int w,
                            const MonomialCmp& cmp = structural_cmp());

// Dimension of the (d, w) piece of the jet scheme's coordinate ring,
// i.e. of the quotient by the jet ideal.
long long quotient_piece_dim(const AffineScheme& scheme, int m, int d, int w);

}  // namespace jetinv
