#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "jetinv/jets.hpp"

using namespace jetinv;

namespace {

Polynomial var(int base, int order = 0) {
  return Polynomial(Monomial::variable({base, order}), Rational(1));
}

// x^2 + y^2 + z^2 in a 3-variable raw ring
AffineScheme quadric_cone(std::optional<int> m) {
  const JetRing ring(3, m, Normalization::raw);
  Polynomial q = var(0) * var(0) + var(1) * var(1) + var(2) * var(2);
  return AffineScheme(ring, {q});
}

// 2x2 determinant x11 x22 - x12 x21 in a 4-variable ring
AffineScheme det_scheme(std::optional<int> m, Normalization norm) {
  const JetRing ring(4, m, norm);
  return AffineScheme(ring, {var(0) * var(3) - var(1) * var(2)});
}

}  // namespace

TEST_CASE("scheme construction validates its generators") {
  const JetRing ring(2, 3, Normalization::raw);
  CHECK_THROWS_AS(AffineScheme(ring, {var(0, 1)}), error);  // positive order
  CHECK_THROWS_AS(AffineScheme(ring, {var(0) + var(1) * var(1)}),
                  error);  // inhomogeneous
  CHECK_THROWS_AS(AffineScheme(ring, {var(7)}), error);  // outside the ring
  AffineScheme ok(ring, {var(0) * var(1), var(0) + var(1)});
  CHECK(ok.degree_of(0) == 2);
  CHECK(ok.degree_of(1) == 1);
}

TEST_CASE("jet ideal table holds the iterated derivatives") {
  for (Normalization norm : {Normalization::raw, Normalization::divided_power})
    for (int m = 0; m <= 3; ++m) {
      AffineScheme s = det_scheme(m, norm);
      JetIdealBasis jb = jet_ideal(s, m);
      CHECK(jb.m == m);
      REQUIRE(jb.derivatives.size() == 1);
      REQUIRE((int)jb.derivatives[0].size() == m + 1);
      for (int i = 0; i <= m; ++i) {
        const Polynomial& dif = jb.derivatives[0][i];
        CHECK(dif == iter_derive(s.ambient, s.generators[0], i));
        auto bd = dif.bidegree();
        REQUIRE(bd.has_value());
        CHECK(bd->first == 2);
        CHECK(bd->second == i);
      }
    }
}

TEST_CASE("ideal piece span equals an independently assembled span") {
  AffineScheme s = quadric_cone(2);
  const int m = 2;
  for (int d = 2; d <= 4; ++d)
    for (int w = 0; w <= 3; ++w) {
      LinearSpan lib = ideal_piece_span(s, m, d, w);
      // assemble the same products by hand, in a different loop order
      std::vector<Polynomial> prods;
      for (int i = std::min(w, m); i >= 0; --i) {
        Polynomial dif = iter_derive(s.ambient, s.generators[0], i);
        for (const Monomial& mon : graded_basis(s.ambient, d - 2, w - i))
          prods.push_back(Polynomial(mon, Rational(1)) * dif);
      }
      LinearSpan mine = LinearSpan::from_polynomials(d, w, m, prods);
      CHECK(lib.rank() == mine.rank());
      for (const Polynomial& row : mine.row_polynomials())
        CHECK(lib.contains(row));
      for (const Polynomial& row : lib.row_polynomials())
        CHECK(mine.contains(row));
    }
}

TEST_CASE("quotient dimension complements the ideal piece") {
  AffineScheme s = quadric_cone(1);
  for (int d = 1; d <= 4; ++d)
    for (int w = 0; w <= 2; ++w) {
      LinearSpan piece = ideal_piece_span(s, 1, d, w);
      CHECK(quotient_piece_dim(s, 1, d, w) ==
            graded_basis_count(s.ambient, d, w) - piece.rank());
    }
  // hand values for the quadric cone at m = 1:
  // degree 2: 6 monomials, ideal spans {q}, so 5 survive
  CHECK(quotient_piece_dim(s, 1, 2, 0) == 5);
  // (2,1): 9 products x_i x_j', ideal spans {Dq}, so 8
  CHECK(quotient_piece_dim(s, 1, 2, 1) == 8);
  // degree 1 pieces are never cut
  CHECK(quotient_piece_dim(s, 1, 1, 0) == 3);
  CHECK(quotient_piece_dim(s, 1, 1, 1) == 3);
}

TEST_CASE("ideal pieces are stable under the derivation") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(-3, 3);
  AffineScheme s = det_scheme(3, Normalization::divided_power);
  for (int d = 2; d <= 3; ++d)
    for (int w = 0; w <= 2; ++w) {
      LinearSpan piece = ideal_piece_span(s, 3, d, w);
      LinearSpan next = ideal_piece_span(s, 3, d, w + 1);
      for (const Polynomial& row : piece.row_polynomials())
        CHECK(next.contains(derive(s.ambient, row)));
      // random combinations too
      Polynomial comb;
      for (int r = 0; r < piece.rank(); ++r)
        comb += Rational(num(rng)) * piece.row_polynomial(r);
      CHECK(next.contains(derive(s.ambient, comb)));
    }
}

TEST_CASE("several generators combine into one ideal piece") {
  // coordinate cross x*y, y*z: products of both generators show up
  const JetRing ring(3, 1, Normalization::raw);
  AffineScheme s(ring, {var(0) * var(1), var(1) * var(2)});
  LinearSpan piece = ideal_piece_span(s, 1, 2, 0);
  CHECK(piece.rank() == 2);
  CHECK(piece.contains(var(0) * var(1)));
  CHECK(piece.contains(var(1) * var(2)));
  CHECK_FALSE(piece.contains(var(0) * var(2)));
  LinearSpan dpiece = ideal_piece_span(s, 1, 2, 1);
  CHECK(dpiece.rank() == 2);
  CHECK(dpiece.contains(derive(ring, var(0) * var(1))));
}
