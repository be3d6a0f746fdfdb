#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "jetinv/action.hpp"
#include "jetinv/orders.hpp"
#include "jetinv/smt.hpp"

using namespace jetinv;

namespace {

Polynomial random_poly(std::mt19937_64& rng, const JetRing& ring,
                       int max_terms = 3, int max_order = 2) {
  const int cap =
      ring.truncation() ? std::min(*ring.truncation(), max_order) : max_order;
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> var(0, ring.num_base_vars() - 1);
  std::uniform_int_distribution<int> ord(0, cap);
  std::uniform_int_distribution<int> nfac(1, 3);
  std::uniform_int_distribution<long> num(-4, 4);
  Polynomial p;
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial mon;
    const int f = nfac(rng);
    for (int j = 0; j < f; ++j)
      mon = mon.times(Monomial::variable({var(rng), ord(rng)}));
    p.add_term(mon, Rational(num(rng)));
  }
  return p;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  QMatrix c(a.nrows, b.ncols);
  for (int i = 0; i < a.nrows; ++i)
    for (int k = 0; k < a.ncols; ++k)
      for (int j = 0; j < b.ncols; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
  return c;
}

QMatrix sl2_e() {
  QMatrix m(2, 2);
  m.at(0, 1) = 1;
  return m;
}
QMatrix sl2_f() {
  QMatrix m(2, 2);
  m.at(1, 0) = 1;
  return m;
}
QMatrix sl2_h() {
  QMatrix m(2, 2);
  m.at(0, 0) = 1;
  m.at(1, 1) = -1;
  return m;
}

}  // namespace

TEST_CASE("act_matrix is a derivation at every level") {
  std::mt19937_64 rng(31);
  const JetRing ring(2, 4, Normalization::divided_power);
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<int> lvl(0, 3);
  for (int it = 0; it < 200; ++it) {
    QMatrix xi(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) xi.at(i, j) = Rational(num(rng));
    const int r = lvl(rng);
    Polynomial f = random_poly(rng, ring);
    Polynomial g = random_poly(rng, ring);
    CHECK(act_matrix(ring, xi, r, f * g) ==
          act_matrix(ring, xi, r, f) * g + f * act_matrix(ring, xi, r, g));
  }
}

TEST_CASE("acting at level r drops weight by r and keeps degree") {
  std::mt19937_64 rng(32);
  const JetRing ring(2, std::nullopt, Normalization::raw);
  std::uniform_int_distribution<int> lvl(0, 2);
  int checked = 0;
  for (int it = 0; it < 800; ++it) {
    Polynomial f = random_poly(rng, ring, 1);
    auto bd = f.bidegree();
    if (!bd) continue;
    const int r = lvl(rng);
    if (bd->second < r) continue;
    QMatrix xi = sl2_e();
    Polynomial g = act_matrix(ring, xi, r, f);
    if (g.is_zero()) continue;
    auto bd2 = g.bidegree();
    REQUIRE(bd2.has_value());
    CHECK(bd2->first == bd->first);
    CHECK(bd2->second == bd->second - r);
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("level-zero action commutes with the derivation") {
  std::mt19937_64 rng(33);
  const std::vector<JetRing> rings = {
      JetRing(2, std::nullopt, Normalization::raw),
      JetRing(2, std::nullopt, Normalization::divided_power)};
  std::uniform_int_distribution<long> num(-3, 3);
  for (int it = 0; it < 200; ++it) {
    const JetRing& ring = rings[it % 2];
    QMatrix xi(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) xi.at(i, j) = Rational(num(rng));
    Polynomial f = random_poly(rng, ring);
    CHECK(act_matrix(ring, xi, 0, derive(ring, f)) ==
          derive(ring, act_matrix(ring, xi, 0, f)));
  }
}

TEST_CASE("act_matrix refuses levels beyond the truncation") {
  const JetRing ring(1, 2, Normalization::raw);
  const Polynomial x(Monomial::variable({0, 0}), Rational(1));
  CHECK_THROWS_AS((void)act_matrix(ring, sl2_e(), 3, x), error);
}

TEST_CASE("torus action scales monomials by their weight sum") {
  std::mt19937_64 rng(34);
  auto spec = GroupActionSpec::torus({Rational(1), Rational(-1), Rational(2)});
  const JetRing ring(3, std::nullopt, Normalization::raw);
  const std::vector<Rational> w = spec.weights;
  std::uniform_int_distribution<int> var(0, 2), ord(0, 2), nfac(1, 4);
  for (int it = 0; it < 200; ++it) {
    Monomial mon;
    for (int j = 0; j < nfac(rng); ++j)
      mon = mon.times(Monomial::variable({var(rng), ord(rng)}));
    Rational total;
    for (const auto& [v, e] : mon.factors()) total += Rational(e) * w[v.base];
    const Polynomial f(mon, Rational(1));
    CHECK(act(ring, spec, 0, 0, f) == total * f);
  }
}

TEST_CASE("finite substitution composes like matrix products") {
  std::mt19937_64 rng(35);
  const JetRing ring(2, 3, Normalization::raw);
  std::uniform_int_distribution<long> num(-2, 2);
  for (int it = 0; it < 200; ++it) {
    QMatrix g1(2, 2), g2(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        g1.at(i, j) = Rational(num(rng));
        g2.at(i, j) = Rational(num(rng));
      }
    Polynomial f = random_poly(rng, ring);
    CHECK(act_finite(ring, g1, act_finite(ring, g2, f)) ==
          act_finite(ring, matmul(g1, g2), f));
    CHECK(act_finite(ring, g1, f * f) ==
          act_finite(ring, g1, f) * act_finite(ring, g1, f));
  }
  QMatrix id(2, 2);
  id.at(0, 0) = id.at(1, 1) = 1;
  Polynomial f = random_poly(rng, ring);
  CHECK(act_finite(ring, id, f) == f);
}

TEST_CASE("group closure sizes and the closure bound") {
  QMatrix minus(1, 1);
  minus.at(0, 0) = -1;
  CHECK(group_closure(GroupActionSpec::finite({minus})).size() == 2);

  QMatrix rot(2, 2);  // quarter turn, order 4
  rot.at(0, 1) = -1;
  rot.at(1, 0) = 1;
  CHECK(group_closure(GroupActionSpec::finite({rot})).size() == 4);
  CHECK_THROWS_AS((void)group_closure(GroupActionSpec::finite({rot}, 3)),
                  error);
}

TEST_CASE("sign-flip invariants are the even-degree pieces") {
  QMatrix minus(1, 1);
  minus.at(0, 0) = -1;
  auto spec = GroupActionSpec::finite({minus});
  const JetRing ring(1, 3, Normalization::raw);
  for (int d = 1; d <= 4; ++d)
    for (int w = 0; w <= 4; ++w) {
      LinearSpan inv = invariant_piece(ring, spec, 3, d, w);
      const long expect = (d % 2 == 0) ? graded_basis_count(ring, d, w) : 0;
      CHECK(inv.rank() == expect);
    }
}

TEST_CASE("weight-zero torus invariants are the balanced monomials") {
  // at w = 0 only the level-0 scaling acts, so the count is combinatorial
  auto spec = GroupActionSpec::torus(
      {Rational(1), Rational(-1), Rational(2), Rational(-2)});
  const JetRing ring(4, 2, Normalization::raw);
  for (int d = 1; d <= 5; ++d) {
    LinearSpan inv = invariant_piece(ring, spec, 2, d, 0);
    long expect = 0;
    for (const Monomial& mon : graded_basis(ring, d, 0)) {
      Rational total;
      for (const auto& [v, e] : mon.factors())
        total += Rational(e) * spec.weights[v.base];
      if (total == 0) ++expect;
    }
    CHECK(inv.rank() == expect);
  }
}

namespace {
// Multisets k_1 <= ... <= k_parts with sum w and every k_i <= cap.
long bounded_partitions(int w, int parts, int cap) {
  if (w == 0) return 1;
  if (parts == 0 || cap == 0) return 0;
  long total = 0;
  for (int top = 1; top <= std::min(w, cap); ++top)
    total += bounded_partitions(w - top, parts - 1, top);
  return total;
}
}  // namespace

TEST_CASE("pair-torus invariant dimensions follow partition counts") {
  // weights (1, -1): invariants are spanned by products of D^k(x y),
  // so the (2r, w) piece counts partitions of w into <= r parts <= m
  auto spec = GroupActionSpec::torus({Rational(1), Rational(-1)});
  for (int m = 1; m <= 3; ++m) {
    const JetRing ring(2, m, Normalization::raw);
    for (int d = 1; d <= 6; ++d)
      for (int w = 0; w <= 4; ++w) {
        LinearSpan inv = invariant_piece(ring, spec, m, d, w);
        const long expect =
            (d % 2 == 0) ? bounded_partitions(w, d / 2, m) : 0;
        CHECK(inv.rank() == expect);
        for (const Polynomial& row : inv.row_polynomials())
          for (int r = 0; r <= std::min(w, m); ++r)
            CHECK(act(ring, spec, 0, r, row).is_zero());
      }
  }
}

TEST_CASE("lie invariants are killed by every generator and level") {
  auto spec = GroupActionSpec::lie({sl2_e(), sl2_f(), sl2_h()});
  const JetRing ring(2, 2, Normalization::divided_power);
  for (int d = 2; d <= 4; ++d)
    for (int w = 0; w <= 3; ++w) {
      LinearSpan inv = invariant_piece(ring, spec, 2, d, w);
      for (const Polynomial& row : inv.row_polynomials())
        for (int gen = 0; gen < 3; ++gen)
          for (int r = 0; r <= std::min(w, 2); ++r)
            CHECK(act(ring, spec, gen, r, row).is_zero());
    }
}

TEST_CASE("corner reduction agrees with the full invariant computation") {
  // two copies of the SL_2 vector representation
  const SlLayout lay{2, 2};
  auto g_spec = GroupActionSpec::lie(sl_rep_generators(lay));
  const QMatrix X = sl_corner(lay);
  for (int m = 1; m <= 2; ++m) {
    const JetRing ring = lay.ring(m);
    for (int d = 1; d <= 4; ++d)
      for (int w = 0; w <= 3; ++w) {
        LinearSpan full = invariant_piece(ring, g_spec, m, d, w);
        LinearSpan red = sl_reduce_invariant_piece(ring, g_spec, X, m, d, w);
        CHECK(full.rank() == red.rank());
        for (const Polynomial& row : full.row_polynomials())
          CHECK(red.contains(row));
        for (const Polynomial& row : red.row_polynomials())
          CHECK(full.contains(row));
      }
  }
}
