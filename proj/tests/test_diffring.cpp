#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "jetinv/diffring.hpp"
#include "jetinv/rational.hpp"

using namespace jetinv;

namespace {

// Random sparse polynomial over `ring`, orders capped by the truncation.
Polynomial random_poly(std::mt19937_64& rng, const JetRing& ring,
                       int max_terms = 4, int max_order = 3, int max_exp = 2) {
  const int cap =
      ring.truncation() ? std::min(*ring.truncation(), max_order) : max_order;
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> var(0, ring.num_base_vars() - 1);
  std::uniform_int_distribution<int> ord(0, cap);
  std::uniform_int_distribution<int> ex(1, max_exp);
  std::uniform_int_distribution<int> nfac(0, 3);
  std::uniform_int_distribution<long> num(-5, 5);
  Polynomial p;
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial mon;
    const int f = nfac(rng);
    for (int j = 0; j < f; ++j)
      mon = mon.times(Monomial::variable({var(rng), ord(rng)}, ex(rng)));
    p.add_term(mon, Rational(num(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("integer helpers agree with small tables") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(4, 7) == 0);
  CHECK(falling_factorial(7, 3) == 7 * 6 * 5);
  CHECK(falling_factorial(7, 0) == 1);
  CHECK(rational_from_string("-3/6") == Rational(-1, 2));
  CHECK_THROWS_AS((void)rational_from_string("x"), error);
}

TEST_CASE("monomial multiplication and division invert each other") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> var(0, 3), ord(0, 4), ex(1, 3);
  for (int it = 0; it < 200; ++it) {
    Monomial a, b;
    for (int j = 0; j < 3; ++j) {
      a = a.times(Monomial::variable({var(rng), ord(rng)}, ex(rng)));
      b = b.times(Monomial::variable({var(rng), ord(rng)}, ex(rng)));
    }
    const Monomial ab = a.times(b);
    auto q = ab.divided_by(b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
    // dividing by something with a fresh variable fails
    Monomial c = b.times(Monomial::variable({9, 0}));
    CHECK_FALSE(a.divided_by(c).has_value());
  }
}

TEST_CASE("parse / to_string round-trips") {
  std::mt19937_64 rng(12);
  const JetRing raw(3, 5, Normalization::raw);
  const JetRing dp(2, std::nullopt, Normalization::divided_power);
  for (int it = 0; it < 200; ++it) {
    for (const JetRing* ring : {&raw, &dp}) {
      Polynomial p = random_poly(rng, *ring);
      Polynomial q = parse_polynomial(*ring, to_string(p));
      CHECK(q == p);
    }
  }
  CHECK_THROWS_AS((void)parse_polynomial(raw, "x[1]^^2"), error);
  CHECK_THROWS_AS((void)parse_polynomial(raw, "x[0]"), error);
  // y aliases shift past the declared x block
  const JetRing tor(4, std::nullopt, Normalization::raw);
  ParseOptions opt;
  opt.x_count = 2;
  Polynomial p = parse_polynomial(tor, "x[2]*y[1]^(1)", opt);
  Polynomial q = parse_polynomial(tor, "x[2]*x[3]^(1)");
  CHECK(p == q);
}

TEST_CASE("derivation satisfies the Leibniz rule") {
  std::mt19937_64 rng(13);
  const std::vector<JetRing> rings = {
      JetRing(2, std::nullopt, Normalization::raw),
      JetRing(2, 3, Normalization::raw),
      JetRing(3, std::nullopt, Normalization::divided_power),
      JetRing(3, 4, Normalization::divided_power)};
  for (int it = 0; it < 200; ++it) {
    const JetRing& ring = rings[it % rings.size()];
    Polynomial f = random_poly(rng, ring);
    Polynomial g = random_poly(rng, ring);
    CHECK(derive(ring, f * g) == derive(ring, f) * g + f * derive(ring, g));
  }
}

TEST_CASE("derivation shifts weight by one and keeps degree") {
  std::mt19937_64 rng(14);
  const JetRing ring(2, std::nullopt, Normalization::raw);
  int checked = 0;
  for (int it = 0; it < 400; ++it) {
    Polynomial f = random_poly(rng, ring, 1);
    auto bd = f.bidegree();
    if (!bd || f.is_zero()) continue;
    Polynomial df = derive(ring, f);
    if (df.is_zero()) continue;  // constants
    auto bd2 = df.bidegree();
    REQUIRE(bd2.has_value());
    CHECK(bd2->first == bd->first);
    CHECK(bd2->second == bd->second + 1);
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("truncation commutes with the derivation") {
  std::mt19937_64 rng(15);
  for (int m = 1; m <= 3; ++m) {
    const JetRing full(2, std::nullopt, Normalization::divided_power);
    const JetRing trunc = full.truncated(m);
    for (int it = 0; it < 80; ++it) {
      Polynomial f = random_poly(rng, trunc, 3, m);
      // f lives in both rings; derive upstairs, then drop orders > m
      Polynomial up = derive(full, parse_polynomial(full, to_string(f)));
      Polynomial cut;
      for (const auto& [mon, c] : up.terms()) {
        bool keep = true;
        for (const auto& [v, e] : mon.factors())
          if (v.order > m) keep = false;
        if (keep) cut.add_term(mon, c);
      }
      CHECK(cut == derive(trunc, f));
    }
  }
}

TEST_CASE("iter_derive composes single steps") {
  std::mt19937_64 rng(16);
  const JetRing ring(2, 6, Normalization::divided_power);
  for (int it = 0; it < 200; ++it) {
    Polynomial f = random_poly(rng, ring, 2, 2);
    Polynomial g = iter_derive(ring, f, 3);
    Polynomial h = derive(ring, derive(ring, derive(ring, f)));
    CHECK(g == h);
  }
}

TEST_CASE("derivative powers of a base variable in both conventions") {
  const JetRing raw(1, std::nullopt, Normalization::raw);
  const JetRing dp(1, std::nullopt, Normalization::divided_power);
  const Polynomial x(Monomial::variable({0, 0}), Rational(1));
  // raw: D^k x = x^(k); divided powers: D^k x = k! x^[k]
  CHECK(iter_derive(raw, x, 4) ==
        Polynomial(Monomial::variable({0, 4}), Rational(1)));
  CHECK(iter_derive(dp, x, 4) ==
        Polynomial(Monomial::variable({0, 4}), Rational(24)));
}

TEST_CASE("renormalize converts between conventions and back") {
  std::mt19937_64 rng(17);
  const JetRing raw(2, 4, Normalization::raw);
  const JetRing dp(2, 4, Normalization::divided_power);
  for (int it = 0; it < 200; ++it) {
    Polynomial f = random_poly(rng, raw);
    Polynomial g = renormalize(f, Normalization::raw, Normalization::divided_power);
    CHECK(renormalize(g, Normalization::divided_power, Normalization::raw) == f);
    // the derivation commutes with the change of convention
    CHECK(renormalize(derive(raw, f), Normalization::raw,
                      Normalization::divided_power) == derive(dp, g));
  }
}

TEST_CASE("divided_by_term undoes multiplication by a term") {
  std::mt19937_64 rng(18);
  const JetRing ring(3, 5, Normalization::raw);
  std::uniform_int_distribution<int> var(0, 2), ord(0, 5), num(1, 7);
  for (int it = 0; it < 200; ++it) {
    Polynomial f = random_poly(rng, ring);
    Monomial t = Monomial::variable({var(rng), ord(rng)});
    Rational c(num(rng), num(rng));
    c.canonicalize();
    Polynomial tf = f * Polynomial(t, c);
    CHECK(tf.divided_by_term(t, c) == f);
  }
  Polynomial x1(Monomial::variable({0, 0}), Rational(1));
  CHECK_THROWS_AS((void)x1.divided_by_term(Monomial::variable({1, 0}),
                                           Rational(1)),
                  error);
}

TEST_CASE("graded_basis enumerates each bidegree exactly once") {
  const JetRing ring(2, 3, Normalization::raw);
  for (int d = 0; d <= 4; ++d)
    for (int w = 0; w <= 5; ++w) {
      auto basis = graded_basis(ring, d, w);
      CHECK((long)basis.size() == graded_basis_count(ring, d, w));
      std::set<Monomial> seen;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const Monomial& mon = basis[i];
        CHECK(seen.insert(mon).second);
        CHECK(mon.degree() == d);
        CHECK(mon.weight() == w);
        for (const auto& [v, e] : mon.factors()) CHECK(v.order <= 3);
        if (i > 0)
          CHECK(structural_graded_compare(basis[i - 1], mon) ==
                std::strong_ordering::less);
      }
    }
  // the truncation bites: weight 4 in degree 1 needs an order-4 variable
  CHECK(graded_basis_count(ring, 1, 4) == 0);
  const JetRing full(2, std::nullopt, Normalization::raw);
  CHECK(graded_basis_count(full, 1, 4) == 2);
}

TEST_CASE("substitute is a ring map") {
  std::mt19937_64 rng(19);
  const JetRing src(2, 2, Normalization::raw);
  const JetRing dst(2, 4, Normalization::raw);
  // images compatible with nothing in particular; substitute only needs
  // a map on variables
  std::vector<Polynomial> images;
  for (int v = 0; v < 2; ++v)
    for (int k = 0; k <= 2; ++k)
      images.push_back(iter_derive(dst, random_poly(rng, dst, 2, 1), k));
  auto img = [&](JetVariable v) { return images[v.base * 3 + v.order]; };
  for (int it = 0; it < 100; ++it) {
    Polynomial f = random_poly(rng, src, 2, 2);
    Polynomial g = random_poly(rng, src, 2, 2);
    CHECK(substitute(f * g, img) == substitute(f, img) * substitute(g, img));
    CHECK(substitute(f + g, img) == substitute(f, img) + substitute(g, img));
  }
}
