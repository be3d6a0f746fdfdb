#pragma once

#include <compare>

#include "jetinv/diffring.hpp"
#include "jetinv/linalg.hpp"

namespace jetinv {

/*──────────────────────────────────────────────────────────────────────────
  The two mathematical monomial orders.  Each carries its variable-universe
  layout, since flat base indices alone cannot be decoded into copy and
  coordinate structure.
 ──────────────────────────────────────────────────────────────────────────*/

/// Layout of a torus x/y ring: bases 0..nx-1 are x_1..x_nx (weight +1),
/// bases nx..nx+ny-1 are y_1..y_ny (weight -1).
struct CstarLayout {
  int nx = 0;
  int ny = 0;

  [[nodiscard]] bool is_x(JetVariable v) const { return v.base < nx; }
  [[nodiscard]] JetRing ring(std::optional<int> m) const {
    return JetRing(nx + ny, m, Normalization::raw);
  }
  [[nodiscard]] std::vector<Rational> weights() const {
    std::vector<Rational> w(nx, 1);
    w.insert(w.end(), ny, Rational(-1));
    return w;
  }
};

/// Word order on balanced monomials: compare total weight, then degree,
/// then the interleaved factor sequence u1,v1,u2,v2,... where u (the x
/// part) and v (the y part) are sorted ascending under (order, index).
/// Throws on unbalanced monomials (x-degree != y-degree).
struct CstarWordOrder {
  CstarLayout layout;
  [[nodiscard]] std::strong_ordering compare(const Monomial& a,
                                             const Monomial& b) const;
};

/// Layout of an SL_n ring with `copies` copies of the standard n-space:
/// base = copy*n + coord, so x_i^{(j,k)} has base (j-1)*n + (i-1).
struct SlLayout {
  int n = 0;
  int copies = 0;

  [[nodiscard]] int coord(JetVariable v) const { return v.base % n; }  // 0-based
  [[nodiscard]] int copy(JetVariable v) const { return v.base / n; }   // 0-based
  [[nodiscard]] JetVariable var(int coord, int copy, int k) const {
    return {copy * n + coord, k};
  }
  [[nodiscard]] JetRing ring(std::optional<int> m,
                             Normalization norm = Normalization::divided_power)
      const {
    return JetRing(n * copies, m, norm);
  }
};

/// Pair label (copy j, order k) of a divided-power variable x_i^{(j,k)};
/// ordered by k, then j (member order makes the defaulted comparison match).
struct PairOmega {
  int k = 0;
  int copy = 0;  // 0-based
  friend constexpr auto operator<=>(const PairOmega&, const PairOmega&) =
      default;
};

/// Variable order: pairs first; for equal pairs the *larger* coordinate
/// index is the smaller variable (x_1^w > x_2^w > ... > x_n^w).
[[nodiscard]] std::strong_ordering sln_variable_compare(const SlLayout& lay,
                                                        JetVariable a,
                                                        JetVariable b);

/// Recursive order: degree, weight, then repeatedly compare the largest
/// remaining variable of each side, removing one copy per round.
struct SlnOrder {
  SlLayout layout;
  [[nodiscard]] std::strong_ordering compare(const Monomial& a,
                                             const Monomial& b) const;
};

[[nodiscard]] inline std::strong_ordering compare_monomials(
    const CstarWordOrder& order, const Monomial& a, const Monomial& b) {
  return order.compare(a, b);
}
[[nodiscard]] inline std::strong_ordering compare_monomials(
    const SlnOrder& order, const Monomial& a, const Monomial& b) {
  return order.compare(a, b);
}

[[nodiscard]] MonomialCmp to_cmp(const CstarWordOrder& order);
[[nodiscard]] MonomialCmp to_cmp(const SlnOrder& order);

}  // namespace jetinv
