#include "jetinv/orders.hpp"

#include <algorithm>

namespace jetinv {

namespace {

// Expands a monomial restricted to one side of the torus split into the
// flat factor list (with multiplicity), ascending under (order, index).
std::vector<JetVariable> side_word(const CstarLayout& lay, const Monomial& m,
                                   bool x_side) {
  std::vector<JetVariable> out;
  for (const auto& [v, e] : m.factors()) {
    if (lay.is_x(v) != x_side) continue;
    for (int i = 0; i < e; ++i) out.push_back(v);
  }
  std::sort(out.begin(), out.end(),
            [](JetVariable a, JetVariable b) {
              return std::pair(a.order, a.base) < std::pair(b.order, b.base);
            });
  return out;
}

}  // namespace

std::strong_ordering CstarWordOrder::compare(const Monomial& a,
                                             const Monomial& b) const {
  if (auto c = a.weight() <=> b.weight(); c != 0) return c;
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  const auto ua = side_word(layout, a, true), va = side_word(layout, a, false);
  const auto ub = side_word(layout, b, true), vb = side_word(layout, b, false);
  if (ua.size() != va.size() || ub.size() != vb.size())
    throw error("cstar_word_order: unbalanced monomial (x-degree != y-degree)");
  // equal weight and degree, hence equal r; interleave u1,v1,u2,v2,...
  for (std::size_t s = 0; s < ua.size(); ++s) {
    auto key = [](JetVariable v) { return std::pair(v.order, v.base); };
    if (auto c = key(ua[s]) <=> key(ub[s]); c != 0) return c;
    if (auto c = key(va[s]) <=> key(vb[s]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering sln_variable_compare(const SlLayout& lay, JetVariable a,
                                          JetVariable b) {
  const PairOmega wa{a.order, lay.copy(a)}, wb{b.order, lay.copy(b)};
  if (auto c = wa <=> wb; c != 0) return c;
  return lay.coord(b) <=> lay.coord(a);  // reversed coordinate index
}

std::strong_ordering SlnOrder::compare(const Monomial& a,
                                       const Monomial& b) const {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  if (auto c = a.weight() <=> b.weight(); c != 0) return c;
  // Removing one copy of the largest variable per round is equivalent to
  // lexicographic comparison of the descending-sorted factor sequences.
  auto desc = [&](const Monomial& m) {
    std::vector<JetVariable> out;
    for (const auto& [v, e] : m.factors())
      for (int i = 0; i < e; ++i) out.push_back(v);
    std::sort(out.begin(), out.end(), [&](JetVariable p, JetVariable q) {
      return sln_variable_compare(layout, p, q) > 0;
    });
    return out;
  };
  const auto da = desc(a), db = desc(b);
  for (std::size_t i = 0; i < da.size(); ++i)
    if (auto c = sln_variable_compare(layout, da[i], db[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

MonomialCmp to_cmp(const CstarWordOrder& order) {
  return [order](const Monomial& a, const Monomial& b) {
    return order.compare(a, b) < 0;
  };
}

MonomialCmp to_cmp(const SlnOrder& order) {
  return [order](const Monomial& a, const Monomial& b) {
    return order.compare(a, b) < 0;
  };
}

}  // namespace jetinv
