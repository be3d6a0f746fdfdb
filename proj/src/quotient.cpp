#include "jetinv/quotient.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "jetinv/smt.hpp"

namespace jetinv {

std::string to_string(Family f) {
  switch (f) {
    case Family::sl_std: return "sl";
    case Family::gl_std: return "gl";
    case Family::so_std: return "so";
    case Family::sp_std: return "sp";
    case Family::torus: return "torus";
    case Family::finite: return "finite";
    case Family::custom: return "custom";
  }
  throw internal_error("unknown family");
}

Family family_from_string(const std::string& s) {
  if (s == "sl") return Family::sl_std;
  if (s == "gl") return Family::gl_std;
  if (s == "so") return Family::so_std;
  if (s == "sp") return Family::sp_std;
  if (s == "torus") return Family::torus;
  if (s == "finite") return Family::finite;
  if (s == "custom") return Family::custom;
  throw error("unknown family '" + s + "'");
}

namespace {

/// Copies of a size-s generator block along the diagonal: `copies` plain
/// blocks followed by `duals` blocks of -transpose.
QMatrix embed_blocks(const QMatrix& small, int copies, int duals) {
  const int s = small.nrows;
  const int total = s * (copies + duals);
  QMatrix big(total, total);
  for (int c = 0; c < copies; ++c)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        big.at(c * s + i, c * s + j) = small.at(i, j);
  for (int c = 0; c < duals; ++c) {
    const int off = (copies + c) * s;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        big.at(off + i, off + j) = -small.at(j, i);
  }
  return big;
}

std::vector<QMatrix> sl_small_basis(int n) {
  std::vector<QMatrix> out;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      QMatrix e(n, n);
      e.at(p, q) = 1;
      out.push_back(std::move(e));
    }
  for (int i = 0; i + 1 < n; ++i) {
    QMatrix h(n, n);
    h.at(i, i) = 1;
    h.at(i + 1, i + 1) = -1;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<QMatrix> gl_small_basis(int n) {
  std::vector<QMatrix> out;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      QMatrix e(n, n);
      e.at(p, q) = 1;
      out.push_back(std::move(e));
    }
  return out;
}

std::vector<QMatrix> so_small_basis(int n) {
  std::vector<QMatrix> out;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      QMatrix e(n, n);
      e.at(p, q) = 1;
      e.at(q, p) = -1;
      out.push_back(std::move(e));
    }
  return out;
}

// sp_{2n} for the form J = [[0, I], [-I, 0]]: blocks [[A, B], [C, -A^T]]
// with B and C symmetric.
std::vector<QMatrix> sp_small_basis(int n) {
  std::vector<QMatrix> out;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      QMatrix e(2 * n, 2 * n);
      e.at(p, q) = 1;
      e.at(n + q, n + p) = -1;
      out.push_back(std::move(e));
    }
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      QMatrix b(2 * n, 2 * n);
      b.at(p, n + q) = 1;
      if (p != q) b.at(q, n + p) = 1;
      out.push_back(std::move(b));
      QMatrix c(2 * n, 2 * n);
      c.at(n + p, q) = 1;
      if (p != q) c.at(n + q, p) = 1;
      out.push_back(std::move(c));
    }
  return out;
}

std::vector<QMatrix> embed_all(const std::vector<QMatrix>& small, int copies,
                               int duals) {
  std::vector<QMatrix> out;
  out.reserve(small.size());
  for (const auto& s : small) out.push_back(embed_blocks(s, copies, duals));
  return out;
}

}  // namespace

RepresentationSpec RepresentationSpec::sl(int n, int k, int l) {
  if (n < 2) throw error("sl family needs n >= 2");
  if (k < 0 || l < 0) throw error("copy counts must be nonnegative");
  if (k + l == 0) throw error("sl family needs at least one copy");
  RepresentationSpec rep;
  rep.family = Family::sl_std;
  rep.n = n;
  rep.k = k;
  rep.l = l;
  rep.action = GroupActionSpec::lie(embed_all(sl_small_basis(n), k, l));
  rep.normalization = Normalization::divided_power;
  return rep;
}

RepresentationSpec RepresentationSpec::gl(int n, int k, int l) {
  if (n < 1) throw error("gl family needs n >= 1");
  if (k < 0 || l < 0) throw error("copy counts must be nonnegative");
  if (k + l == 0) throw error("gl family needs at least one copy");
  RepresentationSpec rep;
  rep.family = Family::gl_std;
  rep.n = n;
  rep.k = k;
  rep.l = l;
  rep.action = GroupActionSpec::lie(embed_all(gl_small_basis(n), k, l));
  return rep;
}

RepresentationSpec RepresentationSpec::so(int n, int k) {
  if (n < 2) throw error("so family needs n >= 2");
  if (k < 1) throw error("so family needs k >= 1");
  RepresentationSpec rep;
  rep.family = Family::so_std;
  rep.n = n;
  rep.k = k;
  rep.action = GroupActionSpec::lie(embed_all(so_small_basis(n), k, 0));
  return rep;
}

RepresentationSpec RepresentationSpec::sp(int n, int k) {
  if (n < 1) throw error("sp family needs n >= 1");
  if (k < 1) throw error("sp family needs k >= 1");
  RepresentationSpec rep;
  rep.family = Family::sp_std;
  rep.n = n;
  rep.k = k;
  rep.action = GroupActionSpec::lie(embed_all(sp_small_basis(n), k, 0));
  return rep;
}

RepresentationSpec RepresentationSpec::torus_rep(std::vector<Rational> weights) {
  RepresentationSpec rep;
  rep.family = Family::torus;
  rep.torus_weights = weights;
  rep.action = GroupActionSpec::torus(std::move(weights));
  return rep;
}

RepresentationSpec RepresentationSpec::finite_rep(
    std::vector<QMatrix> generators) {
  RepresentationSpec rep;
  rep.family = Family::finite;
  rep.action = GroupActionSpec::finite(std::move(generators));
  return rep;
}

RepresentationSpec RepresentationSpec::custom(GroupActionSpec action,
                                              Normalization norm) {
  RepresentationSpec rep;
  rep.family = Family::custom;
  rep.action = std::move(action);
  rep.normalization = norm;
  return rep;
}

JetRing RepresentationSpec::ring(std::optional<int> m) const {
  return JetRing(action.dim(), m, normalization);
}

MonomialCmp RepresentationSpec::piece_cmp() const {
  if (family == Family::sl_std && l == 0)
    return to_cmp(SlnOrder{SlLayout{n, k}});
  return structural_cmp();
}

QMatrix RepresentationSpec::corner_matrix() const {
  if (family != Family::sl_std)
    throw error("corner_matrix is defined for the sl family only");
  QMatrix x(n, n);
  x.at(n - 1, 0) = 1;
  return embed_blocks(x, k, l);
}

LinearSpan rep_invariant_piece(const RepresentationSpec& rep, int m, int d,
                               int w) {
  const JetRing r = rep.ring(m);
  if (rep.has_sl_reduction())
    return sl_reduce_invariant_piece(r, rep.action, rep.corner_matrix(), m, d,
                                     w, rep.piece_cmp());
  return invariant_piece(r, rep.action, m, d, w, rep.piece_cmp());
}

/*────────────────────────── presentations ────────────────────────────────*/

QuotientPresentation::QuotientPresentation(JetRing base,
                                           std::vector<NamedPoly> generators,
                                           std::vector<Polynomial> relations)
    : base_(base.truncated(std::nullopt)),
      generators_(std::move(generators)),
      relations_(std::move(relations)) {
  for (auto& g : generators_) {
    base_.validate(g.poly);
    const auto bd = g.poly.bidegree();
    if (!bd || bd->second != 0)
      throw error("generator '" + g.name +
                  "' must be homogeneous of weight zero");
    for (const auto& [mon, c] : g.poly.terms())
      for (const auto& [v, e] : mon.factors())
        if (v.order != 0)
          throw error("generator '" + g.name + "' must use order-0 variables");
    if (g.degree == 0) g.degree = bd->first;
    if (g.degree != bd->first)
      throw error("generator '" + g.name + "' has inconsistent degree");
  }
  const JetRing formal = formal_ring(std::nullopt);
  for (const auto& rel : relations_) {
    formal.validate(rel);
    for (const auto& [mon, c] : rel.terms())
      for (const auto& [v, e] : mon.factors())
        if (v.order != 0)
          throw error("relations must be order-0 formal polynomials");
    if (!pullback(base_, rel).is_zero())
      throw error("relation " + to_string(rel) +
                  " does not vanish on the generators");
  }
}

JetRing QuotientPresentation::formal_ring(std::optional<int> m) const {
  return JetRing(int(generators_.size()), m, Normalization::raw);
}

Polynomial QuotientPresentation::pullback(const JetRing& target,
                                          const Polynomial& formal) const {
  formal_ring(std::nullopt).validate(formal);
  return substitute(formal, [&](JetVariable v) {
    return iter_derive(target, generators_[std::size_t(v.base)].poly, v.order);
  });
}

/*────────────────────── determinant-style helpers ────────────────────────*/

namespace {

int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

/// det over an explicit entry grid: entry[i][j] sits in row i, column j.
Polynomial det_of_entries(
    const std::vector<std::vector<JetVariable>>& entry) {
  const int n = int(entry.size());
  Polynomial out;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    Monomial mon;
    for (int i = 0; i < n; ++i) mon = mon.times(entry[i][perm[i]]);
    out.add_term(mon, Rational(permutation_sign(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Determinant of n column vectors; columns[t][i] is the row-i variable.
Polynomial det_of_columns(const std::vector<std::vector<JetVariable>>& cols) {
  std::vector<std::vector<JetVariable>> entry(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t t = 0; t < cols.size(); ++t)
      entry[i].push_back(cols[t][i]);
  return det_of_entries(entry);
}

Polynomial pfaffian_formal(const std::vector<int>& idx,
                           const std::function<JetVariable(int, int)>& entry) {
  if (idx.empty()) return Polynomial(Rational(1));
  Polynomial out;
  for (std::size_t t = 1; t < idx.size(); ++t) {
    std::vector<int> rest;
    for (std::size_t s = 1; s < idx.size(); ++s)
      if (s != t) rest.push_back(idx[s]);
    Polynomial term = Polynomial(Monomial::variable(entry(idx[0], idx[t])),
                                 Rational(t % 2 == 1 ? 1 : -1)) *
                      pfaffian_formal(rest, entry);
    out += term;
  }
  return out;
}

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (int(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

std::string subset_name(const std::vector<int>& t, const char* suffix = "") {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) s += " ";
    s += std::to_string(t[i] + 1);
  }
  s += suffix;
  s += "]";
  return s;
}

/// Exchange relations among the size-n minors of an n x `copies` matrix:
/// for every (n-1)-set A and (n+1)-set B, sum_t +-[A,B_t][B\B_t] = 0.
/// `det_index` maps a sorted n-subset to its formal variable.
std::vector<Polynomial> exchange_relations(
    int n, int copies,
    const std::map<std::vector<int>, int>& det_index) {
  std::vector<Polynomial> out;
  std::set<std::string> seen;
  for (const auto& alpha : combinations(copies, n - 1))
    for (const auto& beta : combinations(copies, n + 1)) {
      Polynomial rel;
      for (std::size_t t = 0; t < beta.size(); ++t) {
        const int bt = beta[t];
        if (std::binary_search(alpha.begin(), alpha.end(), bt))
          continue;  // repeated column, the minor is zero
        std::vector<int> merged = alpha;
        merged.push_back(bt);
        std::sort(merged.begin(), merged.end());
        int above = 0;  // alpha entries past bt: transpositions to sort
        for (int a : alpha)
          if (a > bt) ++above;
        std::vector<int> rest;
        for (std::size_t s = 0; s < beta.size(); ++s)
          if (s != t) rest.push_back(beta[s]);
        const int sign = ((int(t) + above) % 2 == 0) ? 1 : -1;
        const Monomial mon =
            Monomial::variable({det_index.at(merged), 0})
                .times(JetVariable{det_index.at(rest), 0});
        rel.add_term(mon, Rational(sign));
      }
      if (rel.is_zero()) continue;
      if (seen.count(to_string(rel)) || seen.count(to_string(-rel))) continue;
      seen.insert(to_string(rel));
      out.push_back(std::move(rel));
    }
  return out;
}

void monomials_of_degree(int nvars, int d,
                         const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> exps(nvars, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nvars - 1) {
      exps[var] = left;
      f(exps);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      exps[var] = e;
      rec(var + 1, left - e);
    }
  };
  if (nvars == 0) return;
  rec(0, d);
}

/// All products of derivatives of the given polynomials landing in the
/// (d, w) piece: multisets of (index, order) with order <= max_order,
/// degrees summing to d, and weights (intrinsic + order) summing to w.
std::vector<Polynomial> derivative_products(const JetRing& ring,
                                            const std::vector<Polynomial>& gens,
                                            const std::vector<int>& degs,
                                            const std::vector<int>& wts,
                                            int max_order, int d, int w) {
  const int cap = std::min(max_order, w);
  std::vector<std::vector<Polynomial>> derivs(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    derivs[j].push_back(gens[j]);
    for (int i = 1; i <= cap; ++i)
      derivs[j].push_back(derive(ring, derivs[j].back()));
  }
  std::vector<Polynomial> out;
  std::function<void(std::size_t, int, int, int, const Polynomial&)> rec =
      [&](std::size_t j0, int i0, int rem_d, int rem_w, const Polynomial& acc) {
        if (rem_d == 0) {
          if (rem_w == 0 && !acc.is_zero()) out.push_back(acc);
          return;
        }
        for (std::size_t j = j0; j < gens.size(); ++j)
          for (int i = (j == j0 ? i0 : 0); i <= cap; ++i) {
            const int nd = rem_d - degs[j];
            const int nw = rem_w - wts[j] - i;
            if (nd < 0 || nw < 0) continue;
            if (derivs[j][std::size_t(i)].is_zero()) continue;
            rec(j, i, nd, nw, acc * derivs[j][std::size_t(i)]);
          }
      };
  rec(0, 0, d, w, Polynomial(Rational(1)));
  return out;
}

}  // namespace

/*──────────────────────── classical generators ───────────────────────────*/

namespace {

QuotientPresentation sl_presentation(const RepresentationSpec& rep) {
  const int n = rep.n, k = rep.k, l = rep.l;
  const JetRing base = rep.ring(std::nullopt);
  std::vector<NamedPoly> gens;
  std::map<std::vector<int>, int> kdet_index, ldet_index;
  std::map<std::pair<int, int>, int> contr_index;

  auto column = [&](int copy, int offset) {
    std::vector<JetVariable> col;
    for (int i = 0; i < n; ++i) col.push_back({offset + copy * n + i, 0});
    return col;
  };
  for (const auto& t : combinations(k, n)) {
    std::vector<std::vector<JetVariable>> cols;
    for (int c : t) cols.push_back(column(c, 0));
    kdet_index[t] = int(gens.size());
    gens.push_back({subset_name(t), det_of_columns(cols), n});
  }
  for (const auto& t : combinations(l, n)) {
    std::vector<std::vector<JetVariable>> cols;
    for (int c : t) cols.push_back(column(c, n * k));
    ldet_index[t] = int(gens.size());
    gens.push_back({subset_name(t, "*"), det_of_columns(cols), n});
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < l; ++b) {
      Polynomial contr;
      for (int i = 0; i < n; ++i)
        contr.add_term(Monomial::variable({a * n + i, 0})
                           .times(JetVariable{n * k + b * n + i, 0}),
                       Rational(1));
      contr_index[{a, b}] = int(gens.size());
      gens.push_back({"a[" + std::to_string(a + 1) + "," +
                          std::to_string(b + 1) + "]",
                      contr, 2});
    }

  std::vector<Polynomial> rels;
  if (k >= n + 2) {
    auto side = exchange_relations(n, k, kdet_index);
    rels.insert(rels.end(), side.begin(), side.end());
  }
  if (l >= n + 2) {
    auto side = exchange_relations(n, l, ldet_index);
    rels.insert(rels.end(), side.begin(), side.end());
  }
  if (k == n && l == n) {
    // det of the contraction matrix equals the product of the two
    // determinants
    std::vector<std::vector<JetVariable>> entry(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        entry[a].push_back({contr_index.at({a, b}), 0});
    Polynomial rel = det_of_entries(entry);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    rel -= Polynomial(Monomial::variable({kdet_index.at(all), 0})
                          .times(JetVariable{ldet_index.at(all), 0}),
                      Rational(1));
    rels.push_back(std::move(rel));
  }
  if (k == n + 1 && l == n - 1) {
    // bordered determinant: the contraction row is linearly dependent on
    // the coordinate rows, so its Laplace expansion vanishes
    for (int b = 0; b < l; ++b) {
      Polynomial rel;
      for (int a = 0; a < k; ++a) {
        std::vector<int> hat;
        for (int c = 0; c < k; ++c)
          if (c != a) hat.push_back(c);
        rel.add_term(Monomial::variable({contr_index.at({a, b}), 0})
                         .times(JetVariable{kdet_index.at(hat), 0}),
                     Rational(a % 2 == 0 ? 1 : -1));
      }
      rels.push_back(std::move(rel));
    }
  }
  return QuotientPresentation(base, std::move(gens), std::move(rels));
}

QuotientPresentation gl_presentation(const RepresentationSpec& rep) {
  const int n = rep.n, k = rep.k, l = rep.l;
  const JetRing base = rep.ring(std::nullopt);
  std::vector<NamedPoly> gens;
  std::map<std::pair<int, int>, int> contr_index;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < l; ++b) {
      Polynomial contr;
      for (int i = 0; i < n; ++i)
        contr.add_term(Monomial::variable({a * n + i, 0})
                           .times(JetVariable{n * k + b * n + i, 0}),
                       Rational(1));
      contr_index[{a, b}] = int(gens.size());
      gens.push_back({"a[" + std::to_string(a + 1) + "," +
                          std::to_string(b + 1) + "]",
                      contr, 2});
    }
  std::vector<Polynomial> rels;
  if (k >= n + 1 && l >= n + 1) {
    // the contraction matrix has rank at most n
    for (const auto& rows : combinations(k, n + 1))
      for (const auto& cols : combinations(l, n + 1)) {
        std::vector<std::vector<JetVariable>> entry(n + 1);
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= n; ++j)
            entry[i].push_back({contr_index.at({rows[i], cols[j]}), 0});
        rels.push_back(det_of_entries(entry));
      }
  }
  return QuotientPresentation(base, std::move(gens), std::move(rels));
}

QuotientPresentation so_presentation(const RepresentationSpec& rep) {
  const int n = rep.n, k = rep.k;
  const JetRing base = rep.ring(std::nullopt);
  std::vector<NamedPoly> gens;
  std::map<std::pair<int, int>, int> gram_index;
  std::map<std::vector<int>, int> det_index;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Polynomial ip;
      for (int i = 0; i < n; ++i)
        ip.add_term(Monomial::variable({a * n + i, 0})
                        .times(JetVariable{b * n + i, 0}),
                    Rational(1));
      gram_index[{a, b}] = int(gens.size());
      gens.push_back({"a[" + std::to_string(a + 1) + "," +
                          std::to_string(b + 1) + "]",
                      ip, 2});
    }
  if (k >= n)
    for (const auto& t : combinations(k, n)) {
      std::vector<std::vector<JetVariable>> cols;
      for (int c : t) {
        std::vector<JetVariable> col;
        for (int i = 0; i < n; ++i) col.push_back({c * n + i, 0});
        cols.push_back(std::move(col));
      }
      det_index[t] = int(gens.size());
      gens.push_back({subset_name(t), det_of_columns(cols), n});
    }
  std::vector<Polynomial> rels;
  if (k == n) {
    std::vector<std::vector<JetVariable>> entry(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        entry[a].push_back(
            {gram_index.at({std::min(a, b), std::max(a, b)}), 0});
    Polynomial rel = det_of_entries(entry);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    rel -= Polynomial(Monomial::variable({det_index.at(all), 0}, 2),
                      Rational(1));
    rels.push_back(std::move(rel));
  }
  return QuotientPresentation(base, std::move(gens), std::move(rels));
}

QuotientPresentation sp_presentation(const RepresentationSpec& rep) {
  const int n = rep.n, k = rep.k;
  const int dim = 2 * n;
  const JetRing base = rep.ring(std::nullopt);
  std::vector<NamedPoly> gens;
  std::map<std::pair<int, int>, int> omega_index;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      Polynomial om;
      for (int p = 0; p < n; ++p) {
        om.add_term(Monomial::variable({a * dim + p, 0})
                        .times(JetVariable{b * dim + n + p, 0}),
                    Rational(1));
        om.add_term(Monomial::variable({a * dim + n + p, 0})
                        .times(JetVariable{b * dim + p, 0}),
                    Rational(-1));
      }
      omega_index[{a, b}] = int(gens.size());
      gens.push_back({"w[" + std::to_string(a + 1) + "," +
                          std::to_string(b + 1) + "]",
                      om, 2});
    }
  std::vector<Polynomial> rels;
  if (k >= 2 * n + 2) {
    auto entry = [&](int a, int b) {
      return JetVariable{omega_index.at({std::min(a, b), std::max(a, b)}), 0};
    };
    for (const auto& s : combinations(k, 2 * n + 2))
      rels.push_back(pfaffian_formal(s, entry));
  }
  return QuotientPresentation(base, std::move(gens), std::move(rels));
}

QuotientPresentation torus_presentation(const RepresentationSpec& rep,
                                        const GeneratorScanOptions& opts) {
  const JetRing base = rep.ring(std::nullopt);
  const auto& wts = rep.torus_weights;
  const int nvars = int(wts.size());
  std::vector<int> pos, neg;
  bool pm1 = true;
  for (int i = 0; i < nvars; ++i) {
    if (wts[i] == 1)
      pos.push_back(i);
    else if (wts[i] == -1)
      neg.push_back(i);
    else
      pm1 = false;
  }
  if (pm1 && !pos.empty() && !neg.empty()) {
    const int ny = int(neg.size());
    std::vector<NamedPoly> gens;
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = 0; j < neg.size(); ++j)
        gens.push_back({"f[" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + "]",
                        Polynomial(Monomial::variable({pos[i], 0})
                                       .times(JetVariable{neg[j], 0}),
                                   Rational(1)),
                        2});
    auto idx = [&](std::size_t i, std::size_t j) {
      return int(i * std::size_t(ny) + j);
    };
    std::vector<Polynomial> rels;
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t c = a + 1; c < pos.size(); ++c)
        for (std::size_t b = 0; b < neg.size(); ++b)
          for (std::size_t d = b + 1; d < neg.size(); ++d) {
            Polynomial rel(Monomial::variable({idx(a, b), 0})
                               .times(JetVariable{idx(c, d), 0}),
                           Rational(1));
            rel.add_term(Monomial::variable({idx(a, d), 0})
                             .times(JetVariable{idx(c, b), 0}),
                         Rational(-1));
            rels.push_back(std::move(rel));
          }
    return QuotientPresentation(base, std::move(gens), std::move(rels));
  }

  // general weights: minimal invariant monomials up to the degree cap
  const int cap = opts.degree_cap > 0 ? opts.degree_cap : 10;
  std::vector<NamedPoly> gens;
  std::vector<Monomial> found;
  for (int d = 1; d <= cap; ++d)
    monomials_of_degree(nvars, d, [&](const std::vector<int>& exps) {
      Rational total = 0;
      for (int i = 0; i < nvars; ++i) total += Rational(exps[i]) * wts[i];
      if (total != 0) return;
      std::vector<Monomial::Factor> factors;
      for (int i = 0; i < nvars; ++i)
        if (exps[i] > 0) factors.push_back({{i, 0}, exps[i]});
      const Monomial mon = Monomial::from_factors(std::move(factors));
      for (const auto& g : found)
        if (mon.divided_by(g)) return;  // not minimal
      found.push_back(mon);
      gens.push_back({to_string(mon), Polynomial(mon, Rational(1)), d});
    });
  return QuotientPresentation(base, std::move(gens), {});
}

QuotientPresentation finite_presentation(const RepresentationSpec& rep,
                                         const GeneratorScanOptions& opts) {
  const JetRing base = rep.ring(std::nullopt);
  const auto closure = group_closure(rep.action);
  // invariants of a finite group are generated in degrees up to the
  // group order
  const int cap =
      opts.degree_cap > 0 ? opts.degree_cap : int(closure.size());
  std::vector<NamedPoly> gens;
  for (int d = 1; d <= cap; ++d) {
    const LinearSpan inv =
        invariant_piece(rep.ring(0), rep.action, 0, d, 0);
    if (inv.rank() == 0) continue;
    std::vector<Polynomial> gen_polys;
    std::vector<int> degs, wts;
    for (const auto& g : gens) {
      gen_polys.push_back(g.poly);
      degs.push_back(g.degree);
      wts.push_back(0);
    }
    std::vector<Polynomial> reachable =
        derivative_products(rep.ring(0), gen_polys, degs, wts, 0, d, 0);
    int fresh = 0;
    for (int r = 0; r < inv.rank(); ++r) {
      const Polynomial cand = inv.row_polynomial(r);
      // rows picked earlier in this degree count as reachable too
      if (LinearSpan::from_polynomials(d, 0, 0, reachable).contains(cand))
        continue;
      reachable.push_back(cand);
      gens.push_back({"g" + std::to_string(d) + "_" +
                          std::to_string(++fresh),
                      cand, d});
    }
  }
  return QuotientPresentation(base, std::move(gens), {});
}

}  // namespace

QuotientPresentation classical_generators(const RepresentationSpec& rep,
                                          const GeneratorScanOptions& opts) {
  switch (rep.family) {
    case Family::sl_std: return sl_presentation(rep);
    case Family::gl_std: return gl_presentation(rep);
    case Family::so_std: return so_presentation(rep);
    case Family::sp_std: return sp_presentation(rep);
    case Family::torus: return torus_presentation(rep, opts);
    case Family::finite: return finite_presentation(rep, opts);
    case Family::custom:
      throw unsupported_error(
          "classical_generators needs a classical, torus, or finite family");
  }
  throw internal_error("unknown family");
}

/*────────────────────────── piece machinery ──────────────────────────────*/

LinearSpan pullback_image_piece(const RepresentationSpec& rep,
                                const QuotientPresentation& pres, int m, int d,
                                int w) {
  if (m < 0) throw error("pullback_image_piece needs a finite truncation");
  const JetRing ring = rep.ring(m);
  std::vector<Polynomial> gens;
  std::vector<int> degs, wts;
  for (const auto& g : pres.generators()) {
    gens.push_back(g.poly);
    degs.push_back(g.degree);
    wts.push_back(0);
  }
  return LinearSpan::from_polynomials(
      d, w, m, derivative_products(ring, gens, degs, wts, m, d, w),
      rep.piece_cmp());
}

PieceReport classify_piece(const RepresentationSpec& rep,
                           const QuotientPresentation& pres, int m, int d,
                           int w) {
  PieceReport report;
  report.d = d;
  report.w = w;
  report.m = m;
  const LinearSpan inv = rep_invariant_piece(rep, m, d, w);
  const LinearSpan img = pullback_image_piece(rep, pres, m, d, w);
  for (int r = 0; r < img.rank(); ++r)
    if (!inv.contains(img.row_polynomial(r)))
      throw internal_error("pullback image escaped the invariant piece");
  report.inv_dim = inv.rank();
  report.img_dim = img.rank();
  if (img.rank() < inv.rank()) {
    report.verdict = Verdict::bad_witnessed;
    for (int r = 0; r < inv.rank(); ++r) {
      if (!img.contains(inv.row_polynomial(r))) {
        report.witness = inv.row_polynomial(r);
        break;
      }
    }
    if (!report.witness)
      throw internal_error("rank gap without a witness row");
  }
  return report;
}

std::string to_string(Verdict v) {
  return v == Verdict::good_evidence ? "good_evidence" : "bad_witnessed";
}

/*──────────────────────── non-injectivity probe ───────────────────────────*/

NoninjectivityReport noninjectivity_probe(const RepresentationSpec& rep,
                                          int w) {
  if (rep.family != Family::sl_std || rep.n != 3 || rep.k != 6 ||
      rep.l != 0 || w != 1)
    throw unsupported_error(
        "the non-injectivity probe covers six copies in three dimensions at"
        " weight 1 only");

  const SlLayout lay{3, 6};
  const auto triples = combinations(6, 3);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < triples.size(); ++i)
    index[triples[i]] = int(i);
  auto complement = [&](const std::vector<int>& t) {
    std::vector<int> c;
    for (int i = 0; i < 6; ++i)
      if (!std::binary_search(t.begin(), t.end(), i)) c.push_back(i);
    return c;
  };

  NoninjectivityReport report;

  // six-index straightening demand: orders the lowest term of each
  // det * D(det) product into its two natural tableau rows
  for (const auto& t : triples) {
    const auto c = complement(t);
    std::vector<PairOmega> row0;
    for (int j : t) row0.push_back({0, j});
    const TableauW tab{{row0, derived_det_row(3, DetPower{c, 1})}};
    if (!is_standard_tableau(tab)) ++report.nonstandard_count;
  }

  // relations from the quotient: exchange quadrics touching all six
  // copies, then one derivative
  const JetRing formal(int(triples.size()), std::nullopt, Normalization::raw);
  std::vector<Polynomial> dr;
  for (const auto& rel : exchange_relations(3, 6, index)) {
    bool all_six = true;
    for (const auto& [mon, cf] : rel.terms()) {
      std::set<int> used;
      for (const auto& [v, e] : mon.factors())
        for (int j : triples[std::size_t(v.base)]) used.insert(j);
      if (used.size() != 6) all_six = false;
    }
    if (all_six) dr.push_back(derive(formal, rel));
  }
  if (dr.size() != 15)
    throw internal_error("expected 15 disjoint exchange relations");
  report.relation_span_dim =
      LinearSpan::from_polynomials(2, 1, std::nullopt, dr).rank();

  // kernel of the pullback on the 20-dimensional span of f_T f_{T'}'
  const JetRing ring1 = lay.ring(1);
  std::vector<Polynomial> pulls;
  for (const auto& t : triples) {
    const auto c = complement(t);
    std::vector<PairOmega> om0;
    for (int j : t) om0.push_back({0, j});
    pulls.push_back(det_symbol(lay, ring1, om0) *
                    derived_det(lay, 1, DetPower{c, 1}));
  }
  const int rank = LinearSpan::from_polynomials(6, 1, 1, pulls).rank();
  report.kernel_dim = int(pulls.size()) - rank;
  return report;
}

NoninjectivityReport noninjectivity_probe() {
  return noninjectivity_probe(RepresentationSpec::sl(3, 6, 0), 1);
}

/*──────────────────────────── D-finiteness ────────────────────────────────*/

DfiniteReport dfinite_probe(const RepresentationSpec& rep,
                            const std::vector<Polynomial>& candidates,
                            int d_max, int w_max) {
  if (candidates.empty()) throw error("dfinite_probe needs candidates");
  const JetRing full = rep.ring(std::nullopt);
  std::vector<int> degs, wts;
  for (const auto& c : candidates) {
    full.validate(c);
    const auto bd = c.bidegree();
    if (!bd) throw error("candidates must be bihomogeneous and nonzero");
    degs.push_back(bd->first);
    wts.push_back(bd->second);
  }
  // candidate invariance, checked against the full arc action
  if (rep.action.kind == GroupActionSpec::Kind::finite) {
    for (const auto& g : group_closure(rep.action))
      for (const auto& c : candidates)
        if (!(act_finite(full, g, c) == c))
          throw error("candidate is not invariant under the finite group");
  } else {
    for (std::size_t ci = 0; ci < candidates.size(); ++ci)
      for (int gen = 0; gen < rep.action.generator_count(); ++gen)
        for (int r = 0; r <= wts[ci]; ++r)
          if (!act(full, rep.action, gen, r, candidates[ci]).is_zero())
            throw error("candidate is not an arc invariant");
  }

  DfiniteReport report;
  for (int d = 1; d <= d_max; ++d)
    for (int w = 0; w <= w_max; ++w) {
      const int m_eff = w;
      const JetRing ring = rep.ring(m_eff);
      std::vector<Polynomial> usable;
      std::vector<int> udeg, uwt;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (wts[i] > w) continue;  // cannot contribute at this weight
        usable.push_back(candidates[i]);
        udeg.push_back(degs[i]);
        uwt.push_back(wts[i]);
      }
      const LinearSpan span = LinearSpan::from_polynomials(
          d, w, m_eff,
          derivative_products(ring, usable, udeg, uwt, m_eff, d, w),
          rep.piece_cmp());
      const LinearSpan inv = rep_invariant_piece(rep, m_eff, d, w);
      DfinitePiece piece;
      piece.d = d;
      piece.w = w;
      piece.inv_dim = inv.rank();
      piece.span_dim = span.rank();
      piece.contained = true;
      for (int r = 0; r < inv.rank(); ++r)
        if (!span.contains(inv.row_polynomial(r))) {
          piece.contained = false;
          piece.witness = inv.row_polynomial(r);
          break;
        }
      report.all_contained = report.all_contained && piece.contained;
      report.pieces.push_back(std::move(piece));
    }
  return report;
}

/*──────────────────────────────── census ──────────────────────────────────*/

namespace {

long long ll_binom(int n, int r) {
  const Integer b = binomial(n, r);
  return b.get_si();
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::coregular: return "coregular";
    case Classification::hypersurface: return "hypersurface";
    case Classification::complete_intersection:
      return "complete_intersection";
    case Classification::too_many_relations: return "too_many_relations";
  }
  throw internal_error("unknown classification");
}

CensusRow census(Family family, int n, int k, int l) {
  if (k < 0 || l < 0) throw error("copy counts must be nonnegative");
  CensusRow row;
  switch (family) {
    case Family::sl_std: {
      if (n < 2) throw unsupported_error("sl census needs n >= 2");
      if (l > k) std::swap(k, l);  // swapping the copies dualizes V
      row.dim_v = 1LL * n * (k + l);
      row.dim_g = 1LL * n * n - 1;
      if (l == 0) {
        row.num_generators = ll_binom(k, n);
        if (k <= n + 1) {
          row.num_relations = 0;
          row.classification = Classification::coregular;
          row.dim_z = row.num_generators;
        } else if (k == n + 2) {
          row.num_relations = ll_binom(n + 2, 4);
          row.classification = n == 2 ? Classification::hypersurface
                                      : Classification::too_many_relations;
          row.dim_z = row.dim_v - row.dim_g;
        } else {
          row.classification = Classification::too_many_relations;
          row.dim_z = row.dim_v - row.dim_g;
        }
      } else if (k == n + 1 && l == n - 1) {
        row.num_generators = (n + 1) + 1LL * (n + 1) * (n - 1);
        row.num_relations = n - 1;
        row.classification = Classification::complete_intersection;
        row.dim_z = row.dim_v - row.dim_g;
      } else if (k == n && l == n) {
        row.num_generators = 1LL * n * n + 2;
        row.num_relations = 1;
        row.classification = Classification::hypersurface;
        row.dim_z = row.dim_v - row.dim_g;
      } else if (k == n + 1 && l == n) {
        row.num_generators = (n + 1) + 1 + 1LL * n * (n + 1);
        row.classification = Classification::too_many_relations;
        row.dim_z = row.dim_v - row.dim_g;
      } else {
        throw unsupported_error(
            "sl census covers l = 0 and the (n+1, n-1), (n, n), (n+1, n)"
            " mixed cases");
      }
      break;
    }
    case Family::gl_std: {
      if (n < 1) throw unsupported_error("gl census needs n >= 1");
      if (l > k) std::swap(k, l);
      row.dim_v = 1LL * n * (k + l);
      row.dim_g = 1LL * n * n;
      row.num_generators = 1LL * k * l;
      if (l <= n) {
        row.num_relations = 0;
        row.classification = Classification::coregular;
        row.dim_z = row.num_generators;
      } else if (k == n + 1 && l == n + 1) {
        row.num_relations = 1;
        row.classification = Classification::hypersurface;
        row.dim_z = row.dim_v - row.dim_g;
      } else {
        row.classification = Classification::too_many_relations;
        row.dim_z = row.dim_v - row.dim_g;
      }
      break;
    }
    case Family::so_std: {
      if (n < 2) throw unsupported_error("so census needs n >= 2");
      row.dim_v = 1LL * n * k;
      row.dim_g = 1LL * n * (n - 1) / 2;
      if (k < n) {
        row.num_generators = ll_binom(k + 1, 2);
        row.num_relations = 0;
        row.classification = Classification::coregular;
        row.dim_z = row.num_generators;
      } else if (k == n) {
        row.num_generators = ll_binom(n + 1, 2) + 1;
        row.num_relations = 1;
        row.classification = Classification::hypersurface;
        row.dim_z = row.dim_v - row.dim_g;
      } else {
        row.num_generators = ll_binom(k + 1, 2) + ll_binom(k, n);
        row.classification = Classification::too_many_relations;
        row.dim_z = row.dim_v - row.dim_g;
      }
      break;
    }
    case Family::sp_std: {
      if (n < 1) throw unsupported_error("sp census needs n >= 1");
      row.dim_v = 2LL * n * k;
      row.dim_g = 1LL * n * (2 * n + 1);
      row.num_generators = ll_binom(k, 2);
      if (k <= 2 * n + 1) {
        row.num_relations = 0;
        row.classification = Classification::coregular;
        row.dim_z = row.num_generators;
      } else if (k == 2 * n + 2) {
        row.num_relations = 1;
        row.classification = Classification::hypersurface;
        row.dim_z = row.dim_v - row.dim_g;
      } else {
        row.classification = Classification::too_many_relations;
        row.dim_z = row.dim_v - row.dim_g;
      }
      break;
    }
    default:
      throw unsupported_error("census covers the classical families only");
  }
  return row;
}

CodimBound codim_formula(Family family, int n) {
  switch (family) {
    case Family::sl_std:
      if (n < 2) throw unsupported_error("sl codim needs n >= 2");
      return {Rational(n * n - n + 2), 4};
    case Family::sp_std:
      if (n < 1) throw unsupported_error("sp codim needs n >= 1");
      return {Rational(2 * n * n + 2 * n), 4};
    case Family::gl_std:
      if (n < 1) throw unsupported_error("gl codim needs n >= 1");
      return {Rational(n * (n + 1)), 2};
    case Family::so_std: {
      if (n < 2) throw unsupported_error("so codim needs n >= 2");
      Rational v(n * n + (n % 2));
      v /= 2;
      return {v, 2};
    }
    default:
      throw unsupported_error(
          "codim_formula covers the four complete-intersection families");
  }
}

}  // namespace jetinv
