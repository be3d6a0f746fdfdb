#include "jetinv/action.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace jetinv {

/*──────────────────────────── GroupActionSpec ────────────────────────────*/

GroupActionSpec GroupActionSpec::lie(std::vector<QMatrix> gens) {
  if (gens.empty()) throw error("lie action needs at least one generator");
  GroupActionSpec s;
  s.kind = Kind::lie;
  s.matrices = std::move(gens);
  return s;
}

GroupActionSpec GroupActionSpec::finite(std::vector<QMatrix> gens,
                                        std::size_t bound) {
  if (gens.empty()) throw error("finite action needs at least one generator");
  GroupActionSpec s;
  s.kind = Kind::finite;
  s.matrices = std::move(gens);
  s.closure_bound = bound;
  return s;
}

GroupActionSpec GroupActionSpec::torus(std::vector<Rational> weights) {
  if (weights.empty()) throw error("torus action needs a weight vector");
  GroupActionSpec s;
  s.kind = Kind::torus;
  s.weights = std::move(weights);
  return s;
}

int GroupActionSpec::dim() const {
  if (kind == Kind::torus) return int(weights.size());
  return matrices.at(0).nrows;
}

int GroupActionSpec::generator_count() const {
  return kind == Kind::torus ? 1 : int(matrices.size());
}

QMatrix GroupActionSpec::generator_matrix(int index) const {
  if (kind == Kind::torus) {
    if (index != 0) throw error("torus has a single generator");
    QMatrix m(int(weights.size()), int(weights.size()));
    for (int i = 0; i < m.nrows; ++i) m.at(i, i) = weights[i];
    return m;
  }
  return matrices.at(index);
}

/*────────────────────────────────── act ──────────────────────────────────*/

Polynomial act_matrix(const JetRing& ring, const QMatrix& xi, int r,
                      const Polynomial& f) {
  if (r < 0) throw error("negative level r");
  if (ring.truncation() && r > *ring.truncation())
    throw error("level r exceeds truncation order");
  if (xi.nrows != ring.num_base_vars() || xi.ncols != ring.num_base_vars())
    throw error("action matrix size mismatch");
  ring.validate(f);
  Polynomial out;
  for (const auto& [mon, coeff] : f.terms()) {
    for (const auto& [v, e] : mon.factors()) {
      if (v.order < r) continue;
      Rational lambda = 1;
      if (ring.normalization() == Normalization::raw)
        lambda = Rational(falling_factorial(v.order, r));
      const Monomial rest = mon.without_one(v);
      for (int c = 0; c < xi.ncols; ++c) {
        const Rational& entry = xi.at(v.base, c);
        if (entry == 0) continue;
        out.add_term(rest.times(JetVariable{c, v.order - r}),
                     coeff * e * lambda * entry);
      }
    }
  }
  return out;
}

Polynomial act(const JetRing& ring, const GroupActionSpec& spec, int gen,
               int r, const Polynomial& f) {
  if (spec.kind == GroupActionSpec::Kind::finite)
    throw error("act: finite actions use act_finite");
  return act_matrix(ring, spec.generator_matrix(gen), r, f);
}

Polynomial act_finite(const JetRing& ring, const QMatrix& g,
                      const Polynomial& f) {
  if (g.nrows != ring.num_base_vars() || g.ncols != ring.num_base_vars())
    throw error("group element size mismatch");
  return substitute(f, [&](JetVariable v) {
    Polynomial img;
    for (int c = 0; c < g.nrows; ++c)
      if (g.at(c, v.base) != 0)
        img.add_term(Monomial::variable({c, v.order}), g.at(c, v.base));
    return img;
  });
}

/*──────────────────────────── group closure ──────────────────────────────*/

namespace {

std::vector<Rational> flat(const QMatrix& m) { return m.a; }

}  // namespace

std::vector<QMatrix> group_closure(const GroupActionSpec& spec) {
  if (spec.kind != GroupActionSpec::Kind::finite)
    throw error("group_closure: finite actions only");
  const int n = spec.dim();
  QMatrix id(n, n);
  for (int i = 0; i < n; ++i) id.at(i, i) = 1;
  std::map<std::vector<Rational>, int> seen;
  std::vector<QMatrix> elems;
  auto push = [&](const QMatrix& m) {
    if (seen.emplace(flat(m), int(elems.size())).second) {
      elems.push_back(m);
      if (elems.size() > spec.closure_bound)
        throw error("finite group closure exceeds bound of " +
                    std::to_string(spec.closure_bound));
      return true;
    }
    return false;
  };
  push(id);
  for (const auto& g : spec.matrices) {
    if (g.nrows != n || g.ncols != n) throw error("generator size mismatch");
    push(g);
  }
  // worklist product closure; generators of a finite matrix group close
  // into the full group without explicit inverses
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      QMatrix prod(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          Rational acc = 0;
          for (int k = 0; k < n; ++k)
            acc += elems[i].at(r, k) * elems[j].at(k, c);
          prod.at(r, c) = acc;
        }
      push(prod);
    }
  }
  return elems;
}

/*──────────────────────────── invariant pieces ───────────────────────────*/

namespace {

bool is_diagonal(const QMatrix& m) {
  for (int r = 0; r < m.nrows; ++r)
    for (int c = 0; c < m.ncols; ++c)
      if (r != c && m.at(r, c) != 0) return false;
  return true;
}

// Connected components of the union support graph of all matrices; the
// per-component degree vector of a monomial is conserved by every act /
// act_finite term, so kernels decompose along it.
std::vector<int> support_components(int n, const std::vector<QMatrix>& mats) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& m : mats)
    for (int r = 0; r < m.nrows; ++r)
      for (int c = 0; c < m.ncols; ++c)
        if (r != c && m.at(r, c) != 0) parent[find(r)] = find(c);
  std::vector<int> comp(n), remap(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (remap[root] < 0) remap[root] = next++;
    comp[i] = remap[root];
  }
  return comp;
}

std::vector<int> component_degrees(const Monomial& m,
                                   const std::vector<int>& comp,
                                   int ncomp) {
  std::vector<int> key(ncomp, 0);
  for (const auto& [v, e] : m.factors()) key[comp[v.base]] += e;
  return key;
}

// Diagonal constraints act on monomials by scalars; any kernel vector is
// supported on monomials where every such scalar vanishes (lie) or equals
// one (finite).
bool diagonal_scalars_ok(const Monomial& mon,
                         const std::vector<QMatrix>& diag_lie,
                         const std::vector<QMatrix>& diag_grp) {
  for (const auto& m : diag_lie) {
    Rational s = 0;
    for (const auto& [v, e] : mon.factors()) s += e * m.at(v.base, v.base);
    if (s != 0) return false;
  }
  for (const auto& g : diag_grp) {
    Rational s = 1;
    for (const auto& [v, e] : mon.factors())
      for (int i = 0; i < e; ++i) s *= g.at(v.base, v.base);
    if (s != 1) return false;
  }
  return true;
}

// Kernel of the stacked constraint maps over one block of monomials;
// returns the kernel vectors as polynomials.
std::vector<Polynomial> block_kernel(
    const std::vector<Monomial>& block,
    const std::vector<std::function<Polynomial(const Polynomial&)>>& ops) {
  std::vector<std::vector<std::pair<int, Rational>>> cols(block.size());
  int nrows = 0;
  for (const auto& op : ops) {
    std::map<Monomial, int> local;
    std::vector<std::vector<std::pair<int, Rational>>> entries(block.size());
    for (std::size_t j = 0; j < block.size(); ++j) {
      const Polynomial img = op(Polynomial(block[j], 1));
      for (const auto& [mon, c] : img.terms()) {
        auto [it, fresh] = local.try_emplace(mon, int(local.size()));
        entries[j].push_back({it->second, c});
      }
    }
    for (std::size_t j = 0; j < block.size(); ++j)
      for (auto& [row, c] : entries[j])
        cols[j].push_back({nrows + row, std::move(c)});
    nrows += int(local.size());
  }
  QMatrix a(nrows, int(block.size()));
  for (std::size_t j = 0; j < block.size(); ++j)
    for (const auto& [row, c] : cols[j]) a.at(row, int(j)) = c;
  const QMatrix ker = nullspace(a);
  std::vector<Polynomial> out;
  out.reserve(ker.nrows);
  for (int r = 0; r < ker.nrows; ++r) {
    Polynomial f;
    for (int c = 0; c < ker.ncols; ++c)
      if (ker.at(r, c) != 0) f.add_term(block[c], ker.at(r, c));
    out.push_back(std::move(f));
  }
  return out;
}

struct PieceSetup {
  JetRing ring_m;
  std::vector<Monomial> basis;          // diagonal-prefiltered
  std::vector<int> comp;
  int ncomp = 0;

  PieceSetup(const JetRing& ring, int m, int d, int w,
             const std::vector<QMatrix>& all_mats,
             const std::vector<QMatrix>& diag_lie,
             const std::vector<QMatrix>& diag_grp)
      : ring_m(ring.truncated(m)) {
    if (m < 0) throw error("negative truncation");
    if (ring.truncation() && *ring.truncation() < m)
      throw error("piece truncation exceeds ring truncation");
    comp = support_components(ring.num_base_vars(), all_mats);
    ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    for (const auto& mon : graded_basis(ring_m, d, w))
      if (diagonal_scalars_ok(mon, diag_lie, diag_grp)) basis.push_back(mon);
  }

  [[nodiscard]] std::map<std::vector<int>, std::vector<Monomial>> blocks()
      const {
    std::map<std::vector<int>, std::vector<Monomial>> out;
    for (const auto& mon : basis)
      out[component_degrees(mon, comp, ncomp)].push_back(mon);
    return out;
  }
};

}  // namespace

LinearSpan invariant_piece(const JetRing& ring, const GroupActionSpec& spec,
                           int m, int d, int w, const MonomialCmp& cmp) {
  if (spec.dim() != ring.num_base_vars())
    throw error("action dimension does not match ring");

  std::vector<QMatrix> mats, diag_lie, diag_grp;
  const bool finite = spec.kind == GroupActionSpec::Kind::finite;
  if (finite) {
    mats = group_closure(spec);
    for (const auto& g : mats)
      if (is_diagonal(g)) diag_grp.push_back(g);
  } else {
    for (int i = 0; i < spec.generator_count(); ++i)
      mats.push_back(spec.generator_matrix(i));
    for (const auto& g : mats)
      if (is_diagonal(g)) diag_lie.push_back(g);
  }

  PieceSetup setup(ring, m, d, w, mats, diag_lie, diag_grp);

  std::vector<std::function<Polynomial(const Polynomial&)>> ops;
  if (finite) {
    for (const auto& g : mats) {
      if (is_diagonal(g)) continue;  // handled by the prefilter
      ops.push_back([&, g](const Polynomial& f) {
        return act_finite(setup.ring_m, g, f) - f;
      });
    }
  } else {
    const int rmax = std::min(w, m);
    for (const auto& g : mats)
      for (int r = 0; r <= rmax; ++r) {
        if (r == 0 && is_diagonal(g)) continue;
        ops.push_back([&, g, r](const Polynomial& f) {
          return act_matrix(setup.ring_m, g, r, f);
        });
      }
  }

  std::vector<Polynomial> invariants;
  for (const auto& [key, block] : setup.blocks())
    for (auto& f : block_kernel(block, ops)) invariants.push_back(std::move(f));
  return LinearSpan::from_polynomials(d, w, m, invariants, cmp);
}

LinearSpan sl_reduce_invariant_piece(const JetRing& ring,
                                     const GroupActionSpec& g_spec,
                                     const QMatrix& X, int m, int d, int w,
                                     const MonomialCmp& cmp) {
  if (g_spec.kind != GroupActionSpec::Kind::lie)
    throw error("sl_reduce_invariant_piece expects a lie spec");
  if (g_spec.dim() != ring.num_base_vars())
    throw error("action dimension does not match ring");

  std::vector<QMatrix> mats, diag_lie;
  for (int i = 0; i < g_spec.generator_count(); ++i)
    mats.push_back(g_spec.generator_matrix(i));
  for (const auto& g : mats)
    if (is_diagonal(g)) diag_lie.push_back(g);

  PieceSetup setup(ring, m, d, w, mats, diag_lie, {});

  // r = 0 constraints conserve every variable's order, so blocks refine
  // further by the per-component weight vector.
  std::map<std::vector<int>, std::vector<Monomial>> blocks;
  for (const auto& mon : setup.basis) {
    std::vector<int> key(2 * setup.ncomp, 0);
    for (const auto& [v, e] : mon.factors()) {
      key[setup.comp[v.base]] += e;
      key[setup.ncomp + setup.comp[v.base]] += e * v.order;
    }
    blocks[std::move(key)].push_back(mon);
  }

  std::vector<std::function<Polynomial(const Polynomial&)>> ops;
  for (const auto& g : mats) {
    if (is_diagonal(g)) continue;
    ops.push_back([&, g](const Polynomial& f) {
      return act_matrix(setup.ring_m, g, 0, f);
    });
  }

  std::vector<Polynomial> g_invariants;
  for (const auto& [key, block] : blocks)
    for (auto& f : block_kernel(block, ops))
      g_invariants.push_back(std::move(f));

  if (g_invariants.empty())
    return LinearSpan::from_polynomials(d, w, m, {}, cmp);
  // The X t constraint only bites when level 1 exists in the piece.
  if (m < 1 || w < 1)
    return LinearSpan::from_polynomials(d, w, m, g_invariants, cmp);

  // Intersect with ker(X t): one stacked constraint over the g-invariant
  // coordinates.
  std::map<Monomial, int> target;
  QMatrix a(0, int(g_invariants.size()));
  std::vector<std::map<int, Rational>> col_entries(g_invariants.size());
  int nrows = 0;
  for (std::size_t j = 0; j < g_invariants.size(); ++j) {
    const Polynomial img = act_matrix(setup.ring_m, X, 1, g_invariants[j]);
    for (const auto& [mon, c] : img.terms()) {
      auto [it, fresh] = target.try_emplace(mon, nrows);
      if (fresh) ++nrows;
      col_entries[j][it->second] = c;
    }
  }
  a = QMatrix(nrows, int(g_invariants.size()));
  for (std::size_t j = 0; j < g_invariants.size(); ++j)
    for (const auto& [row, c] : col_entries[j]) a.at(row, int(j)) = c;
  const QMatrix ker = nullspace(a);
  std::vector<Polynomial> invariants;
  for (int r = 0; r < ker.nrows; ++r) {
    Polynomial f;
    for (int c = 0; c < ker.ncols; ++c)
      if (ker.at(r, c) != 0) f += ker.at(r, c) * g_invariants[c];
    invariants.push_back(std::move(f));
  }
  return LinearSpan::from_polynomials(d, w, m, invariants, cmp);
}

}  // namespace jetinv
