#include "jetinv/smt.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

namespace jetinv {

namespace {

std::pair<int, int> var_key(JetVariable v) { return {v.order, v.base}; }

bool nondecreasing(const std::vector<JetVariable>& vars) {
  for (std::size_t s = 1; s < vars.size(); ++s)
    if (var_key(vars[s - 1]) > var_key(vars[s])) return false;
  return true;
}

std::tuple<int, int, int> fvar_sort_key(const FVar& f) {
  return {f.k, f.i, f.j};
}

}  // namespace

bool is_standard_word(const CstarLayout& lay, const Word& w) {
  if (w.u.size() != w.v.size()) return false;
  for (const auto& x : w.u)
    if (!lay.is_x(x)) return false;
  for (const auto& y : w.v)
    if (lay.is_x(y)) return false;
  return nondecreasing(w.u) && nondecreasing(w.v);
}

bool is_admissible(const CstarLayout& lay, const Word& w) {
  if (!is_standard_word(lay, w)) return false;
  if (w.v.empty()) return true;
  if (w.v.front().order != 0) return false;
  for (std::size_t s = 0; s + 1 < w.v.size(); ++s) {
    // D(v_s) > v_{s+1} under the (order, index) order on the y side.
    const auto dv = std::pair(w.v[s].order + 1, w.v[s].base);
    if (dv <= var_key(w.v[s + 1])) return false;
  }
  return true;
}

Monomial word_monomial(const Word& w) {
  std::vector<Monomial::Factor> factors;
  for (const auto& x : w.u) factors.emplace_back(x, 1);
  for (const auto& y : w.v) factors.emplace_back(y, 1);
  return Monomial::from_factors(std::move(factors));
}

Word word_of_monomial(const CstarLayout& lay, const Monomial& m) {
  Word w;
  for (const auto& [v, e] : m.factors()) {
    auto& side = lay.is_x(v) ? w.u : w.v;
    for (int i = 0; i < e; ++i) side.push_back(v);
  }
  if (w.u.size() != w.v.size())
    throw error("word_of_monomial: unbalanced monomial " + to_string(m));
  auto by_key = [](JetVariable a, JetVariable b) {
    return var_key(a) < var_key(b);
  };
  std::sort(w.u.begin(), w.u.end(), by_key);
  std::sort(w.v.begin(), w.v.end(), by_key);
  return w;
}

bool fvar_le(const FVar& a, const FVar& b) {
  if (a.k + 2 <= b.k) return true;
  if (a.k + 1 == b.k) return a.i <= b.i || a.j <= b.j;
  if (a.k == b.k) return a.i <= b.i && a.j <= b.j;
  return false;
}

FMonomial FMonomial::of(std::vector<FVar> factors) {
  for (const auto& f : factors)
    if (f.i < 0 || f.j < 0 || f.k < 0)
      throw error("f-variable indices and order must be nonnegative");
  std::sort(factors.begin(), factors.end(), [](const FVar& a, const FVar& b) {
    return fvar_sort_key(a) < fvar_sort_key(b);
  });
  return FMonomial{std::move(factors)};
}

int FMonomial::weight() const {
  int w = 0;
  for (const auto& f : factors) w += f.k;
  return w;
}

bool is_standard_fmono(const FMonomial& fm) {
  // Any chain arrangement has nondecreasing orders, so same-order factors
  // are contiguous and the (k, i, j) sort is the only candidate chain.
  for (std::size_t s = 1; s < fm.factors.size(); ++s)
    if (!fvar_le(fm.factors[s - 1], fm.factors[s])) return false;
  return true;
}

Word L_of_w(const CstarLayout& lay, const FMonomial& fm) {
  if (!is_standard_fmono(fm))
    throw error("L_of_w requires a standard f-monomial");
  Word w;
  int b = 0;
  for (std::size_t s = 0; s < fm.factors.size(); ++s) {
    const FVar& f = fm.factors[s];
    if (f.i >= lay.nx || f.j >= lay.ny)
      throw error("f-variable index out of range for the layout");
    if (s > 0 && f.j < fm.factors[s - 1].j) ++b;
    const int a = f.k - b;
    if (a < 0) throw internal_error("L_of_w: negative x-side order");
    w.u.push_back({f.i, a});
    w.v.push_back({lay.nx + f.j, b});
  }
  if (!is_admissible(lay, w))
    throw internal_error("L_of_w produced an inadmissible word");
  return w;
}

FMonomial fmono_of_word(const CstarLayout& lay, const Word& w) {
  if (!is_admissible(lay, w))
    throw error("fmono_of_word requires an admissible word");
  std::vector<FVar> factors;
  for (std::size_t s = 0; s < w.u.size(); ++s)
    factors.push_back(
        {w.u[s].base, w.v[s].base - lay.nx, w.u[s].order + w.v[s].order});
  FMonomial fm = FMonomial::of(std::move(factors));
  if (!is_standard_fmono(fm))
    throw internal_error("fmono_of_word produced a non-standard monomial");
  return fm;
}

Word M_of_h(const CstarLayout& lay, const Polynomial& h) {
  if (h.is_zero()) throw error("M_of_h: zero polynomial has no leading word");
  const CstarWordOrder order{lay};
  const Monomial* best = nullptr;
  for (const auto& [mon, c] : h.terms())
    if (!best || order.compare(*best, mon) < 0) best = &mon;
  return word_of_monomial(lay, *best);
}

Polynomial pullback_fmono(const CstarLayout& lay, std::optional<int> m,
                          const FMonomial& fm) {
  const JetRing ring = lay.ring(m);
  Polynomial out(Rational(1));
  for (const auto& f : fm.factors) {
    if (f.i >= lay.nx || f.j >= lay.ny)
      throw error("f-variable index out of range for the layout");
    const Monomial xy = Monomial::variable({f.i, 0}).times({lay.nx + f.j, 0});
    out = out * iter_derive(ring, Polynomial(xy, Rational(1)), f.k);
  }
  return out;
}

namespace {

// Torus invariance: every term balanced (the order-0 condition for ±1
// weights) and annihilated by the positive levels of the diagonal
// generator.
void check_cstar_invariant(const CstarLayout& lay, const JetRing& ring,
                           const Polynomial& h, int w) {
  for (const auto& [mon, c] : h.terms()) {
    int bal = 0;
    for (const auto& [v, e] : mon.factors()) bal += lay.is_x(v) ? e : -e;
    if (bal != 0)
      throw error("straighten_cstar: input is not torus-invariant (term " +
                  to_string(mon) + " is unbalanced)");
  }
  const int nvars = lay.nx + lay.ny;
  QMatrix xi(nvars, nvars);
  const auto weights = lay.weights();
  for (int i = 0; i < nvars; ++i) xi.at(i, i) = weights[i];
  const int rmax = ring.truncation() ? std::min(w, *ring.truncation()) : w;
  for (int r = 1; r <= rmax; ++r)
    if (!act_matrix(ring, xi, r, h).is_zero())
      throw error("straighten_cstar: input is not an arc invariant (level " +
                  std::to_string(r) + ")");
}

}  // namespace

StraightenResult straighten_cstar(const CstarLayout& lay, std::optional<int> m,
                                  const Polynomial& h, bool verify) {
  const JetRing ring = lay.ring(m);
  ring.validate(h);
  StraightenResult result;
  if (h.is_zero()) return result;
  const auto bideg = h.bidegree();
  if (!bideg)
    throw error("straighten_cstar: input must be bihomogeneous");
  if (verify) check_cstar_invariant(lay, ring, h, bideg->second);

  const CstarWordOrder order{lay};
  Polynomial residual = h;
  long long guard = 0;
  while (!residual.is_zero()) {
    if (++guard > 1000000)
      throw internal_error("straighten_cstar: rewrite did not terminate");
    const Word w = M_of_h(lay, residual);
    if (!is_admissible(lay, w))
      throw error("straighten_cstar: leading word of " + to_string(residual) +
                  " is not admissible; input is not a quotient pullback");
    const FMonomial fm = fmono_of_word(lay, w);
    // The rewrite runs in the untruncated ring: cancelling with a
    // truncated pullback is wrong when fm carries an order above the
    // truncation (cutting off a generator jet is not equivariant), and
    // the finished certificate truncates back to the input because every
    // order-<=m f-variable pulls back without loss.
    const Polynomial p = pullback_fmono(lay, std::nullopt, fm);
    const Monomial mon = word_monomial(w);
    const Rational cp = p.coefficient_of(mon);
    if (cp == 0)
      throw internal_error("straighten_cstar: pullback lost its leading word");
    const Rational c = Rational(residual.coefficient_of(mon) / cp);
    result.terms.push_back({fm, c});
    ++result.steps;
    residual -= c * p;
    if (!residual.is_zero()) {
      const Word next = M_of_h(lay, residual);
      if (order.compare(word_monomial(next), mon) >= 0)
        throw internal_error("straighten_cstar: leading word failed to drop");
    }
  }
  return result;
}

Polynomial expand_straighten(const CstarLayout& lay, std::optional<int> m,
                             const StraightenResult& r) {
  Polynomial out;
  for (const auto& t : r.terms)
    out += t.coeff * pullback_fmono(lay, m, t.fm);
  return out;
}

/*──────────────────────────── SL_n tableaux ──────────────────────────────*/

namespace {

int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

Polynomial det_symbol(const SlLayout& lay, const JetRing& ring,
                      const std::vector<PairOmega>& omegas) {
  const int n = lay.n;
  if (int(omegas.size()) != n)
    throw error("det_symbol needs exactly n column labels");
  for (const auto& om : omegas) {
    if (om.copy < 0 || om.copy >= lay.copies || om.k < 0)
      throw error("det_symbol: column label out of range");
    if (ring.truncation() && om.k > *ring.truncation())
      return Polynomial::zero();  // the whole column vanishes
  }
  Polynomial det;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    Monomial mon;
    for (int t = 0; t < n; ++t)
      mon = mon.times(lay.var(perm[t], omegas[t].copy, omegas[t].k));
    det.add_term(mon, Rational(permutation_sign(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

Polynomial derived_det(const SlLayout& lay, std::optional<int> m,
                       const DetPower& dp) {
  if (int(dp.copies.size()) != lay.n)
    throw error("derived_det needs one copy index per coordinate");
  for (std::size_t s = 0; s < dp.copies.size(); ++s) {
    if (dp.copies[s] < 0 || dp.copies[s] >= lay.copies)
      throw error("derived_det: copy index out of range");
    if (s > 0 && dp.copies[s - 1] >= dp.copies[s])
      throw error("derived_det: copies must be strictly increasing");
  }
  if (dp.k < 0) throw error("derived_det: negative derivative count");
  const JetRing ring = lay.ring(m);
  std::vector<PairOmega> omegas;
  for (int j : dp.copies) omegas.push_back({0, j});
  return iter_derive(ring, det_symbol(lay, ring, omegas), dp.k);
}

std::vector<PairOmega> derived_det_row(int n, const DetPower& dp) {
  if (int(dp.copies.size()) != n)
    throw error("derived_det_row needs one copy index per coordinate");
  const int a = dp.k / n, b = dp.k % n;
  std::vector<PairOmega> row;
  for (int t = b; t < n; ++t) row.push_back({a, dp.copies[t]});
  for (int t = 0; t < b; ++t) row.push_back({a + 1, dp.copies[t]});
  return row;
}

bool is_standard_tableau(const TableauW& t) {
  for (const auto& row : t.rows) {
    if (row.empty() || row.size() != t.rows.front().size()) return false;
    for (std::size_t i = 1; i < row.size(); ++i)
      if (!(row[i - 1] < row[i])) return false;
  }
  for (std::size_t r = 1; r < t.rows.size(); ++r)
    for (std::size_t i = 0; i < t.rows[r].size(); ++i)
      if (t.rows[r - 1][i] > t.rows[r][i]) return false;
  return true;
}

bool is_standard_tableau(const TableauY& t) {
  for (const auto& [a, b] : t.pairs)
    if (a.k <= 0 || b.k <= 0 || !(a < b)) return false;
  for (const auto& a : t.tail)
    if (a.k <= 0) return false;
  for (std::size_t r = 1; r < t.pairs.size(); ++r)
    if (t.pairs[r - 1].first > t.pairs[r].first ||
        t.pairs[r - 1].second > t.pairs[r].second)
      return false;
  // the single-column tail continues the first column
  for (std::size_t r = 0; r < t.tail.size(); ++r) {
    const PairOmega prev = r == 0 ? (t.pairs.empty() ? PairOmega{0, 0}
                                                     : t.pairs.back().first)
                                  : t.tail[r - 1];
    if (!t.pairs.empty() || r > 0)
      if (prev > t.tail[r]) return false;
  }
  return true;
}

Polynomial P_of_W(const SlLayout& lay, std::optional<int> m,
                  const TableauW& t) {
  const JetRing ring = lay.ring(m);
  Polynomial out(Rational(1));
  for (const auto& row : t.rows) out = out * det_symbol(lay, ring, row);
  return out;
}

Monomial Q_of_W(const SlLayout& lay, const TableauW& t) {
  Monomial out;
  for (const auto& row : t.rows) {
    if (int(row.size()) != lay.n)
      throw error("Q_of_W: row width must equal n");
    for (int i = 0; i < lay.n; ++i)
      out = out.times(lay.var(i, row[i].copy, row[i].k));
  }
  return out;
}

Monomial lowest_monomial(const SlnOrder& order, const Polynomial& h) {
  if (h.is_zero()) throw error("lowest_monomial: zero polynomial");
  const Monomial* best = nullptr;
  for (const auto& [mon, c] : h.terms())
    if (!best || order.compare(mon, *best) < 0) best = &mon;
  return *best;
}

std::optional<TableauW> tableau_of_monomial(const SlLayout& lay,
                                            const Monomial& mon) {
  std::vector<std::vector<PairOmega>> columns(lay.n);
  for (const auto& [v, e] : mon.factors())
    for (int i = 0; i < e; ++i)
      columns[lay.coord(v)].push_back({v.order, lay.copy(v)});
  const std::size_t s = columns[0].size();
  for (auto& col : columns) {
    if (col.size() != s) return std::nullopt;
    std::sort(col.begin(), col.end());
  }
  TableauW t;
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<PairOmega> row;
    for (int i = 0; i < lay.n; ++i) row.push_back(columns[i][r]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<DetPower> row_to_detpower(int n,
                                        const std::vector<PairOmega>& row) {
  if (int(row.size()) != n) return std::nullopt;
  for (int i = 1; i < n; ++i)
    if (!(row[i - 1] < row[i])) return std::nullopt;
  const int a = row.front().k, top = row.back().k;
  DetPower dp;
  if (top == a) {
    for (const auto& om : row) dp.copies.push_back(om.copy);
    dp.k = n * a;
    return dp;
  }
  if (top != a + 1) return std::nullopt;
  int b = 0;
  for (const auto& om : row)
    if (om.k == a + 1) ++b;
  // order-(a+1) copies must all precede the order-a copies
  if (!(row.back().copy < row.front().copy)) return std::nullopt;
  for (int t = n - b; t < n; ++t) dp.copies.push_back(row[t].copy);
  for (int t = 0; t < n - b; ++t) dp.copies.push_back(row[t].copy);
  dp.k = n * a + b;
  return dp;
}

namespace {

void check_sln_invariant(const SlLayout& lay, const JetRing& ring,
                         const Polynomial& h, int w) {
  const int rmax = ring.truncation() ? std::min(w, *ring.truncation()) : w;
  for (const auto& xi : sl_rep_generators(lay))
    for (int r = 0; r <= rmax; ++r)
      if (!act_matrix(ring, xi, r, h).is_zero())
        throw error("express_as_pullback_sln: input is not an arc invariant"
                    " (level " + std::to_string(r) + ")");
}

}  // namespace

SlnExpressResult express_as_pullback_sln(const SlLayout& lay,
                                         std::optional<int> m,
                                         const Polynomial& h, bool verify) {
  const JetRing ring = lay.ring(m);
  ring.validate(h);
  SlnExpressResult result;
  if (h.is_zero()) return result;
  const auto bideg = h.bidegree();
  if (!bideg)
    throw error("express_as_pullback_sln: input must be bihomogeneous");
  if (verify) check_sln_invariant(lay, ring, h, bideg->second);

  const SlnOrder order{lay};
  Polynomial residual = h;
  long long guard = 0;
  while (!residual.is_zero()) {
    if (++guard > 1000000)
      throw internal_error("express_as_pullback_sln: rewrite did not"
                           " terminate");
    const Monomial low = lowest_monomial(order, residual);
    const auto tab = tableau_of_monomial(lay, low);
    if (!tab || !is_standard_tableau(*tab))
      throw error("express_as_pullback_sln: lowest monomial " +
                  to_string(low) +
                  " is not a standard tableau monomial; input is not a"
                  " quotient pullback");
    SlnTerm term;
    Polynomial g(Rational(1));
    for (const auto& row : tab->rows) {
      const auto dp = row_to_detpower(lay.n, row);
      if (!dp)
        throw error("express_as_pullback_sln: tableau row of " +
                    to_string(low) +
                    " does not match any derived determinant; input is not"
                    " a quotient pullback");
      g = g * derived_det(lay, m, *dp);
      term.dets.push_back(*dp);
    }
    const Rational cg = g.coefficient_of(low);
    if (cg == 0)
      throw internal_error(
          "express_as_pullback_sln: generator product lost its lowest term");
    term.coeff = Rational(residual.coefficient_of(low) / cg);
    residual -= term.coeff * g;
    result.terms.push_back(std::move(term));
    ++result.steps;
    if (!residual.is_zero()) {
      const Monomial next = lowest_monomial(order, residual);
      if (order.compare(next, low) <= 0)
        throw internal_error(
            "express_as_pullback_sln: lowest monomial failed to rise");
    }
  }
  return result;
}

Polynomial expand_sln_terms(const SlLayout& lay, std::optional<int> m,
                            const SlnExpressResult& r) {
  Polynomial out;
  for (const auto& t : r.terms) {
    Polynomial g(Rational(1));
    for (const auto& dp : t.dets) g = g * derived_det(lay, m, dp);
    out += t.coeff * g;
  }
  return out;
}

std::vector<QMatrix> sl_rep_generators(const SlLayout& lay) {
  const int n = lay.n, nc = lay.copies, nvars = n * nc;
  std::vector<QMatrix> gens;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      QMatrix xi(nvars, nvars);
      for (int c = 0; c < nc; ++c) xi.at(c * n + p, c * n + q) = 1;
      gens.push_back(std::move(xi));
    }
  for (int i = 0; i + 1 < n; ++i) {
    QMatrix xi(nvars, nvars);
    for (int c = 0; c < nc; ++c) {
      xi.at(c * n + i, c * n + i) = 1;
      xi.at(c * n + i + 1, c * n + i + 1) = -1;
    }
    gens.push_back(std::move(xi));
  }
  return gens;
}

QMatrix sl_corner(const SlLayout& lay) {
  const int n = lay.n, nvars = n * lay.copies;
  QMatrix xi(nvars, nvars);
  for (int c = 0; c < lay.copies; ++c) xi.at(c * n + (n - 1), c * n + 0) = 1;
  return xi;
}

/*──────────────────────────── text round-trip ────────────────────────────*/

std::string to_string(const FVar& v) {
  std::string s = "f[" + std::to_string(v.i + 1) + "," +
                  std::to_string(v.j + 1) + "]";
  if (v.k > 0) s += "^(" + std::to_string(v.k) + ")";
  return s;
}

std::string to_string(const FMonomial& fm) {
  if (fm.factors.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < fm.factors.size(); ++i) {
    if (i > 0) s += "*";
    s += to_string(fm.factors[i]);
  }
  return s;
}

std::string to_string(const DetPower& dp) {
  std::string s = "(det";
  for (int j : dp.copies) s += " " + std::to_string(j + 1);
  s += ", k=" + std::to_string(dp.k) + ")";
  return s;
}

std::string format_tableau(const TableauW& t) {
  std::string out;
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += " ";
      out += "(" + std::to_string(row[i].copy + 1) + "," +
             std::to_string(row[i].k) + ")";
    }
    out += "\n";
  }
  return out;
}

TableauW parse_tableau(const std::string& text) {
  TableauW t;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<PairOmega> row;
    std::size_t pos = 0;
    while (true) {
      while (pos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
      if (pos >= line.size()) break;
      if (line[pos] != '(')
        throw error("parse_tableau: expected '(' at column " +
                    std::to_string(pos + 1));
      int j = 0, k = 0;
      char comma = 0, close = 0;
      std::istringstream cell(line.substr(pos + 1));
      if (!(cell >> j >> comma >> k >> close) || comma != ',' || close != ')')
        throw error("parse_tableau: malformed pair in line '" + line + "'");
      if (j < 1 || k < 0) throw error("parse_tableau: pair out of range");
      row.push_back({k, j - 1});
      pos = line.find(')', pos) + 1;
    }
    if (!row.empty()) t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace jetinv
