#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jetinv/action.hpp"
#include "jetinv/diffring.hpp"
#include "jetinv/orders.hpp"

namespace jetinv {

/*──────────────────────────────────────────────────────────────────────────
  Standard-monomial calculus for the two worked families: balanced words
  over a weight ±1 torus ring, and tableaux over copies of the SL_n
  vector representation.  Both sides follow the same plan: a combinatorial
  normal form for extreme terms, a predicate telling which terms are
  reachable from the quotient, and a greedy rewrite that peels off one
  generator product per step.
 ──────────────────────────────────────────────────────────────────────────*/

/// Balanced word u_1..u_r v_1..v_r: u holds x-side variables and v holds
/// y-side variables, both sorted nondecreasing under (order, index).
struct Word {
  std::vector<JetVariable> u;
  std::vector<JetVariable> v;
  friend bool operator==(const Word&, const Word&) = default;
};

[[nodiscard]] bool is_standard_word(const CstarLayout& lay, const Word& w);
/// Standard, v_1 of order 0, and D(v_s) > v_{s+1} for every consecutive s.
[[nodiscard]] bool is_admissible(const CstarLayout& lay, const Word& w);

[[nodiscard]] Monomial word_monomial(const Word& w);
/// Splits a balanced monomial into its sorted word; throws when the x and
/// y degrees differ.
[[nodiscard]] Word word_of_monomial(const CstarLayout& lay, const Monomial& m);

/// Quotient coordinate f_{ij}^{(k)} pairing x-index i with y-index j at
/// derivative order k.  Indices are 0-based internally, 1-based in text.
struct FVar {
  int i = 0;
  int j = 0;
  int k = 0;
  friend constexpr auto operator<=>(const FVar&, const FVar&) = default;
};

/// Comparability: two or more orders apart is always <=; one order apart
/// needs i <= i' or j <= j'; equal orders need both.
[[nodiscard]] bool fvar_le(const FVar& a, const FVar& b);

/// Product of f-variables, kept sorted by (k, i, j).
struct FMonomial {
  std::vector<FVar> factors;

  [[nodiscard]] static FMonomial of(std::vector<FVar> factors);
  [[nodiscard]] int degree() const { return int(factors.size()); }
  [[nodiscard]] int weight() const;
  friend bool operator==(const FMonomial&, const FMonomial&) = default;
};

/// True when the sorted factor list is a chain under fvar_le.
[[nodiscard]] bool is_standard_fmono(const FMonomial& fm);

/// The admissible word carrying the leading term of the pullback of a
/// standard f-monomial: v-orders start at 0 and step up exactly when the
/// y-index drops between consecutive factors.
[[nodiscard]] Word L_of_w(const CstarLayout& lay, const FMonomial& fm);
/// Inverse of L_of_w; requires an admissible word.
[[nodiscard]] FMonomial fmono_of_word(const CstarLayout& lay, const Word& w);

/// Greatest word among the terms of a nonzero combination of balanced
/// monomials.
[[nodiscard]] Word M_of_h(const CstarLayout& lay, const Polynomial& h);

/// prod_s D^{k_s}(x_{i_s} y_{j_s}) in the (optionally truncated) torus
/// ring; the pullback of the f-monomial from the quotient.
[[nodiscard]] Polynomial pullback_fmono(const CstarLayout& lay,
                                        std::optional<int> m,
                                        const FMonomial& fm);

struct StraightenTerm {
  FMonomial fm;
  Rational coeff;
};
struct StraightenResult {
  std::vector<StraightenTerm> terms;
  int steps = 0;
};

/// Rewrites an invariant h as a combination of pullbacks of standard
/// f-monomials by repeatedly cancelling the greatest word.  Throws error
/// when h fails the invariance check or a leading word turns out not to
/// be admissible; a stalled rewrite raises internal_error.
[[nodiscard]] StraightenResult straighten_cstar(const CstarLayout& lay,
                                                std::optional<int> m,
                                                const Polynomial& h,
                                                bool verify = true);
/// Recombines a straightening certificate into the polynomial it encodes.
[[nodiscard]] Polynomial expand_straighten(const CstarLayout& lay,
                                           std::optional<int> m,
                                           const StraightenResult& r);

/*──────────────────────────── SL_n tableaux ──────────────────────────────*/

/// n x n determinant whose column t is the coordinate vector of the pair
/// omega_t.  Zero when a pair's order exceeds the ring truncation.
[[nodiscard]] Polynomial det_symbol(const SlLayout& lay, const JetRing& ring,
                                    const std::vector<PairOmega>& omegas);

/// D^k applied to the determinant of the listed order-0 copies.
struct DetPower {
  std::vector<int> copies;  // 0-based, strictly increasing
  int k = 0;
  friend bool operator==(const DetPower&, const DetPower&) = default;
};
[[nodiscard]] Polynomial derived_det(const SlLayout& lay, std::optional<int> m,
                                     const DetPower& dp);
/// The pair row carrying the lowest monomial of derived_det: writing
/// k = n*a + b, copies b+1..n stay at order a and copies 1..b move to
/// order a+1, listed in that order.
[[nodiscard]] std::vector<PairOmega> derived_det_row(int n, const DetPower& dp);

/// s x n array of pairs; row i, column t labels an x_t factor.
struct TableauW {
  std::vector<std::vector<PairOmega>> rows;
  friend bool operator==(const TableauW&, const TableauW&) = default;
};
/// Two-column pair rows followed by single first-column entries; every
/// pair has positive order.
struct TableauY {
  std::vector<std::pair<PairOmega, PairOmega>> pairs;
  std::vector<PairOmega> tail;
};

/// Rows strictly increasing, columns nondecreasing downward.
[[nodiscard]] bool is_standard_tableau(const TableauW& t);
[[nodiscard]] bool is_standard_tableau(const TableauY& t);

/// Product of the row determinants.
[[nodiscard]] Polynomial P_of_W(const SlLayout& lay, std::optional<int> m,
                                const TableauW& t);
/// prod_s prod_t x_t^{omega_{s,t}}; for standard tableaux this is the
/// lowest monomial of P_of_W.
[[nodiscard]] Monomial Q_of_W(const SlLayout& lay, const TableauW& t);

/// Minimum term of a nonzero polynomial under the recursive order.
[[nodiscard]] Monomial lowest_monomial(const SlnOrder& order,
                                       const Polynomial& h);

/// The unique column-sorted tableau whose Q-monomial is `mon`, when the
/// per-coordinate multiplicities all agree; nullopt otherwise.  The
/// result need not be standard.
[[nodiscard]] std::optional<TableauW> tableau_of_monomial(const SlLayout& lay,
                                                          const Monomial& mon);
/// Reads a strictly increasing row back as D^k of a base determinant.
/// Valid rows have all orders equal, or orders {a, a+1} with every
/// order-(a+1) copy smaller than every order-a copy.
[[nodiscard]] std::optional<DetPower> row_to_detpower(
    int n, const std::vector<PairOmega>& row);

struct SlnTerm {
  std::vector<DetPower> dets;
  Rational coeff;
};
struct SlnExpressResult {
  std::vector<SlnTerm> terms;
  int steps = 0;
};

/// Rewrites an invariant h as a combination of products of D^k-images of
/// base determinants, cancelling the lowest monomial each round.  Error
/// reporting matches straighten_cstar.
[[nodiscard]] SlnExpressResult express_as_pullback_sln(const SlLayout& lay,
                                                       std::optional<int> m,
                                                       const Polynomial& h,
                                                       bool verify = true);
[[nodiscard]] Polynomial expand_sln_terms(const SlLayout& lay,
                                          std::optional<int> m,
                                          const SlnExpressResult& r);

/// Standard basis E_pq (p != q) and H_i = E_ii - E_{i+1,i+1}, each acting
/// in every copy at once.
[[nodiscard]] std::vector<QMatrix> sl_rep_generators(const SlLayout& lay);
/// The corner map x_n -> x_1 in every copy; the level-one reduction.
[[nodiscard]] QMatrix sl_corner(const SlLayout& lay);

/*──────────────────────────── text round-trip ────────────────────────────*/

[[nodiscard]] std::string to_string(const FVar& v);       // f[1,2]^(1)
[[nodiscard]] std::string to_string(const FMonomial& fm);
[[nodiscard]] std::string to_string(const DetPower& dp);  // (det 1 2, k=1)
/// Rows rendered "(j,k) (j,k) ...", one per line, copies 1-based.
[[nodiscard]] std::string format_tableau(const TableauW& t);
[[nodiscard]] TableauW parse_tableau(const std::string& text);

}  // namespace jetinv
