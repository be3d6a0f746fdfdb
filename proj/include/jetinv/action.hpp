#pragma once

#include <vector>

#include "jetinv/diffring.hpp"
#include "jetinv/linalg.hpp"

namespace jetinv {

/*──────────────────────────────────────────────────────────────────────────
  Group and Lie-algebra actions on jet rings.

  Matrices act directly on the span of coordinate functions:
  xi(x_b) = sum_c xi(b,c) x_c.  Dual / contragredient conventions are the
  caller's responsibility.  The generator xi t^r acts on jets by

      xi t^r (x_b^(i)) = (i!/(i-r)!) * (xi(x_b))^(i-r)     (raw),

  and with the numeric factor collapsing to 1 in divided powers.  Finite
  groups act by substituting the same matrix at every derivative order.
 ──────────────────────────────────────────────────────────────────────────*/

struct GroupActionSpec {
  enum class Kind { lie, finite, torus };

  Kind kind = Kind::lie;
  std::vector<QMatrix> matrices;   // lie generators / finite generators
  std::vector<Rational> weights;   // torus: one diagonal generator
  std::size_t closure_bound = 10000;

  [[nodiscard]] static GroupActionSpec lie(std::vector<QMatrix> gens);
  [[nodiscard]] static GroupActionSpec finite(std::vector<QMatrix> gens,
                                              std::size_t bound = 10000);
  [[nodiscard]] static GroupActionSpec torus(std::vector<Rational> weights);

  [[nodiscard]] int dim() const;
  /// Lie/torus generator count (torus counts its single diagonal).
  [[nodiscard]] int generator_count() const;
  /// Generator as a matrix (torus generator 0 is diag(weights)).
  [[nodiscard]] QMatrix generator_matrix(int index) const;
};

/// Action of xi t^r for one derivation matrix.  r must respect the ring
/// truncation (r <= m when finite).
[[nodiscard]] Polynomial act_matrix(const JetRing& ring, const QMatrix& xi,
                                    int r, const Polynomial& f);

/// Generator `gen` of a lie/torus spec at level r.
[[nodiscard]] Polynomial act(const JetRing& ring, const GroupActionSpec& spec,
                             int gen, int r, const Polynomial& f);

/// Substitution action x_b^(i) -> sum_c g(c,b) x_c^(i) of one group element.
[[nodiscard]] Polynomial act_finite(const JetRing& ring, const QMatrix& g,
                                    const Polynomial& f);

/// Multiplicative closure of the finite generators (identity included).
/// Throws error when the closure exceeds spec.closure_bound.
[[nodiscard]] std::vector<QMatrix> group_closure(const GroupActionSpec& spec);

/// Basis of the invariant subspace of the (d, w) piece of O(V_m):
/// simultaneous kernel of all (generator, r <= min(w, m)) constraints for
/// lie/torus kinds, of all (element - id) substitutions for finite kind.
/// Internally blocked by the conserved per-component degree key; the
/// result is exactly the unblocked kernel.
[[nodiscard]] LinearSpan invariant_piece(const JetRing& ring,
                                         const GroupActionSpec& spec, int m,
                                         int d, int w,
                                         const MonomialCmp& cmp = structural_cmp());

/// Invariants via the reduction "g-invariants intersected with ker F",
/// where F acts at level r = 1 through the matrix X (for SL_n: the map
/// sending x_n to x_1 and killing the other coordinates).  Exact for
/// simple g, and must agree with invariant_piece.
[[nodiscard]] LinearSpan sl_reduce_invariant_piece(
    const JetRing& ring, const GroupActionSpec& g_spec, const QMatrix& X,
    int m, int d, int w, const MonomialCmp& cmp = structural_cmp());

}  // namespace jetinv
