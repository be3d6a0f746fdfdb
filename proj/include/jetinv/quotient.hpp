#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetinv/action.hpp"
#include "jetinv/diffring.hpp"
#include "jetinv/linalg.hpp"

namespace jetinv {

/*──────────────────────────────────────────────────────────────────────────
  Classical quotients V//G and their jet-level pullbacks.  A representation
  fixes the group action on the base ring; a presentation fixes generators
  p_j of the invariant ring (with relations over formal f-variables); the
  piece machinery compares the pullback image of the truncated quotient
  against the honest invariants, one (degree, weight) piece at a time.
 ──────────────────────────────────────────────────────────────────────────*/

enum class Family { sl_std, gl_std, so_std, sp_std, torus, finite, custom };

[[nodiscard]] std::string to_string(Family f);
[[nodiscard]] Family family_from_string(const std::string& s);

struct RepresentationSpec {
  Family family = Family::custom;
  int n = 0;  // group size parameter
  int k = 0;  // vector copies
  int l = 0;  // dual copies (sl/gl only)
  std::vector<Rational> torus_weights;
  GroupActionSpec action;
  Normalization normalization = Normalization::raw;

  /// k copies of the vector rep and l of its dual; divided-power ring.
  [[nodiscard]] static RepresentationSpec sl(int n, int k, int l = 0);
  [[nodiscard]] static RepresentationSpec gl(int n, int k, int l);
  [[nodiscard]] static RepresentationSpec so(int n, int k);
  /// G = Sp_{2n} on k copies of C^{2n}.
  [[nodiscard]] static RepresentationSpec sp(int n, int k);
  [[nodiscard]] static RepresentationSpec torus_rep(
      std::vector<Rational> weights);
  [[nodiscard]] static RepresentationSpec finite_rep(
      std::vector<QMatrix> generators);
  [[nodiscard]] static RepresentationSpec custom(GroupActionSpec action,
                                                 Normalization norm);

  [[nodiscard]] int dim_v() const { return action.dim(); }
  [[nodiscard]] JetRing ring(std::optional<int> m) const;
  /// Column order used for piece spans: the recursive tableau order on
  /// pure sl copies, the structural order everywhere else.
  [[nodiscard]] MonomialCmp piece_cmp() const;
  [[nodiscard]] bool has_sl_reduction() const {
    return family == Family::sl_std;
  }
  /// Representation matrix of the corner element (x_n -> x_1); sl only.
  [[nodiscard]] QMatrix corner_matrix() const;
};

/// Invariant (d, w) piece of O(V_m): the two-step reduction for sl
/// families, the stacked kernel otherwise.
[[nodiscard]] LinearSpan rep_invariant_piece(const RepresentationSpec& rep,
                                             int m, int d, int w);

struct NamedPoly {
  std::string name;
  Polynomial poly;
  int degree = 0;
};

class QuotientPresentation {
 public:
  /// Relations are order-0 polynomials over a formal ring with one base
  /// variable per generator.  Construction substitutes the generators
  /// into every relation and rejects any nonzero result.
  QuotientPresentation(JetRing base, std::vector<NamedPoly> generators,
                       std::vector<Polynomial> relations);

  [[nodiscard]] const JetRing& base_ring() const { return base_; }
  [[nodiscard]] const std::vector<NamedPoly>& generators() const {
    return generators_;
  }
  [[nodiscard]] const std::vector<Polynomial>& relations() const {
    return relations_;
  }
  /// One f-variable per generator.
  [[nodiscard]] JetRing formal_ring(std::optional<int> m) const;
  /// f_j^{(i)} -> D^i p_j, evaluated in `target` (so truncation applies).
  [[nodiscard]] Polynomial pullback(const JetRing& target,
                                    const Polynomial& formal) const;

 private:
  JetRing base_;
  std::vector<NamedPoly> generators_;
  std::vector<Polynomial> relations_;
};

struct GeneratorScanOptions {
  int degree_cap = 0;  // 0 picks the family default
};

/// First-fundamental-theorem generators with the relation stock carried
/// by this library: torus ±1 quadrics, pure determinant exchanges, the
/// bordered (n+1, n-1) relations, det = de, det = d^2, rank minors, and
/// sub-Pfaffians.  Torus and finite families fall back to a degree scan.
[[nodiscard]] QuotientPresentation classical_generators(
    const RepresentationSpec& rep, const GeneratorScanOptions& opts = {});

/// Span, inside the (d, w) piece of O(V_m), of all products of iterated
/// derivatives of the generators with every derivative order <= m.
[[nodiscard]] LinearSpan pullback_image_piece(const RepresentationSpec& rep,
                                              const QuotientPresentation& pres,
                                              int m, int d, int w);

enum class Verdict { good_evidence, bad_witnessed };
[[nodiscard]] std::string to_string(Verdict v);

struct PieceReport {
  int d = 0, w = 0, m = 0;
  long long inv_dim = 0, img_dim = 0;
  Verdict verdict = Verdict::good_evidence;
  std::optional<Polynomial> witness;  // invariant outside the image
};

[[nodiscard]] PieceReport classify_piece(const RepresentationSpec& rep,
                                         const QuotientPresentation& pres,
                                         int m, int d, int w);

struct NoninjectivityReport {
  int nonstandard_count = 0;
  int relation_span_dim = 0;
  int kernel_dim = 0;
};

/// The fixed degree-2, weight-1 probe over six copies in three
/// dimensions; other configurations are out of scope.
[[nodiscard]] NoninjectivityReport noninjectivity_probe(
    const RepresentationSpec& rep, int w);
[[nodiscard]] NoninjectivityReport noninjectivity_probe();

struct DfinitePiece {
  int d = 0, w = 0;
  long long inv_dim = 0, span_dim = 0;
  bool contained = false;
  std::optional<Polynomial> witness;
};
struct DfiniteReport {
  std::vector<DfinitePiece> pieces;
  bool all_contained = true;
};

/// Evidence scan: per (d <= d_max, w <= w_max) piece, is every invariant
/// a combination of products of derivatives of the candidates?  Pieces
/// use truncation m = w, deep enough that nothing is cut off.
[[nodiscard]] DfiniteReport dfinite_probe(
    const RepresentationSpec& rep, const std::vector<Polynomial>& candidates,
    int d_max, int w_max);

enum class Classification {
  coregular,
  hypersurface,
  complete_intersection,
  too_many_relations
};
[[nodiscard]] std::string to_string(Classification c);

struct CensusRow {
  long long num_generators = 0;
  std::optional<long long> num_relations;  // unset when past the table
  long long dim_v = 0;
  long long dim_g = 0;
  long long dim_z = 0;
  Classification classification = Classification::coregular;
};

/// Closed-form generator/relation counts and the classification of V//G
/// for the classical families; throws unsupported_error outside the
/// tabulated parameter ranges.
[[nodiscard]] CensusRow census(Family family, int n, int k, int l = 0);

struct CodimBound {
  Rational value;
  int required = 0;  // the bound the value must meet or exceed
};

/// Codimension of the central fiber inside the truncated quotient for
/// the complete-intersection cases; `required` is 4 for the sl and sp
/// cases and 2 for gl/so.
[[nodiscard]] CodimBound codim_formula(Family family, int n);

}  // namespace jetinv
