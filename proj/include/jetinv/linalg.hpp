#pragma once

#include <optional>
#include <vector>

#include "jetinv/diffring.hpp"
#include "jetinv/rational.hpp"

namespace jetinv {

/// Dense row-major matrix of exact rationals.  Sized for desk-scale
/// eliminations (hundreds of rows/columns), not numerics.
struct QMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<Rational> a;

  QMatrix() = default;
  QMatrix(int r, int c) : nrows(r), ncols(c), a(std::size_t(r) * c) {}

  Rational& at(int r, int c) { return a[std::size_t(r) * ncols + c]; }
  const Rational& at(int r, int c) const {
    return a[std::size_t(r) * ncols + c];
  }
};

/// Rank by Bareiss fraction-free elimination over the integers (rows are
/// cleared of denominators first).  When `modular_check` is set the rank
/// is recomputed modulo a large prime drawn from a fixed seeded table and
/// a mismatch throws internal_error.
[[nodiscard]] int rank_exact(const QMatrix& m, bool modular_check = true);

/// Reduced row echelon form; returns pivot column indices in row order.
[[nodiscard]] QMatrix rref(const QMatrix& m, std::vector<int>* pivots = nullptr);

/// Basis of the right kernel {x : m x = 0}, one vector per row, in the
/// canonical free-column form produced from the RREF.
[[nodiscard]] QMatrix nullspace(const QMatrix& m);

/*──────────────────────────────────────────────────────────────────────────
  LinearSpan: a subspace of one (degree, weight) piece of a jet ring,
  stored as RREF rows over an explicit, ordered monomial column basis.
  Columns only cover the union of supports, so spans stay compact even
  when the ambient piece is huge.
 ──────────────────────────────────────────────────────────────────────────*/

using MonomialCmp = std::function<bool(const Monomial&, const Monomial&)>;

/// Ascending structural_graded_compare; the default column order.
[[nodiscard]] MonomialCmp structural_cmp();

class LinearSpan {
 public:
  int d = 0;
  int w = 0;
  std::optional<int> m;

  /// Builds the span of `vectors`, RREF-canonicalized.  Columns are the
  /// support union sorted ascending under `cmp`, so the leading monomial
  /// of each row is minimal within that row.
  [[nodiscard]] static LinearSpan from_polynomials(
      int d, int w, std::optional<int> m,
      const std::vector<Polynomial>& vectors,
      const MonomialCmp& cmp = structural_cmp(), bool verify_rank = true);

  [[nodiscard]] int rank() const { return rows_.nrows; }
  [[nodiscard]] const std::vector<Monomial>& basis_monomials() const {
    return columns_;
  }
  [[nodiscard]] Polynomial row_polynomial(int r) const;
  [[nodiscard]] std::vector<Polynomial> row_polynomials() const;
  /// Leading (smallest-column) monomial of row r.
  [[nodiscard]] const Monomial& leading_monomial(int r) const;

  [[nodiscard]] bool contains(const Polynomial& f) const;
  /// f reduced by the span's rows; zero iff contained.
  [[nodiscard]] Polynomial reduce(const Polynomial& f) const;

 private:
  std::vector<Monomial> columns_;
  std::map<Monomial, int> column_index_;
  QMatrix rows_;           // RREF; rank == rows_.nrows
  std::vector<int> pivots_;
};

}  // namespace jetinv
