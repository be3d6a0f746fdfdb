#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetinv/rational.hpp"

namespace jetinv {

/*──────────────────────────────────────────────────────────────────────────
  Differential polynomial rings.

  A ring holds variables x_j^(i): base index j, derivative order i.  The
  derivation D sends x_j^(i) to x_j^(i+1) (raw normalization) or to
  (i+1)*x_j^(i+1) (divided-power normalization, where x_j^(i) stands for
  the i-th derivative divided by i!).  A finite truncation order m kills
  every variable of order > m, so D of a top-order variable is 0.
  Coefficients are exact rationals throughout; nothing here floats.
 ──────────────────────────────────────────────────────────────────────────*/

struct JetVariable {
  int base = 0;   // base-variable index, 0-based
  int order = 0;  // derivative order, >= 0
  friend constexpr auto operator<=>(const JetVariable&,
                                    const JetVariable&) = default;
};

/// Product of jet variables with positive exponents, kept sorted by
/// (base, order).  Degree and weight (= sum of orders with multiplicity)
/// are cached.
class Monomial {
 public:
  using Factor = std::pair<JetVariable, int>;

  Monomial() = default;

  [[nodiscard]] static const Monomial& one();
  [[nodiscard]] static Monomial variable(JetVariable v, int exponent = 1);
  /// Builds from an arbitrary factor list (merged, validated).
  [[nodiscard]] static Monomial from_factors(std::vector<Factor> factors);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int weight() const { return weight_; }
  [[nodiscard]] bool is_one() const { return factors_.empty(); }
  [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }

  [[nodiscard]] int exponent_of(JetVariable v) const;
  [[nodiscard]] Monomial times(const Monomial& rhs) const;
  [[nodiscard]] Monomial times(JetVariable v, int exponent = 1) const;
  /// Removes one power of v; throws if absent.
  [[nodiscard]] Monomial without_one(JetVariable v) const;
  /// Exact division; nullopt when rhs does not divide this.
  [[nodiscard]] std::optional<Monomial> divided_by(const Monomial& rhs) const;

  /// Structural total order: factor-vector lexicographic.  Used for
  /// canonical term maps; the mathematical orders live in compare.hpp.
  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    return a.factors_ <=> b.factors_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  int degree_ = 0;
  int weight_ = 0;
};

/// Graded structural order: degree, then weight, then factor-lex.  The
/// deterministic default used for basis listings and term printing.
[[nodiscard]] std::strong_ordering structural_graded_compare(const Monomial& a,
                                                             const Monomial& b);

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(Rational constant);
  Polynomial(Monomial m, Rational coeff);

  [[nodiscard]] static const Polynomial& zero();

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, const Rational& c);
  [[nodiscard]] Rational coefficient_of(const Monomial& m) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  [[nodiscard]] friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  [[nodiscard]] friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }
  [[nodiscard]] friend Polynomial operator*(const Polynomial& a,
                                            const Polynomial& b);
  [[nodiscard]] friend Polynomial operator*(const Rational& c, Polynomial p);
  [[nodiscard]] friend Polynomial operator-(Polynomial p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// (degree, weight) when every term agrees; nullopt otherwise or if zero.
  [[nodiscard]] std::optional<std::pair<int, int>> bidegree() const;

  /// Exact division by c*m, term by term; throws error when some term is
  /// not divisible.  This is the only division the library performs.
  [[nodiscard]] Polynomial divided_by_term(const Monomial& m,
                                           const Rational& c) const;

 private:
  TermMap terms_;
};

/// Maps every variable through `image`; exponents expand by repeated
/// multiplication.  The workhorse behind finite-group substitution and
/// pullbacks of presentations.
[[nodiscard]] Polynomial substitute(
    const Polynomial& f,
    const std::function<Polynomial(JetVariable)>& image);

enum class Normalization { raw, divided_power };

class JetRing {
 public:
  JetRing(int num_base_vars, std::optional<int> truncation,
          Normalization normalization);

  [[nodiscard]] int num_base_vars() const { return num_base_vars_; }
  [[nodiscard]] std::optional<int> truncation() const { return truncation_; }
  [[nodiscard]] Normalization normalization() const { return normalization_; }

  [[nodiscard]] bool contains(JetVariable v) const;
  /// Throws error when some variable of f falls outside this ring.
  void validate(const Polynomial& f) const;

  /// Same variables, different truncation.
  [[nodiscard]] JetRing truncated(std::optional<int> m) const {
    return JetRing(num_base_vars_, m, normalization_);
  }

 private:
  int num_base_vars_;
  std::optional<int> truncation_;
  Normalization normalization_;
};

/// One application of the total derivative D (Leibniz over factors).
[[nodiscard]] Polynomial derive(const JetRing& ring, const Polynomial& f);
/// D^k via iterated derive.
[[nodiscard]] Polynomial iter_derive(const JetRing& ring, const Polynomial& f,
                                     int k);

/// Converts coefficients between raw and divided-power conventions:
/// each occurrence of x_j^(i) contributes a factor i! when moving
/// raw -> divided_power, and 1/i! the other way.
[[nodiscard]] Polynomial renormalize(const Polynomial& f, Normalization from,
                                     Normalization to);

/// All monomials of total degree d and total weight w over variables of
/// order <= min(truncation, w), sorted by structural_graded_compare.
/// Every choice here is deterministic.
[[nodiscard]] std::vector<Monomial> graded_basis(const JetRing& ring, int d,
                                                 int w);
/// |graded_basis(ring, d, w)| without materializing it.
[[nodiscard]] long graded_basis_count(const JetRing& ring, int d, int w);

/*──────────────────────────── text round-trip ────────────────────────────*/

/// Renders q*x[j]^(i)^e terms joined by +/-; base indices are 1-based in
/// text.  Order-0 variables print as x[j]; exponent 1 is omitted.
[[nodiscard]] std::string to_string(const Monomial& m);
[[nodiscard]] std::string to_string(const Polynomial& f);

struct ParseOptions {
  /// When set, y[j] is accepted as an alias for x[x_count + j].
  std::optional<int> x_count;
};

/// Inverse of to_string (plus whitespace tolerance).  Validates against
/// the ring.  Throws error with position info on malformed input.
[[nodiscard]] Polynomial parse_polynomial(const JetRing& ring,
                                          const std::string& text,
                                          const ParseOptions& opts = {});

}  // namespace jetinv
