#include "jetinv/diffring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace jetinv {

/*──────────────────────────────── Monomial ───────────────────────────────*/

const Monomial& Monomial::one() {
  static const Monomial unit;
  return unit;
}

Monomial Monomial::variable(JetVariable v, int exponent) {
  if (exponent < 0) throw error("negative exponent");
  Monomial m;
  if (exponent > 0) {
    m.factors_.push_back({v, exponent});
    m.degree_ = exponent;
    m.weight_ = v.order * exponent;
  }
  return m;
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end());
  Monomial m;
  for (const auto& [v, e] : factors) {
    if (e < 0) throw error("negative exponent");
    if (e == 0) continue;
    if (v.order < 0 || v.base < 0) throw error("bad variable");
    if (!m.factors_.empty() && m.factors_.back().first == v) {
      m.factors_.back().second += e;
    } else {
      m.factors_.push_back({v, e});
    }
    m.degree_ += e;
    m.weight_ += v.order * e;
  }
  return m;
}

int Monomial::exponent_of(JetVariable v) const {
  auto it = std::lower_bound(
      factors_.begin(), factors_.end(), v,
      [](const Factor& f, JetVariable x) { return f.first < x; });
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

Monomial Monomial::times(const Monomial& rhs) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + rhs.factors_.size());
  auto a = factors_.begin(), b = rhs.factors_.begin();
  while (a != factors_.end() || b != rhs.factors_.end()) {
    if (b == rhs.factors_.end() ||
        (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.push_back({a->first, a->second + b->second});
      ++a, ++b;
    }
  }
  out.degree_ = degree_ + rhs.degree_;
  out.weight_ = weight_ + rhs.weight_;
  return out;
}

Monomial Monomial::times(JetVariable v, int exponent) const {
  return times(variable(v, exponent));
}

Monomial Monomial::without_one(JetVariable v) const {
  Monomial out = *this;
  auto it = std::lower_bound(
      out.factors_.begin(), out.factors_.end(), v,
      [](const Factor& f, JetVariable x) { return f.first < x; });
  if (it == out.factors_.end() || !(it->first == v))
    throw internal_error("without_one: variable absent");
  if (--it->second == 0) out.factors_.erase(it);
  out.degree_ -= 1;
  out.weight_ -= v.order;
  return out;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& rhs) const {
  Monomial out;
  auto a = factors_.begin();
  for (const auto& [v, e] : rhs.factors_) {
    while (a != factors_.end() && a->first < v) out.factors_.push_back(*a++);
    if (a == factors_.end() || !(a->first == v) || a->second < e)
      return std::nullopt;
    if (a->second > e) out.factors_.push_back({v, a->second - e});
    ++a;
  }
  while (a != factors_.end()) out.factors_.push_back(*a++);
  out.degree_ = degree_ - rhs.degree_;
  out.weight_ = weight_ - rhs.weight_;
  return out;
}

std::strong_ordering structural_graded_compare(const Monomial& a,
                                               const Monomial& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  if (auto c = a.weight() <=> b.weight(); c != 0) return c;
  return a.factors() <=> b.factors();
}

/*─────────────────────────────── Polynomial ──────────────────────────────*/

Polynomial::Polynomial(Rational constant) {
  if (constant != 0) terms_.emplace(Monomial::one(), std::move(constant));
}

Polynomial::Polynomial(Monomial m, Rational coeff) {
  if (coeff != 0) terms_.emplace(std::move(m), std::move(coeff));
}

const Polynomial& Polynomial::zero() {
  static const Polynomial z;
  return z;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::coefficient_of(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma.times(mb), ca * cb);
  return out;
}

Polynomial operator*(const Rational& c, Polynomial p) {
  if (c == 0) return {};
  for (auto& [m, q] : p.terms_) q *= c;
  return p;
}

Polynomial operator-(Polynomial p) {
  for (auto& [m, q] : p.terms_) q = -q;
  return p;
}

std::optional<std::pair<int, int>> Polynomial::bidegree() const {
  if (terms_.empty()) return std::nullopt;
  const auto& first = terms_.begin()->first;
  std::pair<int, int> dw{first.degree(), first.weight()};
  for (const auto& [m, c] : terms_)
    if (m.degree() != dw.first || m.weight() != dw.second) return std::nullopt;
  return dw;
}

Polynomial Polynomial::divided_by_term(const Monomial& m,
                                       const Rational& c) const {
  if (c == 0) throw error("division by zero coefficient");
  Polynomial out;
  for (const auto& [mon, q] : terms_) {
    auto quotient = mon.divided_by(m);
    if (!quotient)
      throw error("divided_by_term: term " + to_string(mon) +
                  " not divisible by " + to_string(m));
    out.add_term(*quotient, q / c);
  }
  return out;
}

Polynomial substitute(const Polynomial& f,
                      const std::function<Polynomial(JetVariable)>& image) {
  Polynomial out;
  for (const auto& [m, c] : f.terms()) {
    Polynomial term{Rational(c)};
    for (const auto& [v, e] : m.factors()) {
      const Polynomial img = image(v);
      for (int i = 0; i < e; ++i) term = term * img;
    }
    out += term;
  }
  return out;
}

/*──────────────────────────────── JetRing ────────────────────────────────*/

JetRing::JetRing(int num_base_vars, std::optional<int> truncation,
                 Normalization normalization)
    : num_base_vars_(num_base_vars),
      truncation_(truncation),
      normalization_(normalization) {
  if (num_base_vars < 1) throw error("ring needs at least one base variable");
  if (truncation && *truncation < 0) throw error("negative truncation order");
}

bool JetRing::contains(JetVariable v) const {
  return v.base >= 0 && v.base < num_base_vars_ && v.order >= 0 &&
         (!truncation_ || v.order <= *truncation_);
}

void JetRing::validate(const Polynomial& f) const {
  for (const auto& [m, c] : f.terms())
    for (const auto& [v, e] : m.factors())
      if (!contains(v))
        throw error("variable " + to_string(Monomial::variable(v)) +
                    " outside ring");
}

/*──────────────────────────────── derive ─────────────────────────────────*/

Polynomial derive(const JetRing& ring, const Polynomial& f) {
  ring.validate(f);
  Polynomial out;
  const auto m_top = ring.truncation();
  for (const auto& [mon, c] : f.terms()) {
    for (const auto& [v, e] : mon.factors()) {
      if (m_top && v.order >= *m_top) continue;  // D kills top-order vars
      JetVariable up{v.base, v.order + 1};
      Rational coeff = c * e;
      if (ring.normalization() == Normalization::divided_power)
        coeff *= (v.order + 1);
      out.add_term(mon.without_one(v).times(up), coeff);
    }
  }
  return out;
}

Polynomial iter_derive(const JetRing& ring, const Polynomial& f, int k) {
  if (k < 0) throw error("negative derivative count");
  Polynomial out = f;
  for (int i = 0; i < k; ++i) out = derive(ring, out);
  return out;
}

Polynomial renormalize(const Polynomial& f, Normalization from,
                       Normalization to) {
  if (from == to) return f;
  Polynomial out;
  for (const auto& [mon, c] : f.terms()) {
    Rational scale = 1;
    for (const auto& [v, e] : mon.factors())
      for (int i = 0; i < e; ++i) scale *= factorial(v.order);
    // raw coefficients absorb the i! when rewritten in divided powers
    const Rational scaled =
        to == Normalization::divided_power ? Rational(c * scale)
                                           : Rational(c / scale);
    out.add_term(mon, scaled);
  }
  return out;
}

/*───────────────────────────── graded basis ──────────────────────────────*/

namespace {

struct BasisEnum {
  int max_order;  // min(truncation, w)
  int num_base;
  std::vector<Monomial>* sink = nullptr;
  long count = 0;

  // Variables are consumed in (base, order) sequence; each recursion level
  // decides the exponent of one variable.  Remaining weight is bounded by
  // remaining degree times the largest order still available.
  void run(std::vector<Monomial::Factor>& acc, int base, int order, int d,
           int w) {
    if (d == 0) {
      if (w == 0) {
        ++count;
        if (sink) sink->push_back(Monomial::from_factors(acc));
      }
      return;
    }
    if (base >= num_base) return;
    const int next_base = order == max_order ? base + 1 : base;
    const int next_order = order == max_order ? 0 : order + 1;
    // Highest weight reachable: everything left at the top order.
    if (w > d * max_order) return;
    // Lowest weight reachable: all remaining exponent on this variable.
    if (w < 0) return;
    for (int e = 0; e <= d; ++e) {
      const int w_used = e * order;
      if (w_used > w) break;
      if (e > 0) acc.push_back({{base, order}, e});
      run(acc, next_base, next_order, d - e, w - w_used);
      if (e > 0) acc.pop_back();
    }
  }
};

BasisEnum make_enum(const JetRing& ring, int d, int w) {
  if (d < 0 || w < 0) throw error("negative degree or weight");
  BasisEnum en;
  en.max_order = w;
  if (ring.truncation() && *ring.truncation() < w)
    en.max_order = *ring.truncation();
  en.num_base = ring.num_base_vars();
  return en;
}

}  // namespace

std::vector<Monomial> graded_basis(const JetRing& ring, int d, int w) {
  BasisEnum en = make_enum(ring, d, w);
  std::vector<Monomial> out;
  en.sink = &out;
  std::vector<Monomial::Factor> acc;
  en.run(acc, 0, 0, d, w);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return structural_graded_compare(a, b) < 0;
  });
  return out;
}

long graded_basis_count(const JetRing& ring, int d, int w) {
  BasisEnum en = make_enum(ring, d, w);
  std::vector<Monomial::Factor> acc;
  en.run(acc, 0, 0, d, w);
  return en.count;
}

/*──────────────────────────── text rendering ─────────────────────────────*/

std::string to_string(const Monomial& m) {
  if (m.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : m.factors()) {
    if (!first) os << "*";
    first = false;
    os << "x[" << (v.base + 1) << "]";
    if (v.order > 0) os << "^(" << v.order << ")";
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    Rational a = abs(c);
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    if (m.is_one()) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << to_string(m);
    }
  }
  return os.str();
}

/*────────────────────────────── parsing ──────────────────────────────────*/

namespace {

struct Parser {
  const JetRing& ring;
  const ParseOptions& opts;
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw error("parse error at offset " + std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start || (pos - start == 1 && !std::isdigit(
                            static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return std::stol(s.substr(start, pos - start));
  }

  Rational rational() {
    Integer num(integer());
    if (eat('/')) {
      Integer den(integer());
      if (den == 0) fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }

  JetVariable variable() {
    skip_ws();
    const char name = s[pos];
    ++pos;
    if (!eat('[')) fail("expected '[' after variable name");
    long base = integer() - 1;  // text is 1-based
    if (name == 'y') {
      if (!opts.x_count) fail("'y' variables not allowed in this ring");
      base += *opts.x_count;
    }
    if (!eat(']')) fail("expected ']'");
    int order = 0;
    // ^( order ) binds before a bare ^exponent
    std::size_t save = pos;
    if (eat('^')) {
      if (eat('(')) {
        order = static_cast<int>(integer());
        if (!eat(')')) fail("expected ')'");
      } else {
        pos = save;  // bare exponent, handled by caller
      }
    }
    JetVariable v{static_cast<int>(base), order};
    if (!ring.contains(v)) fail("variable outside ring: " + s.substr(save > 24 ? save - 24 : 0, 32));
    return v;
  }

  // term := rational | [rational *] var (^e)? (* var (^e)?)*
  Polynomial term() {
    Rational coeff = 1;
    std::vector<Monomial::Factor> factors;
    bool saw_coeff = false;
    if (peek() == '-' || peek() == '+' || std::isdigit(
            static_cast<unsigned char>(peek()))) {
      coeff = rational();
      saw_coeff = true;
    }
    bool expect_var = !saw_coeff;
    if (saw_coeff && eat('*')) expect_var = true;
    while (true) {
      char c = peek();
      if (c == 'x' || c == 'y') {
        JetVariable v = variable();
        int e = 1;
        std::size_t save = pos;
        if (eat('^')) {
          if (eat('(')) {
            pos = save;  // belongs to a following construct; malformed anyway
            fail("unexpected '^(' after order");
          }
          e = static_cast<int>(integer());
          if (e < 0) fail("negative exponent");
        }
        factors.push_back({v, e});
        expect_var = false;
        if (eat('*')) {
          expect_var = true;
          continue;
        }
        break;
      }
      if (expect_var) fail("expected variable");
      break;
    }
    return Polynomial(Monomial::from_factors(std::move(factors)), coeff);
  }

  Polynomial parse() {
    Polynomial acc;
    bool negate = false;
    if (eat('-'))
      negate = true;
    else
      eat('+');
    while (true) {
      Polynomial t = term();
      acc += negate ? -t : t;
      skip_ws();
      if (pos >= s.size()) break;
      if (eat('+'))
        negate = false;
      else if (eat('-'))
        negate = true;
      else
        fail("expected '+' or '-'");
    }
    return acc;
  }
};

}  // namespace

Polynomial parse_polynomial(const JetRing& ring, const std::string& text,
                            const ParseOptions& opts) {
  Parser p{ring, opts, text};
  p.skip_ws();
  if (p.pos >= text.size()) return {};
  Polynomial f = p.parse();
  ring.validate(f);
  return f;
}

}  // namespace jetinv
