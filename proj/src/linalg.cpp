#include "jetinv/linalg.hpp"

#include <algorithm>
#include <random>

namespace jetinv {

/*────────────────────────── modular verification ─────────────────────────*/

namespace {

// 62-bit primes; one is chosen per process by a fixed-seed RNG so runs
// are reproducible.  A false mismatch needs the prime to divide a pivot
// minor, which cannot recur across runs with the same inputs.
constexpr unsigned long long kPrimes[] = {
    4611686018427388039ULL, 4611686018427388073ULL, 4611686018427388081ULL,
    4611686018427388091ULL, 4611686018427388093ULL, 4611686018427388097ULL,
    4611686018427388157ULL, 4611686018427388181ULL,
};

unsigned long long chosen_prime() {
  static const unsigned long long p = [] {
    std::mt19937_64 rng(0x6a657469u);  // fixed seed
    return kPrimes[rng() % (sizeof(kPrimes) / sizeof(kPrimes[0]))];
  }();
  return p;
}

unsigned long long mulmod(unsigned long long x, unsigned long long y,
                          unsigned long long p) {
  return static_cast<unsigned long long>(
      (static_cast<unsigned __int128>(x) * y) % p);
}

unsigned long long powmod(unsigned long long b, unsigned long long e,
                          unsigned long long p) {
  unsigned long long r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

// |z| mod p with sign folded back in; p fits in an unsigned long here.
unsigned long long mpz_mod_u64(const Integer& z, unsigned long long p) {
  unsigned long long r = mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
  return r;
}

int rank_mod_p(const QMatrix& m, unsigned long long p) {
  const int R = m.nrows, C = m.ncols;
  std::vector<unsigned long long> a(std::size_t(R) * C);
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) {
      const Rational& q = m.at(r, c);
      if (q == 0) continue;
      unsigned long long num = mpz_mod_u64(q.get_num(), p);
      unsigned long long den = mpz_mod_u64(q.get_den(), p);
      if (den == 0) throw internal_error("modular check: prime divides denominator");
      a[std::size_t(r) * C + c] = mulmod(num, powmod(den, p - 2, p), p);
    }
  int rank = 0;
  for (int col = 0; col < C && rank < R; ++col) {
    int piv = -1;
    for (int r = rank; r < R; ++r)
      if (a[std::size_t(r) * C + col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < C; ++c)
      std::swap(a[std::size_t(piv) * C + c], a[std::size_t(rank) * C + c]);
    unsigned long long inv = powmod(a[std::size_t(rank) * C + col], p - 2, p);
    for (int r = rank + 1; r < R; ++r) {
      unsigned long long f = mulmod(a[std::size_t(r) * C + col], inv, p);
      if (!f) continue;
      for (int c = col; c < C; ++c) {
        unsigned long long sub =
            mulmod(f, a[std::size_t(rank) * C + c], p);
        unsigned long long& x = a[std::size_t(r) * C + c];
        x = (x >= sub) ? x - sub : x + p - sub;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

/*────────────────────────────── Bareiss rank ─────────────────────────────*/

int rank_exact(const QMatrix& m, bool modular_check) {
  const int R = m.nrows, C = m.ncols;
  // Clear denominators row by row; rank is unchanged.
  std::vector<Integer> a(std::size_t(R) * C);
  for (int r = 0; r < R; ++r) {
    Integer lcm = 1;
    for (int c = 0; c < C; ++c) {
      const Integer& den = m.at(r, c).get_den();
      lcm = lcm / gcd(lcm, den) * den;
    }
    for (int c = 0; c < C; ++c) {
      const Rational& q = m.at(r, c);
      a[std::size_t(r) * C + c] = q.get_num() * (lcm / q.get_den());
    }
  }
  auto at = [&](int r, int c) -> Integer& {
    return a[std::size_t(r) * C + c];
  };
  Integer prev = 1;
  int rank = 0;
  for (int col = 0; col < C && rank < R; ++col) {
    int piv = -1;
    for (int r = rank; r < R; ++r)
      if (at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c < C; ++c) swap(at(piv, c), at(rank, c));
    // One-step fraction-free update: a'_{rc} = (p*a_{rc} - a_{r,col}*a_{rank,c})/prev
    const Integer p = at(rank, col);
    for (int r = rank + 1; r < R; ++r) {
      const Integer f = at(r, col);
      // rows with f == 0 still need the p/prev rescale unless it is trivial
      if (f == 0 && p == prev) continue;
      for (int c = col; c < C; ++c) {
        Integer t = p * at(r, c) - f * at(rank, c);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(r, c) = std::move(t);
      }
    }
    prev = p;
    ++rank;
  }
  if (modular_check) {
    const int mod_rank = rank_mod_p(m, chosen_prime());
    if (mod_rank != rank)
      throw internal_error("rank mismatch between exact and modular pass: " +
                           std::to_string(rank) + " vs " +
                           std::to_string(mod_rank));
  }
  return rank;
}

/*────────────────────────────── RREF/kernel ──────────────────────────────*/

QMatrix rref(const QMatrix& m, std::vector<int>* pivots) {
  QMatrix r = m;
  std::vector<int> piv;
  int top = 0;
  for (int col = 0; col < r.ncols && top < r.nrows; ++col) {
    int sel = -1;
    for (int row = top; row < r.nrows; ++row)
      if (r.at(row, col) != 0) {
        sel = row;
        break;
      }
    if (sel < 0) continue;
    if (sel != top)
      for (int c = 0; c < r.ncols; ++c) swap(r.at(sel, c), r.at(top, c));
    const Rational inv = 1 / r.at(top, col);
    for (int c = col; c < r.ncols; ++c) r.at(top, c) *= inv;
    for (int row = 0; row < r.nrows; ++row) {
      if (row == top || r.at(row, col) == 0) continue;
      const Rational f = r.at(row, col);
      for (int c = col; c < r.ncols; ++c) r.at(row, c) -= f * r.at(top, c);
    }
    piv.push_back(col);
    ++top;
  }
  r.nrows = top;  // drop zero rows
  r.a.resize(std::size_t(top) * r.ncols);
  if (pivots) *pivots = std::move(piv);
  return r;
}

QMatrix nullspace(const QMatrix& m) {
  std::vector<int> piv;
  QMatrix r = rref(m, &piv);
  std::vector<bool> is_pivot(m.ncols, false);
  for (int c : piv) is_pivot[c] = true;
  QMatrix out(m.ncols - int(piv.size()), m.ncols);
  int k = 0;
  for (int free = 0; free < m.ncols; ++free) {
    if (is_pivot[free]) continue;
    out.at(k, free) = 1;
    for (int row = 0; row < r.nrows; ++row)
      out.at(k, piv[row]) = -r.at(row, free);
    ++k;
  }
  return out;
}

/*──────────────────────────────── LinearSpan ─────────────────────────────*/

MonomialCmp structural_cmp() {
  return [](const Monomial& a, const Monomial& b) {
    return structural_graded_compare(a, b) < 0;
  };
}

LinearSpan LinearSpan::from_polynomials(int d, int w, std::optional<int> m,
                                        const std::vector<Polynomial>& vectors,
                                        const MonomialCmp& cmp,
                                        bool verify_rank) {
  LinearSpan span;
  span.d = d;
  span.w = w;
  span.m = m;
  std::vector<Monomial> cols;
  for (const auto& f : vectors)
    for (const auto& [mon, c] : f.terms()) cols.push_back(mon);
  std::sort(cols.begin(), cols.end(), cmp);
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  span.columns_ = std::move(cols);
  for (int i = 0; i < int(span.columns_.size()); ++i)
    span.column_index_.emplace(span.columns_[i], i);

  QMatrix raw(int(vectors.size()), int(span.columns_.size()));
  for (int r = 0; r < raw.nrows; ++r)
    for (const auto& [mon, c] : vectors[r].terms())
      raw.at(r, span.column_index_.at(mon)) = c;
  span.rows_ = rref(raw, &span.pivots_);
  if (verify_rank && raw.nrows > 0) {
    const int br = rank_exact(raw);
    if (br != span.rows_.nrows)
      throw internal_error("RREF/Bareiss rank disagreement");
  }
  return span;
}

Polynomial LinearSpan::row_polynomial(int r) const {
  if (r < 0 || r >= rows_.nrows) throw error("row index out of range");
  Polynomial f;
  for (int c = 0; c < rows_.ncols; ++c)
    if (rows_.at(r, c) != 0) f.add_term(columns_[c], rows_.at(r, c));
  return f;
}

std::vector<Polynomial> LinearSpan::row_polynomials() const {
  std::vector<Polynomial> out;
  out.reserve(rows_.nrows);
  for (int r = 0; r < rows_.nrows; ++r) out.push_back(row_polynomial(r));
  return out;
}

const Monomial& LinearSpan::leading_monomial(int r) const {
  if (r < 0 || r >= rows_.nrows) throw error("row index out of range");
  return columns_[pivots_[r]];
}

Polynomial LinearSpan::reduce(const Polynomial& f) const {
  Polynomial rem = f;
  for (int r = 0; r < rows_.nrows; ++r) {
    const Rational c = rem.coefficient_of(columns_[pivots_[r]]);
    if (c == 0) continue;
    rem -= c * row_polynomial(r);
  }
  return rem;
}

bool LinearSpan::contains(const Polynomial& f) const {
  for (const auto& [mon, c] : f.terms())
    if (!column_index_.count(mon)) return false;
  return reduce(f).is_zero();
}

}  // namespace jetinv
