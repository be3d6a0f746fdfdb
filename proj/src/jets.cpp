#include "jetinv/jets.hpp"

namespace jetinv {

AffineScheme::AffineScheme(JetRing ring, std::vector<Polynomial> gens)
    : ambient(std::move(ring)), generators(std::move(gens)) {
  for (const auto& f : generators) {
    ambient.validate(f);
    const auto bd = f.bidegree();
    if (!bd) throw error("scheme generator must be bihomogeneous");
    if (bd->second != 0)
      throw error("scheme generator must use order-0 variables only");
    if (f == Polynomial{}) throw error("scheme generator must be nonzero");
  }
}

int AffineScheme::degree_of(int gen) const {
  return generators.at(gen).bidegree()->first;
}

JetIdealBasis jet_ideal(const AffineScheme& scheme, int m) {
  if (m < 0) throw error("negative truncation");
  if (scheme.ambient.truncation() && *scheme.ambient.truncation() < m)
    throw error("truncation exceeds ambient ring's");
  const JetRing ring = scheme.ambient.truncated(m);
  JetIdealBasis out;
  out.m = m;
  for (const auto& f : scheme.generators) {
    std::vector<Polynomial> ders;
    ders.reserve(m + 1);
    ders.push_back(f);
    for (int i = 1; i <= m; ++i) ders.push_back(derive(ring, ders.back()));
    out.derivatives.push_back(std::move(ders));
  }
  return out;
}

LinearSpan ideal_piece_span(const AffineScheme& scheme, int m, int d, int w,
                            const MonomialCmp& cmp) {
  const JetIdealBasis basis = jet_ideal(scheme, m);
  const JetRing ring = scheme.ambient.truncated(m);
  std::vector<Polynomial> rows;
  for (std::size_t l = 0; l < scheme.generators.size(); ++l) {
    const int deg = scheme.degree_of(int(l));
    if (deg > d) continue;
    const int imax = std::min(w, m);
    for (int i = 0; i <= imax; ++i) {
      const Polynomial& df = basis.derivatives[l][i];
      if (df == Polynomial{}) continue;
      for (const auto& mon : graded_basis(ring, d - deg, w - i))
        rows.push_back(Polynomial(mon, 1) * df);
    }
  }
  return LinearSpan::from_polynomials(d, w, m, rows, cmp);
}

long long quotient_piece_dim(const AffineScheme& scheme, int m, int d, int w) {
  const JetRing ring = scheme.ambient.truncated(m);
  return graded_basis_count(ring, d, w) - ideal_piece_span(scheme, m, d, w).rank();
}

}  // namespace jetinv
