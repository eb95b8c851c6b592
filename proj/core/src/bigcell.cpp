#include "qibg/bigcell.hpp"

#include <algorithm>
#include <limits>

#include "qibg/matrix_io.hpp"

namespace qibg {

namespace {

void require_square(const RationalMatrix& g) {
  if (g.n() == 0) throw DimensionMismatch("matrix must be at least 1 x 1");
}

void require_invertible(const RationalMatrix& g) {
  if (determinant(g) == 0) throw SingularMatrix("matrix is singular");
}

std::size_t denominator_exponent(const mpz_class& den, const mpz_class& base) {
  mpz_class q = den, g;
  std::size_t e = 0;
  while (q != 1) {
    mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), base.get_mpz_t());
    if (g == 1) return std::numeric_limits<std::size_t>::max();
    // one more power of base removes at least the common part once
    q /= g;
    ++e;
  }
  return e;
}

}  // namespace

std::vector<mpq_class> corner_minors(const RationalMatrix& g) {
  require_square(g);
  const std::size_t n = g.n();
  std::vector<mpq_class> out;
  for (std::size_t j = 1; j < n; ++j) {
    RationalMatrix sub(j);
    for (std::size_t r = 0; r < j; ++r)
      for (std::size_t c = 0; c < j; ++c) sub(r, c) = g(n - j + r, n - j + c);
    out.push_back(determinant(sub));
  }
  return out;
}

bool in_big_cell(const RationalMatrix& g) {
  require_square(g);
  require_invertible(g);
  auto minors = corner_minors(g);
  return std::none_of(minors.begin(), minors.end(), [](const mpq_class& m) { return m == 0; });
}

UlFactorization ul_factorize(const RationalMatrix& g) {
  require_square(g);
  require_invertible(g);
  const std::size_t n = g.n();
  // Doolittle LU of the index-reversed matrix h(i, j) = g(n-1-i, n-1-j):
  // a unit lower factor of h is a unit upper factor of g and vice versa.
  auto rev = [n](std::size_t i) { return n - 1 - i; };
  RationalMatrix lo = RationalMatrix::identity(n);  // L of h
  RationalMatrix up(n);                              // U of h
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k; j < n; ++j) {
      mpq_class s = g(rev(k), rev(j));
      for (std::size_t t = 0; t < k; ++t) s -= lo(k, t) * up(t, j);
      up(k, j) = s;
    }
    if (up(k, k) == 0) throw NotInBigCell(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      mpq_class s = g(rev(i), rev(k));
      for (std::size_t t = 0; t < k; ++t) s -= lo(i, t) * up(t, k);
      lo(i, k) = s / up(k, k);
    }
  }
  UlFactorization out{RationalMatrix(n), RationalMatrix(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.u_plus(i, j) = lo(rev(i), rev(j));
      out.p_minus(i, j) = up(rev(i), rev(j));
    }
  return out;
}

BigCellBoundReport denominator_and_norm_check(const UnimodularMatrix& gamma) {
  const std::size_t n = gamma.n();
  RationalMatrix g = to_rational(gamma.matrix());
  UlFactorization f = ul_factorize(g);

  BigCellBoundReport r;
  r.minor_product = 1;
  for (const auto& m : corner_minors(g)) {
    r.minors.push_back(m.get_num());
    r.minor_product *= m.get_num();
  }
  const mpz_class base = abs(r.minor_product);
  for (const RationalMatrix* m : {&f.u_plus, &f.p_minus})
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r.denominator_exponent = std::max(r.denominator_exponent, denominator_exponent(mpz_class((*m)(i, j).get_den()), base));
  r.denominators_ok = r.denominator_exponent <= n;

  r.gamma_log_norm = sup_norm(gamma.matrix()).log();
  const double scale = std::max(1.0, r.gamma_log_norm);
  r.p_log_norm = sup_norm(f.p_minus).log();
  r.p_log_bound = static_cast<double>(n * n) * scale;
  r.norm_ok = r.p_log_norm <= r.p_log_bound;
  r.p_ratio = r.p_log_norm / scale;
  r.u_ratio = sup_norm(f.u_plus).log() / scale;
  return r;
}

UnipotentSplit unipotent_class_split(const RationalMatrix& u, const TypeAOrdering& ordering, std::size_t i) {
  const std::size_t n = u.n();
  if (ordering.n != n) throw DimensionMismatch("ordering is for n = " + std::to_string(ordering.n) + ", matrix has n = " + std::to_string(n));
  const std::size_t k = ordering.positions.size();
  if (i < 1 || i > k) throw InvalidArgument("class index " + std::to_string(i) + " outside 1.." + std::to_string(k));

  std::vector<std::vector<int>> slot(n, std::vector<int>(n, -1));
  for (std::size_t t = 0; t < k; ++t) slot[ordering.positions[t].first][ordering.positions[t].second] = static_cast<int>(t);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b ? u(a, b) != 1 : (u(a, b) != 0 && slot[a][b] < 0))
        throw InvalidArgument("matrix is not unitriangular for this ordering (entry " + std::to_string(a + 1) + "," +
                              std::to_string(b + 1) + ")");
    }

  // Peel E_{alpha_t}(c_t) off the right, last class first. The last class is
  // simple for the remaining product, so its entry is exactly its coefficient.
  std::vector<mpq_class> coeff(k);
  RationalMatrix cur = u;
  for (std::size_t t = k; t-- > 0;) {
    const auto [a, b] = ordering.positions[t];
    coeff[t] = cur(a, b);
    if (coeff[t] != 0)
      for (std::size_t r = 0; r < n; ++r) cur(r, b) -= coeff[t] * cur(r, a);
    for (std::size_t s = t; s < k; ++s)
      if (cur(ordering.positions[s].first, ordering.positions[s].second) != 0)
        throw InvariantViolation("peeling class " + std::to_string(t + 1) + " reintroduced class " + std::to_string(s + 1));
  }
  if (!cur.is_identity()) throw InvariantViolation("class peeling did not reach the identity");

  auto product_of = [&](std::size_t from, std::size_t to) {
    RationalMatrix m = RationalMatrix::identity(n);
    for (std::size_t t = from; t < to; ++t) {
      const auto [a, b] = ordering.positions[t];
      if (coeff[t] == 0) continue;
      for (std::size_t r = 0; r < n; ++r) m(r, b) += coeff[t] * m(r, a);
    }
    return m;
  };
  return {product_of(0, i - 1), product_of(i - 1, i), product_of(i, k)};
}

nlohmann::json to_json(const BigCellBoundReport& r) {
  nlohmann::json minors = nlohmann::json::array();
  for (const auto& m : r.minors) minors.push_back(m.get_str());
  nlohmann::json exponent = r.denominator_exponent == std::numeric_limits<std::size_t>::max()
                                ? nlohmann::json(nullptr)
                                : nlohmann::json(r.denominator_exponent);
  return {{"minors", minors},
          {"minor_product", r.minor_product.get_str()},
          {"denominator_exponent", exponent},
          {"denominators_ok", r.denominators_ok},
          {"gamma_log_norm", r.gamma_log_norm},
          {"p_log_norm", r.p_log_norm},
          {"p_log_bound", r.p_log_bound},
          {"norm_ok", r.norm_ok},
          {"p_ratio", r.p_ratio},
          {"u_ratio", r.u_ratio},
          {"passed", r.passed()}};
}

}  // namespace qibg
