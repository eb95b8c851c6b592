#include "qibg/exactmat.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace qibg {

double log_abs(const mpz_class& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const mpq_class& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(mpz_class(x.get_num())) - log_abs(mpz_class(x.get_den()));
}

double MatrixNorm::log() const { return value == 0 ? 0.0 : log_abs(value); }

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.n());
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) r(i, j) = mpq_class(m(i, j));
  return r;
}

IntegerMatrix to_integer(const RationalMatrix& m) {
  IntegerMatrix r(m.n());
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (m(i, j).get_den() != 1)
        throw NotIntegral("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                          to_string(m(i, j)) + " is not an integer");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

UnimodularMatrix::UnimodularMatrix(IntegerMatrix m) : m_(std::move(m)) {
  if (m_.n() < 2) throw InvalidArgument("unimodular matrices need n >= 2");
  mpz_class d = determinant(m_);
  if (d != 1) throw NotUnimodular(d.get_str());
}

UnimodularMatrix multiply(const UnimodularMatrix& a, const UnimodularMatrix& b) {
  return UnimodularMatrix(multiply(a.m_, b.m_), UnimodularMatrix::Unchecked{});
}

UnimodularMatrix inverse_unimodular(const UnimodularMatrix& m) {
  // Gauss-Jordan over Q on [m | I]; det = 1 makes the result integral.
  const std::size_t n = m.n();
  RationalMatrix a = to_rational(m.matrix());
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a(p, c) == 0) ++p;  // p < n because a is invertible
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    mpq_class piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      mpq_class f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return UnimodularMatrix(to_integer(inv), UnimodularMatrix::Unchecked{});
}

IntegerMatrix elementary(std::size_t n, std::size_t k, std::size_t l, const mpz_class& s) {
  if (k >= n || l >= n || k == l) throw InvalidArgument("elementary matrix needs distinct indices below n");
  IntegerMatrix e = IntegerMatrix::identity(n);
  e(k, l) = s;
  return e;
}

UnimodularMatrix random_word(std::size_t n, std::size_t length, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_word needs n >= 2");
  std::mt19937_64 rng(seed);
  const std::uint64_t count = 2 * n * (n - 1);
  IntegerMatrix m = IntegerMatrix::identity(n);
  for (std::size_t step = 0; step < length; ++step) {
    std::uint64_t g = rng() % count;
    std::uint64_t pair = g / 2;
    int sign = (g % 2 == 0) ? 1 : -1;
    std::size_t k = pair / (n - 1);
    std::size_t l = pair % (n - 1);
    if (l >= k) ++l;
    // M * E_{k,l}(s): column l += s * column k
    for (std::size_t i = 0; i < n; ++i) {
      if (sign > 0)
        m(i, l) += m(i, k);
      else
        m(i, l) -= m(i, k);
    }
  }
  return UnimodularMatrix(std::move(m), UnimodularMatrix::Unchecked{});
}

std::string to_string(const mpq_class& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

}  // namespace qibg
