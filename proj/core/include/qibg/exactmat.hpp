#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qibg/errors.hpp"

namespace qibg {

// Dense n x n matrix over an exact ring, row-major, 0-based indexing.
template <typename Scalar>
class SquareMatrix {
 public:
  using value_type = Scalar;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n) {}

  SquareMatrix(std::initializer_list<std::initializer_list<Scalar>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw DimensionMismatch("matrix rows must all have length n");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static SquareMatrix from_rows(const std::vector<std::vector<Scalar>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw DimensionMismatch("matrix rows must all have length n");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t n() const noexcept { return n_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Scalar> data_;
};

using IntegerMatrix = SquareMatrix<mpz_class>;
// Entries are kept canonical (lowest terms, positive denominator).
using RationalMatrix = SquareMatrix<mpq_class>;

template <typename Scalar>
SquareMatrix<Scalar> multiply(const SquareMatrix<Scalar>& a, const SquareMatrix<Scalar>& b) {
  if (a.n() != b.n()) throw DimensionMismatch("cannot multiply matrices of different sizes");
  const std::size_t n = a.n();
  SquareMatrix<Scalar> c(n);
  Scalar acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b(k, j) == 0) continue;
        acc = a(i, k) * b(k, j);
        c(i, j) += acc;
      }
    }
  }
  return c;
}

// Bareiss fraction-free elimination with row pivoting. Over mpq the
// divisions are exact field divisions, over mpz they are exact by Sylvester's
// identity.
template <typename Scalar>
Scalar determinant(const SquareMatrix<Scalar>& m) {
  const std::size_t n = m.n();
  if (n == 0) return Scalar(1);
  SquareMatrix<Scalar> a = m;
  Scalar prev = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Scalar(0);
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Scalar t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        if constexpr (std::is_same_v<Scalar, mpz_class>) {
          mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
          a(i, j) = std::move(t);
        } else {
          a(i, j) = t / prev;
        }
      }
    }
    prev = a(k, k);
  }
  Scalar d = a(n - 1, n - 1);
  return negate ? Scalar(-d) : d;
}

// Largest absolute entry. Carries the exact value plus its natural log.
struct MatrixNorm {
  mpq_class value;
  // ln(value); 0 is mapped to 0 so that max(1, log) style bounds stay finite.
  double log() const;
};

template <typename Scalar>
MatrixNorm sup_norm(const SquareMatrix<Scalar>& m) {
  MatrixNorm out{mpq_class(0)};
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) {
      mpq_class v = abs(mpq_class(m(i, j)));
      if (v > out.value) out.value = v;
    }
  return out;
}

// Natural log of |x|, exact up to double rounding even for huge integers.
// Returns -infinity for zero.
double log_abs(const mpz_class& x);
double log_abs(const mpq_class& x);

RationalMatrix to_rational(const IntegerMatrix& m);
// Throws NotIntegral if some entry has a denominator other than 1.
IntegerMatrix to_integer(const RationalMatrix& m);

// Element of SL(n, Z), n >= 2. Construction checks the determinant.
class UnimodularMatrix {
 public:
  explicit UnimodularMatrix(IntegerMatrix m);

  std::size_t n() const noexcept { return m_.n(); }
  const IntegerMatrix& matrix() const noexcept { return m_; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend bool operator==(const UnimodularMatrix& a, const UnimodularMatrix& b) { return a.m_ == b.m_; }

 private:
  struct Unchecked {};
  UnimodularMatrix(IntegerMatrix m, Unchecked) : m_(std::move(m)) {}
  friend UnimodularMatrix multiply(const UnimodularMatrix&, const UnimodularMatrix&);
  friend UnimodularMatrix inverse_unimodular(const UnimodularMatrix&);
  friend UnimodularMatrix random_word(std::size_t, std::size_t, std::uint64_t);

  IntegerMatrix m_;
};

UnimodularMatrix multiply(const UnimodularMatrix& a, const UnimodularMatrix& b);

// Exact inverse; the result is again in SL(n, Z).
UnimodularMatrix inverse_unimodular(const UnimodularMatrix& m);

// Elementary matrix I + s * e_k e_l^T (0-based, k != l).
IntegerMatrix elementary(std::size_t n, std::size_t k, std::size_t l, const mpz_class& s);

// Product of `length` generators E_{k,l}(+-1) drawn uniformly with a
// mt19937_64 seeded by `seed`. Generators are indexed pair-major: for each
// ordered pair (k, l), k != l, in lexicographic order, first +1 then -1.
// Each draw right-multiplies the running product.
UnimodularMatrix random_word(std::size_t n, std::size_t length, std::uint64_t seed);

std::string to_string(const mpq_class& q);

}  // namespace qibg
