#pragma once

#include <string>
#include <utility>

#include <gmpxx.h>

namespace qibg {

// 2x2 integer block [[a, b], [c, d]].
struct Sl2Block {
  mpz_class a = 1, b = 0, c = 0, d = 1;

  static Sl2Block identity() { return {}; }
  mpz_class det() const { return a * d - b * c; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
  bool is_minus_identity() const { return a == -1 && b == 0 && c == 0 && d == -1; }

  friend bool operator==(const Sl2Block&, const Sl2Block&) = default;
};

Sl2Block operator*(const Sl2Block& x, const Sl2Block& y);
Sl2Block operator-(const Sl2Block& x);

// Inverse of a determinant-one block.
Sl2Block inverse(const Sl2Block& x);

// X * (x, y)^T.
std::pair<mpz_class, mpz_class> apply(const Sl2Block& x, const mpz_class& u, const mpz_class& v);

// The unique-by-convention X in SL(2, Z) with X * (a, b)^T = (gcd(a, b), 0)^T.
//
//   b == 0: I for a > 0, -I for a < 0.
//   a == 0: [[0, 1], [-1, 0]] for b > 0, [[0, -1], [1, 0]] for b < 0.
//   else:   [[p, q], [-b/g, a/g]] with p a + q b = g, where p is taken in the
//           symmetric residue range (-B/2, B/2], B = |b/g|.
//
// All entries are bounded by max(|a|, |b|, 1). Throws InvalidArgument for (0, 0).
Sl2Block gcd_transform(const mpz_class& a, const mpz_class& b);

std::string to_string(const Sl2Block& x);

}  // namespace qibg
