#include "qibg/sl2kernel.hpp"

#include "qibg/errors.hpp"

namespace qibg {

Sl2Block operator*(const Sl2Block& x, const Sl2Block& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Sl2Block operator-(const Sl2Block& x) { return {-x.a, -x.b, -x.c, -x.d}; }

Sl2Block inverse(const Sl2Block& x) { return {x.d, -x.b, -x.c, x.a}; }

std::pair<mpz_class, mpz_class> apply(const Sl2Block& x, const mpz_class& u, const mpz_class& v) {
  return {x.a * u + x.b * v, x.c * u + x.d * v};
}

Sl2Block gcd_transform(const mpz_class& a, const mpz_class& b) {
  if (b == 0) {
    if (a == 0) throw InvalidArgument("gcd_transform needs (a, b) != (0, 0)");
    return a > 0 ? Sl2Block{1, 0, 0, 1} : Sl2Block{-1, 0, 0, -1};
  }
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  const mpz_class bg = b / g;
  const mpz_class ag = a / g;
  const mpz_class period = abs(bg);

  // Any p = s + m * (b/g) is a valid Bezout coefficient; pick the one in
  // (-period/2, period/2].
  mpz_class p;
  mpz_fdiv_r(p.get_mpz_t(), s.get_mpz_t(), period.get_mpz_t());
  if (2 * p > period) p -= period;
  mpz_class q = (g - p * a) / b;
  return {p, q, -bg, ag};
}

std::string to_string(const Sl2Block& x) {
  return "[[" + x.a.get_str() + ", " + x.b.get_str() + "], [" + x.c.get_str() + ", " + x.d.get_str() + "]]";
}

}  // namespace qibg
