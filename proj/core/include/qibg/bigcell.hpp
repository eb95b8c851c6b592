#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "qibg/exactmat.hpp"
#include "qibg/rootsys.hpp"

namespace qibg {

// omega_j(g) for j = 1 .. n-1: the determinant of the bottom-right j x j
// block. Entry j-1 of the result holds omega_j.
std::vector<mpq_class> corner_minors(const RationalMatrix& g);

// g lies in the big cell when every omega_j is non-zero. Throws
// SingularMatrix for det g == 0.
bool in_big_cell(const RationalMatrix& g);

class NotInBigCell : public Error {
 public:
  explicit NotInBigCell(std::size_t j)
      : Error("corner minor omega_" + std::to_string(j) + " vanishes; matrix is outside the big cell"), j_(j) {}
  std::size_t vanishing_minor() const noexcept { return j_; }

 private:
  std::size_t j_;
};

// g = u_plus * p_minus, u_plus upper unitriangular, p_minus lower triangular.
struct UlFactorization {
  RationalMatrix u_plus;
  RationalMatrix p_minus;
};

// Throws SingularMatrix, or NotInBigCell naming the first vanishing omega_j.
UlFactorization ul_factorize(const RationalMatrix& g);

struct BigCellBoundReport {
  std::vector<mpz_class> minors;  // omega_1 .. omega_{n-1}
  mpz_class minor_product;
  // Smallest e with every denominator dividing minor_product^e; SIZE_MAX if
  // some denominator has a prime not in minor_product.
  std::size_t denominator_exponent = 0;
  bool denominators_ok = false;  // exponent <= n

  double gamma_log_norm = 0;
  double p_log_norm = 0;
  double p_log_bound = 0;  // n^2 * max(1, ln|gamma|)
  bool norm_ok = false;
  double p_ratio = 0;  // ln|p_minus| / max(1, ln|gamma|)
  double u_ratio = 0;  // ln|u_plus| / max(1, ln|gamma|)

  bool passed() const { return denominators_ok && norm_ok; }
};

// Requires gamma in the big cell (NotInBigCell otherwise).
BigCellBoundReport denominator_and_norm_check(const UnimodularMatrix& gamma);

// u = left * mid * right with left supported on the classes before i, mid on
// class i and right on the classes after it (clockwise order, 1-based i).
// u must be unitriangular for the ordering's positive system.
struct UnipotentSplit {
  RationalMatrix left, mid, right;
};

UnipotentSplit unipotent_class_split(const RationalMatrix& u, const TypeAOrdering& ordering, std::size_t i);

nlohmann::json to_json(const BigCellBoundReport& r);

}  // namespace qibg
