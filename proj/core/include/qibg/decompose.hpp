#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qibg/exactmat.hpp"
#include "qibg/rootsys.hpp"
#include "qibg/sl2kernel.hpp"

namespace qibg {

// An SL(2, Z) block placed on the index pair (k, l), 1-based, k != l:
// block(0,0) -> (k,k), block(0,1) -> (k,l), block(1,0) -> (l,k), block(1,1) -> (l,l).
struct BlockFactor {
  std::size_t k = 1;
  std::size_t l = 2;
  Sl2Block block;

  friend bool operator==(const BlockFactor&, const BlockFactor&) = default;
};

IntegerMatrix embed(const BlockFactor& f, std::size_t n);

enum class Strategy { ColumnMajor, Clockwise };
std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

// gamma = x_1 * x_2 * ... * x_m.
struct Factorization {
  std::size_t n = 0;
  Strategy strategy = Strategy::ColumnMajor;
  std::vector<BlockFactor> factors;
};

IntegerMatrix product(const Factorization& f);

constexpr std::size_t factor_bound(std::size_t n) { return n * n - n; }

// Every factor must satisfy ln|x_i| <= 2^(n^2 - n) * max(1, ln(n * |gamma|));
// this returns the right-hand side.
double guaranteed_log_bound(const UnimodularMatrix& gamma);

// Raised when no exact factorization could be produced. Never raised for
// inputs that satisfy the documented preconditions unless a bug is present.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

// Column j (left to right) has its sub-diagonal cleared by gcd_transform row
// operations, leaving an upper unitriangular U, which is then written as a
// product of elementary matrices. At most n(n-1)/2 factors per phase.
Factorization decompose_column_major(const UnimodularMatrix& gamma);

struct ClockwiseTrace {
  // Sum, over steps, of previously processed positions found non-zero again.
  std::size_t reannihilations = 0;
  bool left_preconditioned = false;
  bool right_preconditioned = false;
  bool compacted = false;  // adjacent factors had to be merged to fit the bound
  std::size_t attempts = 0;
};

struct ClockwiseResult {
  Factorization factorization;
  ClockwiseTrace trace;
};

// Clears positions in the clockwise class order of `ordering`. Each step
// multiplies the rows (a, b) of class e_a - e_b by gcd_transform(omega, M),
// where omega and M are the leading sigma-minors through a and through b;
// this kills the big-cell coordinate at (a, b) without touching the ones
// cleared before. What remains is sigma-upper triangular with diagonal +-1
// and is peeled off in reverse order.
//
// Inputs outside that big cell are first moved into it by at most one small
// block on each side, found by a bounded search. When n = 2 the output
// coincides with decompose_column_major.
ClockwiseResult decompose_clockwise_traced(const UnimodularMatrix& gamma, const TypeAOrdering& ordering);

// As above, but throws InvariantViolation if a cleared position was ever
// disturbed again.
Factorization decompose_clockwise(const UnimodularMatrix& gamma, const TypeAOrdering& ordering);

// Natural logs throughout. max_ratio = max_i ln|x_i| / max(1, ln|gamma|),
// 0 for an empty factorization.
struct QuasiIsometryStats {
  double input_log_norm = 0;
  std::vector<double> factor_log_norms;
  double max_factor_log_norm = 0;
  double max_ratio = 0;
};

QuasiIsometryStats quasi_isometry_stats(const UnimodularMatrix& gamma, const Factorization& f);

struct VerificationReport {
  bool dimension_ok = false;
  bool product_equal = false;
  bool count_ok = false;
  bool support_ok = false;
  std::size_t factor_count = 0;
  std::size_t count_bound = 0;
  // Factors whose log-norm exceeds guaranteed_log_bound.
  std::size_t bound_violations = 0;
  QuasiIsometryStats stats;
  std::vector<std::string> problems;

  bool passed() const { return dimension_ok && product_equal && count_ok && support_ok; }
};

// Never throws on mismatched data; problems are reported instead.
VerificationReport verify(const UnimodularMatrix& gamma, const Factorization& f);

nlohmann::json to_json(const Factorization& f);
Factorization factorization_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const VerificationReport& r);

}  // namespace qibg
