#include <algorithm>
#include <optional>

#include "factor_ops.hpp"
#include "qibg/decompose.hpp"

namespace qibg {

namespace {

mpz_class minor(const IntegerMatrix& g, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  IntegerMatrix sub(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = g(rows[i], cols[j]);
  return determinant(sub);
}

// Leading sigma-minors for the class e_a - e_b, with a = sigma[p]:
// omega uses rows sigma[0..p-1], a; m swaps a for b. The big-cell coordinate
// at (a, b) is m / omega, so it vanishes exactly when m does.
struct ClassMinors {
  mpz_class omega, m;
  bool prefix_nonzero = true;
};

class Sweeper {
 public:
  Sweeper(const TypeAOrdering& ord) : ord_(ord), pos_(ord.n) {
    for (std::size_t i = 0; i < ord.n; ++i) pos_[ord.sigma[i]] = i;
  }

  ClassMinors minors(const IntegerMatrix& g, std::size_t a, std::size_t b) const {
    const std::size_t p = pos_[a];
    std::vector<std::size_t> rows(ord_.sigma.begin(), ord_.sigma.begin() + static_cast<std::ptrdiff_t>(p));
    std::vector<std::size_t> cols(ord_.sigma.begin(), ord_.sigma.begin() + static_cast<std::ptrdiff_t>(p + 1));
    ClassMinors out;
    if (p > 0) out.prefix_nonzero = minor(g, rows, rows) != 0;
    rows.push_back(a);
    out.omega = minor(g, rows, cols);
    rows.back() = b;
    out.m = minor(g, rows, cols);
    return out;
  }

  struct Result {
    IntegerMatrix g;
    std::vector<BlockFactor> factors;
    std::size_t reannihilations = 0;
  };

  // nullopt when g is outside the big cell the sweep relies on.
  std::optional<Result> run(IntegerMatrix g) const {
    Result r;
    const auto& positions = ord_.positions;
    for (std::size_t t = 0; t < positions.size(); ++t) {
      const auto [a, b] = positions[t];
      ClassMinors cm = minors(g, a, b);
      if (!cm.prefix_nonzero) return std::nullopt;
      if (cm.m != 0) {
        Sl2Block x = gcd_transform(cm.omega, cm.m);
        detail::apply_left(g, a, b, x);
        r.factors.push_back(detail::factor_at(a, b, inverse(x)));
      }
      for (std::size_t s = 0; s < t; ++s)
        if (minors(g, positions[s].first, positions[s].second).m != 0) ++r.reannihilations;
    }
    for (const auto& [a, b] : positions)
      if (g(b, a) != 0) return std::nullopt;
    r.g = std::move(g);
    return r;
  }

 private:
  const TypeAOrdering& ord_;
  std::vector<std::size_t> pos_;
};

struct Preconditioner {
  std::size_t a = 0, b = 0;
  Sl2Block block;
};

std::vector<Sl2Block> small_blocks(long range) {
  std::vector<Sl2Block> out;
  for (long m = -range; m <= range; ++m)
    if (m != 0) out.push_back({1, 0, m, 1});
  for (long m = -range; m <= range; ++m)
    if (m != 0) out.push_back({1, m, 0, 1});
  out.push_back({0, 1, -1, 0});
  out.push_back({0, -1, 1, 0});
  return out;
}

void validate(const UnimodularMatrix& gamma, const TypeAOrdering& ord) {
  const std::size_t n = gamma.n();
  if (ord.n != n || ord.sigma.size() != n || ord.positions.size() != n * (n - 1) / 2)
    throw DimensionMismatch("ordering is for n = " + std::to_string(ord.n) + ", matrix has n = " + std::to_string(n));
  std::vector<std::size_t> pos(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ord.sigma[i] >= n || pos[ord.sigma[i]] != n) throw InvalidArgument("ordering sigma is not a permutation");
    pos[ord.sigma[i]] = i;
  }
  for (const auto& [a, b] : ord.positions)
    if (a >= n || b >= n || pos[a] >= pos[b]) throw InvalidArgument("ordering position is not a positive root");
}

}  // namespace

ClockwiseResult decompose_clockwise_traced(const UnimodularMatrix& gamma, const TypeAOrdering& ordering) {
  validate(gamma, ordering);
  const std::size_t n = gamma.n();
  if (n == 2) {
    // One class only: the clockwise order carries no information, and the
    // single gcd step followed by one shear is exactly the column sweep.
    ClockwiseResult out{decompose_column_major(gamma), {}};
    out.factorization.strategy = Strategy::Clockwise;
    out.trace.attempts = 1;
    return out;
  }
  const auto theta = ordering.highest();
  const Sweeper sweeper(ordering);

  ClockwiseResult out;
  out.factorization = {n, Strategy::Clockwise, {}};

  // gamma = Y^-1 * steps * D * N * Z^-1, where Y = y_m ... y_1 and
  // Z = z_1 ... z_m are the preconditioners, D is diagonal of signs and N is
  // sigma-unitriangular. Returns false when the sweep fails or the factor
  // list does not fit the bound.
  auto attempt = [&](const std::vector<Preconditioner>& ys, const std::vector<Preconditioner>& zs) {
    ++out.trace.attempts;
    IntegerMatrix h = gamma.matrix();
    for (const auto& y : ys) detail::apply_left(h, y.a, y.b, y.block);
    for (const auto& z : zs) detail::apply_right(h, z.a, z.b, z.block);
    auto swept = sweeper.run(std::move(h));
    if (!swept) return false;

    std::vector<BlockFactor> factors;
    for (const auto& y : ys) factors.push_back(detail::factor_at(y.a, y.b, inverse(y.block)));
    factors.insert(factors.end(), swept->factors.begin(), swept->factors.end());

    IntegerMatrix cur = swept->g;
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < n; ++i) {
      if (abs(cur(i, i)) != 1) throw InvariantViolation("sweep left a diagonal entry other than +-1");
      if (cur(i, i) < 0) {
        negative.push_back(i);
        for (std::size_t j = 0; j < n; ++j) cur(i, j) = -cur(i, j);
      }
    }
    for (std::size_t i = 0; i + 1 < negative.size(); i += 2)
      factors.push_back(detail::factor_at(negative[i], negative[i + 1], Sl2Block{-1, 0, 0, -1}));

    // Peel N in reverse clockwise order; the highest-root shear commutes with
    // the rest of N and is moved last so that a right preconditioner on the
    // same pair can merge with it.
    std::vector<BlockFactor> cleanup;
    std::optional<BlockFactor> central;
    for (auto it = ordering.positions.rbegin(); it != ordering.positions.rend(); ++it) {
      const auto [a, b] = *it;
      mpz_class c = cur(a, b);
      if (c == 0) continue;
      for (std::size_t j = 0; j < n; ++j) cur(a, j) -= c * cur(b, j);
      BlockFactor f = detail::factor_at(a, b, Sl2Block{1, c, 0, 1});
      if (std::pair{a, b} == theta)
        central = f;
      else
        cleanup.push_back(f);
    }
    if (!cur.is_identity()) throw InvariantViolation("unitriangular remainder did not peel to the identity");
    factors.insert(factors.end(), cleanup.begin(), cleanup.end());
    if (central) factors.push_back(*central);
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) factors.push_back(detail::factor_at(it->a, it->b, inverse(it->block)));

    bool compacted = false;
    if (factors.size() > factor_bound(n)) {
      detail::compact(factors);
      compacted = true;
    }
    if (factors.size() > factor_bound(n)) return false;

    out.factorization.factors = std::move(factors);
    out.trace.reannihilations = swept->reannihilations;
    out.trace.left_preconditioned = !ys.empty();
    out.trace.right_preconditioned = !zs.empty();
    out.trace.compacted = compacted;
    return true;
  };

  // Candidate tiers, cheapest first. Right blocks on the highest-root pair
  // are preferred because their cleanup partner sits at the far end.
  const long range = static_cast<long>(n) + 1;
  auto on_all_pairs = [n](const std::vector<Sl2Block>& blocks) {
    std::vector<Preconditioner> out;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t d = c + 1; d < n; ++d)
        for (const auto& blk : blocks) out.push_back({c, d, blk});
    return out;
  };
  std::vector<Preconditioner> theta_blocks;
  for (const auto& blk : small_blocks(range)) theta_blocks.push_back({theta.first, theta.second, blk});
  const std::vector<Preconditioner> unit_left = on_all_pairs(small_blocks(1));
  const std::vector<Preconditioner> wide_left = on_all_pairs(small_blocks(range));

  using Seq = std::vector<Preconditioner>;
  auto search = [&](const std::vector<Seq>& lefts, const std::vector<Seq>& rights) {
    for (const auto& ys : lefts)
      for (const auto& zs : rights)
        if (attempt(ys, zs)) return true;
    return false;
  };
  auto singles = [](const std::vector<Preconditioner>& v, bool with_empty) {
    std::vector<Seq> out;
    if (with_empty) out.emplace_back();
    for (const auto& p : v) out.push_back({p});
    return out;
  };
  const std::vector<Seq> rights_theta = singles(theta_blocks, true);
  auto rights_any = [&] {
    std::vector<Seq> r = rights_theta;
    for (const auto& z : unit_left)
      if (std::pair{z.a, z.b} != theta) r.push_back({z});
    return r;
  };
  auto pairs_left = [&] {
    std::vector<Seq> r;
    for (const auto& y1 : unit_left)
      for (const auto& y2 : unit_left)
        if (y1.a != y2.a || y1.b != y2.b) r.push_back({y1, y2});
    return r;
  };

  const bool found = search(singles(unit_left, true), rights_theta) || search(singles(wide_left, false), rights_theta) ||
                     search(singles(unit_left, true), rights_any()) || search(pairs_left(), rights_any());
  if (!found) throw DecompositionError("no preconditioner in the search range brings the matrix into the big cell");

  if (product(out.factorization) != gamma.matrix())
    throw InvariantViolation("clockwise factors do not multiply back to the input");
  detail::enforce_norm_bound(gamma, out.factorization);
  return out;
}

Factorization decompose_clockwise(const UnimodularMatrix& gamma, const TypeAOrdering& ordering) {
  ClockwiseResult r = decompose_clockwise_traced(gamma, ordering);
  if (r.trace.reannihilations != 0)
    throw InvariantViolation(std::to_string(r.trace.reannihilations) + " cleared positions were disturbed by later steps");
  return std::move(r.factorization);
}

}  // namespace qibg
