#include "qibg/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "factor_ops.hpp"
#include "qibg/matrix_io.hpp"

namespace qibg {

namespace detail {

void apply_left(IntegerMatrix& m, std::size_t a, std::size_t b, const Sl2Block& x) {
  for (std::size_t c = 0; c < m.n(); ++c) {
    auto [ra, rb] = apply(x, m(a, c), m(b, c));
    m(a, c) = std::move(ra);
    m(b, c) = std::move(rb);
  }
}

void apply_right(IntegerMatrix& m, std::size_t a, std::size_t b, const Sl2Block& x) {
  for (std::size_t r = 0; r < m.n(); ++r) {
    mpz_class ca = m(r, a) * x.a + m(r, b) * x.c;
    mpz_class cb = m(r, a) * x.b + m(r, b) * x.d;
    m(r, a) = std::move(ca);
    m(r, b) = std::move(cb);
  }
}

BlockFactor oriented(const BlockFactor& f) {
  if (f.k < f.l) return f;
  return {f.l, f.k, Sl2Block{f.block.d, f.block.c, f.block.b, f.block.a}};
}

namespace {

bool same_pair(const BlockFactor& x, const BlockFactor& y) {
  return std::minmax(x.k, x.l) == std::minmax(y.k, y.l);
}

// D * F * D for the diagonal D with -1 at the (0-based) indices c and d.
void conjugate_by_sign(BlockFactor& f, std::size_t c, std::size_t d) {
  auto sign = [&](std::size_t i) { return (i == c || i == d) ? -1 : 1; };
  const int s = sign(f.k - 1) * sign(f.l - 1);
  if (s < 0) {
    f.block.b = -f.block.b;
    f.block.c = -f.block.c;
  }
}

}  // namespace

void compact(std::vector<BlockFactor>& factors) {
  for (auto& f : factors) f = oriented(f);

  // Absorb -I blocks. Each one is a diagonal sign matrix, so it commutes past
  // other factors at the price of flipping their off-diagonal signs.
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < factors.size() && !moved; ++i) {
      if (!factors[i].block.is_minus_identity()) continue;
      const std::size_t c = factors[i].k - 1, d = factors[i].l - 1;
      std::size_t j = 0;
      while (j < factors.size() && (j == i || !same_pair(factors[j], factors[i]))) ++j;
      if (j == factors.size()) continue;
      if (j > i) {
        for (std::size_t t = i + 1; t < j; ++t) conjugate_by_sign(factors[t], c, d);
        factors[j].block = -factors[j].block;
      } else {
        for (std::size_t t = j + 1; t < i; ++t) conjugate_by_sign(factors[t], c, d);
        factors[j].block = -factors[j].block;
      }
      factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(i));
      moved = true;
    }
  }
  // Lone -I blocks go to the front so they do not separate mergeable neighbours.
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!factors[i].block.is_minus_identity()) continue;
    BlockFactor d = factors[i];
    for (std::size_t t = 0; t < i; ++t) conjugate_by_sign(factors[t], d.k - 1, d.l - 1);
    factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(i));
    factors.insert(factors.begin(), std::move(d));
  }

  std::vector<BlockFactor> merged;
  for (auto& f : factors) {
    if (!merged.empty() && same_pair(merged.back(), f))
      merged.back().block = merged.back().block * f.block;
    else
      merged.push_back(std::move(f));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const BlockFactor& f) { return f.block.is_identity(); }),
               merged.end());
  factors = std::move(merged);
}

}  // namespace detail

IntegerMatrix embed(const BlockFactor& f, std::size_t n) {
  if (f.k < 1 || f.l < 1 || f.k > n || f.l > n || f.k == f.l)
    throw InvalidArgument("factor indices (" + std::to_string(f.k) + "," + std::to_string(f.l) +
                          ") do not name two distinct rows of an n = " + std::to_string(n) + " matrix");
  IntegerMatrix m = IntegerMatrix::identity(n);
  const std::size_t k = f.k - 1, l = f.l - 1;
  m(k, k) = f.block.a;
  m(k, l) = f.block.b;
  m(l, k) = f.block.c;
  m(l, l) = f.block.d;
  return m;
}

std::string to_string(Strategy s) { return s == Strategy::ColumnMajor ? "column_major" : "clockwise"; }

Strategy parse_strategy(const std::string& name) {
  if (name == "column_major" || name == "column") return Strategy::ColumnMajor;
  if (name == "clockwise") return Strategy::Clockwise;
  throw InvalidArgument("unknown strategy '" + name + "' (expected column_major or clockwise)");
}

IntegerMatrix product(const Factorization& f) {
  IntegerMatrix p = IntegerMatrix::identity(f.n);
  for (const auto& x : f.factors) detail::apply_right(p, x.k - 1, x.l - 1, x.block);
  return p;
}

double guaranteed_log_bound(const UnimodularMatrix& gamma) {
  const double n = static_cast<double>(gamma.n());
  const double inner = std::log(n) + sup_norm(gamma.matrix()).log();
  return std::pow(2.0, n * n - n) * std::max(1.0, inner);
}

namespace detail {

double block_log_norm(const BlockFactor& f, std::size_t n) {
  mpz_class m = n > 2 ? 1 : 0;
  for (const mpz_class* e : {&f.block.a, &f.block.b, &f.block.c, &f.block.d}) m = std::max(m, mpz_class(abs(*e)));
  return m == 0 ? 0.0 : log_abs(m);
}

void enforce_norm_bound(const UnimodularMatrix& gamma, const Factorization& f) {
  const double bound = guaranteed_log_bound(gamma);
  for (std::size_t i = 0; i < f.factors.size(); ++i)
    if (block_log_norm(f.factors[i], f.n) > bound)
      throw InvariantViolation("factor " + std::to_string(i + 1) + " exceeds the guaranteed norm bound");
}

}  // namespace detail

Factorization decompose_column_major(const UnimodularMatrix& gamma) {
  const std::size_t n = gamma.n();
  IntegerMatrix cur = gamma.matrix();
  Factorization out{n, Strategy::ColumnMajor, {}};

  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const bool clear = cur(k, j) != 0;
      const bool fix_sign = k + 1 == n && cur(k, j) == 0 && cur(j, j) < 0;
      if (!clear && !fix_sign) continue;
      Sl2Block x = gcd_transform(cur(j, j), cur(k, j));
      detail::apply_left(cur, j, k, x);
      out.factors.push_back(detail::factor_at(j, k, inverse(x)));
    }
    // Progress check: columns 0..j are now those of the identity below the
    // diagonal, with a 1 on it.
    for (std::size_t c = 0; c <= j; ++c) {
      if (cur(c, c) != 1) throw InvariantViolation("pivot " + std::to_string(c + 1) + " is not 1 after its column sweep");
      for (std::size_t r = c + 1; r < n; ++r)
        if (cur(r, c) != 0) throw InvariantViolation("column " + std::to_string(c + 1) + " was disturbed");
    }
  }
  if (cur(n - 1, n - 1) != 1) throw InvariantViolation("last pivot is not 1");

  // cur is upper unitriangular; cur = C_n ... C_2 with C_j = prod_i E_{i,j}(cur(i,j)).
  for (std::size_t j = n; j-- > 1;)
    for (std::size_t i = 0; i < j; ++i)
      if (cur(i, j) != 0) out.factors.push_back(detail::factor_at(i, j, Sl2Block{1, cur(i, j), 0, 1}));

  detail::enforce_norm_bound(gamma, out);
  return out;
}

QuasiIsometryStats quasi_isometry_stats(const UnimodularMatrix& gamma, const Factorization& f) {
  QuasiIsometryStats s;
  s.input_log_norm = sup_norm(gamma.matrix()).log();
  for (const auto& x : f.factors) {
    double v = detail::block_log_norm(x, f.n);
    s.factor_log_norms.push_back(v);
    s.max_factor_log_norm = std::max(s.max_factor_log_norm, v);
  }
  if (!f.factors.empty()) s.max_ratio = s.max_factor_log_norm / std::max(1.0, s.input_log_norm);
  return s;
}

VerificationReport verify(const UnimodularMatrix& gamma, const Factorization& f) {
  VerificationReport r;
  r.factor_count = f.factors.size();
  r.count_bound = factor_bound(gamma.n());
  r.dimension_ok = f.n == gamma.n();
  if (!r.dimension_ok)
    r.problems.push_back("factorization is for n = " + std::to_string(f.n) + ", matrix has n = " + std::to_string(gamma.n()));
  r.count_ok = r.factor_count <= r.count_bound;
  if (!r.count_ok)
    r.problems.push_back(std::to_string(r.factor_count) + " factors exceed the bound " + std::to_string(r.count_bound));

  r.support_ok = true;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const auto& x = f.factors[i];
    std::string where = "factor " + std::to_string(i + 1);
    if (x.k < 1 || x.l < 1 || x.k > f.n || x.l > f.n || x.k == x.l) {
      r.support_ok = false;
      r.problems.push_back(where + " has invalid indices (" + std::to_string(x.k) + "," + std::to_string(x.l) + ")");
    } else if (x.block.det() != 1) {
      r.support_ok = false;
      r.problems.push_back(where + " has determinant " + x.block.det().get_str());
    }
  }
  if (r.dimension_ok && r.support_ok) {
    r.product_equal = product(f) == gamma.matrix();
    if (!r.product_equal) r.problems.push_back("product of factors differs from the matrix");
  }
  if (r.dimension_ok) {
    r.stats = quasi_isometry_stats(gamma, f);
    const double bound = guaranteed_log_bound(gamma);
    for (double v : r.stats.factor_log_norms)
      if (v > bound) ++r.bound_violations;
  }
  return r;
}

nlohmann::json to_json(const Factorization& f) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& x : f.factors) {
    factors.push_back({{"k", x.k},
                       {"l", x.l},
                       {"block", nlohmann::json::array({nlohmann::json::array({x.block.a.get_str(), x.block.b.get_str()}),
                                                        nlohmann::json::array({x.block.c.get_str(), x.block.d.get_str()})})}});
  }
  return {{"n", f.n}, {"strategy", to_string(f.strategy)}, {"factors", std::move(factors)}};
}

Factorization factorization_from_json(const nlohmann::json& doc) {
  auto need = [&doc](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("factorization needs \"") + key + "\"");
    return doc[key];
  };
  Factorization f;
  const auto& n = need("n");
  if (!n.is_number_unsigned()) throw ParseError("\"n\" must be a positive integer");
  f.n = n.get<std::size_t>();
  if (doc.contains("strategy")) {
    try {
      f.strategy = parse_strategy(doc["strategy"].get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(e.what());
    }
  }
  const auto& factors = need("factors");
  if (!factors.is_array()) throw ParseError("\"factors\" must be an array");
  for (const auto& x : factors) {
    if (!x.is_object() || !x.contains("k") || !x.contains("l") || !x.contains("block"))
      throw ParseError("each factor needs k, l and block");
    if (!x["k"].is_number_unsigned() || !x["l"].is_number_unsigned()) throw ParseError("k and l must be positive integers");
    const auto& b = x["block"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_array() || !b[1].is_array() || b[0].size() != 2 || b[1].size() != 2)
      throw ParseError("block must be a 2x2 array");
    auto entry = [](const nlohmann::json& e) {
      if (e.is_number_integer()) return mpz_class(e.dump());
      if (!e.is_string()) throw ParseError("block entries must be integers or strings");
      return parse_integer(e.get<std::string>());
    };
    f.factors.push_back({x["k"].get<std::size_t>(), x["l"].get<std::size_t>(),
                         Sl2Block{entry(b[0][0]), entry(b[0][1]), entry(b[1][0]), entry(b[1][1])}});
  }
  return f;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"passed", r.passed()},
          {"dimension_ok", r.dimension_ok},
          {"product_equal", r.product_equal},
          {"count_ok", r.count_ok},
          {"support_ok", r.support_ok},
          {"factor_count", r.factor_count},
          {"count_bound", r.count_bound},
          {"bound_violations", r.bound_violations},
          {"input_log_norm", r.stats.input_log_norm},
          {"max_factor_log_norm", r.stats.max_factor_log_norm},
          {"max_ratio", r.stats.max_ratio},
          {"problems", r.problems}};
}

}  // namespace qibg
