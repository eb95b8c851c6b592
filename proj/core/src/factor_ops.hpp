#pragma once

// Row/column actions of 2x2 blocks and factor-list bookkeeping shared by the
// two decomposition strategies. Indices here are 0-based.

#include <cstddef>
#include <vector>

#include "qibg/decompose.hpp"

namespace qibg::detail {

// m <- embed(a, b, x) * m
void apply_left(IntegerMatrix& m, std::size_t a, std::size_t b, const Sl2Block& x);
// m <- m * embed(a, b, x)
void apply_right(IntegerMatrix& m, std::size_t a, std::size_t b, const Sl2Block& x);

inline BlockFactor factor_at(std::size_t a, std::size_t b, Sl2Block x) { return {a + 1, b + 1, std::move(x)}; }

// Same matrix written with k < l.
BlockFactor oriented(const BlockFactor& f);

// Shrinks a factor list without changing its product: -I blocks are moved
// onto another factor of the same index pair (conjugating what lies in
// between) or to the front, adjacent factors on the same pair are merged,
// and identity blocks are dropped.
void compact(std::vector<BlockFactor>& factors);

// ln of the sup norm of the embedded factor.
double block_log_norm(const BlockFactor& f, std::size_t n);

// Throws InvariantViolation when a factor breaks guaranteed_log_bound.
void enforce_norm_bound(const UnimodularMatrix& gamma, const Factorization& f);

}  // namespace qibg::detail
