#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <gmpxx.h>

#include "qibg/errors.hpp"

namespace qibg {

enum class Family { A, B, C, D, BC, E6, E7, E8, F4, G2 };

std::string to_string(Family f);
// Accepts the names produced by to_string, case-insensitively.
Family parse_family(const std::string& name);

using RationalVector = std::vector<mpq_class>;
// Subsets of a root system, indexed like RootSystem::roots().
using RootSet = boost::dynamic_bitset<>;

class RootSystem {
 public:
  // Ranks: A >= 1, B >= 2, C >= 2, D >= 3, BC >= 1 (classical ranks capped
  // at 32); E6/E7/E8/F4/G2 only at their own rank. Throws InvalidArgument.
  static RootSystem build(Family family, int rank);

  Family family() const noexcept { return family_; }
  int rank() const noexcept { return rank_; }
  std::size_t ambient_dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return roots_.size(); }
  std::string name() const;

  const std::vector<RationalVector>& roots() const noexcept { return roots_; }
  const RationalVector& root(std::size_t i) const { return roots_.at(i); }
  const std::vector<std::size_t>& simple_roots() const noexcept { return simple_; }
  // Roots grouped by the line they span (a root, its negative, and in BC
  // also the doubled or halved root).
  const std::vector<std::vector<std::size_t>>& lines() const noexcept { return lines_; }
  std::size_t line_of(std::size_t i) const { return line_of_.at(i); }

  std::optional<std::size_t> index_of(const RationalVector& v) const;
  std::size_t negation(std::size_t i) const { return negation_.at(i); }
  // Every (i, j, k) with roots[i] + roots[j] == roots[k], for i <= j.
  const std::vector<std::array<std::uint32_t, 3>>& addition_triples() const noexcept { return triples_; }

  RootSet empty_set() const { return RootSet(size()); }

 private:
  RootSystem() = default;
  void finish();

  Family family_ = Family::A;
  int rank_ = 0;
  std::size_t dim_ = 0;
  std::vector<RationalVector> roots_;
  std::vector<std::size_t> simple_;
  std::vector<std::size_t> negation_;
  std::vector<std::vector<std::size_t>> lines_;
  std::vector<std::size_t> line_of_;
  std::vector<std::array<std::uint32_t, 3>> triples_;
  std::map<std::vector<long>, std::size_t> lookup_;  // keyed by 2 * coordinates
};

// A linear map eta: V -> R^2, eta(v) = (u.v, w.v).
struct Projection {
  RationalVector u;
  RationalVector w;
};

class ProjectionSamplingError : public Error {
 public:
  using Error::Error;
};

// Reason the projection is unusable, or nullopt when it is valid: every root
// needs w.phi != 0, and non-proportional roots must have non-parallel images.
std::optional<std::string> projection_defect(const RootSystem& rs, const Projection& p);
inline bool is_valid_projection(const RootSystem& rs, const Projection& p) {
  return !projection_defect(rs, p).has_value();
}

// Integer coordinates drawn uniformly from [-1000, 1000] until valid, at most
// 10000 attempts (ProjectionSamplingError after that).
Projection sample_projection(const RootSystem& rs, std::uint64_t seed);

// {phi : w.phi > 0}.
RootSet positive_roots(const RootSystem& rs, const Projection& p);

// Positive roots grouped by proportionality, ordered clockwise: the class
// whose image makes the largest angle with the positive x-axis comes first.
struct ClassOrdering {
  Projection projection;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<double> angles;  // radians, for display only; ordering is exact
  std::size_t size() const noexcept { return classes.size(); }
};

// Throws InvalidArgument when the projection is not valid.
ClassOrdering class_ordering(const RootSystem& rs, const Projection& p);

// The four root sets cut out by the line through the image of class i.
// Index 0 stands for the negative x-axis and index k + 1 for the positive
// x-axis, so right(0) = positive roots and left_pos(k + 1) = positive roots.
struct SideSets {
  std::size_t index = 0;
  RootSet left, right;          // open half-planes, all of Phi
  RootSet left_pos, right_pos;  // intersected with the positive roots
};

SideSets side_sets(const RootSystem& rs, const ClassOrdering& ordering, std::size_t i);

bool is_closed(const RootSystem& rs, const RootSet& set);
// Throws InvalidArgument when some vector is not a root.
bool is_closed(const RootSystem& rs, const std::vector<RationalVector>& set);

// Closed, disjoint from its negative, and together with it covering Phi.
bool is_positive_system(const RootSystem& rs, const RootSet& set);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string detail;  // first failure, empty when passed
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;
  bool all_passed() const;
};

InvariantReport verify_notation_invariants(const RootSystem& rs, const Projection& p);
// Same checks on caller-supplied side sets (index 0 .. k + 1), which lets
// tests feed in deliberately damaged data.
InvariantReport check_side_sets(const RootSystem& rs, const ClassOrdering& ordering,
                                const std::vector<SideSets>& sides);

// --- Type A_{n-1} and SL(n) ---------------------------------------------

// A clockwise class ordering of A_{n-1} read as matrix positions. Entry
// (a, b) of `positions` is the root e_a - e_b (0-based). `sigma` lists the
// indices so that e_a - e_b is positive exactly when a comes before b.
struct TypeAOrdering {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> positions;
  std::vector<std::size_t> sigma;

  bool is_standard() const;
  // The highest root e_{sigma[0]} - e_{sigma[n-1]}.
  std::pair<std::size_t, std::size_t> highest() const { return {sigma.front(), sigma.back()}; }
};

TypeAOrdering type_a_ordering(const RootSystem& rs, const ClassOrdering& ordering);

// Reorders coordinates so that w is strictly decreasing, which makes the
// positive system the standard one (e_a - e_b with a < b).
Projection standardize_type_a(const Projection& p);

// Samples a projection of A_{n-1}; with `standard` the coordinates are
// reordered by standardize_type_a first.
TypeAOrdering sample_type_a_ordering(std::size_t n, std::uint64_t seed, bool standard = true);

}  // namespace qibg
