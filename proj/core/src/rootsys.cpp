#include "qibg/rootsys.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

namespace qibg {

namespace {

using Doubled = std::vector<long>;  // root coordinates times two

struct FamilyName {
  Family family;
  const char* name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::A, "A"},   {Family::B, "B"},   {Family::C, "C"},   {Family::D, "D"},   {Family::BC, "BC"},
    {Family::E6, "E6"}, {Family::E7, "E7"}, {Family::E8, "E8"}, {Family::F4, "F4"}, {Family::G2, "G2"},
};

constexpr int kMaxClassicalRank = 32;

Doubled unit(std::size_t dim, std::size_t i, long s) {
  Doubled v(dim, 0);
  v[i] = 2 * s;
  return v;
}

Doubled pair(std::size_t dim, std::size_t i, long si, std::size_t j, long sj) {
  Doubled v(dim, 0);
  v[i] = 2 * si;
  v[j] = 2 * sj;
  return v;
}

// +-e_i +- e_j, i < j
void add_long_pairs(std::vector<Doubled>& out, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      for (long si : {1L, -1L})
        for (long sj : {1L, -1L}) out.push_back(pair(dim, i, si, j, sj));
}

// (+-1/2, ..., +-1/2); parity -1 means any sign pattern, 0 / 1 restricts the
// number of minus signs to be even / odd.
void add_half_vectors(std::vector<Doubled>& out, std::size_t dim, int parity) {
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    int minus = std::popcount(mask);
    if (parity >= 0 && minus % 2 != parity) continue;
    Doubled v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = (mask >> i) & 1u ? -1 : 1;
    out.push_back(std::move(v));
  }
}

struct Generated {
  std::size_t dim;
  std::vector<Doubled> roots;
  std::vector<Doubled> simple;
};

Generated generate_e8() {
  Generated g{8, {}, {}};
  add_long_pairs(g.roots, 8);
  add_half_vectors(g.roots, 8, 0);
  g.simple.push_back({1, -1, -1, -1, -1, -1, -1, 1});
  g.simple.push_back(pair(8, 0, 1, 1, 1));
  for (std::size_t i = 1; i < 7; ++i) g.simple.push_back(pair(8, i - 1, -1, i, 1));
  return g;
}

Generated generate(Family f, int rank) {
  const auto r = static_cast<std::size_t>(rank);
  Generated g{r, {}, {}};
  auto chain = [&](std::size_t upto) {
    for (std::size_t i = 0; i + 1 < upto; ++i) g.simple.push_back(pair(g.dim, i, 1, i + 1, -1));
  };
  switch (f) {
    case Family::A:
      g.dim = r + 1;
      for (std::size_t i = 0; i < g.dim; ++i)
        for (std::size_t j = 0; j < g.dim; ++j)
          if (i != j) g.roots.push_back(pair(g.dim, i, 1, j, -1));
      chain(g.dim);
      break;
    case Family::B:
    case Family::C:
    case Family::BC:
      for (std::size_t i = 0; i < r; ++i)
        for (long s : {1L, -1L}) {
          if (f != Family::C) g.roots.push_back(unit(r, i, s));
          if (f != Family::B) g.roots.push_back(unit(r, i, 2 * s));
        }
      add_long_pairs(g.roots, r);
      chain(r);
      g.simple.push_back(unit(r, r - 1, f == Family::C ? 2 : 1));
      break;
    case Family::D:
      add_long_pairs(g.roots, r);
      chain(r);
      g.simple.push_back(pair(r, r - 2, 1, r - 1, 1));
      break;
    case Family::G2:
      g.dim = 3;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (i != j) g.roots.push_back(pair(3, i, 1, j, -1));
      for (std::size_t i = 0; i < 3; ++i)
        for (long s : {1L, -1L}) {
          Doubled v(3, -2 * s);
          v[i] = 4 * s;
          g.roots.push_back(v);
        }
      g.simple = {pair(3, 0, 1, 1, -1), {-4, 2, 2}};
      break;
    case Family::F4:
      for (std::size_t i = 0; i < 4; ++i)
        for (long s : {1L, -1L}) g.roots.push_back(unit(4, i, s));
      add_long_pairs(g.roots, 4);
      add_half_vectors(g.roots, 4, -1);
      g.simple = {pair(4, 1, 1, 2, -1), pair(4, 2, 1, 3, -1), unit(4, 3, 1), {1, -1, -1, -1}};
      break;
    case Family::E8:
      return generate_e8();
    case Family::E7:
    case Family::E6: {
      // Sub-systems of E8 orthogonal to e7 + e8 (E7), and also to e6 - e7 (E6).
      Generated e8 = generate_e8();
      auto keep = [f](const Doubled& v) {
        if (v[6] + v[7] != 0) return false;
        return f == Family::E7 || v[5] == v[6];
      };
      g.dim = 8;
      std::copy_if(e8.roots.begin(), e8.roots.end(), std::back_inserter(g.roots), keep);
      g.simple.assign(e8.simple.begin(), e8.simple.begin() + (f == Family::E7 ? 7 : 6));
      break;
    }
  }
  return g;
}

int fixed_rank(Family f) {
  switch (f) {
    case Family::E6: return 6;
    case Family::E7: return 7;
    case Family::E8: return 8;
    case Family::F4: return 4;
    case Family::G2: return 2;
    default: return 0;
  }
}

int min_rank(Family f) {
  switch (f) {
    case Family::B:
    case Family::C: return 2;
    case Family::D: return 3;
    default: return 1;
  }
}

bool proportional(const RationalVector& a, const RationalVector& b) {
  std::size_t j = 0;
  while (a[j] == 0) ++j;
  mpq_class c = b[j] / a[j];
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] != c * a[i]) return false;
  return true;
}

// Images are rescaled per root by a positive integer, which leaves every
// orientation test unchanged and keeps the arithmetic in Z.
struct Point {
  mpz_class x, y;
};

int cross_sign(const Point& p, const Point& q) {
  mpz_class c = p.x * q.y - p.y * q.x;
  return sgn(c);
}

mpq_class dot(const RationalVector& a, const RationalVector& b) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

std::vector<Point> images(const RootSystem& rs, const Projection& p) {
  if (p.u.size() != rs.ambient_dim() || p.w.size() != rs.ambient_dim())
    throw DimensionMismatch("projection vectors must have length " + std::to_string(rs.ambient_dim()));
  std::vector<Point> out;
  out.reserve(rs.size());
  for (const auto& r : rs.roots()) {
    mpq_class x = dot(p.u, r), y = dot(p.w, r);
    mpz_class den;
    mpz_lcm(den.get_mpz_t(), x.get_den_mpz_t(), y.get_den_mpz_t());
    out.push_back({mpz_class(x * den), mpz_class(y * den)});
  }
  return out;
}

std::optional<std::string> defect_from_images(const RootSystem& rs, const std::vector<Point>& img) {
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (img[i].y == 0) return "w is orthogonal to root #" + std::to_string(i);
  const auto& lines = rs.lines();
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b)
      if (cross_sign(img[lines[a][0]], img[lines[b][0]]) == 0)
        return "roots #" + std::to_string(lines[a][0]) + " and #" + std::to_string(lines[b][0]) +
               " have parallel images";
  return std::nullopt;
}

// Everything the invariant checks need, computed once per projection.
struct Geometry {
  std::vector<Point> img;
  RootSet positive;
};

Geometry geometry(const RootSystem& rs, const Projection& p) {
  Geometry g{images(rs, p), rs.empty_set()};
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (g.img[i].y > 0) g.positive.set(i);
  return g;
}

SideSets sides_from_direction(const RootSystem& rs, const Geometry& g, const Point& dir, std::size_t index) {
  SideSets s{index, rs.empty_set(), rs.empty_set(), rs.empty_set(), rs.empty_set()};
  for (std::size_t r = 0; r < rs.size(); ++r) {
    int c = cross_sign(dir, g.img[r]);
    if (c > 0) s.left.set(r);
    if (c < 0) s.right.set(r);
  }
  s.left_pos = s.left & g.positive;
  s.right_pos = s.right & g.positive;
  return s;
}

Point direction(const Geometry& g, const ClassOrdering& ordering, std::size_t i) {
  const std::size_t k = ordering.size();
  if (i > k + 1) throw InvalidArgument("side set index " + std::to_string(i) + " out of range 0.." + std::to_string(k + 1));
  if (i == 0) return {-1, 0};
  if (i == k + 1) return {1, 0};
  return g.img[ordering.classes[i - 1].front()];
}

RootSet negate(const RootSystem& rs, const RootSet& s) {
  RootSet out = rs.empty_set();
  for (auto i = s.find_first(); i != RootSet::npos; i = s.find_next(i)) out.set(rs.negation(i));
  return out;
}

std::string describe(const RootSystem& rs, std::size_t root) {
  std::string s = "(";
  for (std::size_t i = 0; i < rs.ambient_dim(); ++i) {
    if (i) s += ",";
    const auto& q = rs.root(root)[i];
    s += q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
  }
  return s + ")";
}

}  // namespace

std::string to_string(Family f) {
  for (const auto& e : kFamilyNames)
    if (e.family == f) return e.name;
  return "?";
}

Family parse_family(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& e : kFamilyNames)
    if (up == e.name) return e.family;
  throw InvalidArgument("unknown root system family '" + name + "'");
}

RootSystem RootSystem::build(Family family, int rank) {
  if (int fr = fixed_rank(family); fr != 0) {
    if (rank != fr) throw InvalidArgument(to_string(family) + " only exists in rank " + std::to_string(fr));
  } else if (rank < min_rank(family) || rank > kMaxClassicalRank) {
    throw InvalidArgument("rank " + std::to_string(rank) + " is not supported for family " + to_string(family) +
                          " (allowed " + std::to_string(min_rank(family)) + ".." +
                          std::to_string(kMaxClassicalRank) + ")");
  }
  Generated gen = generate(family, rank);
  RootSystem rs;
  rs.family_ = family;
  rs.rank_ = rank;
  rs.dim_ = gen.dim;
  for (std::size_t i = 0; i < gen.roots.size(); ++i) {
    RationalVector v(gen.dim);
    for (std::size_t j = 0; j < gen.dim; ++j) {
      v[j] = mpq_class(gen.roots[i][j], 2);
      v[j].canonicalize();
    }
    rs.roots_.push_back(std::move(v));
    rs.lookup_.emplace(gen.roots[i], i);
  }
  for (const auto& s : gen.simple) rs.simple_.push_back(rs.lookup_.at(s));
  rs.finish();
  return rs;
}

void RootSystem::finish() {
  const std::size_t m = roots_.size();
  auto doubled = [this](std::size_t i) {
    Doubled d(dim_);
    for (std::size_t j = 0; j < dim_; ++j) d[j] = mpz_class(roots_[i][j] * 2).get_si();
    return d;
  };
  std::vector<Doubled> keys(m);
  for (std::size_t i = 0; i < m; ++i) keys[i] = doubled(i);

  negation_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    Doubled neg = keys[i];
    for (auto& x : neg) x = -x;
    negation_[i] = lookup_.at(neg);
  }

  line_of_.assign(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (line_of_[i] != m) continue;
    std::size_t id = lines_.size();
    lines_.emplace_back();
    for (std::size_t j = i; j < m; ++j)
      if (line_of_[j] == m && proportional(roots_[i], roots_[j])) {
        line_of_[j] = id;
        lines_.back().push_back(j);
      }
  }

  Doubled sum(dim_);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      for (std::size_t t = 0; t < dim_; ++t) sum[t] = keys[i][t] + keys[j][t];
      auto it = lookup_.find(sum);
      if (it != lookup_.end())
        triples_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(it->second)});
    }
}

std::string RootSystem::name() const {
  if (fixed_rank(family_) != 0) return to_string(family_);
  return to_string(family_) + std::to_string(rank_);
}

std::optional<std::size_t> RootSystem::index_of(const RationalVector& v) const {
  if (v.size() != dim_) return std::nullopt;
  Doubled key(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    mpq_class d = v[j] * 2;
    if (d.get_den() != 1 || !d.get_num().fits_slong_p()) return std::nullopt;
    key[j] = d.get_num().get_si();
  }
  auto it = lookup_.find(key);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> projection_defect(const RootSystem& rs, const Projection& p) {
  if (p.u.size() != rs.ambient_dim() || p.w.size() != rs.ambient_dim())
    return "projection vectors must have length " + std::to_string(rs.ambient_dim());
  return defect_from_images(rs, images(rs, p));
}

Projection sample_projection(const RootSystem& rs, std::uint64_t seed) {
  constexpr int kAttempts = 10000;
  std::mt19937_64 rng(seed);
  const std::size_t d = rs.ambient_dim();
  auto coord = [&rng] { return mpq_class(static_cast<long>(rng() % 2001) - 1000); };
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Projection p{RationalVector(d), RationalVector(d)};
    for (auto& x : p.u) x = coord();
    for (auto& x : p.w) x = coord();
    if (!defect_from_images(rs, images(rs, p))) return p;
  }
  throw ProjectionSamplingError("no valid projection for " + rs.name() + " after " + std::to_string(kAttempts) +
                                " attempts (seed " + std::to_string(seed) + ")");
}

RootSet positive_roots(const RootSystem& rs, const Projection& p) { return geometry(rs, p).positive; }

ClassOrdering class_ordering(const RootSystem& rs, const Projection& p) {
  Geometry g = geometry(rs, p);
  if (auto defect = defect_from_images(rs, g.img)) throw InvalidArgument("invalid projection: " + *defect);
  ClassOrdering out;
  out.projection = p;
  for (const auto& line : rs.lines()) {
    std::vector<std::size_t> cls;
    for (std::size_t r : line)
      if (g.positive.test(r)) cls.push_back(r);
    out.classes.push_back(std::move(cls));
  }
  // r1 precedes r2 when r1 lies counter-clockwise of r2.
  std::sort(out.classes.begin(), out.classes.end(), [&g](const auto& c1, const auto& c2) {
    return cross_sign(g.img[c2.front()], g.img[c1.front()]) > 0;
  });
  for (const auto& cls : out.classes) {
    const Point& q = g.img[cls.front()];
    out.angles.push_back(std::atan2(q.y.get_d(), q.x.get_d()));
  }
  return out;
}

SideSets side_sets(const RootSystem& rs, const ClassOrdering& ordering, std::size_t i) {
  Geometry g = geometry(rs, ordering.projection);
  return sides_from_direction(rs, g, direction(g, ordering, i), i);
}

bool is_closed(const RootSystem& rs, const RootSet& set) {
  if (set.size() != rs.size()) throw DimensionMismatch("root set has the wrong size");
  for (const auto& t : rs.addition_triples())
    if (set[t[0]] && set[t[1]] && !set[t[2]]) return false;
  return true;
}

bool is_closed(const RootSystem& rs, const std::vector<RationalVector>& set) {
  RootSet s = rs.empty_set();
  for (const auto& v : set) {
    auto idx = rs.index_of(v);
    if (!idx) throw InvalidArgument("vector is not a root of " + rs.name());
    s.set(*idx);
  }
  return is_closed(rs, s);
}

bool is_positive_system(const RootSystem& rs, const RootSet& set) {
  RootSet neg = negate(rs, set);
  if ((set & neg).any()) return false;
  if ((set | neg).count() != rs.size()) return false;
  return is_closed(rs, set);
}

bool InvariantReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

InvariantReport check_side_sets(const RootSystem& rs, const ClassOrdering& ordering,
                                const std::vector<SideSets>& sides) {
  Geometry g = geometry(rs, ordering.projection);
  const std::size_t k = ordering.size();
  InvariantReport report;
  auto check = [&report](const char* name) -> InvariantCheck& {
    report.checks.push_back({name, true, {}});
    return report.checks.back();
  };
  auto fail = [](InvariantCheck& c, std::string why) {
    if (c.passed) c.detail = std::move(why);
    c.passed = false;
  };

  std::vector<RootSet> cls(k, rs.empty_set());
  {
    auto& c = check("classes");
    RootSet seen = rs.empty_set();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r : ordering.classes[i]) {
        if (seen.test(r)) fail(c, "root " + describe(rs, r) + " appears in two classes");
        seen.set(r);
        cls[i].set(r);
        if (rs.line_of(r) != rs.line_of(ordering.classes[i].front()))
          fail(c, "class " + std::to_string(i + 1) + " mixes non-proportional roots");
      }
      if (i + 1 < k && cross_sign(g.img[ordering.classes[i + 1].front()], g.img[ordering.classes[i].front()]) <= 0)
        fail(c, "classes " + std::to_string(i + 1) + " and " + std::to_string(i + 2) + " are not in clockwise order");
    }
    if (seen != g.positive) fail(c, "classes do not partition the positive roots");
  }
  if (sides.size() != k + 2) {
    auto& c = check("side-sets-present");
    fail(c, "expected " + std::to_string(k + 2) + " side sets, got " + std::to_string(sides.size()));
    return report;
  }

  {
    auto& c = check("partition");
    for (std::size_t i = 0; i <= k + 1; ++i) {
      const auto& s = sides[i];
      RootSet on_line = rs.empty_set();
      if (i >= 1 && i <= k) on_line = cls[i - 1] | negate(rs, cls[i - 1]);
      const std::string at = " at index " + std::to_string(i);
      if ((s.left & s.right).any() || (s.left & on_line).any() || (s.right & on_line).any())
        fail(c, "sides overlap" + at);
      if ((s.left | s.right | on_line).count() != rs.size()) fail(c, "sides do not cover all roots" + at);
      if (negate(rs, s.left) != s.right) fail(c, "left side is not the negative of the right side" + at);
      if (s.left_pos != (s.left & g.positive) || s.right_pos != (s.right & g.positive))
        fail(c, "positive parts disagree with the half-planes" + at);
    }
  }
  {
    auto& c = check("closed");
    for (std::size_t i = 0; i <= k + 1; ++i) {
      const auto& s = sides[i];
      const RootSet* sets[] = {&s.left, &s.right, &s.left_pos, &s.right_pos};
      const char* names[] = {"left", "right", "left positive", "right positive"};
      for (int t = 0; t < 4; ++t)
        if (!is_closed(rs, *sets[t])) fail(c, std::string(names[t]) + " set at index " + std::to_string(i) + " is not closed");
    }
  }
  {
    auto& c = check("positive-system");
    for (std::size_t i = 1; i <= k; ++i)
      if (!is_positive_system(rs, cls[i - 1] | sides[i].right))
        fail(c, "class " + std::to_string(i) + " plus its right side is not a positive system");
  }
  {
    auto& c = check("accumulation");
    for (std::size_t i = 1; i <= k; ++i) {
      if ((sides[i].left_pos & cls[i - 1]).any()) fail(c, "class " + std::to_string(i) + " meets its own left side");
      if (sides[i + 1].left_pos != (sides[i].left_pos | cls[i - 1]))
        fail(c, "left positive set at " + std::to_string(i + 1) + " is not the union of the one at " +
                    std::to_string(i) + " and class " + std::to_string(i));
    }
  }
  {
    auto& c = check("boundary");
    if (k > 0 && sides[1].left_pos.any()) fail(c, "left positive set of the first class is not empty");
    if (k > 0 && sides[k].right_pos.any()) fail(c, "right positive set of the last class is not empty");
    if (sides[0].right_pos != g.positive) fail(c, "right positive set at index 0 is not all positive roots");
    if (sides[k + 1].left_pos != g.positive) fail(c, "left positive set at index k+1 is not all positive roots");
  }
  return report;
}

InvariantReport verify_notation_invariants(const RootSystem& rs, const Projection& p) {
  InvariantReport report;
  auto defect = projection_defect(rs, p);
  report.checks.push_back({"projection", !defect, defect.value_or("")});
  if (defect) return report;

  ClassOrdering ordering = class_ordering(rs, p);
  Geometry g = geometry(rs, p);
  std::vector<SideSets> sides;
  for (std::size_t i = 0; i <= ordering.size() + 1; ++i)
    sides.push_back(sides_from_direction(rs, g, direction(g, ordering, i), i));
  InvariantReport rest = check_side_sets(rs, ordering, sides);
  report.checks.insert(report.checks.end(), rest.checks.begin(), rest.checks.end());
  return report;
}

bool TypeAOrdering::is_standard() const {
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != i) return false;
  return true;
}

TypeAOrdering type_a_ordering(const RootSystem& rs, const ClassOrdering& ordering) {
  if (rs.family() != Family::A) throw InvalidArgument("matrix positions need a type A root system, got " + rs.name());
  TypeAOrdering out;
  out.n = rs.ambient_dim();
  for (const auto& cls : ordering.classes) {
    const RationalVector& r = rs.root(cls.front());
    std::size_t a = 0, b = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] == 1) a = j;
      if (r[j] == -1) b = j;
    }
    out.positions.emplace_back(a, b);
  }
  out.sigma.resize(out.n);
  std::iota(out.sigma.begin(), out.sigma.end(), std::size_t{0});
  const auto& w = ordering.projection.w;
  std::sort(out.sigma.begin(), out.sigma.end(), [&w](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return out;
}

Projection standardize_type_a(const Projection& p) {
  std::vector<std::size_t> perm(p.w.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&p](std::size_t a, std::size_t b) { return p.w[a] > p.w[b]; });
  Projection out{RationalVector(perm.size()), RationalVector(perm.size())};
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.u[i] = p.u[perm[i]];
    out.w[i] = p.w[perm[i]];
  }
  return out;
}

TypeAOrdering sample_type_a_ordering(std::size_t n, std::uint64_t seed, bool standard) {
  if (n < 2) throw InvalidArgument("type A orderings need n >= 2");
  RootSystem rs = RootSystem::build(Family::A, static_cast<int>(n - 1));
  Projection p = sample_projection(rs, seed);
  if (standard) p = standardize_type_a(p);
  return type_a_ordering(rs, class_ordering(rs, p));
}

}  // namespace qibg
