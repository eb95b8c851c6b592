#include <map>

#include "qibg/rootsys.hpp"
#include "qibg/rootsys_io.hpp"
#include "support.hpp"

namespace qibg {
namespace {

RationalVector vec(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

mpq_class dot(const RationalVector& a, const RationalVector& b) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RationalVector add(const RationalVector& a, const RationalVector& b) {
  RationalVector s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

// Closedness by brute force over all ordered pairs, using vector arithmetic
// and index_of only.
bool brute_closed(const RootSystem& rs, const RootSet& set) {
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < rs.size(); ++j) {
      if (!set[i] || !set[j]) continue;
      auto k = rs.index_of(add(rs.root(i), rs.root(j)));
      if (k && !set[*k]) return false;
    }
  return true;
}

// Side sets recomputed from the definition: sign of the cross product of the
// class image with each root image. Index 0 and k + 1 use the x-axis rays.
SideSets brute_sides(const RootSystem& rs, const ClassOrdering& ord, std::size_t i) {
  const auto& p = ord.projection;
  mpq_class dx, dy;
  if (i == 0) {
    dx = -1, dy = 0;
  } else if (i == ord.size() + 1) {
    dx = 1, dy = 0;
  } else {
    const auto& r = rs.root(ord.classes[i - 1].front());
    dx = dot(p.u, r), dy = dot(p.w, r);
  }
  SideSets s{i, rs.empty_set(), rs.empty_set(), rs.empty_set(), rs.empty_set()};
  for (std::size_t r = 0; r < rs.size(); ++r) {
    mpq_class x = dot(p.u, rs.root(r)), y = dot(p.w, rs.root(r));
    mpq_class cross = dx * y - dy * x;
    const bool positive = y > 0;
    if (cross > 0) {
      s.left.set(r);
      if (positive) s.left_pos.set(r);
    } else if (cross < 0) {
      s.right.set(r);
      if (positive) s.right_pos.set(r);
    }
  }
  return s;
}

struct Expected {
  Family family;
  int rank;
  std::size_t roots;
};

TEST(RootSystem, RootCountsMatchTextbookFormulas) {
  const std::vector<Expected> cases = {
      {Family::A, 1, 2},   {Family::A, 4, 20},  {Family::B, 2, 8},   {Family::B, 5, 50},  {Family::C, 3, 18},
      {Family::D, 3, 12},  {Family::D, 6, 60},  {Family::BC, 1, 4},  {Family::BC, 3, 24}, {Family::E6, 6, 72},
      {Family::E7, 7, 126}, {Family::E8, 8, 240}, {Family::F4, 4, 48}, {Family::G2, 2, 12}};
  for (const auto& c : cases) {
    RootSystem rs = RootSystem::build(c.family, c.rank);
    EXPECT_EQ(rs.size(), c.roots) << rs.name();
    EXPECT_EQ(rs.simple_roots().size(), static_cast<std::size_t>(c.rank)) << rs.name();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      EXPECT_EQ(rs.index_of(rs.root(i)), i);
      RationalVector neg = rs.root(i);
      for (auto& x : neg) x = -x;
      EXPECT_EQ(rs.index_of(neg), rs.negation(i));
    }
  }
}

TEST(RootSystem, A2IsTheTextbookRealization) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  std::set<std::vector<long>> got;
  for (const auto& r : rs.roots()) {
    std::vector<long> v;
    for (const auto& x : r) v.push_back(x.get_num().get_si());
    got.insert(v);
  }
  EXPECT_EQ(got, (std::set<std::vector<long>>{
                     {1, -1, 0}, {-1, 1, 0}, {0, 1, -1}, {0, -1, 1}, {1, 0, -1}, {-1, 0, 1}}));
}

TEST(RootSystem, BC1HasTwoLengths) {
  RootSystem rs = RootSystem::build(Family::BC, 1);
  ASSERT_EQ(rs.size(), 4u);
  for (long x : {1L, -1L, 2L, -2L}) EXPECT_TRUE(rs.index_of(vec({x})).has_value());
  EXPECT_EQ(rs.lines().size(), 1u);
}

TEST(RootSystem, G2LengthRatioIsThree) {
  RootSystem rs = RootSystem::build(Family::G2, 2);
  std::map<mpq_class, int> lengths;
  for (const auto& r : rs.roots()) ++lengths[dot(r, r)];
  ASSERT_EQ(lengths.size(), 2u);
  EXPECT_EQ(lengths.begin()->second, 6);
  EXPECT_EQ(lengths.rbegin()->second, 6);
  EXPECT_EQ(lengths.rbegin()->first / lengths.begin()->first, 3);
}

TEST(RootSystem, AdditionTriplesAgreeWithBruteForce) {
  for (auto [f, r] : {std::pair{Family::B, 3}, {Family::G2, 2}, {Family::BC, 2}, {Family::F4, 4}}) {
    RootSystem rs = RootSystem::build(f, r);
    std::set<std::array<std::uint32_t, 3>> expected;
    for (std::uint32_t i = 0; i < rs.size(); ++i)
      for (std::uint32_t j = i; j < rs.size(); ++j)
        if (auto k = rs.index_of(add(rs.root(i), rs.root(j))))
          expected.insert({i, j, static_cast<std::uint32_t>(*k)});
    std::set<std::array<std::uint32_t, 3>> got(rs.addition_triples().begin(), rs.addition_triples().end());
    EXPECT_EQ(got, expected) << rs.name();
  }
}

TEST(RootSystem, RankLimits) {
  EXPECT_THROW(RootSystem::build(Family::A, 0), InvalidArgument);
  EXPECT_THROW(RootSystem::build(Family::B, 1), InvalidArgument);
  EXPECT_THROW(RootSystem::build(Family::D, 2), InvalidArgument);
  EXPECT_THROW(RootSystem::build(Family::E8, 7), InvalidArgument);
  EXPECT_THROW(RootSystem::build(Family::A, 33), InvalidArgument);
  EXPECT_THROW(parse_family("H3"), InvalidArgument);
  EXPECT_EQ(parse_family("bc"), Family::BC);
  EXPECT_EQ(parse_family("e7"), Family::E7);
}

TEST(Projection, RejectsRootInKernelOfW) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  Projection p{vec({0, 0, 1}), vec({1, 1, 0})};
  EXPECT_FALSE(is_valid_projection(rs, p));
  EXPECT_THROW(class_ordering(rs, p), InvalidArgument);
}

TEST(Projection, RejectsParallelImagesOfNonProportionalRoots) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  // u = w makes every image lie on the diagonal.
  Projection p{vec({3, 1, 0}), vec({3, 1, 0})};
  EXPECT_FALSE(is_valid_projection(rs, p));
}

TEST(Projection, BC1AlwaysOneClass) {
  RootSystem rs = RootSystem::build(Family::BC, 1);
  for (long w : {1L, -3L, 7L}) {
    Projection p{vec({5}), vec({w})};
    ASSERT_TRUE(is_valid_projection(rs, p));
    ClassOrdering ord = class_ordering(rs, p);
    ASSERT_EQ(ord.size(), 1u);
    EXPECT_EQ(ord.classes[0].size(), 2u);
    RootSet pos = positive_roots(rs, p);
    EXPECT_EQ(pos.count(), 2u);
    EXPECT_TRUE(pos[*rs.index_of(vec({w > 0 ? 1 : -1}))]);
    EXPECT_TRUE(pos[*rs.index_of(vec({w > 0 ? 2 : -2}))]);
  }
}

TEST(Projection, SampledA2Seed1Snapshot) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  Projection p = sample_projection(rs, 1);
  EXPECT_TRUE(is_valid_projection(rs, p));
  EXPECT_EQ(to_json(p).dump(), to_json(sample_projection(rs, 1)).dump());
  test::expect_golden("projection_A2_seed1.json", to_json(p).dump(2) + "\n");
}

TEST(ClassOrdering, ClassCounts) {
  RootSystem a2 = RootSystem::build(Family::A, 2);
  RootSystem b2 = RootSystem::build(Family::B, 2);
  RootSystem g2 = RootSystem::build(Family::G2, 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    ClassOrdering a = class_ordering(a2, sample_projection(a2, s));
    EXPECT_EQ(a.size(), 3u);
    for (const auto& c : a.classes) EXPECT_EQ(c.size(), 1u);
    EXPECT_EQ(class_ordering(b2, sample_projection(b2, s)).size(), 4u);
    EXPECT_EQ(positive_roots(g2, sample_projection(g2, s)).count(), 6u);
  }
}

TEST(ClassOrdering, AnglesDecreaseClockwise) {
  RootSystem rs = RootSystem::build(Family::F4, 4);
  ClassOrdering ord = class_ordering(rs, sample_projection(rs, 3));
  for (std::size_t i = 1; i < ord.size(); ++i) EXPECT_GT(ord.angles[i - 1], ord.angles[i]);
  for (double a : ord.angles) {
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, M_PI);
  }
}

TEST(PositiveSystem, G2PositiveRootsAreClosed) {
  RootSystem rs = RootSystem::build(Family::G2, 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    RootSet pos = positive_roots(rs, sample_projection(rs, s));
    EXPECT_TRUE(brute_closed(rs, pos));
    EXPECT_TRUE(is_closed(rs, pos));
    EXPECT_TRUE(is_positive_system(rs, pos));
  }
}

TEST(IsClosed, ExplicitWitnesses) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  EXPECT_TRUE(is_closed(rs, std::vector<RationalVector>{vec({1, -1, 0}), vec({0, 1, -1}), vec({1, 0, -1})}));
  EXPECT_FALSE(is_closed(rs, std::vector<RationalVector>{vec({1, -1, 0}), vec({0, 1, -1})}));
  EXPECT_THROW(is_closed(rs, std::vector<RationalVector>{vec({1, 1, 0})}), InvalidArgument);
  RootSet all = rs.empty_set();
  all.set();
  EXPECT_TRUE(is_closed(rs, all));
  EXPECT_FALSE(is_positive_system(rs, all));
}

TEST(SideSets, BoundaryIndices) {
  RootSystem rs = RootSystem::build(Family::B, 3);
  Projection p = sample_projection(rs, 4);
  ClassOrdering ord = class_ordering(rs, p);
  const std::size_t k = ord.size();
  RootSet pos = positive_roots(rs, p);
  EXPECT_EQ(side_sets(rs, ord, 0).right_pos, pos);
  EXPECT_TRUE(side_sets(rs, ord, 0).left_pos.none());
  EXPECT_TRUE(side_sets(rs, ord, 1).left_pos.none());
  EXPECT_TRUE(side_sets(rs, ord, k).right_pos.none());
  EXPECT_EQ(side_sets(rs, ord, k + 1).left_pos, pos);
  EXPECT_THROW(side_sets(rs, ord, k + 2), InvalidArgument);
}

TEST(SideSets, AgreeWithDefinitionAndAreClosed) {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::G2, 2}, {Family::BC, 2}, {Family::C, 3}}) {
    RootSystem rs = RootSystem::build(f, r);
    for (std::uint64_t s = 0; s < 5; ++s) {
      ClassOrdering ord = class_ordering(rs, sample_projection(rs, s));
      for (std::size_t i = 0; i <= ord.size() + 1; ++i) {
        SideSets got = side_sets(rs, ord, i), want = brute_sides(rs, ord, i);
        EXPECT_EQ(got.left, want.left) << rs.name() << " i = " << i;
        EXPECT_EQ(got.right, want.right);
        EXPECT_EQ(got.left_pos, want.left_pos);
        EXPECT_EQ(got.right_pos, want.right_pos);
        EXPECT_TRUE(brute_closed(rs, got.left));
        EXPECT_TRUE(brute_closed(rs, got.right));
        EXPECT_TRUE(brute_closed(rs, got.left_pos));
        EXPECT_TRUE(brute_closed(rs, got.right_pos));
      }
    }
  }
}

TEST(Invariants, PassOnSmallSystems) {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::A, 4}, {Family::B, 3}, {Family::D, 4}, {Family::G2, 2},
                      {Family::F4, 4}, {Family::E6, 6}}) {
    RootSystem rs = RootSystem::build(f, r);
    for (std::uint64_t s = 0; s < 5; ++s) {
      InvariantReport rep = verify_notation_invariants(rs, sample_projection(rs, s));
      EXPECT_TRUE(rep.all_passed()) << rs.name() << " seed " << s;
    }
  }
}

TEST(Invariants, BC2HundredProjections) {
  RootSystem rs = RootSystem::build(Family::BC, 2);
  for (std::uint64_t s = 0; s < 100; ++s)
    EXPECT_TRUE(verify_notation_invariants(rs, sample_projection(rs, s)).all_passed()) << "seed " << s;
}

TEST(Invariants, InvalidProjectionFailsFirstCheck) {
  RootSystem rs = RootSystem::build(Family::A, 2);
  InvariantReport rep = verify_notation_invariants(rs, {vec({0, 0, 1}), vec({1, 1, 0})});
  EXPECT_FALSE(rep.all_passed());
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_EQ(rep.checks.front().name, "projection");
  EXPECT_FALSE(rep.checks.front().passed);
}

const InvariantCheck* find_check(const InvariantReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

TEST(Invariants, CorruptedSideSetIsCaught) {
  RootSystem rs = RootSystem::build(Family::B, 3);
  ClassOrdering ord = class_ordering(rs, sample_projection(rs, 2));
  std::vector<SideSets> sides;
  for (std::size_t i = 0; i <= ord.size() + 1; ++i) sides.push_back(side_sets(rs, ord, i));
  ASSERT_TRUE(check_side_sets(rs, ord, sides).all_passed());

  // Move one root of the middle left set over to the right set.
  const std::size_t mid = ord.size() / 2 + 1;
  auto moved = sides;
  std::size_t victim = moved[mid].left.find_first();
  ASSERT_NE(victim, RootSet::npos);
  moved[mid].left.reset(victim);
  moved[mid].right.set(victim);
  InvariantReport rep = check_side_sets(rs, ord, moved);
  EXPECT_FALSE(rep.all_passed());
  const auto* closed = find_check(rep, "closed");
  const auto* partition = find_check(rep, "partition");
  ASSERT_TRUE(closed && partition);
  EXPECT_TRUE(!closed->passed || !partition->passed);

  // Dropping a positive root from a positive side set breaks the partition.
  auto dropped = sides;
  std::size_t pos_victim = dropped[mid].right_pos.find_first();
  ASSERT_NE(pos_victim, RootSet::npos);
  dropped[mid].right_pos.reset(pos_victim);
  EXPECT_FALSE(check_side_sets(rs, ord, dropped).all_passed());
}

TEST(TypeA, OrderingFromRootSystem) {
  RootSystem rs = RootSystem::build(Family::A, 3);
  Projection p = standardize_type_a(sample_projection(rs, 8));
  TypeAOrdering ord = type_a_ordering(rs, class_ordering(rs, p));
  EXPECT_EQ(ord.n, 4u);
  EXPECT_TRUE(ord.is_standard());
  std::set<std::pair<std::size_t, std::size_t>> seen(ord.positions.begin(), ord.positions.end());
  EXPECT_EQ(seen.size(), 6u);
  for (auto [a, b] : ord.positions) EXPECT_LT(a, b);
  EXPECT_THROW(type_a_ordering(RootSystem::build(Family::B, 3), class_ordering(RootSystem::build(Family::B, 3),
                                                                              sample_projection(RootSystem::build(Family::B, 3), 1))),
               InvalidArgument);
}

TEST(RootsysIo, JsonAndSvg) {
  RootSystem rs = RootSystem::build(Family::G2, 2);
  ClassOrdering ord = class_ordering(rs, sample_projection(rs, 1));
  nlohmann::json doc = to_json(rs, ord);
  EXPECT_EQ(doc["system"], "G2");
  EXPECT_EQ(doc["classes"].size(), 6u);
  EXPECT_EQ(to_json(rs)["roots"].size(), 12u);
  std::string svg = render_svg(rs, ord);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace qibg
