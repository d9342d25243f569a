#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "vg/error.hpp"
#include "vg/version_set.hpp"

using namespace vg;

namespace {

std::vector<VersionSeq> random_members(std::mt19937_64& rng, VersionSeq universe) {
  std::vector<VersionSeq> out;
  std::bernoulli_distribution keep(std::uniform_real_distribution<double>(0, 1)(rng));
  for (VersionSeq v = 0; v < universe; ++v) {
    if (keep(rng)) out.push_back(v);
  }
  return out;
}

template <class S>
std::set<VersionSeq> as_set(const S& s) {
  auto m = s.members();
  return {m.begin(), m.end()};
}

std::size_t count_runs(const std::vector<VersionSeq>& sorted) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1] + 1) ++runs;
  }
  return runs;
}

}  // namespace

TEST(IntervalSet, NormalizesRuns) {
  std::vector<VersionSeq> m{0, 1, 2, 5, 6, 9};
  auto s = IntervalSet::from_members(m);
  ASSERT_EQ(s.intervals().size(), 3u);
  EXPECT_EQ(s.intervals()[0], (Interval{0, 2}));
  EXPECT_EQ(s.intervals()[1], (Interval{5, 6}));
  EXPECT_EQ(s.intervals()[2], (Interval{9, 9}));
  EXPECT_EQ(s.cardinality(), 6u);
  EXPECT_EQ(s.scalar_cost(), 6u);
}

TEST(IntervalSet, InsertMergesNeighbours) {
  IntervalSet s;
  s.insert(3);
  s.insert(5);
  s.insert(4);
  ASSERT_EQ(s.intervals().size(), 1u);
  EXPECT_EQ(s.intervals()[0], (Interval{3, 5}));
  s.insert(4);
  EXPECT_EQ(s.cardinality(), 3u);
}

TEST(IntervalSet, UnsortedInputAndDuplicates) {
  std::vector<VersionSeq> m{7, 1, 2, 2, 8, 0};
  auto s = IntervalSet::from_members(m);
  EXPECT_EQ(s.members(), (std::vector<VersionSeq>{0, 1, 2, 7, 8}));
  EXPECT_EQ(s, IntervalSet::from_members(std::vector<VersionSeq>{0, 1, 2, 7, 8}));
}

TEST(ExtensionSet, Basics) {
  auto s = ExtensionSet::from_members(std::vector<VersionSeq>{4, 2, 2, 9});
  EXPECT_EQ(s.members(), (std::vector<VersionSeq>{2, 4, 9}));
  EXPECT_EQ(s.scalar_cost(), 3u);
  EXPECT_TRUE(s.contains(4));
  EXPECT_FALSE(s.contains(3));
  s.insert(3);
  EXPECT_TRUE(s.contains(3));
}

TEST(VersionSetEncodings, RandomizedAgainstStdSet) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_members(rng, 64);
    auto b = random_members(rng, 64);
    std::set<VersionSeq> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::set<VersionSeq> inter, uni;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));

    auto ea = ExtensionSet::from_members(a), eb = ExtensionSet::from_members(b);
    auto ia = IntervalSet::from_members(a), ib = IntervalSet::from_members(b);
    ASSERT_EQ(as_set(ea.intersect(eb)), inter);
    ASSERT_EQ(as_set(ia.intersect(ib)), inter);
    ASSERT_EQ(as_set(ea.unite(eb)), uni);
    ASSERT_EQ(as_set(ia.unite(ib)), uni);
    ASSERT_EQ(ia.cardinality(), sa.size());
    ASSERT_EQ(ia.scalar_cost(), 2 * count_runs(a));
    ASSERT_EQ(ia.intersect(ib), IntervalSet::from_members(std::vector<VersionSeq>(inter.begin(), inter.end())));
    VersionSeq probe = std::uniform_int_distribution<VersionSeq>(0, 70)(rng);
    ASSERT_EQ(ia.contains(probe), sa.contains(probe));
    ASSERT_EQ(ea.contains(probe), sa.contains(probe));
  }
}

TEST(VersionSet, ConvertRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto m = random_members(rng, 100);
    auto ext = VersionSet::from_members(Encoding::Extension, m);
    auto iv = ext.convert(Encoding::Interval);
    EXPECT_EQ(iv.encoding(), Encoding::Interval);
    EXPECT_EQ(iv.members(), m);
    EXPECT_EQ(iv.convert(Encoding::Extension), ext);
  }
}

TEST(VersionSet, Remap) {
  std::vector<VersionSeq> mapping{2, 0, 1};
  auto s = VersionSet::from_members(Encoding::Interval, std::vector<VersionSeq>{0, 1});
  EXPECT_EQ(s.remap(mapping).members(), (std::vector<VersionSeq>{0, 2}));
  EXPECT_EQ(s.remap(mapping).encoding(), Encoding::Interval);
}

TEST(VersionSet, MixedEncodingsTakeLeftEncoding) {
  auto a = VersionSet::from_members(Encoding::Extension, std::vector<VersionSeq>{1, 2});
  auto b = VersionSet::from_members(Encoding::Interval, std::vector<VersionSeq>{2, 3});
  auto i = a.intersect(b);
  EXPECT_EQ(i.encoding(), Encoding::Extension);
  EXPECT_EQ(i.members(), (std::vector<VersionSeq>{2}));
  EXPECT_EQ(b.unite(a).encoding(), Encoding::Interval);
}

TEST(Encoding, Names) {
  EXPECT_EQ(parse_encoding("extension"), Encoding::Extension);
  EXPECT_EQ(parse_encoding("interval"), Encoding::Interval);
  EXPECT_EQ(to_string(Encoding::Interval), "interval");
  EXPECT_THROW(parse_encoding("bitmap"), Error);
}
