#include <gtest/gtest.h>

#include <random>
#include <set>

#include "random_instances.hpp"
#include "vg/error.hpp"
#include "vg/store.hpp"

using namespace vg;

namespace {

CommitInfo info() {
  CommitInfo i;
  i.message = "m";
  i.author = "a";
  return i;
}

struct Fixture {
  AnnotatedStore store;
  VersionDag dag;
  TermId a, b, p, q, one;
  explicit Fixture(Encoding e = Encoding::Extension) : store(e) {
    auto& d = store.dictionary();
    a = d.intern(Term::iri("http://ex.org/a"));
    b = d.intern(Term::iri("http://ex.org/b"));
    p = d.intern(Term::iri("http://ex.org/p"));
    q = d.intern(Term::iri("http://ex.org/q"));
    one = d.intern(Term::literal("1", std::string(xsd::kInteger)));
  }
};

}  // namespace

TEST(Store, ApplyAndMaterialize) {
  Fixture f;
  Delta root;
  root.additions = {{f.a, f.p, f.b}, {f.a, f.q, f.one}};
  EXPECT_EQ(f.store.apply_commit(f.dag, {}, "main", root, info()), 0u);
  Delta d1;
  d1.removals = {{f.a, f.q, f.one}};
  d1.additions = {{f.b, f.p, f.a}};
  EXPECT_EQ(f.store.apply_commit(f.dag, {0}, "main", d1, info()), 1u);
  EXPECT_EQ(f.store.materialize(f.dag, 0), (std::vector<Triple>{{f.a, f.p, f.b}, {f.a, f.q, f.one}}));
  EXPECT_EQ(f.store.materialize(f.dag, 1), (std::vector<Triple>{{f.a, f.p, f.b}, {f.b, f.p, f.a}}));
  EXPECT_EQ(f.store.versions_of({f.a, f.p, f.b})->members(), (std::vector<VersionSeq>{0, 1}));
  EXPECT_EQ(f.store.versions_of({f.a, f.q, f.one})->members(), (std::vector<VersionSeq>{0}));
  EXPECT_EQ(f.store.versions_of({f.b, f.q, f.a}), nullptr);
  EXPECT_EQ(f.store.reconstruct_delta(f.dag, 1), d1);
  EXPECT_THROW(f.store.materialize(f.dag, 2), LookupError);
}

TEST(Store, MergeUnionsParents) {
  Fixture f;
  f.store.apply_commit(f.dag, {}, "main", {}, info());
  f.dag.create_branch("side", 0);
  Delta x, y;
  x.additions = {{f.a, f.p, f.b}};
  y.additions = {{f.b, f.p, f.a}};
  f.store.apply_commit(f.dag, {0}, "main", x, info());
  f.store.apply_commit(f.dag, {0}, "side", y, info());
  f.store.apply_commit(f.dag, {1, 2}, "main", {}, info());
  EXPECT_EQ(f.store.materialize(f.dag, 3).size(), 2u);
  Delta removal;
  removal.removals = {{f.b, f.p, f.a}};
  f.store.apply_commit(f.dag, {3}, "main", removal, info());
  EXPECT_EQ(f.store.materialize(f.dag, 4), (std::vector<Triple>{{f.a, f.p, f.b}}));
}

TEST(Store, StrictAndPermissiveRemovals) {
  Fixture f;
  f.store.apply_commit(f.dag, {}, "main", {}, info());
  Delta bad;
  bad.removals = {{f.a, f.p, f.b}};
  EXPECT_THROW(f.store.apply_commit(f.dag, {0}, "main", bad, info()), DeltaError);
  EXPECT_EQ(f.dag.size(), 1u);
  std::vector<std::string> warnings;
  ApplyOptions loose{false, [&](std::string_view m) { warnings.emplace_back(m); }};
  EXPECT_EQ(f.store.apply_commit(f.dag, {0}, "main", bad, info(), loose), 1u);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_TRUE(f.store.materialize(f.dag, 1).empty());
}

TEST(Store, RejectsInvalidDeltas) {
  Fixture f;
  Delta overlap;
  overlap.additions = {{f.a, f.p, f.b}};
  overlap.removals = {{f.a, f.p, f.b}};
  EXPECT_THROW(f.store.apply_commit(f.dag, {}, "main", overlap, info()), ValidationError);
  Delta literal_subject;
  literal_subject.additions = {{f.one, f.p, f.b}};
  EXPECT_THROW(f.store.apply_commit(f.dag, {}, "main", literal_subject, info()), ValidationError);
  EXPECT_THROW(f.store.apply_commit(f.dag, {}, "side", {}, info()), ValidationError);
  f.store.apply_commit(f.dag, {}, "main", {}, info());
  EXPECT_THROW(f.store.apply_commit(f.dag, {}, "main", {}, info()), StateError);
  EXPECT_THROW(f.store.apply_commit(f.dag, {3}, "main", {}, info()), LookupError);
  EXPECT_THROW(f.store.apply_commit(f.dag, {0}, "nope", {}, info()), LookupError);
  EXPECT_EQ(f.dag.size(), 1u);
}

TEST(Store, ReplayOracleOnRandomHistories) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    Encoding enc = i % 2 ? Encoding::Interval : Encoding::Extension;
    auto inst = fixtures::random_instance(rng, enc);
    const auto& store = inst.repo.store;
    const auto& dag = inst.repo.dag;
    std::size_t sum = 0;
    for (VersionSeq v = 0; v < dag.size(); ++v) {
      auto m = store.materialize(dag, v);
      ASSERT_EQ(fixtures::to_set(m), inst.expected[v]) << "version " << v;
      sum += m.size();
      // Reconstructed deltas replay to the same state.
      Delta d = store.reconstruct_delta(dag, v);
      std::set<Triple> base;
      for (VersionSeq p : dag.at(v).parents) base.insert(inst.expected[p].begin(), inst.expected[p].end());
      for (const Triple& t : d.removals) ASSERT_EQ(base.erase(t), 1u);
      for (const Triple& t : d.additions) ASSERT_TRUE(base.insert(t).second);
      ASSERT_EQ(base, inst.expected[v]);
    }
    auto st = store.stats(dag);
    EXPECT_EQ(st.triples_sum_over_versions, sum);
    EXPECT_EQ(st.versions, dag.size());
    EXPECT_EQ(st.distinct_triples, store.distinct_triples());
  }
}

TEST(Store, MatchAgreesWithFilteringAndIndexesAgree) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    auto inst = fixtures::random_instance(rng, Encoding::Interval);
    const auto& store = inst.repo.store;
    auto all = store.scan(AnnotatedStore::Order::SPO);
    for (auto order : {AnnotatedStore::Order::POS, AnnotatedStore::Order::OSP}) {
      auto other = store.scan(order);
      std::set<std::pair<Triple, std::vector<VersionSeq>>> x, y;
      for (auto& [t, vs] : all) x.emplace(t, vs.members());
      for (auto& [t, vs] : other) y.emplace(t, vs.members());
      ASSERT_EQ(x, y);
    }
    std::vector<TermId> terms;
    for (TermId id = 0; id < store.dictionary().size(); ++id) terms.push_back(id);
    for (int k = 0; k < 50; ++k) {
      TriplePatternIds pat;
      auto maybe = [&]() -> std::optional<TermId> {
        if (std::bernoulli_distribution(0.5)(rng)) return std::nullopt;
        return terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)];
      };
      pat.s = maybe();
      pat.p = maybe();
      pat.o = maybe();
      std::set<Triple> expected;
      for (auto& [t, vs] : all) {
        if ((!pat.s || t.s == *pat.s) && (!pat.p || t.p == *pat.p) && (!pat.o || t.o == *pat.o)) {
          expected.insert(t);
        }
      }
      std::set<Triple> got;
      for (auto& [t, vs] : store.match(pat)) {
        ASSERT_TRUE(got.insert(t).second);
        ASSERT_EQ(vs, *store.versions_of(t));
      }
      ASSERT_EQ(got, expected);
    }
  }
}
