#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "vg/term.hpp"
#include "vg/version_dag.hpp"
#include "vg/version_set.hpp"

namespace vg {

// Changes from the union of a commit's parents to the commit itself.
struct Delta {
  std::set<Triple> additions;
  std::set<Triple> removals;

  // Throws ValidationError when a triple is both added and removed.
  void validate() const;
  friend bool operator==(const Delta&, const Delta&) = default;
};

struct ApplyOptions {
  // Strict mode rejects removals of triples absent from every parent.
  bool strict = true;
  // Receives one message per ignored removal in permissive mode.
  std::function<void(std::string_view)> warn;
};

// Bound positions of a triple pattern; nullopt is a wildcard.
struct TriplePatternIds {
  std::optional<TermId> s;
  std::optional<TermId> p;
  std::optional<TermId> o;
};

struct StoreStats {
  std::size_t distinct_triples = 0;
  std::size_t versions = 0;
  std::size_t scalar_cost_total = 0;
  std::size_t triples_sum_over_versions = 0;
};

// Every distinct triple is stored once together with the set of versions it
// is present in. SPO, POS and OSP indexes point at the same entry, so they
// always agree. Single writer; concurrent readers between commits are fine.
class AnnotatedStore {
 public:
  enum class Order : std::uint8_t { SPO, POS, OSP };

  explicit AnnotatedStore(Encoding encoding = Encoding::Extension) : encoding_(encoding) {}

  Encoding encoding() const { return encoding_; }
  Dictionary& dictionary() { return dict_; }
  const Dictionary& dictionary() const { return dict_; }

  // Empty `parents` creates the root commit on "main".
  VersionSeq apply_commit(VersionDag& dag, const std::vector<VersionSeq>& parents,
                          std::string_view branch, const Delta& delta, const CommitInfo& info,
                          const ApplyOptions& options = {});

  // Sorted by (s, p, o) id.
  std::vector<Triple> materialize(const VersionDag& dag, VersionSeq v) const;

  // Calls `f(triple, versions)` for every stored triple matching `pattern`.
  // The index is chosen from the bound positions.
  template <typename F>
  void for_each_match(const TriplePatternIds& pattern, F&& f) const;

  std::vector<std::pair<Triple, VersionSet>> match(const TriplePatternIds& pattern) const;

  // Full enumeration through one specific index (used to check consistency).
  std::vector<std::pair<Triple, VersionSet>> scan(Order order) const;

  const VersionSet* versions_of(const Triple& t) const;

  // Delta from the union of v's parents to v, recomputed from the annotations.
  // For the root it holds every triple of the root version.
  Delta reconstruct_delta(const VersionDag& dag, VersionSeq v) const;

  StoreStats stats(const VersionDag& dag) const;
  std::size_t distinct_triples() const { return entries_.size(); }

  // Rewrites every version set through mapping (old seq -> new seq).
  void remap_versions(std::span<const VersionSeq> mapping);

 private:
  using Key = std::array<TermId, 3>;
  using Index = std::map<Key, std::uint32_t>;

  struct Entry {
    Triple triple;
    VersionSet versions;
  };

  static Key key(Order order, const Triple& t);
  std::uint32_t entry_for(const Triple& t);

  template <typename F>
  void scan_prefix(const Index& index, Key lo, std::size_t bound, const TriplePatternIds& pattern,
                   F& f) const;

  Encoding encoding_;
  Dictionary dict_;
  std::vector<Entry> entries_;
  Index spo_;
  Index pos_;
  Index osp_;
};

template <typename F>
void AnnotatedStore::scan_prefix(const Index& index, Key lo, std::size_t bound,
                                 const TriplePatternIds& pattern, F& f) const {
  Key hi = lo;
  for (std::size_t i = bound; i < 3; ++i) {
    lo[i] = 0;
    hi[i] = kNoTerm;
  }
  for (auto it = index.lower_bound(lo); it != index.end() && !(hi < it->first); ++it) {
    const Entry& e = entries_[it->second];
    if ((pattern.s && e.triple.s != *pattern.s) || (pattern.p && e.triple.p != *pattern.p) ||
        (pattern.o && e.triple.o != *pattern.o)) {
      continue;
    }
    f(e.triple, e.versions);
  }
}

template <typename F>
void AnnotatedStore::for_each_match(const TriplePatternIds& q, F&& f) const {
  if (q.s) {
    if (q.p) {
      scan_prefix(spo_, {*q.s, *q.p, q.o.value_or(0)}, q.o ? 3 : 2, q, f);
    } else if (q.o) {
      scan_prefix(osp_, {*q.o, *q.s, 0}, 2, q, f);
    } else {
      scan_prefix(spo_, {*q.s, 0, 0}, 1, q, f);
    }
  } else if (q.p) {
    scan_prefix(pos_, {*q.p, q.o.value_or(0), 0}, q.o ? 2 : 1, q, f);
  } else if (q.o) {
    scan_prefix(osp_, {*q.o, 0, 0}, 1, q, f);
  } else {
    scan_prefix(spo_, {0, 0, 0}, 0, q, f);
  }
}

}  // namespace vg
