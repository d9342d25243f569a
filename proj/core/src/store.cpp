#include "vg/store.hpp"

#include <algorithm>

#include "vg/error.hpp"

namespace vg {

void Delta::validate() const {
  for (const Triple& t : additions) {
    if (removals.contains(t)) throw ValidationError("triple is both added and removed in a delta");
  }
}

AnnotatedStore::Key AnnotatedStore::key(Order order, const Triple& t) {
  switch (order) {
    case Order::SPO: return {t.s, t.p, t.o};
    case Order::POS: return {t.p, t.o, t.s};
    case Order::OSP: return {t.o, t.s, t.p};
  }
  return {};
}

std::uint32_t AnnotatedStore::entry_for(const Triple& t) {
  auto it = spo_.find(key(Order::SPO, t));
  if (it != spo_.end()) return it->second;
  auto index = static_cast<std::uint32_t>(entries_.size());
  entries_.push_back(Entry{t, VersionSet(encoding_)});
  spo_.emplace(key(Order::SPO, t), index);
  pos_.emplace(key(Order::POS, t), index);
  osp_.emplace(key(Order::OSP, t), index);
  return index;
}

const VersionSet* AnnotatedStore::versions_of(const Triple& t) const {
  auto it = spo_.find(key(Order::SPO, t));
  return it == spo_.end() ? nullptr : &entries_[it->second].versions;
}

VersionSeq AnnotatedStore::apply_commit(VersionDag& dag, const std::vector<VersionSeq>& parents,
                                        std::string_view branch, const Delta& delta,
                                        const CommitInfo& info, const ApplyOptions& options) {
  delta.validate();
  for (const auto* side : {&delta.additions, &delta.removals}) {
    for (const Triple& t : *side) vg::validate(t, dict_);
  }

  if (parents.empty()) {
    if (dag.initialized()) throw StateError("version history already initialized");
    if (!branch.empty() && branch != kDefaultBranch) {
      throw ValidationError("the root commit must be on branch 'main'");
    }
  } else {
    for (VersionSeq p : parents) dag.at(p);
    dag.head(branch);
  }

  // Entries present in at least one parent.
  std::vector<std::uint32_t> inherited;
  if (!parents.empty()) {
    for (std::uint32_t i = 0; i < entries_.size(); ++i) {
      const VersionSet& vs = entries_[i].versions;
      if (std::any_of(parents.begin(), parents.end(),
                      [&](VersionSeq p) { return vs.contains(p); })) {
        inherited.push_back(i);
      }
    }
  }

  for (const Triple& t : delta.removals) {
    auto it = spo_.find(key(Order::SPO, t));
    bool present = it != spo_.end() &&
                   std::binary_search(inherited.begin(), inherited.end(), it->second);
    if (present) continue;
    std::string msg = "removal of a triple absent from every parent: " +
                      to_ntriples(dict_.resolve(t.s)) + " " + to_ntriples(dict_.resolve(t.p)) +
                      " " + to_ntriples(dict_.resolve(t.o));
    if (options.strict) throw DeltaError(msg);
    if (options.warn) options.warn(msg);
  }

  VersionSeq v = parents.empty() ? dag.init_root(info) : dag.commit(parents, branch, info);

  for (std::uint32_t i : inherited) {
    if (!delta.removals.contains(entries_[i].triple)) entries_[i].versions.insert(v);
  }
  for (const Triple& t : delta.additions) entries_[entry_for(t)].versions.insert(v);
  return v;
}

std::vector<Triple> AnnotatedStore::materialize(const VersionDag& dag, VersionSeq v) const {
  dag.at(v);
  std::vector<Triple> out;
  for (const Entry& e : entries_) {
    if (e.versions.contains(v)) out.push_back(e.triple);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<Triple, VersionSet>> AnnotatedStore::match(
    const TriplePatternIds& pattern) const {
  std::vector<std::pair<Triple, VersionSet>> out;
  for_each_match(pattern, [&](const Triple& t, const VersionSet& vs) { out.emplace_back(t, vs); });
  return out;
}

std::vector<std::pair<Triple, VersionSet>> AnnotatedStore::scan(Order order) const {
  const Index& index = order == Order::SPO ? spo_ : (order == Order::POS ? pos_ : osp_);
  std::vector<std::pair<Triple, VersionSet>> out;
  out.reserve(index.size());
  for (const auto& [k, i] : index) out.emplace_back(entries_[i].triple, entries_[i].versions);
  return out;
}

Delta AnnotatedStore::reconstruct_delta(const VersionDag& dag, VersionSeq v) const {
  const auto& parents = dag.at(v).parents;
  Delta delta;
  for (const Entry& e : entries_) {
    bool present = e.versions.contains(v);
    bool inherited = std::any_of(parents.begin(), parents.end(),
                                 [&](VersionSeq p) { return e.versions.contains(p); });
    if (present && !inherited) delta.additions.insert(e.triple);
    if (!present && inherited) delta.removals.insert(e.triple);
  }
  return delta;
}

StoreStats AnnotatedStore::stats(const VersionDag& dag) const {
  StoreStats s;
  s.distinct_triples = entries_.size();
  s.versions = dag.size();
  for (const Entry& e : entries_) {
    s.scalar_cost_total += e.versions.scalar_cost();
    s.triples_sum_over_versions += e.versions.cardinality();
  }
  return s;
}

void AnnotatedStore::remap_versions(std::span<const VersionSeq> mapping) {
  for (Entry& e : entries_) e.versions = e.versions.remap(mapping);
}

}  // namespace vg
