#include "vg/repack.hpp"

#include <algorithm>
#include <tuple>

namespace vg {

std::vector<VersionSeq> depth_first_order(const VersionDag& dag) {
  const auto& commits = dag.commits();
  const std::size_t n = commits.size();
  std::vector<std::vector<VersionSeq>> children(n);
  std::vector<std::size_t> pending(n, 0);
  for (const CommitMeta& c : commits) {
    pending[c.seq] = c.parents.size();
    for (VersionSeq p : c.parents) children[p].push_back(c.seq);
  }

  std::vector<VersionSeq> mapping(n, 0);
  std::vector<VersionSeq> stack;
  if (n > 0) stack.push_back(0);
  VersionSeq next = 0;
  while (!stack.empty()) {
    VersionSeq v = stack.back();
    stack.pop_back();
    mapping[v] = next++;

    std::vector<VersionSeq> ready;
    for (VersionSeq c : children[v]) {
      if (--pending[c] == 0) ready.push_back(c);
    }
    // Highest priority last so it is popped first: the first-parent child on
    // the same branch, then other first-parent children, then by seq.
    auto rank = [&](VersionSeq c) {
      const CommitMeta& m = commits[c];
      bool first_parent = m.parents.front() == v;
      bool same_branch = first_parent && m.branch == commits[v].branch;
      return std::make_tuple(!same_branch, !first_parent, c);
    };
    std::sort(ready.begin(), ready.end(),
              [&](VersionSeq a, VersionSeq b) { return rank(a) > rank(b); });
    stack.insert(stack.end(), ready.begin(), ready.end());
  }
  return mapping;
}

std::vector<VersionSeq> repack(VersionDag& dag, AnnotatedStore& store) {
  auto mapping = depth_first_order(dag);
  dag.renumber(mapping);
  store.remap_versions(mapping);
  return mapping;
}

}  // namespace vg
