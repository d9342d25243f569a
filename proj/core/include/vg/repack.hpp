#pragma once

#include <vector>

#include "vg/store.hpp"
#include "vg/version_dag.hpp"

namespace vg {

// Computes the depth-first renumbering without applying it: starting at the
// root, a commit's first-parent continuation on the same branch is visited
// before sibling branches, and a merge is only numbered once all of its
// parents are. Result maps old seq -> new seq.
std::vector<VersionSeq> depth_first_order(const VersionDag& dag);

// Renumbers the history in depth-first order and rewrites every version set
// and branch head through the returned bijection (old seq -> new seq).
// Requires exclusive access to both arguments.
std::vector<VersionSeq> repack(VersionDag& dag, AnnotatedStore& store);

}  // namespace vg
