#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vg/query.hpp"
#include "vg/repository.hpp"

namespace vg::fixtures {

// A random branching history together with the expected materialization of
// every version, computed by replaying the deltas on plain std::sets.
struct RandomInstance {
  Repository repo;
  std::vector<std::set<Triple>> expected;  // indexed by seq
  std::vector<Delta> deltas;               // as applied
};

struct InstanceShape {
  std::size_t min_versions = 4;
  std::size_t max_versions = 12;
  std::size_t max_triples = 60;
  bool require_merge = true;
};

RandomInstance random_instance(std::mt19937_64& rng, Encoding encoding,
                               const InstanceShape& shape = {});

// Random query over a random_instance repository: 1-3 patterns generalized
// from stored triples, GRAPH blocks with one or two version variables,
// concrete version IRIs or the default graph, optional filter, aggregate,
// GROUP BY and DISTINCT.
std::string random_query(std::mt19937_64& rng, const Repository& repo);

std::set<Triple> to_set(const std::vector<Triple>& triples);

// Rewrites every version IRI cell through `mapping` (old seq -> new seq) and
// restores the evaluators' row order.
query::SolutionTable map_versions(query::SolutionTable table, std::span<const VersionSeq> mapping);

// Same rewrite for <urn:vg:version:k> constants in query text.
std::string map_query_versions(const std::string& text, std::span<const VersionSeq> mapping);

}  // namespace vg::fixtures
