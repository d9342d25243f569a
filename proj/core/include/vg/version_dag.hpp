#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vg/version_set.hpp"

namespace vg {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::string_view kDefaultBranch = "main";
inline constexpr std::string_view kVersionIriPrefix = "urn:vg:version:";

// `urn:vg:version:<seq>`, decimal without leading zeros.
std::string version_iri(VersionSeq seq);
// Inverse of version_iri; nullopt for anything not in canonical form.
std::optional<VersionSeq> parse_version_iri(std::string_view iri);

// ISO-8601 UTC with second precision: 2024-01-31T08:00:00Z.
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

// Who or what produced a version. Free text, stored verbatim.
struct Provenance {
  std::string code_ref;
  std::string tool;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Caller-supplied part of a commit's metadata.
struct CommitInfo {
  std::string message;
  std::string author;
  Timestamp timestamp{};
  Provenance provenance;
};

struct CommitMeta {
  VersionSeq seq = 0;
  std::string iri;
  std::vector<VersionSeq> parents;
  std::string branch;
  std::string message;
  std::string author;
  Timestamp timestamp{};
  Provenance provenance;

  bool is_merge() const { return parents.size() >= 2; }
  friend bool operator==(const CommitMeta&, const CommitMeta&) = default;
};

// Append-only branching history. Every parent seq is smaller than its
// child's seq, so the graph is acyclic by construction.
class VersionDag {
 public:
  bool initialized() const { return !commits_.empty(); }
  std::size_t size() const { return commits_.size(); }

  VersionSeq init_root(const CommitInfo& info);
  VersionSeq commit(const std::vector<VersionSeq>& parents, std::string_view branch,
                    const CommitInfo& info);
  void create_branch(std::string_view name, VersionSeq at);

  // Moves an existing branch or creates it. Used when restoring a repository.
  void set_head(std::string_view name, VersionSeq at);

  VersionSeq head(std::string_view branch) const;
  bool has_branch(std::string_view branch) const;
  std::set<VersionSeq> heads() const;
  const std::map<std::string, VersionSeq, std::less<>>& branches() const { return heads_; }

  bool contains(VersionSeq v) const { return v < commits_.size(); }
  const CommitMeta& at(VersionSeq v) const;
  const std::vector<CommitMeta>& commits() const { return commits_; }

  // True iff `ancestor` is reachable from `descendant` through parent edges
  // (reflexive).
  bool is_ancestor(VersionSeq ancestor, VersionSeq descendant) const;

  // Renumbers every commit through `mapping` (old -> new). The mapping must
  // be a bijection that keeps parents before children.
  void renumber(std::span<const VersionSeq> mapping);

 private:
  void require(VersionSeq v) const;

  std::vector<CommitMeta> commits_;
  std::map<std::string, VersionSeq, std::less<>> heads_;
};

}  // namespace vg
