#include "vg/version_dag.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <deque>

#include "vg/error.hpp"

namespace vg {

std::string version_iri(VersionSeq seq) {
  return std::string(kVersionIriPrefix) + std::to_string(seq);
}

std::optional<VersionSeq> parse_version_iri(std::string_view iri) {
  if (!iri.starts_with(kVersionIriPrefix)) return std::nullopt;
  auto digits = iri.substr(kVersionIriPrefix.size());
  if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return std::nullopt;
  VersionSeq out = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return out;
}

std::string format_timestamp(Timestamp t) {
  std::time_t raw = t.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&raw, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  std::tm tm{};
  int consumed = 0;
  std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                  &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &consumed) != 6 ||
      consumed != static_cast<int>(s.size()) || s.size() != 20) {
    throw ValidationError("timestamp is not ISO-8601 UTC (YYYY-MM-DDTHH:MM:SSZ): " + s);
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return Timestamp(std::chrono::seconds(timegm(&tm)));
}

void VersionDag::require(VersionSeq v) const {
  if (!contains(v)) throw LookupError("unknown version " + std::to_string(v));
}

const CommitMeta& VersionDag::at(VersionSeq v) const {
  require(v);
  return commits_[v];
}

VersionSeq VersionDag::init_root(const CommitInfo& info) {
  if (initialized()) throw StateError("version history already initialized");
  commits_.push_back(CommitMeta{0, version_iri(0), {}, std::string(kDefaultBranch), info.message,
                                info.author, info.timestamp, info.provenance});
  heads_[std::string(kDefaultBranch)] = 0;
  return 0;
}

VersionSeq VersionDag::commit(const std::vector<VersionSeq>& parents, std::string_view branch,
                              const CommitInfo& info) {
  if (!initialized()) throw StateError("version history is not initialized");
  if (parents.empty()) throw ValidationError("a non-root commit needs at least one parent");
  for (VersionSeq p : parents) require(p);
  auto it = heads_.find(branch);
  if (it == heads_.end()) throw LookupError("unknown branch '" + std::string(branch) + "'");
  std::vector<VersionSeq> unique_parents;
  for (VersionSeq p : parents) {
    if (std::find(unique_parents.begin(), unique_parents.end(), p) == unique_parents.end()) {
      unique_parents.push_back(p);
    }
  }
  auto seq = static_cast<VersionSeq>(commits_.size());
  commits_.push_back(CommitMeta{seq, version_iri(seq), std::move(unique_parents),
                                std::string(branch), info.message, info.author, info.timestamp,
                                info.provenance});
  it->second = seq;
  return seq;
}

void VersionDag::create_branch(std::string_view name, VersionSeq at) {
  if (name.empty()) throw ValidationError("branch name is empty");
  if (heads_.contains(name)) throw StateError("branch '" + std::string(name) + "' already exists");
  require(at);
  heads_.emplace(std::string(name), at);
}

void VersionDag::set_head(std::string_view name, VersionSeq at) {
  if (name.empty()) throw ValidationError("branch name is empty");
  require(at);
  heads_[std::string(name)] = at;
}

VersionSeq VersionDag::head(std::string_view branch) const {
  auto it = heads_.find(branch);
  if (it == heads_.end()) throw LookupError("unknown branch '" + std::string(branch) + "'");
  return it->second;
}

bool VersionDag::has_branch(std::string_view branch) const { return heads_.contains(branch); }

std::set<VersionSeq> VersionDag::heads() const {
  std::set<VersionSeq> out;
  for (const auto& [name, seq] : heads_) out.insert(seq);
  return out;
}

bool VersionDag::is_ancestor(VersionSeq ancestor, VersionSeq descendant) const {
  require(ancestor);
  require(descendant);
  if (ancestor > descendant) return false;
  std::vector<bool> seen(descendant + 1, false);
  std::deque<VersionSeq> queue{descendant};
  seen[descendant] = true;
  while (!queue.empty()) {
    VersionSeq v = queue.front();
    queue.pop_front();
    if (v == ancestor) return true;
    for (VersionSeq p : commits_[v].parents) {
      // Parents below the target cannot lead back up to it.
      if (p >= ancestor && !seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  return false;
}

void VersionDag::renumber(std::span<const VersionSeq> mapping) {
  if (mapping.size() != commits_.size()) {
    throw ValidationError("renumbering must cover every commit");
  }
  std::vector<CommitMeta> renumbered(commits_.size());
  std::vector<bool> used(commits_.size(), false);
  for (const CommitMeta& c : commits_) {
    VersionSeq target = mapping[c.seq];
    if (target >= commits_.size() || used[target]) {
      throw ValidationError("renumbering is not a bijection");
    }
    used[target] = true;
    CommitMeta moved = c;
    moved.seq = target;
    moved.iri = version_iri(target);
    for (VersionSeq& p : moved.parents) {
      p = mapping[p];
      if (p >= target) throw ValidationError("renumbering puts a parent after its child");
    }
    renumbered[target] = std::move(moved);
  }
  commits_ = std::move(renumbered);
  for (auto& [name, seq] : heads_) seq = mapping[seq];
}

}  // namespace vg
