#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vg {

// Global commit-creation number; the root commit is 0.
using VersionSeq = std::uint32_t;

// Version set stored in extension: strictly increasing explicit ids.
class ExtensionSet {
 public:
  ExtensionSet() = default;
  static ExtensionSet from_members(std::span<const VersionSeq> members);

  bool contains(VersionSeq v) const;
  void insert(VersionSeq v);
  ExtensionSet intersect(const ExtensionSet& other) const;
  ExtensionSet unite(const ExtensionSet& other) const;

  std::size_t cardinality() const { return ids_.size(); }
  // One scalar per member.
  std::size_t scalar_cost() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  template <typename F>
  void for_each(F&& f) const {
    for (VersionSeq v : ids_) f(v);
  }
  std::vector<VersionSeq> members() const { return ids_; }
  const std::vector<VersionSeq>& ids() const { return ids_; }

  friend bool operator==(const ExtensionSet&, const ExtensionSet&) = default;

 private:
  std::vector<VersionSeq> ids_;
};

struct Interval {
  VersionSeq lo = 0;
  VersionSeq hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Version set stored as maximal closed runs. Runs are sorted, disjoint and
// never adjacent (hi + 1 < next.lo), so the encoding of a member set is unique.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet from_members(std::span<const VersionSeq> members);

  bool contains(VersionSeq v) const;
  void insert(VersionSeq v);
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;

  std::size_t cardinality() const;
  // Two scalars (lo, hi) per run.
  std::size_t scalar_cost() const { return 2 * runs_.size(); }
  bool empty() const { return runs_.empty(); }

  template <typename F>
  void for_each(F&& f) const {
    for (const Interval& r : runs_) {
      for (VersionSeq v = r.lo;; ++v) {
        f(v);
        if (v == r.hi) break;
      }
    }
  }
  std::vector<VersionSeq> members() const;
  const std::vector<Interval>& intervals() const { return runs_; }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> runs_;
};

template <typename S>
concept VersionSetEncoding = std::regular<S> && requires(S s, const S cs, VersionSeq v) {
  { S::from_members(std::span<const VersionSeq>{}) } -> std::same_as<S>;
  { cs.contains(v) } -> std::same_as<bool>;
  s.insert(v);
  { cs.intersect(cs) } -> std::same_as<S>;
  { cs.unite(cs) } -> std::same_as<S>;
  { cs.cardinality() } -> std::same_as<std::size_t>;
  { cs.scalar_cost() } -> std::same_as<std::size_t>;
  { cs.members() } -> std::same_as<std::vector<VersionSeq>>;
};

static_assert(VersionSetEncoding<ExtensionSet>);
static_assert(VersionSetEncoding<IntervalSet>);

enum class Encoding : std::uint8_t { Extension, Interval };

std::string_view to_string(Encoding e);
// Accepts "extension" and "interval"; throws ValidationError otherwise.
Encoding parse_encoding(std::string_view name);

// Runtime-selected encoding behind one interface. Binary operations on
// mixed encodings convert the right operand to the left one's encoding.
class VersionSet {
 public:
  explicit VersionSet(Encoding e = Encoding::Extension);
  VersionSet(ExtensionSet s) : rep_(std::move(s)) {}
  VersionSet(IntervalSet s) : rep_(std::move(s)) {}

  static VersionSet from_members(Encoding e, std::span<const VersionSeq> members);
  static VersionSet singleton(Encoding e, VersionSeq v);

  Encoding encoding() const {
    return std::holds_alternative<ExtensionSet>(rep_) ? Encoding::Extension : Encoding::Interval;
  }

  bool contains(VersionSeq v) const;
  void insert(VersionSeq v);
  VersionSet intersect(const VersionSet& other) const;
  VersionSet unite(const VersionSet& other) const;
  std::size_t cardinality() const;
  std::size_t scalar_cost() const;
  bool empty() const;
  std::vector<VersionSeq> members() const;

  template <typename F>
  void for_each(F&& f) const {
    std::visit([&](const auto& s) { s.for_each(f); }, rep_);
  }

  // Same encoding, members mapped through `mapping` (old seq -> new seq).
  VersionSet remap(std::span<const VersionSeq> mapping) const;
  VersionSet convert(Encoding e) const;

  // "{1,2,3}" or "[1,3] [7,7]" depending on the encoding.
  std::string debug_string() const;

  const std::variant<ExtensionSet, IntervalSet>& rep() const { return rep_; }

  friend bool operator==(const VersionSet&, const VersionSet&) = default;

 private:
  std::variant<ExtensionSet, IntervalSet> rep_;
};

}  // namespace vg
