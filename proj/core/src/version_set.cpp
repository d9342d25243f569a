#include "vg/version_set.hpp"

#include <algorithm>
#include <iterator>

#include "vg/error.hpp"

namespace vg {

ExtensionSet ExtensionSet::from_members(std::span<const VersionSeq> members) {
  ExtensionSet out;
  out.ids_.assign(members.begin(), members.end());
  std::sort(out.ids_.begin(), out.ids_.end());
  out.ids_.erase(std::unique(out.ids_.begin(), out.ids_.end()), out.ids_.end());
  return out;
}

bool ExtensionSet::contains(VersionSeq v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

void ExtensionSet::insert(VersionSeq v) {
  // Commits arrive in increasing order, so appending is the common case.
  if (ids_.empty() || ids_.back() < v) {
    ids_.push_back(v);
    return;
  }
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) ids_.insert(it, v);
}

ExtensionSet ExtensionSet::intersect(const ExtensionSet& other) const {
  ExtensionSet out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
  return out;
}

ExtensionSet ExtensionSet::unite(const ExtensionSet& other) const {
  ExtensionSet out;
  out.ids_.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

namespace {

// Appends [lo, hi] to a run list that is sorted by lo, coalescing overlap
// and adjacency with the last run.
void push_run(std::vector<Interval>& runs, VersionSeq lo, VersionSeq hi) {
  if (!runs.empty() && static_cast<std::uint64_t>(runs.back().hi) + 1 >= lo) {
    runs.back().hi = std::max(runs.back().hi, hi);
    return;
  }
  runs.push_back({lo, hi});
}

}  // namespace

IntervalSet IntervalSet::from_members(std::span<const VersionSeq> members) {
  std::vector<VersionSeq> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  IntervalSet out;
  for (VersionSeq v : sorted) push_run(out.runs_, v, v);
  return out;
}

bool IntervalSet::contains(VersionSeq v) const {
  // First run whose hi >= v.
  auto it = std::lower_bound(runs_.begin(), runs_.end(), v,
                             [](const Interval& r, VersionSeq x) { return r.hi < x; });
  return it != runs_.end() && it->lo <= v;
}

void IntervalSet::insert(VersionSeq v) {
  if (runs_.empty() || static_cast<std::uint64_t>(runs_.back().hi) + 1 < v) {
    runs_.push_back({v, v});
    return;
  }
  if (static_cast<std::uint64_t>(runs_.back().hi) + 1 == v) {
    runs_.back().hi = v;
    return;
  }
  // First run that v touches or precedes: hi + 1 >= v.
  auto it = std::lower_bound(runs_.begin(), runs_.end(), v, [](const Interval& r, VersionSeq x) {
    return static_cast<std::uint64_t>(r.hi) + 1 < x;
  });
  if (it->lo <= v && v <= it->hi) return;
  if (static_cast<std::uint64_t>(it->hi) + 1 == v) {
    it->hi = v;
    auto next = std::next(it);
    if (next != runs_.end() && static_cast<std::uint64_t>(v) + 1 == next->lo) {
      it->hi = next->hi;
      runs_.erase(next);
    }
    return;
  }
  // v < it->lo
  if (static_cast<std::uint64_t>(v) + 1 == it->lo) {
    it->lo = v;
    return;
  }
  runs_.insert(it, {v, v});
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet out;
  auto a = runs_.begin();
  auto b = other.runs_.begin();
  while (a != runs_.end() && b != other.runs_.end()) {
    VersionSeq lo = std::max(a->lo, b->lo);
    VersionSeq hi = std::min(a->hi, b->hi);
    if (lo <= hi) out.runs_.push_back({lo, hi});
    if (a->hi < b->hi) {
      ++a;
    } else {
      ++b;
    }
  }
  return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  IntervalSet out;
  out.runs_.reserve(runs_.size() + other.runs_.size());
  auto a = runs_.begin();
  auto b = other.runs_.begin();
  while (a != runs_.end() || b != other.runs_.end()) {
    const Interval* next = nullptr;
    if (b == other.runs_.end() || (a != runs_.end() && a->lo <= b->lo)) {
      next = &*a++;
    } else {
      next = &*b++;
    }
    push_run(out.runs_, next->lo, next->hi);
  }
  return out;
}

std::size_t IntervalSet::cardinality() const {
  std::size_t n = 0;
  for (const Interval& r : runs_) n += static_cast<std::size_t>(r.hi - r.lo) + 1;
  return n;
}

std::vector<VersionSeq> IntervalSet::members() const {
  std::vector<VersionSeq> out;
  out.reserve(cardinality());
  for_each([&](VersionSeq v) { out.push_back(v); });
  return out;
}

std::string_view to_string(Encoding e) {
  return e == Encoding::Extension ? "extension" : "interval";
}

Encoding parse_encoding(std::string_view name) {
  if (name == "extension") return Encoding::Extension;
  if (name == "interval") return Encoding::Interval;
  throw ValidationError("unknown encoding '" + std::string(name) +
                        "' (expected extension or interval)");
}

VersionSet::VersionSet(Encoding e) {
  if (e == Encoding::Interval) rep_ = IntervalSet{};
}

VersionSet VersionSet::from_members(Encoding e, std::span<const VersionSeq> members) {
  if (e == Encoding::Extension) return VersionSet(ExtensionSet::from_members(members));
  return VersionSet(IntervalSet::from_members(members));
}

VersionSet VersionSet::singleton(Encoding e, VersionSeq v) {
  VersionSet out(e);
  out.insert(v);
  return out;
}

bool VersionSet::contains(VersionSeq v) const {
  return std::visit([v](const auto& s) { return s.contains(v); }, rep_);
}

void VersionSet::insert(VersionSeq v) {
  std::visit([v](auto& s) { s.insert(v); }, rep_);
}

VersionSet VersionSet::convert(Encoding e) const {
  if (e == encoding()) return *this;
  auto m = members();
  return from_members(e, m);
}

VersionSet VersionSet::intersect(const VersionSet& other) const {
  if (other.encoding() != encoding()) return intersect(other.convert(encoding()));
  return std::visit(
      [&](const auto& s) -> VersionSet {
        using S = std::decay_t<decltype(s)>;
        return VersionSet(s.intersect(std::get<S>(other.rep_)));
      },
      rep_);
}

VersionSet VersionSet::unite(const VersionSet& other) const {
  if (other.encoding() != encoding()) return unite(other.convert(encoding()));
  return std::visit(
      [&](const auto& s) -> VersionSet {
        using S = std::decay_t<decltype(s)>;
        return VersionSet(s.unite(std::get<S>(other.rep_)));
      },
      rep_);
}

std::size_t VersionSet::cardinality() const {
  return std::visit([](const auto& s) { return s.cardinality(); }, rep_);
}

std::size_t VersionSet::scalar_cost() const {
  return std::visit([](const auto& s) { return s.scalar_cost(); }, rep_);
}

bool VersionSet::empty() const {
  return std::visit([](const auto& s) { return s.empty(); }, rep_);
}

std::vector<VersionSeq> VersionSet::members() const {
  return std::visit([](const auto& s) { return s.members(); }, rep_);
}

VersionSet VersionSet::remap(std::span<const VersionSeq> mapping) const {
  std::vector<VersionSeq> mapped;
  mapped.reserve(cardinality());
  for_each([&](VersionSeq v) { mapped.push_back(mapping[v]); });
  return from_members(encoding(), mapped);
}

std::string VersionSet::debug_string() const {
  std::string out;
  if (const auto* ext = std::get_if<ExtensionSet>(&rep_)) {
    out = "{";
    for (std::size_t i = 0; i < ext->ids().size(); ++i) {
      if (i) out += ',';
      out += std::to_string(ext->ids()[i]);
    }
    return out + "}";
  }
  for (const Interval& r : std::get<IntervalSet>(rep_).intervals()) {
    if (!out.empty()) out += ' ';
    out += "[" + std::to_string(r.lo) + "," + std::to_string(r.hi) + "]";
  }
  return out.empty() ? "[]" : out;
}

}  // namespace vg
