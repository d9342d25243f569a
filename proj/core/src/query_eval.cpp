#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "vg/query.hpp"

namespace vg::query {
namespace {

// A solution cell: a dictionary term for data variables, a version number
// for version variables.
struct Cell {
  enum class Kind : std::uint8_t { Unbound, Data, Version };
  Kind kind = Kind::Unbound;
  std::uint32_t value = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// One solution over all query variables and how many identical copies of it
// the expanded multiset holds.
struct WeightedRow {
  std::vector<Cell> cells;
  std::uint64_t weight = 1;
};

Term cell_term(const Cell& c, const Dictionary& dict) {
  if (c.kind == Cell::Kind::Version) return Term::iri(version_iri(c.value));
  return dict.resolve(c.value);
}

// Three-valued comparison; nullopt is a type error.
std::optional<bool> compare_terms(CompareOp op, const Term& a, const Term& b) {
  auto ord = compare_values(a, b);
  if (op == CompareOp::Eq || op == CompareOp::Ne) {
    bool eq;
    if (a.is_literal() && b.is_literal()) {
      if (ord == std::partial_ordering::unordered) {
        if (a != b) return std::nullopt;
        eq = true;
      } else {
        eq = ord == std::partial_ordering::equivalent;
      }
    } else {
      eq = a == b;
    }
    return op == CompareOp::Eq ? eq : !eq;
  }
  if (ord == std::partial_ordering::unordered) return std::nullopt;
  switch (op) {
    case CompareOp::Lt: return ord == std::partial_ordering::less;
    case CompareOp::Le: return ord != std::partial_ordering::greater;
    case CompareOp::Gt: return ord == std::partial_ordering::greater;
    case CompareOp::Ge: return ord != std::partial_ordering::less;
    default: return std::nullopt;
  }
}

template <typename DataLookup>
std::optional<bool> eval_compare(const Expr& e, const DataLookup& lookup) {
  auto resolve = [&](const Slot& s) -> Term { return s.is_var() ? lookup(s.var()) : s.term(); };
  return compare_terms(e.op, resolve(e.operands[0]), resolve(e.operands[1]));
}

// ---- shared solution modifiers ---------------------------------------------

bool pairwise_comparable(const std::vector<Term>& values) {
  if (values.empty()) return true;
  bool numeric = std::all_of(values.begin(), values.end(), [](const Term& t) {
    return is_numeric_datatype(t.datatype) && numeric_value(t).has_value();
  });
  if (numeric) return true;
  const Term& first = values.front();
  if (!first.is_literal()) return false;
  return std::all_of(values.begin(), values.end(), [&](const Term& t) {
    return compare_values(first, t) != std::partial_ordering::unordered;
  });
}

// MIN/MAX over distinct values; nullopt when the values are not mutually
// comparable. Ties in value space resolve to the smallest serialization.
std::optional<Term> extreme(const std::vector<Term>& values, bool want_max) {
  if (values.empty() || !pairwise_comparable(values)) return std::nullopt;
  const Term* best = &values.front();
  for (const Term& t : values) {
    auto ord = compare_values(t, *best);
    bool better = want_max ? ord == std::partial_ordering::greater
                           : ord == std::partial_ordering::less;
    if (better ||
        (ord == std::partial_ordering::equivalent && to_ntriples(t) < to_ntriples(*best))) {
      best = &t;
    }
  }
  return *best;
}

struct GroupState {
  std::vector<Cell> key;
  std::vector<std::uint64_t> counts;
  std::vector<std::set<Cell>> seen;  // distinct argument values per aggregate
};

Term integer_term(std::uint64_t n) { return Term::literal(std::to_string(n), std::string(xsd::kInteger)); }

SolutionTable finish(const Query& q, const Dictionary& dict, const std::vector<WeightedRow>& rows) {
  SolutionTable table;
  for (const Projection& p : q.projections) table.header.push_back(p.name);

  if (!q.has_aggregates() && q.group_by.empty()) {
    std::vector<std::vector<Cell>> projected;
    for (const WeightedRow& r : rows) {
      std::vector<Cell> cells;
      for (const Projection& p : q.projections) cells.push_back(r.cells[std::get<VarId>(p.value)]);
      for (std::uint64_t i = 0; i < (q.distinct ? 1 : r.weight); ++i) projected.push_back(cells);
    }
    if (q.distinct) {
      std::sort(projected.begin(), projected.end());
      projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
    }
    for (const auto& cells : projected) {
      std::vector<std::optional<Term>> out;
      for (const Cell& c : cells) {
        out.push_back(c.kind == Cell::Kind::Unbound ? std::nullopt
                                                    : std::optional<Term>(cell_term(c, dict)));
      }
      table.rows.push_back(std::move(out));
    }
  } else {
    std::vector<const Aggregate*> aggs;
    for (const Projection& p : q.projections) {
      if (const auto* a = std::get_if<Aggregate>(&p.value)) aggs.push_back(a);
    }
    std::map<std::vector<Cell>, GroupState> groups;
    for (const WeightedRow& r : rows) {
      std::vector<Cell> key;
      for (VarId g : q.group_by) key.push_back(r.cells[g]);
      auto [it, inserted] = groups.try_emplace(key);
      GroupState& st = it->second;
      if (inserted) {
        st.key = key;
        st.counts.assign(aggs.size(), 0);
        st.seen.resize(aggs.size());
      }
      for (std::size_t i = 0; i < aggs.size(); ++i) {
        const Aggregate& a = *aggs[i];
        Cell arg = a.arg ? r.cells[*a.arg] : Cell{};
        if (a.arg && arg.kind == Cell::Kind::Unbound) continue;
        if (a.fn == Aggregate::Fn::Count && !a.distinct) {
          st.counts[i] += r.weight;
        } else {
          st.seen[i].insert(arg);
        }
      }
    }
    bool only_counts = std::all_of(aggs.begin(), aggs.end(), [](const Aggregate* a) {
      return a->fn == Aggregate::Fn::Count;
    });
    if (groups.empty() && q.group_by.empty() && only_counts) {
      groups.try_emplace({}, GroupState{{}, std::vector<std::uint64_t>(aggs.size(), 0),
                                        std::vector<std::set<Cell>>(aggs.size())});
    }
    for (const auto& [key, st] : groups) {
      std::vector<std::optional<Term>> out;
      bool drop = false;
      std::size_t agg_index = 0;
      for (const Projection& p : q.projections) {
        if (const VarId* v = std::get_if<VarId>(&p.value)) {
          auto pos = std::find(q.group_by.begin(), q.group_by.end(), *v) - q.group_by.begin();
          const Cell& c = key[pos];
          out.push_back(c.kind == Cell::Kind::Unbound ? std::nullopt
                                                      : std::optional<Term>(cell_term(c, dict)));
          continue;
        }
        const Aggregate& a = *aggs[agg_index];
        std::size_t i = agg_index++;
        if (a.fn == Aggregate::Fn::Count) {
          out.push_back(integer_term(a.distinct ? st.seen[i].size() : st.counts[i]));
          continue;
        }
        std::vector<Term> values;
        for (const Cell& c : st.seen[i]) values.push_back(cell_term(c, dict));
        auto best = extreme(values, a.fn == Aggregate::Fn::Max);
        if (!best) {
          drop = true;
          break;
        }
        out.push_back(std::move(*best));
      }
      if (!drop) table.rows.push_back(std::move(out));
    }
    if (q.distinct) {
      std::sort(table.rows.begin(), table.rows.end());
      table.rows.erase(std::unique(table.rows.begin(), table.rows.end()), table.rows.end());
    }
  }

  // Deterministic order: by the tuple of cell serializations.
  std::vector<std::pair<std::vector<std::string>, std::size_t>> keys;
  keys.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::vector<std::string> k;
    for (const auto& c : table.rows[i]) k.push_back(c ? to_ntriples(*c) : std::string());
    keys.emplace_back(std::move(k), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::vector<std::optional<Term>>> sorted;
  sorted.reserve(keys.size());
  for (const auto& [k, i] : keys) sorted.push_back(std::move(table.rows[i]));
  table.rows = std::move(sorted);
  return table;
}

// Version variables whose concrete value is observable in the output.
std::vector<bool> observed_version_vars(const Query& q) {
  std::vector<bool> out(q.variables.size(), false);
  for (const Projection& p : q.projections) {
    if (const VarId* v = std::get_if<VarId>(&p.value)) out[*v] = true;
    if (const Aggregate* a = std::get_if<Aggregate>(&p.value); a && a->arg) out[*a->arg] = true;
  }
  for (VarId g : q.group_by) out[g] = true;
  return out;
}

std::optional<TermId> lookup_constant(const Dictionary& dict, const Slot& s) {
  return dict.find(s.term());
}

// ---- annotated evaluation ----------------------------------------------------

struct AnnotatedBinding {
  std::vector<TermId> data;                       // kNoTerm when unbound
  std::vector<std::optional<VersionSet>> versions;  // per variable, version vars only
};

// Truth of a filter over a binding's version set U, split into the versions
// where it is true and where it is false; the rest is a type error.
struct SplitTruth {
  VersionSet t;
  VersionSet f;
};

class AnnotatedEvaluator {
 public:
  AnnotatedEvaluator(const AnnotatedStore& store, const VersionDag& dag, const Query& q,
                     VersionDomain domain)
      : store_(store), dag_(dag), q_(q), domain_(domain), observed_(observed_version_vars(q)) {
    const auto head_set = dag.heads();
    std::vector<VersionSeq> heads(head_set.begin(), head_set.end());
    heads_ = VersionSet::from_members(store.encoding(), heads);
  }

  SolutionTable run() {
    std::vector<WeightedRow> rows;
    if (dag_.initialized()) {
      for (const AnnotatedBinding& b : join()) expand(b, rows);
    }
    return finish(q_, store_.dictionary(), rows);
  }

 private:
  std::vector<AnnotatedBinding> join() {
    const std::size_t nvars = q_.variables.size();
    std::vector<AnnotatedBinding> current(1);
    current[0].data.assign(nvars, kNoTerm);
    current[0].versions.resize(nvars);
    const VersionSeq main_head = dag_.head(kDefaultBranch);

    for (const TriplePattern& tp : q_.patterns) {
      std::vector<AnnotatedBinding> next;
      for (const AnnotatedBinding& b : current) {
        TriplePatternIds ids;
        bool impossible = false;
        auto bind = [&](const Slot& s, std::optional<TermId>& out) {
          if (s.is_var()) {
            if (b.data[s.var()] != kNoTerm) out = b.data[s.var()];
          } else if (auto id = lookup_constant(store_.dictionary(), s)) {
            out = *id;
          } else {
            impossible = true;
          }
        };
        bind(tp.s, ids.s);
        bind(tp.p, ids.p);
        bind(tp.o, ids.o);
        if (impossible) continue;

        store_.for_each_match(ids, [&](const Triple& t, const VersionSet& vs) {
          std::optional<VersionSet> narrowed;
          if (std::holds_alternative<DefaultGraph>(tp.graph)) {
            if (!vs.contains(main_head)) return;
          } else if (const auto* iri = std::get_if<VersionIri>(&tp.graph)) {
            if (!iri->seq || !vs.contains(*iri->seq)) return;
          } else {
            VarId g = std::get<VarId>(tp.graph);
            if (b.versions[g]) {
              narrowed = b.versions[g]->intersect(vs);
            } else {
              narrowed = domain_ == VersionDomain::Heads ? vs.intersect(heads_) : vs;
            }
            if (narrowed->empty()) return;
          }
          AnnotatedBinding nb = b;
          auto assign = [&](const Slot& s, TermId value) {
            if (!s.is_var()) return true;
            TermId& slot = nb.data[s.var()];
            if (slot != kNoTerm && slot != value) return false;
            slot = value;
            return true;
          };
          if (!assign(tp.s, t.s) || !assign(tp.p, t.p) || !assign(tp.o, t.o)) return;
          if (narrowed) nb.versions[std::get<VarId>(tp.graph)] = std::move(*narrowed);
          next.push_back(std::move(nb));
        });
      }
      current = std::move(next);
      if (current.empty()) break;
    }

    std::vector<AnnotatedBinding> kept;
    for (AnnotatedBinding& b : current) {
      if (apply_filters(b)) kept.push_back(std::move(b));
    }
    return kept;
  }

  Term data_term(const AnnotatedBinding& b, VarId v) const {
    return store_.dictionary().resolve(b.data[v]);
  }

  SplitTruth split(const Expr& e, const AnnotatedBinding& b, const VersionSet& universe) const {
    const Encoding enc = universe.encoding();
    auto constant = [&](std::optional<bool> value) {
      if (!value) return SplitTruth{VersionSet(enc), VersionSet(enc)};
      return *value ? SplitTruth{universe, VersionSet(enc)} : SplitTruth{VersionSet(enc), universe};
    };
    switch (e.kind) {
      case Expr::Kind::Constant: return constant(e.constant);
      case Expr::Kind::Compare:
        return constant(eval_compare(e, [&](VarId v) { return data_term(b, v); }));
      case Expr::Kind::IsHead: {
        VersionSet t = universe.intersect(heads_);
        std::vector<VersionSeq> rest;
        universe.for_each([&](VersionSeq v) {
          if (!heads_.contains(v)) rest.push_back(v);
        });
        return SplitTruth{std::move(t), VersionSet::from_members(enc, rest)};
      }
      case Expr::Kind::Not: {
        SplitTruth inner = split(e.args[0], b, universe);
        return SplitTruth{std::move(inner.f), std::move(inner.t)};
      }
      case Expr::Kind::And: {
        SplitTruth l = split(e.args[0], b, universe);
        SplitTruth r = split(e.args[1], b, universe);
        return SplitTruth{l.t.intersect(r.t), l.f.unite(r.f)};
      }
      case Expr::Kind::Or: {
        SplitTruth l = split(e.args[0], b, universe);
        SplitTruth r = split(e.args[1], b, universe);
        return SplitTruth{l.t.unite(r.t), l.f.intersect(r.f)};
      }
    }
    return constant(std::nullopt);
  }

  static std::optional<VarId> tested_version_var(const Expr& e) {
    if (e.kind == Expr::Kind::IsHead) return e.var;
    for (const Expr& a : e.args) {
      if (auto v = tested_version_var(a)) return v;
    }
    return std::nullopt;
  }

  bool apply_filters(AnnotatedBinding& b) const {
    for (const Expr& f : q_.filters) {
      auto var = tested_version_var(f);
      if (var) {
        VersionSet& u = *b.versions[*var];
        u = split(f, b, u).t;
        if (u.empty()) return false;
      } else {
        // Constant over the versions: evaluate against a one-element universe.
        VersionSet probe = VersionSet::singleton(store_.encoding(), 0);
        if (split(f, b, probe).t.empty()) return false;
      }
    }
    return true;
  }

  // Expands the observable version variables; the others only multiply the
  // row's weight.
  void expand(const AnnotatedBinding& b, std::vector<WeightedRow>& rows) const {
    WeightedRow base;
    base.cells.resize(q_.variables.size());
    std::vector<VarId> expanded;
    for (VarId v = 0; v < q_.variables.size(); ++v) {
      if (!q_.variables[v].version) {
        if (b.data[v] != kNoTerm) base.cells[v] = Cell{Cell::Kind::Data, b.data[v]};
      } else if (observed_[v]) {
        expanded.push_back(v);
      } else {
        base.weight *= b.versions[v]->cardinality();
      }
    }
    expand_from(b, expanded, 0, base, rows);
  }

  void expand_from(const AnnotatedBinding& b, const std::vector<VarId>& vars, std::size_t i,
                   WeightedRow& row, std::vector<WeightedRow>& rows) const {
    if (i == vars.size()) {
      rows.push_back(row);
      return;
    }
    b.versions[vars[i]]->for_each([&](VersionSeq v) {
      row.cells[vars[i]] = Cell{Cell::Kind::Version, v};
      expand_from(b, vars, i + 1, row, rows);
    });
  }

  const AnnotatedStore& store_;
  const VersionDag& dag_;
  const Query& q_;
  VersionDomain domain_;
  std::vector<bool> observed_;
  VersionSet heads_;
};

// ---- checkout evaluation -----------------------------------------------------

// One materialized version with three sorted permutations.
class PlainGraph {
 public:
  explicit PlainGraph(std::vector<Triple> triples) : spo_(std::move(triples)) {
    pos_ = spo_;
    osp_ = spo_;
    std::sort(spo_.begin(), spo_.end());
    std::sort(pos_.begin(), pos_.end(), [](const Triple& a, const Triple& b) {
      return std::tie(a.p, a.o, a.s) < std::tie(b.p, b.o, b.s);
    });
    std::sort(osp_.begin(), osp_.end(), [](const Triple& a, const Triple& b) {
      return std::tie(a.o, a.s, a.p) < std::tie(b.o, b.s, b.p);
    });
  }

  template <typename F>
  void for_each_match(const TriplePatternIds& q, F&& f) const {
    auto emit = [&](auto first, auto last) {
      for (; first != last; ++first) {
        const Triple& t = *first;
        if ((q.s && t.s != *q.s) || (q.p && t.p != *q.p) || (q.o && t.o != *q.o)) continue;
        f(t);
      }
    };
    if (q.s) {
      auto r = std::equal_range(spo_.begin(), spo_.end(), Triple{*q.s, 0, 0},
                                [](const Triple& a, const Triple& b) { return a.s < b.s; });
      emit(r.first, r.second);
    } else if (q.p) {
      auto r = std::equal_range(pos_.begin(), pos_.end(), Triple{0, *q.p, 0},
                                [](const Triple& a, const Triple& b) { return a.p < b.p; });
      emit(r.first, r.second);
    } else if (q.o) {
      auto r = std::equal_range(osp_.begin(), osp_.end(), Triple{0, 0, *q.o},
                                [](const Triple& a, const Triple& b) { return a.o < b.o; });
      emit(r.first, r.second);
    } else {
      emit(spo_.begin(), spo_.end());
    }
  }

 private:
  std::vector<Triple> spo_;
  std::vector<Triple> pos_;
  std::vector<Triple> osp_;
};

class CheckoutEvaluator {
 public:
  CheckoutEvaluator(const AnnotatedStore& store, const VersionDag& dag, const Query& q,
                    VersionDomain domain)
      : store_(store), dag_(dag), q_(q), domain_(domain), heads_(dag.heads()) {}

  SolutionTable run() {
    std::vector<WeightedRow> rows;
    if (dag_.initialized()) {
      std::vector<VersionSeq> domain;
      if (domain_ == VersionDomain::Heads) {
        domain.assign(heads_.begin(), heads_.end());
      } else {
        for (VersionSeq v = 0; v < dag_.size(); ++v) domain.push_back(v);
      }
      auto vars = q_.version_vars();
      std::vector<VersionSeq> assignment(q_.variables.size(), 0);
      assign_from(vars, 0, domain, assignment, rows);
    }
    return finish(q_, store_.dictionary(), rows);
  }

 private:
  void assign_from(const std::vector<VarId>& vars, std::size_t i,
                   const std::vector<VersionSeq>& domain, std::vector<VersionSeq>& assignment,
                   std::vector<WeightedRow>& rows) {
    if (i == vars.size()) {
      evaluate(assignment, rows);
      return;
    }
    for (VersionSeq v : domain) {
      assignment[vars[i]] = v;
      assign_from(vars, i + 1, domain, assignment, rows);
    }
  }

  const PlainGraph* graph(VersionSeq v) {
    auto it = cache_.find(v);
    if (it == cache_.end()) {
      it = cache_.emplace(v, PlainGraph(store_.materialize(dag_, v))).first;
    }
    return &it->second;
  }

  void evaluate(const std::vector<VersionSeq>& assignment, std::vector<WeightedRow>& rows) {
    const std::size_t nvars = q_.variables.size();
    std::vector<std::vector<TermId>> current{std::vector<TermId>(nvars, kNoTerm)};
    for (const TriplePattern& tp : q_.patterns) {
      const PlainGraph* g = nullptr;
      if (std::holds_alternative<DefaultGraph>(tp.graph)) {
        g = graph(dag_.head(kDefaultBranch));
      } else if (const auto* iri = std::get_if<VersionIri>(&tp.graph)) {
        if (iri->seq && dag_.contains(*iri->seq)) g = graph(*iri->seq);
      } else {
        g = graph(assignment[std::get<VarId>(tp.graph)]);
      }
      std::vector<std::vector<TermId>> next;
      if (g) {
        for (const auto& b : current) {
          TriplePatternIds ids;
          bool impossible = false;
          auto bind = [&](const Slot& s, std::optional<TermId>& out) {
            if (s.is_var()) {
              if (b[s.var()] != kNoTerm) out = b[s.var()];
            } else if (auto id = store_.dictionary().find(s.term())) {
              out = *id;
            } else {
              impossible = true;
            }
          };
          bind(tp.s, ids.s);
          bind(tp.p, ids.p);
          bind(tp.o, ids.o);
          if (impossible) continue;
          g->for_each_match(ids, [&](const Triple& t) {
            auto nb = b;
            for (auto [slot, value] : {std::pair{&tp.s, t.s}, {&tp.p, t.p}, {&tp.o, t.o}}) {
              if (!slot->is_var()) continue;
              TermId& cell = nb[slot->var()];
              if (cell != kNoTerm && cell != value) return;
              cell = value;
            }
            next.push_back(std::move(nb));
          });
        }
      }
      current = std::move(next);
      if (current.empty()) return;
    }

    for (const auto& b : current) {
      bool keep = std::all_of(q_.filters.begin(), q_.filters.end(), [&](const Expr& f) {
        return truth(f, b, assignment) == std::optional<bool>(true);
      });
      if (!keep) continue;
      WeightedRow row;
      row.cells.resize(nvars);
      for (VarId v = 0; v < nvars; ++v) {
        if (q_.variables[v].version) {
          row.cells[v] = Cell{Cell::Kind::Version, assignment[v]};
        } else if (b[v] != kNoTerm) {
          row.cells[v] = Cell{Cell::Kind::Data, b[v]};
        }
      }
      rows.push_back(std::move(row));
    }
  }

  std::optional<bool> truth(const Expr& e, const std::vector<TermId>& b,
                            const std::vector<VersionSeq>& assignment) const {
    switch (e.kind) {
      case Expr::Kind::Constant: return e.constant;
      case Expr::Kind::Compare:
        return eval_compare(e, [&](VarId v) { return store_.dictionary().resolve(b[v]); });
      case Expr::Kind::IsHead: return heads_.contains(assignment[e.var]);
      case Expr::Kind::Not: {
        auto x = truth(e.args[0], b, assignment);
        if (!x) return std::nullopt;
        return !*x;
      }
      case Expr::Kind::And: {
        auto l = truth(e.args[0], b, assignment);
        auto r = truth(e.args[1], b, assignment);
        if (l == false || r == false) return false;
        if (!l || !r) return std::nullopt;
        return true;
      }
      case Expr::Kind::Or: {
        auto l = truth(e.args[0], b, assignment);
        auto r = truth(e.args[1], b, assignment);
        if (l == true || r == true) return true;
        if (!l || !r) return std::nullopt;
        return false;
      }
    }
    return std::nullopt;
  }

  const AnnotatedStore& store_;
  const VersionDag& dag_;
  const Query& q_;
  VersionDomain domain_;
  std::set<VersionSeq> heads_;
  std::unordered_map<VersionSeq, PlainGraph> cache_;
};

}  // namespace

SolutionTable eval_annotated(const AnnotatedStore& store, const VersionDag& dag, const Query& query,
                             VersionDomain domain) {
  return AnnotatedEvaluator(store, dag, query, domain).run();
}

SolutionTable eval_checkout(const AnnotatedStore& store, const VersionDag& dag, const Query& query,
                            VersionDomain domain) {
  return CheckoutEvaluator(store, dag, query, domain).run();
}

}  // namespace vg::query
