#include "random_instances.hpp"

#include <algorithm>
#include <map>
#include <regex>

namespace vg::fixtures {
namespace {

const std::string kNs = "http://ex.org/";

std::vector<Term> vocabulary_objects() {
  std::vector<Term> out;
  for (int i = 0; i < 4; ++i) out.push_back(Term::iri(kNs + "s" + std::to_string(i)));
  for (int i = 0; i < 4; ++i) {
    out.push_back(Term::literal(std::to_string(i), std::string(xsd::kInteger)));
  }
  out.push_back(Term::literal("2.5", std::string(xsd::kDecimal)));
  out.push_back(Term::literal("a"));
  out.push_back(Term::literal("b"));
  out.push_back(Term::lang_literal("a", "en"));
  out.push_back(Term::literal("true", std::string(xsd::kBoolean)));
  return out;
}

std::vector<Triple> triple_pool(Dictionary& dict, std::mt19937_64& rng, std::size_t max_triples) {
  std::vector<TermId> subjects;
  for (int i = 0; i < 4; ++i) subjects.push_back(dict.intern(Term::iri(kNs + "s" + std::to_string(i))));
  subjects.push_back(dict.intern(Term::blank("n0")));
  std::vector<TermId> predicates;
  for (int i = 0; i < 3; ++i) predicates.push_back(dict.intern(Term::iri(kNs + "p" + std::to_string(i))));
  std::vector<TermId> objects;
  for (const Term& t : vocabulary_objects()) objects.push_back(dict.intern(t));

  std::vector<Triple> all;
  for (TermId s : subjects) {
    for (TermId p : predicates) {
      for (TermId o : objects) all.push_back({s, p, o});
    }
  }
  std::shuffle(all.begin(), all.end(), rng);
  std::size_t n = std::uniform_int_distribution<std::size_t>(10, max_triples)(rng);
  all.resize(std::min(n, all.size()));
  return all;
}

}  // namespace

std::set<Triple> to_set(const std::vector<Triple>& triples) {
  return std::set<Triple>(triples.begin(), triples.end());
}

query::SolutionTable map_versions(query::SolutionTable table, std::span<const VersionSeq> mapping) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::optional<Term>>>> keyed;
  for (auto& row : table.rows) {
    std::vector<std::string> key;
    for (auto& cell : row) {
      if (cell && cell->is_iri()) {
        if (auto seq = parse_version_iri(cell->value); seq && *seq < mapping.size()) {
          cell = Term::iri(version_iri(mapping[*seq]));
        }
      }
      key.push_back(cell ? to_ntriples(*cell) : std::string());
    }
    keyed.emplace_back(std::move(key), std::move(row));
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  table.rows.clear();
  for (auto& [key, row] : keyed) table.rows.push_back(std::move(row));
  return table;
}

std::string map_query_versions(const std::string& text, std::span<const VersionSeq> mapping) {
  static const std::regex iri(R"(<urn:vg:version:(\d+)>)");
  std::string out;
  auto last = text.cbegin();
  for (std::sregex_iterator it(text.begin(), text.end(), iri), end; it != end; ++it) {
    out.append(last, text.cbegin() + it->position());
    std::size_t seq = std::stoul((*it)[1]);
    out += seq < mapping.size() ? "<" + version_iri(mapping[seq]) + ">" : it->str();
    last = text.cbegin() + it->position() + it->length();
  }
  out.append(last, text.cend());
  return out;
}

RandomInstance random_instance(std::mt19937_64& rng, Encoding encoding, const InstanceShape& shape) {
  RandomInstance inst{Repository(encoding), {}, {}};
  auto& store = inst.repo.store;
  auto& dag = inst.repo.dag;
  auto pool = triple_pool(store.dictionary(), rng, shape.max_triples);
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  auto random_delta = [&](const std::set<Triple>& base) {
    Delta d;
    for (const Triple& t : base) {
      if (coin(0.2)) d.removals.insert(t);
    }
    for (const Triple& t : pool) {
      if (!d.removals.contains(t) && coin(base.empty() ? 0.5 : 0.1)) d.additions.insert(t);
    }
    return d;
  };
  auto info = [](VersionSeq seq) {
    CommitInfo i;
    i.message = "commit " + std::to_string(seq);
    i.author = "tester";
    i.timestamp = parse_timestamp("2024-05-01T00:00:00Z") + std::chrono::minutes(seq);
    i.provenance = {"gen@" + std::to_string(seq), seq % 2 ? "tool-a" : ""};
    return i;
  };
  auto commit = [&](const std::vector<VersionSeq>& parents, const std::string& branch) {
    std::set<Triple> base;
    for (VersionSeq p : parents) base.insert(inst.expected[p].begin(), inst.expected[p].end());
    Delta d = random_delta(base);
    VersionSeq v = store.apply_commit(dag, parents, branch, d, info(static_cast<VersionSeq>(inst.expected.size())));
    std::set<Triple> next;
    std::set_difference(base.begin(), base.end(), d.removals.begin(), d.removals.end(),
                        std::inserter(next, next.end()));
    next.insert(d.additions.begin(), d.additions.end());
    inst.expected.push_back(std::move(next));
    inst.deltas.push_back(std::move(d));
    return v;
  };

  const std::size_t n =
      std::uniform_int_distribution<std::size_t>(shape.min_versions, shape.max_versions)(rng);
  commit({}, "main");
  std::vector<std::string> branches{"main"};
  bool merged = false;
  for (std::size_t k = 1; k < n; ++k) {
    const bool last = k + 1 == n;
    std::set<VersionSeq> heads = dag.heads();
    if ((last && shape.require_merge && !merged && heads.size() >= 2) ||
        (!last && heads.size() >= 2 && coin(0.2))) {
      const std::string& target = branches[pick(branches.size())];
      VersionSeq a = dag.head(target);
      std::vector<VersionSeq> others;
      for (VersionSeq h : heads) {
        if (h != a) others.push_back(h);
      }
      std::vector<VersionSeq> parents{a, others[pick(others.size())]};
      if (others.size() > 1 && coin(0.3)) {
        VersionSeq third = others[pick(others.size())];
        if (third != parents[1]) parents.push_back(third);
      }
      commit(parents, target);
      merged = true;
      continue;
    }
    if (k == 1 || coin(0.25)) {
      std::string name = "b" + std::to_string(k);
      dag.create_branch(name, static_cast<VersionSeq>(pick(dag.size())));
      branches.push_back(name);
      commit({dag.head(name)}, name);
      continue;
    }
    const std::string& b = branches[pick(branches.size())];
    commit({dag.head(b)}, b);
  }
  return inst;
}

std::string random_query(std::mt19937_64& rng, const Repository& repo) {
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const Dictionary& dict = repo.store.dictionary();
  const auto all = repo.store.scan(AnnotatedStore::Order::SPO);
  const std::size_t versions = repo.dag.size();
  if (all.empty()) return "SELECT * WHERE { GRAPH ?v { ?s ?p ?o } }";

  // Patterns are generalized from stored triples; a term turned into a
  // variable keeps that variable everywhere, which produces the joins.
  std::map<TermId, std::string> var_of;
  std::vector<std::string> used;
  std::vector<std::string> values;  // literal constants seen in chosen triples
  const std::vector<std::string> names{"?a", "?b", "?c", "?d"};
  auto render = [&](TermId id, double var_p) {
    const Term& t = dict.resolve(id);
    auto it = var_of.find(id);
    if (it != var_of.end() && coin(0.85)) return it->second;
    if (it == var_of.end() && var_of.size() < names.size() && coin(var_p)) {
      std::string v = names[var_of.size()];
      var_of.emplace(id, v);
      return v;
    }
    return t.is_blank() ? std::string("_:x") : to_ntriples(t);
  };

  std::vector<std::string> version_vars;
  std::string where;
  const std::size_t npatterns = 1 + pick(3);
  std::vector<Triple> chosen;
  for (std::size_t i = 0; i < npatterns; ++i) {
    Triple t = all[pick(all.size())].first;
    if (!chosen.empty() && coin(0.7)) {
      // Prefer a triple that shares a term with an earlier one.
      std::vector<Triple> linked;
      for (const auto& [u, vs] : all) {
        for (const Triple& c : chosen) {
          if (u != c && (u.s == c.s || u.s == c.o || u.o == c.s || u.o == c.o)) {
            linked.push_back(u);
            break;
          }
        }
      }
      if (!linked.empty()) t = linked[pick(linked.size())];
    }
    chosen.push_back(t);
    if (dict.resolve(t.o).is_literal()) values.push_back(to_ntriples(dict.resolve(t.o)));
    std::string pattern;
    if (coin(0.1)) {
      // Occasionally a pattern that may match nothing at all.
      pattern = names[pick(names.size())] + " <http://ex.org/p" + std::to_string(pick(3)) + "> \"a\"";
    } else {
      pattern = render(t.s, 0.6) + " " + render(t.p, 0.15) + " " + render(t.o, 0.6);
    }
    double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.6) {
      version_vars.push_back("?v");
      where += "GRAPH ?v { " + pattern + " } ";
    } else if (r < 0.75) {
      version_vars.push_back("?w");
      where += "GRAPH ?w { " + pattern + " } ";
    } else if (r < 0.88) {
      where += "GRAPH <urn:vg:version:" + std::to_string(pick(versions + 1)) + "> { " + pattern + " } ";
    } else {
      where += pattern + " . ";
    }
  }
  std::sort(version_vars.begin(), version_vars.end());
  version_vars.erase(std::unique(version_vars.begin(), version_vars.end()), version_vars.end());
  used.clear();
  for (const auto& n : names) {
    if (where.find(n) != std::string::npos) used.push_back(n);
  }
  values.insert(values.end(), {"1", "2.5", "\"a\"", "<http://ex.org/s0>", "true"});

  if (coin(0.5)) {
    std::vector<std::string> parts;
    if (!used.empty() && coin(0.7)) {
      static const std::vector<std::string> ops{"=", "!=", "<", "<=", ">", ">="};
      std::string lhs = used[pick(used.size())];
      std::string rhs = coin(0.25) ? used[pick(used.size())] : values[pick(values.size())];
      parts.push_back(lhs + " " + ops[pick(ops.size())] + " " + rhs);
    }
    if (!version_vars.empty() && coin(0.6)) {
      std::string v = version_vars[pick(version_vars.size())];
      parts.push_back(coin(0.3) ? "!isHead(" + v + ")" : "isHead(" + v + ")");
    }
    if (!parts.empty()) {
      std::string expr = parts[0];
      if (parts.size() == 2) expr = "(" + parts[0] + (coin(0.5) ? " && " : " || ") + parts[1] + ")";
      if (coin(0.15)) expr = "!(" + expr + ")";
      where += "FILTER(" + expr + ") ";
    }
  }

  std::vector<std::string> visible = used;
  visible.insert(visible.end(), version_vars.begin(), version_vars.end());
  std::string select;
  double shape = std::uniform_real_distribution<double>(0, 1)(rng);
  std::string group;
  if (visible.empty() || shape < 0.15) {
    select = "* ";
  } else if (shape < 0.7) {
    if (coin(0.3)) select = "DISTINCT ";
    std::vector<std::string> cols = visible;
    std::shuffle(cols.begin(), cols.end(), rng);
    cols.resize(1 + pick(cols.size()));
    for (const auto& c : cols) select += c + " ";
  } else {
    std::vector<std::string> aggs;
    if (coin(0.6)) aggs.push_back("(COUNT(*) AS ?n)");
    if (!used.empty() && coin(0.5)) {
      std::string v = used[pick(used.size())];
      aggs.push_back(std::string("(") + (coin(0.5) ? "MAX" : "MIN") + "(" + v + ") AS ?m)");
    }
    if (!used.empty() && coin(0.3)) aggs.push_back("(COUNT(DISTINCT " + used[pick(used.size())] + ") AS ?k)");
    if (aggs.empty()) aggs.push_back("(COUNT(*) AS ?n)");
    if (coin(0.5)) {
      std::string g = visible[pick(visible.size())];
      select = g + " ";
      group = " GROUP BY " + g;
    }
    for (const auto& a : aggs) select += a + " ";
  }
  return "PREFIX ex: <http://ex.org/>\nSELECT " + select + "WHERE { " + where + "}" + group;
}

}  // namespace vg::fixtures
