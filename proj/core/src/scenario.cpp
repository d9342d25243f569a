#include "vg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "vg/error.hpp"

namespace vg::bench {

void ScenarioParams::validate() const {
  if (buildings < 1 || stations < 1 || versions < 1) {
    throw ValidationError("scenario counts must be at least 1");
  }
  if (!(branch_prob >= 0.0 && branch_prob <= 1.0)) {
    throw ValidationError("branch probability must lie in [0, 1]");
  }
  if (!(churn >= 0.0 && churn <= 1.0)) throw ValidationError("churn must lie in [0, 1]");
}

std::string ScenarioParams::id() const {
  std::ostringstream out;
  out << "s" << seed << "-b" << buildings << "-st" << stations << "-v" << versions << "-bp"
      << branch_prob << "-c" << churn;
  return out.str();
}

std::size_t edits_per_commit(const ScenarioParams& p) {
  const double graph = 2.0 * static_cast<double>(p.buildings + p.stations);
  auto edits = static_cast<std::size_t>(std::ceil(p.churn * graph - 1e-9));
  return std::min(edits, p.buildings + p.stations);
}

namespace {

// Heights are kept in tenths of a metre so the lexical form is exact.
struct CityState {
  std::vector<int> height_dm;
  std::vector<bool> accessible;
};

std::string format_height(int dm) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d.%d", dm / 10, dm % 10);
  return buf;
}

class CityBuilder {
 public:
  CityBuilder(const ScenarioParams& p, AnnotatedStore& store) : dict_(store.dictionary()) {
    const std::string ns(kCityNs);
    type_ = dict_.intern(Term::iri(std::string(rdf::kType)));
    building_class_ = dict_.intern(Term::iri(ns + "Building"));
    station_class_ = dict_.intern(Term::iri(ns + "MetroStation"));
    height_ = dict_.intern(Term::iri(ns + "height"));
    accessible_ = dict_.intern(Term::iri(ns + "accessible"));
    yes_ = dict_.intern(Term::literal("true", std::string(xsd::kBoolean)));
    no_ = dict_.intern(Term::literal("false", std::string(xsd::kBoolean)));
    for (std::size_t i = 0; i < p.buildings; ++i) {
      buildings_.push_back(dict_.intern(Term::iri(ns + "building" + std::to_string(i))));
    }
    for (std::size_t i = 0; i < p.stations; ++i) {
      stations_.push_back(dict_.intern(Term::iri(ns + "station" + std::to_string(i))));
    }
  }

  std::set<Triple> triples(const CityState& s) {
    std::set<Triple> out;
    for (std::size_t i = 0; i < buildings_.size(); ++i) {
      out.insert({buildings_[i], type_, building_class_});
      out.insert({buildings_[i], height_, height_term(s.height_dm[i])});
    }
    for (std::size_t i = 0; i < stations_.size(); ++i) {
      out.insert({stations_[i], type_, station_class_});
      out.insert({stations_[i], accessible_, s.accessible[i] ? yes_ : no_});
    }
    return out;
  }

 private:
  TermId height_term(int dm) {
    return dict_.intern(Term::literal(format_height(dm), std::string(xsd::kDecimal)));
  }

  Dictionary& dict_;
  TermId type_, building_class_, station_class_, height_, accessible_, yes_, no_;
  std::vector<TermId> buildings_;
  std::vector<TermId> stations_;
};

Delta diff(const std::set<Triple>& from, const std::set<Triple>& to) {
  Delta d;
  std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                      std::inserter(d.additions, d.additions.end()));
  std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                      std::inserter(d.removals, d.removals.end()));
  return d;
}

}  // namespace

Repository generate_repository(const ScenarioParams& p, Encoding encoding) {
  p.validate();
  Repository repo(encoding);
  CityBuilder city(p, repo.store);
  std::mt19937_64 rng(p.seed);
  auto uniform = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  const auto epoch = parse_timestamp("2024-01-01T00:00:00Z");
  auto info_for = [&](VersionSeq seq, const std::string& message) {
    CommitInfo info;
    info.message = message;
    info.author = "city-generator";
    info.timestamp = epoch + std::chrono::hours(seq);
    info.provenance.code_ref = "generate seed=" + std::to_string(p.seed);
    info.provenance.tool = "vg bench";
    return info;
  };

  CityState root;
  for (std::size_t i = 0; i < p.buildings; ++i) {
    root.height_dm.push_back(100 + static_cast<int>(pick(900)));
  }
  for (std::size_t i = 0; i < p.stations; ++i) root.accessible.push_back(uniform() < 0.5);

  std::vector<CityState> states{root};
  Delta root_delta;
  root_delta.additions = city.triples(root);
  repo.store.apply_commit(repo.dag, {}, kDefaultBranch, root_delta, info_for(0, "initial city"));

  const std::size_t edits = edits_per_commit(p);
  const std::size_t entities = p.buildings + p.stations;
  std::vector<std::string> open_branches;
  std::size_t branch_counter = 0;

  auto edit = [&](CityState s) {
    std::vector<std::size_t> order(entities);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < edits; ++k) {
      std::size_t e = order[k];
      if (e < p.buildings) {
        int delta = 5 + static_cast<int>(pick(46));
        if (uniform() < 0.5 && s.height_dm[e] - delta >= 10) delta = -delta;
        s.height_dm[e] += delta;
      } else {
        s.accessible[e - p.buildings] = !s.accessible[e - p.buildings];
      }
    }
    return s;
  };

  for (std::size_t k = 1; k < p.versions; ++k) {
    const auto seq = static_cast<VersionSeq>(k);
    const VersionSeq main_head = repo.dag.head(kDefaultBranch);
    std::vector<VersionSeq> parents;
    std::string branch;
    CityState next;
    std::string message;

    if (uniform() < p.branch_prob) {
      if (!open_branches.empty() && uniform() < 0.5) {
        branch = open_branches[pick(open_branches.size())];
        message = "continue scenario " + branch;
      } else {
        branch = "scenario-" + std::to_string(++branch_counter);
        repo.dag.create_branch(branch, main_head);
        open_branches.push_back(branch);
        message = "start scenario " + branch;
      }
      VersionSeq parent = repo.dag.head(branch);
      parents = {parent};
      next = edit(states[parent]);
    } else if (!open_branches.empty() && uniform() < 0.25) {
      std::size_t which = pick(open_branches.size());
      branch = std::string(kDefaultBranch);
      VersionSeq side = repo.dag.head(open_branches[which]);
      parents = {main_head, side};
      message = "merge " + open_branches[which];
      open_branches.erase(open_branches.begin() + static_cast<std::ptrdiff_t>(which));
      // The merged city adopts the scenario's values, then keeps evolving.
      next = edit(states[side]);
    } else {
      branch = std::string(kDefaultBranch);
      parents = {main_head};
      message = "update city";
      next = edit(states[main_head]);
    }

    std::set<Triple> inherited;
    for (VersionSeq parent : parents) {
      auto t = city.triples(states[parent]);
      inherited.insert(t.begin(), t.end());
    }
    Delta delta = diff(inherited, city.triples(next));
    repo.store.apply_commit(repo.dag, parents, branch, delta, info_for(seq, message));
    states.push_back(std::move(next));
  }
  return repo;
}

Repository generate(const ScenarioParams& params, const std::filesystem::path& outdir) {
  Repository repo = generate_repository(params);
  save_repository(repo, outdir);
  return repo;
}

}  // namespace vg::bench
