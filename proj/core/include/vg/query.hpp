#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vg/store.hpp"
#include "vg/term.hpp"
#include "vg/version_dag.hpp"

namespace vg::query {

// Index into Query::variables.
using VarId = std::uint32_t;

struct Variable {
  std::string name;      // without the leading '?'
  bool version = false;  // used as a GRAPH name
  bool hidden = false;   // stands for a query blank node; never projected
};

// A triple-pattern position: a constant term or a variable.
struct Slot {
  std::variant<Term, VarId> value;

  bool is_var() const { return std::holds_alternative<VarId>(value); }
  VarId var() const { return std::get<VarId>(value); }
  const Term& term() const { return std::get<Term>(value); }
};

// Which graph a pattern is evaluated against.
struct DefaultGraph {};
struct VersionIri {
  Term iri;
  std::optional<VersionSeq> seq;  // nullopt when the IRI names no version
};
using GraphName = std::variant<DefaultGraph, VersionIri, VarId>;

struct TriplePattern {
  Slot s;
  Slot p;
  Slot o;
  GraphName graph;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Expr {
  enum class Kind { And, Or, Not, Compare, IsHead, Constant };
  Kind kind = Kind::Constant;
  CompareOp op = CompareOp::Eq;
  std::vector<Expr> args;   // And/Or: 2, Not: 1
  std::vector<Slot> operands;  // Compare: 2
  VarId var = 0;            // IsHead
  bool constant = true;     // Constant
};

struct Aggregate {
  enum class Fn { Count, Min, Max };
  Fn fn = Fn::Count;
  bool distinct = false;
  std::optional<VarId> arg;  // nullopt: COUNT(*)
};

struct Projection {
  std::string name;  // output column
  std::variant<VarId, Aggregate> value;
};

struct Query {
  std::map<std::string, std::string> prefixes;
  bool distinct = false;
  std::vector<Projection> projections;
  std::vector<VarId> group_by;
  // Patterns in written order; join order follows it.
  std::vector<TriplePattern> patterns;
  std::vector<Expr> filters;
  std::vector<Variable> variables;

  bool has_aggregates() const;
  std::vector<VarId> version_vars() const;
};

// Parses the SPARQL subset. Throws QueryError with line/column.
Query parse_query(std::string_view text);

enum class VersionDomain { All, Heads };
std::string_view to_string(VersionDomain d);
VersionDomain parse_domain(std::string_view name);

// Result of an evaluation. Rows are sorted by their cells' N-Triples
// serializations; duplicates are kept unless the query says DISTINCT.
struct SolutionTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<Term>>> rows;

  friend bool operator==(const SolutionTable&, const SolutionTable&) = default;
};

// Evaluates every version at once: each matched triple carries its version
// set, joins intersect the sets, and version variables are expanded last.
SolutionTable eval_annotated(const AnnotatedStore& store, const VersionDag& dag, const Query& query,
                             VersionDomain domain = VersionDomain::All);

// Baseline and oracle: materializes each version of the domain and evaluates
// the query over plain triple sets with the version variables fixed.
SolutionTable eval_checkout(const AnnotatedStore& store, const VersionDag& dag, const Query& query,
                            VersionDomain domain = VersionDomain::All);

enum class ResultFormat { Tsv, Csv };
ResultFormat parse_format(std::string_view name);

// TSV: "?name" header, cells in N-Triples syntax, '\n' line ends.
// CSV: bare names, IRIs and lexical forms, RFC 4180 quoting, CRLF line ends.
std::string format_results(const SolutionTable& table, ResultFormat format);

}  // namespace vg::query
