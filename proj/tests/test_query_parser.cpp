#include <gtest/gtest.h>

#include "vg/error.hpp"
#include "vg/query.hpp"

using namespace vg;
using namespace vg::query;

TEST(QueryParser, BasicSelect) {
  auto q = parse_query(
      "PREFIX ex: <http://ex.org/>\n"
      "SELECT ?v ?s WHERE { GRAPH ?v { ?s a ex:Station ; ex:accessible true . } }");
  ASSERT_EQ(q.patterns.size(), 2u);
  ASSERT_EQ(q.projections.size(), 2u);
  EXPECT_EQ(q.projections[0].name, "v");
  EXPECT_EQ(q.patterns[0].p.term(), Term::iri(std::string(rdf::kType)));
  EXPECT_EQ(q.patterns[1].o.term(), Term::literal("true", std::string(xsd::kBoolean)));
  auto vv = q.version_vars();
  ASSERT_EQ(vv.size(), 1u);
  EXPECT_EQ(q.variables[vv[0]].name, "v");
  EXPECT_TRUE(q.variables[vv[0]].version);
  EXPECT_TRUE(std::holds_alternative<VarId>(q.patterns[0].graph));
}

TEST(QueryParser, LiteralsAndShorthand) {
  auto q = parse_query(
      "SELECT * WHERE { <http://ex.org/s> <http://ex.org/p> 1, 2.5, 1e3, \"x\"@en, "
      "\"y\"^^<http://ex.org/dt>, false . }");
  ASSERT_EQ(q.patterns.size(), 6u);
  EXPECT_EQ(q.patterns[0].o.term(), Term::literal("1", std::string(xsd::kInteger)));
  EXPECT_EQ(q.patterns[1].o.term(), Term::literal("2.5", std::string(xsd::kDecimal)));
  EXPECT_EQ(q.patterns[2].o.term(), Term::literal("1e3", std::string(xsd::kDouble)));
  EXPECT_EQ(q.patterns[3].o.term(), Term::lang_literal("x", "en"));
  EXPECT_EQ(q.patterns[4].o.term(), Term::literal("y", "http://ex.org/dt"));
  EXPECT_TRUE(std::holds_alternative<DefaultGraph>(q.patterns[0].graph));
  EXPECT_TRUE(q.projections.empty());
}

TEST(QueryParser, BlankNodesAreHiddenVariables) {
  auto q = parse_query("SELECT * WHERE { _:b <http://ex.org/p> ?o . _:b <http://ex.org/q> ?z }");
  ASSERT_EQ(q.projections.size(), 2u);
  EXPECT_EQ(q.patterns[0].s.var(), q.patterns[1].s.var());
  EXPECT_TRUE(q.variables[q.patterns[0].s.var()].hidden);
}

TEST(QueryParser, VersionIriGraph) {
  auto q = parse_query("SELECT ?s WHERE { GRAPH <urn:vg:version:3> { ?s ?p ?o } }");
  const auto& g = std::get<VersionIri>(q.patterns[0].graph);
  EXPECT_EQ(g.seq, 3u);
  auto q2 = parse_query("SELECT ?s WHERE { GRAPH <http://ex.org/g> { ?s ?p ?o } }");
  EXPECT_FALSE(std::get<VersionIri>(q2.patterns[0].graph).seq.has_value());
}

TEST(QueryParser, AggregatesAndGroupBy) {
  auto q = parse_query(
      "SELECT ?v (MAX(?h) AS ?max) (COUNT(*) AS ?n) (COUNT(DISTINCT ?b) AS ?nb) WHERE {"
      " GRAPH ?v { ?b <http://ex.org/height> ?h } } GROUP BY ?v");
  ASSERT_TRUE(q.has_aggregates());
  ASSERT_EQ(q.group_by.size(), 1u);
  const auto& max = std::get<Aggregate>(q.projections[1].value);
  EXPECT_EQ(max.fn, Aggregate::Fn::Max);
  const auto& n = std::get<Aggregate>(q.projections[2].value);
  EXPECT_FALSE(n.arg.has_value());
  EXPECT_TRUE(std::get<Aggregate>(q.projections[3].value).distinct);
}

TEST(QueryParser, Filters) {
  auto q = parse_query(
      "SELECT ?v WHERE { GRAPH ?v { ?s <http://ex.org/p> ?o } "
      "FILTER(isHead(?v) && (?o >= 2 || !(?s = <http://ex.org/a>))) }");
  ASSERT_EQ(q.filters.size(), 1u);
  EXPECT_EQ(q.filters[0].kind, Expr::Kind::And);
  EXPECT_EQ(q.filters[0].args[0].kind, Expr::Kind::IsHead);
  EXPECT_EQ(q.filters[0].args[1].kind, Expr::Kind::Or);
}

TEST(QueryParser, KeywordsAreCaseInsensitive) {
  EXPECT_NO_THROW(parse_query("select distinct ?s where { graph ?v { ?s ?p ?o } filter(ishead(?v)) }"));
}

TEST(QueryParser, ErrorsCarryPosition) {
  try {
    parse_query("SELECT ?s\nWHERE { ?s ?p }");
    FAIL();
  } catch (const QueryError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(QueryParser, RejectsUnsupportedAndInvalid) {
  for (const char* bad : {
           "SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?p ?x } }",
           "SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?s",
           "SELECT ?x WHERE { ?s ?p ?o }",
           "SELECT ?s WHERE { ?s ex:p ?o }",
           "SELECT ?s WHERE { GRAPH ?v { ?s ?p ?o } ?v ?p ?o }",
           "SELECT ?s WHERE { GRAPH ?v { ?s ?p ?o } FILTER(?v = 1) }",
           "SELECT ?s WHERE { ?s ?p ?o FILTER(isHead(?s)) }",
           "SELECT ?s WHERE { GRAPH ?v { ?s ?p ?o } GRAPH ?w { ?s ?p ?o } FILTER(isHead(?v) && isHead(?w)) }",
           "SELECT ?s (COUNT(*) AS ?n) WHERE { ?s ?p ?o }",
           "SELECT (COUNT(DISTINCT *) AS ?n) WHERE { ?s ?p ?o }",
           "SELECT (MAX(*) AS ?n) WHERE { ?s ?p ?o }",
           "SELECT (COUNT(*) AS ?s) WHERE { ?s ?p ?o }",
           "SELECT ?s ?s WHERE { ?s ?p ?o }",
           "SELECT * WHERE { ?s ?p ?o } GROUP BY ?s",
           "SELECT ?s WHERE { GRAPH ?v { GRAPH ?w { ?s ?p ?o } } }",
           "SELECT ?s WHERE { ?s ?p \"unterminated }",
           "SELECT ?s WHERE { ?s ?p ?o } trailing",
           "BASE <http://ex.org/> SELECT ?s WHERE { ?s ?p ?o }",
           "SELECT ?s WHERE { \"lit\" ?p ?o }",
       }) {
    EXPECT_THROW(parse_query(bad), QueryError) << bad;
  }
}
