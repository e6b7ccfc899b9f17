#include <random>

#include <gtest/gtest.h>

#include <ontoguard/query.hpp>
#include <ontoguard/turtle.hpp>

#include "generators.hpp"
#include "oracles.hpp"

using namespace ontoguard;

namespace {

const char* kSample = R"(
@prefix bfo: <http://purl.obolibrary.org/obo/> .
@prefix domain: <https://w3id.org/ontoguard/domain#> .
@prefix img: <https://w3id.org/ontoguard/image/> .
img:i1 a domain:Image ; bfo:BFO_0000051 domain:Tow_Truck , domain:Police_Vehicle ; domain:width 640 .
img:i2 a domain:Image ; bfo:BFO_0000051 domain:Tow_Truck ; domain:width 60 .
img:i3 a domain:Image ; bfo:BFO_0000051 domain:Police_Vehicle ; domain:width 200 .
)";

}  // namespace

TEST(Query, CountWithZeroForBfoSpelling) {
  Graph g = parse_turtle(kSample);
  auto r = evaluate("SELECT (COUNT(?s) AS ?triples) WHERE { ?s bfo:BF0_0000051 domain:Tow_Truck . }", g);
  ASSERT_EQ(r.columns.size(), 1u);
  EXPECT_EQ(r.columns[0].name, "triples");
  EXPECT_EQ(r.count(), 2u);
  EXPECT_EQ(to_tsv(r), "?triples\n2\n");
}

TEST(Query, JoinWithSemicolonAndFilter) {
  Graph g = parse_turtle(kSample);
  auto r = evaluate(
      "SELECT ?i ?w WHERE { ?i a domain:Image ; domain:width ?w . FILTER(?w >= 200) }", g);
  PrefixMap pm = PrefixMap::standard();
  EXPECT_EQ(to_tsv(r, &pm), "?i\t?w\nimg:i1\t640\nimg:i3\t200\n");
}

TEST(Query, DistinctProjectionAndDistinctCount) {
  Graph g = parse_turtle(kSample);
  EXPECT_EQ(evaluate("SELECT DISTINCT ?c WHERE { ?i bfo:BFO_0000051 ?c . }", g).rows.size(), 2u);
  EXPECT_EQ(evaluate("SELECT ?c WHERE { ?i bfo:BFO_0000051 ?c . }", g).rows.size(), 4u);
  EXPECT_EQ(evaluate("SELECT (COUNT(DISTINCT ?c) AS ?n) WHERE { ?i bfo:BFO_0000051 ?c . }", g).count(), 2u);
}

TEST(Query, SelectAllOnEmptyGraphPrintsHeaderOnly) {
  Graph g;
  EXPECT_EQ(to_tsv(evaluate("SELECT * WHERE { ?s ?p ?o . }", g)), "?s\t?p\t?o\n");
  EXPECT_EQ(evaluate("SELECT (COUNT(?s) AS ?n) WHERE { ?s ?p ?o . }", g).count(), 0u);
}

TEST(Query, SharedVariableWithinOnePattern) {
  Graph g;
  const Term a = Term::iri("http://x/a"), b = Term::iri("http://x/b"), p = Term::iri("http://x/p");
  g.insert(a, p, a);
  g.insert(a, p, b);
  auto r = evaluate("SELECT ?x WHERE { ?x <http://x/p> ?x . }", g);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][0], a);
}

TEST(Query, FilterDropsNonNumericBindings) {
  Graph g;
  g.insert(Term::iri("http://x/a"), Term::iri("http://x/p"), Term::literal("10"));
  g.insert(Term::iri("http://x/b"), Term::iri("http://x/p"), Term::integer(10));
  auto r = evaluate("SELECT ?s WHERE { ?s <http://x/p> ?v . FILTER(?v = 10) }", g);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][0].value(), "http://x/b");
}

TEST(Query, ParseErrorsCarryPosition) {
  try {
    parse_query("SELECT WHERE { ?s ?p ?o . }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 8u);
    EXPECT_EQ(e.token(), "WHERE");
  }
  EXPECT_THROW(parse_query("SELECT ?x WHERE { ?s ?p ?o . }"), ParseError);
  EXPECT_THROW(parse_query("SELECT ?s WHERE { ?s ?p ?o . FILTER(?q > 1) }"), ParseError);
  EXPECT_THROW(parse_query("SELECT ?s WHERE { ?s nope:p ?o . }"), ParseError);
  EXPECT_THROW(parse_query("SELECT ?s WHERE { }"), ParseError);
  EXPECT_THROW(parse_query("SELECT ?s WHERE { ?s ?p ?o . "), ParseError);
}

TEST(Query, PrefixDeclarationOverridesDefaults) {
  Graph g;
  g.insert(Term::iri("http://other/s"), Term::iri("http://other/p"), Term::integer(1));
  auto r = evaluate("PREFIX bfo: <http://other/> SELECT ?s WHERE { ?s bfo:p 1 . }", g);
  EXPECT_EQ(r.rows.size(), 1u);
}

TEST(Query, MatchesEnumerationOracle) {
  std::mt19937 rng(2024);
  const auto vocab = gen::small_vocabulary();
  for (int i = 0; i < 300; ++i) {
    auto triples = gen::random_triples(rng, vocab, 120);
    Graph g;
    for (const auto& t : triples) g.insert(t);
    auto q = gen::random_query(rng, vocab);
    auto got = evaluate(q.text, g).rows;
    auto want = oracle::evaluate(q.structured, triples);
    ASSERT_EQ(got, want) << q.text;
  }
}
