#include <random>

#include <gtest/gtest.h>

#include <ontoguard/csv.hpp>
#include <ontoguard/turtle.hpp>

#include "generators.hpp"

using namespace ontoguard;

TEST(Turtle, ParsesAbbreviations) {
  auto g = parse_turtle(R"(
    @prefix ex: <http://example.org/t/> .
    PREFIX d: <https://w3id.org/ontoguard/domain#>
    # comment
    ex:a a d:Image ;
         ex:p ex:b , ex:c ;
         ex:n 42 , -1.50 , true ;
         ex:s "hi"@en , "x"^^<http://www.w3.org/2001/XMLSchema#string> , 'single' ;
         .
    <http://example.org/t/b> ex:p """long
string""" .
  )");
  EXPECT_EQ(g.size(), 10u);
  const Term a = Term::iri("http://example.org/t/a");
  EXPECT_TRUE(g.contains(Triple(a, Term::iri(vocab::rdf_type()), Term::iri(vocab::domain("Image")))));
  EXPECT_TRUE(g.contains(Triple(a, Term::iri("http://example.org/t/n"), Term::literal("-1.5", Datatype::Decimal))));
  EXPECT_TRUE(g.contains(Triple(a, Term::iri("http://example.org/t/s"), Term::literal("hi", Datatype::String, "en"))));
  EXPECT_TRUE(g.contains(Triple(Term::iri("http://example.org/t/b"), Term::iri("http://example.org/t/p"),
                                Term::literal("long\nstring"))));
  EXPECT_EQ(g.prefixes().base("ex"), "http://example.org/t/");
}

TEST(Turtle, ReportsPositionOfErrors) {
  try {
    parse_turtle("@prefix ex: <http://example.org/t/> .\nex:a ex:p nope:b .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 11u);
    EXPECT_NE(std::string(e.what()).find("unknown prefix 'nope'"), std::string::npos);
  }
}

TEST(Turtle, RejectsBlankNodesAndCollections) {
  EXPECT_THROW(parse_turtle("_:b <http://x/p> <http://x/o> ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/s> <http://x/p> [ <http://x/q> 1 ] ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/s> <http://x/p> ( 1 2 ) ."), ParseError);
}

TEST(Turtle, RejectsLiteralSubjectAndMissingDot) {
  EXPECT_THROW(parse_turtle("\"s\" <http://x/p> <http://x/o> ."), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/s> <http://x/p> <http://x/o>"), ParseError);
  EXPECT_THROW(parse_turtle("<http://x/s> <http://x/p> \"unterminated ."), ParseError);
}

TEST(Turtle, CanonicalOutputIsSortedAndGrouped) {
  Graph g;
  const Term s = Term::iri("http://example.org/t/s");
  g.insert(s, Term::iri("http://example.org/t/q"), Term::integer(2));
  g.insert(s, Term::iri(vocab::rdf_type()), Term::iri("http://example.org/t/C"));
  g.insert(s, Term::iri("http://example.org/t/q"), Term::integer(1));
  PrefixMap pm;
  pm.add("t", "http://example.org/t/");
  EXPECT_EQ(serialize_turtle(g, pm),
            "@prefix t: <http://example.org/t/> .\n\n"
            "t:s t:q 1 , 2 ;\n"
            "    a t:C .\n");
}

TEST(Turtle, NTriplesSpellsOutDatatypes) {
  Graph g;
  g.insert(Term::iri("http://x/s"), Term::iri("http://x/p"), Term::integer(5));
  EXPECT_EQ(serialize_ntriples(g), "<http://x/s> <http://x/p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
  EXPECT_TRUE(same_triples(parse_turtle(serialize_ntriples(g)), g));
}

TEST(Turtle, RandomGraphsRoundTrip) {
  std::mt19937 rng(5);
  PrefixMap pm = PrefixMap::standard();
  pm.add("t", "http://example.org/t/");
  for (int i = 0; i < 200; ++i) {
    Graph g = gen::random_turtle_graph(rng);
    const std::string ttl = serialize_turtle(g, pm);
    Graph back = parse_turtle(ttl);
    ASSERT_TRUE(same_triples(g, back)) << ttl;
    EXPECT_EQ(serialize_turtle(back, pm), ttl);
    ASSERT_TRUE(same_triples(parse_turtle(serialize_ntriples(g)), g));
  }
}

TEST(Csv, HandlesQuotesCrlfAndBom) {
  auto rows = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\nlast,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x,1", "say \"hi\""}));
  EXPECT_EQ(rows[2].fields, (std::vector<std::string>{"last", ""}));
  EXPECT_EQ(rows[2].line, 4u);
}

TEST(Csv, QuotesFieldsOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("q\""), "\"q\"\"\"");
}
