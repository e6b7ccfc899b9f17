#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexer.hpp"
#include "prefix_map.hpp"
#include "triple_store.hpp"

// Turtle subset and N-Triples reading/writing.
//
// Supported: @prefix / PREFIX, prefixed names, <absolute IRIs>, `a`, the
// `;` and `,` abbreviations, string literals (with @lang or ^^datatype),
// integers, decimals, booleans and `#` comments. Blank nodes and
// collections are rejected.
namespace ontoguard {

namespace detail {

class TurtleParser {
 public:
  TurtleParser(std::string_view text, Graph& graph) : ts_(text, false), graph_(graph) {}

  void parse() {
    while (ts_.peek().kind != Tok::End) {
      if (ts_.peek().kind == Tok::PrefixDecl) {
        ts_.take();
        prefix_decl();
        ts_.expect_punct('.');
      } else if (ts_.at_keyword("PREFIX")) {
        ts_.take();
        prefix_decl();
      } else {
        statement();
      }
    }
  }

 private:
  void prefix_decl() {
    const Token& t = ts_.peek();
    if (t.kind != Tok::PName || t.text.back() != ':') ts_.fail("expected prefix name ending in ':'");
    std::string prefix = ts_.take().text;
    prefix.pop_back();
    if (ts_.peek().kind != Tok::Iri) ts_.fail("expected IRI in prefix declaration");
    graph_.prefixes().add(prefix, ts_.take().text);
  }

  void statement() {
    Term subject = iri_term("subject");
    predicate_object_list(subject);
    ts_.expect_punct('.');
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      Term predicate = verb();
      while (true) {
        Term object = object_term();
        graph_.insert(Triple(subject, predicate, std::move(object)));
        if (!ts_.at_punct(',')) break;
        ts_.take();
      }
      if (!ts_.at_punct(';')) break;
      while (ts_.at_punct(';')) ts_.take();
      if (ts_.at_punct('.')) break;  // trailing ';'
    }
  }

  Term verb() {
    if (ts_.peek().kind == Tok::Keyword && ts_.peek().text == "a") {
      ts_.take();
      return Term::iri(vocab::rdf_type());
    }
    return iri_term("predicate");
  }

  Term iri_term(const char* role) {
    const Token& t = ts_.peek();
    if (t.kind == Tok::PName && t.text.rfind("_:", 0) == 0) ts_.fail("blank nodes are not supported");
    if (t.kind == Tok::Iri || t.kind == Tok::PName) {
      Token tok = ts_.take();
      return Term::iri(token_to_iri(tok, graph_.prefixes()));
    }
    if (t.kind == Tok::Punct && (t.text == "[" || t.text == "("))
      ts_.fail("blank nodes and collections are not supported");
    if (t.kind == Tok::String || t.kind == Tok::Integer || t.kind == Tok::Decimal)
      ts_.fail(std::string("literal not allowed as ") + role);
    ts_.fail(std::string("expected IRI for ") + role);
  }

  Term object_term() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Iri || t.kind == Tok::PName) return iri_term("object");
    if (t.kind == Tok::Punct && (t.text == "(" || t.text == "[")) ts_.fail("collections are not supported");
    return parse_literal(ts_, graph_.prefixes());
  }

  TokenStream ts_;
  Graph& graph_;
};

inline std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string literal_text(const Term& t, const PrefixMap* prefixes) {
  switch (t.datatype()) {
    case Datatype::Integer:
    case Datatype::Decimal:
    case Datatype::Boolean:
      if (prefixes) return t.value();
      return escape_string(t.value()) + "^^<" + vocab::xsd(datatype_name(t.datatype())) + ">";
    case Datatype::String:
      break;
  }
  std::string out = escape_string(t.value());
  if (!t.lang().empty()) out += "@" + t.lang();
  return out;
}

inline std::string iri_text(const std::string& iri, const PrefixMap* prefixes) {
  if (prefixes)
    if (auto c = prefixes->compact(iri)) return *c;
  return "<" + iri + ">";
}

}  // namespace detail

/// Parses Turtle (or N-Triples) text into `graph`; declared prefixes are
/// added to graph.prefixes(). Throws ParseError with line/column.
inline void parse_turtle_into(std::string_view text, Graph& graph) {
  detail::TurtleParser(text, graph).parse();
}

inline Graph parse_turtle(std::string_view text) {
  Graph g;
  parse_turtle_into(text, g);
  return g;
}

/// Term in Turtle surface syntax, compacted against `prefixes` when given.
inline std::string to_turtle(const Term& t, const PrefixMap* prefixes = nullptr) {
  return t.is_iri() ? detail::iri_text(t.value(), prefixes) : detail::literal_text(t, prefixes);
}

/// Canonical Turtle: prefix lines sorted by name, then statements sorted by
/// (subject, predicate, object) on expanded terms, grouped per subject.
inline std::string serialize_turtle(const Graph& graph, const PrefixMap& prefixes) {
  std::ostringstream out;
  for (const auto& [p, base] : prefixes.entries()) out << "@prefix " << p << ": <" << base << "> .\n";

  auto triples = graph.triples();
  std::sort(triples.begin(), triples.end());
  if (!triples.empty() && !prefixes.empty()) out << '\n';

  const std::string type = vocab::rdf_type();
  for (std::size_t i = 0; i < triples.size();) {
    const Term& s = triples[i].subject;
    out << to_turtle(s, &prefixes);
    bool first_pred = true;
    while (i < triples.size() && triples[i].subject == s) {
      const Term& p = triples[i].predicate;
      out << (first_pred ? " " : " ;\n    ");
      out << (p.value() == type ? std::string("a") : to_turtle(p, &prefixes));
      bool first_obj = true;
      while (i < triples.size() && triples[i].subject == s && triples[i].predicate == p) {
        out << (first_obj ? " " : " , ") << to_turtle(triples[i].object, &prefixes);
        first_obj = false;
        ++i;
      }
      first_pred = false;
    }
    out << " .\n";
  }
  return out.str();
}

/// N-Triples, one statement per line, sorted.
inline std::string serialize_ntriples(const Graph& graph) {
  auto triples = graph.triples();
  std::sort(triples.begin(), triples.end());
  std::string out;
  for (const auto& t : triples) {
    out += to_turtle(t.subject) + " " + to_turtle(t.predicate) + " " + to_turtle(t.object) + " .\n";
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// Loads a .ttl or .nt file into `graph`.
inline void load_turtle_file(const std::string& path, Graph& graph) {
  std::string text = read_text_file(path);
  try {
    parse_turtle_into(text, graph);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column(), e.token());
  }
}

}  // namespace ontoguard
