#pragma once

// Seeded random inputs for property tests: small graphs over a fixed
// vocabulary, basic graph pattern queries rendered as query text, random
// class DAGs, and graphs exercising every literal form of the Turtle writer.

#include <random>
#include <set>
#include <string>
#include <vector>

#include <ontoguard/query.hpp>
#include <ontoguard/triple_store.hpp>

#include "oracles.hpp"

namespace gen {

using ontoguard::Datatype;
using ontoguard::Term;
using ontoguard::Triple;

inline const std::string kBase = "http://example.org/t/";

inline std::size_t pick(std::mt19937& rng, std::size_t n) { return rng() % n; }

struct Vocabulary {
  std::vector<Term> subjects;
  std::vector<Term> predicates;
  std::vector<Term> objects;
};

inline Vocabulary small_vocabulary() {
  Vocabulary v;
  for (const char* n : {"a", "b", "c", "d", "e", "f"}) v.subjects.push_back(Term::iri(kBase + n));
  for (const char* n : {"p", "q", "r"}) v.predicates.push_back(Term::iri(kBase + n));
  v.objects = v.subjects;
  for (int i = -1; i <= 3; ++i) v.objects.push_back(Term::integer(i));
  v.objects.push_back(Term::literal("2.5", Datatype::Decimal));
  v.objects.push_back(Term::literal("x"));
  return v;
}

inline std::vector<Triple> random_triples(std::mt19937& rng, const Vocabulary& v, std::size_t max_triples) {
  std::set<Triple> out;
  const std::size_t n = pick(rng, max_triples + 1);
  for (std::size_t i = 0; i < n; ++i)
    out.insert(Triple(v.subjects[pick(rng, v.subjects.size())], v.predicates[pick(rng, v.predicates.size())],
                      v.objects[pick(rng, v.objects.size())]));
  return {out.begin(), out.end()};
}

struct GeneratedQuery {
  oracle::BgpQuery structured;
  std::string text;
};

inline std::string slot_text(const oracle::Slot& s) {
  if (!s.constant) return "?v" + std::to_string(s.var);
  return ontoguard::to_turtle(*s.constant);
}

/// 1 to 3 patterns over at most 3 variables, optionally with a numeric
/// FILTER, DISTINCT, a projection subset or a COUNT.
inline GeneratedQuery random_query(std::mt19937& rng, const Vocabulary& v) {
  GeneratedQuery g;
  auto& q = g.structured;
  const int patterns = 1 + static_cast<int>(pick(rng, 3));
  std::vector<bool> used(3, false);
  auto slot = [&](const std::vector<Term>& constants) {
    oracle::Slot s;
    if (pick(rng, 100) < 55) {
      s.var = static_cast<int>(pick(rng, 3));
      used[s.var] = true;
    } else {
      s.constant = constants[pick(rng, constants.size())];
    }
    return s;
  };
  std::vector<oracle::Pattern> raw;
  for (int i = 0; i < patterns; ++i) {
    oracle::Pattern p;
    p.s = slot(v.subjects);
    p.p = pick(rng, 100) < 25 ? slot(v.predicates) : oracle::Slot{v.predicates[pick(rng, v.predicates.size())], -1};
    p.o = slot(v.objects);
    raw.push_back(p);
  }
  if (std::none_of(used.begin(), used.end(), [](bool b) { return b; })) {
    raw[0].o = oracle::Slot{std::nullopt, 0};
    used[0] = true;
  }
  // Renumber used variables densely so the oracle enumerates only those.
  std::vector<int> remap(3, -1);
  for (int i = 0; i < 3; ++i)
    if (used[i]) remap[i] = q.var_count++;
  for (auto& p : raw)
    for (auto* s : {&p.s, &p.p, &p.o})
      if (!s->constant) s->var = remap[s->var];
  q.patterns = raw;

  if (pick(rng, 100) < 35) {
    static const oracle::Op ops[] = {oracle::Op::Lt, oracle::Op::Le, oracle::Op::Eq,
                                     oracle::Op::Ne, oracle::Op::Ge, oracle::Op::Gt};
    q.filters.push_back({static_cast<int>(pick(rng, q.var_count)), ops[pick(rng, 6)],
                         static_cast<double>(static_cast<int>(pick(rng, 6)) - 1) + (pick(rng, 3) == 0 ? 0.5 : 0.0)});
  }

  const int mode = static_cast<int>(pick(rng, 4));
  q.distinct = pick(rng, 2) == 0;
  std::string select;
  if (mode == 0) {
    select = "*";
    // SELECT * lists variables in order of first appearance.
    for (const auto& p : q.patterns)
      for (const auto* s : {&p.s, &p.p, &p.o})
        if (!s->constant && std::find(q.projection.begin(), q.projection.end(), s->var) == q.projection.end())
          q.projection.push_back(s->var);
  } else if (mode == 1) {
    for (int i = 0; i < q.var_count; ++i)
      if (pick(rng, 2) == 0 || (q.projection.empty() && i == q.var_count - 1)) q.projection.push_back(i);
    for (int i : q.projection) select += (select.empty() ? "" : " ") + std::string("?v") + std::to_string(i);
  } else {
    q.count = true;
    q.counted = static_cast<int>(pick(rng, q.var_count));
    select = std::string("(COUNT(") + (q.distinct ? "DISTINCT " : "") + "?v" + std::to_string(q.counted) + ") AS ?n)";
  }

  std::string body;
  for (const auto& p : q.patterns) body += slot_text(p.s) + " " + slot_text(p.p) + " " + slot_text(p.o) + " . ";
  for (const auto& f : q.filters) {
    static const char* op_text[] = {"<", "<=", "=", "!=", ">=", ">"};
    char num[32];
    std::snprintf(num, sizeof num, "%g", f.value);
    body += std::string("FILTER(?v") + std::to_string(f.var) + " " + op_text[static_cast<int>(f.op)] + " " + num + ") ";
  }
  g.text = std::string("SELECT ") + (q.distinct && !q.count ? "DISTINCT " : "") + select + " WHERE { " + body + "}";
  return g;
}

/// Random DAG over n nodes: edges only from higher to lower index, so node
/// i's parents are a subset of 0..i-1.
inline std::vector<std::vector<bool>> random_dag(std::mt19937& rng, std::size_t n, int edge_percent) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (static_cast<int>(pick(rng, 100)) < edge_percent) adj[i][j] = true;
  return adj;
}

inline std::string random_string(std::mt19937& rng) {
  static const std::string alphabet = "abcXYZ 019_-\"\\\n\t\r'#@.:;,<>{}\xC3\xA9";
  std::string s;
  const std::size_t n = pick(rng, 8);
  for (std::size_t i = 0; i < n; ++i) {
    char c = alphabet[pick(rng, alphabet.size())];
    if (static_cast<unsigned char>(c) == 0xC3) {
      s += "\xC3\xA9";
      continue;
    }
    if (static_cast<unsigned char>(c) == 0xA9) continue;
    s += c;
  }
  return s;
}

/// Graph mixing prefixable and non-prefixable IRIs with every literal kind.
inline ontoguard::Graph random_turtle_graph(std::mt19937& rng) {
  static const std::vector<std::string> iris = {
      "http://example.org/t/a",       "http://example.org/t/b_2",      "http://example.org/t/with-dash",
      "http://example.org/t/9lead",   "http://example.org/t/dot.mid",  "http://example.org/t/x/y",
      "https://w3id.org/ontoguard/domain#Police_Vehicle",               "http://purl.obolibrary.org/obo/BFO_0000051",
      "urn:uuid:1234",                "http://example.org/other#frag", "http://example.org/t/trail."};
  auto iri = [&] { return Term::iri(iris[pick(rng, iris.size())]); };
  auto object = [&]() -> Term {
    switch (pick(rng, 8)) {
      case 0: return Term::integer(static_cast<long long>(pick(rng, 2000)) - 1000);
      case 1: {
        std::string lex = std::to_string(static_cast<int>(pick(rng, 200)) - 100) + "." + std::to_string(pick(rng, 1000));
        return Term::literal(lex, Datatype::Decimal);
      }
      case 2: return Term::boolean(pick(rng, 2) == 0);
      case 3: return Term::literal(random_string(rng), Datatype::String, pick(rng, 2) ? "en" : "de-AT");
      case 4:
      case 5: return Term::literal(random_string(rng));
      default: return iri();
    }
  };
  ontoguard::Graph g;
  const std::size_t n = pick(rng, 40);
  for (std::size_t i = 0; i < n; ++i) {
    Term p = pick(rng, 5) == 0 ? Term::iri(ontoguard::vocab::rdf_type()) : iri();
    g.insert(iri(), p, object());
  }
  return g;
}

}  // namespace gen
