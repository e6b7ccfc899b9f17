#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lexer.hpp"
#include "prefix_map.hpp"
#include "triple_store.hpp"
#include "turtle.hpp"

// The SPARQL subset used for dataset validation: SELECT over a basic graph
// pattern with optional DISTINCT, a single COUNT aggregate and numeric
// FILTER comparisons.
namespace ontoguard {

struct Variable {
  std::string name;  // without the '?'
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatternTerm s, p, o;
};

enum class CompareOp { Less, LessEqual, Equal, NotEqual, GreaterEqual, Greater };

inline const char* op_text(CompareOp op) {
  switch (op) {
    case CompareOp::Less: return "<";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::Equal: return "=";
    case CompareOp::NotEqual: return "!=";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::Greater: return ">";
  }
  return "?";
}

inline bool compare(double lhs, CompareOp op, double rhs) {
  switch (op) {
    case CompareOp::Less: return lhs < rhs;
    case CompareOp::LessEqual: return lhs <= rhs;
    case CompareOp::Equal: return lhs == rhs;
    case CompareOp::NotEqual: return lhs != rhs;
    case CompareOp::GreaterEqual: return lhs >= rhs;
    case CompareOp::Greater: return lhs > rhs;
  }
  return false;
}

/// FILTER(?var op number)
struct Filter {
  Variable var;
  CompareOp op;
  double value;
};

struct CountAggregate {
  Variable counted;
  Variable alias;
};

struct Query {
  PrefixMap prefixes;
  /// Empty with no aggregate means SELECT *.
  std::vector<Variable> projection;
  std::optional<CountAggregate> aggregate;
  bool distinct = false;
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;

  /// Distinct variables in order of first appearance in the patterns.
  std::vector<Variable> pattern_variables() const {
    std::vector<Variable> out;
    auto add = [&](const PatternTerm& t) {
      if (auto* v = std::get_if<Variable>(&t))
        if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    };
    for (const auto& p : patterns) {
      add(p.s);
      add(p.p);
      add(p.o);
    }
    return out;
  }

  /// Output column names.
  std::vector<Variable> columns() const {
    if (aggregate) return {aggregate->alias};
    if (projection.empty()) return pattern_variables();
    return projection;
  }
};

/// Projected solutions, or the single aggregate row.
struct QueryResult {
  std::vector<Variable> columns;
  std::vector<std::vector<Term>> rows;

  /// Value of a COUNT result.
  std::size_t count() const {
    if (rows.size() != 1 || rows[0].size() != 1 || !rows[0][0].is_numeric())
      throw Error("result is not a single count");
    return static_cast<std::size_t>(std::stoull(rows[0][0].value()));
  }
};

namespace detail {

class QueryParser {
 public:
  QueryParser(std::string_view text, const PrefixMap& defaults) : ts_(text, true) { q_.prefixes = defaults; }

  Query parse() {
    while (ts_.at_keyword("PREFIX") || ts_.peek().kind == Tok::PrefixDecl) {
      bool turtle_style = ts_.take().kind == Tok::PrefixDecl;
      const Token& t = ts_.peek();
      if (t.kind != Tok::PName || t.text.back() != ':') ts_.fail("expected prefix name ending in ':'");
      std::string prefix = ts_.take().text;
      prefix.pop_back();
      if (ts_.peek().kind != Tok::Iri) ts_.fail("expected IRI in prefix declaration");
      q_.prefixes.add(prefix, ts_.take().text);
      if (turtle_style) ts_.expect_punct('.');
    }
    if (!ts_.at_keyword("SELECT")) ts_.fail("expected SELECT");
    ts_.take();
    Token select_end = ts_.peek();
    if (ts_.at_keyword("DISTINCT")) {
      ts_.take();
      q_.distinct = true;
    }
    projection();
    if (ts_.at_keyword("WHERE")) ts_.take();
    ts_.expect_punct('{');
    group();
    ts_.expect_punct('}');
    if (ts_.peek().kind != Tok::End) ts_.fail("unexpected trailing input");
    validate(select_end);
    return std::move(q_);
  }

 private:
  void projection() {
    if (ts_.at_punct('*')) {
      ts_.take();
      return;
    }
    if (ts_.at_punct('(')) {
      ts_.take();
      if (!ts_.at_keyword("COUNT")) ts_.fail("expected COUNT");
      ts_.take();
      ts_.expect_punct('(');
      if (ts_.at_keyword("DISTINCT")) {
        ts_.take();
        q_.distinct = true;
      }
      if (ts_.peek().kind != Tok::Var) ts_.fail("expected variable in COUNT");
      CountAggregate agg;
      agg.counted = Variable{ts_.take().text};
      ts_.expect_punct(')');
      if (!ts_.at_keyword("AS")) ts_.fail("expected AS");
      ts_.take();
      if (ts_.peek().kind != Tok::Var) ts_.fail("expected alias variable");
      agg.alias = Variable{ts_.take().text};
      ts_.expect_punct(')');
      q_.aggregate = agg;
      return;
    }
    while (ts_.peek().kind == Tok::Var) q_.projection.push_back(Variable{ts_.take().text});
    if (q_.projection.empty()) ts_.fail("expected projection");
  }

  void group() {
    while (!ts_.at_punct('}')) {
      if (ts_.peek().kind == Tok::End) ts_.fail("unterminated group");
      if (ts_.at_keyword("FILTER")) {
        filter();
        if (ts_.at_punct('.')) ts_.take();
        continue;
      }
      PatternTerm s = term(false);
      while (true) {
        PatternTerm p = verb();
        while (true) {
          q_.patterns.push_back({s, p, term(true)});
          if (!ts_.at_punct(',')) break;
          ts_.take();
        }
        if (!ts_.at_punct(';')) break;
        while (ts_.at_punct(';')) ts_.take();
        if (ts_.at_punct('.') || ts_.at_punct('}')) break;
      }
      if (ts_.at_punct('.')) ts_.take();
      else if (!ts_.at_punct('}') && !ts_.at_keyword("FILTER")) ts_.fail("expected '.' or '}'");
    }
  }

  void filter() {
    ts_.take();
    ts_.expect_punct('(');
    if (ts_.peek().kind != Tok::Var) ts_.fail("expected variable in FILTER");
    Filter f;
    f.var = Variable{ts_.take().text};
    const Token& op = ts_.peek();
    if (op.kind != Tok::Op) ts_.fail("expected comparison operator");
    static const std::map<std::string, CompareOp> ops{
        {"<", CompareOp::Less},        {"<=", CompareOp::LessEqual},    {"=", CompareOp::Equal},
        {"!=", CompareOp::NotEqual},   {">=", CompareOp::GreaterEqual}, {">", CompareOp::Greater}};
    f.op = ops.at(ts_.take().text);
    Term lit = parse_literal(ts_, q_.prefixes);
    if (!lit.is_numeric()) Lexer::fail(ts_.peek(), "FILTER requires a numeric literal", lit.value());
    f.value = *lit.numeric_value();
    ts_.expect_punct(')');
    q_.filters.push_back(f);
  }

  PatternTerm verb() {
    if (ts_.peek().kind == Tok::Keyword && ts_.peek().text == "a") {
      ts_.take();
      return Term::iri(vocab::rdf_type());
    }
    return term(false);
  }

  PatternTerm term(bool allow_literal) {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Var) return Variable{ts_.take().text};
    if (t.kind == Tok::Iri || t.kind == Tok::PName) {
      Token tok = ts_.take();
      return Term::iri(vocab::normalize_obo(token_to_iri(tok, q_.prefixes)));
    }
    if (!allow_literal) ts_.fail("expected variable or IRI");
    return parse_literal(ts_, q_.prefixes);
  }

  void validate(const Token& select_end) {
    if (q_.patterns.empty()) Lexer::fail(select_end, "query needs at least one triple pattern", select_end.text);
    auto vars = q_.pattern_variables();
    auto known = [&](const Variable& v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); };
    for (const auto& v : q_.projection)
      if (!known(v)) throw ParseError("projected variable ?" + v.name + " does not occur in any pattern", select_end.line, select_end.column, "?" + v.name);
    if (q_.aggregate && !known(q_.aggregate->counted))
      throw ParseError("counted variable ?" + q_.aggregate->counted.name + " does not occur in any pattern", select_end.line, select_end.column, "?" + q_.aggregate->counted.name);
    for (const auto& f : q_.filters)
      if (!known(f.var)) throw ParseError("filtered variable ?" + f.var.name + " does not occur in any pattern", select_end.line, select_end.column, "?" + f.var.name);
  }

  TokenStream ts_;
  Query q_;
};

}  // namespace detail

/// Parses query text. `defaults` pre-binds prefixes (the bundled namespace
/// table), so queries may use bfo:/domain:/quality: without declaring them.
inline Query parse_query(std::string_view text, const PrefixMap& defaults = PrefixMap::standard()) {
  return detail::QueryParser(text, defaults).parse();
}

namespace detail {

// Join state at the id level. Variables are numbered densely.
class Evaluator {
 public:
  Evaluator(const Query& q, const Graph& g) : q_(q), g_(g) {
    vars_ = q.pattern_variables();
    binding_.assign(vars_.size(), kNoTerm);
    for (const auto& p : q.patterns) {
      CompiledPattern cp;
      if (!compile(p.s, cp.pos[0]) || !compile(p.p, cp.pos[1]) || !compile(p.o, cp.pos[2])) {
        impossible_ = true;
        return;
      }
      patterns_.push_back(cp);
    }
    for (const auto& f : q.filters) filters_.push_back({index_of(f.var), f.op, f.value});
  }

  /// Calls emit(binding) for every solution.
  template <typename Emit>
  void run(Emit&& emit) {
    if (impossible_) return;
    std::vector<bool> used(patterns_.size(), false);
    search(used, patterns_.size(), emit);
  }

  std::size_t index_of(const Variable& v) const {
    return static_cast<std::size_t>(std::find(vars_.begin(), vars_.end(), v) - vars_.begin());
  }

 private:
  struct Slot {
    bool is_var = false;
    TermId id = kNoTerm;  // constant id or variable index
  };
  struct CompiledPattern {
    Slot pos[3];
  };
  struct CompiledFilter {
    std::size_t var;
    CompareOp op;
    double value;
  };

  bool compile(const PatternTerm& t, Slot& slot) {
    if (auto* v = std::get_if<Variable>(&t)) {
      slot.is_var = true;
      slot.id = static_cast<TermId>(index_of(*v));
      return true;
    }
    auto id = g_.find(std::get<Term>(t));
    if (!id) return false;
    slot.id = *id;
    return true;
  }

  IdPattern substitute(const CompiledPattern& p) const {
    TermId ids[3];
    for (int i = 0; i < 3; ++i)
      ids[i] = p.pos[i].is_var ? binding_[p.pos[i].id] : p.pos[i].id;
    return {ids[0], ids[1], ids[2]};
  }

  bool filters_hold() const {
    for (const auto& f : filters_) {
      TermId id = binding_[f.var];
      if (id == kNoTerm) continue;
      auto v = g_.term(id).numeric_value();
      if (!v || !compare(*v, f.op, f.value)) return false;
    }
    return true;
  }

  template <typename Emit>
  void search(std::vector<bool>& used, std::size_t remaining, Emit& emit) {
    if (remaining == 0) {
      emit(binding_);
      return;
    }
    // Most selective remaining pattern under the current bindings.
    std::size_t best = patterns_.size();
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (used[i]) continue;
      std::size_t c = g_.count_ids(substitute(patterns_[i]));
      if (best == patterns_.size() || c < best_count) {
        best = i;
        best_count = c;
      }
      if (c == 0) return;
    }
    const CompiledPattern& p = patterns_[best];
    used[best] = true;
    g_.for_each_id(substitute(p), [&](const IdTriple& t) {
      std::size_t newly[3];
      std::size_t n_new = 0;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        if (!p.pos[i].is_var) continue;
        TermId& slot = binding_[p.pos[i].id];
        if (slot == kNoTerm) {
          slot = t[i];
          newly[n_new++] = p.pos[i].id;
        } else if (slot != t[i]) {
          ok = false;  // repeated variable inside one pattern
        }
      }
      if (ok && filters_hold()) search(used, remaining - 1, emit);
      for (std::size_t k = 0; k < n_new; ++k) binding_[newly[k]] = kNoTerm;
    });
    used[best] = false;
  }

  const Query& q_;
  const Graph& g_;
  std::vector<Variable> vars_;
  std::vector<TermId> binding_;
  std::vector<CompiledPattern> patterns_;
  std::vector<CompiledFilter> filters_;
  bool impossible_ = false;
};

}  // namespace detail

/// Evaluates `query` over `graph`. Solutions whose filtered variable is not
/// numeric are dropped. Row order: sorted by projected terms.
inline QueryResult evaluate(const Query& query, const Graph& graph) {
  detail::Evaluator ev(query, graph);
  QueryResult result;
  result.columns = query.columns();

  if (query.aggregate) {
    std::size_t counted = ev.index_of(query.aggregate->counted);
    std::size_t n = 0;
    std::set<TermId> seen;
    ev.run([&](const std::vector<TermId>& b) {
      if (query.distinct)
        seen.insert(b[counted]);
      else
        ++n;
    });
    if (query.distinct) n = seen.size();
    result.rows.push_back({Term::integer(static_cast<long long>(n))});
    return result;
  }

  std::vector<std::size_t> cols;
  for (const auto& v : result.columns) cols.push_back(ev.index_of(v));
  std::vector<std::vector<TermId>> id_rows;
  ev.run([&](const std::vector<TermId>& b) {
    std::vector<TermId> row;
    row.reserve(cols.size());
    for (auto c : cols) row.push_back(b[c]);
    id_rows.push_back(std::move(row));
  });
  for (auto& r : id_rows) {
    std::vector<Term> row;
    for (auto id : r) row.push_back(graph.term(id));
    result.rows.push_back(std::move(row));
  }
  std::sort(result.rows.begin(), result.rows.end());
  if (query.distinct) result.rows.erase(std::unique(result.rows.begin(), result.rows.end()), result.rows.end());
  return result;
}

inline QueryResult evaluate(std::string_view query_text, const Graph& graph,
                            const PrefixMap& defaults = PrefixMap::standard()) {
  return evaluate(parse_query(query_text, defaults), graph);
}

/// Tab-separated result: header of ?names, one row per solution.
inline std::string to_tsv(const QueryResult& r, const PrefixMap* prefixes = nullptr) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += '\t';
    out += "?" + r.columns[i].name;
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      const Term& t = row[i];
      out += t.is_numeric() ? t.value() : to_turtle(t, prefixes);
    }
    out += '\n';
  }
  return out;
}

}  // namespace ontoguard
