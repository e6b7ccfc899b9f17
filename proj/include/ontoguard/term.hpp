#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "error.hpp"

namespace ontoguard {

enum class TermKind : std::uint8_t { Iri, Literal };

enum class Datatype : std::uint8_t { String, Integer, Decimal, Boolean };

inline std::string_view datatype_name(Datatype d) {
  switch (d) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Boolean: return "boolean";
  }
  return "string";
}

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline std::string_view strip_leading_zeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

// Canonical xsd:integer lexical form: optional '-', no leading zeros, "0" for zero.
inline std::optional<std::string> canonical_integer(std::string_view lex) {
  bool neg = false;
  if (!lex.empty() && (lex.front() == '+' || lex.front() == '-')) {
    neg = lex.front() == '-';
    lex.remove_prefix(1);
  }
  if (!all_digits(lex)) return std::nullopt;
  lex = strip_leading_zeros(lex);
  std::string out;
  if (neg && lex != "0") out = "-";
  out += lex;
  return out;
}

// Canonical xsd:decimal lexical form: digits on both sides of '.', trailing
// fraction zeros removed down to one digit.
inline std::optional<std::string> canonical_decimal(std::string_view lex) {
  bool neg = false;
  if (!lex.empty() && (lex.front() == '+' || lex.front() == '-')) {
    neg = lex.front() == '-';
    lex.remove_prefix(1);
  }
  auto dot = lex.find('.');
  std::string_view whole = dot == std::string_view::npos ? lex : lex.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : lex.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;
  if (!frac.empty() && !all_digits(frac)) return std::nullopt;
  if (whole.empty()) whole = "0";
  whole = strip_leading_zeros(whole);
  while (frac.size() > 1 && frac.back() == '0') frac.remove_suffix(1);
  if (frac.empty()) frac = "0";
  std::string out;
  if (neg && !(whole == "0" && frac == "0")) out = "-";
  out += whole;
  out += '.';
  out += frac;
  return out;
}

}  // namespace detail

/// An RDF term: an absolute IRI or a typed/language-tagged literal.
///
/// Numeric and boolean literals are stored in canonical lexical form, so two
/// terms denoting the same value compare equal.
class Term {
 public:
  Term() = default;

  static Term iri(std::string value) {
    if (value.empty()) throw SchemaError("IRI must not be empty");
    for (char c : value)
      if (detail::is_space(c)) throw SchemaError("IRI contains whitespace: '" + value + "'");
    Term t;
    t.kind_ = TermKind::Iri;
    t.value_ = std::move(value);
    return t;
  }

  static Term literal(std::string lexical, Datatype type = Datatype::String,
                      std::string lang = {}) {
    Term t;
    t.kind_ = TermKind::Literal;
    t.datatype_ = type;
    switch (type) {
      case Datatype::String:
        t.value_ = std::move(lexical);
        t.lang_ = std::move(lang);
        return t;
      case Datatype::Integer: {
        auto c = detail::canonical_integer(lexical);
        if (!c) throw SchemaError("invalid integer literal '" + lexical + "'");
        t.value_ = std::move(*c);
        break;
      }
      case Datatype::Decimal: {
        auto c = detail::canonical_decimal(lexical);
        if (!c) throw SchemaError("invalid decimal literal '" + lexical + "'");
        t.value_ = std::move(*c);
        break;
      }
      case Datatype::Boolean:
        if (lexical == "true" || lexical == "1")
          t.value_ = "true";
        else if (lexical == "false" || lexical == "0")
          t.value_ = "false";
        else
          throw SchemaError("invalid boolean literal '" + lexical + "'");
        break;
    }
    if (!lang.empty()) throw SchemaError("language tag only allowed on string literals");
    return t;
  }

  static Term integer(long long v) { return literal(std::to_string(v), Datatype::Integer); }
  static Term boolean(bool v) { return literal(v ? "true" : "false", Datatype::Boolean); }

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
  bool is_literal() const noexcept { return kind_ == TermKind::Literal; }
  /// IRI string or literal lexical form.
  const std::string& value() const noexcept { return value_; }
  Datatype datatype() const noexcept { return datatype_; }
  const std::string& lang() const noexcept { return lang_; }

  bool is_numeric() const noexcept {
    return is_literal() && (datatype_ == Datatype::Integer || datatype_ == Datatype::Decimal);
  }

  /// Numeric value of an integer/decimal literal.
  std::optional<double> numeric_value() const {
    if (!is_numeric()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(value_.data(), value_.data() + value_.size(), v);
    if (ec != std::errc{}) return std::nullopt;
    return v;
  }

  /// Canonical order: IRIs before literals, then lexical form, datatype, language.
  friend auto operator<=>(const Term& a, const Term& b) {
    return std::tie(a.kind_, a.value_, a.datatype_, a.lang_) <=>
           std::tie(b.kind_, b.value_, b.datatype_, b.lang_);
  }
  friend bool operator==(const Term&, const Term&) = default;

 private:
  TermKind kind_ = TermKind::Iri;
  std::string value_;
  Datatype datatype_ = Datatype::String;
  std::string lang_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.value());
    h ^= (static_cast<std::size_t>(t.kind()) << 1) ^ (static_cast<std::size_t>(t.datatype()) << 3);
    if (!t.lang().empty()) h ^= std::hash<std::string>{}(t.lang()) * 31;
    return h;
  }
};

/// A subject-predicate-object statement. Subject and predicate are IRIs.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  Triple() = default;
  Triple(Term s, Term p, Term o)
      : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    if (!subject.is_iri()) throw SchemaError("literal in subject position: '" + subject.value() + "'");
    if (!predicate.is_iri())
      throw SchemaError("literal in predicate position: '" + predicate.value() + "'");
  }

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

}  // namespace ontoguard
