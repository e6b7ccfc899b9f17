#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"
#include "prefix_map.hpp"
#include "term.hpp"

namespace ontoguard::detail {

enum class Tok {
  End,
  Iri,        // <...>, text = IRI
  PName,      // prefix:local, text = as written
  PrefixDecl, // "@prefix"
  Keyword,    // bare word (PREFIX, SELECT, a, true, ...), text = as written
  Var,        // ?x / $x, text = name without sigil
  String,     // text = unescaped value
  Integer,
  Decimal,
  LangTag,    // @en, text = tag
  DataTypeMark,  // ^^
  Punct,      // . ; , { } ( ) *
  Op,         // < <= = != >= >
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Tokenizer shared by the Turtle and query parsers. `query_mode` enables
/// variables and comparison operators.
class Lexer {
 public:
  Lexer(std::string_view text, bool query_mode) : text_(text), query_(query_mode) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];

    if (c == '<') {
      if (!query_ || looks_like_iri()) {
        t.kind = Tok::Iri;
        t.text = lex_iri(t);
        return t;
      }
      advance();
      t.kind = Tok::Op;
      t.text = "<";
      if (peek() == '=') { advance(); t.text = "<="; }
      return t;
    }
    if (query_ && (c == '>' || c == '=' || c == '!')) {
      advance();
      t.kind = Tok::Op;
      t.text = std::string(1, c);
      if (peek() == '=') { advance(); t.text += '='; }
      if (t.text == "!") fail(t, "expected '!='", "!");
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = Tok::String;
      t.text = lex_string(t);
      return t;
    }
    if (c == '@') {
      advance();
      std::string word = take_while([](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-';
      });
      if (word == "prefix") {
        t.kind = Tok::PrefixDecl;
        t.text = "@prefix";
      } else if (!word.empty()) {
        t.kind = Tok::LangTag;
        t.text = word;
      } else {
        fail(t, "expected language tag or @prefix", "@");
      }
      return t;
    }
    if (c == '^') {
      advance();
      if (peek() != '^') fail(t, "expected '^^'", "^");
      advance();
      t.kind = Tok::DataTypeMark;
      t.text = "^^";
      return t;
    }
    if (query_ && (c == '?' || c == '$')) {
      advance();
      t.kind = Tok::Var;
      t.text = take_while([](char ch) { return is_name_char(ch); });
      if (t.text.empty()) fail(t, "empty variable name", std::string(1, c));
      return t;
    }
    if ((c >= '0' && c <= '9') || c == '+' || c == '-' ||
        (c == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] >= '0' && text_[pos_ + 1] <= '9')) {
      return lex_number(t);
    }
    if (c == '.' || c == ';' || c == ',' || c == '{' || c == '}' || c == '(' || c == ')' || c == '*') {
      advance();
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return t;
    }
    if (is_name_start(c) || c == ':') {
      std::string word = take_while([](char ch) { return is_name_char(ch) || ch == '.' || ch == ':'; });
      // A trailing '.' terminates the statement rather than belonging to the name.
      while (!word.empty() && word.back() == '.') {
        word.pop_back();
        --pos_;
        --col_;
      }
      if (word.find(':') != std::string::npos) {
        t.kind = Tok::PName;
      } else {
        t.kind = Tok::Keyword;
      }
      t.text = std::move(word);
      return t;
    }
    fail(t, "unexpected character", std::string(1, c));
    return t;
  }

  [[noreturn]] static void fail(const Token& at, const std::string& what, const std::string& token) {
    throw ParseError(what, at.line, at.column, token);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  template <typename Pred>
  std::string take_while(Pred pred) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (is_space(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  bool looks_like_iri() const {
    for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '>') return i > pos_ + 1;
      if (is_space(c) || c == '<' || c == '"') return false;
    }
    return false;
  }

  std::string lex_iri(const Token& t) {
    advance();  // '<'
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(t, "unterminated IRI", "<" + out);
      char c = text_[pos_];
      if (c == '>') {
        advance();
        break;
      }
      if (is_space(c) || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '`')
        fail(t, "invalid character in IRI", "<" + out);
      if (c == '\\') {
        advance();
        char e = peek();
        if (e != 'u' && e != 'U') fail(t, "invalid IRI escape", "\\" + std::string(1, e));
        advance();
        append_utf8(out, read_hex(t, e == 'u' ? 4 : 8));
        continue;
      }
      out += c;
      advance();
    }
    if (out.empty()) fail(t, "empty IRI", "<>");
    return out;
  }

  std::uint32_t read_hex(const Token& t, int digits) {
    std::uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      char c = peek();
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else fail(t, "invalid hex escape", std::string(1, c));
      v = v * 16 + static_cast<std::uint32_t>(d);
      advance();
    }
    return v;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string lex_string(const Token& t) {
    char quote = text_[pos_];
    bool long_form = peek(1) == quote && peek(2) == quote;
    advance();
    if (long_form) {
      advance();
      advance();
    }
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(t, "unterminated string", std::string(1, quote) + out);
      char c = text_[pos_];
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          advance(); advance(); advance();
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n' || c == '\r') fail(t, "newline in string", std::string(1, quote) + out);
      }
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case 't': out += '\t'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u':
          case 'U':
            advance();
            append_utf8(out, read_hex(t, e == 'u' ? 4 : 8));
            continue;
          default: fail(t, "invalid string escape", "\\" + std::string(1, e));
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
    return out;
  }

  Token lex_number(Token t) {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') advance();
    bool digits = false, dot = false;
    while (peek() >= '0' && peek() <= '9') { advance(); digits = true; }
    if (peek() == '.' && peek(1) >= '0' && peek(1) <= '9') {
      dot = true;
      advance();
      while (peek() >= '0' && peek() <= '9') advance();
      digits = true;
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    if (!digits) fail(t, "malformed number", t.text);
    if (peek() == 'e' || peek() == 'E') fail(t, "double literals are not supported", t.text + "e");
    t.kind = dot ? Tok::Decimal : Tok::Integer;
    return t;
  }

  std::string_view text_;
  bool query_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

/// One-token lookahead over a Lexer.
class TokenStream {
 public:
  TokenStream(std::string_view text, bool query_mode) : lex_(text, query_mode) { cur_ = lex_.next(); }

  const Token& peek() const noexcept { return cur_; }
  Token take() {
    Token t = std::move(cur_);
    cur_ = lex_.next();
    return t;
  }

  bool at_punct(char c) const { return cur_.kind == Tok::Punct && cur_.text.size() == 1 && cur_.text[0] == c; }
  bool at_keyword(std::string_view kw) const {
    if (cur_.kind != Tok::Keyword || cur_.text.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if ((cur_.text[i] | 0x20) != (kw[i] | 0x20)) return false;
    return true;
  }

  void expect_punct(char c) {
    if (!at_punct(c)) fail(std::string("expected '") + c + "'");
    take();
  }

  [[noreturn]] void fail(const std::string& what) const {
    Lexer::fail(cur_, what, cur_.kind == Tok::End ? "end of input" : cur_.text);
  }

 private:
  Lexer lex_;
  Token cur_;
};

inline std::string token_to_iri(const Token& t, const PrefixMap& prefixes) {
  if (t.kind == Tok::Iri) return t.text;
  auto colon = t.text.find(':');
  std::string prefix = t.text.substr(0, colon);
  auto base = prefixes.base(prefix);
  if (!base) Lexer::fail(t, "unknown prefix '" + prefix + "'", t.text);
  return *base + t.text.substr(colon + 1);
}

inline Datatype datatype_from_iri(const Token& at, const std::string& iri) {
  if (iri == vocab::xsd("string")) return Datatype::String;
  if (iri == vocab::xsd("integer")) return Datatype::Integer;
  if (iri == vocab::xsd("decimal")) return Datatype::Decimal;
  if (iri == vocab::xsd("boolean")) return Datatype::Boolean;
  Lexer::fail(at, "unsupported datatype", iri);
}

/// Parses a literal starting at a String/Integer/Decimal/true/false token.
inline Term parse_literal(TokenStream& ts, const PrefixMap& prefixes) {
  Token t = ts.take();
  try {
    switch (t.kind) {
      case Tok::Integer: return Term::literal(t.text, Datatype::Integer);
      case Tok::Decimal: return Term::literal(t.text, Datatype::Decimal);
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") return Term::literal(t.text, Datatype::Boolean);
        break;
      case Tok::String: {
        if (ts.peek().kind == Tok::LangTag) return Term::literal(t.text, Datatype::String, ts.take().text);
        if (ts.peek().kind == Tok::DataTypeMark) {
          ts.take();
          Token dt = ts.take();
          if (dt.kind != Tok::Iri && dt.kind != Tok::PName) Lexer::fail(dt, "expected datatype IRI", dt.text);
          return Term::literal(t.text, datatype_from_iri(dt, token_to_iri(dt, prefixes)));
        }
        return Term::literal(t.text);
      }
      default: break;
    }
  } catch (const SchemaError& e) {
    Lexer::fail(t, e.what(), t.text);
  }
  Lexer::fail(t, "expected literal", t.text);
}

}  // namespace ontoguard::detail
