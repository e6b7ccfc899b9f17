#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"
#include "vocab.hpp"

namespace ontoguard {

namespace detail {

inline bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

inline bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-';
}

// Local part of a prefixed name: may start with a digit, may not end with '.'.
inline bool is_local_name(std::string_view s) {
  if (s.empty()) return true;
  if (!(is_name_start(s.front()) || (s.front() >= '0' && s.front() <= '9'))) return false;
  for (char c : s)
    if (!is_name_char(c) && c != '.') return false;
  return s.back() != '.';
}

inline bool is_prefix_name(std::string_view s) {
  if (s.empty()) return true;
  if (!is_name_start(s.front())) return false;
  for (char c : s)
    if (!is_name_char(c) && c != '.') return false;
  return s.back() != '.';
}

}  // namespace detail

/// prefix -> absolute IRI base.
class PrefixMap {
 public:
  PrefixMap() = default;

  /// rdf, rdfs, owl, xsd plus the bfo/domain/quality/mls/img project namespaces.
  static PrefixMap standard() {
    PrefixMap m;
    m.add("rdf", std::string(vocab::kRdf));
    m.add("rdfs", std::string(vocab::kRdfs));
    m.add("owl", std::string(vocab::kOwl));
    m.add("xsd", std::string(vocab::kXsd));
    m.add("bfo", std::string(vocab::kObo));
    m.add("domain", std::string(vocab::kDomain));
    m.add("quality", std::string(vocab::kQuality));
    m.add("mls", std::string(vocab::kMls));
    m.add("img", std::string(vocab::kImage));
    return m;
  }

  /// Registers or rebinds a prefix.
  void add(std::string prefix, std::string base) {
    if (!detail::is_prefix_name(prefix)) throw SchemaError("invalid prefix name '" + prefix + "'");
    entries_[std::move(prefix)] = std::move(base);
  }

  /// Adds every entry of `other` not already bound here.
  void merge(const PrefixMap& other) {
    for (const auto& [p, b] : other.entries_) entries_.emplace(p, b);
  }

  bool contains(const std::string& prefix) const { return entries_.count(prefix) != 0; }

  std::optional<std::string> base(const std::string& prefix) const {
    auto it = entries_.find(prefix);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// "p:Local" -> base(p) + "Local". Throws on an unknown prefix.
  std::string expand(std::string_view pname) const {
    auto colon = pname.find(':');
    if (colon == std::string_view::npos) throw SchemaError("not a prefixed name: '" + std::string(pname) + "'");
    std::string prefix(pname.substr(0, colon));
    auto it = entries_.find(prefix);
    if (it == entries_.end()) throw SchemaError("unknown prefix '" + prefix + "'");
    return it->second + std::string(pname.substr(colon + 1));
  }

  /// Shortest prefixed form of `iri`, if some registered base yields a valid local name.
  std::optional<std::string> compact(std::string_view iri) const {
    std::optional<std::string> best;
    std::size_t best_base = 0;
    for (const auto& [p, b] : entries_) {
      if (b.size() < best_base || iri.size() < b.size() || iri.compare(0, b.size(), b) != 0) continue;
      auto local = iri.substr(b.size());
      if (!detail::is_local_name(local)) continue;
      if (!best || b.size() > best_base) {
        best = p + ":" + std::string(local);
        best_base = b.size();
      }
    }
    return best;
  }

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ontoguard
