#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "prefix_map.hpp"
#include "term.hpp"

namespace ontoguard {

using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = std::numeric_limits<TermId>::max();

/// Interns each distinct term once; ids are dense and stable.
class Dictionary {
 public:
  TermId intern(const Term& t) {
    auto [it, inserted] = ids_.try_emplace(t, static_cast<TermId>(terms_.size()));
    if (inserted) terms_.push_back(t);
    return it->second;
  }

  std::optional<TermId> find(const Term& t) const {
    auto it = ids_.find(t);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const Term& term(TermId id) const { return terms_.at(id); }
  std::size_t size() const noexcept { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
};

/// (s, p, o) with std::nullopt as the wildcard.
struct MatchPattern {
  std::optional<Term> s;
  std::optional<Term> p;
  std::optional<Term> o;
};

/// Id-level pattern; kNoTerm is the wildcard.
struct IdPattern {
  TermId s = kNoTerm;
  TermId p = kNoTerm;
  TermId o = kNoTerm;
};

using IdTriple = std::array<TermId, 3>;

/// In-memory triple store with SPO / POS / OSP indexes.
///
/// Mutations happen before seal(); afterwards the graph is read-only and may
/// be queried from several threads.
class Graph {
 public:
  Graph() = default;

  /// Returns false if the triple was already present.
  bool insert(const Triple& t) {
    require_mutable();
    if (!t.subject.is_iri() || !t.predicate.is_iri())
      throw SchemaError("literal in subject or predicate position");
    IdTriple spo{dict_.intern(t.subject), dict_.intern(t.predicate), dict_.intern(t.object)};
    if (!spo_.insert(spo).second) return false;
    pos_.insert({spo[1], spo[2], spo[0]});
    osp_.insert({spo[2], spo[0], spo[1]});
    return true;
  }

  bool insert(Term s, Term p, Term o) { return insert(Triple(std::move(s), std::move(p), std::move(o))); }

  /// Returns false if the triple was absent. Interned terms are kept.
  bool remove(const Triple& t) {
    require_mutable();
    auto s = dict_.find(t.subject), p = dict_.find(t.predicate), o = dict_.find(t.object);
    if (!s || !p || !o) return false;
    if (spo_.erase({*s, *p, *o}) == 0) return false;
    pos_.erase({*p, *o, *s});
    osp_.erase({*o, *s, *p});
    return true;
  }

  bool contains(const Triple& t) const {
    auto s = dict_.find(t.subject), p = dict_.find(t.predicate), o = dict_.find(t.object);
    return s && p && o && spo_.count({*s, *p, *o}) != 0;
  }

  void seal() noexcept { sealed_ = true; }
  bool sealed() const noexcept { return sealed_; }

  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }

  const Dictionary& dictionary() const noexcept { return dict_; }
  const Term& term(TermId id) const { return dict_.term(id); }
  std::optional<TermId> find(const Term& t) const { return dict_.find(t); }

  PrefixMap& prefixes() noexcept { return prefixes_; }
  const PrefixMap& prefixes() const noexcept { return prefixes_; }

  /// Resolves a term-level pattern. Returns std::nullopt when a bound term is
  /// unknown to the dictionary, in which case nothing can match.
  std::optional<IdPattern> resolve(const MatchPattern& pat) const {
    IdPattern ip;
    if (pat.s) { auto id = dict_.find(*pat.s); if (!id) return std::nullopt; ip.s = *id; }
    if (pat.p) { auto id = dict_.find(*pat.p); if (!id) return std::nullopt; ip.p = *id; }
    if (pat.o) { auto id = dict_.find(*pat.o); if (!id) return std::nullopt; ip.o = *id; }
    return ip;
  }

  /// Calls fn(IdTriple in SPO order) for every match; stops early if fn returns false.
  template <typename Fn>
  void for_each_id(const IdPattern& pat, Fn&& fn) const {
    const bool s = pat.s != kNoTerm, p = pat.p != kNoTerm, o = pat.o != kNoTerm;
    auto emit = [&](const IdTriple& t) -> bool {
      if constexpr (std::is_same_v<std::invoke_result_t<Fn, const IdTriple&>, void>) {
        fn(t);
        return true;
      } else {
        return fn(t);
      }
    };
    if (s && p && o) {
      IdTriple key{pat.s, pat.p, pat.o};
      if (spo_.count(key)) emit(key);
    } else if (s) {
      // (s,*,*) and (s,p,*) on SPO; (s,*,o) on OSP.
      if (o) {
        scan(osp_, pat.o, pat.s, [&](const IdTriple& k) { return emit({k[1], k[2], k[0]}); });
      } else {
        scan(spo_, pat.s, p ? pat.p : kNoTerm, [&](const IdTriple& k) { return emit(k); });
      }
    } else if (p) {
      scan(pos_, pat.p, o ? pat.o : kNoTerm, [&](const IdTriple& k) { return emit({k[2], k[0], k[1]}); });
    } else if (o) {
      scan(osp_, pat.o, kNoTerm, [&](const IdTriple& k) { return emit({k[1], k[2], k[0]}); });
    } else {
      for (const auto& k : spo_)
        if (!emit(k)) return;
    }
  }

  std::size_t count_ids(const IdPattern& pat) const {
    if (pat.s == kNoTerm && pat.p == kNoTerm && pat.o == kNoTerm) return size();
    std::size_t n = 0;
    for_each_id(pat, [&](const IdTriple&) { ++n; });
    return n;
  }

  /// Every triple matching all bound positions. Order is unspecified.
  std::vector<Triple> match(const MatchPattern& pat) const {
    std::vector<Triple> out;
    auto ip = resolve(pat);
    if (!ip) return out;
    for_each_id(*ip, [&](const IdTriple& t) {
      out.emplace_back(dict_.term(t[0]), dict_.term(t[1]), dict_.term(t[2]));
    });
    return out;
  }

  std::size_t count(const MatchPattern& pat) const {
    auto ip = resolve(pat);
    return ip ? count_ids(*ip) : 0;
  }

  /// All triples in SPO id order.
  std::vector<Triple> triples() const { return match({}); }

  /// Inserts every triple of `other` and merges its prefixes.
  void merge(const Graph& other) {
    for (const auto& t : other.triples()) insert(t);
    prefixes_.merge(other.prefixes_);
  }

  /// True when SPO, POS and OSP hold exactly the same statements.
  bool indexes_coherent() const {
    if (pos_.size() != spo_.size() || osp_.size() != spo_.size()) return false;
    for (const auto& k : spo_)
      if (!pos_.count({k[1], k[2], k[0]}) || !osp_.count({k[2], k[0], k[1]})) return false;
    return true;
  }

  /// Set equality on triples (prefix tables ignored).
  friend bool same_triples(const Graph& a, const Graph& b) {
    if (a.size() != b.size()) return false;
    for (const auto& t : a.triples())
      if (!b.contains(t)) return false;
    return true;
  }

 private:
  using Index = std::set<IdTriple>;

  void require_mutable() const {
    if (sealed_) throw SchemaError("graph is sealed");
  }

  // Visits keys of `idx` whose first component is `a` and, if b != kNoTerm,
  // whose second component is `b`.
  template <typename Fn>
  static void scan(const Index& idx, TermId a, TermId b, Fn&& fn) {
    IdTriple lo{a, b == kNoTerm ? 0 : b, 0};
    for (auto it = idx.lower_bound(lo); it != idx.end(); ++it) {
      if ((*it)[0] != a) break;
      if (b != kNoTerm && (*it)[1] != b) break;
      if (!fn(*it)) return;
    }
  }

  Dictionary dict_;
  Index spo_, pos_, osp_;
  PrefixMap prefixes_;
  bool sealed_ = false;
};

}  // namespace ontoguard
