#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "triple_store.hpp"
#include "turtle.hpp"
#include "vocab.hpp"

namespace ontoguard {

/// The eight image quality characteristics with bundled bins.
enum class Characteristic {
  DefocusBlur,
  GaussianBlur,
  HazeBlur,
  MotionBlur,
  Contrast,
  Illumination,
  Occlusion,
  Resolution,
};

inline constexpr Characteristic kAllCharacteristics[] = {
    Characteristic::DefocusBlur, Characteristic::GaussianBlur, Characteristic::HazeBlur,
    Characteristic::MotionBlur,  Characteristic::Contrast,     Characteristic::Illumination,
    Characteristic::Occlusion,   Characteristic::Resolution};

inline std::string characteristic_local_name(Characteristic c) {
  switch (c) {
    case Characteristic::DefocusBlur: return "Defocus_Blur";
    case Characteristic::GaussianBlur: return "Gaussian_Blur";
    case Characteristic::HazeBlur: return "Haze_Blur";
    case Characteristic::MotionBlur: return "Motion_Blur";
    case Characteristic::Contrast: return "Contrast";
    case Characteristic::Illumination: return "Illumination";
    case Characteristic::Occlusion: return "Occlusion";
    case Characteristic::Resolution: return "Resolution";
  }
  return {};
}

inline std::string characteristic_iri(Characteristic c) {
  return vocab::quality(characteristic_local_name(c));
}

/// A named value range of one quality characteristic: [lower, upper).
struct QualityBin {
  std::string iri;
  std::string characteristic;  // characteristic class IRI
  double lower = 0;
  double upper = std::numeric_limits<double>::infinity();
  std::string unit;
  std::string level;  // None | Low | Medium | High
  bool required = true;
  std::optional<double> target_share;

  bool contains(double v) const { return v >= lower && v < upper; }
};

struct Relation {
  std::string iri;
  std::string label;
  std::optional<std::string> inverse;
};

struct QualityCharacteristic {
  std::string iri;
  std::string label;
  std::string unit;
  std::vector<QualityBin> bins;  // ordered by lower bound, pairwise disjoint
};

inline std::string local_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

/// Typed view over loaded ontology graphs.
///
/// Holds the class hierarchy and its transitive closure, the relation
/// vocabulary with inverses, quality bins and intended class shares. Immutable
/// after load_schema().
class OntologySchema {
 public:
  const std::set<std::string>& classes() const noexcept { return classes_; }
  bool has_class(const std::string& iri) const { return classes_.count(iri) != 0; }

  /// Strict ancestors over rdfs:subClassOf.
  const std::set<std::string>& ancestors(const std::string& cls) const {
    auto it = ancestors_.find(cls);
    if (it == ancestors_.end()) throw SchemaError("unknown class '" + cls + "'");
    return it->second;
  }

  /// Strict descendants over rdfs:subClassOf.
  const std::set<std::string>& descendants(const std::string& cls) const {
    auto it = descendants_.find(cls);
    if (it == descendants_.end()) throw SchemaError("unknown class '" + cls + "'");
    return it->second;
  }

  std::set<std::string> direct_subclasses(const std::string& cls) const {
    if (!has_class(cls)) throw SchemaError("unknown class '" + cls + "'");
    auto it = children_.find(cls);
    return it == children_.end() ? std::set<std::string>{} : it->second;
  }

  std::set<std::string> direct_superclasses(const std::string& cls) const {
    if (!has_class(cls)) throw SchemaError("unknown class '" + cls + "'");
    auto it = parents_.find(cls);
    return it == parents_.end() ? std::set<std::string>{} : it->second;
  }

  bool is_a(const std::string& cls, const std::string& ancestor) const {
    return cls == ancestor || (has_class(cls) && ancestors(cls).count(ancestor) != 0);
  }

  const std::map<std::string, Relation>& relations() const noexcept { return relations_; }

  std::optional<std::string> inverse_of(const std::string& relation) const {
    auto it = relations_.find(relation);
    if (it == relations_.end()) return std::nullopt;
    return it->second.inverse;
  }

  /// Roots of the labelled domain taxonomy: direct subclasses of domain:Subject.
  const std::vector<std::string>& domain_roots() const noexcept { return domain_roots_; }

  /// Top-level categories: direct subclasses of the domain roots, sorted.
  const std::vector<std::string>& categories() const noexcept { return categories_; }

  /// Classes a domain label may name: every root and its descendants.
  bool is_domain_label_class(const std::string& cls) const {
    for (const auto& r : domain_roots_)
      if (is_a(cls, r)) return true;
    return false;
  }

  /// class IRI -> target fraction of images.
  const std::map<std::string, double>& intended_distribution() const noexcept { return intended_; }

  std::optional<double> target_share(const std::string& cls) const {
    auto it = intended_.find(cls);
    if (it == intended_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, QualityCharacteristic>& characteristics() const noexcept {
    return characteristics_;
  }

  const QualityCharacteristic& characteristic(const std::string& iri) const {
    auto it = characteristics_.find(iri);
    if (it == characteristics_.end()) throw SchemaError("unknown quality characteristic '" + iri + "'");
    return it->second;
  }
  const QualityCharacteristic& characteristic(Characteristic c) const {
    return characteristic(characteristic_iri(c));
  }

  const QualityBin* find_bin(const std::string& bin_iri) const {
    auto it = bin_index_.find(bin_iri);
    if (it == bin_index_.end()) return nullptr;
    return &characteristics_.at(it->second.first).bins[it->second.second];
  }

  /// The unique bin containing `value`, or std::nullopt when out of range.
  std::optional<QualityBin> bin_for(const std::string& characteristic_iri, double value) const {
    const auto& ch = characteristic(characteristic_iri);
    if (!std::isfinite(value) || value < 0)
      throw ArgumentError("quality value must be finite and non-negative");
    for (const auto& b : ch.bins)
      if (b.contains(value)) return b;
    return std::nullopt;
  }
  std::optional<QualityBin> bin_for(Characteristic c, double value) const {
    return bin_for(characteristic_iri(c), value);
  }

  /// rdfs:label, or the local name when unlabeled.
  std::string label(const std::string& iri) const {
    auto it = labels_.find(iri);
    return it == labels_.end() ? local_name(iri) : it->second;
  }

  /// Merged ontology triples plus materialized subclass closure and inverse
  /// relation triples.
  const Graph& graph() const noexcept { return graph_; }
  const PrefixMap& prefixes() const noexcept { return graph_.prefixes(); }

 private:
  friend OntologySchema load_schema(const std::vector<Graph>& graphs);

  std::set<std::string> classes_;
  std::map<std::string, std::set<std::string>> parents_, children_;
  std::map<std::string, std::set<std::string>> ancestors_, descendants_;
  std::map<std::string, Relation> relations_;
  std::vector<std::string> domain_roots_;
  std::vector<std::string> categories_;
  std::map<std::string, double> intended_;
  std::map<std::string, QualityCharacteristic> characteristics_;
  std::map<std::string, std::pair<std::string, std::size_t>> bin_index_;
  std::map<std::string, std::string> labels_;
  Graph graph_;
};

namespace detail {

inline std::vector<std::string> objects(const Graph& g, const std::string& s, const std::string& p) {
  std::vector<std::string> out;
  for (const auto& t : g.match({Term::iri(s), Term::iri(p), std::nullopt}))
    if (t.object.is_iri()) out.push_back(t.object.value());
  return out;
}

inline std::optional<Term> single_literal(const Graph& g, const std::string& s, const std::string& p) {
  auto ts = g.match({Term::iri(s), Term::iri(p), std::nullopt});
  if (ts.empty()) return std::nullopt;
  if (ts.size() > 1) throw SchemaError("'" + s + "' has more than one <" + p + ">");
  if (!ts[0].object.is_literal()) throw SchemaError("'" + s + "' <" + p + "> must be a literal");
  return ts[0].object;
}

inline std::optional<double> single_number(const Graph& g, const std::string& s, const std::string& p) {
  auto t = single_literal(g, s, p);
  if (!t) return std::nullopt;
  auto v = t->numeric_value();
  if (!v) throw SchemaError("'" + s + "' <" + p + "> must be numeric");
  return v;
}

// Throws with the cycle path if the subclass graph has one.
inline void check_acyclic(const std::set<std::string>& classes,
                          const std::map<std::string, std::set<std::string>>& parents) {
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& c) {
    mark[c] = Mark::Grey;
    stack.push_back(c);
    if (auto it = parents.find(c); it != parents.end()) {
      for (const auto& p : it->second) {
        if (mark[p] == Mark::Grey) {
          auto from = std::find(stack.begin(), stack.end(), p);
          std::string path;
          for (auto i = from; i != stack.end(); ++i) path += local_name(*i) + " -> ";
          path += local_name(p);
          throw SchemaError("subclass cycle: " + path);
        }
        if (mark[p] == Mark::White) visit(p);
      }
    }
    stack.pop_back();
    mark[c] = Mark::Black;
  };
  for (const auto& c : classes)
    if (mark[c] == Mark::White) visit(c);
}

}  // namespace detail

/// Builds the schema from ontology graphs (typically prefixes, domain,
/// quality and ML-schema files). Throws SchemaError on subclass cycles,
/// overlapping bins within a characteristic, or category shares that do not
/// sum to 1.
inline OntologySchema load_schema(const std::vector<Graph>& graphs) {
  OntologySchema s;
  for (const auto& g : graphs) s.graph_.merge(g);
  Graph& g = s.graph_;
  const Term type = Term::iri(vocab::rdf_type());
  const Term subclass = Term::iri(vocab::subclass_of());

  for (const auto& t : g.match({std::nullopt, type, Term::iri(vocab::owl("Class"))}))
    s.classes_.insert(t.subject.value());
  for (const auto& t : g.match({std::nullopt, subclass, std::nullopt})) {
    if (!t.object.is_iri()) throw SchemaError("rdfs:subClassOf object must be an IRI");
    s.classes_.insert(t.subject.value());
    s.classes_.insert(t.object.value());
    s.parents_[t.subject.value()].insert(t.object.value());
    s.children_[t.object.value()].insert(t.subject.value());
  }
  for (const auto& t : g.match({std::nullopt, Term::iri(vocab::rdfs("label")), std::nullopt}))
    if (t.object.is_literal()) s.labels_[t.subject.value()] = t.object.value();

  detail::check_acyclic(s.classes_, s.parents_);

  // Closure by DFS from each class; the hierarchy is small.
  for (const auto& c : s.classes_) {
    auto& anc = s.ancestors_[c];
    std::vector<std::string> todo{c};
    while (!todo.empty()) {
      std::string cur = todo.back();
      todo.pop_back();
      if (auto it = s.parents_.find(cur); it != s.parents_.end())
        for (const auto& p : it->second)
          if (anc.insert(p).second) todo.push_back(p);
    }
    s.descendants_[c];
  }
  for (const auto& [c, anc] : s.ancestors_)
    for (const auto& a : anc) s.descendants_[a].insert(c);

  // Relations and inverses.
  for (const auto& t : g.match({std::nullopt, type, Term::iri(vocab::owl("ObjectProperty"))})) {
    Relation r;
    r.iri = t.subject.value();
    r.label = s.label(r.iri);
    s.relations_[r.iri] = r;
  }
  for (const auto& t : g.match({std::nullopt, Term::iri(vocab::owl("inverseOf")), std::nullopt})) {
    const auto& a = t.subject.value();
    const auto& b = t.object.value();
    s.relations_[a].iri = a;
    s.relations_[b].iri = b;
    s.relations_[a].inverse = b;
    s.relations_[b].inverse = a;
  }

  // Domain taxonomy roots and categories.
  const std::string subject_cls = vocab::domain("Subject");
  if (s.has_class(subject_cls)) {
    for (const auto& r : s.direct_subclasses(subject_cls)) s.domain_roots_.push_back(r);
    std::set<std::string> cats;
    for (const auto& r : s.domain_roots_)
      for (const auto& c : s.direct_subclasses(r)) cats.insert(c);
    s.categories_.assign(cats.begin(), cats.end());
  }

  const std::string share_p = vocab::domain("intendedShare");
  for (const auto& t : g.match({std::nullopt, Term::iri(share_p), std::nullopt})) {
    auto v = t.object.numeric_value();
    if (!v || *v < 0 || *v > 1) throw SchemaError("intendedShare of '" + t.subject.value() + "' must be in [0, 1]");
    s.intended_[t.subject.value()] = *v;
  }
  if (!s.categories_.empty()) {
    std::size_t annotated = 0;
    for (const auto& c : s.categories_) annotated += s.intended_.count(c);
    if (annotated == 0) {
      for (const auto& c : s.categories_) s.intended_[c] = 1.0 / static_cast<double>(s.categories_.size());
    } else if (annotated != s.categories_.size()) {
      throw SchemaError("intendedShare must be given for all categories or none");
    }
    double sum = 0;
    for (const auto& c : s.categories_) sum += s.intended_.at(c);
    if (std::abs(sum - 1.0) > 1e-9)
      throw SchemaError("category intendedShare values sum to " + std::to_string(sum) + ", expected 1");
  }

  // Quality characteristics: leaf classes under quality:Quality_Characteristic.
  const std::string qroot = vocab::quality("Quality_Characteristic");
  if (s.has_class(qroot)) {
    for (const auto& c : s.descendants(qroot)) {
      if (!s.descendants(c).empty()) continue;
      QualityCharacteristic qc;
      qc.iri = c;
      qc.label = s.label(c);
      if (auto u = detail::single_literal(g, c, vocab::quality("unit"))) qc.unit = u->value();
      s.characteristics_[c] = std::move(qc);
    }
  }
  for (auto& [ciri, qc] : s.characteristics_) {
    for (const auto& t : g.match({std::nullopt, type, Term::iri(ciri)})) {
      QualityBin b;
      b.iri = t.subject.value();
      b.characteristic = ciri;
      b.unit = qc.unit;
      auto lo = detail::single_number(g, b.iri, vocab::quality("lowerBound"));
      if (!lo) throw SchemaError("bin '" + b.iri + "' has no quality:lowerBound");
      b.lower = *lo;
      if (auto hi = detail::single_number(g, b.iri, vocab::quality("upperBound"))) b.upper = *hi;
      if (!(b.upper > b.lower)) throw SchemaError("bin '" + b.iri + "' has an empty range");
      if (auto lvl = detail::single_literal(g, b.iri, vocab::quality("level"))) b.level = lvl->value();
      if (auto req = detail::single_literal(g, b.iri, vocab::quality("required")))
        b.required = req->value() == "true";
      b.target_share = detail::single_number(g, b.iri, vocab::quality("targetShare"));
      qc.bins.push_back(std::move(b));
    }
    std::sort(qc.bins.begin(), qc.bins.end(),
              [](const QualityBin& a, const QualityBin& b) { return std::tie(a.lower, a.iri) < std::tie(b.lower, b.iri); });
    for (std::size_t i = 0; i + 1 < qc.bins.size(); ++i)
      if (qc.bins[i].upper > qc.bins[i + 1].lower)
        throw SchemaError("overlapping quality bins '" + local_name(qc.bins[i].iri) + "' and '" +
                          local_name(qc.bins[i + 1].iri) + "'");
    for (std::size_t i = 0; i < qc.bins.size(); ++i) {
      if (s.bin_index_.count(qc.bins[i].iri))
        throw SchemaError("bin '" + qc.bins[i].iri + "' belongs to more than one characteristic");
      s.bin_index_[qc.bins[i].iri] = {ciri, i};
    }
  }

  // Materialize the subclass closure and inverse relation triples.
  for (const auto& [c, anc] : s.ancestors_)
    for (const auto& a : anc) g.insert(Term::iri(c), subclass, Term::iri(a));
  for (const auto& [riri, rel] : s.relations_) {
    if (!rel.inverse) continue;
    const Term inv = Term::iri(*rel.inverse);
    for (const auto& t : g.match({std::nullopt, Term::iri(riri), std::nullopt}))
      if (t.object.is_iri()) g.insert(t.object, inv, t.subject);
  }
  g.seal();
  return s;
}

/// Directory holding prefixes.ttl, domain.ttl, quality.ttl and ml_schema.ttl:
/// $ONTOGUARD_ONTOLOGY_DIR, else the directory configured at build time.
inline std::string default_ontology_dir() {
  if (const char* env = std::getenv("ONTOGUARD_ONTOLOGY_DIR"); env && *env) return env;
#ifdef ONTOGUARD_DEFAULT_ONTOLOGY_DIR
  return ONTOGUARD_DEFAULT_ONTOLOGY_DIR;
#else
  return "ontology";
#endif
}

/// Parses ontology files; a directory contributes its *.ttl files in name order.
inline std::vector<Graph> load_ontology_graphs(const std::vector<std::string>& paths) {
  namespace fs = std::filesystem;
  std::vector<Graph> graphs;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".ttl" || e.path().extension() == ".nt") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw Error("no .ttl files in '" + p + "'");
      for (const auto& f : files) {
        Graph g;
        load_turtle_file(f, g);
        graphs.push_back(std::move(g));
      }
    } else {
      Graph g;
      load_turtle_file(p, g);
      graphs.push_back(std::move(g));
    }
  }
  return graphs;
}

inline OntologySchema load_bundled_schema(const std::string& dir = default_ontology_dir()) {
  return load_schema(load_ontology_graphs({dir}));
}

}  // namespace ontoguard
