#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "ontology.hpp"
#include "query.hpp"
#include "triple_store.hpp"
#include "vocab.hpp"

namespace ontoguard {

struct ProfileOptions {
  /// Count bounding boxes (domain:depicts) instead of distinct images.
  bool count_boxes = false;
};

struct DatasetProfile {
  std::size_t total_images = 0;
  bool count_boxes = false;
  /// Domain label class IRI -> distinct-image count (box count with count_boxes).
  std::map<std::string, std::size_t> class_counts;
  /// Characteristic IRI -> bin IRI -> distinct-image count.
  std::map<std::string, std::map<std::string, std::size_t>> quality_counts;
  /// Characteristic IRI -> images whose measurement fell outside every bin.
  std::map<std::string, std::size_t> out_of_range;

  std::size_t class_count(const std::string& cls) const {
    auto it = class_counts.find(cls);
    return it == class_counts.end() ? 0 : it->second;
  }

  std::size_t bin_count(const QualityBin& bin) const {
    auto ch = quality_counts.find(bin.characteristic);
    if (ch == quality_counts.end()) return 0;
    auto it = ch->second.find(bin.iri);
    return it == ch->second.end() ? 0 : it->second;
  }
};

namespace detail {

inline std::size_t count_query(const std::string& text, const Graph& graph) {
  auto result = evaluate(text, graph);
  return static_cast<std::size_t>(result.rows.at(0).at(0).numeric_value().value());
}

}  // namespace detail

/// Per-class and per-bin counts of a dataset knowledge graph, one COUNT query
/// per class and bin.
///
/// Throws SchemaError when an image has_part object is neither a domain label
/// class nor a quality bin of `schema` (graph built against another
/// ontology), or when a characteristic's bins plus out-of-range images do not
/// partition the image set.
inline DatasetProfile profile(const Graph& graph, const OntologySchema& schema, const ProfileOptions& opts = {}) {
  DatasetProfile prof;
  prof.count_boxes = opts.count_boxes;

  const Term image_cls = Term::iri(vocab::domain("Image"));
  const Term type = Term::iri(vocab::rdf_type());
  const Term has_part = Term::iri(vocab::has_part());
  for (const auto& t : graph.match({std::nullopt, has_part, std::nullopt})) {
    if (!graph.contains(Triple(t.subject, type, image_cls))) continue;
    const auto& o = t.object;
    if (o.is_iri() && (schema.is_domain_label_class(o.value()) || schema.find_bin(o.value()))) continue;
    if (o.is_iri() && schema.has_class(o.value())) continue;
    throw SchemaError("namespace mismatch: " + to_turtle(t.subject, &schema.prefixes()) +
                      " has part " + to_turtle(o, &schema.prefixes()) + ", which the ontology does not define");
  }

  prof.total_images = detail::count_query("SELECT (COUNT(?i) AS ?n) WHERE { ?i a domain:Image . }", graph);

  std::vector<std::string> label_classes;
  for (const auto& root : schema.domain_roots()) {
    label_classes.push_back(root);
    for (const auto& d : schema.descendants(root)) label_classes.push_back(d);
  }
  for (const auto& cls : label_classes) {
    std::string q = opts.count_boxes
                        ? "SELECT (COUNT(DISTINCT ?b) AS ?n) WHERE { ?i a domain:Image ; domain:hasBox ?b . ?b domain:depicts <" + cls + "> . }"
                        : "SELECT (COUNT(DISTINCT ?i) AS ?n) WHERE { ?i a domain:Image ; bfo:BFO_0000051 <" + cls + "> . }";
    prof.class_counts[cls] = detail::count_query(q, graph);
    if (!opts.count_boxes && prof.class_counts[cls] > prof.total_images)
      throw SchemaError("class count exceeds image count for " + cls);
  }

  for (const auto& [ciri, ch] : schema.characteristics()) {
    std::size_t sum = 0;
    auto& bins = prof.quality_counts[ciri];
    for (const auto& bin : ch.bins) {
      bins[bin.iri] = detail::count_query(
          "SELECT (COUNT(DISTINCT ?i) AS ?n) WHERE { ?i a domain:Image ; bfo:BFO_0000051 <" + bin.iri + "> . }", graph);
      sum += bins[bin.iri];
    }
    prof.out_of_range[ciri] = detail::count_query(
        "SELECT (COUNT(DISTINCT ?i) AS ?n) WHERE { ?i a domain:Image ; quality:outOfRange <" + ciri + "> . }", graph);
    sum += prof.out_of_range[ciri];
    if (sum != prof.total_images)
      throw SchemaError(local_name(ciri) + " bins cover " + std::to_string(sum) + " image labels but the dataset has " +
                        std::to_string(prof.total_images) + " images (each image needs exactly one)");
  }
  return prof;
}

enum class ClassScope { TopLevel, Leaf };

inline std::string scope_name(ClassScope s) { return s == ClassScope::TopLevel ? "top-level" : "leaf"; }

struct ValidationPolicy {
  /// Maximum absolute deviation |count/total - target| of a class share.
  double tolerance = 0.05;
  std::size_t min_count = 1;
  ClassScope scope = ClassScope::TopLevel;
  /// Bin IRI -> required flag, overriding quality:required.
  std::map<std::string, bool> required_overrides;
  /// Warnings also fail the verdict.
  bool strict = false;

  void check() const {
    if (!(tolerance >= 0.0 && tolerance <= 1.0)) throw ArgumentError("tolerance must be in [0, 1]");
  }

  bool required(const QualityBin& bin) const {
    auto it = required_overrides.find(bin.iri);
    return it == required_overrides.end() ? bin.required : it->second;
  }
};

enum class FindingKind { MissingDomainEntity, MissingQualityEntity, DistributionDeviation, OutOfRangeValue };
enum class Severity { Error, Warning };

inline std::string kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::MissingDomainEntity: return "MissingDomainEntity";
    case FindingKind::MissingQualityEntity: return "MissingQualityEntity";
    case FindingKind::DistributionDeviation: return "DistributionDeviation";
    case FindingKind::OutOfRangeValue: return "OutOfRangeValue";
  }
  return {};
}

inline std::string severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

struct ValidationFinding {
  FindingKind kind;
  std::string subject;
  std::size_t observed_count = 0;
  std::optional<double> observed_share;
  /// Target share for deviations, min_count for missing quality bins.
  std::optional<double> expected;
  Severity severity = Severity::Error;
  std::string message;
};

/// Classes checked under `scope`: the top-level categories, or the leaves below them.
inline std::vector<std::string> scoped_classes(const OntologySchema& schema, ClassScope scope) {
  if (scope == ClassScope::TopLevel) return schema.categories();
  std::vector<std::string> out;
  for (const auto& cat : schema.categories()) {
    if (schema.descendants(cat).empty()) out.push_back(cat);
    for (const auto& d : schema.descendants(cat))
      if (schema.descendants(d).empty()) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<ValidationFinding> check(const DatasetProfile& prof, const OntologySchema& schema,
                                            const ValidationPolicy& policy) {
  policy.check();
  std::vector<ValidationFinding> out;
  const double total = static_cast<double>(prof.total_images);
  auto share_of = [&](std::size_t n) -> std::optional<double> {
    if (prof.total_images == 0) return std::nullopt;
    return static_cast<double>(n) / total;
  };
  const std::string unit = prof.count_boxes ? "boxes" : "images";

  for (const auto& cls : scoped_classes(schema, policy.scope)) {
    const std::size_t n = prof.class_count(cls);
    const auto share = share_of(n);
    const auto target = schema.target_share(cls);
    if (n == 0)
      out.push_back({FindingKind::MissingDomainEntity, cls, 0, share, target, Severity::Error,
                     "no " + unit + " of " + schema.label(cls)});
    if (share && target && std::fabs(*share - *target) > policy.tolerance) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s share %.4f deviates from target %.4f by more than %.4f",
                    schema.label(cls).c_str(), *share, *target, policy.tolerance);
      out.push_back({FindingKind::DistributionDeviation, cls, n, share, target, Severity::Error, buf});
    }
  }

  for (const auto& [ciri, ch] : schema.characteristics()) {
    for (const auto& bin : ch.bins) {
      const std::size_t n = prof.bin_count(bin);
      const auto share = share_of(n);
      if (policy.required(bin) && n < policy.min_count)
        out.push_back({FindingKind::MissingQualityEntity, bin.iri, n, share, static_cast<double>(policy.min_count),
                       Severity::Error,
                       local_name(bin.iri) + " has " + std::to_string(n) + (n == 1 ? " image" : " images") + ", fewer than " +
                           std::to_string(policy.min_count)});
      if (share && bin.target_share && std::fabs(*share - *bin.target_share) > policy.tolerance) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s share %.4f deviates from target %.4f by more than %.4f",
                      local_name(bin.iri).c_str(), *share, *bin.target_share, policy.tolerance);
        out.push_back({FindingKind::DistributionDeviation, bin.iri, n, share, bin.target_share, Severity::Error, buf});
      }
    }
    auto oor = prof.out_of_range.find(ciri);
    if (oor != prof.out_of_range.end() && oor->second > 0)
      out.push_back({FindingKind::OutOfRangeValue, ciri, oor->second, share_of(oor->second), std::nullopt,
                     Severity::Warning,
                     std::to_string(oor->second) + (oor->second == 1 ? " image has a " : " images have a ") +
                         schema.label(ciri) + " value outside every bin"});
  }

  std::stable_sort(out.begin(), out.end(), [](const ValidationFinding& a, const ValidationFinding& b) {
    return std::tie(a.severity, a.subject, a.kind) < std::tie(b.severity, b.subject, b.kind);
  });
  return out;
}

/// 0 when nothing fails, 1 otherwise. Warnings fail only under `strict`.
inline int verdict(const std::vector<ValidationFinding>& findings, bool strict = false) {
  for (const auto& f : findings)
    if (f.severity == Severity::Error || strict) return 1;
  return 0;
}

}  // namespace ontoguard
