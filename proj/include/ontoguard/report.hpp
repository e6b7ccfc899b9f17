#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrics.hpp"
#include "ontology.hpp"
#include "validator.hpp"

namespace ontoguard {

using nlohmann::json;

namespace detail {

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::string compact(const std::string& iri, const OntologySchema& schema) {
  if (auto c = schema.prefixes().compact(iri)) return *c;
  return iri;
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline json profile_json(const DatasetProfile& prof, const OntologySchema& schema) {
  json classes = json::object();
  for (const auto& [cls, n] : prof.class_counts) classes[detail::compact(cls, schema)] = n;
  json quality = json::object();
  for (const auto& [ch, bins] : prof.quality_counts) {
    json b = json::object();
    for (const auto& [bin, n] : bins) b[detail::compact(bin, schema)] = n;
    quality[detail::compact(ch, schema)] = b;
  }
  json oor = json::object();
  for (const auto& [ch, n] : prof.out_of_range) oor[detail::compact(ch, schema)] = n;
  return {{"total_images", prof.total_images},
          {"count_unit", prof.count_boxes ? "boxes" : "images"},
          {"class_counts", classes},
          {"quality_counts", quality},
          {"out_of_range", oor}};
}

inline json policy_json(const ValidationPolicy& policy, const OntologySchema& schema) {
  json overrides = json::object();
  for (const auto& [bin, req] : policy.required_overrides) overrides[detail::compact(bin, schema)] = req;
  return {{"tolerance", policy.tolerance},
          {"min_count", policy.min_count},
          {"scope", scope_name(policy.scope)},
          {"strict", policy.strict},
          {"required_overrides", overrides}};
}

inline json findings_json(const std::vector<ValidationFinding>& findings, const OntologySchema& schema) {
  json out = json::array();
  for (const auto& f : findings)
    out.push_back({{"kind", kind_name(f.kind)},
                   {"subject", detail::compact(f.subject, schema)},
                   {"severity", severity_name(f.severity)},
                   {"observed_count", f.observed_count},
                   {"observed_share", detail::optional_number(f.observed_share)},
                   {"expected", detail::optional_number(f.expected)},
                   {"message", f.message}});
  return out;
}

inline json report_json(const DatasetProfile& prof, const std::vector<ValidationFinding>& findings,
                        const ValidationPolicy& policy, const OntologySchema& schema) {
  const int code = verdict(findings, policy.strict);
  return {{"profile", profile_json(prof, schema)},
          {"findings", findings_json(findings, schema)},
          {"policy", policy_json(policy, schema)},
          {"verdict", {{"status", code == 0 ? "pass" : "fail"}, {"exit_code", code}}}};
}

/// Domain table (entity, count) and quality table (None/Low/Medium/High)
/// in the layout of the published breakdown tables.
inline std::string report_markdown(const DatasetProfile& prof, const std::vector<ValidationFinding>& findings,
                                   const ValidationPolicy& policy, const OntologySchema& schema) {
  std::ostringstream md;
  const int code = verdict(findings, policy.strict);
  md << "# Dataset validation report\n\n";
  md << "Verdict: **" << (code == 0 ? "pass" : "fail") << "** (exit " << code << ")\n\n";
  md << "Policy: tolerance " << detail::fixed(policy.tolerance, 4) << ", min count " << policy.min_count << ", "
     << scope_name(policy.scope) << " classes" << (policy.strict ? ", strict" : "") << "\n\n";

  md << "## Domain breakdown\n\n";
  md << "| Entity | Number of " << (prof.count_boxes ? "Boxes" : "Instances") << " |\n|---|---:|\n";
  for (const auto& cls : scoped_classes(schema, policy.scope))
    md << "| " << schema.label(cls) << " | " << prof.class_count(cls) << " |\n";
  md << "| Total images | " << prof.total_images << " |\n\n";

  md << "## Quality characteristic breakdown\n\n";
  md << "| Entity | None | Low | Medium | High | Out of range |\n|---|---:|---:|---:|---:|---:|\n";
  static const char* levels[] = {"None", "Low", "Medium", "High"};
  for (auto c : kAllCharacteristics) {
    const std::string ciri = characteristic_iri(c);
    if (!schema.characteristics().count(ciri)) continue;
    const auto& ch = schema.characteristic(ciri);
    md << "| " << schema.label(ciri);
    for (const char* level : levels) {
      const QualityBin* hit = nullptr;
      for (const auto& b : ch.bins)
        if (b.level == level) hit = &b;
      md << " | ";
      if (!hit) {
        md << "N/A";
        continue;
      }
      // Bins named other than by level, such as Illumination_Night, carry their name.
      std::string suffix = local_name(hit->iri).substr(local_name(ciri).size() + 1);
      if (suffix != level) md << "(" << suffix << ") ";
      md << prof.bin_count(*hit);
    }
    auto oor = prof.out_of_range.find(ciri);
    md << " | " << (oor == prof.out_of_range.end() ? 0 : oor->second) << " |\n";
  }

  md << "\n## Findings\n\n";
  if (findings.empty()) {
    md << "None.\n";
  } else {
    md << "| Severity | Kind | Subject | Observed | Expected | Message |\n|---|---|---|---:|---:|---|\n";
    for (const auto& f : findings) {
      md << "| " << severity_name(f.severity) << " | " << kind_name(f.kind) << " | "
         << detail::compact(f.subject, schema) << " | " << f.observed_count;
      if (f.observed_share) md << " (" << detail::fixed(*f.observed_share, 4) << ")";
      md << " | " << (f.expected ? detail::fixed(*f.expected, 4) : std::string("-")) << " | " << f.message << " |\n";
    }
  }
  return md.str();
}

inline json performance_json(const PerformanceMetrics& m) {
  return {{"recall", detail::optional_number(m.recall)},
          {"false_alarm", detail::optional_number(m.false_alarm)},
          {"accuracy", detail::optional_number(m.accuracy)},
          {"precision", detail::optional_number(m.precision)},
          {"f1", detail::optional_number(m.f1)}};
}

inline json fairness_json(const FairnessMetrics& m) {
  return {{"aod", detail::optional_number(m.aod)},
          {"eod", detail::optional_number(m.eod)},
          {"spd", detail::optional_number(m.spd)},
          {"di", detail::optional_number(m.di)}};
}

namespace detail {

inline std::uint64_t count_field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name) || !j[name].is_number_integer() ||
      (!j[name].is_number_unsigned() && j[name].get<std::int64_t>() < 0))
    throw ArgumentError(std::string("'") + name + "' must be a non-negative integer");
  return j[name].get<std::uint64_t>();
}

}  // namespace detail

inline ConfusionCounts confusion_from_json(const json& j) {
  return {detail::count_field(j, "tp"), detail::count_field(j, "fp"), detail::count_field(j, "tn"),
          detail::count_field(j, "fn")};
}

/// Metrics for a counts document: either {tp, fp, tn, fn}, or
/// {privileged: {...}, unprivileged: {...}} with optional
/// privileged_favorable / unprivileged_favorable.
inline json metrics_json(const json& counts) {
  if (!counts.is_object()) throw ArgumentError("counts file must hold a JSON object");
  if (counts.contains("privileged") || counts.contains("unprivileged")) {
    if (!counts.contains("privileged") || !counts.contains("unprivileged"))
      throw ArgumentError("grouped counts need both 'privileged' and 'unprivileged'");
    GroupedCounts g;
    g.privileged = confusion_from_json(counts.at("privileged"));
    g.unprivileged = confusion_from_json(counts.at("unprivileged"));
    if (counts.contains("privileged_favorable")) g.privileged_favorable = detail::count_field(counts, "privileged_favorable");
    if (counts.contains("unprivileged_favorable"))
      g.unprivileged_favorable = detail::count_field(counts, "unprivileged_favorable");
    return {{"privileged", performance_json(performance(g.privileged))},
            {"unprivileged", performance_json(performance(g.unprivileged))},
            {"fairness", fairness_json(fairness(g))}};
  }
  return {{"performance", performance_json(performance(confusion_from_json(counts)))}};
}

}  // namespace ontoguard
