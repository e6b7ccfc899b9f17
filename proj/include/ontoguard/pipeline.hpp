#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "augment.hpp"
#include "ingest.hpp"
#include "ontology.hpp"
#include "report.hpp"
#include "turtle.hpp"
#include "validator.hpp"

// End-to-end steps shared by the command-line tool and the tests.
namespace ontoguard {

/// Schema from explicit ontology files/directories, or the default
/// directory when none are given.
inline OntologySchema load_schema_from(const std::vector<std::string>& paths) {
  if (paths.empty()) return load_bundled_schema();
  return load_schema(load_ontology_graphs(paths));
}

inline bool has_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).extension() == ext;
}

/// Dataset graph from an annotation .csv (ingested) or a .ttl/.nt file.
inline Graph load_dataset_graph(const std::string& path, const OntologySchema& schema) {
  if (has_extension(path, ".csv")) return build_kg(parse_annotations(read_text_file(path), schema), schema);
  Graph g;
  load_turtle_file(path, g);
  return g;
}

/// Canonical Turtle of a dataset graph, with the standard prefixes.
inline std::string dataset_turtle(const Graph& g) {
  PrefixMap prefixes = PrefixMap::standard();
  prefixes.merge(g.prefixes());
  return serialize_turtle(g, prefixes);
}

struct ValidationRun {
  DatasetProfile profile;
  std::vector<ValidationFinding> findings;
  int exit_code = 0;
  std::string json_text;
  std::string markdown;
};

inline ValidationRun run_validation(const Graph& graph, const OntologySchema& schema, const ValidationPolicy& policy,
                                    const ProfileOptions& opts = {}) {
  policy.check();
  ValidationRun run;
  run.profile = profile(graph, schema, opts);
  run.findings = check(run.profile, schema, policy);
  run.exit_code = verdict(run.findings, policy.strict);
  run.json_text = report_json(run.profile, run.findings, policy, schema).dump(2) + "\n";
  run.markdown = report_markdown(run.profile, run.findings, policy, schema);
  return run;
}

// ---- augmentation plans ----
//
// Plan:     {"images": [{"image": "a.png", "output": "a_aug.png", "source_lux": 20000,
//                        "steps": [{"op": "defocus_blur", "k": 7}, ...]}]}
// Manifest: the plan entries with achieved occlusion recorded, plus the
//           measurement and bin of each characteristic.

inline TransformStep step_from_json(const json& j) {
  TransformStep s;
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw ArgumentError("every plan step needs an \"op\" string");
  s.op = j["op"].get<std::string>();
  for (const auto& [key, value] : j.items()) {
    if (key == "op") continue;
    if (key == "preset" && value.is_string()) {
      s.preset = value.get<std::string>();
    } else if (value.is_number()) {
      s.params[key] = value.get<double>();
    } else {
      throw ArgumentError("plan step '" + s.op + "' parameter '" + key + "' must be a number");
    }
  }
  return s;
}

inline json step_to_json(const TransformStep& s) {
  json j = {{"op", s.op}};
  for (const auto& [k, v] : s.params) j[k] = v;
  if (!s.preset.empty()) j["preset"] = s.preset;
  return j;
}

struct PlanEntry {
  std::string image;
  std::string output;
  TransformRecord record;
};

inline std::vector<PlanEntry> parse_plan(const json& plan) {
  std::vector<PlanEntry> out;
  if (!plan.is_object()) throw ArgumentError("plan must be a JSON object");
  if (!plan.contains("images")) return out;
  for (const auto& e : plan.at("images")) {
    PlanEntry p;
    if (!e.contains("image") || !e["image"].is_string()) throw ArgumentError("plan entry needs an \"image\" path");
    p.image = e["image"].get<std::string>();
    p.output = e.value("output", std::filesystem::path(p.image).stem().string() + "_aug.png");
    if (e.contains("source_lux")) p.record.source_lux = e["source_lux"].get<double>();
    for (const auto& s : e.value("steps", json::array())) p.record.steps.push_back(step_from_json(s));
    out.push_back(std::move(p));
  }
  return out;
}

struct AugmentedImage {
  std::string image_id;
  RasterImage image;
  TransformRecord record;
  std::vector<QualityMeasurement> measurements;
};

/// Applies one plan entry and measures the result: recorded parameters for
/// blurs, occlusion and illumination, pixels for contrast and resolution.
inline AugmentedImage augment_one(const RasterImage& src, const PlanEntry& entry, const OntologySchema& schema) {
  AugmentedImage out;
  out.image_id = std::filesystem::path(entry.output).stem().string();
  out.record = entry.record;
  out.image = apply_transforms(src, out.record);
  out.measurements = classify_applied(out.record, schema);
  out.measurements.push_back(measure_contrast(out.image, schema));
  out.measurements.push_back(measure_resolution(out.image, schema));
  std::sort(out.measurements.begin(), out.measurements.end(),
            [](const QualityMeasurement& a, const QualityMeasurement& b) { return a.characteristic < b.characteristic; });
  return out;
}

inline json manifest_entry(const PlanEntry& entry, const AugmentedImage& aug) {
  json steps = json::array();
  for (const auto& s : aug.record.steps) steps.push_back(step_to_json(s));
  json meas = json::object();
  for (const auto& m : aug.measurements)
    meas[local_name(m.characteristic)] = {{"value", m.value},
                                          {"bin", m.bin ? json(local_name(m.bin->iri)) : json(nullptr)}};
  json j = {{"image_id", aug.image_id},
            {"source", entry.image},
            {"output", entry.output},
            {"width", aug.image.width()},
            {"height", aug.image.height()},
            {"steps", steps},
            {"measurements", meas}};
  if (aug.record.source_lux) j["source_lux"] = *aug.record.source_lux;
  return j;
}

/// Quality label rows in the annotation CSV layout, one per measurement.
inline std::string quality_rows(const AugmentedImage& aug) {
  std::string out;
  for (const auto& m : aug.measurements) {
    std::string value;
    if (m.bin) {
      value = local_name(m.bin->iri);
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "=%g", m.value);
      value = local_name(m.characteristic) + buf;
    }
    out += csv_field(aug.image_id) + "," + std::to_string(aug.image.width()) + "," +
           std::to_string(aug.image.height()) + ",quality," + csv_field(value) + ",,,,\n";
  }
  return out;
}

}  // namespace ontoguard
