// ontoguard: ingest annotations into a knowledge graph, query it, validate
// dataset completeness, augment images and compute detection metrics.
//
// Exit codes: 0 pass, 1 validation findings, 2 usage or input error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ontoguard/corpus.hpp>
#include <ontoguard/pipeline.hpp>
#include <ontoguard/query.hpp>

namespace og = ontoguard;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> ontologies;
  std::string annotations;
  std::string input;
  std::string out;
  std::string format;
  std::string query_file;
  std::string query_text;
  std::string images_dir = ".";
  std::string plan;
  std::string dataset;
  std::string scope = "top-level";
  double tolerance = 0.05;
  std::size_t min_count = 1;
  bool strict = false;
  bool count_boxes = false;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    og::write_text_file(path, text);
  }
}

og::Graph dataset_graph(const Options& o, const og::OntologySchema& schema) {
  std::string path = !o.annotations.empty() ? o.annotations : o.input;
  if (path.empty()) throw og::ArgumentError("no dataset given: pass --annotations <csv> or a .ttl/.csv path");
  return og::load_dataset_graph(path, schema);
}

og::ValidationPolicy policy_from(const Options& o) {
  og::ValidationPolicy p;
  p.tolerance = o.tolerance;
  p.min_count = o.min_count;
  p.strict = o.strict;
  p.scope = o.scope == "leaf" ? og::ClassScope::Leaf : og::ClassScope::TopLevel;
  return p;
}

int cmd_ingest(const Options& o) {
  auto schema = og::load_schema_from(o.ontologies);
  if (o.annotations.empty() && o.input.empty()) throw og::ArgumentError("ingest needs --annotations <csv>");
  auto text = og::read_text_file(!o.annotations.empty() ? o.annotations : o.input);
  auto graph = og::build_kg(og::parse_annotations(text, schema), schema);
  const bool ntriples = o.format == "nt" || (!o.out.empty() && og::has_extension(o.out, ".nt"));
  emit(o.out, ntriples ? og::serialize_ntriples(graph) : og::dataset_turtle(graph));
  return 0;
}

int cmd_validate(const Options& o, bool gate) {
  auto schema = og::load_schema_from(o.ontologies);
  auto graph = dataset_graph(o, schema);
  auto run = og::run_validation(graph, schema, policy_from(o), {o.count_boxes});
  if (!o.out.empty() && o.out != "-" && o.format.empty()) {
    og::write_text_file(o.out + ".json", run.json_text);
    og::write_text_file(o.out + ".md", run.markdown);
  } else {
    emit(o.out, o.format == "json" ? run.json_text : run.markdown);
  }
  for (const auto& f : run.findings)
    std::cerr << og::severity_name(f.severity) << ": " << og::kind_name(f.kind) << " "
              << og::local_name(f.subject) << ": " << f.message << "\n";
  return gate ? run.exit_code : 0;
}

int cmd_query(Options o) {
  if (!o.annotations.empty() && o.query_file.empty()) std::swap(o.input, o.query_file);
  auto schema = og::load_schema_from(o.ontologies);
  auto graph = dataset_graph(o, schema);
  if (o.query_text.empty() && o.query_file.empty()) throw og::ArgumentError("query needs a query file or --query-text");
  std::string text = !o.query_text.empty() ? o.query_text : og::read_text_file(o.query_file);
  auto result = og::evaluate(text, graph);
  og::PrefixMap prefixes = og::PrefixMap::standard();
  prefixes.merge(graph.prefixes());
  emit(o.out, og::to_tsv(result, &prefixes));
  return 0;
}

int cmd_augment(const Options& o) {
  auto schema = og::load_schema_from(o.ontologies);
  if (o.plan.empty()) throw og::ArgumentError("augment needs --plan <plan.json>");
  nlohmann::json plan_json;
  try {
    plan_json = nlohmann::json::parse(og::read_text_file(o.plan));
  } catch (const nlohmann::json::parse_error& e) {
    throw og::ArgumentError(o.plan + ": " + e.what());
  }
  auto plan = og::parse_plan(plan_json);
  const fs::path out_dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  if (plan.empty()) return 0;
  fs::create_directories(out_dir);

  nlohmann::json manifest = {{"images", nlohmann::json::array()}};
  std::string rows(og::kAnnotationHeader);
  rows += '\n';
  for (const auto& entry : plan) {
    auto src = og::read_image((fs::path(o.images_dir) / entry.image).string());
    auto aug = og::augment_one(src, entry, schema);
    og::write_image((out_dir / entry.output).string(), aug.image);
    manifest["images"].push_back(og::manifest_entry(entry, aug));
    rows += og::quality_rows(aug);
  }
  og::write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  og::write_text_file((out_dir / "quality_rows.csv").string(), rows);
  return 0;
}

int cmd_metrics(const Options& o) {
  if (o.input.empty()) throw og::ArgumentError("metrics needs a counts file");
  nlohmann::json counts;
  try {
    counts = nlohmann::json::parse(og::read_text_file(o.input));
  } catch (const nlohmann::json::parse_error& e) {
    throw og::ArgumentError(o.input + ": " + e.what());
  }
  emit(o.out, og::metrics_json(counts).dump(2) + "\n");
  return 0;
}

int cmd_generate(const Options& o) {
  auto schema = og::load_schema_from(o.ontologies);
  auto records = og::generate_corpus(og::reference_corpus(o.dataset), schema);
  emit(o.out, og::write_annotations(records));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-driven dataset completeness checks for object detection training data"};
  app.require_subcommand(1);
  Options o;

  auto add_ontology = [&](CLI::App* sub) {
    sub->add_option("--ontology", o.ontologies, "Ontology file or directory (repeatable); default $ONTOGUARD_ONTOLOGY_DIR");
  };
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--tolerance", o.tolerance, "Allowed absolute deviation of a class share")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--min-count", o.min_count, "Minimum images per required quality bin");
    sub->add_option("--scope", o.scope, "Classes to check")->check(CLI::IsMember({"top-level", "leaf"}));
    sub->add_flag("--strict", o.strict, "Warnings fail the verdict too");
    sub->add_flag("--count-boxes", o.count_boxes, "Count bounding boxes instead of distinct images");
  };

  auto* ingest = app.add_subcommand("ingest", "Annotation CSV to canonical Turtle");
  add_ontology(ingest);
  ingest->add_option("input", o.input, "Annotation CSV");
  ingest->add_option("--annotations", o.annotations, "Annotation CSV");
  ingest->add_option("--out", o.out, "Output .ttl or .nt (default stdout)");
  ingest->add_option("--format", o.format, "ttl or nt")->check(CLI::IsMember({"ttl", "nt"}));

  auto* validate = app.add_subcommand("validate", "Profile a dataset and check it against the ontology");
  add_ontology(validate);
  add_policy(validate);
  validate->add_option("input", o.input, "Dataset .ttl/.nt or annotation .csv");
  validate->add_option("--annotations", o.annotations, "Annotation CSV");
  validate->add_option("--format", o.format, "Report format on stdout")->check(CLI::IsMember({"json", "md"}));
  validate->add_option("--out", o.out, "Report path prefix: writes <out>.json and <out>.md");

  auto* report = app.add_subcommand("report", "Render the validation report without gating the exit code");
  add_ontology(report);
  add_policy(report);
  report->add_option("input", o.input, "Dataset .ttl/.nt or annotation .csv");
  report->add_option("--annotations", o.annotations, "Annotation CSV");
  report->add_option("--format", o.format, "json or md")->check(CLI::IsMember({"json", "md"}));
  report->add_option("--out", o.out, "Output path prefix, or file with --format");

  auto* query = app.add_subcommand("query", "Evaluate a SELECT query and print TSV");
  add_ontology(query);
  query->add_option("input", o.input, "Dataset .ttl/.nt or annotation .csv");
  query->add_option("query", o.query_file, "Query file (.rq)");
  query->add_option("--annotations", o.annotations, "Annotation CSV");
  query->add_option("--query-text", o.query_text, "Query given inline");
  query->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"tsv"}));
  query->add_option("--out", o.out, "Output file (default stdout)");

  auto* augment = app.add_subcommand("augment", "Apply a transform plan to images");
  add_ontology(augment);
  augment->add_option("--images", o.images_dir, "Directory holding the plan's source images");
  augment->add_option("--plan", o.plan, "Plan JSON")->required();
  augment->add_option("--out", o.out, "Output directory for images, manifest.json, quality_rows.csv");

  auto* metrics = app.add_subcommand("metrics", "Performance and fairness metrics from a counts JSON file");
  metrics->add_option("counts", o.input, "Counts JSON")->required();
  metrics->add_option("--out", o.out, "Output file (default stdout)");

  auto* generate = app.add_subcommand("generate", "Write a reference annotation corpus");
  add_ontology(generate);
  generate->add_option("--dataset", o.dataset, "one, two or three")->required()->check(CLI::IsMember({"one", "two", "three"}));
  generate->add_option("--out", o.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(o);
    if (*validate) return cmd_validate(o, true);
    if (*report) return cmd_validate(o, false);
    if (*query) return cmd_query(o);
    if (*augment) return cmd_augment(o);
    if (*metrics) return cmd_metrics(o);
    if (*generate) return cmd_generate(o);
  } catch (const og::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
