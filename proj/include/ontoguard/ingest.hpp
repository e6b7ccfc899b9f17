#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "ontology.hpp"
#include "triple_store.hpp"
#include "vocab.hpp"

// Annotation CSV -> dataset knowledge graph.
//
// CSV layout (long format, one row per label):
//
//   image_id,width,height,kind,value,x,y,w,h
//   img001,640,480,domain,Police_Vehicle,10,20,200,120
//   img001,640,480,quality,Occlusion_Low,,,,
//   img001,640,480,quality,Resolution=480,,,,
//
// `value` of a domain row is a class local name in the domain namespace; of a
// quality row, a bin local name or `<Characteristic>=<number>`, which is
// binned at ingest. Quality rows leave x..h empty.
namespace ontoguard {

inline constexpr std::string_view kAnnotationHeader = "image_id,width,height,kind,value,x,y,w,h";

enum class LabelKind { Domain, Quality };

struct BBox {
  long x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct LabelRow {
  LabelKind kind = LabelKind::Domain;
  /// Class or bin local name; for a measurement row, the characteristic local name.
  std::string value;
  std::optional<BBox> bbox;
  std::optional<double> measurement;
  std::size_t line = 0;
};

struct AnnotationRecord {
  std::string image_id;
  long width = 0;
  long height = 0;
  std::vector<LabelRow> rows;
};

struct BuildOptions {
  /// Emit (box, domain:depicts, ancestor) for every ancestor of a box's class,
  /// so box-level counts see the taxonomy like image-level counts do.
  bool box_closure = true;
};

namespace detail {

inline std::optional<long> parse_long(const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] inline void row_error(std::size_t line, const std::string& what) {
  throw AnnotationError("line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Image IRI for an image id; characters outside [A-Za-z0-9_-] are %-encoded.
inline std::string image_iri(const std::string& image_id) {
  static const char* hex = "0123456789ABCDEF";
  std::string out(vocab::kImage);
  for (unsigned char c : image_id) {
    bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (keep) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

/// Parses and validates annotation CSV text against `schema`.
///
/// Records come back grouped by image_id in order of first appearance. Each
/// image needs at least one domain row and exactly one quality row per
/// characteristic of the schema.
inline std::vector<AnnotationRecord> parse_annotations(std::string_view csv_text, const OntologySchema& schema) {
  auto rows = parse_csv(csv_text);
  if (rows.empty()) throw AnnotationError("empty annotation file: missing header");
  std::string header;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) header += (i ? "," : "") + rows[0].fields[i];
  if (header != kAnnotationHeader)
    throw AnnotationError("bad header '" + header + "', expected '" + std::string(kAnnotationHeader) + "'");

  std::vector<AnnotationRecord> records;
  std::map<std::string, std::size_t> index;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto line = row.line;
    if (row.fields.size() != 9)
      detail::row_error(line, "expected 9 fields, got " + std::to_string(row.fields.size()));
    const auto& f = row.fields;
    if (f[0].empty()) detail::row_error(line, "empty image_id");
    auto width = detail::parse_long(f[1]);
    auto height = detail::parse_long(f[2]);
    if (!width || !height || *width < 1 || *height < 1)
      detail::row_error(line, "width and height must be integers >= 1");

    auto [it, fresh] = index.try_emplace(f[0], records.size());
    if (fresh) records.push_back({f[0], *width, *height, {}});
    AnnotationRecord& rec = records[it->second];
    if (rec.width != *width || rec.height != *height)
      detail::row_error(line, "image '" + f[0] + "' has inconsistent dimensions");

    LabelRow label;
    label.line = line;
    label.value = f[4];
    const bool has_box = !f[5].empty() || !f[6].empty() || !f[7].empty() || !f[8].empty();

    if (f[3] == "domain") {
      label.kind = LabelKind::Domain;
      if (!schema.is_domain_label_class(vocab::domain(f[4])))
        detail::row_error(line, "unknown domain class '" + f[4] + "'");
      auto x = detail::parse_long(f[5]), y = detail::parse_long(f[6]);
      auto w = detail::parse_long(f[7]), h = detail::parse_long(f[8]);
      if (!x || !y || !w || !h) detail::row_error(line, "domain label needs integer x,y,w,h");
      BBox b{*x, *y, *w, *h};
      if (b.w < 1 || b.h < 1 || b.x < 0 || b.y < 0 || b.x + b.w > rec.width || b.y + b.h > rec.height)
        detail::row_error(line, "bounding box outside image '" + f[0] + "'");
      label.bbox = b;
    } else if (f[3] == "quality") {
      label.kind = LabelKind::Quality;
      if (has_box) detail::row_error(line, "quality label must leave x,y,w,h empty");
      if (auto eq = f[4].find('='); eq != std::string::npos) {
        label.value = f[4].substr(0, eq);
        if (!schema.characteristics().count(vocab::quality(label.value)))
          detail::row_error(line, "unknown quality characteristic '" + label.value + "'");
        auto v = detail::parse_double(f[4].substr(eq + 1));
        if (!v || *v < 0) detail::row_error(line, "invalid measurement '" + f[4] + "'");
        label.measurement = *v;
      } else if (!schema.find_bin(vocab::quality(f[4]))) {
        detail::row_error(line, "unknown quality bin '" + f[4] + "'");
      }
    } else {
      detail::row_error(line, "kind must be 'domain' or 'quality', got '" + f[3] + "'");
    }
    rec.rows.push_back(std::move(label));
  }

  for (const auto& rec : records) {
    std::map<std::string, std::size_t> seen;
    bool any_domain = false;
    for (const auto& row : rec.rows) {
      if (row.kind == LabelKind::Domain) {
        any_domain = true;
        continue;
      }
      std::string ch = row.measurement ? vocab::quality(row.value)
                                       : schema.find_bin(vocab::quality(row.value))->characteristic;
      if (seen.count(ch))
        detail::row_error(row.line, "duplicate " + local_name(ch) + " label for image '" + rec.image_id + "'");
      seen[ch] = row.line;
    }
    if (!any_domain) throw AnnotationError("image '" + rec.image_id + "' has no domain label");
    for (const auto& [ciri, qc] : schema.characteristics())
      if (!seen.count(ciri))
        throw AnnotationError("image '" + rec.image_id + "' is missing its " + local_name(ciri) + " label");
  }
  return records;
}

/// Emits the dataset knowledge graph.
///
/// Per image: (img a domain:Image), width, height; one has_part triple per
/// distinct labelled class and each of its ancestors; one box node per domain
/// row; one has_part triple per quality bin, or (img quality:outOfRange
/// <characteristic>) for an out-of-range measurement.
inline Graph build_kg(const std::vector<AnnotationRecord>& records, const OntologySchema& schema,
                      const BuildOptions& opts = {}) {
  Graph g;
  g.prefixes() = PrefixMap::standard();
  g.prefixes().merge(schema.prefixes());
  const Term type = Term::iri(vocab::rdf_type());
  const Term has_part = Term::iri(vocab::has_part());
  const Term has_box = Term::iri(vocab::domain("hasBox"));
  const Term depicts = Term::iri(vocab::domain("depicts"));
  const Term box_cls = Term::iri(vocab::domain("Bounding_Box"));
  const Term image_cls = Term::iri(vocab::domain("Image"));
  const Term out_of_range = Term::iri(vocab::quality("outOfRange"));

  for (const auto& rec : records) {
    const std::string img_iri = image_iri(rec.image_id);
    const Term img = Term::iri(img_iri);
    g.insert(img, type, image_cls);
    g.insert(img, Term::iri(vocab::domain("width")), Term::integer(rec.width));
    g.insert(img, Term::iri(vocab::domain("height")), Term::integer(rec.height));

    std::size_t box_no = 0;
    for (const auto& row : rec.rows) {
      if (row.kind == LabelKind::Domain) {
        const std::string cls = vocab::domain(row.value);
        // Set semantics dedupe the image-level label across boxes.
        g.insert(img, has_part, Term::iri(cls));
        for (const auto& a : schema.ancestors(cls)) g.insert(img, has_part, Term::iri(a));

        const Term box = Term::iri(img_iri + "__box" + std::to_string(++box_no));
        g.insert(img, has_box, box);
        g.insert(box, type, box_cls);
        g.insert(box, depicts, Term::iri(cls));
        if (opts.box_closure)
          for (const auto& a : schema.ancestors(cls)) g.insert(box, depicts, Term::iri(a));
        g.insert(box, Term::iri(vocab::domain("x")), Term::integer(row.bbox->x));
        g.insert(box, Term::iri(vocab::domain("y")), Term::integer(row.bbox->y));
        g.insert(box, Term::iri(vocab::domain("w")), Term::integer(row.bbox->w));
        g.insert(box, Term::iri(vocab::domain("h")), Term::integer(row.bbox->h));
      } else if (row.measurement) {
        const std::string ch = vocab::quality(row.value);
        if (auto bin = schema.bin_for(ch, *row.measurement))
          g.insert(img, has_part, Term::iri(bin->iri));
        else
          g.insert(img, out_of_range, Term::iri(ch));
      } else {
        g.insert(img, has_part, Term::iri(vocab::quality(row.value)));
      }
    }
  }
  return g;
}

/// Writes records back to the CSV layout above.
inline std::string write_annotations(const std::vector<AnnotationRecord>& records) {
  std::string out(kAnnotationHeader);
  out += '\n';
  for (const auto& rec : records) {
    const std::string prefix =
        csv_field(rec.image_id) + "," + std::to_string(rec.width) + "," + std::to_string(rec.height) + ",";
    for (const auto& row : rec.rows) {
      out += prefix;
      if (row.kind == LabelKind::Domain) {
        out += "domain," + csv_field(row.value) + "," + std::to_string(row.bbox->x) + "," +
               std::to_string(row.bbox->y) + "," + std::to_string(row.bbox->w) + "," + std::to_string(row.bbox->h);
      } else {
        std::string value = row.value;
        if (row.measurement) {
          char buf[64];
          auto [p, ec] = std::to_chars(buf, buf + sizeof buf, *row.measurement);
          value += "=" + std::string(buf, p);
        }
        out += "quality," + csv_field(value) + ",,,,";
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace ontoguard
