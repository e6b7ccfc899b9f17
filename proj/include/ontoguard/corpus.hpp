#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "ingest.hpp"
#include "ontology.hpp"

// Synthetic annotation corpora realizing prescribed per-category and per-bin
// image counts. Used to reproduce reference breakdowns end to end.
namespace ontoguard {

struct CorpusSpec {
  std::string name;
  std::size_t total_images = 0;
  std::uint32_t seed = 0;
  /// Category local name -> number of images carrying it.
  std::vector<std::pair<std::string, std::size_t>> categories;
  /// Characteristic local name -> (bin local name -> images). Images not
  /// covered by any bin get `out_of_range_value` as a measurement.
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> bins;
  std::map<std::string, double> out_of_range_value = {{"Resolution", 24}, {"Defocus_Blur", 35},
                                                      {"Gaussian_Blur", 35}, {"Haze_Blur", 35},
                                                      {"Motion_Blur", 35}, {"Occlusion", 0.95}};
};

namespace detail {

inline std::vector<std::pair<std::string, std::size_t>> blur_bins(const std::string& ch, std::size_t none,
                                                                  std::size_t low, std::size_t high) {
  return {{ch + "_None", none}, {ch + "_Low", low}, {ch + "_High", high}};
}

}  // namespace detail

/// Reference corpora "one", "two" and "three".
inline CorpusSpec reference_corpus(const std::string& name) {
  using detail::blur_bins;
  CorpusSpec s;
  s.name = name;
  if (name == "one") {
    s.total_images = 504;
    s.seed = 1;
    s.categories = {{"EMS_Vehicle", 103}, {"Fire_Vehicle", 93},   {"Mobile_Communications_Vehicle", 84},
                    {"Police_Vehicle", 92}, {"Rescue_Vehicle", 84}, {"Tow_Truck", 84}};
    s.bins = {{"Defocus_Blur", blur_bins("Defocus_Blur", 435, 63, 6)},
              {"Gaussian_Blur", blur_bins("Gaussian_Blur", 482, 16, 6)},
              {"Haze_Blur", blur_bins("Haze_Blur", 484, 11, 9)},
              {"Motion_Blur", blur_bins("Motion_Blur", 468, 30, 6)},
              {"Contrast", {{"Contrast_Low", 54}, {"Contrast_High", 450}}},
              {"Illumination", {{"Illumination_Night", 54}, {"Illumination_Day_Low", 121}, {"Illumination_Day_High", 329}}},
              {"Occlusion", {{"Occlusion_None", 307}, {"Occlusion_Low", 107}, {"Occlusion_Medium", 42}, {"Occlusion_High", 48}}},
              {"Resolution", {{"Resolution_Low", 1}, {"Resolution_Medium", 3}, {"Resolution_High", 499}}}};
  } else if (name == "two") {
    s.total_images = 492;
    s.seed = 2;
    s.categories = {{"EMS_Vehicle", 123}, {"Fire_Vehicle", 111},  {"Mobile_Communications_Vehicle", 98},
                    {"Police_Vehicle", 106}, {"Rescue_Vehicle", 98}, {"Tow_Truck", 0}};
    s.bins = {{"Defocus_Blur", blur_bins("Defocus_Blur", 421, 65, 5)},
              {"Gaussian_Blur", blur_bins("Gaussian_Blur", 464, 24, 4)},
              {"Haze_Blur", blur_bins("Haze_Blur", 471, 11, 10)},
              {"Motion_Blur", blur_bins("Motion_Blur", 449, 37, 6)},
              {"Contrast", {{"Contrast_Low", 53}, {"Contrast_High", 439}}},
              {"Illumination", {{"Illumination_Night", 56}, {"Illumination_Day_Low", 128}, {"Illumination_Day_High", 308}}},
              {"Occlusion", {{"Occlusion_None", 302}, {"Occlusion_Low", 96}, {"Occlusion_Medium", 44}, {"Occlusion_High", 50}}},
              {"Resolution", {{"Resolution_Low", 0}, {"Resolution_Medium", 3}, {"Resolution_High", 489}}}};
  } else if (name == "three") {
    s.total_images = 504;
    s.seed = 3;
    s.categories = {{"EMS_Vehicle", 105}, {"Fire_Vehicle", 92},   {"Mobile_Communications_Vehicle", 84},
                    {"Police_Vehicle", 91}, {"Rescue_Vehicle", 83}, {"Tow_Truck", 84}};
    s.bins = {{"Defocus_Blur", blur_bins("Defocus_Blur", 433, 65, 6)},
              {"Gaussian_Blur", blur_bins("Gaussian_Blur", 474, 24, 6)},
              {"Haze_Blur", blur_bins("Haze_Blur", 504, 0, 0)},
              {"Motion_Blur", blur_bins("Motion_Blur", 465, 33, 6)},
              {"Contrast", {{"Contrast_Low", 40}, {"Contrast_High", 464}}},
              {"Illumination", {{"Illumination_Night", 54}, {"Illumination_Day_Low", 126}, {"Illumination_Day_High", 324}}},
              {"Occlusion", {{"Occlusion_None", 308}, {"Occlusion_Low", 107}, {"Occlusion_Medium", 39}, {"Occlusion_High", 50}}},
              {"Resolution", {{"Resolution_Low", 1}, {"Resolution_Medium", 3}, {"Resolution_High", 499}}}};
  } else {
    throw ArgumentError("unknown reference corpus '" + name + "' (one, two, three)");
  }
  return s;
}

namespace detail {

/// Fisher-Yates with `rng() % n`, so the permutation depends only on the
/// mt19937 stream and not on the standard library's distributions.
template <class T>
void portable_shuffle(std::vector<T>& v, std::mt19937& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

inline std::pair<long, long> resolution_dims(const std::string& label) {
  if (label == "Resolution_Low") return {60, 48};
  if (label == "Resolution_Medium") return {200, 150};
  if (label == "Resolution_High") return {640, 480};
  return {28, 24};
}

}  // namespace detail

/// Builds annotation records with exactly the counts of `spec`.
///
/// Category labels go first to the images with the fewest labels, so every
/// image gets at least one when the label total allows; each image carries a
/// category at most once. Labels rotate over the category and its
/// descendants, and every seventh label gets a second box of the same class.
inline std::vector<AnnotationRecord> generate_corpus(const CorpusSpec& spec, const OntologySchema& schema) {
  const std::size_t n = spec.total_images;
  std::size_t label_total = 0;
  for (const auto& [cat, count] : spec.categories) {
    if (count > n) throw ArgumentError(cat + " count exceeds the image total");
    if (!schema.has_class(vocab::domain(cat))) throw ArgumentError("unknown category '" + cat + "'");
    label_total += count;
  }
  if (label_total < n) throw ArgumentError("fewer category labels than images");

  std::vector<std::vector<std::string>> labels(n);  // leaf local names per image
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (const auto& [cat, count] : spec.categories) {
    std::vector<std::string> classes = {cat};
    for (const auto& d : schema.descendants(vocab::domain(cat))) classes.push_back(local_name(d));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return labels[a].size() < labels[b].size(); });
    for (std::size_t j = 0; j < count; ++j) labels[order[j]].push_back(classes[j % classes.size()]);
    // Rotate so ties are broken differently for the next category.
    std::rotate(order.begin(), order.begin() + static_cast<long>(count % std::max<std::size_t>(n, 1)), order.end());
  }

  std::mt19937 rng(spec.seed);
  std::map<std::string, std::vector<std::string>> assignment;  // characteristic -> per-image value
  for (const auto& [ciri, ch] : schema.characteristics()) {
    const std::string cname = local_name(ciri);
    auto it = spec.bins.find(cname);
    if (it == spec.bins.end()) throw ArgumentError("corpus spec has no counts for " + cname);
    std::vector<std::string> values;
    for (const auto& [bin, count] : it->second) {
      if (!schema.find_bin(vocab::quality(bin))) throw ArgumentError("unknown bin '" + bin + "'");
      values.insert(values.end(), count, bin);
    }
    if (values.size() > n) throw ArgumentError(cname + " bin counts exceed the image total");
    if (values.size() < n) {
      auto oor = spec.out_of_range_value.find(cname);
      if (oor == spec.out_of_range_value.end())
        throw ArgumentError(cname + " bin counts fall short and no out-of-range value is set");
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s=%g", cname.c_str(), oor->second);
      values.insert(values.end(), n - values.size(), buf);
    }
    detail::portable_shuffle(values, rng);
    assignment[cname] = std::move(values);
  }

  std::vector<AnnotationRecord> out;
  out.reserve(n);
  std::size_t box_serial = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "%s_%04zu", spec.name.c_str(), i + 1);
    const std::string& res = assignment["Resolution"][i];
    auto [w, h] = detail::resolution_dims(res);
    AnnotationRecord rec{id, w, h, {}};

    auto add_box = [&](const std::string& cls) {
      const long bw = std::max(1L, w / 4), bh = std::max(1L, h / 4);
      const long slot = static_cast<long>(box_serial++);
      BBox b{(slot * 3) % (w - bw + 1), (slot * 5) % (h - bh + 1), bw, bh};
      rec.rows.push_back({LabelKind::Domain, cls, b, std::nullopt, 0});
    };
    for (const auto& cls : labels[i]) {
      add_box(cls);
      if (box_serial % 7 == 0) add_box(cls);
    }
    for (const auto& [cname, values] : assignment) {
      LabelRow row{LabelKind::Quality, values[i], std::nullopt, std::nullopt, 0};
      if (auto eq = values[i].find('='); eq != std::string::npos) {
        row.value = values[i].substr(0, eq);
        row.measurement = std::stod(values[i].substr(eq + 1));
      } else if (cname == "Resolution") {
        row.value = cname;
        row.measurement = static_cast<double>(std::min(w, h));
      }
      rec.rows.push_back(std::move(row));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace ontoguard
