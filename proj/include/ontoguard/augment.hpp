#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "ingest.hpp"
#include "ontology.hpp"

// Controlled quality degradations and Table-style measurement of images.
//
// Convolutions accumulate in double, replicate the border, round half away
// from zero and clamp to [0, 255]. Blur sizes are kernel sizes in pixels,
// which is also the unit of the blur bins.
namespace ontoguard {

/// Sparse 2-D kernel: (dx, dy, weight) taps around the centre pixel.
struct Kernel {
  struct Tap {
    int dx, dy;
    double w;
  };
  std::vector<Tap> taps;

  double sum() const {
    double s = 0;
    for (const auto& t : taps) s += t.w;
    return s;
  }
};

namespace detail {

inline void require_odd_kernel(int k, int max_k = 31) {
  if (k < 1 || k > max_k || k % 2 == 0)
    throw ArgumentError("kernel size must be odd and in [1, " + std::to_string(max_k) + "], got " + std::to_string(k));
}

inline std::uint8_t quantize(double v) {
  double r = std::round(v);  // half away from zero
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

inline std::vector<std::uint8_t> quantize_all(const std::vector<double>& v) {
  std::vector<std::uint8_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = quantize(v[i]);
  return out;
}

/// Horizontal then vertical pass of a symmetric 1-D kernel; result unquantized.
inline std::vector<double> separable(const RasterImage& img, const std::vector<double>& k1d) {
  const int w = img.width(), h = img.height(), r = static_cast<int>(k1d.size()) / 2;
  std::vector<double> tmp(img.data().size()), out(img.data().size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int i = -r; i <= r; ++i) acc += k1d[i + r] * img.at(std::clamp(x + i, 0, w - 1), y, c);
        tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
      }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int i = -r; i <= r; ++i)
          acc += k1d[i + r] * tmp[(static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x) * 3 + c];
        out[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
      }
  return out;
}

}  // namespace detail

inline std::vector<double> box_kernel_1d(int k) {
  detail::require_odd_kernel(k);
  return std::vector<double>(k, 1.0 / k);
}

/// Normalized 1-D Gaussian of odd size k.
inline std::vector<double> gaussian_kernel_1d(int k, double sigma) {
  detail::require_odd_kernel(k);
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be > 0");
  std::vector<double> g(k);
  const int r = k / 2;
  double s = 0;
  for (int i = -r; i <= r; ++i) s += g[i + r] = std::exp(-(i * i) / (2 * sigma * sigma));
  for (auto& v : g) v /= s;
  return g;
}

/// Sigma OpenCV derives from a kernel size when none is given.
inline double default_sigma(int k) { return 0.3 * ((k - 1) * 0.5 - 1) + 0.8; }

inline Kernel outer_kernel(const std::vector<double>& k1d) {
  Kernel out;
  const int r = static_cast<int>(k1d.size()) / 2;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) out.taps.push_back({dx, dy, k1d[dx + r] * k1d[dy + r]});
  return out;
}

/// Line of k pixels through the centre at `angle` degrees (0 = horizontal,
/// counter-clockwise, image y pointing down), rasterized along its dominant
/// axis so it always has exactly k taps of weight 1/k.
inline Kernel motion_kernel(int k, double angle_deg) {
  detail::require_odd_kernel(k);
  if (!(angle_deg >= 0 && angle_deg < 180)) throw ArgumentError("motion angle must be in [0, 180)");
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double cx = std::cos(a), sy = -std::sin(a);
  Kernel out;
  const int r = k / 2;
  for (int d = -r; d <= r; ++d) {
    int dx, dy;
    if (std::fabs(cx) >= std::fabs(sy)) {
      dx = cx > 0 ? d : -d;
      dy = static_cast<int>(std::round(d * sy / std::fabs(cx)));
    } else {
      dy = sy > 0 ? d : -d;
      dx = static_cast<int>(std::round(d * cx / std::fabs(sy)));
    }
    out.taps.push_back({dx, dy, 1.0 / k});
  }
  return out;
}

/// Direct 2-D convolution with replicate borders.
inline RasterImage convolve(const RasterImage& img, const Kernel& kernel) {
  const int w = img.width(), h = img.height();
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (const auto& t : kernel.taps)
          acc += t.w * img.at(std::clamp(x + t.dx, 0, w - 1), std::clamp(y + t.dy, 0, h - 1), c);
        out.at(x, y, c) = detail::quantize(acc);
      }
  return out;
}

inline RasterImage defocus_blur(const RasterImage& img, int k) {
  auto k1d = box_kernel_1d(k);
  if (k == 1) return img;
  return RasterImage(img.width(), img.height(), detail::quantize_all(detail::separable(img, k1d)));
}

inline RasterImage gaussian_blur(const RasterImage& img, int k, double sigma) {
  auto k1d = gaussian_kernel_1d(k, sigma);
  if (k == 1) return img;
  return RasterImage(img.width(), img.height(), detail::quantize_all(detail::separable(img, k1d)));
}

inline RasterImage motion_blur(const RasterImage& img, int k, double angle_deg) {
  auto kernel = motion_kernel(k, angle_deg);
  if (k == 1) return img;
  return convolve(img, kernel);
}

/// Kernel size used by haze(): the nearest odd integer >= strength, at least 1.
inline int haze_kernel_size(double strength) {
  int k = std::max(1, static_cast<int>(std::ceil(strength)));
  return k % 2 == 0 ? k + 1 : k;
}

/// Gaussian blur of haze_kernel_size(strength) followed by a blend toward
/// white with factor strength / 60.
inline RasterImage haze(const RasterImage& img, double strength) {
  if (!(strength >= 0 && strength <= 30)) throw ArgumentError("haze strength must be in [0, 30]");
  if (strength == 0) return img;
  const int k = haze_kernel_size(strength);
  std::vector<double> blurred;
  if (k == 1) {
    blurred.assign(img.data().begin(), img.data().end());
  } else {
    blurred = detail::separable(img, gaussian_kernel_1d(k, default_sigma(k)));
  }
  const double t = strength / 60.0;
  for (auto& v : blurred) v = v * (1 - t) + 255.0 * t;
  return RasterImage(img.width(), img.height(), detail::quantize_all(blurred));
}

inline RasterImage adjust_contrast(const RasterImage& img, double gain, double bias) {
  if (!(gain > 0) || !std::isfinite(gain) || !std::isfinite(bias)) throw ArgumentError("contrast gain must be > 0");
  RasterImage out = img;
  for (auto& v : out.data()) v = detail::quantize(gain * v + bias);
  return out;
}

/// Scales all three channels by `factor`: the V channel of HSV with hue and
/// saturation unchanged.
inline RasterImage darken(const RasterImage& img, double factor) {
  if (!(factor > 0 && factor <= 1)) throw ArgumentError("darken factor must be in (0, 1]");
  RasterImage out = img;
  for (auto& v : out.data()) v = detail::quantize(factor * v);
  return out;
}

struct OcclusionResult {
  RasterImage image;
  double achieved = 0;
};

/// Paints a solid black region centred in `box` covering `fraction` of its
/// area to within one pixel. A single rectangle is used when some a x b fits;
/// otherwise full rows plus one partial row.
inline OcclusionResult occlude(const RasterImage& img, const BBox& box, double fraction) {
  if (box.w < 1 || box.h < 1 || box.x < 0 || box.y < 0 || box.x + box.w > img.width() || box.y + box.h > img.height())
    throw ArgumentError("occlusion box must be non-empty and inside the image");
  if (!(fraction >= 0 && fraction <= 0.8)) throw ArgumentError("occlusion fraction must be in [0, 0.8]");
  const long area = box.w * box.h;
  const double target = fraction * static_cast<double>(area);
  OcclusionResult res{img, 0};
  if (fraction == 0) return res;

  long best_a = 0, best_b = 0;
  double best_err = 2, best_shape = 0;
  for (long a = 1; a <= box.w; ++a) {
    for (long b : {static_cast<long>(std::floor(target / a)), static_cast<long>(std::ceil(target / a))}) {
      if (b < 1 || b > box.h) continue;
      double err = std::fabs(static_cast<double>(a * b) - target);
      double shape = static_cast<double>(std::min(a, b)) / static_cast<double>(std::max(a, b));
      if (err > 1) continue;
      if (err < best_err - 1e-12 || (std::fabs(err - best_err) <= 1e-12 && shape > best_shape)) {
        best_err = err;
        best_shape = shape;
        best_a = a;
        best_b = b;
      }
    }
  }

  long painted = 0;
  auto paint = [&](long x, long y) {
    res.image.set_pixel(static_cast<int>(x), static_cast<int>(y), 0, 0, 0);
    ++painted;
  };
  if (best_a > 0) {
    const long x0 = box.x + (box.w - best_a) / 2, y0 = box.y + (box.h - best_b) / 2;
    for (long y = y0; y < y0 + best_b; ++y)
      for (long x = x0; x < x0 + best_a; ++x) paint(x, y);
  } else {
    const long n = std::lround(target);
    const long rows = n / box.w, rem = n % box.w;
    const long y0 = box.y + (box.h - rows - (rem ? 1 : 0)) / 2;
    for (long y = y0; y < y0 + rows; ++y)
      for (long x = box.x; x < box.x + box.w; ++x) paint(x, y);
    for (long x = box.x; x < box.x + rem; ++x) paint(x, y0 + rows);
  }
  res.achieved = static_cast<double>(painted) / static_cast<double>(area);
  return res;
}

// ---- measurement ----

struct QualityMeasurement {
  std::string characteristic;  // IRI
  double value = 0;
  std::optional<QualityBin> bin;  // std::nullopt = out of range
};

inline QualityMeasurement measured(const OntologySchema& schema, Characteristic c, double value) {
  return {characteristic_iri(c), value, schema.bin_for(c, value)};
}

inline double relative_luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return (0.2126 * r + 0.7152 * g + 0.0722 * b) / 255.0;
}

/// Michelson contrast of relative luminance; 0 for an all-black image.
inline double contrast_score(const RasterImage& img) {
  if (img.empty()) throw ArgumentError("contrast of an empty image");
  double lo = 1, hi = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double l = relative_luminance(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  if (hi == 0) return 0;
  return (hi - lo) / (hi + lo);
}

inline QualityMeasurement measure_contrast(const RasterImage& img, const OntologySchema& schema) {
  return measured(schema, Characteristic::Contrast, contrast_score(img));
}

inline QualityMeasurement measure_resolution(const RasterImage& img, const OntologySchema& schema) {
  return measured(schema, Characteristic::Resolution, std::min(img.width(), img.height()));
}

// ---- recorded transforms ----

/// One applied transform: operation name plus numeric parameters, and the
/// illumination preset for darken.
struct TransformStep {
  std::string op;
  std::map<std::string, double> params;
  std::string preset;

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw ArgumentError(op + " step has no recorded '" + name + "' parameter");
    return it->second;
  }
  double param_or(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }
};

struct TransformRecord {
  std::vector<TransformStep> steps;
  /// Scene illuminance of the source image, when known.
  std::optional<double> source_lux;
};

/// Representative lux of an illumination preset.
inline double preset_lux(const std::string& preset) {
  if (preset == "Night") return 500;
  if (preset == "Day_Low") return 6000;
  if (preset == "Day_High") return 20000;
  throw ArgumentError("unknown illumination preset '" + preset + "' (Night, Day_Low, Day_High)");
}

inline int int_param(const TransformStep& s, const std::string& name) {
  double v = s.param(name);
  if (v != std::floor(v)) throw ArgumentError(s.op + " parameter '" + name + "' must be an integer");
  return static_cast<int>(v);
}

/// Bins implied by recorded parameters: the four blurs (kernel size, haze
/// strength), occlusion (achieved fraction) and, when a lux value or preset
/// is recorded, illumination. Characteristics without a step get value 0.
inline std::vector<QualityMeasurement> classify_applied(const TransformRecord& rec, const OntologySchema& schema) {
  std::map<Characteristic, double> values = {{Characteristic::DefocusBlur, 0},
                                             {Characteristic::GaussianBlur, 0},
                                             {Characteristic::HazeBlur, 0},
                                             {Characteristic::MotionBlur, 0},
                                             {Characteristic::Occlusion, 0}};
  std::optional<double> lux = rec.source_lux;
  std::set<std::string> seen;
  for (const auto& s : rec.steps) {
    if (!seen.insert(s.op).second) throw ArgumentError("transform '" + s.op + "' recorded twice");
    if (s.op == "defocus_blur") {
      values[Characteristic::DefocusBlur] = int_param(s, "k");
    } else if (s.op == "gaussian_blur") {
      values[Characteristic::GaussianBlur] = int_param(s, "k");
    } else if (s.op == "motion_blur") {
      values[Characteristic::MotionBlur] = int_param(s, "k");
    } else if (s.op == "haze") {
      values[Characteristic::HazeBlur] = s.param("strength");
    } else if (s.op == "occlude") {
      values[Characteristic::Occlusion] = s.param("achieved");
    } else if (s.op == "darken") {
      if (!s.preset.empty()) {
        lux = preset_lux(s.preset);
      } else {
        lux = s.param("lux");
      }
    } else if (s.op != "contrast") {
      throw ArgumentError("unknown transform '" + s.op + "'");
    }
  }
  std::vector<QualityMeasurement> out;
  for (const auto& [c, v] : values) out.push_back(measured(schema, c, v));
  if (lux) out.push_back(measured(schema, Characteristic::Illumination, *lux));
  std::sort(out.begin(), out.end(),
            [](const QualityMeasurement& a, const QualityMeasurement& b) { return a.characteristic < b.characteristic; });
  return out;
}

/// Applies the steps in order; occlude steps get their achieved fraction
/// recorded under "achieved". Occlusion defaults to the whole image when the
/// step has no x, y, w, h.
inline RasterImage apply_transforms(const RasterImage& src, TransformRecord& rec) {
  RasterImage img = src;
  for (auto& s : rec.steps) {
    if (s.op == "defocus_blur") {
      img = defocus_blur(img, int_param(s, "k"));
    } else if (s.op == "gaussian_blur") {
      const int k = int_param(s, "k");
      img = gaussian_blur(img, k, s.param_or("sigma", default_sigma(k)));
    } else if (s.op == "motion_blur") {
      img = motion_blur(img, int_param(s, "k"), s.param_or("angle", 0));
    } else if (s.op == "haze") {
      img = haze(img, s.param("strength"));
    } else if (s.op == "contrast") {
      img = adjust_contrast(img, s.param("gain"), s.param_or("bias", 0));
    } else if (s.op == "darken") {
      if (s.preset.empty() && !s.params.count("lux"))
        throw ArgumentError("darken step needs a 'preset' or 'lux' so illumination can be labelled");
      img = darken(img, s.param("factor"));
    } else if (s.op == "occlude") {
      BBox box{0, 0, img.width(), img.height()};
      if (s.params.count("w")) {
        box = {static_cast<long>(int_param(s, "x")), static_cast<long>(int_param(s, "y")),
               static_cast<long>(int_param(s, "w")), static_cast<long>(int_param(s, "h"))};
      }
      auto res = occlude(img, box, s.param("fraction"));
      img = std::move(res.image);
      s.params["achieved"] = res.achieved;
    } else {
      throw ArgumentError("unknown transform '" + s.op + "'");
    }
  }
  return img;
}

}  // namespace ontoguard
