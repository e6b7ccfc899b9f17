#pragma once

#include <cstdint>
#include <optional>

#include "error.hpp"

// Detection performance and group fairness metrics over confusion counts.
// A metric whose denominator is zero is std::nullopt, never 0.
namespace ontoguard {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return fp + tn; }
  std::uint64_t total() const { return tp + fp + tn + fn; }
  std::uint64_t predicted_positive() const { return tp + fp; }
};

struct PerformanceMetrics {
  std::optional<double> recall;
  std::optional<double> false_alarm;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> f1;
};

/// Privileged and unprivileged confusion counts. Favorable-outcome counts
/// default to the group's predicted positives (tp + fp).
struct GroupedCounts {
  ConfusionCounts privileged;
  ConfusionCounts unprivileged;
  std::optional<std::uint64_t> privileged_favorable;
  std::optional<std::uint64_t> unprivileged_favorable;
};

struct FairnessMetrics {
  std::optional<double> aod;
  std::optional<double> eod;
  std::optional<double> spd;
  std::optional<double> di;
};

namespace detail {

inline std::optional<double> ratio(double num, double den) {
  if (den == 0) return std::nullopt;
  return num / den;
}

}  // namespace detail

inline PerformanceMetrics performance(const ConfusionCounts& c) {
  PerformanceMetrics m;
  m.recall = detail::ratio(c.tp, c.positives());
  m.false_alarm = detail::ratio(c.fp, c.negatives());
  m.accuracy = detail::ratio(c.tp + c.tn, c.total());
  m.precision = detail::ratio(c.tp, c.predicted_positive());
  if (m.precision && m.recall) m.f1 = detail::ratio(2 * *m.precision * *m.recall, *m.precision + *m.recall);
  return m;
}

inline FairnessMetrics fairness(const GroupedCounts& g) {
  const auto& p = g.privileged;
  const auto& u = g.unprivileged;
  for (const auto* c : {&p, &u})
    if (c->total() == 0) throw ArgumentError("fairness metrics need a non-empty group");
  const std::uint64_t fav_p = g.privileged_favorable.value_or(p.predicted_positive());
  const std::uint64_t fav_u = g.unprivileged_favorable.value_or(u.predicted_positive());
  if (fav_p > p.total() || fav_u > u.total()) throw ArgumentError("favorable count exceeds group size");

  FairnessMetrics m;
  auto tpr_p = detail::ratio(p.tp, p.positives()), tpr_u = detail::ratio(u.tp, u.positives());
  auto fpr_p = detail::ratio(p.fp, p.negatives()), fpr_u = detail::ratio(u.fp, u.negatives());
  if (tpr_p && tpr_u) m.eod = *tpr_u - *tpr_p;
  if (m.eod && fpr_p && fpr_u) m.aod = 0.5 * ((*fpr_u - *fpr_p) + (*tpr_u - *tpr_p));
  const double prob_p = static_cast<double>(fav_p) / static_cast<double>(p.total());
  const double prob_u = static_cast<double>(fav_u) / static_cast<double>(u.total());
  m.spd = prob_u - prob_p;
  m.di = detail::ratio(prob_u, prob_p);
  return m;
}

}  // namespace ontoguard
