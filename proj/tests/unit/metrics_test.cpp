#include <random>

#include <gtest/gtest.h>

#include <ontoguard/metrics.hpp>
#include <ontoguard/report.hpp>

#include "oracles.hpp"

using namespace ontoguard;

namespace {

oracle::Cells cells(const ConfusionCounts& c) {
  return {static_cast<double>(c.tp), static_cast<double>(c.fp), static_cast<double>(c.tn), static_cast<double>(c.fn)};
}

void expect_same(const std::optional<double>& got, const std::optional<double>& want, const char* what) {
  ASSERT_EQ(got.has_value(), want.has_value()) << what;
  if (want) {
    EXPECT_NEAR(*got, *want, 1e-12) << what;
  }
}

ConfusionCounts random_counts(std::mt19937& rng) {
  auto n = [&] { return static_cast<std::uint64_t>(rng() % 50); };
  return {n(), n(), n(), n()};
}

}  // namespace

TEST(Performance, PerfectClassifier) {
  auto m = performance({40, 0, 60, 0});
  EXPECT_EQ(*m.recall, 1.0);
  EXPECT_EQ(*m.false_alarm, 0.0);
  EXPECT_EQ(*m.accuracy, 1.0);
  EXPECT_EQ(*m.precision, 1.0);
  EXPECT_EQ(*m.f1, 1.0);
}

TEST(Performance, SmallWorkedCase) {
  auto m = performance({3, 1, 0, 1});
  EXPECT_DOUBLE_EQ(*m.recall, 0.75);
  EXPECT_DOUBLE_EQ(*m.false_alarm, 1.0);
  EXPECT_DOUBLE_EQ(*m.accuracy, 0.6);
  EXPECT_DOUBLE_EQ(*m.precision, 0.75);
  EXPECT_DOUBLE_EQ(*m.f1, 0.75);
}

TEST(Performance, ZeroDenominatorsAreUndefined) {
  auto m = performance({0, 0, 5, 0});
  EXPECT_FALSE(m.recall);
  EXPECT_FALSE(m.precision);
  EXPECT_FALSE(m.f1);
  EXPECT_DOUBLE_EQ(*m.false_alarm, 0.0);
  EXPECT_DOUBLE_EQ(*m.accuracy, 1.0);
  EXPECT_FALSE(performance({}).accuracy);
  auto miss = performance({0, 3, 2, 4});
  EXPECT_DOUBLE_EQ(*miss.precision, 0.0);
  EXPECT_DOUBLE_EQ(*miss.recall, 0.0);
  EXPECT_FALSE(miss.f1);
}

TEST(Fairness, IdenticalGroupsAreFair) {
  GroupedCounts g{{10, 5, 20, 5}, {10, 5, 20, 5}, std::nullopt, std::nullopt};
  auto f = fairness(g);
  EXPECT_EQ(*f.aod, 0.0);
  EXPECT_EQ(*f.eod, 0.0);
  EXPECT_EQ(*f.spd, 0.0);
  EXPECT_EQ(*f.di, 1.0);
}

TEST(Fairness, WorkedDifference) {
  // TPR 0.8 vs 0.4, FPR equal.
  GroupedCounts g{{8, 1, 9, 2}, {4, 1, 9, 6}, std::nullopt, std::nullopt};
  auto f = fairness(g);
  EXPECT_NEAR(*f.eod, -0.4, 1e-12);
  EXPECT_NEAR(*f.aod, -0.2, 1e-12);
  EXPECT_NEAR(*f.spd, 5.0 / 20 - 9.0 / 20, 1e-12);
  EXPECT_NEAR(*f.di, 5.0 / 9.0, 1e-12);
}

TEST(Fairness, FavorableCountsOverridePredictedPositives) {
  GroupedCounts g{{1, 1, 1, 1}, {1, 1, 1, 1}, 0, 2};
  auto f = fairness(g);
  EXPECT_DOUBLE_EQ(*f.spd, 0.5);
  EXPECT_FALSE(f.di);
  EXPECT_THROW(fairness({{1, 1, 1, 1}, {1, 1, 1, 1}, 5, std::nullopt}), ArgumentError);
  EXPECT_THROW(fairness({{}, {1, 1, 1, 1}, std::nullopt, std::nullopt}), ArgumentError);
}

TEST(Metrics, MatchCellFormulasOnRandomCounts) {
  std::mt19937 rng(77);
  for (int i = 0; i < 500; ++i) {
    auto c = random_counts(rng);
    auto m = performance(c);
    const auto o = cells(c);
    expect_same(m.recall, oracle::recall(o), "recall");
    expect_same(m.false_alarm, oracle::false_alarm(o), "false_alarm");
    expect_same(m.accuracy, oracle::accuracy(o), "accuracy");
    expect_same(m.precision, oracle::precision(o), "precision");
    if (m.precision && m.recall && *m.precision + *m.recall > 0) expect_same(m.f1, oracle::f1(o), "f1");
  }
}

TEST(Metrics, InvariantUnderScaling) {
  std::mt19937 rng(78);
  for (int i = 0; i < 500; ++i) {
    auto c = random_counts(rng);
    const std::uint64_t k = 2 + rng() % 9;
    auto a = performance(c), b = performance({c.tp * k, c.fp * k, c.tn * k, c.fn * k});
    expect_same(b.recall, a.recall, "recall");
    expect_same(b.false_alarm, a.false_alarm, "false_alarm");
    expect_same(b.accuracy, a.accuracy, "accuracy");
    expect_same(b.precision, a.precision, "precision");
    expect_same(b.f1, a.f1, "f1");
  }
}

TEST(Fairness, SwappingGroupsNegatesDifferences) {
  std::mt19937 rng(79);
  for (int i = 0; i < 500; ++i) {
    GroupedCounts g{random_counts(rng), random_counts(rng), std::nullopt, std::nullopt};
    if (g.privileged.total() == 0 || g.unprivileged.total() == 0) continue;
    auto f = fairness(g);
    auto s = fairness({g.unprivileged, g.privileged, std::nullopt, std::nullopt});
    const auto up = cells(g.unprivileged), pp = cells(g.privileged);
    if (oracle::tpr(up) && oracle::tpr(pp)) {
      EXPECT_NEAR(*f.eod, *oracle::tpr(up) - *oracle::tpr(pp), 1e-12);
      EXPECT_NEAR(*s.eod, -*f.eod, 1e-12);
    }
    if (f.aod) {
      EXPECT_NEAR(*s.aod, -*f.aod, 1e-12);
    }
    EXPECT_NEAR(*f.spd, oracle::favorable_rate(up) - oracle::favorable_rate(pp), 1e-12);
    EXPECT_NEAR(*s.spd, -*f.spd, 1e-12);
    if (f.di && s.di && *f.di > 0) {
      EXPECT_NEAR(*s.di, 1.0 / *f.di, 1e-9);
    }
  }
}

TEST(MetricsJson, AcceptsSingleAndGroupedForms) {
  auto single = metrics_json(json{{"tp", 3}, {"fp", 1}, {"tn", 0}, {"fn", 1}});
  EXPECT_DOUBLE_EQ(single["performance"]["recall"].get<double>(), 0.75);
  auto none = metrics_json(json{{"tp", 0}, {"fp", 0}, {"tn", 3}, {"fn", 0}});
  EXPECT_TRUE(none["performance"]["f1"].is_null());
  auto grouped = metrics_json(json{{"privileged", {{"tp", 8}, {"fp", 1}, {"tn", 9}, {"fn", 2}}},
                                   {"unprivileged", {{"tp", 4}, {"fp", 1}, {"tn", 9}, {"fn", 6}}}});
  EXPECT_NEAR(grouped["fairness"]["eod"].get<double>(), -0.4, 1e-12);
  EXPECT_THROW(metrics_json(json{{"tp", -1}, {"fp", 0}, {"tn", 0}, {"fn", 0}}), ArgumentError);
  EXPECT_THROW(metrics_json(json::array()), ArgumentError);
}
