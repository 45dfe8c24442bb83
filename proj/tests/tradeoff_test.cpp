#include "nacmint/tradeoff.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "published.hpp"

namespace nacmint {
namespace {

TEST(MuScore, PublishedRows) {
  EXPECT_NEAR(mu_score(88.7, 19.6), 65.7, 0.05);
  EXPECT_NEAR(mu_score(41.3, 80.6), 54.4, 0.05);
  for (double phi : {0.5, 1.0, 2.0, 7.0}) EXPECT_DOUBLE_EQ(mu_score(42.0, 42.0, phi), 42.0);
}

TEST(MuScore, TiePrefersAbstractive) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 99.0);
  for (int i = 0; i < 100; ++i) {
    double f = u(rng), a = u(rng);
    EXPECT_GT(mu_score(f, a + 1.0), mu_score(f, a));
  }
}

TEST(MuScore, ExchangeRate) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(20.0, 60.0), dx(0.0, 10.0);
  for (double phi : {1.0, 2.0, 3.0}) {
    for (int i = 0; i < 50; ++i) {
      double f = u(rng), a = u(rng) / 2, x = dx(rng);
      EXPECT_NEAR(mu_score(f - x, a + phi * x, phi), mu_score(f, a, phi), 1e-9);
    }
  }
}

TEST(MuScore, RangeErrors) {
  EXPECT_THROW(mu_score(101.0, 50.0), std::invalid_argument);
  EXPECT_THROW(mu_score(50.0, -1.0), std::invalid_argument);
  EXPECT_THROW(mu_score(50.0, 50.0, 0.0), std::invalid_argument);
}

TEST(FitTrend, TwoPointsInterpolate) {
  std::vector<TradeoffPoint> pts{{"p", 10, 90}, {"q", 30, 70}};
  auto fit = fit_trend(pts);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 100.0, 1e-12);
  EXPECT_NEAR(f_at(fit, 10), 90.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.n_points, 2u);
}

TEST(FitTrend, ExactLine) {
  std::vector<TradeoffPoint> pts;
  for (double a : {1.0, 5.0, 9.0, 20.0, 33.0}) pts.push_back({"", a, 2 * a + 1});
  auto fit = fit_trend(pts);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-10);
}

TEST(FitTrend, CnnDailyMail) {
  auto pts = published::series_points("CNN/DM", published::kFactH);
  auto fit = fit_trend(pts);
  EXPECT_NEAR(fit.slope, -0.295, 0.0005);
  EXPECT_NEAR(fit.intercept, 96.1, 0.05);
  EXPECT_NEAR(f_at(fit, 50.0), 81.3, 0.05);
}

TEST(FitTrend, XSumFiveRows) {
  auto fit = fit_trend(published::series_points("XSum", published::kFactH));
  EXPECT_GE(f_at(fit, 50.0), 52.4);
  EXPECT_LE(f_at(fit, 50.0), 52.6);
}

TEST(FitTrend, ZeroSlopeGivesIntercept) {
  std::vector<TradeoffPoint> pts{{"", 10, 50}, {"", 20, 50}, {"", 70, 50}};
  auto fit = fit_trend(pts);
  EXPECT_DOUBLE_EQ(f_at(fit, 50.0), fit.intercept);
}

TEST(FitTrend, ResidualsOrthogonal) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TradeoffPoint> pts;
    for (std::size_t i = 0, n = 2 + rng() % 20; i < n; ++i) pts.push_back({"", u(rng), u(rng)});
    auto fit = fit_trend(pts);
    double sr = 0.0, srx = 0.0;
    for (const auto& p : pts) {
      double r = p.factuality - f_at(fit, p.abstractiveness);
      sr += r;
      srx += r * p.abstractiveness;
    }
    ASSERT_NEAR(sr, 0.0, 1e-6);
    ASSERT_NEAR(srx, 0.0, 1e-6);
    ASSERT_GE(fit.r_squared, 0.0);
    ASSERT_LE(fit.r_squared, 1.0 + 1e-12);
  }
}

TEST(FitTrend, Errors) {
  std::vector<TradeoffPoint> one{{"", 10, 50}};
  EXPECT_THROW(fit_trend(one), std::invalid_argument);
  std::vector<TradeoffPoint> flat{{"", 10, 50}, {"", 10, 60}};
  EXPECT_THROW(fit_trend(flat), std::invalid_argument);
  std::vector<TradeoffPoint> out{{"", 10, 50}, {"", 120, 60}};
  EXPECT_THROW(fit_trend(out), std::invalid_argument);
}

TEST(Pearson, Basics) {
  std::vector<double> a{1, 2, 3, 5, 8};
  std::vector<double> neg{-1, -2, -3, -5, -8};
  EXPECT_NEAR(pearson_r(a, a), 1.0, 1e-15);
  EXPECT_NEAR(pearson_r(a, neg), -1.0, 1e-15);
  std::vector<double> flat{1, 1, 1, 1, 1};
  EXPECT_THROW(pearson_r(a, flat), std::invalid_argument);
  EXPECT_THROW(pearson_r(std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
}

// Reference values from scipy.stats.pearsonr on the 17 published rows.
TEST(Pearson, PublishedColumnsMatchReference) {
  std::vector<double> mint, facth, qags;
  for (const auto& row : published::kRows) {
    mint.push_back(row.mint);
    facth.push_back(row.facth);
    qags.push_back(row.qags);
  }
  EXPECT_NEAR(pearson_r(mint, facth), -0.9079400244907776, 1e-9);
  EXPECT_NEAR(pearson_r(facth, qags), 0.9554347195625548, 1e-9);
}

}  // namespace
}  // namespace nacmint
