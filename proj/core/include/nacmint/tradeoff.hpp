#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace nacmint {

// All abstractiveness/factuality values in this module are percentages.

struct TradeoffPoint {
  std::string label;
  double abstractiveness = 0.0;
  double factuality = 0.0;

  /// Throws std::invalid_argument unless both values are finite and in [0,100].
  void validate() const;
};

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
  double r_squared = 0.0;
};

inline constexpr double kDefaultPhi = 2.0;

/// Abstractiveness-adjusted factuality (phi * F + A) / (phi + 1).
/// Throws std::invalid_argument for out-of-range inputs or phi <= 0.
double mu_score(double factuality, double abstractiveness, double phi = kDefaultPhi);

/// Ordinary least squares of factuality on abstractiveness.
/// Throws std::invalid_argument for fewer than two points or zero spread.
TrendFit fit_trend(std::span<const TradeoffPoint> points);

/// Factuality predicted by the trend line at abstractiveness `a`.
double f_at(const TrendFit& fit, double a);

/// Sample Pearson correlation. Throws std::invalid_argument on mismatched
/// lengths, fewer than two values or zero variance.
double pearson_r(std::span<const double> a, std::span<const double> b);

}  // namespace nacmint
