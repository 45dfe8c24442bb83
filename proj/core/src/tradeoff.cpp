#include "nacmint/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nacmint {

namespace {

bool is_percentage(double v) { return std::isfinite(v) && v >= 0.0 && v <= 100.0; }

}  // namespace

void TradeoffPoint::validate() const {
  if (!is_percentage(abstractiveness) || !is_percentage(factuality))
    throw std::invalid_argument("tradeoff point '" + label + "' is outside [0,100]");
}

double mu_score(double factuality, double abstractiveness, double phi) {
  if (!is_percentage(factuality) || !is_percentage(abstractiveness))
    throw std::invalid_argument("mu-score inputs must be percentages in [0,100]");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw std::invalid_argument("phi must be positive");
  return (phi * factuality + abstractiveness) / (phi + 1.0);
}

TrendFit fit_trend(std::span<const TradeoffPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("a trend line needs at least two points");
  for (const auto& p : points) p.validate();

  const double n = static_cast<double>(points.size());
  double mean_a = 0.0, mean_f = 0.0;
  for (const auto& p : points) {
    mean_a += p.abstractiveness;
    mean_f += p.factuality;
  }
  mean_a /= n;
  mean_f /= n;

  double saa = 0.0, saf = 0.0, sff = 0.0;
  for (const auto& p : points) {
    const double da = p.abstractiveness - mean_a;
    const double df = p.factuality - mean_f;
    saa += da * da;
    saf += da * df;
    sff += df * df;
  }
  if (saa <= 0.0) throw std::invalid_argument("abstractiveness values have zero spread");

  TrendFit fit;
  fit.slope = saf / saa;
  fit.intercept = mean_f - fit.slope * mean_a;
  fit.n_points = points.size();
  fit.r_squared = sff > 0.0 ? (saf * saf) / (saa * sff) : 1.0;
  return fit;
}

double f_at(const TrendFit& fit, double a) { return fit.intercept + fit.slope * a; }

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson_r: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("pearson_r: need at least two values");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) throw std::invalid_argument("pearson_r: zero variance");
  const double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace nacmint
