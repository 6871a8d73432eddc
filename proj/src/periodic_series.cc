#include "torus/periodic_series.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "torus/errors.h"

namespace torus {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

PeriodicSeries::PeriodicSeries(int truncation)
    : cos_(static_cast<size_t>(truncation), 0.0),
      sin_(static_cast<size_t>(truncation), 0.0) {
  if (truncation < 0) {
    throw TorusError(ErrorCode::kPrecondition, "negative truncation");
  }
}

PeriodicSeries::PeriodicSeries(double half_a0, std::vector<double> cos_coeffs,
                               std::vector<double> sin_coeffs)
    : half_a0_(half_a0),
      cos_(std::move(cos_coeffs)),
      sin_(std::move(sin_coeffs)) {
  if (cos_.size() != sin_.size()) {
    throw TorusError(ErrorCode::kPrecondition,
                     "cos and sin coefficient arrays differ in length");
  }
}

PeriodicSeries PeriodicSeries::Constant(double value, int truncation) {
  PeriodicSeries s(truncation);
  s.half_a0_ = value;
  return s;
}

PeriodicSeries PeriodicSeries::Mode(int n, double cos_coeff, double sin_coeff,
                                    int truncation) {
  if (n < 1 || n > truncation) {
    throw TorusError(ErrorCode::kPrecondition,
                     "mode " + std::to_string(n) + " outside truncation");
  }
  PeriodicSeries s(truncation);
  s.cos_[n - 1] = cos_coeff;
  s.sin_[n - 1] = sin_coeff;
  return s;
}

double PeriodicSeries::operator()(double theta) const {
  double value = half_a0_;
  for (int n = 1; n <= truncation(); ++n) {
    const double c = cos_[n - 1];
    const double s = sin_[n - 1];
    if (c == 0.0 && s == 0.0) continue;
    value += c * std::cos(n * theta) + s * std::sin(n * theta);
  }
  return value;
}

std::vector<double> PeriodicSeries::Sample(int points) const {
  const std::vector<double> grid = ThetaGrid(points);
  std::vector<double> out(grid.size());
  for (size_t j = 0; j < grid.size(); ++j) out[j] = (*this)(grid[j]);
  return out;
}

PeriodicSeries PeriodicSeries::Resized(int truncation) const {
  PeriodicSeries s(truncation);
  s.half_a0_ = half_a0_;
  const int common = std::min(truncation, this->truncation());
  for (int n = 1; n <= common; ++n) {
    s.cos_[n - 1] = cos_[n - 1];
    s.sin_[n - 1] = sin_[n - 1];
  }
  return s;
}

PeriodicSeries& PeriodicSeries::operator+=(const PeriodicSeries& other) {
  if (other.truncation() > truncation()) *this = Resized(other.truncation());
  half_a0_ += other.half_a0_;
  for (int n = 1; n <= other.truncation(); ++n) {
    cos_[n - 1] += other.cos_[n - 1];
    sin_[n - 1] += other.sin_[n - 1];
  }
  return *this;
}

PeriodicSeries& PeriodicSeries::operator-=(const PeriodicSeries& other) {
  if (other.truncation() > truncation()) *this = Resized(other.truncation());
  half_a0_ -= other.half_a0_;
  for (int n = 1; n <= other.truncation(); ++n) {
    cos_[n - 1] -= other.cos_[n - 1];
    sin_[n - 1] -= other.sin_[n - 1];
  }
  return *this;
}

PeriodicSeries& PeriodicSeries::operator*=(double factor) {
  half_a0_ *= factor;
  for (auto& c : cos_) c *= factor;
  for (auto& s : sin_) s *= factor;
  return *this;
}

std::vector<double> ThetaGrid(int points) {
  if (points < 1) {
    throw TorusError(ErrorCode::kPrecondition, "grid needs at least 1 point");
  }
  std::vector<double> grid(static_cast<size_t>(points));
  for (int j = 0; j < points; ++j) grid[j] = -kPi + 2.0 * kPi * j / points;
  return grid;
}

PeriodicSeries Analyze(std::span<const double> samples, int truncation) {
  const int m = static_cast<int>(samples.size());
  if (m < 2 * truncation + 1) {
    throw TorusError(ErrorCode::kUnderResolved,
                     std::to_string(m) + " samples cannot resolve " +
                         std::to_string(truncation) + " modes");
  }
  const std::vector<double> grid = ThetaGrid(m);
  PeriodicSeries out(truncation);
  double mean = 0.0;
  for (double v : samples) mean += v;
  out.set_half_a0(mean / m);
  for (int n = 1; n <= truncation; ++n) {
    double c = 0.0;
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      c += samples[j] * std::cos(n * grid[j]);
      s += samples[j] * std::sin(n * grid[j]);
    }
    out.set_cos_coeff(n, 2.0 * c / m);
    out.set_sin_coeff(n, 2.0 * s / m);
  }
  return out;
}

double Synthesize(const PeriodicSeries& series, double theta) {
  return series(theta);
}

PeriodicSeries Differentiate(const PeriodicSeries& series, int order) {
  if (order != 1 && order != 2) {
    throw TorusError(ErrorCode::kPrecondition,
                     "derivative order must be 1 or 2");
  }
  const int trunc = series.truncation();
  PeriodicSeries out(trunc);
  for (int n = 1; n <= trunc; ++n) {
    const double c = series.cos_coeff(n);
    const double s = series.sin_coeff(n);
    if (order == 1) {
      out.set_cos_coeff(n, n * s);
      out.set_sin_coeff(n, -n * c);
    } else {
      out.set_cos_coeff(n, -static_cast<double>(n) * n * c);
      out.set_sin_coeff(n, -static_cast<double>(n) * n * s);
    }
  }
  return out;
}

double BracketMean(const PeriodicSeries& series) {
  return 2.0 * kPi * series.half_a0();
}

double BracketMean(std::span<const double> samples) {
  double sum = 0.0;
  for (double v : samples) sum += v;
  return 2.0 * kPi * sum / static_cast<double>(samples.size());
}

double SobolevNorm(const PeriodicSeries& series, int order) {
  if (order < 0 || order > 2) {
    throw TorusError(ErrorCode::kPrecondition, "Sobolev order must be 0..2");
  }
  double sum = series.half_a0() * series.half_a0();
  for (int n = 1; n <= series.truncation(); ++n) {
    const double weight = std::pow(1.0 + static_cast<double>(n) * n, order);
    const double c = series.cos_coeff(n);
    const double s = series.sin_coeff(n);
    sum += weight * (c * c + s * s);
  }
  return std::sqrt(sum);
}

PeriodicSeries ProjectAdmissible(const PeriodicSeries& series,
                                 AdmissibleKind kind) {
  PeriodicSeries out = series;
  out.set_half_a0(0.0);
  if (kind == AdmissibleKind::kShape && out.truncation() >= 1) {
    out.set_cos_coeff(1, 0.0);
    out.set_sin_coeff(1, 0.0);
  }
  return out;
}

}  // namespace torus
