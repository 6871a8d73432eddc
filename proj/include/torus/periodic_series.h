#ifndef TORUS_PERIODIC_SERIES_H_
#define TORUS_PERIODIC_SERIES_H_

#include <span>
#include <vector>

namespace torus {

// Truncated Fourier series of a 2pi-periodic function,
//
//   phi(theta) = phi_0 / 2 + sum_{n=1..N} (c_n cos(n theta) + s_n sin(n theta)),
//
// with c_n = (1/pi) int_{-pi}^{pi} phi cos(n theta) dtheta (and likewise s_n),
// so that <phi> := int_{-pi}^{pi} phi dtheta = pi * phi_0.
//
// The mean is stored as half_a0 = phi_0 / 2 (the value of the constant term).
// Mode indices are 1-based everywhere in the public interface.
class PeriodicSeries {
 public:
  PeriodicSeries() = default;
  explicit PeriodicSeries(int truncation);
  PeriodicSeries(double half_a0, std::vector<double> cos_coeffs,
                 std::vector<double> sin_coeffs);

  static PeriodicSeries Constant(double value, int truncation);
  // cos_coeff * cos(n theta) + sin_coeff * sin(n theta)
  static PeriodicSeries Mode(int n, double cos_coeff, double sin_coeff,
                             int truncation);

  int truncation() const { return static_cast<int>(cos_.size()); }

  double half_a0() const { return half_a0_; }
  void set_half_a0(double v) { half_a0_ = v; }

  double cos_coeff(int n) const { return cos_[n - 1]; }
  double sin_coeff(int n) const { return sin_[n - 1]; }
  void set_cos_coeff(int n, double v) { cos_[n - 1] = v; }
  void set_sin_coeff(int n, double v) { sin_[n - 1] = v; }

  std::span<const double> cos_coeffs() const { return cos_; }
  std::span<const double> sin_coeffs() const { return sin_; }

  // Evaluates the series at theta.
  double operator()(double theta) const;

  // Values on the equispaced grid of ThetaGrid(points).
  std::vector<double> Sample(int points) const;

  // Zero-pads or truncates to the given number of modes.
  PeriodicSeries Resized(int truncation) const;

  PeriodicSeries& operator+=(const PeriodicSeries& other);
  PeriodicSeries& operator-=(const PeriodicSeries& other);
  PeriodicSeries& operator*=(double factor);

  friend PeriodicSeries operator+(PeriodicSeries a, const PeriodicSeries& b) {
    return a += b;
  }
  friend PeriodicSeries operator-(PeriodicSeries a, const PeriodicSeries& b) {
    return a -= b;
  }
  friend PeriodicSeries operator*(double f, PeriodicSeries a) { return a *= f; }

 private:
  double half_a0_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

// theta_j = -pi + 2 pi j / points, j = 0..points-1.
std::vector<double> ThetaGrid(int points);

// Trapezoidal projection of equispaced samples onto modes 0..truncation.
// Exact for trigonometric polynomials of degree < samples.size() - truncation.
// Throws kUnderResolved when samples.size() < 2 * truncation + 1.
PeriodicSeries Analyze(std::span<const double> samples, int truncation);

double Synthesize(const PeriodicSeries& series, double theta);

// order must be 1 or 2.
PeriodicSeries Differentiate(const PeriodicSeries& series, int order);

// <phi> = int_{-pi}^{pi} phi dtheta = 2 pi half_a0.
double BracketMean(const PeriodicSeries& series);

// <f> for equispaced samples (trapezoidal rule, spectrally exact).
double BracketMean(std::span<const double> samples);

// sqrt(sum_n (1 + n^2)^k (c_n^2 + s_n^2) + half_a0^2), k in {0, 1, 2}.
double SobolevNorm(const PeriodicSeries& series, int order);

enum class AdmissibleKind {
  kShape,  // zero mean and no first harmonics (rho)
  kRate,   // zero mean (w)
};

PeriodicSeries ProjectAdmissible(const PeriodicSeries& series,
                                 AdmissibleKind kind);

}  // namespace torus

#endif  // TORUS_PERIODIC_SERIES_H_
