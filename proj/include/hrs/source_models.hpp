#pragma once

// Candidate source functions for the stochastic Helmholtz problem: the mean f,
// the standard deviation sigma and the variance g = sigma^2. All profiles live
// on [0,1] and vanish outside their support.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace hrs {

using Complex = std::complex<double>;

struct Support {
  double lo = 0.1;
  double hi = 0.9;

  friend bool operator==(const Support&, const Support&) = default;
};

enum class Parity { real, complex };

class SourceProfile;
using ProfilePtr = std::shared_ptr<const SourceProfile>;

struct ZeroShape {};

/// scale * ((x - a)(b - x))^exponent on [a, b].
struct PolynomialBump {
  double scale = 1.0;
  int exponent = 4;
};

/// Polynomial bump envelope times sin(frequency * x + phase).
struct ModulatedBump {
  double scale = 1.0;
  int exponent = 4;
  double frequency = 0.0;
  double phase = 0.0;
};

/// Piecewise-linear interpolant of (nodes, values); zero outside the nodes.
struct Tabulated {
  std::vector<double> nodes;
  std::vector<Complex> values;
};

/// Sum of coefficient * profile.
struct LinearCombination {
  std::vector<std::pair<Complex, ProfilePtr>> terms;
};

/// Pointwise square of a profile (g = sigma^2).
struct Squared {
  ProfilePtr base;
};

using Shape = std::variant<ZeroShape, PolynomialBump, ModulatedBump, Tabulated,
                           LinearCombination, Squared>;

/// Upper smoothness assigned to the zero profile; any derivative order up to
/// this is accepted.
inline constexpr int kZeroSmoothness = 64;

class SourceProfile {
 public:
  static SourceProfile zero();

  /// Polynomial bump normalized so its value at the support midpoint equals
  /// `peak`. Smoothness defaults to the exponent; the Sobolev bound defaults to
  /// the finite-difference estimate at that order.
  static SourceProfile bump(int exponent, Support support = {}, double peak = 1.0,
                            std::optional<int> smoothness = std::nullopt,
                            std::optional<double> sobolev_bound = std::nullopt);

  static SourceProfile modulated_bump(int exponent, double frequency, double phase,
                                      Support support = {}, double peak = 1.0,
                                      std::optional<int> smoothness = std::nullopt,
                                      std::optional<double> sobolev_bound = std::nullopt);

  /// Nodes must be strictly increasing inside [0,1]. Linear interpolation only
  /// supports smoothness <= 1.
  static SourceProfile tabulated(std::vector<double> nodes, std::vector<Complex> values,
                                 int smoothness = 1,
                                 std::optional<double> sobolev_bound = std::nullopt);

  static SourceProfile combination(std::vector<std::pair<Complex, SourceProfile>> terms);

  /// re + i*im from two real profiles.
  static SourceProfile complex_from_parts(const SourceProfile& re, const SourceProfile& im);

  static SourceProfile squared(const SourceProfile& base);

  /// Value at x in [0,1]; throws DomainError outside. Exactly zero outside the
  /// support, and real profiles have zero imaginary part.
  Complex operator()(double x) const;

  std::vector<Complex> sample(std::span<const double> xs) const;
  /// Real parts only; throws ParityError for complex profiles.
  std::vector<double> sample_real(std::span<const double> xs) const;

  const Shape& shape() const noexcept { return shape_; }
  Support support() const noexcept { return support_; }
  Parity parity() const noexcept { return parity_; }
  bool is_real() const noexcept { return parity_ == Parity::real; }
  int smoothness() const noexcept { return smoothness_; }
  std::optional<double> sobolev_bound() const noexcept { return sobolev_bound_; }
  bool is_zero() const noexcept { return std::holds_alternative<ZeroShape>(shape_); }

  SourceProfile with_sobolev_bound(double bound) const;
  SourceProfile with_smoothness(int n) const;

 private:
  SourceProfile(Shape shape, Support support, Parity parity, int smoothness,
                std::optional<double> bound);

  Complex evaluate_unchecked(double x) const;

  Shape shape_;
  Support support_;
  Parity parity_;
  int smoothness_;
  std::optional<double> sobolev_bound_;
};

SourceProfile operator+(const SourceProfile& a, const SourceProfile& b);
SourceProfile operator-(const SourceProfile& a, const SourceProfile& b);
SourceProfile operator*(Complex c, const SourceProfile& a);

/// sqrt(sum_{k=0..n} ||D^k f||^2_{L^2(0,1)}) from central finite differences and
/// trapezoid quadrature on `grid_size` cells. The profile is extended by zero
/// outside [0,1]. The k-th difference uses a stencil spacing of
/// max(1/grid_size, eps^(1/(k+2))) so roundoff stays below truncation error.
double sobolev_norm_estimate(const SourceProfile& profile, int n,
                             std::size_t grid_size = std::size_t{1} << 14);

/// ||f||_{L^2(0,1)} by trapezoid quadrature (the n = 0 case).
double l2_norm(const SourceProfile& profile, std::size_t grid_size = std::size_t{1} << 14);

/// Mean f and standard deviation sigma of the random source.
struct SourcePair {
  SourceProfile mean = SourceProfile::zero();
  SourceProfile stddev = SourceProfile::zero();

  /// g = sigma^2, evaluated pointwise as stddev(x)^2.
  SourceProfile variance() const { return SourceProfile::squared(stddev); }

  /// Throws ParityError unless sigma is real, DomainError if sigma < 0 at any of
  /// `probe_points` uniformly spaced nodes.
  void require_simulatable(std::size_t probe_points = 4097) const;
};

}  // namespace hrs
