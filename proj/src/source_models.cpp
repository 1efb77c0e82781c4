#include "hrs/source_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrs/errors.hpp"

namespace hrs {

namespace {

double int_power(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

void require_interior_support(Support s) {
  if (!(s.lo > 0.0 && s.lo < s.hi && s.hi < 1.0)) {
    throw DomainError("support must satisfy 0 < a < b < 1, got [" + std::to_string(s.lo) +
                      ", " + std::to_string(s.hi) + "]");
  }
}

double bump_scale(Support s, int exponent, double peak) {
  const double half = 0.5 * (s.hi - s.lo);
  return peak / int_power(half * half, exponent);
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

SourceProfile::SourceProfile(Shape shape, Support support, Parity parity, int smoothness,
                             std::optional<double> bound)
    : shape_(std::move(shape)),
      support_(support),
      parity_(parity),
      smoothness_(smoothness),
      sobolev_bound_(bound) {}

SourceProfile SourceProfile::zero() {
  return SourceProfile(ZeroShape{}, Support{0.0, 1.0}, Parity::real, kZeroSmoothness, 0.0);
}

SourceProfile SourceProfile::bump(int exponent, Support support, double peak,
                                  std::optional<int> smoothness,
                                  std::optional<double> sobolev_bound) {
  require_interior_support(support);
  if (exponent < 1) throw DomainError("bump exponent must be >= 1");
  const int n = smoothness.value_or(exponent);
  if (n < 0 || n > exponent) {
    throw SmoothnessError("bump with exponent " + std::to_string(exponent) +
                          " cannot have smoothness " + std::to_string(n));
  }
  SourceProfile p(PolynomialBump{bump_scale(support, exponent, peak), exponent}, support,
                  Parity::real, n, sobolev_bound);
  if (!sobolev_bound) p.sobolev_bound_ = sobolev_norm_estimate(p, n);
  return p;
}

SourceProfile SourceProfile::modulated_bump(int exponent, double frequency, double phase,
                                            Support support, double peak,
                                            std::optional<int> smoothness,
                                            std::optional<double> sobolev_bound) {
  require_interior_support(support);
  if (exponent < 1) throw DomainError("bump exponent must be >= 1");
  const int n = smoothness.value_or(exponent);
  if (n < 0 || n > exponent) {
    throw SmoothnessError("modulated bump with exponent " + std::to_string(exponent) +
                          " cannot have smoothness " + std::to_string(n));
  }
  SourceProfile p(
      ModulatedBump{bump_scale(support, exponent, peak), exponent, frequency, phase}, support,
      Parity::real, n, sobolev_bound);
  if (!sobolev_bound) p.sobolev_bound_ = sobolev_norm_estimate(p, n);
  return p;
}

SourceProfile SourceProfile::tabulated(std::vector<double> nodes, std::vector<Complex> values,
                                       int smoothness, std::optional<double> sobolev_bound) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw DomainError("tabulated profile needs at least two nodes and one value per node");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] >= 0.0 && nodes[i] <= 1.0)) throw DomainError("tabulated node outside [0,1]");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw DomainError("tabulated nodes must be strictly increasing");
    }
  }
  if (smoothness < 0 || smoothness > 1) {
    throw SmoothnessError("piecewise-linear tabulated profiles have smoothness 0 or 1");
  }
  const bool real = std::all_of(values.begin(), values.end(),
                                [](const Complex& v) { return v.imag() == 0.0; });
  const Support s{nodes.front(), nodes.back()};
  return SourceProfile(Tabulated{std::move(nodes), std::move(values)}, s,
                       real ? Parity::real : Parity::complex, smoothness, sobolev_bound);
}

SourceProfile SourceProfile::combination(std::vector<std::pair<Complex, SourceProfile>> terms) {
  if (terms.empty()) return zero();
  LinearCombination combo;
  Support s{1.0, 0.0};
  Parity parity = Parity::real;
  int n = kZeroSmoothness;
  for (auto& [coeff, profile] : terms) {
    if (coeff.imag() != 0.0 || !profile.is_real()) parity = Parity::complex;
    if (!profile.is_zero()) {
      s.lo = std::min(s.lo, profile.support().lo);
      s.hi = std::max(s.hi, profile.support().hi);
    }
    n = std::min(n, profile.smoothness());
    combo.terms.emplace_back(coeff, std::make_shared<const SourceProfile>(std::move(profile)));
  }
  if (s.lo > s.hi) s = Support{0.0, 1.0};
  return SourceProfile(std::move(combo), s, parity, n, std::nullopt);
}

SourceProfile SourceProfile::complex_from_parts(const SourceProfile& re, const SourceProfile& im) {
  if (!re.is_real() || !im.is_real()) {
    throw ParityError("complex_from_parts expects two real profiles");
  }
  return combination({{Complex{1.0, 0.0}, re}, {Complex{0.0, 1.0}, im}});
}

SourceProfile SourceProfile::squared(const SourceProfile& base) {
  return SourceProfile(Squared{std::make_shared<const SourceProfile>(base)}, base.support(),
                       base.parity(), base.smoothness(), std::nullopt);
}

SourceProfile SourceProfile::with_sobolev_bound(double bound) const {
  SourceProfile copy = *this;
  copy.sobolev_bound_ = bound;
  return copy;
}

SourceProfile SourceProfile::with_smoothness(int n) const {
  if (n < 0) throw SmoothnessError("smoothness must be nonnegative");
  const int cap = [&] {
    if (const auto* b = std::get_if<PolynomialBump>(&shape_)) return b->exponent;
    if (const auto* b = std::get_if<ModulatedBump>(&shape_)) return b->exponent;
    if (std::holds_alternative<Tabulated>(shape_)) return 1;
    return smoothness_;
  }();
  if (n > cap) {
    throw SmoothnessError("profile supports smoothness up to " + std::to_string(cap));
  }
  SourceProfile copy = *this;
  copy.smoothness_ = n;
  return copy;
}

Complex SourceProfile::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("evaluation point " + std::to_string(x) + " outside [0,1]");
  }
  return evaluate_unchecked(x);
}

Complex SourceProfile::evaluate_unchecked(double x) const {
  if (x < support_.lo || x > support_.hi) return {0.0, 0.0};
  return std::visit(
      [&](const auto& shape) -> Complex {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, ZeroShape>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, PolynomialBump>) {
          return {shape.scale * int_power((x - support_.lo) * (support_.hi - x), shape.exponent),
                  0.0};
        } else if constexpr (std::is_same_v<T, ModulatedBump>) {
          const double envelope =
              shape.scale * int_power((x - support_.lo) * (support_.hi - x), shape.exponent);
          return {envelope * std::sin(shape.frequency * x + shape.phase), 0.0};
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          const auto& xs = shape.nodes;
          auto it = std::upper_bound(xs.begin(), xs.end(), x);
          if (it == xs.end()) return shape.values.back();
          const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
          const std::size_t lo = hi - 1;
          if (x == xs[lo]) return shape.values[lo];
          const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
          return shape.values[lo] + t * (shape.values[hi] - shape.values[lo]);
        } else if constexpr (std::is_same_v<T, LinearCombination>) {
          Complex sum{0.0, 0.0};
          for (const auto& [coeff, profile] : shape.terms) {
            sum += coeff * profile->evaluate_unchecked(x);
          }
          return sum;
        } else {
          const Complex v = shape.base->evaluate_unchecked(x);
          return v * v;
        }
      },
      shape_);
}

std::vector<Complex> SourceProfile::sample(std::span<const double> xs) const {
  std::vector<Complex> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((*this)(x));
  return out;
}

std::vector<double> SourceProfile::sample_real(std::span<const double> xs) const {
  if (!is_real()) throw ParityError("real samples requested from a complex profile");
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((*this)(x).real());
  return out;
}

SourceProfile operator+(const SourceProfile& a, const SourceProfile& b) {
  return SourceProfile::combination({{Complex{1.0, 0.0}, a}, {Complex{1.0, 0.0}, b}});
}

SourceProfile operator-(const SourceProfile& a, const SourceProfile& b) {
  return SourceProfile::combination({{Complex{1.0, 0.0}, a}, {Complex{-1.0, 0.0}, b}});
}

SourceProfile operator*(Complex c, const SourceProfile& a) {
  return SourceProfile::combination({{c, a}});
}

double sobolev_norm_estimate(const SourceProfile& profile, int n, std::size_t grid_size) {
  if (n < 0) throw SmoothnessError("derivative order must be nonnegative");
  if (n > profile.smoothness()) {
    throw SmoothnessError("derivative order " + std::to_string(n) + " exceeds smoothness " +
                          std::to_string(profile.smoothness()));
  }
  if (grid_size < 2) throw DomainError("grid_size must be at least 2");
  if (profile.is_zero()) return 0.0;

  const double h = 1.0 / static_cast<double>(grid_size);
  const auto extended = [&](double x) -> Complex {
    return (x < 0.0 || x > 1.0) ? Complex{0.0, 0.0} : profile(x);
  };

  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double step =
        std::max(h, std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2)));
    std::vector<double> weights(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
      weights[static_cast<std::size_t>(j)] = ((j % 2) ? -1.0 : 1.0) * binomial(k, j);
    }
    const double inv = 1.0 / std::pow(step, k);
    double integral = 0.0;
    for (std::size_t i = 0; i <= grid_size; ++i) {
      const double x = static_cast<double>(i) * h;
      Complex d{0.0, 0.0};
      if (k == 0) {
        d = extended(x);
      } else {
        for (int j = 0; j <= k; ++j) {
          d += weights[static_cast<std::size_t>(j)] * extended(x + (0.5 * k - j) * step);
        }
        d *= inv;
      }
      const double w = (i == 0 || i == grid_size) ? 0.5 : 1.0;
      integral += w * std::norm(d);
    }
    total += integral * h;
  }
  return std::sqrt(total);
}

double l2_norm(const SourceProfile& profile, std::size_t grid_size) {
  return sobolev_norm_estimate(profile, 0, grid_size);
}

void SourcePair::require_simulatable(std::size_t probe_points) const {
  if (!stddev.is_real()) throw ParityError("standard deviation must be real for simulation");
  if (probe_points < 2) probe_points = 2;
  for (std::size_t i = 0; i < probe_points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(probe_points - 1);
    if (stddev(x).real() < 0.0) {
      throw DomainError("standard deviation is negative at x = " + std::to_string(x));
    }
  }
}

}  // namespace hrs
