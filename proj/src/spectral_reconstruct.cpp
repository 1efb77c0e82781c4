#include "hrs/spectral_reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hrs/errors.hpp"

namespace hrs {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kGridTolerance = 1e-9;

// Trapezoid on the nodes of an arbitrary x grid (assumed ascending).
double trapezoid_norm2(std::span<const double> x, const std::vector<double>& f2) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (f2[i] + f2[i - 1]);
  return sum;
}

void require_nonempty(const StatsDataset& stats) {
  if (stats.empty()) throw GridMismatchError("statistics dataset is empty");
}

SpectrumSamples build_two_sided(SpectrumTarget target, const StatsDataset& stats, double dk,
                                double scale, auto&& value_at_minus, auto&& value_at_plus) {
  const std::size_t n = stats.size();
  SpectrumSamples spec;
  spec.target = target;
  spec.spacing = scale * dk;
  spec.band = scale * dk * static_cast<double>(n);
  spec.xi.resize(2 * n);
  spec.values.resize(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = scale * dk * static_cast<double>(j + 1);
    spec.xi[n - 1 - j] = -xi;
    spec.values[n - 1 - j] = value_at_minus(stats[j]);
    spec.xi[n + j] = xi;
    spec.values[n + j] = value_at_plus(stats[j]);
  }
  return spec;
}

}  // namespace

double uniform_spacing(std::span<const double> kappas) {
  if (kappas.empty()) throw GridMismatchError("empty wavenumber grid");
  const double dk = kappas.front();
  if (!(dk > 0.0)) throw GridMismatchError("wavenumber grid must start at dk > 0");
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    const double expected = dk * static_cast<double>(j + 1);
    if (std::abs(kappas[j] - expected) > kGridTolerance * std::max(1.0, expected)) {
      throw GridMismatchError("wavenumber grid is not uniform at index " + std::to_string(j) +
                              " (" + std::to_string(kappas[j]) + " vs " +
                              std::to_string(expected) + ")");
    }
  }
  return dk;
}

SpectrumSamples mean_to_fourier(const StatsDataset& stats) {
  require_nonempty(stats);
  const double dk = uniform_spacing(kappas_of(stats));
  return build_two_sided(
      SpectrumTarget::mean_f, stats, dk, 1.0,
      [](const BoundaryStats& s) { return 2.0 * kI * s.kappa * s.mean0; },
      [](const BoundaryStats& s) {
        return 2.0 * kI * s.kappa * std::polar(1.0, -s.kappa) * s.mean1;
      });
}

SpectrumSamples variance_to_fourier(const StatsDataset& stats) {
  require_nonempty(stats);
  for (const auto& s : stats) {
    if (!s.has_pseudo_variance()) {
      throw AggregationError("pseudo-variance needs at least 2 samples (kappa " +
                             std::to_string(s.kappa) + " has " + std::to_string(s.count) + ")");
    }
  }
  const double dk = uniform_spacing(kappas_of(stats));
  return build_two_sided(
      SpectrumTarget::variance_g, stats, dk, 2.0,
      [](const BoundaryStats& s) { return -4.0 * s.kappa * s.kappa * s.pvar0; },
      [](const BoundaryStats& s) {
        return -4.0 * s.kappa * s.kappa * std::polar(1.0, -2.0 * s.kappa) * s.pvar1;
      });
}

ReconstructionResult band_limited_invert(const SpectrumSamples& spectrum,
                                         std::span<const double> x_grid) {
  const std::size_t total = spectrum.xi.size();
  if (total == 0 || total % 2 != 0 || spectrum.values.size() != total) {
    throw GridMismatchError("spectrum must hold matching, symmetric xi/value arrays");
  }
  const std::size_t n = total / 2;
  const double h = spectrum.xi[n];
  if (!(h > 0.0)) throw GridMismatchError("spectrum grid must exclude the origin");
  for (std::size_t j = 0; j < n; ++j) {
    const double expected = h * static_cast<double>(j + 1);
    const double tol = kGridTolerance * std::max(1.0, expected);
    if (std::abs(spectrum.xi[n + j] - expected) > tol ||
        std::abs(spectrum.xi[n - 1 - j] + expected) > tol) {
      throw GridMismatchError("spectrum grid is not uniform and symmetric at index " +
                              std::to_string(j));
    }
  }
  for (double x : x_grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reconstruction point outside [0,1]");
  }

  // Interpolated origin, weight h; outermost nodes weight h/2.
  const Complex origin = 0.5 * (spectrum.values[n - 1] + spectrum.values[n]);
  ReconstructionResult out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.values.resize(x_grid.size());
  out.band = h * static_cast<double>(n);
  for (std::size_t p = 0; p < x_grid.size(); ++p) {
    const double x = x_grid[p];
    Complex sum = origin;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = (j + 1 == n) ? 0.5 : 1.0;
      const double xi = h * static_cast<double>(j + 1);
      const Complex c = std::polar(1.0, xi * x);
      sum += w * (spectrum.values[n + j] * c + spectrum.values[n - 1 - j] * std::conj(c));
    }
    out.values[p] = sum * (h / (2.0 * std::numbers::pi));
  }
  return out;
}

std::vector<double> sine_coefficients(const StatsDataset& stats, int modes) {
  if (modes < 1) throw DomainError("sine reconstruction needs at least one mode");
  std::vector<const BoundaryStats*> by_mode(static_cast<std::size_t>(modes) + 1, nullptr);
  for (const auto& s : stats) {
    const double ratio = s.kappa / std::numbers::pi;
    const double j = std::round(ratio);
    if (j < 1 || j > modes) continue;
    if (std::abs(s.kappa - j * std::numbers::pi) > kGridTolerance * std::max(1.0, s.kappa)) {
      continue;
    }
    by_mode[static_cast<std::size_t>(j)] = &s;
  }
  std::vector<int> missing;
  for (int j = 1; j <= modes; ++j) {
    if (!by_mode[static_cast<std::size_t>(j)]) missing.push_back(j);
  }
  if (!missing.empty()) throw IncompleteDataError(std::move(missing));

  std::vector<double> b(static_cast<std::size_t>(modes));
  for (int j = 1; j <= modes; ++j) {
    const BoundaryStats& s = *by_mode[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(j - 1)] = 2.0 * s.kappa * s.mean0.real();
  }
  return b;
}

ReconstructionResult sine_series_reconstruct(const StatsDataset& stats, int modes,
                                             std::span<const double> x_grid) {
  const auto b = sine_coefficients(stats, modes);
  for (double x : x_grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reconstruction point outside [0,1]");
  }
  ReconstructionResult out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.values.resize(x_grid.size());
  out.modes = modes;
  for (std::size_t p = 0; p < x_grid.size(); ++p) {
    double sum = 0.0;
    for (int j = 1; j <= modes; ++j) {
      sum += 2.0 * b[static_cast<std::size_t>(j - 1)] * std::sin(j * std::numbers::pi * x_grid[p]);
    }
    out.values[p] = {sum, 0.0};
  }
  return out;
}

double epsilon4(const DiscrepancyData& low_band) {
  if (low_band.empty()) throw DomainError("epsilon4 needs at least one wavenumber in (0,1)");
  double sup = 0.0;
  for (const auto& d : low_band) {
    if (!(d.kappa > 0.0 && d.kappa < 1.0)) {
      throw DomainError("epsilon4 samples must lie in (0,1), got " + std::to_string(d.kappa));
    }
    sup = std::max(sup, 2.0 * d.kappa * std::abs(d.v0.real()));
  }
  return sup;
}

ReconstructionResult clamp_nonnegative(ReconstructionResult result) {
  for (auto& v : result.values) v = {std::max(v.real(), 0.0), 0.0};
  result.l2_error.reset();
  return result;
}

std::vector<double> unit_grid(std::size_t points) {
  if (points < 2) throw DomainError("reconstruction grid needs at least 2 points");
  std::vector<double> xs(points);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return xs;
}

double l2_error(const ReconstructionResult& result, const SourceProfile& truth) {
  std::vector<double> diff2(result.x.size());
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    diff2[i] = std::norm(result.values[i] - truth(result.x[i]));
  }
  return std::sqrt(trapezoid_norm2(result.x, diff2));
}

double relative_l2_error(const ReconstructionResult& result, const SourceProfile& truth) {
  std::vector<double> t2(result.x.size());
  for (std::size_t i = 0; i < result.x.size(); ++i) t2[i] = std::norm(truth(result.x[i]));
  const double norm = std::sqrt(trapezoid_norm2(result.x, t2));
  if (norm == 0.0) throw DomainError("relative error against a zero profile");
  return l2_error(result, truth) / norm;
}

}  // namespace hrs
