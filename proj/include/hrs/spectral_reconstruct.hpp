#pragma once

// From boundary statistics to Fourier data of f and g, and back to [0,1].
// Convention: fhat(xi) = int e^{-i xi x} f(x) dx, inverse (1/2pi) int e^{i xi x}.
//
//   fhat(-kappa) = 2 i kappa E u(0,kappa)
//   fhat(+kappa) = 2 i kappa e^{-i kappa} E u(1,kappa)
//   ghat(-2 kappa) = -4 kappa^2 V u(0,kappa)
//   ghat(+2 kappa) = -4 kappa^2 e^{-2 i kappa} V u(1,kappa)

#include <optional>
#include <span>
#include <vector>

#include "hrs/ensemble_stats.hpp"
#include "hrs/source_models.hpp"

namespace hrs {

enum class SpectrumTarget { mean_f, variance_g };

struct SpectrumSamples {
  SpectrumTarget target = SpectrumTarget::mean_f;
  /// Ascending, symmetric about 0, uniform spacing, origin excluded.
  std::vector<double> xi;
  std::vector<Complex> values;
  /// Largest |xi|: K for f, 2K for g.
  double band = 0.0;
  double spacing = 0.0;
};

struct ReconstructionResult {
  std::vector<double> x;
  std::vector<Complex> values;
  double band = 0.0;  // two-sided reconstructions
  int modes = 0;      // sine-series reconstructions
  std::optional<double> l2_error;
};

/// Wavenumber grids must be kappa_j = j * dk, j = 1..n (relative tolerance
/// 1e-9); throws GridMismatchError otherwise.
double uniform_spacing(std::span<const double> kappas);

SpectrumSamples mean_to_fourier(const StatsDataset& stats);
SpectrumSamples variance_to_fourier(const StatsDataset& stats);

/// (1/2pi) sum_xi fhat(xi) e^{i xi x} w(xi) over the sampled band with
/// trapezoid weights; the missing origin is an interior node carrying the
/// average of the values at -spacing and +spacing.
ReconstructionResult band_limited_invert(const SpectrumSamples& spectrum,
                                         std::span<const double> x_grid);

/// One-sided reconstruction of a real f from data at kappa = j pi:
/// b_j = 2 j pi Re E u(0, j pi),  f_N(x) = sum_j 2 b_j sin(j pi x).
/// Throws IncompleteDataError listing every absent j in 1..modes.
ReconstructionResult sine_series_reconstruct(const StatsDataset& stats, int modes,
                                             std::span<const double> x_grid);

/// Sine coefficients b_j, j = 1..modes, from statistics at kappa = j pi.
std::vector<double> sine_coefficients(const StatsDataset& stats, int modes);

/// sup over the sampled kappa in (0,1) of 2 kappa |Re v0|.
double epsilon4(const DiscrepancyData& low_band);

/// max(Re value, 0) + 0i at each node; offered for variance reconstructions.
ReconstructionResult clamp_nonnegative(ReconstructionResult result);

/// Uniform reconstruction grid of `points` nodes on [0,1].
std::vector<double> unit_grid(std::size_t points);

/// ||rec - truth||_{L^2(0,1)} by trapezoid on the result's (uniform) x grid.
double l2_error(const ReconstructionResult& result, const SourceProfile& truth);
double relative_l2_error(const ReconstructionResult& result, const SourceProfile& truth);

}  // namespace hrs
