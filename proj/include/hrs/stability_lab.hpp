#pragma once

// Data-discrepancy functionals, increasing-stability sweeps and numerical
// checks of the auxiliary identities and bounds.
//
//   eps1^2 = 4  int_0^K kappa^2 (|v0|^2 + |v1|^2) dkappa
//   eps2^2 = 16 int_0^K kappa^4 (|w0|^2 + |w1|^2) dkappa
//   eps3^2 = sum_{j=1..N} (2 j pi)^2 |Re v0(j pi)|^2
//   eps4   = sup_{kappa in (0,1)} 2 kappa |Re v0(kappa)|

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrs/ensemble_stats.hpp"
#include "hrs/source_models.hpp"
#include "hrs/spectral_reconstruct.hpp"

namespace hrs {

struct EpsilonReport {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;
  double eps4 = 0.0;
  double band = 0.0;
  int modes = 0;
  double dkappa = 0.0;
};

struct Epsilon12 {
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// Trapezoid of a half-line integrand sampled at kappa_j = j dk, j = 1..n, over
/// (0, n dk]; the unsampled origin takes the value at dk (the integrands used
/// here are even in kappa). Constant integrands are integrated exactly.
double half_line_trapezoid(std::span<const double> samples, double dk);

/// Integrates over the part of `disc` with kappa <= K. Throws GridMismatchError
/// when the data do not reach K or are not uniform.
Epsilon12 epsilon12(const DiscrepancyData& disc, double band);

/// Requires every mode j pi, j = 1..N; throws IncompleteDataError otherwise.
double epsilon3(const DiscrepancyData& modes, int N);

struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::string detail;
};

enum class Channel { mean, variance };

struct QuadratureOptions {
  std::size_t grid_cells = 4096;
  double dkappa = 0.05;
  unsigned threads = 1;
};

/// Noiseless discrepancy of two source pairs on the given wavenumbers.
DiscrepancyData exact_discrepancy(const SourcePair& a, const SourcePair& b,
                                  std::span<const double> kappas, const SpatialGrid& grid,
                                  unsigned threads = 1);

/// Wavenumbers j * dk for j = 1..round(band/dk); the band must be an integer
/// multiple of dk.
std::vector<double> uniform_kappas(double dk, double band);
/// j pi, j = 1..modes.
std::vector<double> mode_kappas(int modes);
/// spacing, 2 spacing, ... strictly inside (0,1).
std::vector<double> low_kappas(double spacing = 0.01);

/// (2/pi) int kappa^2 (|v0|^2+|v1|^2) (mean) or (16/pi) int kappa^4 (|w0|^2+|w1|^2)
/// (variance) over (0, band] against ||f1-f2||^2 or ||g1-g2||^2; holds within
/// `relative_tolerance`.
CheckReport plancherel_check(const SourcePair& a, const SourcePair& b, Channel channel,
                             double band, const QuadratureOptions& options,
                             double relative_tolerance = 0.02);

/// sum_{j=1..J} (2 j pi)^2 |Re v0(j pi)|^2 from noiseless data (= eps3(J)^2).
double sine_mode_energy(const SourceProfile& f1, const SourceProfile& f2, int J,
                        std::size_t grid_cells = std::size_t{1} << 14, unsigned threads = 1);

/// Sine-series Parseval: 2 * sine_mode_energy against ||f1 - f2||^2.
CheckReport sine_parseval_check(const SourceProfile& f1, const SourceProfile& f2, int J,
                                std::size_t grid_cells = std::size_t{1} << 14,
                                double relative_tolerance = 0.02, unsigned threads = 1);

struct IsometryOptions {
  double kappa = 3.141592653589793;
  std::size_t grid_cells = 1024;
  std::uint64_t samples = 100000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  double sigmas = 5.0;
};

/// Monte Carlo mean of (2 i kappa ito_term(sigma, 0, kappa))^2 against the
/// quadrature of int_0^1 e^{2 i kappa x} sigma(x)^2 dx; holds when the gap is
/// within `sigmas` standard errors. lhs = |gap|, rhs = sigmas * stderr.
struct IsometryResult {
  Complex estimate;
  Complex quadrature;
  double standard_error = 0.0;
  CheckReport report;
};
IsometryResult isometry_check(const SourceProfile& sigma, const IsometryOptions& options);

/// lhs = 4 int_s^{s_max} kappa^2 (|v0|^2+|v1|^2) (or 16 kappa^4 |w|^2 for the
/// variance channel, where a and b are standard deviations), rhs = 2 s^{-(2n-1)}
/// ||difference||^2_{H^n}. Throws SmoothnessError when n exceeds smoothness.
CheckReport tail_bound_check(const SourceProfile& a, const SourceProfile& b, double s, int n,
                             double s_max, Channel channel = Channel::mean,
                             const QuadratureOptions& options = {});

/// lhs = sum_{j=T..J_max} (2 j pi)^2 |Re v0(j pi)|^2, rhs = T^{-(2n-1)} ||f1-f2||^2_{H^n}.
CheckReport sine_tail_check(const SourceProfile& f1, const SourceProfile& f2, int T, int n,
                            int j_max, std::size_t grid_cells = std::size_t{1} << 14,
                            unsigned threads = 1);

struct ComplexFrequency {
  double s1 = 0.0;
  double s2 = 0.0;

  Complex value() const { return {s1, s2}; }
  /// Closed sector |s2| <= s1.
  bool in_sector() const { return std::abs(s2) <= s1; }
};

enum class Extension { I1, I2 };

struct ExtensionOptions {
  std::size_t grid_cells = 1024;
  std::size_t t_intervals = 2000;
};

/// I1(s) = int_0^s |int e^{i k x} df|^2 + |int e^{-i k x} df|^2 dk continued to
/// complex s along the segment k = s t, t in [0,1] (trapezoid in t). I2 uses
/// dg = g1 - g2 and frequency 2k.
Complex entire_extension_eval(const SourcePair& a, const SourcePair& b, ComplexFrequency s,
                              Extension which, const ExtensionOptions& options = {});

/// |I(s)| <= 2 |s| e^{c |s2|} ||difference||^2 with c = 2 (I1) or 4 (I2), at
/// `count` pseudo-random sector points with |s| <= radius.
std::vector<CheckReport> entire_bound_check(const SourcePair& a, const SourcePair& b,
                                            Extension which, int count, double radius,
                                            std::uint64_t seed,
                                            const ExtensionOptions& options = {},
                                            double relative_slack = 1e-6);

/// For real s > 0, I(s) against the same integral accumulated from the
/// epsilon integrand of noiseless data on the grid kappa_j = j s / t_intervals.
/// lhs = I(s), rhs = eps1(s)^2 (I1) or eps2(s)^2 (I2); holds within
/// `relative_tolerance`.
CheckReport extension_real_axis_check(const SourcePair& a, const SourcePair& b, double s,
                                      Extension which, const ExtensionOptions& options = {},
                                      double relative_tolerance = 1e-8);

enum class SweepParameter { band, modes, samples };
enum class ReconstructionTarget { mean, variance, onesided };

std::string to_string(SweepParameter p);
std::string to_string(ReconstructionTarget t);

struct SweepConfig {
  SweepParameter parameter = SweepParameter::band;
  std::vector<double> values;
  SourcePair truth;
  /// Candidate compared against the observed data in the epsilons; defaults to
  /// the truth itself, so the epsilons measure the data noise.
  std::optional<SourcePair> reference;
  ReconstructionTarget target = ReconstructionTarget::mean;
  std::size_t grid_cells = 1024;
  double dkappa = 0.05;
  double band = 16.0;
  int modes = 16;
  std::uint64_t samples = 1000;
  bool exact = true;
  std::uint64_t master_seed = 0;
  std::size_t points = 1001;
  double low_spacing = 0.01;
  bool clamp_variance = false;
  bool record_timing = false;
  unsigned threads = 1;
};

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  double l2_error = 0.0;
  EpsilonReport eps;
  double wall_ms = 0.0;
  /// eps4 < 1 as required by the one-sided stability estimate.
  bool eps4_ok = true;
};

/// One row per value, in the given order; reproducible from config and seed.
std::vector<SweepRow> sweep(const SweepConfig& config);

/// Observed statistics and reconstruction for one parameter setting, shared by
/// the sweep and the reconstruct command.
struct ObservationSet {
  StatsDataset two_sided;  // kappa = j dk, j = 1..K/dk
  StatsDataset modes;      // kappa = j pi
  StatsDataset low;        // kappa in (0,1)
};

ObservationSet observe(const SourcePair& pair, const SweepConfig& config);

}  // namespace hrs
