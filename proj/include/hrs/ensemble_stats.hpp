#pragma once

// Monte Carlo aggregation of boundary observations into per-wavenumber means
// and pseudo-variances V(X) = E(X - EX)^2 (complex square, no conjugation).

#include <cstdint>
#include <span>
#include <vector>

#include "hrs/exact_sum.hpp"
#include "hrs/forward_solver.hpp"

namespace hrs {

struct BoundaryStats {
  double kappa = 0.0;
  /// Number of realizations; 0 together with `exact` for noiseless statistics.
  std::uint64_t count = 0;
  bool exact = false;
  Complex mean0, mean1;
  Complex pvar0, pvar1;
  /// sqrt(E|X - mean|^2 / M); tolerance proxies only, zero for exact data.
  double stderr0 = 0.0;
  double stderr1 = 0.0;

  bool has_pseudo_variance() const noexcept { return exact || count >= 2; }
};

using StatsDataset = std::vector<BoundaryStats>;

/// Raw sums of one complex channel, held exactly.
class ChannelMoments {
 public:
  void add(Complex z);
  void merge(const ChannelMoments& other);

  Complex mean(std::uint64_t count) const;
  /// Population pseudo-variance (M S2 - S1^2) / M^2, formed exactly and
  /// rounded once.
  Complex pseudo_variance(std::uint64_t count) const;
  /// E|X - mean|^2 in population form.
  double abs_spread(std::uint64_t count) const;

 private:
  ExactSum re_, im_;  // S1
  ExactSum rr_, ii_;  // sums of Re^2 and Im^2
  ExactSum ri_;       // sum of Re * Im
};

/// Streaming accumulator for one wavenumber. Because every sum is exact,
/// merge results do not depend on batch boundaries or merge order; the
/// ensemble driver still merges in ascending batch index.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(double kappa);

  /// Throws AggregationError when obs.kappa differs from this accumulator's.
  void accumulate(const BoundaryObservation& obs);
  void add(Complex u0, Complex u1);
  void merge(const StatsAccumulator& other);

  double kappa() const noexcept { return kappa_; }
  std::uint64_t count() const noexcept { return count_; }
  BoundaryStats finalize() const;

 private:
  double kappa_;
  std::uint64_t count_ = 0;
  ChannelMoments ch0_, ch1_;
};

StatsAccumulator merge(StatsAccumulator a, const StatsAccumulator& b);

/// Noiseless statistics: E u from the deterministic quadrature (the Ito term
/// has mean zero) and V u from the discrete Ito isometry of the same grid.
StatsDataset exact_statistics(const SourcePair& pair, const SpatialGrid& grid,
                              std::span<const double> kappas, unsigned threads = 1);

struct EnsembleOptions {
  std::uint64_t samples = 1000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  std::uint64_t batch_size = 1024;
};

/// Realizations 0..samples-1, each drawing its own increment stream and solved
/// at every wavenumber. Output is identical for any thread count.
StatsDataset simulate_ensemble(const SourcePair& pair, const SpatialGrid& grid,
                               std::span<const double> kappas, const EnsembleOptions& options);

struct DiscrepancyPoint {
  double kappa = 0.0;
  Complex v0, v1;  // mean differences
  Complex w0, w1;  // pseudo-variance differences
};

using DiscrepancyData = std::vector<DiscrepancyPoint>;

/// Per-wavenumber a - b; throws GridMismatchError unless both datasets share
/// the same wavenumbers.
DiscrepancyData discrepancy(const StatsDataset& a, const StatsDataset& b);

std::vector<double> kappas_of(const StatsDataset& data);

}  // namespace hrs
