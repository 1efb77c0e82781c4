#pragma once

// Pathwise solution of u'' + kappa^2 u = f + sigma dW/dx with outgoing
// conditions on [0,1]:
//
//   u(x, kappa) = int e^{i kappa |x-y|} / (2 i kappa) f(y) dy
//               + int e^{i kappa |x-y|} / (2 i kappa) sigma(y) dW_y   (Ito)

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hrs/source_models.hpp"
#include "hrs/stochastic_paths.hpp"

namespace hrs {

struct BoundaryObservation {
  double kappa = 0.0;
  Complex u0;  // u(0, kappa)
  Complex u1;  // u(1, kappa)
  std::uint64_t realization_index = 0;
};

struct FieldSample {
  double x = 0.0;
  double kappa = 0.0;
  Complex u;
};

/// Composite trapezoid of int_0^1 e^{i kappa |x-y|}/(2 i kappa) f(y) dy on the
/// grid, with the cell containing x split at y = x.
Complex deterministic_term(const SourceProfile& f, double x, double kappa,
                           const SpatialGrid& grid);

/// Left-point Ito sum  sum_i e^{i kappa |x-y_i|}/(2 i kappa) sigma(y_i) dW_i.
Complex ito_term(const SourceProfile& sigma, double x, double kappa,
                 const BrownianIncrements& inc);

BoundaryObservation boundary_fields(const SourcePair& pair, double kappa,
                                    const SpatialGrid& grid, const BrownianIncrements& inc);

/// Both terms of the pathwise solution at each requested point. Points 0 and 1
/// go through the boundary evaluator and match boundary_fields bit-exactly.
std::vector<FieldSample> field_profile(const SourcePair& pair, double kappa,
                                       const SpatialGrid& grid, const BrownianIncrements& inc,
                                       std::span<const double> x_points);

/// Boundary traces for many wavenumbers sharing one grid. Source samples,
/// phases and the deterministic part are precomputed once; each realization
/// then costs one weighted phase sum per wavenumber. All single-point
/// functions above delegate here so every code path produces identical bits.
class BoundaryEvaluator {
 public:
  /// With `store_phases` false the per-realization Ito evaluation is
  /// unavailable, which keeps memory flat for large noiseless wavenumber sets.
  BoundaryEvaluator(const SourcePair& pair, const SpatialGrid& grid,
                    std::span<const double> kappas, bool store_phases = true,
                    unsigned threads = 1);

  std::size_t size() const noexcept { return kappas_.size(); }
  const std::vector<double>& kappas() const noexcept { return kappas_; }
  const SpatialGrid& grid() const noexcept { return grid_; }

  /// Deterministic parts (already divided by 2 i kappa) at x = 0 and x = 1.
  Complex mean_u0(std::size_t k) const { return det0_[k]; }
  Complex mean_u1(std::size_t k) const { return det1_[k]; }

  /// Ito parts for one realization; `dW.size()` must equal grid cells.
  void ito_boundary(std::span<const double> dW, std::span<Complex> ito0,
                    std::span<Complex> ito1) const;

  /// Exact pseudo-variances E(ito)^2 of the discrete Ito sums at x = 0, 1:
  /// sum_i e^{2 i kappa |x - y_i|} sigma(y_i)^2 dx / (2 i kappa)^2.
  Complex pseudo_variance_u0(std::size_t k) const { return pvar0_[k]; }
  Complex pseudo_variance_u1(std::size_t k) const { return pvar1_[k]; }

 private:
  SpatialGrid grid_;
  std::vector<double> kappas_;
  std::vector<double> sigma_;            // sigma(y_i), i < cells
  std::vector<Complex> phase_;           // e^{i kappa_k y_i}, row-major [k][i]
  std::vector<Complex> edge_phase_;      // e^{i kappa_k}
  std::vector<Complex> inv_two_i_kappa_; // 1 / (2 i kappa_k)
  std::vector<Complex> det0_, det1_, pvar0_, pvar1_;
};

/// Throws DomainError for kappa <= 0 or non-finite kappa.
void require_positive_wavenumber(double kappa);

}  // namespace hrs
