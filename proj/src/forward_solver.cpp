#include "hrs/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hrs/errors.hpp"
#include "hrs/parallel.hpp"

namespace hrs {

namespace {

constexpr Complex kI{0.0, 1.0};

inline Complex unit_phase(double kappa, double y) { return std::polar(1.0, kappa * y); }

inline Complex inv_two_i_kappa(double kappa) { return 1.0 / (2.0 * kI * kappa); }

struct BoundarySums {
  Complex plus;   // sum_i w_i e^{+i kappa y_i} f_i
  Complex minus;  // sum_i w_i e^{-i kappa y_i} f_i
};

// Trapezoid weights over all grid nodes; f vanishes outside (0,1) for
// compactly supported sources but the endpoint weights are kept general.
BoundarySums boundary_trapezoid(std::span<const Complex> f_nodes, double kappa,
                                const SpatialGrid& grid) {
  BoundarySums s{};
  const std::size_t last = grid.cells();
  for (std::size_t i = 0; i <= last; ++i) {
    const Complex fi = f_nodes[i];
    if (fi == Complex{}) continue;
    const double w = (i == 0 || i == last) ? 0.5 : 1.0;
    const Complex c = unit_phase(kappa, grid.node(i));
    s.plus += w * (c * fi);
    s.minus += w * (std::conj(c) * fi);
  }
  return s;
}

Complex deterministic_boundary(std::span<const Complex> f_nodes, bool at_right, double kappa,
                               const SpatialGrid& grid) {
  const BoundarySums s = boundary_trapezoid(f_nodes, kappa, grid);
  if (!at_right) return s.plus * grid.dx() * inv_two_i_kappa(kappa);
  return unit_phase(kappa, 1.0) * s.minus * grid.dx() * inv_two_i_kappa(kappa);
}

// sum_i e^{i kappa y_i} sigma_i dW_i over left endpoints.
Complex ito_phase_sum(std::span<const double> sigma, std::span<const double> dW, double kappa,
                      const SpatialGrid& grid) {
  Complex s{};
  for (std::size_t i = 0; i < dW.size(); ++i) {
    const double a = sigma[i] * dW[i];
    if (a == 0.0) continue;
    s += unit_phase(kappa, grid.node(i)) * a;
  }
  return s;
}

std::vector<double> sigma_on_left_nodes(const SourceProfile& sigma, const SpatialGrid& grid) {
  if (!sigma.is_real()) throw ParityError("Ito integrand sigma must be real-valued");
  std::vector<double> out(grid.cells());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigma(grid.node(i)).real();
  return out;
}

void require_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("field point " + std::to_string(x) + " outside [0,1]");
  }
}

}  // namespace

void require_positive_wavenumber(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("wavenumber must be positive and finite, got " + std::to_string(kappa));
  }
}

Complex deterministic_term(const SourceProfile& f, double x, double kappa,
                           const SpatialGrid& grid) {
  require_positive_wavenumber(kappa);
  require_unit_interval(x);
  if (f.is_zero()) return {};
  if (x == 0.0 || x == 1.0) {
    const auto f_nodes = f.sample(grid.nodes());
    return deterministic_boundary(f_nodes, x == 1.0, kappa, grid);
  }

  // Split the cell containing the kink at y = x.
  std::vector<double> ys = grid.nodes();
  const auto pos = std::lower_bound(ys.begin(), ys.end(), x);
  if (*pos != x) ys.insert(pos, x);
  Complex sum{};
  Complex prev = unit_phase(kappa, std::abs(x - ys[0])) * f(ys[0]);
  for (std::size_t j = 1; j < ys.size(); ++j) {
    const Complex cur = unit_phase(kappa, std::abs(x - ys[j])) * f(ys[j]);
    sum += 0.5 * (ys[j] - ys[j - 1]) * (prev + cur);
    prev = cur;
  }
  return sum * inv_two_i_kappa(kappa);
}

Complex ito_term(const SourceProfile& sigma, double x, double kappa,
                 const BrownianIncrements& inc) {
  require_positive_wavenumber(kappa);
  require_unit_interval(x);
  const SpatialGrid& grid = inc.grid;
  const auto sig = sigma_on_left_nodes(sigma, grid);
  if (x == 0.0) return ito_phase_sum(sig, inc.dW, kappa, grid) * inv_two_i_kappa(kappa);
  if (x == 1.0) {
    return unit_phase(kappa, 1.0) * std::conj(ito_phase_sum(sig, inc.dW, kappa, grid)) *
           inv_two_i_kappa(kappa);
  }
  Complex s{};
  for (std::size_t i = 0; i < inc.dW.size(); ++i) {
    const double a = sig[i] * inc.dW[i];
    if (a == 0.0) continue;
    s += unit_phase(kappa, std::abs(x - grid.node(i))) * a;
  }
  return s * inv_two_i_kappa(kappa);
}

BoundaryObservation boundary_fields(const SourcePair& pair, double kappa,
                                    const SpatialGrid& grid, const BrownianIncrements& inc) {
  require_positive_wavenumber(kappa);
  if (!(inc.grid == grid)) throw GridMismatchError("increments were sampled on another grid");
  const double kappas[] = {kappa};
  const BoundaryEvaluator eval(pair, grid, kappas);
  Complex ito0[1], ito1[1];
  eval.ito_boundary(inc.dW, ito0, ito1);
  return {kappa, eval.mean_u0(0) + ito0[0], eval.mean_u1(0) + ito1[0], inc.realization_index};
}

std::vector<FieldSample> field_profile(const SourcePair& pair, double kappa,
                                       const SpatialGrid& grid, const BrownianIncrements& inc,
                                       std::span<const double> x_points) {
  require_positive_wavenumber(kappa);
  for (double x : x_points) require_unit_interval(x);
  std::vector<FieldSample> out;
  out.reserve(x_points.size());
  std::optional<BoundaryObservation> edges;
  for (double x : x_points) {
    if (x == 0.0 || x == 1.0) {
      if (!edges) edges = boundary_fields(pair, kappa, grid, inc);
      out.push_back({x, kappa, x == 0.0 ? edges->u0 : edges->u1});
      continue;
    }
    out.push_back({x, kappa,
                   deterministic_term(pair.mean, x, kappa, grid) +
                       ito_term(pair.stddev, x, kappa, inc)});
  }
  return out;
}

BoundaryEvaluator::BoundaryEvaluator(const SourcePair& pair, const SpatialGrid& grid,
                                     std::span<const double> kappas, bool store_phases,
                                     unsigned threads)
    : grid_(grid), kappas_(kappas.begin(), kappas.end()) {
  for (double k : kappas_) require_positive_wavenumber(k);
  sigma_ = sigma_on_left_nodes(pair.stddev, grid);
  const auto f_nodes = pair.mean.sample(grid.nodes());
  const std::size_t nk = kappas_.size();
  const std::size_t cells = grid.cells();

  det0_.resize(nk);
  det1_.resize(nk);
  pvar0_.resize(nk);
  pvar1_.resize(nk);
  edge_phase_.resize(nk);
  inv_two_i_kappa_.resize(nk);
  if (store_phases) phase_.resize(nk * cells);

  const double dx = grid.dx();
  parallel_for(nk, threads, [&](std::size_t k) {
    const double kappa = kappas_[k];
    edge_phase_[k] = unit_phase(kappa, 1.0);
    inv_two_i_kappa_[k] = inv_two_i_kappa(kappa);
    det0_[k] = deterministic_boundary(f_nodes, false, kappa, grid_);
    det1_[k] = deterministic_boundary(f_nodes, true, kappa, grid_);

    Complex s0{}, s1{};
    for (std::size_t i = 0; i < cells; ++i) {
      const Complex c = unit_phase(kappa, grid_.node(i));
      if (store_phases) phase_[k * cells + i] = c;
      const double g = sigma_[i] * sigma_[i];
      if (g == 0.0) continue;
      s0 += (c * c) * g;
      s1 += std::conj(c * c) * g;
    }
    const Complex scale = inv_two_i_kappa_[k] * inv_two_i_kappa_[k] * dx;
    pvar0_[k] = s0 * scale;
    pvar1_[k] = edge_phase_[k] * edge_phase_[k] * s1 * scale;
  });
}

void BoundaryEvaluator::ito_boundary(std::span<const double> dW, std::span<Complex> ito0,
                                     std::span<Complex> ito1) const {
  const std::size_t cells = grid_.cells();
  if (dW.size() != cells) throw GridMismatchError("increment count != grid cells");
  if (phase_.empty() && !kappas_.empty()) {
    throw Error("BoundaryEvaluator built without phase table cannot evaluate Ito sums");
  }
  for (std::size_t k = 0; k < kappas_.size(); ++k) {
    const Complex* c = &phase_[k * cells];
    Complex s{};
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = sigma_[i] * dW[i];
      if (a == 0.0) continue;
      s += c[i] * a;
    }
    ito0[k] = s * inv_two_i_kappa_[k];
    ito1[k] = edge_phase_[k] * std::conj(s) * inv_two_i_kappa_[k];
  }
}

}  // namespace hrs
