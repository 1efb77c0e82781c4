#include "hrs/ensemble_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrs/errors.hpp"
#include "hrs/parallel.hpp"

namespace hrs {

void ChannelMoments::add(Complex z) {
  const double a = z.real();
  const double b = z.imag();
  re_.add(a);
  im_.add(b);
  rr_.add_product(a, a);
  ii_.add_product(b, b);
  ri_.add_product(a, b);
}

void ChannelMoments::merge(const ChannelMoments& other) {
  re_.add(other.re_);
  im_.add(other.im_);
  rr_.add(other.rr_);
  ii_.add(other.ii_);
  ri_.add(other.ri_);
}

Complex ChannelMoments::mean(std::uint64_t count) const {
  if (count == 0) return {};
  const double m = static_cast<double>(count);
  return {re_.value() / m, im_.value() / m};
}

Complex ChannelMoments::pseudo_variance(std::uint64_t count) const {
  if (count == 0) return {};
  const double m = static_cast<double>(count);
  const ExactSum neg_re = re_.negated();
  // Re: M (sum a^2 - sum b^2) - (A^2 - B^2)
  ExactSum real_part;
  real_part.add_scaled(rr_, m);
  real_part.add_scaled(ii_, -m);
  real_part.add_product(neg_re, re_);
  real_part.add_product(im_, im_);
  // Im: 2 M sum ab - 2 A B
  ExactSum imag_part;
  imag_part.add_scaled(ri_, 2.0 * m);
  imag_part.add_product(neg_re, im_);
  imag_part.add_product(neg_re, im_);
  const double m2 = m * m;
  return {real_part.value() / m2, imag_part.value() / m2};
}

double ChannelMoments::abs_spread(std::uint64_t count) const {
  if (count == 0) return 0.0;
  const double m = static_cast<double>(count);
  ExactSum d;
  d.add_scaled(rr_, m);
  d.add_scaled(ii_, m);
  d.add_product(re_.negated(), re_);
  d.add_product(im_.negated(), im_);
  return std::max(0.0, d.value() / (m * m));
}

StatsAccumulator::StatsAccumulator(double kappa) : kappa_(kappa) {}

void StatsAccumulator::accumulate(const BoundaryObservation& obs) {
  if (obs.kappa != kappa_) {
    throw AggregationError("observation at kappa " + std::to_string(obs.kappa) +
                           " added to accumulator for kappa " + std::to_string(kappa_));
  }
  add(obs.u0, obs.u1);
}

void StatsAccumulator::add(Complex u0, Complex u1) {
  ch0_.add(u0);
  ch1_.add(u1);
  ++count_;
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  if (other.kappa_ != kappa_) {
    throw AggregationError("cannot merge statistics for kappa " + std::to_string(other.kappa_) +
                           " into kappa " + std::to_string(kappa_));
  }
  ch0_.merge(other.ch0_);
  ch1_.merge(other.ch1_);
  count_ += other.count_;
}

BoundaryStats StatsAccumulator::finalize() const {
  BoundaryStats s;
  s.kappa = kappa_;
  s.count = count_;
  s.mean0 = ch0_.mean(count_);
  s.mean1 = ch1_.mean(count_);
  if (count_ >= 2) {
    s.pvar0 = ch0_.pseudo_variance(count_);
    s.pvar1 = ch1_.pseudo_variance(count_);
  }
  if (count_ >= 1) {
    const double m = static_cast<double>(count_);
    s.stderr0 = std::sqrt(ch0_.abs_spread(count_) / m);
    s.stderr1 = std::sqrt(ch1_.abs_spread(count_) / m);
  }
  return s;
}

StatsAccumulator merge(StatsAccumulator a, const StatsAccumulator& b) {
  a.merge(b);
  return a;
}

StatsDataset exact_statistics(const SourcePair& pair, const SpatialGrid& grid,
                              std::span<const double> kappas, unsigned threads) {
  pair.require_simulatable();
  const BoundaryEvaluator eval(pair, grid, kappas, /*store_phases=*/false, threads);
  StatsDataset out(kappas.size());
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    BoundaryStats& s = out[k];
    s.kappa = kappas[k];
    s.exact = true;
    s.mean0 = eval.mean_u0(k);
    s.mean1 = eval.mean_u1(k);
    s.pvar0 = eval.pseudo_variance_u0(k);
    s.pvar1 = eval.pseudo_variance_u1(k);
  }
  return out;
}

StatsDataset simulate_ensemble(const SourcePair& pair, const SpatialGrid& grid,
                               std::span<const double> kappas, const EnsembleOptions& options) {
  pair.require_simulatable();
  const BoundaryEvaluator eval(pair, grid, kappas, /*store_phases=*/true, options.threads);
  const std::size_t nk = kappas.size();
  const std::uint64_t batch = std::max<std::uint64_t>(1, options.batch_size);
  const std::uint64_t batches = (options.samples + batch - 1) / batch;

  const auto fresh = [&] {
    std::vector<StatsAccumulator> accs;
    accs.reserve(nk);
    for (double k : kappas) accs.emplace_back(k);
    return accs;
  };

  unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::uint64_t>(threads, batches));
  std::vector<std::vector<StatsAccumulator>> partial(workers);

  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    auto accs = fresh();
    std::vector<double> dW(grid.cells());
    std::vector<Complex> ito0(nk), ito1(nk);
    const std::uint64_t first = batches * w / workers;
    const std::uint64_t last = batches * (w + 1) / workers;
    for (std::uint64_t b = first; b < last; ++b) {
      auto batch_accs = fresh();
      const std::uint64_t begin = b * batch;
      const std::uint64_t end = std::min(options.samples, begin + batch);
      for (std::uint64_t r = begin; r < end; ++r) {
        sample_increments_into(grid, options.master_seed, r, dW);
        eval.ito_boundary(dW, ito0, ito1);
        for (std::size_t k = 0; k < nk; ++k) {
          batch_accs[k].add(eval.mean_u0(k) + ito0[k], eval.mean_u1(k) + ito1[k]);
        }
      }
      for (std::size_t k = 0; k < nk; ++k) accs[k].merge(batch_accs[k]);
    }
    partial[w] = std::move(accs);
  });

  auto total = fresh();
  for (const auto& worker : partial) {
    for (std::size_t k = 0; k < nk; ++k) total[k].merge(worker[k]);
  }
  StatsDataset out;
  out.reserve(nk);
  for (const auto& acc : total) out.push_back(acc.finalize());
  return out;
}

namespace {

bool same_kappa(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

}  // namespace

DiscrepancyData discrepancy(const StatsDataset& a, const StatsDataset& b) {
  if (a.size() != b.size()) {
    throw GridMismatchError("datasets have " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " wavenumbers");
  }
  DiscrepancyData out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!same_kappa(a[k].kappa, b[k].kappa)) {
      throw GridMismatchError("wavenumber grids differ at index " + std::to_string(k));
    }
    out.push_back({a[k].kappa, a[k].mean0 - b[k].mean0, a[k].mean1 - b[k].mean1,
                   a[k].pvar0 - b[k].pvar0, a[k].pvar1 - b[k].pvar1});
  }
  return out;
}

std::vector<double> kappas_of(const StatsDataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(s.kappa);
  return out;
}

}  // namespace hrs
