#include "hrs/stability_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "hrs/errors.hpp"
#include "hrs/parallel.hpp"

namespace hrs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double closed_trapezoid(std::span<const double> samples, double h) {
  if (samples.size() < 2) return 0.0;
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t j = 1; j + 1 < samples.size(); ++j) sum += samples[j];
  return sum * h;
}

// Mode index j when kappa == j pi (relative tolerance 1e-9), else 0.
int mode_index(double kappa) {
  const double j = std::round(kappa / kPi);
  if (j < 1 || std::abs(kappa - j * kPi) > 1e-9 * std::max(1.0, kappa)) return 0;
  return static_cast<int>(j);
}

void require_order(const SourceProfile& d, int n) {
  if (n < 1) throw DomainError("Sobolev order must be at least 1");
  if (n > d.smoothness()) {
    throw SmoothnessError(fmt::format("Sobolev order {} exceeds the smoothness {} of the profiles",
                                      n, d.smoothness()));
  }
}

SourceProfile channel_difference(const SourceProfile& a, const SourceProfile& b, Channel c) {
  if (c == Channel::mean) return a - b;
  return SourceProfile::squared(a) - SourceProfile::squared(b);
}

SourcePair channel_pair(const SourceProfile& p, Channel c) {
  if (c == Channel::mean) return {p, SourceProfile::zero()};
  return {SourceProfile::zero(), p};
}

double channel_integrand(const DiscrepancyPoint& d, Channel c) {
  const double k2 = d.kappa * d.kappa;
  if (c == Channel::mean) return 4.0 * k2 * (std::norm(d.v0) + std::norm(d.v1));
  return 16.0 * k2 * k2 * (std::norm(d.w0) + std::norm(d.w1));
}

// Uniform draw in [0,1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

double half_line_trapezoid(std::span<const double> samples, double dk) {
  if (samples.empty()) return 0.0;
  double sum = samples.front();  // segment (0, dk] with the origin value = value at dk
  for (std::size_t j = 1; j < samples.size(); ++j) sum += 0.5 * (samples[j - 1] + samples[j]);
  return sum * dk;
}

Epsilon12 epsilon12(const DiscrepancyData& disc, double band) {
  if (!(band > 0.0)) throw DomainError("band must be positive");
  std::vector<double> kappas;
  for (const auto& d : disc) {
    if (d.kappa > band * (1.0 + 1e-9)) break;
    kappas.push_back(d.kappa);
  }
  if (kappas.empty()) throw GridMismatchError("no discrepancy data below the requested band");
  const double dk = uniform_spacing(kappas);
  if (std::abs(kappas.back() - band) > 1e-9 * band) {
    throw GridMismatchError(fmt::format("data cover kappa up to {} but band {} was requested",
                                        kappas.back(), band));
  }
  std::vector<double> mean_part(kappas.size()), var_part(kappas.size());
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    mean_part[j] = channel_integrand(disc[j], Channel::mean);
    var_part[j] = channel_integrand(disc[j], Channel::variance);
  }
  return {std::sqrt(half_line_trapezoid(mean_part, dk)),
          std::sqrt(half_line_trapezoid(var_part, dk))};
}

double epsilon3(const DiscrepancyData& modes, int N) {
  if (N < 1) throw DomainError("epsilon3 needs at least one mode");
  std::vector<const DiscrepancyPoint*> by_mode(static_cast<std::size_t>(N) + 1, nullptr);
  for (const auto& d : modes) {
    const int j = mode_index(d.kappa);
    if (j >= 1 && j <= N) by_mode[static_cast<std::size_t>(j)] = &d;
  }
  std::vector<int> missing;
  double sum = 0.0;
  for (int j = 1; j <= N; ++j) {
    const DiscrepancyPoint* d = by_mode[static_cast<std::size_t>(j)];
    if (!d) {
      missing.push_back(j);
      continue;
    }
    const double b = 2.0 * d->kappa * d->v0.real();
    sum += b * b;
  }
  if (!missing.empty()) throw IncompleteDataError(std::move(missing));
  return std::sqrt(sum);
}

DiscrepancyData exact_discrepancy(const SourcePair& a, const SourcePair& b,
                                  std::span<const double> kappas, const SpatialGrid& grid,
                                  unsigned threads) {
  return discrepancy(exact_statistics(a, grid, kappas, threads),
                     exact_statistics(b, grid, kappas, threads));
}

std::vector<double> uniform_kappas(double dk, double band) {
  if (!(dk > 0.0) || !(band > 0.0)) throw DomainError("dkappa and band must be positive");
  const double count = std::round(band / dk);
  if (count < 1 || std::abs(count * dk - band) > 1e-9 * band) {
    throw GridMismatchError(fmt::format("band {} is not a multiple of dkappa {}", band, dk));
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = dk * static_cast<double>(j + 1);
  return out;
}

std::vector<double> mode_kappas(int modes) {
  if (modes < 1) throw DomainError("need at least one sine mode");
  std::vector<double> out(static_cast<std::size_t>(modes));
  for (int j = 1; j <= modes; ++j) out[static_cast<std::size_t>(j - 1)] = j * kPi;
  return out;
}

std::vector<double> low_kappas(double spacing) {
  if (!(spacing > 0.0 && spacing < 1.0)) throw DomainError("low-band spacing must lie in (0,1)");
  std::vector<double> out;
  for (std::size_t j = 1;; ++j) {
    const double k = spacing * static_cast<double>(j);
    if (k >= 1.0 - 1e-12) break;
    out.push_back(k);
  }
  return out;
}

CheckReport plancherel_check(const SourcePair& a, const SourcePair& b, Channel channel,
                             double band, const QuadratureOptions& options,
                             double relative_tolerance) {
  const SpatialGrid grid(options.grid_cells);
  const auto kappas = uniform_kappas(options.dkappa, band);
  const auto eps = epsilon12(exact_discrepancy(a, b, kappas, grid, options.threads), band);
  CheckReport r;
  if (channel == Channel::mean) {
    r.name = "plancherel_mean";
    r.lhs = eps.eps1 * eps.eps1 / (2.0 * kPi);
    r.rhs = std::pow(l2_norm(a.mean - b.mean), 2);
  } else {
    r.name = "plancherel_variance";
    r.lhs = eps.eps2 * eps.eps2 / kPi;
    r.rhs = std::pow(l2_norm(a.variance() - b.variance()), 2);
  }
  r.holds = std::abs(r.lhs - r.rhs) <= relative_tolerance * r.rhs;
  r.detail = fmt::format("K={} dkappa={} ratio={:.6f}", band, options.dkappa, r.lhs / r.rhs);
  return r;
}

double sine_mode_energy(const SourceProfile& f1, const SourceProfile& f2, int J,
                        std::size_t grid_cells, unsigned threads) {
  const auto kappas = mode_kappas(J);
  const auto disc = exact_discrepancy(channel_pair(f1, Channel::mean),
                                      channel_pair(f2, Channel::mean), kappas,
                                      SpatialGrid(grid_cells), threads);
  const double e3 = epsilon3(disc, J);
  return e3 * e3;
}

CheckReport sine_parseval_check(const SourceProfile& f1, const SourceProfile& f2, int J,
                                std::size_t grid_cells, double relative_tolerance,
                                unsigned threads) {
  CheckReport r;
  r.name = "sine_parseval";
  r.lhs = 2.0 * sine_mode_energy(f1, f2, J, grid_cells, threads);
  r.rhs = std::pow(l2_norm(f1 - f2), 2);
  r.holds = std::abs(r.lhs - r.rhs) <= relative_tolerance * r.rhs;
  r.detail = fmt::format("J={} ratio={:.6f}", J, r.lhs / r.rhs);
  return r;
}

IsometryResult isometry_check(const SourceProfile& sigma, const IsometryOptions& options) {
  require_positive_wavenumber(options.kappa);
  if (options.samples < 2) throw DomainError("isometry check needs at least 2 samples");
  const SourcePair pair{SourceProfile::zero(), sigma};
  pair.require_simulatable();
  const SpatialGrid grid(options.grid_cells);
  const double kappas[] = {options.kappa};
  const BoundaryEvaluator eval(pair, grid, kappas);
  const Complex factor = 2.0 * kI * options.kappa;

  constexpr std::uint64_t kBatch = 1024;
  const std::uint64_t batches = (options.samples + kBatch - 1) / kBatch;
  const unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, batches));
  std::vector<ChannelMoments> partial(workers);
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    std::vector<double> dW(grid.cells());
    Complex ito0[1], ito1[1];
    const std::uint64_t begin = options.samples * w / workers;
    const std::uint64_t end = options.samples * (w + 1) / workers;
    for (std::uint64_t r = begin; r < end; ++r) {
      sample_increments_into(grid, options.master_seed, r, dW);
      eval.ito_boundary(dW, ito0, ito1);
      const Complex x = factor * ito0[0];
      partial[w].add(x * x);
    }
  });
  ChannelMoments total;
  for (const auto& p : partial) total.merge(p);

  IsometryResult out;
  out.estimate = total.mean(options.samples);
  out.standard_error =
      std::sqrt(total.abs_spread(options.samples) / static_cast<double>(options.samples));

  const SpatialGrid fine(std::size_t{1} << 14);
  const auto xs = fine.nodes();
  Complex quad;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = (i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0;
    const Complex s = sigma(xs[i]);
    quad += w * std::polar(1.0, 2.0 * options.kappa * xs[i]) * s * s;
  }
  out.quadrature = quad * fine.dx();

  auto& r = out.report;
  r.name = "ito_isometry";
  r.lhs = std::abs(out.estimate - out.quadrature);
  r.rhs = options.sigmas * out.standard_error;
  r.holds = r.lhs <= r.rhs;
  r.detail = fmt::format("estimate=({:.9g},{:.9g}) quadrature=({:.9g},{:.9g}) stderr={:.3g} M={}",
                         out.estimate.real(), out.estimate.imag(), out.quadrature.real(),
                         out.quadrature.imag(), out.standard_error, options.samples);
  return out;
}

CheckReport tail_bound_check(const SourceProfile& a, const SourceProfile& b, double s, int n,
                             double s_max, Channel channel, const QuadratureOptions& options) {
  if (!(s >= 1.0)) throw DomainError("tail bound check needs s >= 1");
  if (!(s_max >= 10.0 * s)) throw DomainError("tail truncation S_max must be at least 10 s");
  const SourceProfile d = channel_difference(a, b, channel);
  require_order(d, n);

  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil((s_max - s) / options.dkappa)));
  const double h = (s_max - s) / static_cast<double>(intervals);
  std::vector<double> kappas(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) kappas[j] = s + h * static_cast<double>(j);
  const auto disc = exact_discrepancy(channel_pair(a, channel), channel_pair(b, channel), kappas,
                                      SpatialGrid(options.grid_cells), options.threads);
  std::vector<double> integrand(disc.size());
  for (std::size_t j = 0; j < disc.size(); ++j) integrand[j] = channel_integrand(disc[j], channel);

  const double norm2 = std::pow(sobolev_norm_estimate(d, n), 2);
  const double decay = std::pow(s, -(2.0 * n - 1.0));
  CheckReport r;
  r.name = channel == Channel::mean ? "tail_bound_mean" : "tail_bound_variance";
  r.lhs = closed_trapezoid(integrand, h);
  r.rhs = 2.0 * decay * norm2;
  r.holds = r.lhs <= r.rhs;
  const double remainder = 2.0 * std::pow(s_max, -(2.0 * n - 1.0)) * norm2;
  r.detail = fmt::format("s={} n={} S_max={} remainder_bound={:.3g} ({:.2g} of rhs)", s, n, s_max,
                         remainder, remainder / r.rhs);
  return r;
}

CheckReport sine_tail_check(const SourceProfile& f1, const SourceProfile& f2, int T, int n,
                            int j_max, std::size_t grid_cells, unsigned threads) {
  if (T < 1) throw DomainError("sine tail check needs T >= 1");
  if (j_max < 10 * T) throw DomainError("sine tail truncation J_max must be at least 10 T");
  const SourceProfile d = f1 - f2;
  require_order(d, n);
  std::vector<double> kappas;
  for (int j = T; j <= j_max; ++j) kappas.push_back(j * kPi);
  const auto disc = exact_discrepancy(channel_pair(f1, Channel::mean),
                                      channel_pair(f2, Channel::mean), kappas,
                                      SpatialGrid(grid_cells), threads);
  double sum = 0.0;
  for (const auto& p : disc) {
    const double b = 2.0 * p.kappa * p.v0.real();
    sum += b * b;
  }
  const double norm2 = std::pow(sobolev_norm_estimate(d, n), 2);
  CheckReport r;
  r.name = "sine_tail";
  r.lhs = sum;
  r.rhs = std::pow(static_cast<double>(T), -(2.0 * n - 1.0)) * norm2;
  r.holds = r.lhs <= r.rhs;
  r.detail = fmt::format("T={} n={} J_max={}", T, n, j_max);
  return r;
}

Complex entire_extension_eval(const SourcePair& a, const SourcePair& b, ComplexFrequency s,
                              Extension which, const ExtensionOptions& options) {
  if (options.t_intervals < 1) throw DomainError("need at least one t interval");
  const SourceProfile d =
      which == Extension::I1 ? a.mean - b.mean : a.variance() - b.variance();
  const double q = which == Extension::I1 ? 1.0 : 2.0;
  const SpatialGrid grid(options.grid_cells);
  const auto xs = grid.nodes();
  std::vector<Complex> dw(xs.size()), dcw(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = ((i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0) * grid.dx();
    const Complex v = d(xs[i]);
    dw[i] = w * v;
    dcw[i] = w * std::conj(v);
  }

  const Complex sv = s.value();
  const std::size_t nt = options.t_intervals;
  Complex total;
  for (std::size_t k = 0; k <= nt; ++k) {
    const Complex z = sv * (static_cast<double>(k) / static_cast<double>(nt));
    Complex fp, gp, fm, gm;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Complex e = std::exp(kI * q * z * xs[i]);
      const Complex einv = 1.0 / e;
      fp += e * dw[i];
      gp += einv * dcw[i];
      fm += einv * dw[i];
      gm += e * dcw[i];
    }
    const double wt = (k == 0 || k == nt) ? 0.5 : 1.0;
    total += wt * (fp * gp + fm * gm);
  }
  return sv * total / static_cast<double>(nt);
}

std::vector<CheckReport> entire_bound_check(const SourcePair& a, const SourcePair& b,
                                            Extension which, int count, double radius,
                                            std::uint64_t seed, const ExtensionOptions& options,
                                            double relative_slack) {
  if (count < 1) throw DomainError("need at least one test point");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  const SourceProfile d =
      which == Extension::I1 ? a.mean - b.mean : a.variance() - b.variance();
  const double norm2 = std::pow(l2_norm(d), 2);
  const double c = which == Extension::I1 ? 2.0 : 4.0;
  std::mt19937_64 gen(seed);
  std::vector<CheckReport> out;
  for (int p = 0; p < count; ++p) {
    const double r = radius * (1.0 - unit_draw(gen));  // (0, radius]
    const double theta = (unit_draw(gen) - 0.5) * (kPi / 2.0);
    const ComplexFrequency s{r * std::cos(theta), r * std::sin(theta)};
    const Complex value = entire_extension_eval(a, b, s, which, options);
    CheckReport rep;
    rep.name = fmt::format("{}_bound", which == Extension::I1 ? "I1" : "I2");
    rep.lhs = std::abs(value);
    rep.rhs = 2.0 * std::abs(s.value()) * std::exp(c * std::abs(s.s2)) * norm2;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + relative_slack);
    rep.detail = fmt::format("s=({:.6g},{:.6g})", s.s1, s.s2);
    out.push_back(std::move(rep));
  }
  return out;
}

CheckReport extension_real_axis_check(const SourcePair& a, const SourcePair& b, double s,
                                      Extension which, const ExtensionOptions& options,
                                      double relative_tolerance) {
  if (!(s > 0.0)) throw DomainError("real-axis check needs s > 0");
  const Complex value = entire_extension_eval(a, b, {s, 0.0}, which, options);
  const double dk = s / static_cast<double>(options.t_intervals);
  const auto kappas = uniform_kappas(dk, s);
  const auto eps =
      epsilon12(exact_discrepancy(a, b, kappas, SpatialGrid(options.grid_cells)), s);
  CheckReport r;
  r.name = which == Extension::I1 ? "I1_real_axis" : "I2_real_axis";
  r.lhs = value.real();
  r.rhs = which == Extension::I1 ? eps.eps1 * eps.eps1 : eps.eps2 * eps.eps2;
  r.holds = std::abs(value - r.rhs) <= relative_tolerance * std::abs(r.rhs);
  r.detail = fmt::format("s={} Im I={:.3g}", s, value.imag());
  return r;
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::band: return "K";
    case SweepParameter::modes: return "N";
    case SweepParameter::samples: return "M";
  }
  return "?";
}

std::string to_string(ReconstructionTarget t) {
  switch (t) {
    case ReconstructionTarget::mean: return "mean";
    case ReconstructionTarget::variance: return "variance";
    case ReconstructionTarget::onesided: return "onesided";
  }
  return "?";
}

ObservationSet observe(const SourcePair& pair, const SweepConfig& config) {
  const auto two = uniform_kappas(config.dkappa, config.band);
  const auto modes = mode_kappas(config.modes);
  const auto low = low_kappas(config.low_spacing);
  std::vector<double> all;
  all.reserve(two.size() + modes.size() + low.size());
  all.insert(all.end(), two.begin(), two.end());
  all.insert(all.end(), modes.begin(), modes.end());
  all.insert(all.end(), low.begin(), low.end());

  const SpatialGrid grid(config.grid_cells);
  StatsDataset stats;
  if (config.exact) {
    stats = exact_statistics(pair, grid, all, config.threads);
  } else {
    EnsembleOptions opt;
    opt.samples = config.samples;
    opt.master_seed = config.master_seed;
    opt.threads = config.threads;
    stats = simulate_ensemble(pair, grid, all, opt);
  }
  ObservationSet out;
  const auto first = stats.begin();
  const auto mid1 = first + static_cast<std::ptrdiff_t>(two.size());
  const auto mid2 = mid1 + static_cast<std::ptrdiff_t>(modes.size());
  out.two_sided.assign(first, mid1);
  out.modes.assign(mid1, mid2);
  out.low.assign(mid2, stats.end());
  return out;
}

namespace {

SweepConfig apply_value(const SweepConfig& base, double value) {
  SweepConfig c = base;
  switch (base.parameter) {
    case SweepParameter::band:
      if (!(value > 0.0)) throw DomainError("band values must be positive");
      c.band = value;
      break;
    case SweepParameter::modes:
      if (value < 1 || value != std::round(value)) {
        throw DomainError("mode counts must be positive integers");
      }
      c.modes = static_cast<int>(value);
      break;
    case SweepParameter::samples:
      if (base.exact) throw DomainError("a samples sweep needs Monte Carlo data");
      if (value < 2 || value != std::round(value)) {
        throw DomainError("sample counts must be integers >= 2");
      }
      c.samples = static_cast<std::uint64_t>(value);
      break;
  }
  return c;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& config) {
  if (config.values.empty()) throw DomainError("sweep needs at least one value");
  const SourcePair& reference = config.reference ? *config.reference : config.truth;
  const auto xs = unit_grid(config.points);
  std::vector<SweepRow> rows;
  for (double value : config.values) {
    const auto start = std::chrono::steady_clock::now();
    const SweepConfig c = apply_value(config, value);
    const ObservationSet obs = observe(c.truth, c);
    SweepConfig exact_cfg = c;
    exact_cfg.exact = true;
    const ObservationSet ref = observe(reference, exact_cfg);

    SweepRow row;
    row.parameter = to_string(c.parameter);
    row.value = value;
    switch (c.target) {
      case ReconstructionTarget::mean:
        row.l2_error = l2_error(band_limited_invert(mean_to_fourier(obs.two_sided), xs),
                                c.truth.mean);
        break;
      case ReconstructionTarget::variance: {
        auto rec = band_limited_invert(variance_to_fourier(obs.two_sided), xs);
        if (c.clamp_variance) rec = clamp_nonnegative(std::move(rec));
        row.l2_error = l2_error(rec, c.truth.variance());
        break;
      }
      case ReconstructionTarget::onesided:
        row.l2_error = l2_error(sine_series_reconstruct(obs.modes, c.modes, xs), c.truth.mean);
        break;
    }
    const auto e12 = epsilon12(discrepancy(obs.two_sided, ref.two_sided), c.band);
    row.eps.eps1 = e12.eps1;
    row.eps.eps2 = e12.eps2;
    row.eps.eps3 = epsilon3(discrepancy(obs.modes, ref.modes), c.modes);
    row.eps.eps4 = epsilon4(discrepancy(obs.low, ref.low));
    row.eps.band = c.band;
    row.eps.modes = c.modes;
    row.eps.dkappa = c.dkappa;
    row.eps4_ok = row.eps.eps4 < 1.0;
    if (config.record_timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hrs
