// Acceptance suite: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit status is 0 when every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fft_oracle.hpp"
#include "frozen.hpp"
#include "hrs/cli_io.hpp"
#include "hrs/stability_lab.hpp"

namespace fs = std::filesystem;
using hrs::SourcePair;
using hrs::SourceProfile;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

const SourceProfile kF1 = SourceProfile::bump(4, {0.1, 0.9}, 1.0);
const SourceProfile kF2 = SourceProfile::bump(4, {0.2, 0.8}, 0.8);

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += fmt::format("{}{:.4e}", s.empty() ? "" : " ", x);
  return s;
}

Outcome ito_isometry() {
  hrs::IsometryOptions o;
  o.kappa = kPi;
  o.grid_cells = 1024;
  o.samples = 100000;
  o.master_seed = 20240601;
  o.threads = 1;
  o.sigmas = 5.0;
  const auto r = hrs::isometry_check(SourceProfile::bump(4), o);
  const double rel = std::abs(r.estimate - r.quadrature) / std::abs(r.quadrature);
  return {r.report.holds, fmt::format("|gap|={:.3e} 5*stderr={:.3e} relative={:.3e}",
                                      r.report.lhs, r.report.rhs, rel)};
}

Outcome plancherel() {
  hrs::QuadratureOptions q;
  q.grid_cells = 4096;
  q.dkappa = 0.05;
  const SourcePair a{kF1, SourceProfile::zero()}, b{kF2, SourceProfile::zero()};
  const auto r = hrs::plancherel_check(a, b, hrs::Channel::mean, 400.0, q, 0.02);
  // Tail beyond K from the s^{-3} bound at n = 2, converted to the same scale.
  const double tail = 2.0 * std::pow(400.0, -3.0) *
                      std::pow(hrs::sobolev_norm_estimate(kF1 - kF2, 2), 2) / (2.0 * kPi);
  const bool pass = std::abs(r.lhs - r.rhs) <= 0.02 * r.rhs + tail;
  return {pass, fmt::format("lhs={:.10e} rhs={:.10e} ratio={:.6f} tail_budget={:.2e}", r.lhs,
                            r.rhs, r.lhs / r.rhs, tail)};
}

Outcome sine_parseval() {
  // The identity as stated: sum_{j<=1000} 4 (j pi)^2 |Re v(0, j pi)|^2 = ||f1 - f2||^2.
  const double lhs = hrs::sine_mode_energy(kF1, kF2, 1000);
  const double rhs = std::pow(hrs::l2_norm(kF1 - kF2), 2);
  const bool pass = std::abs(lhs - rhs) <= 0.02 * rhs;
  return {pass, fmt::format("lhs={:.10e} rhs={:.10e} ratio={:.6f}", lhs, rhs, lhs / rhs)};
}

Outcome two_sided(bool variance) {
  const SourcePair pair = variance ? SourcePair{SourceProfile::zero(), SourceProfile::bump(4)}
                                   : SourcePair{SourceProfile::bump(4), SourceProfile::zero()};
  const auto truth = variance ? pair.variance() : pair.mean;
  const auto stats = hrs::exact_statistics(pair, hrs::SpatialGrid(4096),
                                           hrs::uniform_kappas(0.05, 64.0));
  const auto xs = hrs::unit_grid(1001);
  std::vector<double> errors;
  for (int K : {8, 16, 32, 64}) {
    const hrs::StatsDataset part(stats.begin(), stats.begin() + K * 20);
    const auto spec = variance ? hrs::variance_to_fourier(part) : hrs::mean_to_fourier(part);
    errors.push_back(hrs::relative_l2_error(hrs::band_limited_invert(spec, xs), truth));
  }
  const double ref = variance ? frozen::kVarianceRelErrorK64 : frozen::kMeanRelErrorK64;
  const double threshold = ref + frozen::kOracleAgreement;
  const bool pass = strictly_decreasing(errors) && errors.back() <= threshold;
  return {pass, fmt::format("relative L2 over K=8,16,32,64: {}; K=64 threshold {:.6e}, "
                            "oracle gap {:.2e}",
                            list(errors), threshold, std::abs(errors.back() - ref))};
}

Outcome one_sided() {
  const oracle::Bump ob{0.1, 0.9, 4, 1.0};
  const auto f = SourceProfile::bump(4);
  const auto stats = hrs::exact_statistics({f, SourceProfile::zero()}, hrs::SpatialGrid(4096),
                                           hrs::mode_kappas(32));
  const auto xs = hrs::unit_grid(1001);
  std::vector<double> coef(33);
  for (int j = 1; j <= 32; ++j) coef[j] = ob.sine_coefficient(j);
  std::vector<double> errors;
  double worst = 0.0;
  for (int N : {4, 8, 16, 32}) {
    const auto rec = hrs::sine_series_reconstruct(stats, N, xs);
    for (std::size_t m = 0; m < xs.size(); ++m) {
      double want = 0.0;
      for (int j = 1; j <= N; ++j) want += 2.0 * coef[j] * std::sin(j * kPi * xs[m]);
      worst = std::max(worst, std::abs(rec.values[m] - want));
    }
    errors.push_back(hrs::l2_error(rec, f));
  }
  const bool pass = worst <= 1e-10 && strictly_decreasing(errors);
  return {pass, fmt::format("max node gap {:.3e}; L2 over N=4,8,16,32: {}", worst, list(errors))};
}

Outcome tail_bounds() {
  const auto a = SourceProfile::bump(6, {0.1, 0.9});
  const auto b = SourceProfile::bump(6, {0.2, 0.8}, 0.8);
  hrs::QuadratureOptions q;
  q.grid_cells = 4096;
  bool pass = true;
  std::string detail;
  auto record = [&](const hrs::CheckReport& r, const std::string& at, double seconds) {
    const bool ok = r.holds && seconds < 10.0;
    pass = pass && ok;
    detail += fmt::format("{}{}@{} {:.3e}<={:.3e} {:.1f}s{}", detail.empty() ? "" : "; ", r.name,
                          at, r.lhs, r.rhs, seconds, ok ? "" : " FAIL");
  };
  for (double s : {5.0, 10.0, 20.0}) {
    for (auto channel : {hrs::Channel::mean, hrs::Channel::variance}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = hrs::tail_bound_check(a, b, s, 2, 400.0, channel, q);
      record(r, fmt::format("s={}", s),
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
  }
  for (int T : {10, 20}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = hrs::sine_tail_check(a, b, T, 2, 1000);
    record(r, fmt::format("T={}", T),
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return {pass, detail};
}

Outcome entire_bound() {
  const SourcePair a{kF1, SourceProfile::zero()}, b{kF2, SourceProfile::zero()};
  const auto reports = hrs::entire_bound_check(a, b, hrs::Extension::I1, 20, 50.0, 7);
  int held = 0;
  double worst = 0.0;
  for (const auto& r : reports) {
    held += r.holds ? 1 : 0;
    worst = std::max(worst, r.lhs / r.rhs);
  }
  return {held == 20, fmt::format("{}/20 points within bound, max |I1|/bound = {:.4f}", held, worst)};
}

Outcome monte_carlo_rate() {
  // Large sigma keeps the K = 16 truncation bias far below the sampling noise.
  // The noise field at K = 16 has few degrees of freedom, so the error at each
  // M is the root mean square over independent replicate sweeps.
  constexpr int kReplicates = 8;
  hrs::SweepConfig c;
  c.parameter = hrs::SweepParameter::samples;
  c.values = {1e2, 1e3, 1e4, 1e5};
  c.truth = {SourceProfile::bump(4), SourceProfile::bump(4, {0.1, 0.9}, 50.0)};
  c.target = hrs::ReconstructionTarget::mean;
  c.grid_cells = 32;
  c.dkappa = 0.5;
  c.band = 16.0;
  c.modes = 1;
  c.low_spacing = 0.5;
  c.exact = false;
  c.points = 1001;
  std::vector<double> ms(c.values.size(), 0.0);
  for (int r = 0; r < kReplicates; ++r) {
    c.master_seed = 777 + static_cast<std::uint64_t>(r);
    const auto rows = hrs::sweep(c);
    for (std::size_t i = 0; i < rows.size(); ++i) ms[i] += rows[i].l2_error * rows[i].l2_error;
  }
  std::vector<double> errors, lx, ly;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    errors.push_back(std::sqrt(ms[i] / kReplicates));
    lx.push_back(std::log(c.values[i]));
    ly.push_back(std::log(errors.back()));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  c.exact = true;
  c.parameter = hrs::SweepParameter::band;
  c.values = {16.0};
  const double bias = hrs::sweep(c)[0].l2_error;
  return {slope >= -0.65 && slope <= -0.35,
          fmt::format("slope {:.4f}; RMS L2 over M ({} replicates): {}; noiseless bias {:.3e}",
                      slope, kReplicates, list(errors), bias)};
}

Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "hrs_acceptance_c10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  hrs::cli::RunConfig c = hrs::cli::default_config();
  c.grid_cells = 256;
  c.band = 8.0;
  c.modes = 8;
  c.samples = 4000;
  c.seed = 31337;
  c.sweep_parameter = hrs::SweepParameter::samples;
  c.sweep_values = {500, 2000};
  std::ofstream(dir / "run.yaml") << hrs::cli::serialize_config(c);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::string detail;
  bool pass = true;
  for (const char* cmd : {"simulate", "sweep"}) {
    for (int t : {1, 8}) {
      const std::string line =
          fmt::format("\"{}\" {} --config \"{}\" --threads {} --out \"{}\" > \"{}\" 2>&1",
                      HRS_BINARY, cmd, (dir / "run.yaml").string(), t,
                      (dir / fmt::format("t{}", t)).string(),
                      (dir / fmt::format("{}_{}.log", cmd, t)).string());
      if (std::system(line.c_str()) != 0) {
        pass = false;
        detail += fmt::format("{} --threads {} failed; ", cmd, t);
      }
    }
  }
  for (const char* file : {"stats.csv", "sweep.csv"}) {
    const auto one = slurp(dir / "t1" / file);
    const auto eight = slurp(dir / "t8" / file);
    const bool same = !one.empty() && one == eight;
    pass = pass && same;
    detail += fmt::format("{}{} {} bytes {}", detail.empty() ? "" : "; ", file, one.size(),
                          same ? "identical" : "DIFFER");
  }
  if (pass) fs::remove_all(dir);
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Ito pseudo-isometry", 60, ito_isometry},
      {2, "Plancherel identity", 30, plancherel},
      {3, "sine-Parseval identity", 10, sine_parseval},
      {4, "two-sided mean reconstruction", 0, [] { return two_sided(false); }},
      {5, "variance reconstruction", 0, [] { return two_sided(true); }},
      {6, "one-sided sine reconstruction", 0, one_sided},
      {7, "tail bounds", 0, tail_bounds},
      {8, "entire-extension bound", 0, entire_bound},
      {9, "Monte Carlo rate", 0, monte_carlo_rate},
      {10, "thread-count reproducibility", 0, reproducibility},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && s >= c.time_limit_s) {
      o.pass = false;
      o.detail += fmt::format("; exceeded {} s", c.time_limit_s);
    }
    std::printf("c%02d %s %s: %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), s);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "usage: acceptance [1-10]\n");
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
