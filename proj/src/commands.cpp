#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "hrs/cli_io.hpp"
#include "hrs/errors.hpp"
#include "hrs/parallel.hpp"
#include "hrs/stochastic_paths.hpp"

namespace hrs::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  RunConfig config;
  fs::path base_dir;
  fs::path out_dir;
  std::string hash;
  unsigned threads = 1;
};

enum class SeedUse { optional, required_for_monte_carlo, required };

Context prepare(const CommandOptions& o, CommandIo io, SeedUse seed_use) {
  Context c;
  if (o.config) {
    c.config = load_config(*o.config);
    c.base_dir = o.config->parent_path();
  } else {
    c.config = default_config();
  }
  if (o.seed_env) apply_seed_override(c.config, o.seed_env->c_str(), io.err);
  const bool needs_seed = seed_use == SeedUse::required ||
                          (seed_use == SeedUse::required_for_monte_carlo && !c.config.exact);
  if (needs_seed && !c.config.seed) {
    throw ConfigError("monte_carlo.seed is required for Monte Carlo runs (or set HRS_SEED)");
  }
  c.out_dir = o.out ? *o.out : fs::path(c.config.output_dir);
  c.hash = config_hash(c.config);
  c.threads = o.threads == 0 ? default_thread_count() : o.threads;
  return c;
}

class OutputFile {
 public:
  OutputFile(const fs::path& dir, const std::string& name) : path_(dir / name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
    os_.open(path_, std::ios::binary | std::ios::trunc);
    if (!os_) throw std::runtime_error("cannot write " + path_.string());
  }
  std::ostream& stream() { return os_; }
  const fs::path& path() const { return path_; }
  void close() {
    os_.close();
    if (!os_) throw std::runtime_error("error while writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream os_;
};

int guarded(CommandIo io, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SmoothnessError& e) {
    io.err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParityError& e) {
    io.err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IncompleteDataError& e) {
    io.err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const SchemaError& e) {
    io.err << "schema error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    io.err << "data error: " << e.what() << "\n";
    return kExitData;
  }
}

const BoundaryStats* find_kappa(const StatsDataset& stats, double kappa) {
  for (const auto& s : stats) {
    if (std::abs(s.kappa - kappa) <= 1e-9 * std::max(1.0, kappa)) return &s;
  }
  return nullptr;
}

StatsDataset uniform_subset(const StatsDataset& stats, double dk, double band) {
  StatsDataset out;
  std::size_t missing = 0;
  double first_missing = 0.0;
  for (double k : uniform_kappas(dk, band)) {
    if (const auto* s = find_kappa(stats, k)) {
      out.push_back(*s);
      out.back().kappa = k;
    } else if (missing++ == 0) {
      first_missing = k;
    }
  }
  if (missing > 0) {
    throw GridMismatchError(fmt::format(
        "stats file lacks {} of the wavenumbers j*{} up to {} (first missing: {})", missing, dk,
        band, first_missing));
  }
  return out;
}

}  // namespace

int cmd_simulate(const CommandOptions& options, CommandIo io) {
  return guarded(io, [&] {
    const Context c = prepare(options, io, SeedUse::required_for_monte_carlo);
    const SourcePair pair = build_pair(c.config.sources, c.base_dir);
    const SpatialGrid grid(c.config.grid_cells);
    const auto kappas = simulation_kappas(c.config);
    StatsDataset stats;
    if (c.config.exact) {
      stats = exact_statistics(pair, grid, kappas, c.threads);
    } else {
      EnsembleOptions eo;
      eo.samples = c.config.samples;
      eo.master_seed = *c.config.seed;
      eo.threads = c.threads;
      stats = simulate_ensemble(pair, grid, kappas, eo);
    }
    OutputFile file(c.out_dir, "stats.csv");
    write_stats_csv(file.stream(), stats, c.hash);
    file.close();
    io.out << fmt::format("simulate: {} wavenumbers, {} -> {}\n", stats.size(),
                          c.config.exact ? std::string("exact statistics")
                                         : fmt::format("M={}", c.config.samples),
                          file.path().string());
    if (options.dump_increments) {
      const auto inc = sample_increments(grid, c.config.seed.value_or(0), *options.dump_increments);
      OutputFile dump(c.out_dir, fmt::format("increments_{}.bin", *options.dump_increments));
      write_increments(dump.stream(), inc);
      dump.close();
      io.out << "simulate: increments -> " << dump.path().string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_reconstruct(const CommandOptions& options, CommandIo io) {
  return guarded(io, [&] {
    const Context c = prepare(options, io, SeedUse::optional);
    const fs::path stats_path = options.stats ? *options.stats : c.out_dir / "stats.csv";
    std::ifstream in(stats_path, std::ios::binary);
    if (!in) throw SchemaError("cannot read stats file " + stats_path.string());
    CsvHeader header;
    const StatsDataset stats = read_stats_csv(in, &header);
    if (header.hash != c.hash) {
      if (!options.force) {
        throw SchemaError(fmt::format(
            "{} was written with config {} but the current config is {} (use --force to accept)",
            stats_path.string(), header.hash, c.hash));
      }
      io.err << fmt::format("warning: config hash mismatch ({} vs {}) accepted by --force\n",
                            header.hash, c.hash);
    }
    const ReconstructionTarget target = options.target.value_or(c.config.target);
    const SourcePair truth = build_pair(c.config.sources, c.base_dir);
    const auto xs = unit_grid(c.config.points);

    ReconstructionResult rec;
    std::vector<double> xi;
    std::vector<Complex> values;
    SourceProfile truth_profile = truth.mean;
    if (target == ReconstructionTarget::onesided) {
      rec = sine_series_reconstruct(stats, c.config.modes, xs);
      const auto b = sine_coefficients(stats, c.config.modes);
      for (std::size_t j = 0; j < b.size(); ++j) {
        xi.push_back(static_cast<double>(j + 1) * std::numbers::pi);
        values.emplace_back(b[j], 0.0);
      }
    } else {
      const auto subset = uniform_subset(stats, c.config.dkappa, c.config.band);
      const SpectrumSamples spectrum = target == ReconstructionTarget::mean
                                           ? mean_to_fourier(subset)
                                           : variance_to_fourier(subset);
      rec = band_limited_invert(spectrum, xs);
      if (target == ReconstructionTarget::variance) {
        truth_profile = truth.variance();
        if (c.config.clamp_variance) rec = clamp_nonnegative(std::move(rec));
      }
      xi = spectrum.xi;
      values = spectrum.values;
    }
    rec.l2_error = l2_error(rec, truth_profile);

    const std::string name = to_string(target);
    OutputFile spec_file(c.out_dir, "spectrum_" + name + ".csv");
    write_spectrum_csv(spec_file.stream(), xi, values, c.hash);
    spec_file.close();
    OutputFile rec_file(c.out_dir, "reconstruction_" + name + ".csv");
    write_reconstruction_csv(rec_file.stream(), rec, c.hash);
    rec_file.close();
    io.out << fmt::format("reconstruct: target={} K={} N={} l2_error={:.17g} -> {}\n", name,
                          c.config.band, c.config.modes, *rec.l2_error, rec_file.path().string());
    return kExitOk;
  });
}

int cmd_sweep(const CommandOptions& options, CommandIo io) {
  return guarded(io, [&] {
    const Context c = prepare(options, io, SeedUse::required_for_monte_carlo);
    SweepConfig sc = to_sweep_config(c.config, c.base_dir);
    sc.threads = c.threads;
    const auto rows = sweep(sc);
    OutputFile file(c.out_dir, "sweep.csv");
    write_sweep_csv(file.stream(), rows, c.hash);
    file.close();
    for (const auto& row : rows) {
      io.out << fmt::format("sweep: {}={} l2_error={:.6e} eps1={:.3e} eps2={:.3e} eps3={:.3e} "
                            "eps4={:.3e}\n",
                            row.parameter, row.value, row.l2_error, row.eps.eps1, row.eps.eps2,
                            row.eps.eps3, row.eps.eps4);
      if (!row.eps4_ok) {
        io.err << fmt::format("warning: eps4 = {:.6g} >= 1 at {}={}; the one-sided stability "
                              "estimate does not apply to this row\n",
                              row.eps.eps4, row.parameter, row.value);
      }
    }
    io.out << "sweep: -> " << file.path().string() << "\n";
    return kExitOk;
  });
}

std::vector<CheckReport> run_verification(const RunConfig& config, const fs::path& base_dir,
                                          unsigned threads) {
  const SourcePair a = build_pair(config.sources, base_dir);
  const SourcePair b = config.reference ? build_pair(*config.reference, base_dir) : SourcePair{};
  const auto& v = config.verify;
  std::vector<CheckReport> out;

  QuadratureOptions q;
  q.dkappa = config.dkappa;
  q.threads = threads;
  out.push_back(plancherel_check(a, b, Channel::mean, v.plancherel_band, q, v.plancherel_tolerance));
  out.push_back(
      plancherel_check(a, b, Channel::variance, v.plancherel_band, q, v.plancherel_tolerance));
  out.push_back(sine_parseval_check(a.mean, b.mean, v.sine_modes, std::size_t{1} << 14,
                                    v.plancherel_tolerance, threads));
  for (double s : v.tail_s) {
    out.push_back(tail_bound_check(a.mean, b.mean, s, v.tail_order, 10.0 * s, Channel::mean, q));
    out.push_back(
        tail_bound_check(a.stddev, b.stddev, s, v.tail_order, 10.0 * s, Channel::variance, q));
  }
  for (int T : v.sine_tail_T) {
    out.push_back(sine_tail_check(a.mean, b.mean, T, v.tail_order, 20 * T, std::size_t{1} << 14,
                                  threads));
  }
  const std::uint64_t seed = config.seed.value_or(0);
  for (Extension which : {Extension::I1, Extension::I2}) {
    out.push_back(extension_real_axis_check(a, b, v.real_axis_s, which));
    auto bounds = entire_bound_check(a, b, which, v.entire_points, v.entire_radius, seed);
    for (auto& r : bounds) out.push_back(std::move(r));
  }
  IsometryOptions iso;
  iso.kappa = v.isometry_kappa;
  iso.grid_cells = config.grid_cells;
  iso.samples = v.isometry_samples;
  iso.master_seed = seed;
  iso.threads = threads;
  out.push_back(isometry_check(a.stddev, iso).report);
  return out;
}

int cmd_verify(const CommandOptions& options, CommandIo io) {
  return guarded(io, [&] {
    const Context c = prepare(options, io, SeedUse::required);
    const auto checks = run_verification(c.config, c.base_dir, c.threads);

    std::ostringstream text;
    int failed = 0;
    text << "verification report (config " << c.hash << ")\n";
    for (const auto& r : checks) {
      text << fmt::format("{:<4} {:<20} lhs={:<24.17g} rhs={:<24.17g} {}\n",
                          r.holds ? "ok" : "FAIL", r.name, r.lhs, r.rhs, r.detail);
      failed += r.holds ? 0 : 1;
    }
    text << fmt::format("{} of {} checks hold\n", checks.size() - failed, checks.size());

    OutputFile csv(c.out_dir, "verify.csv");
    write_verify_csv(csv.stream(), checks, c.hash);
    csv.close();
    OutputFile txt(c.out_dir, "verify.txt");
    txt.stream() << text.str();
    txt.close();
    io.out << text.str();
    for (const auto& r : checks) {
      if (!r.holds) io.err << "check failed: " << r.name << " (" << r.detail << ")\n";
    }
    return failed == 0 ? kExitOk : kExitVerification;
  });
}

}  // namespace hrs::cli
