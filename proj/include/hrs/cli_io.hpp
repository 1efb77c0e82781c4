#pragma once

// Run configuration (YAML), CSV persistence and the four subcommands.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrs/ensemble_stats.hpp"
#include "hrs/source_models.hpp"
#include "hrs/spectral_reconstruct.hpp"
#include "hrs/stability_lab.hpp"

namespace hrs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerification = 3;

/// Declarative description of a SourceProfile, kept so configs can be written
/// back out unchanged.
struct ProfileSpec {
  struct Term;

  /// zero | bump | modulated_bump | tabulated | combination
  std::string type = "zero";
  int exponent = 4;
  Support support;
  double peak = 1.0;
  double frequency = 0.0;
  double phase = 0.0;
  std::optional<int> smoothness;
  std::optional<double> sobolev_bound;
  /// Tabulated profiles: either inline nodes/values or a profile CSV (x, Re, Im)
  /// resolved relative to the config file.
  std::string file;
  std::vector<double> nodes;
  std::vector<Complex> values;
  std::vector<Term> terms;

  friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

struct ProfileSpec::Term {
  Complex coefficient{1.0, 0.0};
  ProfileSpec profile;

  friend bool operator==(const Term&, const Term&) = default;
};

struct PairSpec {
  ProfileSpec mean;
  ProfileSpec stddev;

  friend bool operator==(const PairSpec&, const PairSpec&) = default;
};

struct VerifySpec {
  double plancherel_band = 200.0;
  double plancherel_tolerance = 0.02;
  int sine_modes = 1000;
  std::vector<double> tail_s{5.0, 10.0};
  int tail_order = 2;
  std::vector<int> sine_tail_T{10};
  int entire_points = 20;
  double entire_radius = 50.0;
  double real_axis_s = 2.0;
  double isometry_kappa = 3.141592653589793;
  std::uint64_t isometry_samples = 20000;

  friend bool operator==(const VerifySpec&, const VerifySpec&) = default;
};

struct RunConfig {
  PairSpec sources;
  std::optional<PairSpec> reference;
  std::size_t grid_cells = 1024;
  // frequency
  double dkappa = 0.05;
  double band = 16.0;
  int modes = 16;
  double low_spacing = 0.01;
  bool include_uniform = true;
  bool include_modes = true;
  bool include_low = true;
  // monte_carlo
  std::uint64_t samples = 1000;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  // reconstruct
  ReconstructionTarget target = ReconstructionTarget::mean;
  std::size_t points = 1001;
  bool clamp_variance = false;
  // sweep
  SweepParameter sweep_parameter = SweepParameter::band;
  std::vector<double> sweep_values{8.0, 16.0, 32.0, 64.0};
  bool sweep_timing = false;
  VerifySpec verify;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Built-in configuration used when no --config is given: a smooth bump pair
/// with a distinct reference pair.
RunConfig default_config();

/// Throws ConfigError with the 1-based line of the offending entry. Tabulated
/// files are not read here.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

/// FNV-1a over the canonical text of the data blocks (sources, reference, grid,
/// frequency, monte_carlo) as 16 hex digits; output-only settings do not
/// change it.
std::string config_hash(const RunConfig& config);

/// Applies HRS_SEED (if set) to the config, logging the override to `log`.
/// Throws ConfigError for a malformed value.
void apply_seed_override(RunConfig& config, const char* env_value, std::ostream& log);

SourceProfile build_profile(const ProfileSpec& spec, const std::filesystem::path& base_dir = {});
SourcePair build_pair(const PairSpec& spec, const std::filesystem::path& base_dir = {});

/// Wavenumbers simulated by cmd_simulate: the uniform grid, then j pi, then the
/// low band, each as enabled in the config.
std::vector<double> simulation_kappas(const RunConfig& config);
SweepConfig to_sweep_config(const RunConfig& config, const std::filesystem::path& base_dir = {});

// ---- CSV ---------------------------------------------------------------

/// Every file starts with "# hrs-<kind> v1 config=<hash>" and a column line.
struct CsvHeader {
  std::string kind;
  int version = 1;
  std::string hash;
};

std::string format_double(double v);  // 17 significant digits

void write_stats_csv(std::ostream& os, const StatsDataset& stats, const std::string& hash);
StatsDataset read_stats_csv(std::istream& is, CsvHeader* header = nullptr);

void write_spectrum_csv(std::ostream& os, std::span<const double> xi,
                        std::span<const Complex> values, const std::string& hash);
void write_reconstruction_csv(std::ostream& os, const ReconstructionResult& result,
                              const std::string& hash);
ReconstructionResult read_reconstruction_csv(std::istream& is, CsvHeader* header = nullptr);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& hash);
void write_verify_csv(std::ostream& os, const std::vector<CheckReport>& checks,
                      const std::string& hash);

/// Tabulated profile input: optional '#' lines, a "x,Re,Im" column line, rows.
void read_profile_csv(std::istream& is, std::vector<double>& nodes, std::vector<Complex>& values);
void write_profile_csv(std::ostream& os, std::span<const double> x, std::span<const Complex> v);

// ---- commands ----------------------------------------------------------

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> out;
  bool force = false;
  /// reconstruct: stats file (default <out>/stats.csv) and target override.
  std::optional<std::filesystem::path> stats;
  std::optional<ReconstructionTarget> target;
  /// simulate: also dump the increments of this realization.
  std::optional<std::uint64_t> dump_increments;
  /// Value of HRS_SEED, if any.
  std::optional<std::string> seed_env;
};

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
};

/// Each command returns its exit code; library errors are mapped to codes and
/// reported on io.err.
int cmd_simulate(const CommandOptions& options, CommandIo io);
int cmd_reconstruct(const CommandOptions& options, CommandIo io);
int cmd_sweep(const CommandOptions& options, CommandIo io);
int cmd_verify(const CommandOptions& options, CommandIo io);

/// Verification checks run by cmd_verify, in report order.
std::vector<CheckReport> run_verification(const RunConfig& config,
                                          const std::filesystem::path& base_dir,
                                          unsigned threads);

ReconstructionTarget parse_target(const std::string& name);

}  // namespace hrs::cli
