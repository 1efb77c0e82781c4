#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "hrs/cli_io.hpp"
#include "hrs/errors.hpp"

namespace hrs::cli {

namespace {

int line_of(const YAML::Node& n) {
  const int line = n.Mark().line;
  return line >= 0 ? line + 1 : 0;
}

template <class T>
T get(const YAML::Node& n, std::string_view what) {
  if (!n.IsScalar()) {
    throw ConfigError(fmt::format("{} must be a scalar", what), line_of(n));
  }
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{} has an invalid value '{}'", what, n.Scalar()), line_of(n));
  }
}

void require_map(const YAML::Node& n, std::string_view what) {
  if (!n.IsMap()) throw ConfigError(fmt::format("{} must be a mapping", what), line_of(n));
}

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                std::string_view block) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError(fmt::format("unknown key '{}' in {}", key, block), line_of(kv.first));
    }
  }
}

template <class T>
void read_if(const YAML::Node& map, const char* key, T& target, std::string_view block) {
  if (const auto n = map[key]) target = get<T>(n, fmt::format("{}.{}", block, key));
}

Complex read_complex(const YAML::Node& n, std::string_view what) {
  if (n.IsSequence()) {
    if (n.size() != 2) throw ConfigError(fmt::format("{} must be [re, im]", what), line_of(n));
    return {get<double>(n[0], what), get<double>(n[1], what)};
  }
  return {get<double>(n, what), 0.0};
}

ProfileSpec parse_profile(const YAML::Node& n, const std::string& where) {
  require_map(n, where);
  check_keys(n,
             {"type", "exponent", "support", "peak", "frequency", "phase", "smoothness",
              "sobolev_bound", "file", "nodes", "values", "terms"},
             where);
  ProfileSpec p;
  if (!n["type"]) throw ConfigError(where + " needs a type", line_of(n));
  p.type = get<std::string>(n["type"], where + ".type");
  read_if(n, "exponent", p.exponent, where);
  read_if(n, "peak", p.peak, where);
  read_if(n, "frequency", p.frequency, where);
  read_if(n, "phase", p.phase, where);
  if (const auto s = n["smoothness"]) p.smoothness = get<int>(s, where + ".smoothness");
  if (const auto s = n["sobolev_bound"]) p.sobolev_bound = get<double>(s, where + ".sobolev_bound");
  if (const auto s = n["support"]) {
    if (!s.IsSequence() || s.size() != 2) {
      throw ConfigError(where + ".support must be [lo, hi]", line_of(s));
    }
    p.support = {get<double>(s[0], where + ".support"), get<double>(s[1], where + ".support")};
    if (!(0.0 <= p.support.lo && p.support.lo < p.support.hi && p.support.hi <= 1.0)) {
      throw ConfigError(where + ".support must satisfy 0 <= lo < hi <= 1", line_of(s));
    }
  }
  read_if(n, "file", p.file, where);
  if (const auto s = n["nodes"]) {
    if (!s.IsSequence()) throw ConfigError(where + ".nodes must be a list", line_of(s));
    for (const auto& v : s) p.nodes.push_back(get<double>(v, where + ".nodes"));
  }
  if (const auto s = n["values"]) {
    if (!s.IsSequence()) throw ConfigError(where + ".values must be a list", line_of(s));
    for (const auto& v : s) p.values.push_back(read_complex(v, where + ".values"));
  }
  if (const auto s = n["terms"]) {
    if (!s.IsSequence()) throw ConfigError(where + ".terms must be a list", line_of(s));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto t = s[i];
      const std::string tw = fmt::format("{}.terms[{}]", where, i);
      require_map(t, tw);
      check_keys(t, {"coefficient", "profile"}, tw);
      ProfileSpec::Term term;
      if (const auto c = t["coefficient"]) term.coefficient = read_complex(c, tw + ".coefficient");
      if (!t["profile"]) throw ConfigError(tw + " needs a profile", line_of(t));
      term.profile = parse_profile(t["profile"], tw + ".profile");
      p.terms.push_back(std::move(term));
    }
  }

  const int line = line_of(n["type"]);
  if (p.type == "tabulated") {
    if (p.file.empty() && p.nodes.empty()) {
      throw ConfigError(where + ": tabulated profile needs a file or nodes", line);
    }
    if (p.nodes.size() != p.values.size()) {
      throw ConfigError(where + ": nodes and values differ in length", line);
    }
  } else if (p.type == "combination") {
    if (p.terms.empty()) throw ConfigError(where + ": combination needs terms", line);
  } else if (p.type == "bump" || p.type == "modulated_bump") {
    if (p.exponent < 1) throw ConfigError(where + ".exponent must be at least 1", line);
  } else if (p.type != "zero") {
    throw ConfigError(fmt::format("{}: unknown profile type '{}'", where, p.type), line);
  }
  return p;
}

PairSpec parse_pair(const YAML::Node& n, const std::string& where) {
  require_map(n, where);
  check_keys(n, {"mean", "stddev"}, where);
  PairSpec p;
  if (const auto m = n["mean"]) p.mean = parse_profile(m, where + ".mean");
  if (const auto s = n["stddev"]) p.stddev = parse_profile(s, where + ".stddev");
  return p;
}

template <class T>
std::vector<T> read_list(const YAML::Node& n, std::string_view what) {
  if (!n.IsSequence()) throw ConfigError(fmt::format("{} must be a list", what), line_of(n));
  std::vector<T> out;
  for (const auto& v : n) out.push_back(get<T>(v, what));
  return out;
}

SweepParameter parse_parameter(const YAML::Node& n) {
  const auto s = get<std::string>(n, "sweep.parameter");
  if (s == "K") return SweepParameter::band;
  if (s == "N") return SweepParameter::modes;
  if (s == "M") return SweepParameter::samples;
  throw ConfigError("sweep.parameter must be K, N or M", line_of(n));
}

// ---- emission ----

std::string num(double v) { return fmt::format("{}", v); }

void emit_complex(YAML::Emitter& e, Complex c) {
  e << YAML::Flow << YAML::BeginSeq << num(c.real()) << num(c.imag()) << YAML::EndSeq;
}

void emit_profile(YAML::Emitter& e, const ProfileSpec& p) {
  e << YAML::BeginMap;
  e << YAML::Key << "type" << YAML::Value << p.type;
  // Shape keys are written for bump types, and for any type when they differ
  // from the defaults, so parse(serialize(c)) == c.
  const ProfileSpec defaults;
  const bool bump_like = p.type == "bump" || p.type == "modulated_bump";
  if (bump_like || p.exponent != defaults.exponent) {
    e << YAML::Key << "exponent" << YAML::Value << p.exponent;
  }
  if (bump_like || p.support.lo != defaults.support.lo || p.support.hi != defaults.support.hi) {
    e << YAML::Key << "support" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << num(p.support.lo) << num(p.support.hi) << YAML::EndSeq;
  }
  if (bump_like || p.peak != defaults.peak) e << YAML::Key << "peak" << YAML::Value << num(p.peak);
  if (p.type == "modulated_bump" || p.frequency != 0.0 || p.phase != 0.0) {
    e << YAML::Key << "frequency" << YAML::Value << num(p.frequency);
    e << YAML::Key << "phase" << YAML::Value << num(p.phase);
  }
  if (p.smoothness) e << YAML::Key << "smoothness" << YAML::Value << *p.smoothness;
  if (p.sobolev_bound) e << YAML::Key << "sobolev_bound" << YAML::Value << num(*p.sobolev_bound);
  if (!p.file.empty()) e << YAML::Key << "file" << YAML::Value << p.file;
  if (!p.nodes.empty()) {
    e << YAML::Key << "nodes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double x : p.nodes) e << num(x);
    e << YAML::EndSeq;
    e << YAML::Key << "values" << YAML::Value << YAML::BeginSeq;
    for (Complex v : p.values) emit_complex(e, v);
    e << YAML::EndSeq;
  }
  if (!p.terms.empty()) {
    e << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : p.terms) {
      e << YAML::BeginMap << YAML::Key << "coefficient" << YAML::Value;
      emit_complex(e, t.coefficient);
      e << YAML::Key << "profile" << YAML::Value;
      emit_profile(e, t.profile);
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
}

void emit_pair(YAML::Emitter& e, const char* key, const PairSpec& p) {
  e << YAML::Key << key << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mean" << YAML::Value;
  emit_profile(e, p.mean);
  e << YAML::Key << "stddev" << YAML::Value;
  emit_profile(e, p.stddev);
  e << YAML::EndMap;
}

void emit_data_blocks(YAML::Emitter& e, const RunConfig& c) {
  emit_pair(e, "sources", c.sources);
  if (c.reference) {
    emit_pair(e, "reference", *c.reference);
  } else {
    e << YAML::Key << "reference" << YAML::Value << YAML::Null;
  }
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "cells" << YAML::Value << c.grid_cells << YAML::EndMap;
  e << YAML::Key << "frequency" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dkappa" << YAML::Value << num(c.dkappa);
  e << YAML::Key << "K" << YAML::Value << num(c.band);
  e << YAML::Key << "N" << YAML::Value << c.modes;
  e << YAML::Key << "low_spacing" << YAML::Value << num(c.low_spacing);
  e << YAML::Key << "uniform" << YAML::Value << c.include_uniform;
  e << YAML::Key << "modes" << YAML::Value << c.include_modes;
  e << YAML::Key << "low" << YAML::Value << c.include_low;
  e << YAML::EndMap;
  e << YAML::Key << "monte_carlo" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "samples" << YAML::Value << c.samples;
  if (c.seed) {
    e << YAML::Key << "seed" << YAML::Value << *c.seed;
  } else {
    e << YAML::Key << "seed" << YAML::Value << YAML::Null;
  }
  e << YAML::Key << "exact" << YAML::Value << c.exact;
  e << YAML::EndMap;
}

template <class T>
void emit_list(YAML::Emitter& e, const char* key, const std::vector<T>& values) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) {
    if constexpr (std::is_floating_point_v<T>) {
      e << num(v);
    } else {
      e << v;
    }
  }
  e << YAML::EndSeq;
}

}  // namespace

ReconstructionTarget parse_target(const std::string& name) {
  if (name == "mean") return ReconstructionTarget::mean;
  if (name == "variance") return ReconstructionTarget::variance;
  if (name == "onesided") return ReconstructionTarget::onesided;
  throw ConfigError("target must be mean, variance or onesided, got '" + name + "'");
}

namespace {

ProfileSpec bump_spec(double lo, double hi, double peak) {
  ProfileSpec p;
  p.type = "bump";
  p.exponent = 4;
  p.support = {lo, hi};
  p.peak = peak;
  return p;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.sources.mean = bump_spec(0.1, 0.9, 1.0);
  c.sources.stddev = bump_spec(0.1, 0.9, 0.5);
  c.reference = PairSpec{bump_spec(0.2, 0.8, 0.8), bump_spec(0.15, 0.85, 0.4)};
  c.seed = 1;
  return c;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax error: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  RunConfig c = default_config();
  if (root.IsNull()) return c;
  require_map(root, "config");
  check_keys(root,
             {"sources", "reference", "grid", "frequency", "monte_carlo", "reconstruct", "sweep",
              "verify", "output"},
             "config");

  if (const auto n = root["sources"]) c.sources = parse_pair(n, "sources");
  if (const auto n = root["reference"]) {
    c.reference = n.IsNull() ? std::nullopt : std::optional(parse_pair(n, "reference"));
  }
  if (const auto n = root["grid"]) {
    require_map(n, "grid");
    check_keys(n, {"cells"}, "grid");
    read_if(n, "cells", c.grid_cells, "grid");
    if (c.grid_cells < 2) throw ConfigError("grid.cells must be at least 2", line_of(n["cells"]));
  }
  if (const auto n = root["frequency"]) {
    require_map(n, "frequency");
    check_keys(n, {"dkappa", "K", "N", "low_spacing", "uniform", "modes", "low"}, "frequency");
    read_if(n, "dkappa", c.dkappa, "frequency");
    read_if(n, "K", c.band, "frequency");
    read_if(n, "N", c.modes, "frequency");
    read_if(n, "low_spacing", c.low_spacing, "frequency");
    read_if(n, "uniform", c.include_uniform, "frequency");
    read_if(n, "modes", c.include_modes, "frequency");
    read_if(n, "low", c.include_low, "frequency");
    const int line = line_of(n);
    if (!(c.dkappa > 0.0)) throw ConfigError("frequency.dkappa must be positive", line);
    const double ratio = c.band / c.dkappa;
    if (!(c.band > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ConfigError("frequency.K must be a positive integer multiple of dkappa",
                        n["K"] ? line_of(n["K"]) : line);
    }
    if (c.modes < 1) throw ConfigError("frequency.N must be at least 1", line);
    if (!(c.low_spacing > 0.0 && c.low_spacing < 1.0)) {
      throw ConfigError("frequency.low_spacing must lie in (0,1)", line);
    }
  }
  if (const auto n = root["monte_carlo"]) {
    require_map(n, "monte_carlo");
    check_keys(n, {"samples", "seed", "exact"}, "monte_carlo");
    read_if(n, "samples", c.samples, "monte_carlo");
    read_if(n, "exact", c.exact, "monte_carlo");
    if (const auto s = n["seed"]) {
      if (s.IsNull()) {
        c.seed.reset();
      } else {
        c.seed = get<std::uint64_t>(s, "monte_carlo.seed");
      }
    }
    if (!c.exact && c.samples < 2) {
      throw ConfigError("monte_carlo.samples must be at least 2 unless exact is set",
                        n["samples"] ? line_of(n["samples"]) : line_of(n));
    }
  }
  if (const auto n = root["reconstruct"]) {
    require_map(n, "reconstruct");
    check_keys(n, {"target", "points", "clamp_variance"}, "reconstruct");
    if (const auto t = n["target"]) {
      try {
        c.target = parse_target(get<std::string>(t, "reconstruct.target"));
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_of(t));
      }
    }
    read_if(n, "points", c.points, "reconstruct");
    read_if(n, "clamp_variance", c.clamp_variance, "reconstruct");
    if (c.points < 2) throw ConfigError("reconstruct.points must be at least 2", line_of(n));
  }
  if (const auto n = root["sweep"]) {
    require_map(n, "sweep");
    check_keys(n, {"parameter", "values", "timing"}, "sweep");
    if (const auto p = n["parameter"]) c.sweep_parameter = parse_parameter(p);
    if (const auto v = n["values"]) c.sweep_values = read_list<double>(v, "sweep.values");
    read_if(n, "timing", c.sweep_timing, "sweep");
    if (c.sweep_values.empty()) throw ConfigError("sweep.values must not be empty", line_of(n));
  }
  if (const auto n = root["verify"]) {
    require_map(n, "verify");
    check_keys(n,
               {"plancherel_band", "plancherel_tolerance", "sine_modes", "tail_s", "tail_order",
                "sine_tail_T", "entire_points", "entire_radius", "real_axis_s", "isometry_kappa",
                "isometry_samples"},
               "verify");
    auto& v = c.verify;
    read_if(n, "plancherel_band", v.plancherel_band, "verify");
    read_if(n, "plancherel_tolerance", v.plancherel_tolerance, "verify");
    read_if(n, "sine_modes", v.sine_modes, "verify");
    if (const auto s = n["tail_s"]) v.tail_s = read_list<double>(s, "verify.tail_s");
    read_if(n, "tail_order", v.tail_order, "verify");
    if (const auto s = n["sine_tail_T"]) v.sine_tail_T = read_list<int>(s, "verify.sine_tail_T");
    read_if(n, "entire_points", v.entire_points, "verify");
    read_if(n, "entire_radius", v.entire_radius, "verify");
    read_if(n, "real_axis_s", v.real_axis_s, "verify");
    read_if(n, "isometry_kappa", v.isometry_kappa, "verify");
    read_if(n, "isometry_samples", v.isometry_samples, "verify");
  }
  if (const auto n = root["output"]) {
    require_map(n, "output");
    check_keys(n, {"dir"}, "output");
    read_if(n, "dir", c.output_dir, "output");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_data_blocks(e, c);
  e << YAML::Key << "reconstruct" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "target" << YAML::Value << to_string(c.target);
  e << YAML::Key << "points" << YAML::Value << c.points;
  e << YAML::Key << "clamp_variance" << YAML::Value << c.clamp_variance;
  e << YAML::EndMap;
  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "parameter" << YAML::Value << to_string(c.sweep_parameter);
  emit_list(e, "values", c.sweep_values);
  e << YAML::Key << "timing" << YAML::Value << c.sweep_timing;
  e << YAML::EndMap;
  const auto& v = c.verify;
  e << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "plancherel_band" << YAML::Value << num(v.plancherel_band);
  e << YAML::Key << "plancherel_tolerance" << YAML::Value << num(v.plancherel_tolerance);
  e << YAML::Key << "sine_modes" << YAML::Value << v.sine_modes;
  emit_list(e, "tail_s", v.tail_s);
  e << YAML::Key << "tail_order" << YAML::Value << v.tail_order;
  emit_list(e, "sine_tail_T", v.sine_tail_T);
  e << YAML::Key << "entire_points" << YAML::Value << v.entire_points;
  e << YAML::Key << "entire_radius" << YAML::Value << num(v.entire_radius);
  e << YAML::Key << "real_axis_s" << YAML::Value << num(v.real_axis_s);
  e << YAML::Key << "isometry_kappa" << YAML::Value << num(v.isometry_kappa);
  e << YAML::Key << "isometry_samples" << YAML::Value << v.isometry_samples;
  e << YAML::EndMap;
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << c.output_dir << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const RunConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_data_blocks(e, c);
  e << YAML::EndMap;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : std::string_view(e.c_str())) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void apply_seed_override(RunConfig& config, const char* env_value, std::ostream& log) {
  if (!env_value) return;
  const std::string text(env_value);
  std::uint64_t seed = 0;
  std::size_t used = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument("sign");
    seed = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    throw ConfigError("HRS_SEED must be a non-negative integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("HRS_SEED must be a non-negative integer, got '" + text + "'");
  log << "*** HRS_SEED=" << seed << " overrides the configured master seed ("
      << (config.seed ? std::to_string(*config.seed) : std::string("unset")) << ") ***\n";
  config.seed = seed;
}

SourceProfile build_profile(const ProfileSpec& p, const std::filesystem::path& base_dir) {
  if (p.type == "zero") return SourceProfile::zero();
  if (p.type == "bump") {
    return SourceProfile::bump(p.exponent, p.support, p.peak, p.smoothness, p.sobolev_bound);
  }
  if (p.type == "modulated_bump") {
    return SourceProfile::modulated_bump(p.exponent, p.frequency, p.phase, p.support, p.peak,
                                         p.smoothness, p.sobolev_bound);
  }
  if (p.type == "tabulated") {
    std::vector<double> nodes = p.nodes;
    std::vector<Complex> values = p.values;
    if (!p.file.empty()) {
      const auto path = base_dir / p.file;
      std::ifstream in(path);
      if (!in) throw SchemaError("cannot read profile file " + path.string());
      read_profile_csv(in, nodes, values);
    }
    return SourceProfile::tabulated(std::move(nodes), std::move(values), p.smoothness.value_or(1),
                                    p.sobolev_bound);
  }
  if (p.type == "combination") {
    std::vector<std::pair<Complex, SourceProfile>> terms;
    for (const auto& t : p.terms) terms.emplace_back(t.coefficient, build_profile(t.profile, base_dir));
    return SourceProfile::combination(std::move(terms));
  }
  throw ConfigError("unknown profile type '" + p.type + "'");
}

SourcePair build_pair(const PairSpec& spec, const std::filesystem::path& base_dir) {
  return {build_profile(spec.mean, base_dir), build_profile(spec.stddev, base_dir)};
}

std::vector<double> simulation_kappas(const RunConfig& c) {
  std::vector<double> out;
  if (c.include_uniform) {
    const auto k = uniform_kappas(c.dkappa, c.band);
    out.insert(out.end(), k.begin(), k.end());
  }
  if (c.include_modes) {
    const auto k = mode_kappas(c.modes);
    out.insert(out.end(), k.begin(), k.end());
  }
  if (c.include_low) {
    const auto k = low_kappas(c.low_spacing);
    out.insert(out.end(), k.begin(), k.end());
  }
  if (out.empty()) throw ConfigError("frequency block enables no wavenumbers");
  return out;
}

SweepConfig to_sweep_config(const RunConfig& c, const std::filesystem::path& base_dir) {
  SweepConfig s;
  s.parameter = c.sweep_parameter;
  s.values = c.sweep_values;
  s.truth = build_pair(c.sources, base_dir);
  s.target = c.target;
  s.grid_cells = c.grid_cells;
  s.dkappa = c.dkappa;
  s.band = c.band;
  s.modes = c.modes;
  s.samples = c.samples;
  s.exact = c.exact;
  s.master_seed = c.seed.value_or(0);
  s.points = c.points;
  s.low_spacing = c.low_spacing;
  s.clamp_variance = c.clamp_variance;
  s.record_timing = c.sweep_timing;
  return s;
}

}  // namespace hrs::cli
