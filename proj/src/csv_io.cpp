#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "hrs/cli_io.hpp"
#include "hrs/errors.hpp"

namespace hrs::cli {

namespace {

constexpr std::string_view kStatsColumns[] = {"kappa",    "M",        "re_mean0", "im_mean0",
                                              "re_mean1", "im_mean1", "re_pvar0", "im_pvar0",
                                              "re_pvar1", "im_pvar1"};
constexpr std::string_view kSpectrumColumns[] = {"xi", "re_val", "im_val"};
constexpr std::string_view kReconstructionColumns[] = {"x", "re_f", "im_f"};
constexpr std::string_view kSweepColumns[] = {"param_name", "param_value", "l2_error", "eps1",
                                              "eps2",       "eps3",        "eps4",     "wall_ms"};
constexpr std::string_view kVerifyColumns[] = {"check_name", "lhs", "rhs", "holds"};
constexpr std::string_view kProfileColumns[] = {"x", "Re", "Im"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <std::size_t N>
std::string joined(const std::string_view (&cols)[N]) {
  std::string s;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ",";
    s += cols[i];
  }
  return s;
}

void write_header(std::ostream& os, std::string_view kind, const std::string& hash,
                  std::string_view columns) {
  os << "# hrs-" << kind << " v1 config=" << hash << "\n" << columns << "\n";
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++line_no_;
      if (!trim(line).empty()) return true;
    }
    return false;
  }
  int line() const { return line_no_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError(fmt::format("line {}: {}", line_no_, msg));
  }

  CsvHeader header(std::string_view kind) {
    std::string line;
    if (!next(line)) fail("empty file");
    const std::string prefix = fmt::format("# hrs-{} v", kind);
    const auto t = trim(line);
    if (t.substr(0, prefix.size()) != prefix) {
      fail(fmt::format("expected header '# hrs-{} v1 config=<hash>'", kind));
    }
    CsvHeader h;
    h.kind = std::string(kind);
    auto rest = t.substr(prefix.size());
    const auto space = rest.find(' ');
    const auto version = rest.substr(0, space);
    if (std::from_chars(version.data(), version.data() + version.size(), h.version).ec !=
            std::errc{} ||
        h.version != 1) {
      fail(fmt::format("unsupported schema version '{}'", version));
    }
    const std::string_view tag = "config=";
    if (space == std::string_view::npos) fail("header lacks the config hash");
    rest = trim(rest.substr(space + 1));
    if (rest.substr(0, tag.size()) != tag) fail("header lacks the config hash");
    h.hash = std::string(rest.substr(tag.size()));
    return h;
  }

  template <std::size_t N>
  void columns(const std::string_view (&expected)[N]) {
    std::string line;
    if (!next(line)) fail("missing column line");
    const auto got = split(line);
    bool ok = got.size() == N;
    for (std::size_t i = 0; ok && i < N; ++i) ok = got[i] == expected[i];
    if (!ok) fail(fmt::format("expected columns {}; got {}", joined(expected), trim(line)));
  }

  template <std::size_t N>
  bool row(std::string& storage, std::vector<std::string_view>& fields) {
    if (!next(storage)) return false;
    fields = split(storage);
    if (fields.size() != N) fail(fmt::format("expected {} fields, got {}", N, fields.size()));
    return true;
  }

  double number(std::string_view s) const {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      fail(fmt::format("'{}' is not a number", s));
    }
    return v;
  }

  std::uint64_t count(std::string_view s) const {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      fail(fmt::format("'{}' is not a sample count", s));
    }
    return v;
  }

 private:
  std::istream& is_;
  int line_no_ = 0;
};

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_stats_csv(std::ostream& os, const StatsDataset& stats, const std::string& hash) {
  write_header(os, "stats", hash, joined(kStatsColumns));
  for (const auto& s : stats) {
    os << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                      s.kappa, s.exact ? 0 : s.count, s.mean0.real(), s.mean0.imag(),
                      s.mean1.real(), s.mean1.imag(), s.pvar0.real(), s.pvar0.imag(),
                      s.pvar1.real(), s.pvar1.imag());
  }
}

StatsDataset read_stats_csv(std::istream& is, CsvHeader* header) {
  Reader r(is);
  const auto h = r.header("stats");
  if (header) *header = h;
  r.columns(kStatsColumns);
  StatsDataset out;
  std::string line;
  std::vector<std::string_view> f;
  while (r.row<10>(line, f)) {
    BoundaryStats s;
    s.kappa = r.number(f[0]);
    if (!(s.kappa > 0.0)) r.fail("kappa must be positive");
    s.count = r.count(f[1]);
    s.exact = s.count == 0;
    s.mean0 = {r.number(f[2]), r.number(f[3])};
    s.mean1 = {r.number(f[4]), r.number(f[5])};
    s.pvar0 = {r.number(f[6]), r.number(f[7])};
    s.pvar1 = {r.number(f[8]), r.number(f[9])};
    out.push_back(s);
  }
  return out;
}

void write_spectrum_csv(std::ostream& os, std::span<const double> xi,
                        std::span<const Complex> values, const std::string& hash) {
  write_header(os, "spectrum", hash, joined(kSpectrumColumns));
  for (std::size_t i = 0; i < xi.size(); ++i) {
    os << fmt::format("{:.17g},{:.17g},{:.17g}\n", xi[i], values[i].real(), values[i].imag());
  }
}

void write_reconstruction_csv(std::ostream& os, const ReconstructionResult& result,
                              const std::string& hash) {
  write_header(os, "reconstruction", hash, joined(kReconstructionColumns));
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    os << fmt::format("{:.17g},{:.17g},{:.17g}\n", result.x[i], result.values[i].real(),
                      result.values[i].imag());
  }
}

ReconstructionResult read_reconstruction_csv(std::istream& is, CsvHeader* header) {
  Reader r(is);
  const auto h = r.header("reconstruction");
  if (header) *header = h;
  r.columns(kReconstructionColumns);
  ReconstructionResult out;
  std::string line;
  std::vector<std::string_view> f;
  while (r.row<3>(line, f)) {
    out.x.push_back(r.number(f[0]));
    out.values.emplace_back(r.number(f[1]), r.number(f[2]));
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& hash) {
  write_header(os, "sweep", hash, joined(kSweepColumns));
  for (const auto& row : rows) {
    os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.parameter,
                      row.value, row.l2_error, row.eps.eps1, row.eps.eps2, row.eps.eps3,
                      row.eps.eps4, row.wall_ms);
  }
}

void write_verify_csv(std::ostream& os, const std::vector<CheckReport>& checks,
                      const std::string& hash) {
  write_header(os, "verify", hash, joined(kVerifyColumns));
  for (const auto& c : checks) {
    os << fmt::format("{},{:.17g},{:.17g},{}\n", c.name, c.lhs, c.rhs, c.holds ? "true" : "false");
  }
}

void read_profile_csv(std::istream& is, std::vector<double>& nodes, std::vector<Complex>& values) {
  nodes.clear();
  values.clear();
  Reader r(is);
  std::string line;
  // Leading comment lines are allowed.
  for (;;) {
    if (!r.next(line)) r.fail("missing column line");
    if (trim(line).front() != '#') break;
  }
  const auto got = split(line);
  if (got.size() != 3 || got[0] != "x" || got[1] != "Re" || got[2] != "Im") {
    r.fail(fmt::format("expected columns {}; got {}", joined(kProfileColumns), trim(line)));
  }
  std::vector<std::string_view> f;
  while (r.row<3>(line, f)) {
    nodes.push_back(r.number(f[0]));
    values.emplace_back(r.number(f[1]), r.number(f[2]));
  }
  if (nodes.size() < 2) r.fail("a tabulated profile needs at least 2 rows");
}

void write_profile_csv(std::ostream& os, std::span<const double> x, std::span<const Complex> v) {
  os << "# hrs-profile v1\n" << joined(kProfileColumns) << "\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << fmt::format("{:.17g},{:.17g},{:.17g}\n", x[i], v[i].real(), v[i].imag());
  }
}

}  // namespace hrs::cli
