#include "hrs/stochastic_paths.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "hrs/errors.hpp"

namespace hrs {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// (0, 1] from the top 53 bits.
inline double open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// [0, 1) from the top 53 bits.
inline double half_open_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  if (!is) throw SchemaError("truncated increments dump");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

SpatialGrid::SpatialGrid(std::size_t cells) : cells_(cells) {
  if (cells < 2) throw DomainError("spatial grid needs at least 2 cells");
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> xs(node_count());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = node(i);
  return xs;
}

Philox4x32::Counter Philox4x32::encrypt(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Philox4x32::Key stream_key(std::uint64_t master_seed, std::uint64_t realization_index) noexcept {
  const std::uint64_t k = mix64(mix64(master_seed) ^ realization_index);
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t realization_index) noexcept
    : key_(stream_key(master_seed, realization_index)) {}

void NormalStream::fill(std::span<double> out) const noexcept {
  const std::size_t n = out.size();
  for (std::size_t pair = 0; 2 * pair < n; ++pair) {
    const auto block = Philox4x32::encrypt(
        {static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32), 0u, 0u}, key_);
    const std::uint64_t a = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    const std::uint64_t b = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    const double radius = std::sqrt(-2.0 * std::log(open_unit(a)));
    const double angle = 2.0 * std::numbers::pi * half_open_unit(b);
    out[2 * pair] = radius * std::cos(angle);
    if (2 * pair + 1 < n) out[2 * pair + 1] = radius * std::sin(angle);
  }
}

void sample_increments_into(const SpatialGrid& grid, std::uint64_t master_seed,
                            std::uint64_t realization_index, std::span<double> out) {
  if (out.size() != grid.cells()) throw DomainError("increment buffer size != grid cells");
  NormalStream(master_seed, realization_index).fill(out);
  const double scale = std::sqrt(grid.dx());
  for (double& v : out) v *= scale;
}

BrownianIncrements sample_increments(const SpatialGrid& grid, std::uint64_t master_seed,
                                     std::uint64_t realization_index) {
  BrownianIncrements inc{grid, std::vector<double>(grid.cells()), master_seed, realization_index};
  sample_increments_into(grid, master_seed, realization_index, inc.dW);
  return inc;
}

std::vector<double> path_from_increments(const BrownianIncrements& inc) {
  std::vector<double> path(inc.dW.size() + 1, 0.0);
  for (std::size_t i = 0; i < inc.dW.size(); ++i) path[i + 1] = path[i] + inc.dW[i];
  return path;
}

void write_increments(std::ostream& os, const BrownianIncrements& inc) {
  put_u64(os, inc.grid.cells());
  put_u64(os, inc.master_seed);
  put_u64(os, inc.realization_index);
  for (double v : inc.dW) put_u64(os, std::bit_cast<std::uint64_t>(v));
}

BrownianIncrements read_increments(std::istream& is) {
  const std::uint64_t cells = get_u64(is);
  BrownianIncrements inc{SpatialGrid(cells), {}, 0, 0};
  inc.master_seed = get_u64(is);
  inc.realization_index = get_u64(is);
  inc.dW.resize(cells);
  for (double& v : inc.dW) v = std::bit_cast<double>(get_u64(is));
  return inc;
}

}  // namespace hrs
