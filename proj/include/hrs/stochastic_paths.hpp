#pragma once

// Reproducible Brownian increments on the spatial grid. Every realization has
// its own counter-based stream keyed by (master_seed, realization_index), so
// realizations can be generated in any order or on any thread.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hrs {

/// Uniform grid x_i = i / cells on [0,1].
class SpatialGrid {
 public:
  explicit SpatialGrid(std::size_t cells);

  std::size_t cells() const noexcept { return cells_; }
  std::size_t node_count() const noexcept { return cells_ + 1; }
  double dx() const noexcept { return 1.0 / static_cast<double>(cells_); }
  double node(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(cells_);
  }
  std::vector<double> nodes() const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  std::size_t cells_;
};

/// Philox4x32-10 block cipher used as a counter-based generator.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter encrypt(Counter counter, Key key) noexcept;
};

/// 64-bit finalizer of splitmix64; a bijection on uint64.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Philox key for one realization stream.
Philox4x32::Key stream_key(std::uint64_t master_seed, std::uint64_t realization_index) noexcept;

/// Standard normal draws of one stream, generated two at a time by Box-Muller
/// from consecutive 64-bit halves of each Philox block. Draw k depends only on
/// (key, k).
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint64_t realization_index) noexcept;

  void fill(std::span<double> out) const noexcept;

 private:
  Philox4x32::Key key_;
};

struct BrownianIncrements {
  SpatialGrid grid{2};
  std::vector<double> dW;
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
};

/// dW_i ~ Normal(0, dx), i = 0..cells-1.
BrownianIncrements sample_increments(const SpatialGrid& grid, std::uint64_t master_seed,
                                     std::uint64_t realization_index);

/// Allocation-free variant used by the ensemble driver; `out.size()` must
/// equal grid.cells().
void sample_increments_into(const SpatialGrid& grid, std::uint64_t master_seed,
                            std::uint64_t realization_index, std::span<double> out);

/// W(x_i) = sum_{j<i} dW_j, with W(0) = 0.
std::vector<double> path_from_increments(const BrownianIncrements& inc);

/// Debug dump: little-endian header (u64 cells, u64 seed, u64 index) followed by
/// `cells` little-endian IEEE-754 doubles.
void write_increments(std::ostream& os, const BrownianIncrements& inc);
BrownianIncrements read_increments(std::istream& is);

}  // namespace hrs
