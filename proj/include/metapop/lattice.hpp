#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metapop {

// Boundary semantics of a finite window standing in for the infinite lattice.
//   Periodic           - coordinates wrap
//   ZeroOutside        - exterior sites permanently hold 0 individuals
//   FrozenFullOutside  - exterior sites permanently hold N individuals
enum class Boundary { Periodic, ZeroOutside, FrozenFullOutside };

std::string to_string(Boundary b);

using Site = std::vector<int>;  // d coordinates, 0-based window coordinates

// Finite d-dimensional hypercubic window (d in {1,2,3}, every side >= 2).
// Sites are indexed row-major; iteration by index is lexicographic in the
// coordinates. Immutable after construction and safe to share across threads.
class LatticeWindow {
 public:
  static constexpr std::int32_t kExterior = -1;

  LatticeWindow(int dimension, std::vector<int> sides, Boundary boundary);

  int dimension() const { return dim_; }
  const std::vector<int>& sides() const { return sides_; }
  Boundary boundary() const { return boundary_; }
  std::int32_t site_count() const { return count_; }
  int degree() const { return 2 * dim_; }  // neighbor slots per site

  std::int32_t index_of(const Site& s) const;  // throws on out-of-window coords
  Site coords_of(std::int32_t index) const;

  // Target of neighbor slot `slot` (0..2d-1) of `site`: an interior index or
  // kExterior. Slots enumerate the offsets +-e_a in lexicographic order of the
  // offset vector, e.g. d=2: (-1,0), (0,-1), (0,1), (1,0).
  std::int32_t neighbor(std::int32_t site, int slot) const {
    return neighbors_[static_cast<std::size_t>(site) * static_cast<std::size_t>(2 * dim_) +
                      static_cast<std::size_t>(slot)];
  }

  int exterior_slot_count(std::int32_t site) const;

 private:
  int dim_;
  std::vector<int> sides_;
  Boundary boundary_;
  std::int32_t count_;
  std::vector<std::int32_t> neighbors_;  // site_count * 2d
};

struct NeighborInfo {
  bool exterior = false;
  Site site;             // resolved coordinates when interior
  int frozen_count = 0;  // occupancy a pseudo-site permanently holds
};

// The 2d neighbors of x. Under Periodic all are interior; under the other
// modes exterior slots appear as pseudo-sites carrying their frozen occupancy
// (0, or `capacity` for FrozenFullOutside).
std::vector<NeighborInfo> neighbors(const LatticeWindow& window, const Site& x,
                                    int capacity = 0);

// Per-site occupancy counts, optionally bounded by a capacity.
struct Configuration {
  std::vector<std::int32_t> counts;
  std::optional<std::int32_t> capacity;

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  bool operator==(const Configuration&) const = default;
};

struct InitSpec {
  enum class Kind { Empty, FullAt, Singleton, Explicit };
  Kind kind = Kind::Empty;
  int count = 0;                                  // FullAt / Singleton
  Site site;                                      // Singleton
  std::vector<std::pair<Site, int>> cells;        // Explicit

  static InitSpec empty() { return {}; }
  static InitSpec full_at(int n);
  static InitSpec singleton(Site s, int k);
  static InitSpec explicit_cells(std::vector<std::pair<Site, int>> cells);
};

// Builds a configuration on `window` from an initializer, recording and
// enforcing `capacity` when given.
Configuration make_configuration(const LatticeWindow& window, const InitSpec& init,
                                 std::optional<std::int32_t> capacity = std::nullopt);

}  // namespace metapop
