#include "metapop/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace metapop {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "periodic";
    case Boundary::ZeroOutside: return "zero_outside";
    case Boundary::FrozenFullOutside: return "frozen_full_outside";
  }
  return "?";
}

namespace {

// Offsets +-e_a sorted lexicographically; slot order is fixed so that event
// selection is deterministic.
std::vector<std::array<int, 3>> slot_offsets(int dim) {
  std::vector<std::array<int, 3>> offs;
  for (int a = 0; a < dim; ++a) {
    std::array<int, 3> minus{0, 0, 0}, plus{0, 0, 0};
    minus[static_cast<std::size_t>(a)] = -1;
    plus[static_cast<std::size_t>(a)] = 1;
    offs.push_back(minus);
    offs.push_back(plus);
  }
  std::sort(offs.begin(), offs.end());
  return offs;
}

}  // namespace

LatticeWindow::LatticeWindow(int dimension, std::vector<int> sides, Boundary boundary)
    : dim_(dimension), sides_(std::move(sides)), boundary_(boundary) {
  if (dim_ < 1 || dim_ > 3)
    throw std::invalid_argument("lattice: dimension must be 1, 2 or 3");
  if (static_cast<int>(sides_.size()) != dim_)
    throw std::invalid_argument("lattice: need one side length per dimension");
  std::int64_t count = 1;
  for (int s : sides_) {
    if (s < 2) throw std::invalid_argument("lattice: every side length must be >= 2");
    count *= s;
  }
  if (count > (std::int64_t{1} << 30))
    throw std::invalid_argument("lattice: window too large");
  count_ = static_cast<std::int32_t>(count);

  const auto offs = slot_offsets(dim_);
  neighbors_.resize(static_cast<std::size_t>(count_) * static_cast<std::size_t>(2 * dim_));
  std::vector<int> c(static_cast<std::size_t>(dim_), 0);
  for (std::int32_t idx = 0; idx < count_; ++idx) {
    for (int slot = 0; slot < 2 * dim_; ++slot) {
      std::int32_t target = 0;
      bool outside = false;
      std::int64_t flat = 0;
      for (int a = 0; a < dim_; ++a) {
        int v = c[static_cast<std::size_t>(a)] + offs[static_cast<std::size_t>(slot)][static_cast<std::size_t>(a)];
        const int side = sides_[static_cast<std::size_t>(a)];
        if (v < 0 || v >= side) {
          if (boundary_ == Boundary::Periodic) {
            v = (v + side) % side;
          } else {
            outside = true;
            break;
          }
        }
        flat = flat * side + v;
      }
      target = outside ? kExterior : static_cast<std::int32_t>(flat);
      neighbors_[static_cast<std::size_t>(idx) * static_cast<std::size_t>(2 * dim_) +
                 static_cast<std::size_t>(slot)] = target;
    }
    // advance row-major coordinates
    for (int a = dim_ - 1; a >= 0; --a) {
      if (++c[static_cast<std::size_t>(a)] < sides_[static_cast<std::size_t>(a)]) break;
      c[static_cast<std::size_t>(a)] = 0;
    }
  }
}

std::int32_t LatticeWindow::index_of(const Site& s) const {
  if (static_cast<int>(s.size()) != dim_)
    throw std::invalid_argument("lattice: site has wrong dimension");
  std::int64_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int v = s[static_cast<std::size_t>(a)];
    if (v < 0 || v >= sides_[static_cast<std::size_t>(a)])
      throw std::invalid_argument("lattice: site coordinate out of window");
    flat = flat * sides_[static_cast<std::size_t>(a)] + v;
  }
  return static_cast<std::int32_t>(flat);
}

Site LatticeWindow::coords_of(std::int32_t index) const {
  if (index < 0 || index >= count_)
    throw std::invalid_argument("lattice: site index out of window");
  Site s(static_cast<std::size_t>(dim_), 0);
  std::int64_t rem = index;
  for (int a = dim_ - 1; a >= 0; --a) {
    const int side = sides_[static_cast<std::size_t>(a)];
    s[static_cast<std::size_t>(a)] = static_cast<int>(rem % side);
    rem /= side;
  }
  return s;
}

int LatticeWindow::exterior_slot_count(std::int32_t site) const {
  int n = 0;
  for (int slot = 0; slot < 2 * dim_; ++slot)
    if (neighbor(site, slot) == kExterior) ++n;
  return n;
}

std::vector<NeighborInfo> neighbors(const LatticeWindow& window, const Site& x,
                                    int capacity) {
  const std::int32_t idx = window.index_of(x);
  const int frozen = window.boundary() == Boundary::FrozenFullOutside ? capacity : 0;
  std::vector<NeighborInfo> result;
  result.reserve(static_cast<std::size_t>(window.degree()));
  for (int slot = 0; slot < window.degree(); ++slot) {
    const std::int32_t t = window.neighbor(idx, slot);
    NeighborInfo info;
    if (t == LatticeWindow::kExterior) {
      info.exterior = true;
      info.frozen_count = frozen;
    } else {
      info.site = window.coords_of(t);
    }
    result.push_back(std::move(info));
  }
  return result;
}

InitSpec InitSpec::full_at(int n) {
  InitSpec s;
  s.kind = Kind::FullAt;
  s.count = n;
  return s;
}

InitSpec InitSpec::singleton(Site site, int k) {
  InitSpec s;
  s.kind = Kind::Singleton;
  s.site = std::move(site);
  s.count = k;
  return s;
}

InitSpec InitSpec::explicit_cells(std::vector<std::pair<Site, int>> cells) {
  InitSpec s;
  s.kind = Kind::Explicit;
  s.cells = std::move(cells);
  return s;
}

Configuration make_configuration(const LatticeWindow& window, const InitSpec& init,
                                 std::optional<std::int32_t> capacity) {
  Configuration cfg;
  cfg.capacity = capacity;
  cfg.counts.assign(static_cast<std::size_t>(window.site_count()), 0);
  const auto check = [&](int v) {
    if (v < 0) throw std::invalid_argument("configuration: negative count");
    if (capacity && v > *capacity)
      throw std::invalid_argument("configuration: count exceeds capacity");
  };
  switch (init.kind) {
    case InitSpec::Kind::Empty:
      break;
    case InitSpec::Kind::FullAt:
      check(init.count);
      for (auto& c : cfg.counts) c = init.count;
      break;
    case InitSpec::Kind::Singleton: {
      if (init.count < 1)
        throw std::invalid_argument("configuration: singleton count must be >= 1");
      check(init.count);
      cfg.counts[static_cast<std::size_t>(window.index_of(init.site))] = init.count;
      break;
    }
    case InitSpec::Kind::Explicit:
      for (const auto& [site, v] : init.cells) {
        check(v);
        cfg.counts[static_cast<std::size_t>(window.index_of(site))] = v;
      }
      break;
  }
  return cfg;
}

}  // namespace metapop
