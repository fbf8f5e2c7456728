#pragma once

#include <random>
#include <type_traits>

namespace heis {

template <typename Rng>
GroupElement sample_member(const SubgroupKind& L, Rng& rng, int lattice_window,
                           double continuous_window) {
  std::uniform_int_distribution<int> lattice(-lattice_window, lattice_window);
  std::uniform_real_distribution<double> real(-continuous_window, continuous_window);
  auto zp = [&](int p) { return p == 0 ? 0.0 : static_cast<double>(lattice(rng)); };

  return std::visit(
      [&](const auto& kind) -> GroupElement {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, Dim2>) {
          const double x = real(rng);
          const double y = zp(kind.p);
          return {x, y, real(rng)};
        } else if constexpr (std::is_same_v<K, LatticeCylinder>) {
          const double x = kind.k >= 1 ? lattice(rng) : 0.0;
          const double y = kind.k >= 2 ? lattice(rng) : 0.0;
          return {x, y, real(rng)};
        } else if constexpr (std::is_same_v<K, LineTimesLattice>) {
          const double x = real(rng);
          return {x, 0.0, zp(kind.p)};
        } else if constexpr (std::is_same_v<K, DiscreteLine>) {
          const double x = lattice(rng);
          return {x, 0.0, zp(kind.p)};
        } else if constexpr (std::is_same_v<K, CenterLattice>) {
          return {0.0, 0.0, static_cast<double>(lattice(rng))};
        } else {
          const double x = lattice(rng);
          const double y = lattice(rng);
          return {x, y, lattice(rng) / static_cast<double>(kind.p)};
        }
      },
      L);
}

}  // namespace heis
