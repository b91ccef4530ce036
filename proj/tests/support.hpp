#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace mosaic::test {

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Moments of (Z(x), Z(y)) given N = n, computed by enumerating the 4^n joint
/// placements of x and y relative to each set and building the member lists of
/// every cell from scratch.
struct BruteMoments {
  double mean_x = 0.0;
  double mixed = 0.0;
  double second_x = 0.0;
};

enum class CellKey { injective, constant, max_index };

inline std::vector<std::uint64_t> brute_members(int n, long a, long b, long c, std::uint32_t cell) {
  // shared ids, then per set i an "outside" block of b ids and an "inside" block of a + b ids
  std::vector<std::uint64_t> ids;
  std::uint64_t next = 0;
  for (long k = 0; k < c - n * b; ++k) ids.push_back(next++);
  for (int i = 0; i < n; ++i) {
    const bool inside = (cell >> i) & 1u;
    for (long k = 0; k < b; ++k, ++next)
      if (!inside) ids.push_back(next);
    for (long k = 0; k < a + b; ++k, ++next)
      if (inside) ids.push_back(next);
  }
  return ids;
}

inline BruteMoments brute_moments(int n, long a, long b, long c, CellKey key, double px, double py, double pxy,
                                  double eu, double var_u) {
  const double probs[4] = {1.0 - px - py + pxy, px - pxy, py - pxy, pxy};  // neither, x only, y only, both
  const double eu2 = var_u + eu * eu;
  std::vector<std::vector<std::uint64_t>> members(std::size_t{1} << n);
  for (std::uint32_t cell = 0; cell < members.size(); ++cell) members[cell] = brute_members(n, a, b, c, cell);
  const auto key_of = [&](std::uint32_t cell) -> long {
    switch (key) {
      case CellKey::injective: return cell;
      case CellKey::constant: return 0;
      case CellKey::max_index: {
        long top = 0;
        for (int i = 0; i < n; ++i)
          if ((cell >> i) & 1u) top = i + 1;
        return top;
      }
    }
    return 0;
  };
  BruteMoments out;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  for (std::uint64_t code = 0; code < total; ++code) {
    double w = 1.0;
    std::uint32_t cx = 0, cy = 0;
    std::uint64_t rest = code;
    for (int i = 0; i < n; ++i) {
      const int s = static_cast<int>(rest % 4);
      rest /= 4;
      w *= probs[s];
      if (s == 1 || s == 3) cx |= 1u << i;
      if (s == 2 || s == 3) cy |= 1u << i;
    }
    if (w == 0.0) continue;
    const auto& mx = members[cx];
    const auto& my = members[cy];
    double shared = 0.0;
    if (key_of(cx) == key_of(cy))
      for (auto id : mx) shared += std::count(my.begin(), my.end(), id);
    const double sx = static_cast<double>(mx.size()), sy = static_cast<double>(my.size());
    out.mean_x += w * eu * sx;
    out.mixed += w * (shared * eu2 + (sx * sy - shared) * eu * eu);
    out.second_x += w * (sx * eu2 + (sx * sx - sx) * eu * eu);
  }
  return out;
}

}  // namespace mosaic::test
