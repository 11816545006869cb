#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace offdiag {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 4;

  double spacing() const { return (hi - lo) / (n - 1); }
  double node(int i) const { return i == n - 1 ? hi : lo + i * spacing(); }
};

/// Sampling lattice over (x1, x2, t). At least 4 points per axis.
struct Grid3 {
  Axis x1, x2, t;

  Grid3() = default;
  Grid3(Axis a1, Axis a2, Axis at);

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(x1.n) * x2.n * t.n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * x2.n + j) * t.n + k;
  }
  std::array<double, 3> point(int i, int j, int k) const { return {x1.node(i), x2.node(j), t.node(k)}; }
};

/// Scalar samples on a Grid3, t fastest.
struct Field3 {
  Grid3 grid;
  std::vector<double> v;

  explicit Field3(const Grid3& g) : grid(g), v(g.size(), 0.0) {}
  double& at(int i, int j, int k) { return v[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace offdiag
