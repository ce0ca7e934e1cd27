#pragma once

#include <cmath>
#include <vector>

namespace nlspec {

// Symmetric cell-centred grid: nodes j·h for |j| <= half, cells of width h,
// so the covered interval is [-(half+1/2)h, (half+1/2)h].
struct Grid1D {
  double h = 0.0;
  int half = 0;

  int size() const { return 2 * half + 1; }
  double node(int i) const { return (i - half) * h; }
  double half_width() const { return (half + 0.5) * h; }
  double weight() const { return h; }
  std::vector<double> nodes() const {
    std::vector<double> z(size());
    for (int i = 0; i < size(); ++i) z[i] = node(i);
    return z;
  }

  // Grid on [-width, width] whose spacing is as close as possible to target_h.
  static Grid1D fitted(double width, double target_h) {
    int J = static_cast<int>(std::lround(width / target_h - 0.5));
    if (J < 1) J = 1;
    return Grid1D{width / (J + 0.5), J};
  }
};

// Cell-centred rectangle [x0, x0 + nx·hx] × [y0, y0 + ny·hy].
struct RectGrid {
  double x0 = 0, y0 = 0, hx = 0, hy = 0;
  int nx = 0, ny = 0;

  int size() const { return nx * ny; }
  double x(int i) const { return x0 + (i + 0.5) * hx; }
  double y(int j) const { return y0 + (j + 0.5) * hy; }
  double cell_area() const { return hx * hy; }
  int index(int i, int j) const { return i * ny + j; }
  double area() const { return nx * hx * ny * hy; }
};

}  // namespace nlspec
