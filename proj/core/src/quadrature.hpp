#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <vector>

namespace nlspec::detail {

struct QuadRule {
  std::vector<double> x, w;
};

// Composite N-point Gauss-Legendre rule on [a, b].
template <unsigned N>
QuadRule gauss_rule(double a, double b, int panels) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  QuadRule q;
  if (!(b > a) || panels < 1) return q;
  const double len = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * len, hw = 0.5 * len;
    for (std::size_t i = 0; i < ab.size(); ++i) {
      if (ab[i] == 0.0) {
        q.x.push_back(c);
        q.w.push_back(hw * wt[i]);
      } else {
        q.x.push_back(c - hw * ab[i]);
        q.w.push_back(hw * wt[i]);
        q.x.push_back(c + hw * ab[i]);
        q.w.push_back(hw * wt[i]);
      }
    }
  }
  return q;
}

}  // namespace nlspec::detail
