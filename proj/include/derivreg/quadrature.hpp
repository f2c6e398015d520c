#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace derivreg {

//! Gauss–Legendre rule mapped onto [0,1]; applied panel by panel.
class Quadrature
{
public:
  explicit Quadrature(int nodes_per_panel = 32);

  int nodes() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> unit_nodes() const { return nodes_; }
  std::span<const double> unit_weights() const { return weights_; }

  //! ∫_a^b f over a single panel.
  template<class F>
  double integrate(F&& f, double a, double b) const
  {
    const double len = b - a;
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      s += weights_[i] * f(a + len * nodes_[i]);
    }
    return s * len;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

//! One integrated coordinate: abscissae and weights (weight function folded in).
struct QuadratureAxis
{
  int coord = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

//! Panels between consecutive breakpoints (empty panels are skipped);
//! `weight(u)` multiplies each quadrature weight.
QuadratureAxis make_axis(const Quadrature& q, int coord,
                         std::span<const double> breakpoints,
                         const std::function<double(double)>& weight);

//! Tensor-product sum over `axes`; coordinates not on an axis keep their
//! value from `base`.
template<class F>
double
integrate_tensor(std::span<const QuadratureAxis> axes, std::vector<double> base,
                 F&& f)
{
  if (axes.empty()) {
    return f(std::span<const double>(base));
  }
  for (const auto& ax : axes) {
    if (ax.points.empty()) {
      return 0.0;
    }
  }
  const std::size_t m = axes.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> partial_w(m + 1, 1.0);
  for (std::size_t a = 0; a < m; ++a) {
    base[axes[a].coord] = axes[a].points[0];
    partial_w[a + 1] = partial_w[a] * axes[a].weights[0];
  }
  double total = 0.0;
  while (true) {
    total += partial_w[m] * f(std::span<const double>(base));
    // Advance the odometer from the innermost axis.
    std::size_t a = m;
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].points.size()) {
        break;
      }
      idx[a] = 0;
      if (a == 0) {
        return total;
      }
    }
    for (std::size_t b = a; b < m; ++b) {
      base[axes[b].coord] = axes[b].points[idx[b]];
      partial_w[b + 1] = partial_w[b] * axes[b].weights[idx[b]];
    }
  }
}

} // namespace derivreg
