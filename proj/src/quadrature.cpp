#include "derivreg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace derivreg {

Quadrature::Quadrature(int nodes_per_panel)
{
  if (nodes_per_panel < 1 || nodes_per_panel > 512) {
    throw std::invalid_argument("quadrature node count must be in 1..512");
  }
  const int n = nodes_per_panel;
  nodes_.resize(n);
  weights_.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; nodes are
  // symmetric so only half are computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1,1] to [0,1].
    nodes_[i] = 0.5 * (1.0 - z);
    nodes_[n - 1 - i] = 0.5 * (1.0 + z);
    weights_[i] = 0.5 * w;
    weights_[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) {
    nodes_[n / 2] = 0.5;
  }
}

QuadratureAxis
make_axis(const Quadrature& q, int coord, std::span<const double> breakpoints,
          const std::function<double(double)>& weight)
{
  QuadratureAxis ax;
  ax.coord = coord;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    if (!(b > a)) {
      continue;
    }
    const double len = b - a;
    for (int i = 0; i < q.nodes(); ++i) {
      const double u = a + len * q.unit_nodes()[i];
      ax.points.push_back(u);
      ax.weights.push_back(q.unit_weights()[i] * len * (weight ? weight(u) : 1.0));
    }
  }
  return ax;
}

} // namespace derivreg
