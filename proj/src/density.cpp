#include "derivreg/density.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace derivreg {

DensityEstimator::DensityEstimator(const DataSet& data, int order, double bandwidth,
                                   double floor, bool edge_correction)
  : n_(data.size())
  , k_(data.dim())
  , H_(bandwidth)
  , floor_(floor)
  , kernel_(order, edge_correction)
  , points_(data.points().begin(), data.points().end())
{
  if (n_ < 2) {
    throw std::invalid_argument("leave-one-out density needs n >= 2 (got n=" +
                                std::to_string(n_) + ")");
  }
  if (order <= k_) {
    throw std::invalid_argument("density kernel order d1=" + std::to_string(order) +
                                " must exceed k=" + std::to_string(k_));
  }
  if (!(H_ > 0.0 && H_ < 1.0)) {
    throw std::invalid_argument("density bandwidth must lie in (0,1)");
  }
  if (!(floor_ > 0.0)) {
    throw std::invalid_argument("density floor must be positive");
  }
  by_first_.resize(n_);
  std::iota(by_first_.begin(), by_first_.end(), std::size_t{ 0 });
  std::stable_sort(by_first_.begin(), by_first_.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points_[a * k_] < points_[b * k_];
                   });
  first_sorted_.resize(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    first_sorted_[r] = points_[by_first_[r] * k_];
  }
}

double
DensityEstimator::loo(std::size_t i, std::span<const double> x) const
{
  if (i >= n_) {
    throw std::out_of_range("leave-one-out index out of range");
  }
  if (static_cast<int>(x.size()) != k_) {
    throw std::invalid_argument("density evaluation point has the wrong dimension");
  }
  const auto lo = std::lower_bound(first_sorted_.begin(), first_sorted_.end(), x[0] - H_);
  const auto hi = std::upper_bound(first_sorted_.begin(), first_sorted_.end(), x[0] + H_);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const std::size_t j = by_first_[static_cast<std::size_t>(it - first_sorted_.begin())];
    if (j == i) {
      continue;
    }
    double w = 1.0;
    for (int c = 0; c < k_ && w != 0.0; ++c) {
      w *= kernel_.factor(x[c], (points_[j * k_ + c] - x[c]) / H_, H_);
    }
    sum += w;
  }
  double scale = static_cast<double>(n_ - 1);
  for (int c = 0; c < k_; ++c) {
    scale *= H_;
  }
  return sum / scale;
}

double
DensityEstimator::floored(std::size_t i, std::span<const double> x) const
{
  return std::max(loo(i, x), floor_);
}

std::vector<double>
DensityEstimator::floored_at_design() const
{
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = floored(i, std::span<const double>(points_.data() + i * k_, k_));
  }
  return out;
}

} // namespace derivreg
