#pragma once

#include "derivreg/core.hpp"
#include "derivreg/kernels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace derivreg {

//! Leave-one-out product-kernel density of a dataset's design points, with
//! per-coordinate edge switching. Responses are never read.
class DensityEstimator
{
public:
  //! Requires n ≥ 2, order > k, H in (0,1) and floor > 0.
  DensityEstimator(const DataSet& data, int order, double bandwidth,
                   double floor = 0.05, bool edge_correction = true);

  std::size_t size() const { return n_; }
  int dim() const { return k_; }
  int order() const { return kernel_.order(); }
  double bandwidth() const { return H_; }
  double floor() const { return floor_; }

  //! (n−1)^{-1} Σ_{j≠i} H^{-k} L((X_j − x)/H).
  double loo(std::size_t i, std::span<const double> x) const;
  double floored(std::size_t i, std::span<const double> x) const;
  //! floored(i, X_i) for every row, in row order.
  std::vector<double> floored_at_design() const;

private:
  std::size_t n_;
  int k_;
  double H_;
  double floor_;
  ProductKernel kernel_;
  std::vector<double> points_;
  // Row indices sorted by the first coordinate, and those coordinates.
  std::vector<std::size_t> by_first_;
  std::vector<double> first_sorted_;
};

} // namespace derivreg
