#pragma once

#include "derivreg/core.hpp"
#include "derivreg/functionals.hpp"
#include "derivreg/kernels.hpp"
#include "derivreg/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace derivreg {

//! (1/n) Σ Y_i χ_α(X_i, x) / f_i. `inv_density` holds 1/f̃_i per row, or is
//! empty for a uniform design.
double estimate_psi_rootn(const DataSet& data, const DerivIndex& alpha,
                          std::span<const double> x,
                          std::span<const double> inv_density = {});

struct SmoothingSpec
{
  int p = 0;           // χ acts on coordinates [0, p); the kernel on [p, k)
  double bandwidth = 0.1;
  int order = 2;
  bool edge_correction = true;
};

//! (n h^{k−p})^{-1} Σ Y_i χ_β(X_i^{[p]}, x^{[p]}) K((X_i^{[k−p]} − x^{[k−p]})/h) / f_i.
double estimate_psi_smoothed(const DataSet& data, const DerivIndex& beta,
                             std::span<const double> x, const SmoothingSpec& spec,
                             std::span<const double> inv_density = {});

//! Nadaraya–Watson over all coordinates with the edge-switching product kernel.
//! Throws DomainError when no design point has nonzero weight at x.
double baseline_full_smoother(const DataSet& data, std::span<const double> x,
                              double bandwidth, int order = 2,
                              bool edge_correction = true);

//! σ² ∫ χ_β(u, x1) χ_β(u, x2) / f(u) du; uniform f when `density` is empty.
double limit_covariance(const DerivIndex& beta, std::span<const double> x1,
                        std::span<const double> x2, double sigma2,
                        const std::function<double(std::span<const double>)>& density,
                        const Quadrature& q);

//! ∫ χ_β{w(u,x), x}² / f{w(u,x)} du_1…du_p, with w(u,x) taking u on the
//! first p coordinates and x elsewhere.
double tau_squared(const DerivIndex& beta, int p, std::span<const double> x,
                   const std::function<double(std::span<const double>)>& density,
                   const Quadrature& q);
//! ∫ K² for the (dims)-variate interior product kernel of the given order.
double kernel_roughness_product(int order, int dims);

struct EstimatorOptions
{
  int d = 0;  // smoothing kernel order; 0 picks the smallest even > (k+p)/2
  int d1 = 0; // density kernel order; 0 picks the smallest even > k
  double h_constant = 1.0;
  double H_constant = 1.0;
  double density_floor = 0.05;
  bool estimate_density = true;
  bool edge_correction = true;
};

//! One summand of ĝ: a plan term together with the data that feed it.
struct PlannedTerm
{
  Term term;
  std::string label;
  std::size_t n = 0;
  double bandwidth = 0.0; // 0 when no coordinate is smoothed
};

//! Representation plan plus one dataset per referenced derivative index.
class EstimationPlan
{
public:
  //! Datasets are canonicalized; throws std::invalid_argument naming any
  //! derivative index the plan needs but no dataset supplies.
  EstimationPlan(int k, const DerivIndex& coords, int ell, std::vector<DataSet> datasets,
                 EstimatorOptions options = {});

  int dim() const { return expr_.dim(); }
  int p() const { return expr_.coords().order(); }
  int ell() const { return expr_.ell(); }
  const EstimatorOptions& options() const { return opts_; }
  const TermExpr& expr() const { return expr_; }
  const std::vector<PlannedTerm>& terms() const { return terms_; }
  const DataSet& dataset(const DerivIndex& deriv) const;
  //! 1/f̃ per canonical row; empty for uniform weighting.
  std::span<const double> inverse_density(const DerivIndex& deriv) const;
  //! Density bandwidth used for a dataset (0 when not estimated).
  double density_bandwidth_for(const DerivIndex& deriv) const;
  //! Largest smoothing bandwidth over the terms.
  double max_bandwidth() const;

  //! Contribution of term t at x.
  double term_value(std::size_t t, std::span<const double> x) const;

private:
  TermExpr expr_;
  EstimatorOptions opts_;
  ProductKernel kernel_;
  std::map<std::uint32_t, DataSet> data_;
  std::map<std::uint32_t, std::vector<double>> inv_density_;
  std::map<std::uint32_t, double> density_H_;
  std::vector<PlannedTerm> terms_;
};

struct FitResult
{
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  //! contributions[g][t] for grid point g and plan term t.
  std::vector<std::vector<double>> contributions;
  std::vector<std::string> term_labels;
};

//! values[g] is the sum of contributions[g] in term order.
FitResult fit(const EstimationPlan& plan, const std::vector<std::vector<double>>& points,
              int workers = 1);

//! Tensor grid with `per_axis` points per coordinate spanning [offset, 1−offset].
std::vector<std::vector<double>> make_grid(int k, std::size_t per_axis, double offset);

} // namespace derivreg
