#pragma once

#include "derivreg/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace derivreg {

//! Cobb–Douglas average-cost / average-labor generator. Q and w/r are
//! uniform on [0.5,1.5]; r is uniform on [r_low, r_high] or fixed at 1.
struct CobbDouglasConfig
{
  double c1 = 0.8;
  double c2 = 0.7;
  double c = 1.34;
  double sigma = 0.35;
  double rho = 0.0;
  std::size_t n = 100;
  std::uint64_t seed = 42;
  bool random_r = true;
  double r_low = 0.5;
  double r_high = 1.5;

  //! Throws std::invalid_argument on c1, c2, c ≤ 0, σ < 0, |ρ| > 1 or n = 0.
  void validate() const;
  double c_tilde() const;
  //! AC = r · c̃ · Q^{(1−c1−c2)/(c1+c2)} · s^{c2/(c1+c2)}, s = w/r.
  double average_cost(double q, double s, double r) const;
  //! AL = ∂AC/∂w = (c2/(c1+c2)) · c̃ · Q^{(1−c1−c2)/(c1+c2)} · s^{−c1/(c1+c2)}.
  double average_labor(double q, double s) const;
};

struct CobbDouglasSample
{
  std::vector<double> q;
  std::vector<double> s; // w / r
  std::vector<double> r;
  std::vector<double> y_ac;
  std::vector<double> y_al;
  std::vector<double> ac;
  std::vector<double> al;

  std::size_t size() const { return q.size(); }
  //! (Q − 0.5, s − 0.5) in [0,1]² with y_ac / r (deriv (0,0)) and y_al
  //! (deriv (0,1)); the unit map has scale 1 so AL needs no rescaling.
  DataSet ac_dataset() const;
  DataSet al_dataset() const;
};

//! Streams: (seed, [replication, 0]) design, [.., 1] and [.., 2] the two
//! standard normals; ε_AL = σ(ρ z1 + √(1−ρ²) z2).
CobbDouglasSample generate(const CobbDouglasConfig& cfg, std::uint64_t replication = 0);

//! Derivative-based AC estimator: boxcar window |Q_j − Q| ≤ h/2 in Q, the
//! AL responses summed over w_j/r_j ≤ w/r, then a boxcar pass over the AC
//! residuals.
class BoxcarAcEstimator
{
public:
  BoxcarAcEstimator(const CobbDouglasSample& sample, double h);

  double bandwidth() const { return h_; }
  //! r/(nh) Σ_{window, s_j ≤ s} y_AL,j.
  double g_a(double q, double s, double r) const;
  //! r/(nh) Σ_{window} (y_AC,j − ĝ_a(Q_j, s_j, r_j)) / r_j.
  double g_b(double q, double r) const;
  double estimate(double q, double s, double r) const { return g_a(q, s, r) + g_b(q, r); }
  //! Estimate at every sample point, in sample order.
  std::vector<double> in_sample() const;

private:
  std::pair<std::size_t, std::size_t> window(double q) const;

  const CobbDouglasSample& sample_;
  double h_;
  std::vector<std::size_t> order_; // sample indices sorted by Q
  std::vector<double> q_sorted_;
  std::vector<double> resid_prefix_; // prefix sums of (y_AC − ĝ_a)/r in Q order
};

double deriv_ac_estimator(const CobbDouglasSample& sample, double q, double s, double r,
                          double h);

//! Bivariate boxcar reference: r/(n h²) Σ_{|ΔQ|≤h/2, |Δs|≤h/2} y_AC,j / r_j.
double boxcar_reference(const CobbDouglasSample& sample, double q, double s, double r,
                        double h);
std::vector<double> boxcar_reference_in_sample(const CobbDouglasSample& sample,
                                               double h);

struct Table1Config
{
  CobbDouglasConfig model;
  std::vector<std::size_t> ns{ 100, 200, 500, 1000 };
  std::vector<double> rhos{ 0.0, 0.4, 0.9 };
  std::size_t reps = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
  //! h = constant · n^{-1/denominator} on the raw Q scale.
  double h_constant = 1.0;
  int h_denominator = 5;
  double baseline_constant = 1.0;
  int baseline_denominator = 6;
  double trim_low = 0.6;
  double trim_high = 1.4;
  bool keep_replications = false;

  void validate() const;
};

struct ReplicationRecord
{
  std::size_t n = 0;
  double rho = 0.0;
  std::size_t replication = 0;
  double mse_deriv = 0.0;
  double mse_baseline = 0.0;
};

struct McCell
{
  std::size_t n = 0;
  double rho = 0.0;
  double mse_deriv = 0.0;
  double mse_baseline = 0.0;
  double ratio = 0.0;
  std::size_t reps = 0;
  double ratio_se = 0.0;
};

struct McResult
{
  std::vector<McCell> cells;
  std::vector<ReplicationRecord> replications;
};

McResult run_table1(const Table1Config& cfg);

//! Ratio of means with a delta-method standard error.
struct RatioEstimate
{
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double se = 0.0;
};
RatioEstimate ratio_of_means(std::span<const double> a, std::span<const double> b);

struct RateConfig
{
  int k = 2;
  int p = 2;
  int d = 2;
  std::vector<std::size_t> ns{ 250, 500, 1000, 2000, 4000, 8000 };
  std::size_t reps = 200;
  std::uint64_t seed = 42;
  double sigma = 0.5;
  double h_constant = 1.0;
  std::size_t grid_per_axis = 5;
  int workers = 1;

  void validate() const;
};

struct RatePoint
{
  std::size_t n = 0;
  double mse = 0.0;
  double mse_se = 0.0;
  double bandwidth = 0.0;
};

struct RateResult
{
  std::vector<RatePoint> points;
  double slope = 0.0;
  double slope_se = 0.0;
  double expected_slope = 0.0;
  double grid_offset = 0.0;
};

//! g(x) = sin(1 + Σ c_i x_i) with c = (0.9, 0.7, 0.5, …) and exact partials.
TestFunction rate_test_function(int k);

//! p = k: root-n ψ expansion; 0 < p < k: ψ expansion over the first p
//! coordinates smoothed over the rest; p = 0: full-dimensional smoother.
//! Uniform designs, so densities are taken as known.
RateResult rate_experiment(const RateConfig& cfg);

struct R2Result
{
  double ac = 0.0;
  double al = 0.0;
};
//! 1 − var(ε)/var(y) per equation from one sample of size n.
R2Result r2_check(const CobbDouglasConfig& cfg, std::size_t n);

} // namespace derivreg
