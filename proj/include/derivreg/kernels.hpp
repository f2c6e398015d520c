#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace derivreg {

enum class KernelSupport
{
  interior,   // [-1, 1]
  left_edge,  // [0, 1]
  right_edge, // [-1, 0]
};

enum class EdgeSide
{
  left,
  right
};

//! Univariate polynomial kernel κ(t) = q(t)·w(t) on its support, where
//! w(t) = 1 − t² (interior) or t(1 − t) (left edge; mirrored for the right).
//! q is chosen so that ∫ t^j κ(t) dt = δ_{j0} for j < order.
class KernelSpec
{
public:
  int order() const { return order_; }
  KernelSupport support() const { return support_; }
  double lower() const { return support_ == KernelSupport::left_edge ? 0.0 : -1.0; }
  double upper() const { return support_ == KernelSupport::right_edge ? 0.0 : 1.0; }
  //! Coefficients of q in ascending powers (in the left-edge variable for
  //! edge kernels).
  std::span<const double> coefficients() const { return q_; }
  //! sup |κ| over the support, from a dense scan.
  double sup_abs() const { return sup_abs_; }

  double operator()(double t) const;

private:
  friend KernelSpec make_interior_kernel(int order);
  friend KernelSpec make_edge_kernel(int order, EdgeSide side);

  int order_ = 0;
  KernelSupport support_ = KernelSupport::interior;
  std::vector<double> q_;
  double sup_abs_ = 0.0;
};

//! Odd orders are rounded up to the next even order (with a warning on
//! std::clog).
KernelSpec make_interior_kernel(int order);
KernelSpec make_edge_kernel(int order, EdgeSide side);

//! ∫ t^j κ(t) dt by Gauss–Legendre, exact for the polynomial integrand.
double kernel_moment(const KernelSpec& spec, int j);

//! ∫ κ(t)² dt.
double kernel_roughness(const KernelSpec& spec);

//! Product of univariate kernels of one order, switching each coordinate to
//! an edge kernel when the evaluation point is within one bandwidth of a face.
//! Offsets are u = (X − x) / h, so the left-edge kernel looks into the cube.
class ProductKernel
{
public:
  explicit ProductKernel(int order, bool edge_correction = true);

  int order() const { return interior_.order(); }
  bool edge_correction() const { return edge_correction_; }
  KernelSupport select(double x, double bandwidth) const;
  const KernelSpec& spec(KernelSupport s) const;

  //! Univariate factor for one coordinate.
  double factor(double x, double u, double bandwidth) const
  {
    return spec(select(x, bandwidth))(u);
  }
  //! Π_i κ_{sel(x_i)}(u_i).
  double eval(std::span<const double> x, std::span<const double> u,
              double bandwidth) const;

private:
  KernelSpec interior_;
  KernelSpec left_;
  KernelSpec right_;
  bool edge_correction_;
};

//! h(n) = constant · n^{-1/exponent_denominator}.
struct BandwidthPlan
{
  double constant = 1.0;
  int exponent_denominator = 1;

  double operator()(std::size_t n) const;
};

//! Smoothing over `free_dims` coordinates with an order-d kernel:
//! denominator 2d + free_dims.
BandwidthPlan smoothing_bandwidth(int d, int free_dims, double constant = 1.0);

//! Density bandwidth inside the admissible window:
//! constant · min{n^{-1/(2 d1)}, n^{-1/(2d + k − p)}} · n^{-eta}.
double density_bandwidth(std::size_t n, int d, int d1, int k, int p,
                         double constant = 1.0, double eta = 0.01);

//! Throws std::invalid_argument unless d > (k + p)/2 and d1 > k.
void check_order_conditions(int d, int d1, int k, int p);

//! Smallest even order strictly above `bound` (at least 2).
int smallest_even_above(double bound);

} // namespace derivreg
