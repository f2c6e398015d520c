#include "derivreg/kernels.hpp"

#include "derivreg/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace derivreg {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// ∫ t^n w(t) dt over the support of the weight.
long double
weight_moment(KernelSupport family, int n)
{
  if (family == KernelSupport::interior) {
    if (n % 2 == 1) {
      return 0.0L;
    }
    return 2.0L / (n + 1) - 2.0L / (n + 3);
  }
  return 1.0L / (n + 2) - 1.0L / (n + 3);
}

std::vector<double>
solve_moment_system(KernelSupport family, int order)
{
  LongMatrix m(order, order);
  for (int j = 0; j < order; ++j) {
    for (int c = 0; c < order; ++c) {
      m(j, c) = weight_moment(family, j + c);
    }
  }
  LongVector rhs = LongVector::Zero(order);
  rhs(0) = 1.0L;
  Eigen::FullPivLU<LongMatrix> lu(m);
  if (!lu.isInvertible()) {
    throw std::logic_error("kernel moment system is singular for order " +
                           std::to_string(order));
  }
  LongVector sol = lu.solve(rhs);
  std::vector<double> q(order);
  for (int c = 0; c < order; ++c) {
    q[c] = static_cast<double>(sol(c));
  }
  return q;
}

double
horner(std::span<const double> q, double t)
{
  double v = 0.0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) {
    v = v * t + *it;
  }
  return v;
}

double
scan_sup(const KernelSpec& k)
{
  double best = 0.0;
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i) {
    const double t = k.lower() + (k.upper() - k.lower()) * i / steps;
    best = std::max(best, std::abs(k(t)));
  }
  return best;
}

} // namespace

double
KernelSpec::operator()(double t) const
{
  switch (support_) {
    case KernelSupport::interior:
      if (t < -1.0 || t > 1.0) {
        return 0.0;
      }
      return horner(q_, t) * (1.0 - t) * (1.0 + t);
    case KernelSupport::left_edge:
      if (t < 0.0 || t > 1.0) {
        return 0.0;
      }
      return horner(q_, t) * t * (1.0 - t);
    case KernelSupport::right_edge:
      if (t < -1.0 || t > 0.0) {
        return 0.0;
      }
      return horner(q_, -t) * (-t) * (1.0 + t);
  }
  return 0.0;
}

KernelSpec
make_interior_kernel(int order)
{
  if (order < 2) {
    throw std::invalid_argument("interior kernel order must be >= 2");
  }
  if (order % 2 == 1) {
    std::clog << "warning: interior kernel order " << order
              << " is odd; using order " << order + 1 << '\n';
    ++order;
  }
  KernelSpec k;
  k.order_ = order;
  k.support_ = KernelSupport::interior;
  k.q_ = solve_moment_system(KernelSupport::interior, order);
  k.sup_abs_ = scan_sup(k);
  return k;
}

KernelSpec
make_edge_kernel(int order, EdgeSide side)
{
  if (order < 1) {
    throw std::invalid_argument("edge kernel order must be >= 1");
  }
  KernelSpec k;
  k.order_ = order;
  k.support_ = side == EdgeSide::left ? KernelSupport::left_edge
                                      : KernelSupport::right_edge;
  k.q_ = solve_moment_system(KernelSupport::left_edge, order);
  k.sup_abs_ = scan_sup(k);
  return k;
}

double
kernel_moment(const KernelSpec& spec, int j)
{
  if (j < 0) {
    throw std::invalid_argument("moment index must be non-negative");
  }
  // Integrand degree: j + (order − 1) + 2.
  const int degree = j + spec.order() + 1;
  const Quadrature q(degree / 2 + 1);
  return q.integrate([&](double t) { return std::pow(t, j) * spec(t); },
                     spec.lower(), spec.upper());
}

double
kernel_roughness(const KernelSpec& spec)
{
  const int degree = 2 * (spec.order() + 1);
  const Quadrature q(degree / 2 + 1);
  return q.integrate([&](double t) { return spec(t) * spec(t); }, spec.lower(),
                     spec.upper());
}

// ---------------------------------------------------------------------------

ProductKernel::ProductKernel(int order, bool edge_correction)
  : interior_(make_interior_kernel(order))
  , left_(make_edge_kernel(interior_.order(), EdgeSide::left))
  , right_(make_edge_kernel(interior_.order(), EdgeSide::right))
  , edge_correction_(edge_correction)
{}

KernelSupport
ProductKernel::select(double x, double bandwidth) const
{
  if (!edge_correction_ || (x >= bandwidth && x <= 1.0 - bandwidth)) {
    return KernelSupport::interior;
  }
  const bool near_left = x < bandwidth;
  const bool near_right = x > 1.0 - bandwidth;
  if (near_left && near_right) {
    return x <= 1.0 - x ? KernelSupport::left_edge : KernelSupport::right_edge;
  }
  return near_left ? KernelSupport::left_edge : KernelSupport::right_edge;
}

const KernelSpec&
ProductKernel::spec(KernelSupport s) const
{
  switch (s) {
    case KernelSupport::left_edge:
      return left_;
    case KernelSupport::right_edge:
      return right_;
    default:
      return interior_;
  }
}

double
ProductKernel::eval(std::span<const double> x, std::span<const double> u,
                    double bandwidth) const
{
  if (x.size() != u.size()) {
    throw std::invalid_argument("product kernel: dimension mismatch");
  }
  double v = 1.0;
  for (std::size_t i = 0; i < x.size() && v != 0.0; ++i) {
    v *= factor(x[i], u[i], bandwidth);
  }
  return v;
}

// ---------------------------------------------------------------------------

double
BandwidthPlan::operator()(std::size_t n) const
{
  if (n == 0) {
    throw std::invalid_argument("bandwidth plan needs n >= 1");
  }
  return constant * std::pow(static_cast<double>(n), -1.0 / exponent_denominator);
}

BandwidthPlan
smoothing_bandwidth(int d, int free_dims, double constant)
{
  if (constant <= 0.0) {
    throw std::invalid_argument("bandwidth constant must be positive");
  }
  return BandwidthPlan{ constant, 2 * d + free_dims };
}

double
density_bandwidth(std::size_t n, int d, int d1, int k, int p, double constant,
                  double eta)
{
  if (constant <= 0.0) {
    throw std::invalid_argument("density bandwidth constant must be positive");
  }
  const double nn = static_cast<double>(n);
  const double rate = std::min(std::pow(nn, -1.0 / (2.0 * d1)),
                               std::pow(nn, -1.0 / (2.0 * d + k - p)));
  return constant * rate * std::pow(nn, -eta);
}

void
check_order_conditions(int d, int d1, int k, int p)
{
  if (!(2 * d > k + p)) {
    throw std::invalid_argument(
      "kernel order d=" + std::to_string(d) + " must exceed (k+p)/2 = " +
      std::to_string(0.5 * (k + p)));
  }
  if (!(d1 > k)) {
    throw std::invalid_argument("density kernel order d1=" + std::to_string(d1) +
                                " must exceed k=" + std::to_string(k));
  }
}

int
smallest_even_above(double bound)
{
  int d = 2;
  while (!(d > bound)) {
    d += 2;
  }
  return d;
}

} // namespace derivreg
